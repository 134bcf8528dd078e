use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Arbitrary precision rational, the coefficient field everywhere.
pub type Scalar = BigRational;

/// Integer as a scalar.
pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

/// `num / den` as a scalar.  Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

/// `n!` as a big integer.
pub fn factorial(n: u32) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n as u64 {
        acc *= k;
    }
    acc
}

/// Binomial coefficient `C(e, k)` for an arbitrary (possibly negative)
/// integer top argument: the product `e (e-1) ... (e-k+1) / k!`.
///
/// Computed by interleaving multiplications and divisions so every
/// intermediate quotient is exact; the running product after step `m`
/// is `C(e, m) * (partial)` which `m` always divides.
pub fn binom_int(e: i64, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for m in 1..=k as i64 {
        acc *= BigInt::from(e - m + 1);
        let (q, r) = num_integer::Integer::div_rem(&acc, &BigInt::from(m));
        debug_assert!(r.is_zero(), "binom_int: non-exact intermediate division");
        acc = q;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), BigInt::from(1));
        assert_eq!(factorial(1), BigInt::from(1));
        assert_eq!(factorial(6), BigInt::from(720));
    }

    #[test]
    fn binomials_nonnegative_top() {
        assert_eq!(binom_int(7, 3), BigInt::from(35));
        assert_eq!(binom_int(7, 0), BigInt::from(1));
        assert_eq!(binom_int(3, 5), BigInt::from(0));
        assert_eq!(binom_int(15, 7), BigInt::from(6435));
    }

    #[test]
    fn binomials_negative_top() {
        // C(-1, k) = (-1)^k
        assert_eq!(binom_int(-1, 4), BigInt::from(1));
        assert_eq!(binom_int(-1, 5), BigInt::from(-1));
        // C(-3, 2) = 6
        assert_eq!(binom_int(-3, 2), BigInt::from(6));
        assert_eq!(binom_int(-2, 3), BigInt::from(-4));
    }

    #[test]
    fn scalar_text_roundtrip() {
        let x = ratio(-7, 3);
        assert_eq!(x.to_string(), "-7/3");
        let y: Scalar = "-7/3".parse().unwrap();
        assert_eq!(x, y);
        let z: Scalar = "42".parse().unwrap();
        assert_eq!(z, int(42));
    }
}
