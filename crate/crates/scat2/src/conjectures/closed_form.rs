//! Exact expansions of the conjectured closed forms for special table
//! entries.
//!
//! Each formula is a binomial-coefficient expression with an apparent
//! division (by `b`, by the binomial's own argument, and so on) that must
//! cancel after expanding the falling factorial.  The constructors return
//! `None` when the cancellation fails; callers treat that as evidence
//! against the formula being well formed, not as an internal error.

use crate::ring::{binom_int, binomial_poly, int, poly_div_exact, ratio, Poly3, Scalar, Var};

fn g() -> Poly3 {
    Poly3::var(Var::G)
}

fn b() -> Poly3 {
    Poly3::var(Var::B)
}

fn c() -> Poly3 {
    Poly3::var(Var::C)
}

/// `tau(1, j) = (g/b) * binom(b, j)` for `j >= 1`.
pub fn tau_row_one(j: u32) -> Option<Poly3> {
    if j == 0 {
        return None;
    }
    let quotient = poly_div_exact(&binomial_poly(&b(), j), &b())?;
    Some(quotient.mul(&g()))
}

/// `tau(i, 1) = (g/c) * binom(c, i)` for `i >= 1`.
pub fn tau_column_one(i: u32) -> Option<Poly3> {
    if i == 0 {
        return None;
    }
    let quotient = poly_div_exact(&binomial_poly(&c(), i), &c())?;
    Some(quotient.mul(&g()))
}

/// `tau(i, i) = g/X * binom(X, i)` with `X = (b-1)(c-1)i + g`, `i >= 1`.
pub fn tau_diagonal(i: u32) -> Option<Poly3> {
    if i == 0 {
        return None;
    }
    let one = Poly3::one();
    let x = b()
        .sub(&one)
        .mul(&c().sub(&one))
        .scale(&int(i as i64))
        .add(&g());
    let quotient = poly_div_exact(&binomial_poly(&x, i), &x)?;
    Some(quotient.mul(&g()))
}

/// The finite-sum form of the diagonal entry:
/// `tau(i, i) = sum_l g/(l+1) * binom(i-1, l) * binom(Y, l)` with
/// `Y = i(bc - b - c) + g - 1`.  The sum is finite because
/// `binom(i-1, l)` vanishes for `l > i-1`.
pub fn tau_diagonal_sum(i: u32) -> Poly3 {
    let one = Poly3::one();
    let y = b()
        .mul(&c())
        .sub(&b())
        .sub(&c())
        .scale(&int(i as i64))
        .add(&g())
        .sub(&one);
    let mut total = Poly3::zero();
    for l in 0..i {
        let weight = Scalar::new(binom_int((i - 1) as i64, l), (l as i64 + 1).into());
        total = total.add(&binomial_poly(&y, l).mul(&g()).scale(&weight));
    }
    total
}

/// `tau(i, i-1) = g/(i Z) * binom(Z(c-1), i-1)` with `Z = (b-1)i + 1`,
/// for `i >= 2`.  (At `i = 1` the expression degenerates to the axis
/// value `g/b = 1`, which is not a polynomial in the three symbols.)
pub fn tau_below_diagonal(i: u32) -> Option<Poly3> {
    if i < 2 {
        return None;
    }
    let one = Poly3::one();
    let z = b().sub(&one).scale(&int(i as i64)).add(&one);
    let w = z.mul(&c().sub(&one));
    let quotient = poly_div_exact(&binomial_poly(&w, i - 1), &z)?;
    Some(quotient.mul(&g()).scale(&ratio(1, i as i64)))
}

/// `tau(j-1, j) = g/(j Z) * binom(Z(b-1), j-1)` with `Z = (c-1)j + 1`,
/// for `j >= 2`.
pub fn tau_above_diagonal(j: u32) -> Option<Poly3> {
    if j < 2 {
        return None;
    }
    let one = Poly3::one();
    let z = c().sub(&one).scale(&int(j as i64)).add(&one);
    let w = z.mul(&b().sub(&one));
    let quotient = poly_div_exact(&binomial_poly(&w, j - 1), &z)?;
    Some(quotient.mul(&g()).scale(&ratio(1, j as i64)))
}

/// The conjectured value of `tau(2j, j)` at `(b, c) = (1, 5)`:
/// `(1/j) * sum_l binom(l, j-l+1) * binom(j+l-1, l)`.  The sum is finite
/// because `binom(l, j-l+1)` vanishes once `j - l + 1` exceeds `l` or
/// drops below zero.
pub fn tau_b1_c5_double(j: u32) -> Scalar {
    assert!(j >= 1);
    let mut total = Scalar::from_integer(0.into());
    for l in 0..=j + 1 {
        let lower = binom_int(l as i64, j + 1 - l);
        let upper = binom_int((j + l) as i64 - 1, l);
        total += Scalar::from_integer(lower * upper);
    }
    total * ratio(1, j as i64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_one_matches_small_entries() {
        assert_eq!(tau_row_one(1).unwrap().to_string(), "g");
        assert_eq!(tau_row_one(2).unwrap().to_string(), "1/2*g*b - 1/2*g");
        assert_eq!(
            tau_row_one(3).unwrap().to_string(),
            "1/6*g*b^2 - 1/2*g*b + 1/3*g"
        );
    }

    #[test]
    fn column_one_mirrors_row_one() {
        assert_eq!(
            tau_column_one(3).unwrap(),
            tau_row_one(3).unwrap().swap_bc()
        );
    }

    #[test]
    fn diagonal_at_one_is_g() {
        assert_eq!(tau_diagonal(1).unwrap().to_string(), "g");
    }

    #[test]
    fn diagonal_at_two_matches_table() {
        assert_eq!(
            tau_diagonal(2).unwrap().to_string(),
            "1/2*g^2 + g*b*c - g*b - g*c + 1/2*g"
        );
    }

    #[test]
    fn diagonal_sum_form_agrees_with_product_form() {
        for i in 1..=5 {
            assert_eq!(tau_diagonal_sum(i), tau_diagonal(i).unwrap(), "i={i}");
        }
    }

    #[test]
    fn below_diagonal_matches_frozen_entry() {
        // tau(3,2) from the displayed 3x3 table of polynomials
        assert_eq!(
            tau_below_diagonal(3).unwrap().to_string(),
            "1/2*g*b*c^2 - g*b*c + 1/2*g*b - 1/3*g*c^2 + 1/2*g*c - 1/6*g"
        );
        assert_eq!(
            tau_above_diagonal(3).unwrap(),
            tau_below_diagonal(3).unwrap().swap_bc()
        );
    }

    #[test]
    fn degenerate_below_diagonal_is_rejected() {
        assert!(tau_below_diagonal(1).is_none());
        assert!(tau_above_diagonal(1).is_none());
    }

    #[test]
    fn double_index_values_are_frozen() {
        let expect = [2, 5, 17, 64, 259, 1098];
        for (j, &v) in (1..=6).zip(&expect) {
            assert_eq!(tau_b1_c5_double(j), int(v), "j={j}");
        }
    }
}
