use num_traits::Zero;

use super::scalar::{int, Scalar};

/// Dense univariate polynomial; `coeffs[k]` is the coefficient of `x^k`.
/// Trailing zeros are trimmed, so the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct UniPoly {
    coeffs: Vec<Scalar>,
}

impl UniPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(x: Scalar) -> Self {
        Self::from_coeffs(vec![x])
    }

    pub fn from_coeffs(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k) + other.coeff(k));
        }
        UniPoly::from_coeffs(out)
    }

    pub fn scale(&self, s: &Scalar) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::from_coeffs(out)
    }
}

/// Newton divided differences for distinct nodes: `out[k]` is the
/// coefficient of `(x - x_0)...(x - x_{k-1})` in the interpolant.
pub fn divided_differences(points: &[(Scalar, Scalar)]) -> Vec<Scalar> {
    let mut table: Vec<Scalar> = points.iter().map(|(_, y)| y.clone()).collect();
    let xs: Vec<&Scalar> = points.iter().map(|(x, _)| x).collect();
    for level in 1..points.len() {
        for row in (level..points.len()).rev() {
            let dx = xs[row] - xs[row - level];
            table[row] = (&table[row] - &table[row - 1]) / dx;
        }
    }
    table
}

/// Exact interpolating polynomial through distinct nodes.
pub fn newton_interpolate(points: &[(Scalar, Scalar)]) -> UniPoly {
    let dd = divided_differences(points);
    let mut acc = UniPoly::zero();
    let mut basis = UniPoly::constant(int(1));
    for (k, coeff) in dd.iter().enumerate() {
        acc = acc.add(&basis.scale(coeff));
        if k + 1 < dd.len() {
            let (x_k, _) = &points[k];
            basis = basis.mul(&UniPoly::from_coeffs(vec![-x_k.clone(), int(1)]));
        }
    }
    acc
}

/// Coefficients `a_k` with `p(x) = sum_k a_k * C(x, k)`, computed by
/// forward differences of the values `p(0), p(1), ...`.
pub fn binom_basis_expand(p: &UniPoly) -> Vec<Scalar> {
    let n = p.degree().unwrap_or(0) + 1;
    let mut vals: Vec<Scalar> = (0..n as i64).map(|m| p.eval(&int(m))).collect();
    let mut out = Vec::with_capacity(n);
    out.push(vals[0].clone());
    for _ in 1..n {
        for k in 0..vals.len() - 1 {
            vals[k] = &vals[k + 1] - &vals[k];
        }
        vals.pop();
        out.push(vals[0].clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::scalar::{binom_int, ratio};
    use num_rational::BigRational;

    #[test]
    fn eval_and_degree() {
        // 2x^2 - 3x + 1
        let p = UniPoly::from_coeffs(vec![int(1), int(-3), int(2)]);
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.eval(&int(4)), int(2 * 16 - 12 + 1));
        assert_eq!(UniPoly::zero().degree(), None);
        assert_eq!(UniPoly::from_coeffs(vec![int(0), int(0)]), UniPoly::zero());
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let p = UniPoly::from_coeffs(vec![ratio(1, 3), int(-2), int(0), ratio(5, 7)]);
        let points: Vec<_> = (1..=4).map(|k| (int(k), p.eval(&int(k)))).collect();
        assert_eq!(newton_interpolate(&points), p);
        // extra nodes leave the interpolant unchanged
        let extra: Vec<_> = (1..=7).map(|k| (int(k), p.eval(&int(k)))).collect();
        assert_eq!(newton_interpolate(&extra), p);
    }

    #[test]
    fn binomial_basis_expansion() {
        // x^2 = 2*C(x,2) + C(x,1)
        let p = UniPoly::from_coeffs(vec![int(0), int(0), int(1)]);
        assert_eq!(binom_basis_expand(&p), vec![int(0), int(1), int(2)]);
        // roundtrip: evaluate sum a_k C(x,k) at several points
        let q = UniPoly::from_coeffs(vec![int(3), ratio(-1, 2), int(4), int(1)]);
        let a = binom_basis_expand(&q);
        for x in 0..8i64 {
            let direct = q.eval(&int(x));
            let via: BigRational = a
                .iter()
                .enumerate()
                .map(|(k, ak)| ak * BigRational::from(binom_int(x, k as u32)))
                .sum();
            assert_eq!(direct, via);
        }
    }
}
