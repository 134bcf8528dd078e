//! Truncated power series in two formal variables.
//!
//! A [`Series2`] stores rational coefficients for monomials `x^p y^q` with
//! `p + q <= cutoff`; every operation truncates back to that bound.  Series
//! with different cutoffs never mix: combining them is an error rather than
//! a silent re-truncation.
//!
//! This is the slow, obviously-correct layer.  The engine's hot loop works
//! on flat arrays and only converts to [`Series2`] at its boundary, which
//! keeps a reference implementation available for cross-checking.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::ring::{binom_int, Scalar};
use crate::{Error, Result};

/// Truncated series with exact rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series2 {
    cutoff: u32,
    terms: BTreeMap<(u32, u32), Scalar>,
}

impl Series2 {
    /// The zero series at the given truncation order.
    pub fn zero(cutoff: u32) -> Self {
        Self {
            cutoff,
            terms: BTreeMap::new(),
        }
    }

    /// The constant series 1.
    pub fn one(cutoff: u32) -> Self {
        let mut s = Self::zero(cutoff);
        s.add_term(0, 0, Scalar::one());
        s
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    /// Adds `coeff * x^p y^q`; terms beyond the cutoff are discarded.
    pub fn add_term(&mut self, p: u32, q: u32, coeff: Scalar) {
        if p + q > self.cutoff || coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry((p, q)).or_insert_with(Scalar::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&(p, q));
        }
    }

    /// Iterates stored `((p, q), coeff)` pairs in key order.
    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Scalar)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True when the constant term is 1 (so integer powers make sense).
    pub fn is_unit(&self) -> bool {
        self.terms
            .get(&(0, 0))
            .is_some_and(|c| c == &Scalar::one())
    }

    pub fn add(&self, other: &Series2) -> Result<Series2> {
        let mut out = self.check_compatible(other)?.clone();
        for (&(p, q), v) in &other.terms {
            out.add_term(p, q, v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Series2) -> Result<Series2> {
        let mut out = self.check_compatible(other)?.clone();
        for (&(p, q), v) in &other.terms {
            out.add_term(p, q, -v.clone());
        }
        Ok(out)
    }

    fn check_compatible<'a>(&'a self, other: &Series2) -> Result<&'a Series2> {
        if self.cutoff != other.cutoff {
            return Err(Error::CutoffMismatch(self.cutoff, other.cutoff));
        }
        Ok(self)
    }
}

/// Truncating product of two series with equal cutoffs.
pub fn series_mul(a: &Series2, b: &Series2) -> Result<Series2> {
    a.check_compatible(b)?;
    let mut out = Series2::zero(a.cutoff);
    for (&(p1, q1), v1) in &a.terms {
        for (&(p2, q2), v2) in &b.terms {
            if p1 + q1 + p2 + q2 > a.cutoff {
                continue;
            }
            out.add_term(p1 + p2, q1 + q2, v1 * v2);
        }
    }
    Ok(out)
}

/// Integer power `f^e` of a unit series, for `e` of either sign, via the
/// binomial series `sum_k C(e, k) (f - 1)^k`.  Since `f - 1` has no
/// constant term, only `k <= cutoff` contributes and the sum is finite.
pub fn unit_pow(f: &Series2, e: i64) -> Result<Series2> {
    if !f.is_unit() {
        let c = f
            .terms
            .get(&(0, 0))
            .cloned()
            .unwrap_or_else(Scalar::zero);
        return Err(Error::NotAUnit(c.to_string()));
    }
    let mut h = f.clone();
    h.add_term(0, 0, -Scalar::one());
    let mut out = Series2::one(f.cutoff);
    let mut hk = Series2::one(f.cutoff);
    for k in 1..=f.cutoff {
        hk = series_mul(&hk, &h)?;
        if hk.is_zero() {
            break;
        }
        let coeff = Scalar::from_integer(binom_int(e, k));
        for (&(p, q), v) in &hk.terms {
            out.add_term(p, q, v * &coeff);
        }
    }
    Ok(out)
}

/// Monomial-scaling substitution `x -> x * u`, `y -> y * v`: each stored
/// term `r * x^p y^q` becomes `r * x^p y^q * u^p * v^q`, truncated.
pub fn subst_scale(s: &Series2, u: &Series2, v: &Series2) -> Result<Series2> {
    s.check_compatible(u)?;
    s.check_compatible(v)?;
    let cutoff = s.cutoff;
    // powers of u and v, built incrementally up to the cutoff
    let mut pow_u = vec![Series2::one(cutoff)];
    let mut pow_v = vec![Series2::one(cutoff)];
    let mut out = Series2::zero(cutoff);
    for (&(p, q), coeff) in &s.terms {
        while pow_u.len() <= p as usize {
            pow_u.push(series_mul(pow_u.last().unwrap(), u)?);
        }
        while pow_v.len() <= q as usize {
            pow_v.push(series_mul(pow_v.last().unwrap(), v)?);
        }
        let uv = series_mul(&pow_u[p as usize], &pow_v[q as usize])?;
        for (&(dp, dq), dv) in &uv.terms {
            out.add_term(p + dp, q + dq, coeff * dv);
        }
    }
    Ok(out)
}

/// Coefficient of `x^p y^q`; asking beyond the cutoff is an error because
/// the answer would be indistinguishable from a truncated-away term.
pub fn series_coeff(s: &Series2, p: u32, q: u32) -> Result<Scalar> {
    if p + q > s.cutoff {
        return Err(Error::BeyondCutoff {
            p,
            q,
            cutoff: s.cutoff,
        });
    }
    Ok(s.terms.get(&(p, q)).cloned().unwrap_or_else(Scalar::zero))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{int, ratio};

    fn sample(cutoff: u32) -> Series2 {
        let mut s = Series2::one(cutoff);
        s.add_term(1, 0, int(2));
        s.add_term(0, 1, ratio(-1, 3));
        s.add_term(1, 1, int(5));
        s
    }

    #[test]
    fn mul_truncates_and_commutes() {
        let a = sample(3);
        let mut b = Series2::one(3);
        b.add_term(2, 0, int(7));
        b.add_term(0, 3, int(1));
        let ab = series_mul(&a, &b).unwrap();
        let ba = series_mul(&b, &a).unwrap();
        assert_eq!(ab, ba);
        // x^2 * x*y has total degree 3+... discarded beyond cutoff 3
        assert_eq!(series_coeff(&ab, 2, 0).unwrap(), int(7));
        assert_eq!(series_coeff(&ab, 3, 0).unwrap(), int(14));
        assert!(series_coeff(&ab, 3, 1).is_err());
    }

    #[test]
    fn cutoff_mismatch_is_an_error() {
        let a = sample(3);
        let b = Series2::one(4);
        assert!(matches!(
            series_mul(&a, &b),
            Err(Error::CutoffMismatch(3, 4))
        ));
        assert!(a.add(&b).is_err());
    }

    #[test]
    fn unit_pow_small_cases() {
        // (1 + x)^3 and (1 + x)^{-1} up to degree 4
        let mut f = Series2::one(4);
        f.add_term(1, 0, int(1));
        let cube = unit_pow(&f, 3).unwrap();
        assert_eq!(series_coeff(&cube, 2, 0).unwrap(), int(3));
        assert_eq!(series_coeff(&cube, 3, 0).unwrap(), int(1));
        assert_eq!(series_coeff(&cube, 4, 0).unwrap(), int(0));
        let inv = unit_pow(&f, -1).unwrap();
        for k in 0..=4u32 {
            let want = if k % 2 == 0 { int(1) } else { int(-1) };
            assert_eq!(series_coeff(&inv, k, 0).unwrap(), want);
        }
    }

    #[test]
    fn unit_pow_inverse_cancels() {
        let f = sample(4);
        let a = unit_pow(&f, 5).unwrap();
        let b = unit_pow(&f, -5).unwrap();
        assert_eq!(series_mul(&a, &b).unwrap(), Series2::one(4));
    }

    #[test]
    fn unit_pow_rejects_non_units() {
        let mut f = Series2::one(3);
        f.add_term(0, 0, int(1)); // constant term now 2
        assert!(matches!(unit_pow(&f, 2), Err(Error::NotAUnit(_))));
        assert!(unit_pow(&Series2::zero(3), 1).is_err());
    }

    #[test]
    fn subst_scale_by_one_is_identity() {
        let s = sample(5);
        let one = Series2::one(5);
        assert_eq!(subst_scale(&s, &one, &one).unwrap(), s);
    }

    #[test]
    fn subst_scale_expands_units() {
        // x -> x(1 + y): coefficient of x y^k picks up C(1, k) pattern
        let mut s = Series2::zero(4);
        s.add_term(1, 0, int(1));
        let mut u = Series2::one(4);
        u.add_term(0, 1, int(1));
        let one = Series2::one(4);
        let t = subst_scale(&s, &u, &one).unwrap();
        assert_eq!(series_coeff(&t, 1, 0).unwrap(), int(1));
        assert_eq!(series_coeff(&t, 1, 1).unwrap(), int(1));
        assert_eq!(series_coeff(&t, 1, 2).unwrap(), int(0));
    }
}
