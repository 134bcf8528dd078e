use num_traits::Signed;

use super::poly3::{Poly3, Var};
use super::scalar::Scalar;

/// Exact multivariate division: `Some(q)` with `a = q * d`, or `None` when
/// `d` does not divide `a`.  Long division in the descending lexicographic
/// term order; divisibility of leading terms is preserved by that order, so
/// a failed leading-term step proves indivisibility.
pub fn poly_div_exact(a: &Poly3, d: &Poly3) -> Option<Poly3> {
    assert!(!d.is_zero(), "division by the zero polynomial");
    let (&dk, dc) = d.terms().next_back().unwrap();
    let mut rem = a.clone();
    let mut quot = Poly3::zero();
    while !rem.is_zero() {
        let (&rk, rc) = rem.terms().next_back().unwrap();
        if rk.0 < dk.0 || rk.1 < dk.1 || rk.2 < dk.2 {
            return None;
        }
        let q = Poly3::monomial(rk.0 - dk.0, rk.1 - dk.1, rk.2 - dk.2, rc / dc);
        rem = rem.sub(&q.mul(d));
        quot = quot.add(&q);
    }
    Some(quot)
}

/// Primitive part: the polynomial divided by its rational content, with the
/// leading coefficient (in canonical term order) made positive.  Zero maps
/// to zero.
pub fn primitive_part(p: &Poly3) -> Poly3 {
    if p.is_zero() {
        return Poly3::zero();
    }
    let mut content = p.content();
    if p.leading_coeff().is_negative() {
        content = -content;
    }
    p.scale(&content.recip())
}

/// Greatest common divisor, primitive with positive leading coefficient
/// (so defined up to the usual scalar ambiguity).  Computed by a primitive
/// pseudo-remainder sequence, recursing through the symbols `g`, `b`, `c`;
/// the result is verified by trial division before being returned.
pub fn poly_gcd(a: &Poly3, b: &Poly3) -> Poly3 {
    let g = gcd_inner(a, b);
    if !a.is_zero() {
        assert!(
            poly_div_exact(a, &g).is_some(),
            "gcd postcondition: result does not divide first argument"
        );
    }
    if !b.is_zero() {
        assert!(
            poly_div_exact(b, &g).is_some(),
            "gcd postcondition: result does not divide second argument"
        );
    }
    g
}

fn gcd_inner(a: &Poly3, b: &Poly3) -> Poly3 {
    if a.is_zero() {
        return primitive_part(b);
    }
    if b.is_zero() {
        return primitive_part(a);
    }
    let Some(v) = [Var::G, Var::B, Var::C]
        .into_iter()
        .find(|&v| a.degree(v) > 0 || b.degree(v) > 0)
    else {
        return Poly3::one();
    };

    let ua = to_uni(a, v);
    let ub = to_uni(b, v);
    let cont_a = content_of(&ua);
    let cont_b = content_of(&ub);
    let pa = divide_through(&ua, &cont_a);
    let pb = divide_through(&ub, &cont_b);
    let prim = prs_gcd(pa, pb);
    let cont = gcd_inner(&cont_a, &cont_b);
    primitive_part(&from_uni(&prim, v).mul(&cont))
}

/// Coefficients of `p` as a polynomial in `v`; top coefficient nonzero,
/// empty for zero.
fn to_uni(p: &Poly3, v: Var) -> Vec<Poly3> {
    let mut out = vec![Poly3::zero(); p.degree(v) as usize + 1];
    for (&(eg, eb, ec), coeff) in p.terms() {
        let (e, key) = match v {
            Var::G => (eg, (0, eb, ec)),
            Var::B => (eb, (eg, 0, ec)),
            Var::C => (ec, (eg, eb, 0)),
        };
        out[e as usize].add_term(key.0, key.1, key.2, coeff.clone());
    }
    trim(&mut out);
    out
}

fn from_uni(coeffs: &[Poly3], v: Var) -> Poly3 {
    let mut acc = Poly3::zero();
    for (e, c) in coeffs.iter().enumerate() {
        acc = acc.add(&c.mul(&Poly3::var(v).pow(e as u32)));
    }
    acc
}

fn trim(coeffs: &mut Vec<Poly3>) {
    while coeffs.last().is_some_and(Poly3::is_zero) {
        coeffs.pop();
    }
}

/// Gcd of all coefficients: the content with respect to the main symbol.
fn content_of(coeffs: &[Poly3]) -> Poly3 {
    let mut acc = Poly3::zero();
    for c in coeffs {
        acc = gcd_inner(&acc, c);
        if acc == Poly3::one() {
            break;
        }
    }
    acc
}

fn divide_through(coeffs: &[Poly3], d: &Poly3) -> Vec<Poly3> {
    coeffs
        .iter()
        .map(|c| {
            if c.is_zero() {
                Poly3::zero()
            } else {
                poly_div_exact(c, d).expect("content must divide every coefficient")
            }
        })
        .collect()
}

/// Primitive pseudo-remainder sequence on primitive inputs.
fn prs_gcd(mut r0: Vec<Poly3>, mut r1: Vec<Poly3>) -> Vec<Poly3> {
    if r0.len() < r1.len() {
        std::mem::swap(&mut r0, &mut r1);
    }
    while !r1.is_empty() {
        let mut r2 = prem(r0, &r1);
        if !r2.is_empty() {
            let cont = content_of(&r2);
            r2 = divide_through(&r2, &cont);
            normalize_scalars(&mut r2);
        }
        r0 = r1;
        r1 = r2;
    }
    r0
}

/// Pseudo-remainder of `a` by `b` in the main symbol: repeatedly scales by
/// the divisor's leading coefficient so all arithmetic stays polynomial.
fn prem(mut a: Vec<Poly3>, b: &[Poly3]) -> Vec<Poly3> {
    let n = b.len() - 1;
    let lcb = b[n].clone();
    while a.len() > n {
        let m = a.len() - 1;
        let lca = a.last().unwrap().clone();
        for coeff in a.iter_mut() {
            *coeff = coeff.mul(&lcb);
        }
        for (k, bc) in b.iter().enumerate() {
            let delta = bc.mul(&lca);
            a[m - n + k] = a[m - n + k].sub(&delta);
        }
        debug_assert!(a[m].is_zero());
        a.pop();
        trim(&mut a);
        if a.is_empty() {
            break;
        }
    }
    a
}

/// Divides out the common rational content across all coefficients to keep
/// numbers small between pseudo-remainder steps.
fn normalize_scalars(coeffs: &mut [Poly3]) {
    use num_integer::Integer;
    let mut acc: Option<Scalar> = None;
    for c in coeffs.iter() {
        if c.is_zero() {
            continue;
        }
        let ct = c.content();
        acc = Some(match acc {
            None => ct,
            // gcd of rationals: gcd of numerators over lcm of denominators
            Some(prev) => Scalar::new(prev.numer().gcd(ct.numer()), prev.denom().lcm(ct.denom())),
        });
    }
    if let Some(content) = acc {
        let inv = content.recip();
        for c in coeffs.iter_mut() {
            *c = c.scale(&inv);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::scalar::{int, ratio};

    fn p(s: &str) -> Poly3 {
        s.parse().unwrap()
    }

    #[test]
    fn exact_division() {
        let a = p("b^2*c - b*c - b + 1");
        let d = p("b - 1");
        let q = poly_div_exact(&a, &d).unwrap();
        assert_eq!(q.mul(&d), a);
        assert_eq!(q.to_string(), "b*c - 1");
        assert!(poly_div_exact(&p("b^2 + 1"), &p("b - 1")).is_none());
        assert_eq!(poly_div_exact(&Poly3::zero(), &d), Some(Poly3::zero()));
    }

    #[test]
    fn gcd_of_shared_factors() {
        let f = p("b - 1");
        let h = p("3*b*c - 2*b - 3*c + 1");
        let a = f.pow(2).mul(&h);
        let bb = f.mul(&h.pow(2)).scale(&ratio(5, 3));
        let g = poly_gcd(&a, &bb);
        assert_eq!(g, f.mul(&h));
    }

    #[test]
    fn gcd_is_scalar_normalized() {
        let a = p("2*b - 2").scale(&ratio(1, 7));
        let bb = p("3*b - 3");
        assert_eq!(poly_gcd(&a, &bb), p("b - 1"));
        let neg = p("-b + 1");
        assert_eq!(poly_gcd(&neg, &neg), p("b - 1"));
    }

    #[test]
    fn gcd_of_coprime_is_one() {
        assert_eq!(poly_gcd(&p("b - 1"), &p("c - 1")), Poly3::one());
        assert_eq!(poly_gcd(&p("g*b + 1"), &p("g*c")), Poly3::one());
        assert_eq!(poly_gcd(&p("7"), &p("5/3")), Poly3::one());
    }

    #[test]
    fn gcd_with_zero_and_three_symbols() {
        let a = p("g^2*b - g^2 + g*b*c - g*c");
        assert_eq!(poly_gcd(&a, &Poly3::zero()), primitive_part(&a));
        // a = g * (g + c) * (b - 1) ... check a nontrivial multi-symbol gcd
        let f = p("g + c");
        let x = f.mul(&p("g*b - g"));
        let y = f.mul(&p("b*c + 2"));
        assert_eq!(poly_gcd(&x, &y), f);
    }

    #[test]
    fn primitive_part_examples() {
        assert_eq!(primitive_part(&p("-2*b + 2")), p("b - 1"));
        assert_eq!(primitive_part(&p("1/2*b*c - 1/2")), p("b*c - 1"));
        assert_eq!(primitive_part(&Poly3::zero()), Poly3::zero());
        assert_eq!(primitive_part(&p("-5/3")), Poly3::one());
        let _ = int(0);
    }
}
