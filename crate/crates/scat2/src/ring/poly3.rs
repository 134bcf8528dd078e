use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::scalar::{factorial, int, Scalar};
use crate::Error;

/// The three symbols a [`Poly3`] is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Var {
    G,
    B,
    C,
}

/// Sparse polynomial in the symbols `g`, `b`, `c` with rational coefficients.
///
/// Terms are keyed by the exponent triple `(e_g, e_b, e_c)`; zero
/// coefficients are never stored, so structural equality is semantic
/// equality.  The canonical text form lists terms in descending
/// lexicographic order of the triple, e.g. `1/2*g^2 + g*b*c - g*b`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly3 {
    terms: BTreeMap<(u32, u32, u32), Scalar>,
}

impl Poly3 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(int(1))
    }

    pub fn constant(x: Scalar) -> Self {
        let mut p = Self::zero();
        p.add_term(0, 0, 0, x);
        p
    }

    pub fn var(v: Var) -> Self {
        let mut p = Self::zero();
        match v {
            Var::G => p.add_term(1, 0, 0, int(1)),
            Var::B => p.add_term(0, 1, 0, int(1)),
            Var::C => p.add_term(0, 0, 1, int(1)),
        }
        p
    }

    pub fn monomial(e_g: u32, e_b: u32, e_c: u32, coeff: Scalar) -> Self {
        let mut p = Self::zero();
        p.add_term(e_g, e_b, e_c, coeff);
        p
    }

    /// Adds `coeff * g^e_g b^e_b c^e_c`, dropping the term if it cancels.
    pub fn add_term(&mut self, e_g: u32, e_b: u32, e_c: u32, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        let key = (e_g, e_b, e_c);
        let entry = self.terms.entry(key).or_insert_with(Scalar::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Iterates `((e_g, e_b, e_c), coeff)` in ascending key order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&(u32, u32, u32), &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e_g: u32, e_b: u32, e_c: u32) -> Scalar {
        self.terms
            .get(&(e_g, e_b, e_c))
            .cloned()
            .unwrap_or_else(Scalar::zero)
    }

    /// Highest exponent of `v` appearing; 0 for the zero polynomial.
    pub fn degree(&self, v: Var) -> u32 {
        self.terms
            .keys()
            .map(|&(eg, eb, ec)| match v {
                Var::G => eg,
                Var::B => eb,
                Var::C => ec,
            })
            .max()
            .unwrap_or(0)
    }

    /// Coefficient of `g^k` as a polynomial in `b`, `c` only.
    pub fn g_slice(&self, k: u32) -> Poly3 {
        let mut out = Poly3::zero();
        for (&(eg, eb, ec), coeff) in &self.terms {
            if eg == k {
                out.add_term(0, eb, ec, coeff.clone());
            }
        }
        out
    }

    pub fn add(&self, other: &Poly3) -> Poly3 {
        let mut out = self.clone();
        for (&k, v) in &other.terms {
            out.add_term(k.0, k.1, k.2, v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly3) -> Poly3 {
        let mut out = self.clone();
        for (&k, v) in &other.terms {
            out.add_term(k.0, k.1, k.2, -v.clone());
        }
        out
    }

    pub fn neg(&self) -> Poly3 {
        let mut out = Poly3::zero();
        for (&k, v) in &self.terms {
            out.add_term(k.0, k.1, k.2, -v.clone());
        }
        out
    }

    pub fn mul(&self, other: &Poly3) -> Poly3 {
        let mut out = Poly3::zero();
        for (&(ag, ab, ac), av) in &self.terms {
            for (&(bg, bb, bc), bv) in &other.terms {
                out.add_term(ag + bg, ab + bb, ac + bc, av * bv);
            }
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> Poly3 {
        let mut out = Poly3::zero();
        for (&k, v) in &self.terms {
            out.add_term(k.0, k.1, k.2, v * s);
        }
        out
    }

    pub fn pow(&self, n: u32) -> Poly3 {
        let mut out = Poly3::one();
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Evaluates at numeric `b`, `c`, `g`.
    pub fn eval(&self, b: &Scalar, c: &Scalar, g: &Scalar) -> Scalar {
        let mut pow_g = vec![Scalar::one()];
        let mut pow_b = vec![Scalar::one()];
        let mut pow_c = vec![Scalar::one()];
        let mut acc = Scalar::zero();
        for (&(eg, eb, ec), coeff) in &self.terms {
            while pow_g.len() <= eg as usize {
                pow_g.push(pow_g.last().unwrap() * g);
            }
            while pow_b.len() <= eb as usize {
                pow_b.push(pow_b.last().unwrap() * b);
            }
            while pow_c.len() <= ec as usize {
                pow_c.push(pow_c.last().unwrap() * c);
            }
            acc += coeff * &pow_g[eg as usize] * &pow_b[eb as usize] * &pow_c[ec as usize];
        }
        acc
    }

    /// Substitutes a polynomial for each symbol simultaneously.
    pub fn subst(&self, at_g: &Poly3, at_b: &Poly3, at_c: &Poly3) -> Poly3 {
        let mut pow_g = vec![Poly3::one()];
        let mut pow_b = vec![Poly3::one()];
        let mut pow_c = vec![Poly3::one()];
        let mut out = Poly3::zero();
        for (&(eg, eb, ec), coeff) in &self.terms {
            while pow_g.len() <= eg as usize {
                pow_g.push(pow_g.last().unwrap().mul(at_g));
            }
            while pow_b.len() <= eb as usize {
                pow_b.push(pow_b.last().unwrap().mul(at_b));
            }
            while pow_c.len() <= ec as usize {
                pow_c.push(pow_c.last().unwrap().mul(at_c));
            }
            let t = pow_g[eg as usize]
                .mul(&pow_b[eb as usize])
                .mul(&pow_c[ec as usize]);
            out = out.add(&t.scale(coeff));
        }
        out
    }

    /// Exchanges the symbols `b` and `c`.
    pub fn swap_bc(&self) -> Poly3 {
        let mut out = Poly3::zero();
        for (&(eg, eb, ec), coeff) in &self.terms {
            out.add_term(eg, ec, eb, coeff.clone());
        }
        out
    }

    /// Leading coefficient in the canonical (descending) term order.
    pub fn leading_coeff(&self) -> Scalar {
        self.terms
            .iter()
            .next_back()
            .map(|(_, v)| v.clone())
            .unwrap_or_else(Scalar::zero)
    }

    /// Positive rational `r` such that `self / r` has coprime integer
    /// coefficients; zero for the zero polynomial.
    pub fn content(&self) -> Scalar {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for v in self.terms.values() {
            num = num.gcd(&v.numer().abs());
            den = den.lcm(v.denom());
        }
        if num.is_zero() {
            Scalar::zero()
        } else {
            Scalar::new(num, den)
        }
    }

    /// True when every coefficient is an integer.
    pub fn has_integer_coeffs(&self) -> bool {
        self.terms.values().all(|v| v.denom().is_one())
    }
}

/// The falling-factorial binomial `C(x, k) = x (x-1) ... (x-k+1) / k!`
/// applied to a polynomial argument.
pub fn binomial_poly(x: &Poly3, k: u32) -> Poly3 {
    let mut acc = Poly3::one();
    for m in 0..k {
        acc = acc.mul(&x.sub(&Poly3::constant(int(m as i64))));
    }
    acc.scale(&Scalar::new(BigInt::one(), factorial(k)))
}

impl fmt::Display for Poly3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(eg, eb, ec), coeff) in self.terms.iter().rev() {
            let negative = coeff.is_negative();
            if first {
                if negative {
                    write!(f, "-")?;
                }
                first = false;
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mag = coeff.abs();
            let mut vars: Vec<String> = Vec::new();
            for (sym, e) in [("g", eg), ("b", eb), ("c", ec)] {
                if e == 1 {
                    vars.push(sym.to_string());
                } else if e > 1 {
                    vars.push(format!("{sym}^{e}"));
                }
            }
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{}*{}", mag, vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl FromStr for Poly3 {
    type Err = Error;

    /// Parses the canonical text form produced by `Display`.
    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = |reason: String| Error::Parse { line: 0, reason };
        let s = s.trim();
        if s.is_empty() {
            return Err(bad("empty polynomial".into()));
        }
        if s == "0" {
            return Ok(Poly3::zero());
        }

        // Split into signed chunks on top-level " + " / " - ".
        let mut chunks: Vec<(i32, &str)> = Vec::new();
        let mut sign = 1;
        let mut rest = s;
        if let Some(tail) = rest.strip_prefix('-') {
            sign = -1;
            rest = tail.trim_start();
        }
        loop {
            let plus = rest.find(" + ");
            let minus = rest.find(" - ");
            let (cut, next_sign) = match (plus, minus) {
                (Some(p), Some(m)) if p < m => (p, 1),
                (Some(_), Some(m)) => (m, -1),
                (Some(p), None) => (p, 1),
                (None, Some(m)) => (m, -1),
                (None, None) => {
                    chunks.push((sign, rest));
                    break;
                }
            };
            chunks.push((sign, &rest[..cut]));
            sign = next_sign;
            rest = &rest[cut + 3..];
        }

        let mut poly = Poly3::zero();
        for (sgn, chunk) in chunks {
            let chunk = chunk.trim();
            if chunk.is_empty() {
                return Err(bad("empty term".into()));
            }
            let mut coeff = int(sgn as i64);
            let mut eg = 0u32;
            let mut eb = 0u32;
            let mut ec = 0u32;
            let mut saw_coeff = false;
            for part in chunk.split('*') {
                let part = part.trim();
                let first = part.chars().next().unwrap_or(' ');
                if matches!(first, 'g' | 'b' | 'c') {
                    let exp: u32 = match &part[1..] {
                        "" => 1,
                        tail => tail
                            .strip_prefix('^')
                            .ok_or_else(|| bad(format!("malformed factor `{part}`")))?
                            .parse()
                            .map_err(|_| bad(format!("malformed exponent in `{part}`")))?,
                    };
                    match first {
                        'g' => eg += exp,
                        'b' => eb += exp,
                        'c' => ec += exp,
                        _ => unreachable!(),
                    }
                } else {
                    if saw_coeff {
                        return Err(bad(format!("two coefficients in term `{chunk}`")));
                    }
                    saw_coeff = true;
                    let r: Scalar = part
                        .parse()
                        .map_err(|_| bad(format!("bad rational `{part}`")))?;
                    coeff *= r;
                }
            }
            poly.add_term(eg, eb, ec, coeff);
        }
        Ok(poly)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::ratio;

    fn b() -> Poly3 {
        Poly3::var(Var::B)
    }
    fn c() -> Poly3 {
        Poly3::var(Var::C)
    }
    fn g() -> Poly3 {
        Poly3::var(Var::G)
    }

    #[test]
    fn display_orders_terms_and_omits_unit_coefficients() {
        // 1/2 g^2 + g b c - g b - g c + 1/2 g
        let p = g()
            .pow(2)
            .scale(&ratio(1, 2))
            .add(&g().mul(&b()).mul(&c()))
            .sub(&g().mul(&b()))
            .sub(&g().mul(&c()))
            .add(&g().scale(&ratio(1, 2)));
        assert_eq!(p.to_string(), "1/2*g^2 + g*b*c - g*b - g*c + 1/2*g");
    }

    #[test]
    fn display_handles_leading_minus_and_constants() {
        let p = b().scale(&int(-3)).add(&Poly3::constant(ratio(2, 7)));
        assert_eq!(p.to_string(), "-3*b + 2/7");
        assert_eq!(Poly3::zero().to_string(), "0");
        assert_eq!(Poly3::constant(int(-1)).to_string(), "-1");
        assert_eq!(b().neg().to_string(), "-b");
    }

    #[test]
    fn parse_roundtrips_canonical_form() {
        for s in [
            "0",
            "g",
            "-b",
            "1/2*g^2 + g*b*c - g*b - g*c + 1/2*g",
            "-3*b + 2/7",
            "1/6*g*b^2 - 1/2*g*b + 1/3*g",
            "g^3*b^2*c^5 - 42",
        ] {
            let p: Poly3 = s.parse().unwrap();
            assert_eq!(p.to_string(), s, "roundtrip failed for `{s}`");
        }
    }

    #[test]
    fn parse_rejects_junk() {
        for s in ["", "x + 1", "1/2*", "g^", "2*3*g*4"] {
            assert!(s.parse::<Poly3>().is_err(), "accepted `{s}`");
        }
    }

    #[test]
    fn arithmetic_and_eval_agree() {
        let p = b().mul(&c()).sub(&g().pow(2)).add(&Poly3::constant(int(5)));
        let (vb, vc, vg) = (int(3), int(4), int(2));
        assert_eq!(p.eval(&vb, &vc, &vg), int(3 * 4 - 4 + 5));
        let q = p.mul(&p);
        assert_eq!(q.eval(&vb, &vc, &vg), int((3 * 4 - 4 + 5) * (3 * 4 - 4 + 5)));
    }

    #[test]
    fn binomial_poly_matches_numeric_binomials() {
        // C(b, 3) at b = 7 is 35.
        let p = binomial_poly(&b(), 3);
        assert_eq!(p.eval(&int(7), &int(0), &int(0)), int(35));
        assert_eq!(p.degree(Var::B), 3);
        // C(x, 0) = 1.
        assert_eq!(binomial_poly(&g(), 0), Poly3::one());
    }

    #[test]
    fn slices_substitution_and_content() {
        let p: Poly3 = "1/2*g^2 + g*b*c - g*b - g*c + 1/2*g".parse().unwrap();
        assert_eq!(p.g_slice(2), Poly3::constant(ratio(1, 2)));
        assert_eq!(p.g_slice(1).to_string(), "b*c - b - c + 1/2");
        assert_eq!(p.g_slice(0), Poly3::zero());
        assert_eq!(p.swap_bc(), p);
        let q: Poly3 = "1/2*g*b - 1/2*g".parse().unwrap();
        assert_eq!(q.swap_bc().to_string(), "1/2*g*c - 1/2*g");
        assert_eq!(q.content(), ratio(1, 2));
        // substituting b -> c, c -> b, g -> g matches swap_bc
        let r = q.subst(&Poly3::var(Var::G), &Poly3::var(Var::C), &Poly3::var(Var::B));
        assert_eq!(r, q.swap_bc());
    }
}
