use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::Diagram;
use crate::ring::{binom_int, Scalar};
use crate::series::{series_mul, subst_scale, unit_pow, Series2};
use crate::Result;

/// One wall crossing: a primitive direction and the sign of the crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub dir: (u32, u32),
    pub sign: i8,
}

/// The fixed loop: across the first axis wall, the second, back across the
/// first, then across every interior direction in strictly decreasing
/// slope order `i/j`, and finally back across the second axis wall.
/// Interior directions are those a wall can exist in at this cutoff,
/// i.e. primitive `(i, j)` with `i, j >= 1` and `i + j <= cutoff`.
pub fn crossing_schedule(cutoff: u32) -> Vec<Crossing> {
    let mut out = vec![
        Crossing { dir: (1, 0), sign: 1 },
        Crossing { dir: (0, 1), sign: 1 },
        Crossing { dir: (1, 0), sign: -1 },
    ];
    let mut interior = Vec::new();
    for i in 1..cutoff {
        for j in 1..=cutoff - i {
            if i.gcd(&j) == 1 {
                interior.push((i, j));
            }
        }
    }
    interior.sort_by(|p, q| (q.0 as u64 * p.1 as u64).cmp(&(p.0 as u64 * q.1 as u64)));
    out.extend(interior.into_iter().map(|dir| Crossing { dir, sign: -1 }));
    out.push(Crossing { dir: (0, 1), sign: -1 });
    out
}

/// The multiplier series picked up by the two coordinates when transported
/// once around the full loop; both are 1 exactly when the diagram is
/// consistent at its cutoff.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopTransport {
    pub a: Series2,
    pub b: Series2,
}

/// Loop transport at the diagram's cutoff.
pub fn transport(dg: &Diagram) -> LoopTransport {
    let (av, bv) = transport_dense(dg, dg.cutoff());
    LoopTransport {
        a: to_series(&av, dg.cutoff()),
        b: to_series(&bv, dg.cutoff()),
    }
}

/// Per-crossing data in the loop frame: the primitivizing scale `t` and
/// the exponents the two coordinate generators pick up.
fn crossing_exponents(dir: (u32, u32), frame: (i64, i64)) -> (i64, i64, i64) {
    let (i, j) = (dir.0 as i64, dir.1 as i64);
    let (eb, ec) = frame;
    let t = (eb / i.gcd(&eb)).lcm(&(ec / j.gcd(&ec)));
    debug_assert_eq!(t * i % eb, 0);
    debug_assert_eq!(t * j % ec, 0);
    (t, t * i / eb, t * j / ec)
}

/// Flat dense transport: the workhorse.  Returns the two multiplier
/// series as `(cutoff + 1)^2` arrays indexed by `p * (cutoff + 1) + q`.
///
/// Each crossing of a wall in direction `(i, j)` with function `f(u)`
/// multiplies the stored term at `(p, q)` by `f^e` with the fused exponent
/// `e = sign * (t * (j*p - i*q) + e_gen)`: the first summand is the
/// monomial scaling of `x^p y^q` and `e_gen` the generator's own factor.
/// Powers `f^e` are expanded through `(f - 1)^k` tables so only binomials
/// `C(e, k)` with `k` up to `cutoff / (i + j)` are ever needed.
///
/// All arithmetic runs on integers under one shared denominator per
/// accumulator (each crossing contributes `den_h^lmax`, with `den_h` the
/// lcm of the wall coefficients' denominators); rationals are only
/// reassembled at the end.  This keeps the hot loop free of per-operation
/// gcd normalization.
pub(super) fn transport_dense(dg: &Diagram, cutoff: u32) -> (Vec<Scalar>, Vec<Scalar>) {
    let n = cutoff as usize + 1;
    let mut av = vec![BigInt::zero(); n * n];
    av[0] = BigInt::one();
    let mut bv = av.clone();
    let mut a_den = BigInt::one();
    let mut b_den = BigInt::one();

    for crossing in crossing_schedule(cutoff) {
        let (i, j) = crossing.dir;
        let Some(coeffs) = dg.walls.get(&(i, j)) else {
            continue;
        };
        let steps = (i + j) as usize;
        let lmax = cutoff as usize / steps;
        if lmax == 0 || coeffs.iter().take(lmax).all(Scalar::is_zero) {
            continue;
        }
        // Integer coefficients of den_h * (f - 1) in the wall variable u.
        let mut den_h = BigInt::one();
        for coeff in coeffs.iter().take(lmax) {
            den_h = den_h.lcm(coeff.denom());
        }
        let mut h = vec![BigInt::zero(); lmax + 1];
        for (k, coeff) in coeffs.iter().enumerate().take(lmax) {
            let scaled = coeff * Scalar::from_integer(den_h.clone());
            debug_assert!(scaled.is_integer());
            h[k + 1] = scaled.to_integer();
        }
        // fk[k] holds den_h^k * (f - 1)^k; rescaled below to the common
        // denominator den_h^lmax.
        let mut fk: Vec<Vec<BigInt>> = Vec::with_capacity(lmax + 1);
        let mut unit = vec![BigInt::zero(); lmax + 1];
        unit[0] = BigInt::one();
        fk.push(unit);
        for k in 1..=lmax {
            fk.push(convolve(&fk[k - 1], &h, lmax));
        }
        let mut scale = BigInt::one();
        for k in (0..lmax).rev() {
            scale *= &den_h;
            for v in fk[k].iter_mut() {
                *v *= &scale;
            }
        }
        let den_cross = scale; // den_h^lmax, the shared denominator

        debug_assert!(!den_cross.is_zero());

        let (t, ea_gen, eb_gen) = crossing_exponents((i, j), dg.frame());
        let sign = crossing.sign as i64;
        let mut powers: HashMap<i64, Vec<BigInt>> = HashMap::new();
        let mut apply = |vals: &[BigInt], e_gen: i64| -> Vec<BigInt> {
            let mut out = vec![BigInt::zero(); n * n];
            for p in 0..n {
                for q in 0..n - p {
                    let src = &vals[p * n + q];
                    if src.is_zero() {
                        continue;
                    }
                    let e = sign * (t * (j as i64 * p as i64 - i as i64 * q as i64) + e_gen);
                    let fpow = powers.entry(e).or_insert_with(|| power_coeffs(&fk, e));
                    let room = (cutoff as usize - p - q) / steps;
                    for (a, fa) in fpow.iter().enumerate().take(room + 1) {
                        if fa.is_zero() {
                            continue;
                        }
                        let dst = (p + a * i as usize) * n + (q + a * j as usize);
                        out[dst] += src * fa;
                    }
                }
            }
            out
        };
        av = apply(&av, ea_gen);
        bv = apply(&bv, eb_gen);
        a_den *= &den_cross;
        b_den *= den_cross;
    }
    let assemble = |vals: Vec<BigInt>, den: BigInt| -> Vec<Scalar> {
        vals.into_iter()
            .map(|v| Scalar::new(v, den.clone()))
            .collect()
    };
    (assemble(av, a_den), assemble(bv, b_den))
}

/// Scaled coefficients of `f^e` from the `(f - 1)^k` tables:
/// `den_h^lmax * f^e = sum_k C(e, k) * (den_h^lmax (f - 1)^k)`, exact for
/// any integer `e`.
fn power_coeffs(fk: &[Vec<BigInt>], e: i64) -> Vec<BigInt> {
    let lmax = fk.len() - 1;
    let mut out = vec![BigInt::zero(); lmax + 1];
    for (k, table) in fk.iter().enumerate() {
        let ck = binom_int(e, k as u32);
        if ck.is_zero() {
            continue;
        }
        for (a, va) in table.iter().enumerate() {
            if !va.is_zero() {
                out[a] += va * &ck;
            }
        }
    }
    out
}

fn convolve(x: &[BigInt], h: &[BigInt], lmax: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); lmax + 1];
    for (m, xm) in x.iter().enumerate() {
        if xm.is_zero() {
            continue;
        }
        for (k, hk) in h.iter().enumerate().skip(1) {
            if m + k > lmax {
                break;
            }
            if !hk.is_zero() {
                out[m + k] += xm * hk;
            }
        }
    }
    out
}

fn to_series(vals: &[Scalar], cutoff: u32) -> Series2 {
    let n = cutoff as usize + 1;
    let mut s = Series2::zero(cutoff);
    for p in 0..n {
        for q in 0..n - p {
            let v = &vals[p * n + q];
            if !v.is_zero() {
                s.add_term(p as u32, q as u32, v.clone());
            }
        }
    }
    s
}

/// Slow reference transport built directly from the series primitives:
/// crossing a wall with function `f` scales the first variable by
/// `f^(sign * t * j)`, the second by `f^(-sign * t * i)`, and multiplies
/// the coordinate's own accumulator by `f^(sign * e_gen)`.  Exists to
/// cross-check [`transport`]; quadratic blowup makes it unusable beyond
/// small cutoffs.
pub fn transport_reference(dg: &Diagram) -> Result<LoopTransport> {
    let cutoff = dg.cutoff();
    let mut a = Series2::one(cutoff);
    let mut b = Series2::one(cutoff);
    for crossing in crossing_schedule(cutoff) {
        let (i, j) = crossing.dir;
        let Some(coeffs) = dg.walls.get(&(i, j)) else {
            continue;
        };
        let mut f = Series2::one(cutoff);
        for (k, coeff) in coeffs.iter().enumerate() {
            let m = (k + 1) as u32;
            f.add_term(m * i, m * j, coeff.clone());
        }
        let (t, ea_gen, eb_gen) = crossing_exponents((i, j), dg.frame());
        let sign = crossing.sign as i64;
        let u = unit_pow(&f, sign * t * j as i64)?;
        let v = unit_pow(&f, -sign * t * i as i64)?;
        a = series_mul(&subst_scale(&a, &u, &v)?, &unit_pow(&f, sign * ea_gen)?)?;
        b = series_mul(&subst_scale(&b, &u, &v)?, &unit_pow(&f, sign * eb_gen)?)?;
    }
    Ok(LoopTransport { a, b })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::int;
    use crate::series::series_coeff;

    #[test]
    fn schedule_orders_interior_directions_by_slope() {
        let sched = crossing_schedule(5);
        assert_eq!(sched[0].dir, (1, 0));
        assert_eq!(sched[1].dir, (0, 1));
        assert_eq!(sched[2].dir, (1, 0));
        assert_eq!(sched.last().unwrap().dir, (0, 1));
        let interior: Vec<_> = sched[3..sched.len() - 1].iter().map(|c| c.dir).collect();
        assert_eq!(
            interior,
            vec![(4, 1), (3, 1), (2, 1), (3, 2), (1, 1), (2, 3), (1, 2), (1, 3), (1, 4)]
        );
        for c in &sched[3..] {
            assert_eq!(c.sign, -1);
        }
    }

    #[test]
    fn initial_walls_alone_leave_a_degree_two_defect() {
        // For (b, c) = (3, 2) the first missing wall shows up at (1, 1)
        // with defects (3, 2) on the two coordinates.
        let dg = Diagram::initial(3, 2, 2).unwrap();
        let lt = transport(&dg);
        assert_eq!(series_coeff(&lt.a, 1, 1).unwrap(), int(3));
        assert_eq!(series_coeff(&lt.b, 1, 1).unwrap(), int(2));
    }

    #[test]
    fn fast_and_reference_transports_agree() {
        let mut dg = Diagram::initial(3, 2, 5).unwrap();
        dg.set_wall_coeff(1, 1, 1, int(1));
        dg.set_wall_coeff(2, 1, 1, int(1));
        dg.set_wall_coeff(1, 2, 1, int(-2));
        dg.set_wall_coeff(1, 1, 2, int(5));
        let fast = transport(&dg);
        let slow = transport_reference(&dg).unwrap();
        assert_eq!(fast.a, slow.a);
        assert_eq!(fast.b, slow.b);
    }
}
