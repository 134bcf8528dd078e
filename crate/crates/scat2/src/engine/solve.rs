use num_integer::Integer;
use num_traits::{One, Zero};

use super::transport::transport_dense;
use super::{Diagram, TauTable};
use crate::ring::Scalar;
use crate::{Error, Result};

/// Nonzero loop defects at one total degree: exponent pair plus the defect
/// coefficients on the two coordinate multipliers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefectReport {
    pub degree: u32,
    pub terms: Vec<((u32, u32), Scalar, Scalar)>,
}

/// Collects nonzero defect cells (transport minus the identity) grouped by
/// total degree, lowest first.
fn defects(av: &[Scalar], bv: &[Scalar], cutoff: u32) -> Vec<DefectReport> {
    let n = cutoff as usize + 1;
    let mut out: Vec<DefectReport> = Vec::new();
    for total in 0..=cutoff {
        let mut terms = Vec::new();
        for p in 0..=total {
            let q = total - p;
            let idx = p as usize * n + q as usize;
            let mut da = av[idx].clone();
            let mut db = bv[idx].clone();
            if p == 0 && q == 0 {
                da -= Scalar::one();
                db -= Scalar::one();
            }
            if !da.is_zero() || !db.is_zero() {
                terms.push(((p, q), da, db));
            }
        }
        if !terms.is_empty() {
            out.push(DefectReport { degree: total, terms });
        }
    }
    out
}

/// Full-loop consistency check at the diagram's cutoff.  An empty list
/// means the transport is the identity on both coordinates through every
/// degree up to the cutoff.
pub fn verify_consistency(dg: &Diagram) -> Vec<DefectReport> {
    let (av, bv) = transport_dense(dg, dg.cutoff());
    defects(&av, &bv, dg.cutoff())
}

/// Solves total degree `d`: reads the loop defect, converts each interior
/// defect cell into the unique wall-coefficient correction, installs the
/// corrections, and re-checks that the defect through degree `d` is gone.
///
/// Requires all lower degrees to be consistent already (as after calling
/// this for `2, 3, ..., d - 1` in order).  Each interior cell `(p, q)`
/// with `k = gcd(p, q)` fixes the coefficient of `u^k` on the wall in
/// direction `(p/k, q/k)`; the two coordinates give one value each, and
/// their agreement is checked rather than assumed.
pub fn solve_degree(dg: &mut Diagram, d: u32, table: &mut TauTable) -> Result<()> {
    let (pb, pc) = (dg.b(), dg.c());
    let fail = move |degree: u32, detail: String| Error::Inconsistent {
        b: pb,
        c: pc,
        degree,
        detail,
    };
    let (av, bv) = transport_dense(dg, d);
    let reports = defects(&av, &bv, d);
    for r in &reports {
        if r.degree < d {
            let ((p, q), da, db) = &r.terms[0];
            return Err(fail(
                r.degree,
                format!("unresolved lower-degree defect at ({p},{q}): {da}, {db}"),
            ));
        }
    }

    let (eb, ec) = dg.frame();
    let mut corrections = Vec::new();
    for r in reports {
        debug_assert_eq!(r.degree, d);
        for ((p, q), da, db) in r.terms {
            if p == 0 || q == 0 {
                return Err(fail(
                    d,
                    format!("defect on a coordinate axis at ({p},{q}): {da}, {db}"),
                ));
            }
            let k = p.gcd(&q);
            let (i, j) = (p / k, q / k);
            let t = (eb / (i as i64).gcd(&eb)).lcm(&(ec / (j as i64).gcd(&ec)));
            let v1 = da * Scalar::new(eb.into(), (t * i as i64).into());
            let v2 = db * Scalar::new(ec.into(), (t * j as i64).into());
            if v1 != v2 {
                return Err(fail(
                    d,
                    format!("coordinate cross-check failed at ({p},{q}): {v1} vs {v2}"),
                ));
            }
            if !v1.is_zero() {
                corrections.push((i, j, k, v1));
            }
        }
    }
    for (i, j, k, value) in corrections {
        dg.set_wall_coeff(i, j, k, value.clone());
        table.set(i * k, j * k, value);
    }

    let (av, bv) = transport_dense(dg, d);
    if let Some(r) = defects(&av, &bv, d).first() {
        let ((p, q), da, db) = &r.terms[0];
        return Err(fail(
            r.degree,
            format!("residual defect after correction at ({p},{q}): {da}, {db}"),
        ));
    }
    Ok(())
}

/// Builds the consistent diagram for `(b, c)` degree by degree up to the
/// cutoff and returns the solved coefficient table.  The finished diagram
/// is re-verified in full before anything is returned.
pub fn compute_csd(b: u32, c: u32, cutoff: u32) -> Result<TauTable> {
    let mut dg = Diagram::initial(b, c, cutoff)?;
    let mut table = TauTable::new(b, c, cutoff);
    for d in 2..=cutoff {
        solve_degree(&mut dg, d, &mut table)?;
    }
    if let Some(r) = verify_consistency(&dg).first() {
        let ((p, q), da, db) = &r.terms[0];
        return Err(Error::Inconsistent {
            b,
            c,
            degree: r.degree,
            detail: format!("final verification failed at ({p},{q}): {da}, {db}"),
        });
    }
    Ok(table)
}
