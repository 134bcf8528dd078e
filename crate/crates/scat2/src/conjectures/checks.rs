//! The individual checks behind [`super::check`].
//!
//! Conventions shared by every checker: `bad` collects counterexamples
//! (each with all inputs and both sides), `blockers` collects missing
//! prerequisites, and the final status is falsified if `bad` is nonempty,
//! else inconclusive if `blockers` is nonempty, else verified.

use std::cmp::Reverse;
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::{closed_form, CheckCtx, ConjectureReport, Status};
use crate::engine::g_factor;
use crate::fit::FitResult;
use crate::ring::{
    binom_basis_expand, factorial, int, newton_interpolate, poly_div_exact, poly_gcd,
    primitive_part, Poly3, Scalar, UniPoly, Var,
};
use crate::Result;

fn conclude(
    id: u32,
    range: String,
    bad: Vec<String>,
    blockers: Vec<String>,
    ok_witnesses: Vec<String>,
    mut notes: Vec<String>,
) -> ConjectureReport {
    if !bad.is_empty() {
        ConjectureReport::new(id, Status::Falsified, range, bad, notes)
    } else if !blockers.is_empty() {
        notes.extend(blockers.into_iter().map(|b| format!("prerequisite missing: {b}")));
        ConjectureReport::new(id, Status::Inconclusive, range, Vec::new(), notes)
    } else {
        ConjectureReport::new(id, Status::Verified, range, ok_witnesses, notes)
    }
}

/// All interior index pairs up to `max`, largest total degree first so
/// that memoized fits are computed at full depth once and mirrored.
fn pairs_descending(max: u32) -> Vec<(u32, u32)> {
    let mut v: Vec<(u32, u32)> = (1..=max)
        .flat_map(|i| (1..=max).map(move |j| (i, j)))
        .collect();
    v.sort_by_key(|&(i, j)| Reverse((i + j, i)));
    v
}

fn coprime_pairs_descending(max: u32) -> Vec<(u32, u32)> {
    pairs_descending(max)
        .into_iter()
        .filter(|&(i, j)| i.gcd(&j) == 1)
        .collect()
}

fn require_fit(
    ctx: &CheckCtx,
    i: u32,
    j: u32,
) -> Result<std::result::Result<Arc<FitResult>, String>> {
    let f = ctx.fit(i, j)?;
    Ok(if f.validated {
        Ok(f)
    } else {
        Err(format!(
            "the reconstruction of tau({i},{j}) failed validation (see check 1)"
        ))
    })
}

/// Evaluates `poly` at every `(b, c)` in the sweep grid against the
/// engine value of `tau(i, j)`; returns the first mismatch.
fn numeric_sweep(ctx: &CheckCtx, poly: &Poly3, i: u32, j: u32) -> Result<Option<String>> {
    let bc = ctx.ranges().bc_max;
    let cutoff = (i + j).max(2 * ctx.ranges().fit_max);
    for b in 1..=bc {
        for c in 1..=bc {
            let actual = ctx.table(b, c, cutoff)?.get(i, j)?;
            let g = int(g_factor(i, j, b, c) as i64);
            let predicted = poly.eval(&int(b as i64), &int(c as i64), &g);
            if predicted != actual {
                return Ok(Some(format!(
                    "tau({i},{j}) at (b,c) = ({b},{c}): formula gives {predicted}, engine gives {actual}"
                )));
            }
        }
    }
    Ok(None)
}

fn render_seq(xs: &[Scalar]) -> String {
    let items: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    format!("[{}]", items.join(", "))
}

fn unipoly_to_poly3(p: &UniPoly) -> Poly3 {
    let mut out = Poly3::zero();
    for (k, a) in p.coeffs().iter().enumerate() {
        out.add_term(0, k as u32, 0, a.clone());
    }
    out
}

fn poly3_to_unipoly(p: &Poly3) -> UniPoly {
    debug_assert!(p.degree(Var::G) == 0 && p.degree(Var::C) == 0);
    let coeffs = (0..=p.degree(Var::B) as usize)
        .map(|k| p.coeff(0, k as u32, 0))
        .collect();
    UniPoly::from_coeffs(coeffs)
}

fn unimodal(xs: &[Scalar]) -> bool {
    let mut k = 0;
    while k + 1 < xs.len() && xs[k] <= xs[k + 1] {
        k += 1;
    }
    while k + 1 < xs.len() && xs[k] >= xs[k + 1] {
        k += 1;
    }
    k + 1 >= xs.len()
}

fn log_concave(xs: &[Scalar]) -> bool {
    (1..xs.len().saturating_sub(1)).all(|k| &xs[k] * &xs[k] >= &xs[k - 1] * &xs[k + 1])
}

/// Interpolates `tau^{b,b}(i, j)` from equal-parameter engine runs,
/// with two nodes of degree headroom and two held-out nodes.  A holdout
/// mismatch means the values are not polynomial within the headroom and
/// is returned as a counterexample string.
fn bb_univariate(
    ctx: &CheckCtx,
    i: u32,
    j: u32,
) -> Result<std::result::Result<UniPoly, String>> {
    let cutoff = ctx.ranges().bb_sum_max.max(i + j);
    let expected = (i + j - 1) as usize;
    let nodes = expected as u32 + 3;
    let mut points = Vec::with_capacity(nodes as usize);
    for b in 1..=nodes {
        points.push((int(b as i64), ctx.table(b, b, cutoff)?.get(i, j)?));
    }
    let p = newton_interpolate(&points);
    for b in nodes + 1..=nodes + 2 {
        let actual = ctx.table(b, b, cutoff)?.get(i, j)?;
        let predicted = p.eval(&int(b as i64));
        if predicted != actual {
            return Ok(Err(format!(
                "tau^{{b,b}}({i},{j}) is not a polynomial of degree at most {}: \
                 interpolant predicts {predicted} at b = c = {b}, engine gives {actual}",
                expected + 2
            )));
        }
    }
    Ok(Ok(p))
}

/// Check 1: every entry in range is an exact polynomial in `(b, c, g)`.
pub(super) fn fits_validate(ctx: &CheckCtx) -> Result<ConjectureReport> {
    let m = ctx.ranges().fit_max;
    let range = format!("1 <= i,j <= {m}");
    let mut bad = Vec::new();
    for (i, j) in pairs_descending(m) {
        let f = ctx.fit(i, j)?;
        if !f.validated {
            bad.push(format!(
                "tau({i},{j}) admits no polynomial in (b, c, g) within the degree bounds: {}",
                f.notes.join("; ")
            ));
        }
    }
    let ok = vec![format!(
        "all {} entries reconstruct exactly and revalidate on held-out and random parameters",
        m * m
    )];
    Ok(conclude(1, range, bad, Vec::new(), ok, Vec::new()))
}

/// Check 2: `g` divides every entry and the degree in `g` is `gcd(i, j)`.
pub(super) fn g_factor_and_degree(ctx: &CheckCtx) -> Result<ConjectureReport> {
    let m = ctx.ranges().fit_max;
    let range = format!("1 <= i,j <= {m}");
    let mut bad = Vec::new();
    let mut blockers = Vec::new();
    for (i, j) in pairs_descending(m) {
        let f = match require_fit(ctx, i, j)? {
            Ok(f) => f,
            Err(blocker) => {
                blockers.push(blocker);
                continue;
            }
        };
        let free = f.poly.g_slice(0);
        if !free.is_zero() {
            bad.push(format!("tau({i},{j}) has a g-free part: {free}"));
        }
        let want = i.gcd(&j);
        let got = f.poly.degree(Var::G);
        if got != want {
            bad.push(format!(
                "deg_g tau({i},{j}) = {got} but gcd({i},{j}) = {want}"
            ));
        }
    }
    let ok = vec![format!(
        "g divides every entry; deg_g tau({m},{m}) = {m} = gcd({m},{m})"
    )];
    Ok(conclude(2, range, bad, blockers, ok, Vec::new()))
}

/// Check 3: the degree in `b` is `j - 1` and in `c` is `i - 1`.
pub(super) fn bc_degrees(ctx: &CheckCtx) -> Result<ConjectureReport> {
    let m = ctx.ranges().fit_max;
    let range = format!("1 <= i,j <= {m}");
    let mut bad = Vec::new();
    let mut blockers = Vec::new();
    for (i, j) in pairs_descending(m) {
        let f = match require_fit(ctx, i, j)? {
            Ok(f) => f,
            Err(blocker) => {
                blockers.push(blocker);
                continue;
            }
        };
        let (db, dc) = (f.poly.degree(Var::B), f.poly.degree(Var::C));
        if db != j - 1 {
            bad.push(format!("deg_b tau({i},{j}) = {db}, expected {}", j - 1));
        }
        if dc != i - 1 {
            bad.push(format!("deg_c tau({i},{j}) = {dc}, expected {}", i - 1));
        }
    }
    let ok = vec![format!(
        "deg_b = j - 1 and deg_c = i - 1 attained on all {} entries",
        m * m
    )];
    Ok(conclude(3, range, bad, blockers, ok, Vec::new()))
}

/// Check 4: `max(i, j)! * tau(i, j)` has integer coefficients.
pub(super) fn scaled_integrality(ctx: &CheckCtx) -> Result<ConjectureReport> {
    let m = ctx.ranges().fit_max;
    let range = format!("1 <= i,j <= {m}");
    let mut bad = Vec::new();
    let mut blockers = Vec::new();
    for (i, j) in pairs_descending(m) {
        let f = match require_fit(ctx, i, j)? {
            Ok(f) => f,
            Err(blocker) => {
                blockers.push(blocker);
                continue;
            }
        };
        let scaled = f.poly.scale(&Scalar::from_integer(factorial(i.max(j))));
        if !scaled.has_integer_coeffs() {
            bad.push(format!(
                "max({i},{j})! * tau({i},{j}) is not integral: content {}",
                scaled.content()
            ));
        }
    }
    let ok = vec![format!(
        "max(i,j)! * tau(i,j) is integral on all {} entries",
        m * m
    )];
    Ok(conclude(4, range, bad, blockers, ok, Vec::new()))
}

/// Shared driver for the closed-form checks: each instance compares the
/// expanded formula with the fitted polynomial and with raw engine values
/// on the numeric sweep grid.
fn closed_form_family(
    ctx: &CheckCtx,
    id: u32,
    range: String,
    instances: Vec<(u32, u32, Option<Poly3>)>,
    extra_witnesses: Vec<String>,
    notes: Vec<String>,
) -> Result<ConjectureReport> {
    let mut bad = Vec::new();
    let mut blockers = Vec::new();
    let mut anchor = None;
    for (i, j, formula) in instances {
        let Some(cf) = formula else {
            bad.push(format!(
                "the displayed expression for tau({i},{j}) does not cancel to a polynomial"
            ));
            continue;
        };
        match require_fit(ctx, i, j)? {
            Ok(f) => {
                if f.poly != cf {
                    bad.push(format!(
                        "tau({i},{j}): the formula expands to {cf} but the fitted polynomial is {}",
                        f.poly
                    ));
                }
            }
            Err(blocker) => blockers.push(blocker),
        }
        if let Some(w) = numeric_sweep(ctx, &cf, i, j)? {
            bad.push(w);
        }
        if anchor.is_none() {
            anchor = Some(format!("tau({i},{j}) = {cf}"));
        }
    }
    let bc = ctx.ranges().bc_max;
    let mut ok = Vec::new();
    if let Some(a) = anchor {
        ok.push(a);
    }
    ok.extend(extra_witnesses);
    ok.push(format!(
        "formulas match the fitted polynomials and the engine tables for all b,c <= {bc}"
    ));
    Ok(conclude(id, range, bad, blockers, ok, notes))
}

/// Check 5: `tau(1, j) = (g/b) binom(b, j)`.
pub(super) fn row_one_form(ctx: &CheckCtx) -> Result<ConjectureReport> {
    let m = ctx.ranges().fit_max;
    let range = format!("tau(1,j) for j <= {m}; sweep b,c <= {}", ctx.ranges().bc_max);
    let instances = (1..=m)
        .map(|j| (1, j, closed_form::tau_row_one(j)))
        .collect();
    closed_form_family(ctx, 5, range, instances, Vec::new(), Vec::new())
}

/// Check 6: `tau(i, 1) = (g/c) binom(c, i)`.
pub(super) fn column_one_form(ctx: &CheckCtx) -> Result<ConjectureReport> {
    let m = ctx.ranges().fit_max;
    let range = format!("tau(i,1) for i <= {m}; sweep b,c <= {}", ctx.ranges().bc_max);
    let instances = (1..=m)
        .map(|i| (i, 1, closed_form::tau_column_one(i)))
        .collect();
    closed_form_family(ctx, 6, range, instances, Vec::new(), Vec::new())
}

/// Check 7: `tau(i, i) = g/X binom(X, i)` with `X = (b-1)(c-1)i + g`.
pub(super) fn diagonal_form(ctx: &CheckCtx) -> Result<ConjectureReport> {
    let m = ctx.ranges().fit_max;
    let range = format!("tau(i,i) for i <= {m}; sweep b,c <= {}", ctx.ranges().bc_max);
    let instances: Vec<_> = (1..=m)
        .map(|i| (i, i, closed_form::tau_diagonal(i)))
        .collect();
    let mut extra = Vec::new();
    if m >= 3 {
        if let Some(cf) = closed_form::tau_diagonal(3) {
            let v = cf.eval(&int(3), &int(2), &int(1));
            extra.push(format!(
                "at (b,c) = (3,2): g = 1, X = 7, (1/7) binom(7,3) = {v} = tau(3,3)"
            ));
        }
    }
    closed_form_family(ctx, 7, range, instances, extra, Vec::new())
}

/// Check 8: the finite-sum form of the diagonal entry equals the
/// product form as a polynomial identity (no engine data involved).
pub(super) fn diagonal_sum_form(ctx: &CheckCtx) -> Result<ConjectureReport> {
    let m = ctx.ranges().fit_max;
    let range = format!("i <= {m}");
    let mut bad = Vec::new();
    for i in 1..=m {
        let Some(product) = closed_form::tau_diagonal(i) else {
            bad.push(format!(
                "the product form for tau({i},{i}) does not cancel to a polynomial"
            ));
            continue;
        };
        let sum = closed_form::tau_diagonal_sum(i);
        if sum != product {
            bad.push(format!(
                "i = {i}: the sum form gives {sum} but the product form gives {product}"
            ));
        }
    }
    let ok = vec![format!(
        "the finite-sum form equals the product form identically for all i <= {m}"
    )];
    Ok(conclude(8, range, bad, Vec::new(), ok, Vec::new()))
}

/// Check 9: `tau(i, i-1) = g/(i Z) binom(Z(c-1), i-1)`, `Z = (b-1)i + 1`.
pub(super) fn below_diagonal_form(ctx: &CheckCtx) -> Result<ConjectureReport> {
    let m = ctx.ranges().fit_max;
    let range = format!(
        "tau(i,i-1) for 2 <= i <= {m}; sweep b,c <= {}",
        ctx.ranges().bc_max
    );
    let instances: Vec<_> = (2..=m)
        .map(|i| (i, i - 1, closed_form::tau_below_diagonal(i)))
        .collect();
    let mut extra = Vec::new();
    if m >= 4 {
        if let Some(cf) = closed_form::tau_below_diagonal(4) {
            let v = cf.eval(&int(3), &int(2), &int(6));
            extra.push(format!(
                "at (b,c) = (3,2): g = 6, (6/36) binom(9,3) = {v} = tau(4,3)"
            ));
        }
    }
    let notes = vec![
        "at i = 1 the displayed expression degenerates to the axis value 1 \
         and is excluded from the polynomial comparison"
            .to_string(),
    ];
    closed_form_family(ctx, 9, range, instances, extra, notes)
}

/// Check 10: `tau(j-1, j) = g/(j Z) binom(Z(b-1), j-1)`, `Z = (c-1)j + 1`.
pub(super) fn above_diagonal_form(ctx: &CheckCtx) -> Result<ConjectureReport> {
    let m = ctx.ranges().fit_max;
    let range = format!(
        "tau(j-1,j) for 2 <= j <= {m}; sweep b,c <= {}",
        ctx.ranges().bc_max
    );
    let instances: Vec<_> = (2..=m)
        .map(|j| (j - 1, j, closed_form::tau_above_diagonal(j)))
        .collect();
    let notes = vec![
        "mirror of the subdiagonal formula under the exchange of b and c".to_string(),
    ];
    closed_form_family(ctx, 10, range, instances, Vec::new(), notes)
}

/// Check 11: `tau^{b,b}(i, j)` has degree `i + j - 1` in `b` and expands
/// nonnegatively in the binomial-coefficient basis.
pub(super) fn equal_parameter_positivity(ctx: &CheckCtx) -> Result<ConjectureReport> {
    let sm = ctx.ranges().bb_sum_max;
    let fm = ctx.ranges().fit_max;
    let range = format!("equal parameters b = c, i + j <= {sm}");
    let mut bad = Vec::new();
    let mut blockers = Vec::new();
    let mut anchor = None;
    for i in 1..sm {
        for j in 1..=(sm - i) {
            let p = match bb_univariate(ctx, i, j)? {
                Ok(p) => p,
                Err(w) => {
                    bad.push(w);
                    continue;
                }
            };
            let want = (i + j - 1) as usize;
            if p.degree() != Some(want) {
                let got = p
                    .degree()
                    .map_or_else(|| "that of the zero polynomial".to_string(), |d| d.to_string());
                bad.push(format!(
                    "deg tau^{{b,b}}({i},{j}) is {got}, expected {want}"
                ));
            }
            let basis = binom_basis_expand(&p);
            if basis.iter().any(|x| x.is_negative()) {
                bad.push(format!(
                    "tau^{{b,b}}({i},{j}) has a negative binomial-basis coefficient: {}",
                    render_seq(&basis)
                ));
            }
            if i <= fm && j <= fm {
                match require_fit(ctx, i, j)? {
                    Ok(f) => {
                        let b = Poly3::var(Var::B);
                        let substituted = f.poly.subst(&b, &b, &b);
                        if poly3_to_unipoly(&substituted) != p {
                            bad.push(format!(
                                "substituting c = g = b into the fitted tau({i},{j}) gives {}, \
                                 but equal-parameter interpolation gives {}",
                                substituted,
                                unipoly_to_poly3(&p)
                            ));
                        }
                    }
                    Err(blocker) => blockers.push(blocker),
                }
            }
            if (i, j) == (2, 2) {
                anchor = Some(format!(
                    "tau^{{b,b}}(2,2) = {} with binomial-basis expansion {}",
                    unipoly_to_poly3(&p),
                    render_seq(&binom_basis_expand(&p))
                ));
            }
        }
    }
    let mut ok = Vec::new();
    if let Some(a) = anchor {
        ok.push(a);
    }
    ok.push("degrees equal i + j - 1 and all binomial-basis coefficients are nonnegative".into());
    let notes = vec![
        "equal-parameter polynomials are interpolated from b = c engine runs and \
         cross-checked against the trivariate fits where those exist"
            .to_string(),
    ];
    Ok(conclude(11, range, bad, blockers, ok, notes))
}

/// Check 12: the binomial-basis coefficient sequence of `tau^{b,b}(i, j)`
/// is unimodal and log-concave.  The monomial-basis outcome is reported
/// alongside without being asserted: monomial coefficients of these
/// polynomials carry signs, so the positivity basis of check 11 is the
/// reading under test.
pub(super) fn equal_parameter_unimodality(ctx: &CheckCtx) -> Result<ConjectureReport> {
    let sm = ctx.ranges().bb_sum_max;
    let range = format!("equal parameters b = c, i + j <= {sm}");
    let mut bad = Vec::new();
    let mut anchor = None;
    let mut monomial_failures = 0u32;
    let mut monomial_total = 0u32;
    let mut monomial_sample = None;
    for i in 1..sm {
        for j in 1..=(sm - i) {
            let p = match bb_univariate(ctx, i, j)? {
                Ok(p) => p,
                Err(w) => {
                    bad.push(w);
                    continue;
                }
            };
            let basis = binom_basis_expand(&p);
            if !unimodal(&basis) {
                bad.push(format!(
                    "binomial-basis coefficients of tau^{{b,b}}({i},{j}) are not unimodal: {}",
                    render_seq(&basis)
                ));
            }
            if !log_concave(&basis) {
                bad.push(format!(
                    "binomial-basis coefficients of tau^{{b,b}}({i},{j}) are not log-concave: {}",
                    render_seq(&basis)
                ));
            }
            monomial_total += 1;
            if !unimodal(p.coeffs()) || !log_concave(p.coeffs()) {
                monomial_failures += 1;
                if monomial_sample.is_none() {
                    monomial_sample = Some(format!(
                        "tau^{{b,b}}({i},{j}) monomial coefficients {}",
                        render_seq(p.coeffs())
                    ));
                }
            }
            if (i, j) == (2, 2) {
                anchor = Some(format!(
                    "binomial-basis coefficients of tau^{{b,b}}(2,2) are {}: unimodal and log-concave",
                    render_seq(&basis)
                ));
            }
        }
    }
    let mut ok = Vec::new();
    if let Some(a) = anchor {
        ok.push(a);
    }
    ok.push("every binomial-basis sequence in range is unimodal and log-concave".into());
    let mut notes = vec![
        "the sequence under test is the binomial-basis expansion of check 11; \
         the statement is false for monomial coefficients, which carry signs"
            .to_string(),
    ];
    notes.push(match monomial_sample {
        Some(sample) => format!(
            "for information: {monomial_failures} of {monomial_total} entries in range fail \
             unimodality or log-concavity in the monomial basis (first: {sample})"
        ),
        None => format!(
            "for information: all {monomial_total} entries in range happen to satisfy the \
             monomial-basis reading as well"
        ),
    });
    Ok(conclude(12, range, bad, Vec::new(), ok, notes))
}

/// Check 13: at `(b, c) = (1, 5)` the entry `tau(2j, j)` equals the
/// displayed finite sum.
pub(super) fn double_index_values(ctx: &CheckCtx) -> Result<ConjectureReport> {
    let jm = (ctx.ranges().sum_max / 3).min(6);
    let range = format!("j <= {jm} at (b,c) = (1,5)");
    if jm == 0 {
        return Ok(ConjectureReport::new(
            13,
            Status::Inconclusive,
            range,
            Vec::new(),
            vec!["the numeric range is too small to reach tau(2,1)".into()],
        ));
    }
    let table = ctx.table(1, 5, 3 * jm)?;
    let mut bad = Vec::new();
    let mut values = Vec::new();
    for j in 1..=jm {
        let predicted = closed_form::tau_b1_c5_double(j);
        let actual = table.get(2 * j, j)?;
        if predicted != actual {
            bad.push(format!(
                "j = {j}: the sum gives {predicted}, the engine gives {actual}"
            ));
        }
        values.push(actual.to_string());
    }
    let ok = vec![format!(
        "tau^{{1,5}}(2j,j) for j = 1..{jm}: {}",
        values.join(", ")
    )];
    Ok(conclude(13, range, bad, Vec::new(), ok, Vec::new()))
}

/// Check 14: the slice `tau(i,j;k)` has degree `j - k` in `b`, `i - k`
/// in `c`, and a nonzero corner term `b^{j-k} c^{i-k}`.
pub(super) fn slice_degrees(ctx: &CheckCtx) -> Result<ConjectureReport> {
    let m = ctx.ranges().fit_max;
    let range = format!("1 <= i,j <= {m}, 1 <= k <= gcd(i,j)");
    let mut bad = Vec::new();
    let mut blockers = Vec::new();
    for (i, j) in pairs_descending(m) {
        let f = match require_fit(ctx, i, j)? {
            Ok(f) => f,
            Err(blocker) => {
                blockers.push(blocker);
                continue;
            }
        };
        for k in 1..=i.gcd(&j) {
            let s = f.poly.g_slice(k);
            if s.is_zero() {
                bad.push(format!("tau({i},{j};{k}) is the zero polynomial"));
                continue;
            }
            let (db, dc) = (s.degree(Var::B), s.degree(Var::C));
            if db != j - k || dc != i - k {
                bad.push(format!(
                    "tau({i},{j};{k}) has degrees ({db},{dc}) in (b,c), expected ({},{})",
                    j - k,
                    i - k
                ));
            }
            if s.coeff(0, j - k, i - k).is_zero() {
                bad.push(format!(
                    "tau({i},{j};{k}) lacks the corner term b^{}c^{}",
                    j - k,
                    i - k
                ));
            }
        }
    }
    let ok = vec![format!(
        "every slice in range attains degrees (j-k, i-k) with a nonzero corner term"
    )];
    Ok(conclude(14, range, bad, blockers, ok, Vec::new()))
}

/// Check 15: for coprime `(i, j)`, the top slice of the multiple entry
/// satisfies `tau(ik, jk; k) = tau(i, j; 1)^k / k!`.
pub(super) fn top_slice_power(ctx: &CheckCtx) -> Result<ConjectureReport> {
    let pm = ctx.ranges().slice_pair_max;
    let km = ctx.ranges().k_max;
    let range = format!("gcd(i,j) = 1, i,j <= {pm}, 2 <= k <= {km}");
    let mut bad = Vec::new();
    let mut blockers = Vec::new();
    let mut checked = 0u32;
    for k in (2..=km).rev() {
        for (i, j) in coprime_pairs_descending(pm) {
            let base = match require_fit(ctx, i, j)? {
                Ok(f) => f,
                Err(blocker) => {
                    blockers.push(blocker);
                    continue;
                }
            };
            let target = match require_fit(ctx, i * k, j * k)? {
                Ok(f) => f,
                Err(blocker) => {
                    blockers.push(blocker);
                    continue;
                }
            };
            let lhs = target.poly.g_slice(k);
            let rhs = base
                .poly
                .g_slice(1)
                .pow(k)
                .scale(&Scalar::new(1.into(), factorial(k)));
            if lhs != rhs {
                bad.push(format!(
                    "tau({},{};{k}) = {lhs} but tau({i},{j};1)^{k}/{k}! = {rhs}",
                    i * k,
                    j * k
                ));
            }
            checked += 1;
        }
    }
    let mut ok = Vec::new();
    if pm >= 1 && km >= 2 {
        if let Ok(f) = require_fit(ctx, 2, 2)? {
            ok.push(format!(
                "tau(2,2;2) = {} = tau(1,1;1)^2/2!",
                f.poly.g_slice(2)
            ));
        }
    }
    ok.push(format!("{checked} instances hold exactly"));
    let notes = vec!["k = 1 is the tautology tau(i,j;1) = tau(i,j;1)/1!".to_string()];
    Ok(conclude(15, range, bad, blockers, ok, notes))
}

/// Shared driver for checks 16 and 17: the ratio
/// `tau(...;k-1) (k-2)! / tau(base;1)^{k-1}` must be polynomial and
/// independent of `k`.  `mirrored = false` fits the row family
/// `(k, j k)` with base `(1, j)`; `true` fits the column family.
fn family_ratio(ctx: &CheckCtx, id: u32, mirrored: bool) -> Result<ConjectureReport> {
    let pm = ctx.ranges().slice_pair_max;
    let km = ctx.ranges().k_max;
    let letter = if mirrored { "i" } else { "j" };
    let range = format!("{letter} <= {pm}, 2 <= k <= {km}");
    let mut bad = Vec::new();
    let mut blockers = Vec::new();
    let mut witnesses = Vec::new();
    for n in 1..=pm {
        let (bi, bj) = if mirrored { (n, 1) } else { (1, n) };
        let base = match require_fit(ctx, bi, bj)? {
            Ok(f) => f,
            Err(blocker) => {
                blockers.push(blocker);
                continue;
            }
        };
        let t1 = base.poly.g_slice(1);
        if t1.is_zero() {
            bad.push(format!("tau({bi},{bj};1) is the zero polynomial"));
            continue;
        }
        let mut family: Vec<(u32, Poly3)> = Vec::new();
        for k in (2..=km).rev() {
            let (ti, tj) = if mirrored { (n * k, k) } else { (k, n * k) };
            let target = match require_fit(ctx, ti, tj)? {
                Ok(f) => f,
                Err(blocker) => {
                    blockers.push(blocker);
                    continue;
                }
            };
            let numerator = target
                .poly
                .g_slice(k - 1)
                .scale(&Scalar::from_integer(factorial(k - 2)));
            match poly_div_exact(&numerator, &t1.pow(k - 1)) {
                Some(r) => family.push((k, r)),
                None => bad.push(format!(
                    "(k-2)! tau({ti},{tj};{}) is not divisible by tau({bi},{bj};1)^{}",
                    k - 1,
                    k - 1
                )),
            }
        }
        if let Some((_, first)) = family.first() {
            if family.iter().any(|(_, r)| r != first) {
                let shapes: Vec<String> = family
                    .iter()
                    .map(|(k, r)| format!("k = {k}: {r}"))
                    .collect();
                bad.push(format!(
                    "the ratio for {letter} = {n} depends on k: {}",
                    shapes.join("; ")
                ));
            } else {
                witnesses.push(format!(
                    "p ({letter} = {n}) = {first} (primitive form {})",
                    primitive_part(first)
                ));
            }
        }
    }
    let notes = vec![
        "the displayed (k-2)! leaves k = 1 undefined; checked for k >= 2 only".to_string(),
    ];
    Ok(conclude(id, range, bad, blockers, witnesses, notes))
}

/// Check 16: `tau(k, jk; k-1) = tau(1, j; 1)^{k-1} p_j / (k-2)!` with
/// `p_j` independent of `k`.
pub(super) fn row_family_ratio(ctx: &CheckCtx) -> Result<ConjectureReport> {
    family_ratio(ctx, 16, false)
}

/// Check 17: `tau(ik, k; k-1) = tau(i, 1; 1)^{k-1} p_i / (k-2)!` with
/// `p_i` independent of `k`.
pub(super) fn column_family_ratio(ctx: &CheckCtx) -> Result<ConjectureReport> {
    family_ratio(ctx, 17, true)
}

/// Divides out of `q` every factor it shares with `f`, one gcd at a
/// time.  Returns the chain of gcds (each dividing the previous) and the
/// remaining factor, kept primitive.
fn strip_factors(q: &Poly3, f: &Poly3) -> (Vec<Poly3>, Poly3) {
    let mut rest = primitive_part(q);
    let mut chain = Vec::new();
    loop {
        let d = poly_gcd(&rest, f);
        if d.degree(Var::G) == 0 && d.degree(Var::B) == 0 && d.degree(Var::C) == 0 {
            break;
        }
        rest = poly_div_exact(&rest, &d).expect("a gcd divides its arguments");
        chain.push(d);
    }
    (chain, rest)
}

/// Renders the chain from [`strip_factors`] as an exponent pattern: the
/// ratio of consecutive chain entries collects the factors whose
/// exponent in `q` is exactly the chain position.
fn exponent_pattern(chain: &[Poly3]) -> Vec<String> {
    let one = Poly3::one();
    let mut out = Vec::new();
    for (t, d) in chain.iter().enumerate() {
        let next = chain.get(t + 1).unwrap_or(&one);
        let u = poly_div_exact(d, next).expect("chain entries divide in sequence");
        if u != one {
            out.push(format!("({u})^{}", t + 1));
        }
    }
    out
}

/// Check 18: for coprime `(i, j)`, after dividing out of
/// `tau(ki, kj; k-1)` every factor shared with `tau(i, j; 1)`, the
/// remaining factor is independent of `k`.  The exponent pattern of the
/// shared factors is reported without asserting a law.
pub(super) fn factor_pattern(ctx: &CheckCtx) -> Result<ConjectureReport> {
    let pm = ctx.ranges().slice_pair_max;
    let km = ctx.ranges().k_max;
    let range = format!("gcd(i,j) = 1, i,j <= {pm}, 2 <= k <= {km}");
    let mut bad = Vec::new();
    let mut blockers = Vec::new();
    let mut witnesses = Vec::new();
    let mut notes = Vec::new();
    for (i, j) in coprime_pairs_descending(pm) {
        let base = match require_fit(ctx, i, j)? {
            Ok(f) => f,
            Err(blocker) => {
                blockers.push(blocker);
                continue;
            }
        };
        let t1 = base.poly.g_slice(1);
        if t1.is_zero() {
            bad.push(format!("tau({i},{j};1) is the zero polynomial"));
            continue;
        }
        let f = primitive_part(&t1);
        let mut rests: Vec<(u32, Poly3)> = Vec::new();
        for k in (2..=km).rev() {
            let target = match require_fit(ctx, i * k, j * k)? {
                Ok(t) => t,
                Err(blocker) => {
                    blockers.push(blocker);
                    continue;
                }
            };
            let q = target.poly.g_slice(k - 1);
            if q.is_zero() {
                bad.push(format!("tau({},{};{}) is zero", i * k, j * k, k - 1));
                continue;
            }
            let (chain, rest) = strip_factors(&q, &f);
            let pattern = exponent_pattern(&chain);
            notes.push(format!(
                "(i,j) = ({i},{j}), k = {k}: shared-factor part {}",
                if pattern.is_empty() {
                    "1 (no common factors)".to_string()
                } else {
                    pattern.join(" * ")
                }
            ));
            rests.push((k, rest));
        }
        if let Some((_, first)) = rests.first() {
            if rests.iter().any(|(_, r)| r != first) {
                let shapes: Vec<String> = rests
                    .iter()
                    .map(|(k, r)| format!("k = {k}: {r}"))
                    .collect();
                bad.push(format!(
                    "the residual factor for (i,j) = ({i},{j}) depends on k: {}",
                    shapes.join("; ")
                ));
            } else {
                witnesses.push(format!("p ({i},{j}) = {first}"));
            }
        }
    }
    notes.push("the exponent pattern of the shared factors is reported, not asserted".to_string());
    Ok(conclude(18, range, bad, blockers, witnesses, notes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conjectures::{check, check_all, CheckCtx, Ranges, Status};
    use crate::fit::EngineSource;
    use crate::ring::ratio;

    fn s(v: i64) -> Scalar {
        int(v)
    }

    #[test]
    fn unimodality_and_log_concavity() {
        assert!(unimodal(&[s(0), s(1), s(3), s(2)]));
        assert!(unimodal(&[s(1), s(1), s(1)]));
        assert!(!unimodal(&[s(0), ratio(1, 2), ratio(-3, 2), s(1)]));
        assert!(log_concave(&[s(1), s(3), s(3), s(1)]));
        assert!(!log_concave(&[s(1), s(1), s(2)]));
        assert!(unimodal(&[s(5)]) && log_concave(&[s(5)]));
    }

    #[test]
    fn factor_stripping_recovers_exponents() {
        let b = Poly3::var(Var::B);
        let c = Poly3::var(Var::C);
        let one = Poly3::one();
        let u = b.sub(&one); // b - 1
        let v = b.add(&c); // b + c
        let rest_true = b.mul(&b).add(&c.mul(&c)).add(&one); // b^2 + c^2 + 1
        let f = u.mul(&v);
        let q = u.pow(3).mul(&v.pow(2)).mul(&rest_true);
        let (chain, rest) = strip_factors(&q, &f);
        assert_eq!(rest, rest_true);
        assert_eq!(chain.len(), 3);
        assert_eq!(chain[0], primitive_part(&f));
        assert_eq!(chain[1], primitive_part(&f));
        assert_eq!(chain[2], primitive_part(&u));
        let pattern = exponent_pattern(&chain);
        assert_eq!(pattern, vec!["(b + c)^2".to_string(), "(b - 1)^3".to_string()]);
    }

    #[test]
    fn sum_form_check_needs_no_engine() {
        let source = EngineSource::new();
        let ctx = CheckCtx::new(&source, Ranges::default());
        let report = check(8, &ctx).unwrap();
        assert_eq!(report.status, Status::Verified);
        assert_eq!(source.tables_held(), 0);
    }

    #[test]
    fn double_index_check_matches_engine() {
        let source = EngineSource::new();
        let ctx = CheckCtx::new(&source, Ranges::default());
        let report = check(13, &ctx).unwrap();
        assert_eq!(report.status, Status::Verified);
        assert!(report.witnesses[0].contains("2, 5, 17, 64, 259, 1098"));
    }

    #[test]
    fn unknown_id_is_a_usage_error() {
        let source = EngineSource::new();
        let ctx = CheckCtx::new(&source, Ranges::default());
        assert!(check(0, &ctx).is_err());
        assert!(check(19, &ctx).is_err());
    }

    #[test]
    fn small_range_full_suite_verifies_and_is_reproducible() {
        let source = EngineSource::new();
        let ranges = Ranges {
            fit_max: 2,
            sum_max: 20,
            bc_max: 3,
            k_max: 2,
            bb_sum_max: 4,
            slice_pair_max: 1,
        };
        let ctx = CheckCtx::new(&source, ranges.clone());
        let first = check_all(&ctx).unwrap();
        assert_eq!(first.len(), 18);
        for report in &first {
            assert_eq!(
                report.status,
                Status::Verified,
                "check {} reported {:?}",
                report.id,
                report
            );
        }
        let ctx2 = CheckCtx::new(&source, ranges);
        let second = check_all(&ctx2).unwrap();
        assert_eq!(first, second);
    }
}
