//! Command-line front end.
//!
//! Exit codes: `0` success (all checks verified), `1` falsification or
//! inconsistency detected, `2` usage or I/O error.  All diagnostics go to
//! the error stream; machine-readable text goes to the output stream.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use crate::conjectures::{check, check_all, CheckCtx, ConjectureReport, Ranges};
use crate::engine::{compute_csd, verify_consistency, Diagram, TauTable};
use crate::fit::{fit_square, fit_tau_poly, EngineSource, FitResult, FitSpec};
use crate::shell::cache::{self, Cache, SymbolicTable};
use crate::{Error, Result};

#[derive(Parser)]
#[command(
    name = "scat2",
    version,
    about = "Exact scattering-term tables for rank-2 cluster diagrams",
    disable_help_subcommand = true
)]
struct Cli {
    /// Worker threads for the engine and fitting pools (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the engine for one (b, c) and emit the numeric table.
    Compute {
        #[arg(long)]
        b: u32,
        #[arg(long)]
        c: u32,
        /// Total-degree cutoff.
        #[arg(long)]
        degree: u32,
        /// Write the cache here (atomically) instead of standard output.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Pretty-print a table as a grid with (0,0) at the bottom left.
    Table {
        #[arg(long)]
        b: Option<u32>,
        #[arg(long)]
        c: Option<u32>,
        #[arg(long)]
        degree: Option<u32>,
        /// Read a numeric cache instead of running the engine.
        #[arg(long = "in", value_name = "PATH")]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 7)]
        imax: u32,
        #[arg(long, default_value_t = 7)]
        jmax: u32,
    },
    /// Reconstruct entries as polynomials in (b, c, g).
    Fit {
        /// Single target: first index.
        #[arg(long)]
        i: Option<u32>,
        /// Single target: second index.
        #[arg(long)]
        j: Option<u32>,
        /// Fit the whole block 1..=imax x 1..=jmax instead.
        #[arg(long)]
        imax: Option<u32>,
        #[arg(long)]
        jmax: Option<u32>,
        /// Rectangular sample grid `bmin:bmax,cmin:cmax` (default: a
        /// structured grid chosen per target).
        #[arg(long, value_name = "SPEC")]
        grid: Option<String>,
        /// Number of held-out validation pairs.
        #[arg(long, value_name = "N")]
        holdout: Option<usize>,
        /// Write a symbolic cache here instead of standard output.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Run the conjecture checks and print one report per check.
    Verify {
        #[command(flatten)]
        scope: CheckScope,
    },
    /// Recompute and report loop defects for a parameter pair or a cache.
    Consistency {
        #[arg(long)]
        b: Option<u32>,
        #[arg(long)]
        c: Option<u32>,
        #[arg(long)]
        degree: Option<u32>,
        /// Check a numeric cache against a fresh engine run.
        #[arg(long = "in", value_name = "PATH")]
        input: Option<PathBuf>,
    },
    /// Canonicalize a cache file, or write check reports as records.
    Export {
        /// Cache file to canonicalize (numeric or symbolic).
        #[arg(long = "in", value_name = "PATH")]
        input: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
        #[command(flatten)]
        scope: CheckScope,
    },
}

/// Range flags shared by `verify` and `export`.
#[derive(Args)]
struct CheckScope {
    /// Which check to run: `all` or a number 1..18.
    #[arg(long, value_name = "all|N")]
    conjecture: Option<String>,
    /// Fit range bound (default 8); also scales the equal-parameter range.
    #[arg(long)]
    imax: Option<u32>,
    /// Numeric sweep bound on b (default 6).
    #[arg(long)]
    bmax: Option<u32>,
    /// Numeric sweep bound on c (default 6).
    #[arg(long)]
    cmax: Option<u32>,
    /// Largest multiple k for the slice checks (default 4).
    #[arg(long)]
    kmax: Option<u32>,
}

impl CheckScope {
    fn ranges(&self) -> Ranges {
        let mut r = Ranges::default();
        if let Some(m) = self.imax {
            r.fit_max = m;
            r.bb_sum_max = m + 2;
            r.slice_pair_max = r.slice_pair_max.min(m);
        }
        if self.bmax.is_some() || self.cmax.is_some() {
            r.bc_max = self.bmax.unwrap_or(0).max(self.cmax.unwrap_or(0)).max(1);
        }
        if let Some(k) = self.kmax {
            r.k_max = k;
        }
        r
    }

    fn selection(&self) -> Result<Option<u32>> {
        match self.conjecture.as_deref() {
            None | Some("all") => Ok(None),
            Some(text) => match text.parse::<u32>() {
                Ok(n) if (1..=18).contains(&n) => Ok(Some(n)),
                _ => Err(Error::Usage(format!(
                    "--conjecture takes `all` or a number 1..18, got `{text}`"
                ))),
            },
        }
    }
}

/// Parses arguments, runs one subcommand, and reports through the two
/// streams.  Never panics on bad input; the return value is the process
/// exit code.
pub fn run_with<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{rendered}");
                    0
                }
                _ => {
                    let _ = write!(err, "{rendered}");
                    2
                }
            };
        }
    };
    if let Some(n) = cli.jobs {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    let outcome = match cli.cmd {
        Cmd::Compute { b, c, degree, out: path } => cmd_compute(b, c, degree, path, out),
        Cmd::Table {
            b,
            c,
            degree,
            input,
            imax,
            jmax,
        } => cmd_table(b, c, degree, input, imax, jmax, out),
        Cmd::Fit {
            i,
            j,
            imax,
            jmax,
            grid,
            holdout,
            out: path,
        } => cmd_fit(i, j, imax, jmax, grid, holdout, path, out, err),
        Cmd::Verify { scope } => cmd_verify(&scope, out),
        Cmd::Consistency {
            b,
            c,
            degree,
            input,
        } => cmd_consistency(b, c, degree, input, out),
        Cmd::Export { input, out: path, scope } => cmd_export(input, &path, &scope, out),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code_for(&e)
        }
    }
}

/// Falsification-class errors exit 1; everything else that escapes a
/// subcommand is a usage, I/O, or domain error and exits 2.
fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::Inconsistent { .. } | Error::FitInvalid { .. } | Error::Singular { .. } => 1,
        _ => 2,
    }
}

fn emit(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => cache::write_atomic(p, text),
        None => {
            out.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn cmd_compute(
    b: u32,
    c: u32,
    degree: u32,
    path: Option<PathBuf>,
    out: &mut dyn Write,
) -> Result<i32> {
    let table = compute_csd(b, c, degree)?;
    emit(path.as_deref(), &cache::encode(&Cache::Numeric(table)), out)?;
    Ok(0)
}

/// The grid as printed: rows from `jmax` down to 0, columns left to
/// right, cells right-aligned per column, `?` beyond the cutoff.
fn render_grid(table: &TauTable, imax: u32, jmax: u32) -> String {
    let cell = |i: u32, j: u32| match table.get(i, j) {
        Ok(v) => v.to_string(),
        Err(_) => "?".to_string(),
    };
    let widths: Vec<usize> = (0..=imax)
        .map(|i| (0..=jmax).map(|j| cell(i, j).len()).max().unwrap_or(1))
        .collect();
    let mut grid = String::new();
    for j in (0..=jmax).rev() {
        let row: Vec<String> = (0..=imax)
            .map(|i| format!("{:>width$}", cell(i, j), width = widths[i as usize]))
            .collect();
        grid.push_str(row.join("  ").trim_end());
        grid.push('\n');
    }
    grid
}

fn cmd_table(
    b: Option<u32>,
    c: Option<u32>,
    degree: Option<u32>,
    input: Option<PathBuf>,
    imax: u32,
    jmax: u32,
    out: &mut dyn Write,
) -> Result<i32> {
    let table = match (input, b, c, degree) {
        (Some(path), None, None, None) => match cache::decode(&std::fs::read_to_string(path)?)? {
            Cache::Numeric(t) => t,
            Cache::Symbolic(_) => {
                return Err(Error::Usage(
                    "table expects a numeric cache; this file is symbolic".into(),
                ))
            }
        },
        (None, Some(b), Some(c), Some(d)) => compute_csd(b, c, d)?,
        _ => {
            return Err(Error::Usage(
                "table needs either --in PATH or all of --b --c --degree".into(),
            ))
        }
    };
    out.write_all(render_grid(&table, imax, jmax).as_bytes())?;
    Ok(0)
}

fn parse_grid_spec(spec: &str) -> Result<((u32, u32), (u32, u32))> {
    let usage = || {
        Error::Usage(format!(
            "--grid takes `bmin:bmax,cmin:cmax` with positive integers, got `{spec}`"
        ))
    };
    let mut axes = spec.split(',');
    let axis = |text: Option<&str>| -> Result<(u32, u32)> {
        let mut ends = text.ok_or_else(usage)?.split(':');
        let lo = ends.next().and_then(|t| t.parse().ok()).ok_or_else(usage)?;
        let hi = ends.next().and_then(|t| t.parse().ok()).ok_or_else(usage)?;
        if ends.next().is_some() {
            return Err(usage());
        }
        Ok((lo, hi))
    };
    let b = axis(axes.next())?;
    let c = axis(axes.next())?;
    if axes.next().is_some() {
        return Err(usage());
    }
    Ok((b, c))
}

fn fit_summary(f: &FitResult, err: &mut dyn Write) -> Result<()> {
    if f.validated {
        writeln!(
            err,
            "tau({},{}): validated on {} samples, {} holdout pairs, {} spot checks",
            f.i, f.j, f.samples_used, f.holdout_checked, f.spot_checked
        )?;
    } else {
        writeln!(err, "tau({},{}): no polynomial found", f.i, f.j)?;
        for note in &f.notes {
            writeln!(err, "  note: {note}")?;
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_fit(
    i: Option<u32>,
    j: Option<u32>,
    imax: Option<u32>,
    jmax: Option<u32>,
    grid: Option<String>,
    holdout: Option<usize>,
    path: Option<PathBuf>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32> {
    let source = EngineSource::new();
    let results: BTreeMap<(u32, u32), FitResult> = match (i, j, imax, jmax) {
        (Some(i), Some(j), None, None) => {
            let mut spec = match &grid {
                Some(text) => {
                    let (b_range, c_range) = parse_grid_spec(text)?;
                    FitSpec::with_rect_grid(i, j, b_range, c_range, holdout.unwrap_or(5))?
                }
                None => FitSpec::default_for(i, j)?,
            };
            if grid.is_none() {
                if let Some(n) = holdout {
                    spec.holdout.truncate(n.max(1));
                }
            }
            let mut results = BTreeMap::new();
            results.insert((i, j), fit_tau_poly(&spec, &source)?);
            results
        }
        (None, None, Some(im), Some(jm)) => {
            if grid.is_some() || holdout.is_some() {
                return Err(Error::Usage(
                    "--grid and --holdout apply to single targets only".into(),
                ));
            }
            fit_square(im, jm, &source)?
        }
        _ => {
            return Err(Error::Usage(
                "fit needs either --i and --j, or --imax and --jmax".into(),
            ))
        }
    };
    let cutoff = results.keys().map(|&(i, j)| i + j).max().unwrap_or(2);
    let mut table = SymbolicTable::new(cutoff);
    let mut failures = 0;
    for ((i, j), f) in &results {
        fit_summary(f, err)?;
        if f.validated {
            table.insert(*i, *j, f.poly.clone());
        } else {
            failures += 1;
        }
    }
    emit(path.as_deref(), &cache::encode(&Cache::Symbolic(table)), out)?;
    Ok(if failures > 0 { 1 } else { 0 })
}

fn run_checks(scope: &CheckScope) -> Result<Vec<ConjectureReport>> {
    let source = EngineSource::new();
    let ctx = CheckCtx::new(&source, scope.ranges());
    match scope.selection()? {
        None => check_all(&ctx),
        Some(n) => Ok(vec![check(n, &ctx)?]),
    }
}

fn cmd_verify(scope: &CheckScope, out: &mut dyn Write) -> Result<i32> {
    let reports = run_checks(scope)?;
    let mut falsified = 0;
    for r in &reports {
        writeln!(out, "{}", cache::report_record(r))?;
        for note in &r.notes {
            writeln!(out, "  note: {note}")?;
        }
        if r.is_falsified() {
            falsified += 1;
        }
    }
    Ok(if falsified > 0 { 1 } else { 0 })
}

fn cmd_consistency(
    b: Option<u32>,
    c: Option<u32>,
    degree: Option<u32>,
    input: Option<PathBuf>,
    out: &mut dyn Write,
) -> Result<i32> {
    let (table, label, mut bad) = match (input, b, c, degree) {
        (Some(path), None, None, None) => {
            let text = std::fs::read_to_string(&path)?;
            let Cache::Numeric(cached) = cache::decode(&text)? else {
                return Err(Error::Usage(
                    "consistency expects a numeric cache; this file is symbolic".into(),
                ));
            };
            let fresh = compute_csd(cached.b(), cached.c(), cached.cutoff())?;
            let mut bad = 0;
            for d in 2..=cached.cutoff() {
                for i in 1..d {
                    let j = d - i;
                    let (have, want) = (cached.get(i, j)?, fresh.get(i, j)?);
                    if have != want {
                        writeln!(
                            out,
                            "mismatch at tau({i},{j}): cache has {have}, engine computes {want}"
                        )?;
                        bad += 1;
                    }
                }
            }
            let label = format!("{} against a fresh run", path.display());
            (cached, label, bad)
        }
        (None, Some(b), Some(c), Some(d)) => {
            let table = compute_csd(b, c, d)?;
            (table, format!("(b,c) = ({b},{c})"), 0)
        }
        _ => {
            return Err(Error::Usage(
                "consistency needs either --in PATH or all of --b --c --degree".into(),
            ))
        }
    };
    let diagram = Diagram::from_table(&table)?;
    for defect in verify_consistency(&diagram) {
        for ((p, q), z1, z2) in &defect.terms {
            writeln!(
                out,
                "defect at degree {}: cell ({p},{q}) carries ({z1}, {z2})",
                defect.degree
            )?;
            bad += 1;
        }
    }
    if bad == 0 {
        writeln!(
            out,
            "consistent: {label} has no loop defects through degree {}",
            table.cutoff()
        )?;
        Ok(0)
    } else {
        writeln!(out, "inconsistent: {bad} defects for {label}")?;
        Ok(1)
    }
}

fn cmd_export(
    input: Option<PathBuf>,
    path: &Path,
    scope: &CheckScope,
    out: &mut dyn Write,
) -> Result<i32> {
    if let Some(input) = input {
        if scope.conjecture.is_some() {
            return Err(Error::Usage(
                "export takes either --in (canonicalize a cache) or --conjecture (write reports)"
                    .into(),
            ));
        }
        let decoded = cache::decode(&std::fs::read_to_string(&input)?)?;
        cache::write_atomic(path, &cache::encode(&decoded))?;
        writeln!(out, "canonicalized {} -> {}", input.display(), path.display())?;
        return Ok(0);
    }
    let reports = run_checks(scope)?;
    cache::write_atomic(path, &cache::encode_reports(&reports))?;
    let falsified = reports.iter().filter(|r| r.is_falsified()).count();
    writeln!(out, "wrote {} reports to {}", reports.len(), path.display())?;
    Ok(if falsified > 0 { 1 } else { 0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_specs_parse_or_reject() {
        assert_eq!(parse_grid_spec("1:8,2:9").unwrap(), ((1, 8), (2, 9)));
        assert!(parse_grid_spec("1:8").is_err());
        assert!(parse_grid_spec("1:8,2:9,3:4").is_err());
        assert!(parse_grid_spec("a:8,2:9").is_err());
        assert!(parse_grid_spec("1:8:3,2:9").is_err());
    }

    #[test]
    fn scope_translates_flags_to_ranges() {
        let scope = CheckScope {
            conjecture: Some("7".into()),
            imax: Some(6),
            bmax: Some(5),
            cmax: Some(5),
            kmax: Some(2),
        };
        let r = scope.ranges();
        assert_eq!(r.fit_max, 6);
        assert_eq!(r.bb_sum_max, 8);
        assert_eq!(r.bc_max, 5);
        assert_eq!(r.k_max, 2);
        assert_eq!(scope.selection().unwrap(), Some(7));
        let bad = CheckScope {
            conjecture: Some("19".into()),
            imax: None,
            bmax: None,
            cmax: None,
            kmax: None,
        };
        assert!(bad.selection().is_err());
    }

    #[test]
    fn rendered_grid_marks_cells_beyond_the_cutoff() {
        let table = compute_csd(3, 2, 5).unwrap();
        let grid = render_grid(&table, 3, 3);
        let lines: Vec<&str> = grid.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "0  1  14  ?");
        assert_eq!(lines[1], "0  1   2  1");
        assert_eq!(lines[2], "1  1   1  0");
        assert_eq!(lines[3], "1  1   0  0");
    }
}
