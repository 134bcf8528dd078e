//! Runs the whole bank of structural checks against engine data and
//! prints one verdict per check.
//!
//! ```text
//! cargo run --release --example conjecture_scan
//! ```

use std::time::Instant;

use scat2::conjectures::{check_all, CheckCtx, Ranges};
use scat2::fit::EngineSource;

fn main() -> scat2::Result<()> {
    let source = EngineSource::new();
    let ranges = Ranges::default();
    println!(
        "checking with fit range {0}x{0}, numeric sweep up to b,c = {1}, multiples up to k = {2}",
        ranges.fit_max, ranges.bc_max, ranges.k_max
    );
    let ctx = CheckCtx::new(&source, ranges);
    let started = Instant::now();
    let mut failures = 0;
    for report in check_all(&ctx)? {
        println!("conj {:>2}  {:<12}  [{}]", report.id, report.status.to_string(), report.range);
        for w in &report.witnesses {
            println!("         witness: {w}");
        }
        for n in &report.notes {
            println!("         note: {n}");
        }
        if report.is_falsified() {
            failures += 1;
        }
    }
    println!(
        "done in {:.1?} using {} engine tables; {failures} falsified",
        started.elapsed(),
        source.tables_held()
    );
    Ok(())
}
