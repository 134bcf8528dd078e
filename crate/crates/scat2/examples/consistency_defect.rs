//! Shows the loop-transport identity doing its job: a freshly solved
//! diagram transports to the identity, and corrupting a single
//! coefficient produces a visible defect at that degree.
//!
//! ```text
//! cargo run --release --example consistency_defect
//! ```

use scat2::engine::{compute_csd, verify_consistency, Diagram};
use scat2::ring::int;

fn main() -> scat2::Result<()> {
    let (b, c, cutoff) = (3, 2, 10);
    let table = compute_csd(b, c, cutoff)?;
    let clean = verify_consistency(&Diagram::from_table(&table)?);
    println!(
        "solved table for (b,c) = ({b},{c}) up to degree {cutoff}: {} defects",
        clean.len()
    );

    let mut corrupted = table.clone();
    corrupted.set(2, 3, int(13)); // true value is 14
    let defects = verify_consistency(&Diagram::from_table(&corrupted)?);
    println!("after setting tau(2,3) = 13: {} defective degrees", defects.len());
    for report in defects {
        for ((p, q), z1, z2) in &report.terms {
            println!(
                "  degree {}: cell ({p},{q}) carries ({z1}, {z2})",
                report.degree
            );
        }
    }
    Ok(())
}
