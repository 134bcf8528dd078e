//! Computes one numeric table and prints it the way the tables in the
//! source layout read: `(0,0)` at the bottom left, `i` increasing to the
//! right, `j` increasing upward.
//!
//! ```text
//! cargo run --release --example print_table -- 3 2 14
//! ```

use scat2::engine::compute_csd;

fn main() -> scat2::Result<()> {
    let mut args = std::env::args().skip(1);
    let mut next = |default: u32| {
        args.next()
            .map(|s| s.parse().expect("arguments are positive integers"))
            .unwrap_or(default)
    };
    let (b, c, cutoff) = (next(3), next(2), next(14));
    let table = compute_csd(b, c, cutoff)?;

    let side = cutoff.min(9);
    let cells: Vec<Vec<String>> = (0..=side)
        .map(|j| {
            (0..=side)
                .map(|i| match table.get(i, j) {
                    Ok(v) => v.to_string(),
                    Err(_) => "?".to_string(),
                })
                .collect()
        })
        .collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);

    println!("tau({b},{c}) up to total degree {cutoff}:");
    for j in (0..=side).rev() {
        let row: Vec<String> = (0..=side)
            .map(|i| format!("{:>width$}", cells[j as usize][i as usize]))
            .collect();
        println!("  {}", row.join(" "));
    }
    Ok(())
}
