//! Reconstructs one scattering coefficient as an exact polynomial in the
//! parameters `b`, `c` and the divisor factor `g = gcd(i*b, j*c) / gcd(i, j)`.
//!
//! Usage: cargo run --release --example symbolic_tau -- [i] [j]

use scat2::fit::{fit_default, tau_g_coeff, EngineSource};

fn main() -> scat2::Result<()> {
    let mut args = std::env::args().skip(1);
    let i: u32 = args.next().as_deref().unwrap_or("3").parse().expect("i");
    let j: u32 = args.next().as_deref().unwrap_or("2").parse().expect("j");

    let source = EngineSource::new();
    let start = std::time::Instant::now();
    let fit = fit_default(i, j, &source)?;
    let elapsed = start.elapsed();

    println!("tau({i},{j}) = {}", fit.poly);
    println!();
    println!("by powers of g:");
    for k in (0..=fit.achieved_deg_g).rev() {
        let slice = tau_g_coeff(&fit, k);
        if !slice.is_zero() {
            println!("  g^{k} * ( {slice} )");
        }
    }
    println!();
    println!(
        "degrees (b, c, g) = ({}, {}, {}); {} samples, {} holdout, {} spot checks; \
         validated: {}; {} tables solved in {elapsed:.2?}",
        fit.achieved_deg_b,
        fit.achieved_deg_c,
        fit.achieved_deg_g,
        fit.samples_used,
        fit.holdout_checked,
        fit.spot_checked,
        fit.validated,
        source.tables_held(),
    );
    Ok(())
}
