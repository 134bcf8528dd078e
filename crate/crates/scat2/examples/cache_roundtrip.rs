//! Persists a computed table to the text cache format, reads it back,
//! and confirms the round-trip is exact; then does the same for a small
//! symbolic cache of fitted polynomials.
//!
//! ```text
//! cargo run --release --example cache_roundtrip
//! ```

use scat2::engine::compute_csd;
use scat2::fit::{fit_default, EngineSource};
use scat2::shell::{decode, encode, write_atomic, Cache, SymbolicTable};

fn main() -> scat2::Result<()> {
    let dir = std::env::temp_dir();

    let table = compute_csd(3, 2, 12)?;
    let path = dir.join("scat2_example_numeric.tau");
    write_atomic(&path, &encode(&Cache::Numeric(table.clone())))?;
    let text = std::fs::read_to_string(&path)?;
    let decoded = decode(&text)?;
    assert_eq!(decoded, Cache::Numeric(table));
    println!("numeric cache round-trip ok: {} ({} bytes)", path.display(), text.len());

    let source = EngineSource::new();
    let mut symbolic = SymbolicTable::new(6);
    for (i, j) in [(1, 1), (2, 2), (3, 2)] {
        let fit = fit_default(i, j, &source)?;
        assert!(fit.validated);
        symbolic.insert(i, j, fit.poly);
    }
    let path = dir.join("scat2_example_symbolic.tau");
    write_atomic(&path, &encode(&Cache::Symbolic(symbolic.clone())))?;
    let text = std::fs::read_to_string(&path)?;
    assert_eq!(decode(&text)?, Cache::Symbolic(symbolic));
    println!("symbolic cache round-trip ok: {} ({} bytes)", path.display(), text.len());
    print!("{text}");
    Ok(())
}
