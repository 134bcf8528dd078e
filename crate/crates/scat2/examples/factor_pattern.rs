//! Strips out of the top `g`-slice of a multiple entry every factor it
//! shares with the base slice: for coprime `(i, j)` and `k = 2, 3, 4`,
//! repeatedly divides `tau(ki, kj; k-1)` by its gcd with `tau(i, j; 1)`
//! and prints the exponent pattern of the shared factors together with
//! the remaining `k`-independent factor.
//!
//! ```text
//! cargo run --release --example factor_pattern -- 2 3
//! ```

use scat2::fit::{fit_default, EngineSource};
use scat2::ring::{poly_div_exact, poly_gcd, primitive_part, Poly3, Var};

/// Chain of gcds with `f`, each dividing the previous, plus the factor
/// of `q` left over once nothing is shared any more.
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

fn main() -> scat2::Result<()> {
    let mut args = std::env::args().skip(1);
    let mut next = |default: u32| {
        args.next()
            .map(|s| s.parse().expect("arguments are positive integers"))
            .unwrap_or(default)
    };
    let (i, j) = (next(2), next(3));

    let source = EngineSource::new();
    let base = fit_default(i, j, &source)?;
    assert!(base.validated, "tau({i},{j}) did not reconstruct");
    let t1 = primitive_part(&base.poly.g_slice(1));
    println!("tau({i},{j};1), primitive form: {t1}");

    for k in 2..=4u32 {
        let target = fit_default(k * i, k * j, &source)?;
        assert!(target.validated, "tau({},{}) did not reconstruct", k * i, k * j);
        let (chain, rest) = strip_factors(&target.poly.g_slice(k - 1), &t1);
        // The ratio of consecutive chain entries collects the factors
        // whose exponent is exactly the chain position.
        let one = Poly3::one();
        let mut pattern = Vec::new();
        for (t, d) in chain.iter().enumerate() {
            let next = chain.get(t + 1).unwrap_or(&one);
            let u = poly_div_exact(d, next).expect("chain entries divide in sequence");
            if u != one {
                pattern.push(format!("({u})^{}", t + 1));
            }
        }
        println!(
            "tau({},{};{}) shared part: {}",
            k * i,
            k * j,
            k - 1,
            if pattern.is_empty() { "1".to_string() } else { pattern.join(" ") }
        );
        println!("  remaining factor: {rest}");
    }
    println!("engine tables computed: {}", source.tables_held());
    Ok(())
}
