//! Randomized properties across the stack: series algebra, the two
//! transport implementations, text round-trips, exact linear algebra,
//! and the engine's symmetries.

use std::str::FromStr;

use proptest::collection::vec;
use proptest::prelude::*;

use scat2::engine::{compute_csd, transport, transport_reference, Diagram, TauTable};
use scat2::fit::{fit_default, EngineSource};
use scat2::ring::{
    binom_basis_expand, binom_int, int, poly_div_exact, poly_gcd, primitive_part, ratio,
    solve_exact, Poly3, Scalar, UniPoly,
};
use scat2::series::{series_mul, unit_pow, Series2};
use scat2::Error;

fn scalar() -> impl Strategy<Value = Scalar> {
    (-20i64..=20, 1i64..=10).prop_map(|(p, q)| ratio(p, q))
}

/// A truncated series with the given constant term and a few random
/// higher-order terms.
fn series(cutoff: u32, constant: i64) -> impl Strategy<Value = Series2> {
    let term = ((0..=cutoff, 0..=cutoff), scalar());
    vec(term, 0..6).prop_map(move |terms| {
        let mut s = Series2::zero(cutoff);
        s.add_term(0, 0, int(constant));
        for ((p, q), coeff) in terms {
            if p + q >= 1 && p + q <= cutoff {
                s.add_term(p, q, coeff);
            }
        }
        s
    })
}

fn poly3(max_terms: usize) -> impl Strategy<Value = Poly3> {
    let term = ((0u32..=3, 0u32..=3, 0u32..=3), scalar());
    vec(term, 0..=max_terms).prop_map(|terms| {
        let mut p = Poly3::zero();
        for ((eg, eb, ec), coeff) in terms {
            p.add_term(eg, eb, ec, coeff);
        }
        p
    })
}

/// A random sparse table of interior entries, used to build diagrams
/// with arbitrary wall coefficients.
fn tau_table() -> impl Strategy<Value = TauTable> {
    let entry = ((1u32..=5, 1u32..=5), scalar());
    (1u32..=4, 1u32..=4, 4u32..=6, vec(entry, 0..5)).prop_map(|(b, c, cutoff, entries)| {
        let mut t = TauTable::new(b, c, cutoff);
        for ((i, j), value) in entries {
            if i + j <= cutoff {
                t.set(i, j, value);
            }
        }
        t
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn series_multiplication_commutes_and_distributes(
        a in series(5, 2),
        b in series(5, -1),
        c in series(5, 3),
    ) {
        let ab = series_mul(&a, &b).unwrap();
        prop_assert_eq!(&ab, &series_mul(&b, &a).unwrap());
        let bc_sum = b.add(&c).unwrap();
        let lhs = series_mul(&a, &bc_sum).unwrap();
        let rhs = series_mul(&a, &b).unwrap().add(&series_mul(&a, &c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn unit_powers_cancel_and_compose(f in series(5, 1), e in -4i64..=4) {
        let pos = unit_pow(&f, e).unwrap();
        let neg = unit_pow(&f, -e).unwrap();
        prop_assert_eq!(series_mul(&pos, &neg).unwrap(), Series2::one(5));
        let twice = unit_pow(&f, 2 * e).unwrap();
        prop_assert_eq!(series_mul(&pos, &pos).unwrap(), twice);
    }

    #[test]
    fn non_units_are_rejected(f in series(5, 4)) {
        match unit_pow(&f, 2) {
            Err(Error::NotAUnit(_)) => {}
            other => prop_assert!(false, "expected NotAUnit, got {:?}", other),
        }
    }

    #[test]
    fn poly3_text_form_round_trips(p in poly3(6)) {
        let text = p.to_string();
        prop_assert_eq!(Poly3::from_str(&text).unwrap(), p);
    }

    #[test]
    fn binomial_basis_reproduces_the_polynomial(coeffs in vec(scalar(), 1..6)) {
        let p = UniPoly::from_coeffs(coeffs);
        let basis = binom_basis_expand(&p);
        for x in 0..=p.degree().unwrap_or(0) as i64 + 2 {
            let direct = p.eval(&int(x));
            let viabasis: Scalar = basis
                .iter()
                .enumerate()
                .map(|(k, a)| a * Scalar::from_integer(binom_int(x, k as u32)))
                .sum();
            prop_assert_eq!(&direct, &viabasis);
        }
    }

    #[test]
    fn exact_solver_solutions_satisfy_the_system(
        flat in vec((-9i64..=9).prop_map(int), 1..=20),
        xs in vec((-9i64..=9).prop_map(int), 1..=4),
    ) {
        let cols = xs.len();
        let rows = flat.len().div_ceil(cols).max(1);
        let mut a = vec![vec![Scalar::from_integer(0.into()); cols]; rows];
        for (idx, v) in flat.iter().enumerate() {
            a[idx / cols][idx % cols] = v.clone();
        }
        let rhs: Vec<Scalar> = a
            .iter()
            .map(|row| row.iter().zip(&xs).map(|(m, x)| m * x).sum())
            .collect();
        match solve_exact(a.clone(), rhs.clone()) {
            Ok(sol) => {
                for (row, want) in a.iter().zip(&rhs) {
                    let got: Scalar = row.iter().zip(&sol).map(|(m, x)| m * x).sum();
                    prop_assert_eq!(&got, want);
                }
            }
            Err(Error::Singular { inconsistent, .. }) => prop_assert!(!inconsistent),
            Err(other) => prop_assert!(false, "unexpected error {:?}", other),
        }
    }

    #[test]
    fn gcd_divides_both_arguments_and_contains_shared_factors(
        u in poly3(3),
        v in poly3(3),
        w in poly3(3),
    ) {
        prop_assume!(!u.is_zero() && !v.is_zero() && !w.is_zero());
        let uw = u.mul(&w);
        let vw = v.mul(&w);
        let d = poly_gcd(&uw, &vw);
        prop_assert!(poly_div_exact(&uw, &d).is_some());
        prop_assert!(poly_div_exact(&vw, &d).is_some());
        prop_assert!(poly_div_exact(&d, &primitive_part(&w)).is_some());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn fast_transport_equals_the_reference(table in tau_table()) {
        let dg = Diagram::from_table(&table).unwrap();
        prop_assert_eq!(transport(&dg), transport_reference(&dg).unwrap());
    }

    #[test]
    fn tables_are_deterministic_and_exchange_symmetric(
        b in 1u32..=5,
        c in 1u32..=5,
        cutoff in 2u32..=8,
    ) {
        let t = compute_csd(b, c, cutoff).unwrap();
        prop_assert_eq!(&t, &compute_csd(b, c, cutoff).unwrap());
        let s = compute_csd(c, b, cutoff).unwrap();
        for i in 1..cutoff {
            for j in 1..=(cutoff - i) {
                prop_assert_eq!(t.get(i, j).unwrap(), s.get(j, i).unwrap());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    #[test]
    fn refits_are_reproducible(i in 1u32..=2, j in 1u32..=2) {
        let source = EngineSource::new();
        let first = fit_default(i, j, &source).unwrap();
        let second = fit_default(i, j, &source).unwrap();
        prop_assert!(first.validated);
        prop_assert_eq!(first.poly, second.poly);
    }
}
