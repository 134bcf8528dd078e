use num_traits::Zero;

use super::scalar::Scalar;
use crate::{Error, Result};

/// Solves `a * x = rhs` exactly by fraction-free-ish Gauss-Jordan
/// elimination over the rationals.
///
/// The system may be overdetermined (more rows than columns); every row is
/// used and must be consistent.  Errors with a rank report when the
/// solution is not unique or the rows contradict each other.
pub fn solve_exact(mut a: Vec<Vec<Scalar>>, mut rhs: Vec<Scalar>) -> Result<Vec<Scalar>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    assert_eq!(rhs.len(), rows, "matrix/rhs row count mismatch");
    debug_assert!(a.iter().all(|r| r.len() == cols), "ragged matrix");

    let mut rank = 0usize;
    for col in 0..cols {
        let Some(pivot) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pivot);
        rhs.swap(rank, pivot);
        let inv = {
            let p = &a[rank][col];
            p.recip()
        };
        for x in a[rank].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        rhs[rank] *= &inv;
        let pivot_row = std::mem::take(&mut a[rank]);
        for r in 0..rows {
            if r == rank || a[r][col].is_zero() {
                continue;
            }
            let factor = std::mem::replace(&mut a[r][col], Scalar::zero());
            for (x, p) in a[r][col + 1..].iter_mut().zip(&pivot_row[col + 1..]) {
                let delta = p * &factor;
                if !delta.is_zero() {
                    *x -= delta;
                }
            }
            let delta = &rhs[rank] * &factor;
            rhs[r] -= delta;
        }
        a[rank] = pivot_row;
        rank += 1;
        if rank == rows {
            break;
        }
    }

    let inconsistent = rhs[rank..].iter().any(|v| !v.is_zero());
    if rank < cols || inconsistent {
        return Err(Error::Singular {
            rows,
            cols,
            rank,
            inconsistent,
        });
    }
    Ok(rhs.into_iter().take(cols).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::scalar::{int, ratio};

    #[test]
    fn solves_square_system() {
        // 2x + y = 5, x - y = 1  =>  x = 2, y = 1
        let a = vec![vec![int(2), int(1)], vec![int(1), int(-1)]];
        let x = solve_exact(a, vec![int(5), int(1)]).unwrap();
        assert_eq!(x, vec![int(2), int(1)]);
    }

    #[test]
    fn solves_overdetermined_consistent_system() {
        let a = vec![
            vec![int(1), int(0)],
            vec![int(0), int(1)],
            vec![int(1), int(1)],
            vec![int(2), int(-1)],
        ];
        let x = solve_exact(a, vec![ratio(1, 2), int(3), ratio(7, 2), int(-2)]).unwrap();
        assert_eq!(x, vec![ratio(1, 2), int(3)]);
    }

    #[test]
    fn reports_inconsistency_and_deficiency() {
        let a = vec![vec![int(1), int(1)], vec![int(2), int(2)]];
        match solve_exact(a, vec![int(1), int(3)]) {
            Err(Error::Singular {
                rank, inconsistent, ..
            }) => {
                assert_eq!(rank, 1);
                assert!(inconsistent);
            }
            other => panic!("expected singular error, got {other:?}"),
        }
        let a = vec![vec![int(1), int(1)]];
        match solve_exact(a, vec![int(1)]) {
            Err(Error::Singular {
                rank, inconsistent, ..
            }) => {
                assert_eq!(rank, 1);
                assert!(!inconsistent);
            }
            other => panic!("expected singular error, got {other:?}"),
        }
    }
}
