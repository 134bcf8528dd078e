//! Walls, loop transport, and the degree-by-degree consistency solver.
//!
//! A rank-2 diagram for parameters `(b, c)` starts from the two initial
//! walls along the coordinate axes.  Transporting the coordinate monomials
//! around a full loop must be the identity; order by total degree, and the
//! failure at each degree `d` pins down unique coefficient corrections on
//! walls in primitive directions `(i, j)`, namely the coefficient of `u^k`
//! (with `u` the wall monomial and `d = k (i + j)`).  Those coefficients
//! are the numbers `tau(k*i, k*j)` tabulated by [`TauTable`].

mod solve;
mod transport;

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::Zero;

use crate::ring::{int, Scalar};
use crate::{Error, Result};

pub use solve::{compute_csd, solve_degree, verify_consistency, DefectReport};
pub use transport::{crossing_schedule, transport, transport_reference, Crossing, LoopTransport};

/// Primitive wall direction `(i, j)` with `i, j >= 0`, not both zero, and
/// `gcd(i, j) = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Direction {
    i: u32,
    j: u32,
}

impl Direction {
    pub fn new(i: u32, j: u32) -> Result<Self> {
        if (i == 0 && j == 0) || i.gcd(&j) != 1 {
            return Err(Error::BadDirection(i, j));
        }
        Ok(Self { i, j })
    }

    pub fn i(&self) -> u32 {
        self.i
    }

    pub fn j(&self) -> u32 {
        self.j
    }
}

/// A wall: a primitive direction together with the coefficients of its
/// attached function `f = 1 + sum_k coeffs[k-1] * u^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Wall {
    pub dir: Direction,
    pub coeffs: Vec<Scalar>,
}

/// The gcd-normalized scale `g = gcd(i*b, j*c) / gcd(i, j)`, the quantity
/// every reconstructed coefficient polynomial is written in.
pub fn g_factor(i: u32, j: u32, b: u32, c: u32) -> u64 {
    let num = (i as u64 * b as u64).gcd(&(j as u64 * c as u64));
    num / (i as u64).gcd(&(j as u64))
}

/// The scale making `i*e1 + j*e2` primitive in the weighted sublattice:
/// `t = lcm(b / gcd(i, b), c / gcd(j, c))`.
pub fn t_factor(i: u32, j: u32, b: u32, c: u32) -> u64 {
    let tb = b as u64 / (i as u64).gcd(&(b as u64));
    let tc = c as u64 / (j as u64).gcd(&(c as u64));
    tb.lcm(&tc)
}

/// A scattering diagram under construction: parameters, truncation order,
/// and the wall coefficients found so far.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    b: u32,
    c: u32,
    cutoff: u32,
    walls: BTreeMap<(u32, u32), Vec<Scalar>>,
}

impl Diagram {
    /// The two initial walls along the axes, each carrying `1 + u`.
    pub fn initial(b: u32, c: u32, cutoff: u32) -> Result<Self> {
        if b == 0 || c == 0 {
            return Err(Error::BadParameters(b, c));
        }
        let mut walls = BTreeMap::new();
        walls.insert((1, 0), vec![int(1)]);
        walls.insert((0, 1), vec![int(1)]);
        Ok(Self {
            b,
            c,
            cutoff,
            walls,
        })
    }

    /// Rebuilds the diagram a table came from: initial walls plus one wall
    /// per primitive direction with the tabulated coefficients.
    pub fn from_table(table: &TauTable) -> Result<Self> {
        let mut dg = Self::initial(table.b(), table.c(), table.cutoff())?;
        for (&(p, q), value) in table.entries() {
            let k = p.gcd(&q);
            dg.set_wall_coeff(p / k, q / k, k, value.clone());
        }
        Ok(dg)
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn c(&self) -> u32 {
        self.c
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    /// Wall coefficients in direction `(i, j)`, if such a wall exists.
    pub fn wall(&self, i: u32, j: u32) -> Option<Wall> {
        self.walls.get(&(i, j)).map(|coeffs| Wall {
            dir: Direction { i, j },
            coeffs: coeffs.clone(),
        })
    }

    pub fn walls(&self) -> impl Iterator<Item = Wall> + '_ {
        self.walls.iter().map(|(&(i, j), coeffs)| Wall {
            dir: Direction { i, j },
            coeffs: coeffs.clone(),
        })
    }

    /// Sets the coefficient of `u^k` (`k >= 1`) on the wall in direction
    /// `(i, j)`, creating the wall if needed.
    pub(crate) fn set_wall_coeff(&mut self, i: u32, j: u32, k: u32, value: Scalar) {
        let coeffs = self.walls.entry((i, j)).or_default();
        if coeffs.len() < k as usize {
            coeffs.resize(k as usize, Scalar::zero());
        }
        coeffs[k as usize - 1] = value;
    }

    /// Exchange parameters in the frame the loop computation runs in.
    ///
    /// The loop is traversed with the roles of `b` and `c` exchanged: that
    /// mirrored frame is the orientation for which the first interior row
    /// comes out as `tau(i, 1) = (g/c) * C(c, i)` and the first column as
    /// `tau(1, j) = (g/b) * C(b, j)`, i.e. the labelling every downstream
    /// consumer of [`TauTable`] expects.  Cell values are read off
    /// unchanged; only the loop internals use this.
    pub(crate) fn frame(&self) -> (i64, i64) {
        (self.c as i64, self.b as i64)
    }
}

/// Solved coefficients `tau(i, j)` for one `(b, c)` up to a total-degree
/// cutoff.  Only nonzero interior entries (`i, j >= 1`) are stored; the
/// axes are fixed by the initial walls.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauTable {
    b: u32,
    c: u32,
    cutoff: u32,
    entries: BTreeMap<(u32, u32), Scalar>,
}

impl TauTable {
    pub fn new(b: u32, c: u32, cutoff: u32) -> Self {
        Self {
            b,
            c,
            cutoff,
            entries: BTreeMap::new(),
        }
    }

    pub fn b(&self) -> u32 {
        self.b
    }

    pub fn c(&self) -> u32 {
        self.c
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    /// `tau(i, j)`.  Axis values are fixed by the initial walls
    /// (`tau(0,0) = tau(1,0) = tau(0,1) = 1`, other axis entries 0);
    /// interior values beyond the cutoff are an error, not a silent zero.
    pub fn get(&self, i: u32, j: u32) -> Result<Scalar> {
        if i == 0 || j == 0 {
            let on_axis_unit = (i == 0 && j <= 1) || (j == 0 && i <= 1);
            return Ok(if on_axis_unit { int(1) } else { Scalar::zero() });
        }
        if i + j > self.cutoff {
            return Err(Error::BeyondCutoff {
                p: i,
                q: j,
                cutoff: self.cutoff,
            });
        }
        Ok(self
            .entries
            .get(&(i, j))
            .cloned()
            .unwrap_or_else(Scalar::zero))
    }

    /// Nonzero interior entries in `(i + j, i)` order.
    pub fn entries(&self) -> impl Iterator<Item = (&(u32, u32), &Scalar)> {
        let mut keys: Vec<_> = self.entries.iter().collect();
        keys.sort_by_key(|(&(i, j), _)| (i + j, i));
        keys.into_iter()
    }

    /// Sets `tau(i, j)`; a zero value clears the entry.
    pub fn set(&mut self, i: u32, j: u32, value: Scalar) {
        assert!(i >= 1 && j >= 1, "only interior entries are stored");
        if value.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), value);
        }
    }

    /// True when `other` agrees with `self` on every entry up to the
    /// smaller of the two cutoffs.
    pub fn agrees_with(&self, other: &TauTable) -> bool {
        if self.b != other.b || self.c != other.c {
            return false;
        }
        let d = self.cutoff.min(other.cutoff);
        for i in 1..d {
            for j in 1..=(d - i) {
                if self.get(i, j).unwrap() != other.get(i, j).unwrap() {
                    return false;
                }
            }
        }
        true
    }
}
