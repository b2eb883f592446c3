//! Hilbert functions and the dimension grid of the Z²-algebra glued from two hosts.
//!
//! `h_quad` and `h_cub` are the Hilbert functions of quadratic and cubic AS-regular
//! algebras. Blowing up the points `d_m, ..., d_{m+i-1}` removes `colength(i)` dimensions
//! from degree `i`, which turns the quadratic function into the cubic one.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GridError {
    #[error("colength is defined for nonnegative lengths, got {0}")]
    NegativeLength(i64),
    #[error("no dimension statement covers the offset (a, b) = ({a}, {b})")]
    NotSpecified { a: i64, b: i64 },
}

pub fn h_quad(n: i64) -> u64 {
    if n < 0 {
        return 0;
    }
    let n = n as u64;
    (n + 1) * (n + 2) / 2
}

pub fn h_cub(n: i64) -> u64 {
    if n < 0 {
        return 0;
    }
    let a = (n / 2) as u64;
    if n % 2 == 0 {
        (a + 1) * (a + 1)
    } else {
        (a + 1) * (a + 2)
    }
}

/// Colength of `m_{d_m} ... m_{d_{m+i-1}}` inside the identity bimodule.
pub fn colength(i: i64) -> Result<u64, GridError> {
    if i < 0 {
        return Err(GridError::NegativeLength(i));
    }
    let a = (i / 2) as u64;
    Ok(if i % 2 == 0 { a * (a + 1) } else { (a + 1) * (a + 1) })
}

/// `dim D_{m,m+i} = h_quad(i) - colength(i)`.
pub fn dim_d(i: i64) -> Result<u64, GridError> {
    Ok(h_quad(i) - colength(i)?)
}

/// Whether `dim D_{m,m+i}` equals the cubic Hilbert function at `i`.
pub fn dim_d_identity(i: i64) -> Result<bool, GridError> {
    Ok(dim_d(i)? == h_cub(i))
}

/// Which algebra the grid is built over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HostKind {
    /// Quadratic host: `h` is quadratic and `h'` cubic.
    Quadratic,
    /// Cubic host: `h` is cubic and `h'` quadratic.
    Cubic,
}

impl fmt::Display for HostKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HostKind::Quadratic => "quadratic",
            HostKind::Cubic => "cubic",
        })
    }
}

impl HostKind {
    pub fn h(self, n: i64) -> u64 {
        match self {
            HostKind::Quadratic => h_quad(n),
            HostKind::Cubic => h_cub(n),
        }
    }

    pub fn h_prime(self, n: i64) -> u64 {
        match self {
            HostKind::Quadratic => h_cub(n),
            HostKind::Cubic => h_quad(n),
        }
    }

    /// Functional that orders the lattice: the one conserved by `Gamma`.
    pub fn degree(self, idx: GridIndex) -> i64 {
        match self {
            HostKind::Quadratic => idx.i + idx.j,
            HostKind::Cubic => idx.i + 2 * idx.j,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GridIndex {
    pub i: i64,
    pub j: i64,
}

impl GridIndex {
    pub fn new(i: i64, j: i64) -> Self {
        GridIndex { i, j }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathStep {
    Delta,
    Gamma,
}

impl PathStep {
    pub fn displacement(self, host: HostKind) -> (i64, i64) {
        match (host, self) {
            (HostKind::Quadratic, PathStep::Delta) => (-1, 2),
            (HostKind::Quadratic, PathStep::Gamma) => (1, -1),
            (HostKind::Cubic, PathStep::Delta) => (-1, 1),
            (HostKind::Cubic, PathStep::Gamma) => (2, -1),
        }
    }

    /// The linear functional this step leaves unchanged.
    pub fn conserved(self, host: HostKind, idx: GridIndex) -> i64 {
        match (host, self) {
            (HostKind::Quadratic, PathStep::Delta) => 2 * idx.i + idx.j,
            (HostKind::Quadratic, PathStep::Gamma) => idx.i + idx.j,
            (HostKind::Cubic, PathStep::Delta) => idx.i + idx.j,
            (HostKind::Cubic, PathStep::Gamma) => idx.i + 2 * idx.j,
        }
    }

    /// Offset `(a, b)` of the slot this step spans, as in `grid_dim`.
    pub fn offset(self, host: HostKind) -> (i64, i64) {
        self.displacement(host)
    }
}

/// Moves `count` steps of one kind; negative counts walk backwards.
pub fn repeat_step(host: HostKind, start: GridIndex, step: PathStep, count: i64) -> GridIndex {
    let (di, dj) = step.displacement(host);
    GridIndex::new(start.i + count * di, start.j + count * dj)
}

/// Folds the steps from `start`; every step preserves its own conserved functional.
pub fn compose_path(host: HostKind, start: GridIndex, steps: &[PathStep]) -> GridIndex {
    steps.iter().fold(start, |at, step| {
        let next = repeat_step(host, at, *step, 1);
        debug_assert_eq!(step.conserved(host, at), step.conserved(host, next));
        next
    })
}

/// A grid dimension, tagged when it rests on a conjecture rather than a proven statement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "status", content = "value", rename_all = "lowercase")]
pub enum GridDim {
    Exact(u64),
    Conjectural(u64),
}

impl GridDim {
    pub fn value(self) -> u64 {
        match self {
            GridDim::Exact(v) | GridDim::Conjectural(v) => v,
        }
    }

    pub fn is_conjectural(self) -> bool {
        matches!(self, GridDim::Conjectural(_))
    }
}

/// Dimension of `A~_{(i,j),(i+a,j+b)}`, which does not depend on `(i, j)`.
pub fn grid_dim(host: HostKind, a: i64, b: i64) -> Result<GridDim, GridError> {
    use GridDim::*;
    match host {
        HostKind::Quadratic => {
            if a == 0 && b >= 0 {
                Ok(Exact(host.h_prime(b)))
            } else if a >= 0 && b <= 0 {
                Ok(Exact(host.h(a + b)))
            } else if a <= 0 {
                Ok(Exact(host.h_prime(b + 2 * a)))
            } else {
                Err(GridError::NotSpecified { a, b })
            }
        }
        HostKind::Cubic => {
            if a == 0 && b >= 0 {
                Ok(Exact(host.h_prime(b)))
            } else if a >= 0 && b <= 0 {
                Ok(Exact(host.h(a + 2 * b)))
            } else if a == -1 {
                Ok(Exact(host.h_prime(b - 1)))
            } else if a <= -2 {
                Ok(Conjectural(host.h_prime(b + 2 * a)))
            } else {
                Err(GridError::NotSpecified { a, b })
            }
        }
    }
}

/// Grid degrees `(row, column)` of the inner element `z_i`.
///
/// `z_i` is a `gamma` path after a `delta` path from `(i, 0)` back to the axis at `(2i, 0)`,
/// and its bidegree is the host degree of the end point and of the start point.
pub fn inner_witness_slot(host: HostKind, i: i64) -> (i64, i64) {
    let start = GridIndex::new(i, 0);
    let corner = repeat_step(host, start, PathStep::Delta, i);
    let gamma_steps = match host {
        HostKind::Quadratic => 2 * i,
        HostKind::Cubic => i,
    };
    let end = repeat_step(host, corner, PathStep::Gamma, gamma_steps);
    debug_assert_eq!(end, GridIndex::new(2 * i, 0));
    (host.degree(end), host.degree(start))
}
