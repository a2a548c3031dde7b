//! Structural prediction of Laplacian eigenvalue multiplicities and
//! spectrum-preserving reduction of weighted graphs.
//!
//! The crate is `no_std` (it needs `alloc`). It covers:
//!
//! - [`graph`]: weighted undirected graphs with per-vertex masses and the
//!   adjacency, Laplacian, signless Laplacian and normalized Laplacian.
//! - [`eigen`]: a deterministic dense symmetric eigensolver, multiplicity
//!   grouping and spectral-gap selection.
//! - [`structure`]: detection of (m,k)-stars and l-dependent blocks and the
//!   eigenvalue multiplicities they force.
//! - [`reduce`]: q-reduction of stars with a diagonal mass matrix, the
//!   orthonormal lifting matrix and checks that spectra survive.
//! - [`partition`]: Fiedler bisection, recursive spectral bisection, k-way
//!   spectral clustering and sign agreement between original and reduced
//!   graphs.
//!
//! ```
//! use mkstar_core::graph::Graph;
//! use mkstar_core::eigen::sym_eigen;
//!
//! // K_{3,2}: vertices 0,1,2 all joined to 3,4
//! let edges = (0..3).flat_map(|i| [(i, 3, 1.0), (i, 4, 1.0)]);
//! let g = Graph::new(5, edges).unwrap();
//! let spectrum = sym_eigen(&g.laplacian()).unwrap();
//! let expected = [0.0, 2.0, 2.0, 3.0, 5.0];
//! for (got, want) in spectrum.values.iter().zip(expected) {
//!     assert!((got - want).abs() < 1e-10);
//! }
//! ```
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod check;
pub mod eigen;
pub mod graph;
pub mod matrix;
pub mod partition;
pub mod reduce;
pub mod structure;

mod math;

pub use check::{Check, VerificationRecord};
pub use eigen::{Spectrum, DEFAULT_TOL};
pub use graph::{Graph, MatrixKind};
pub use matrix::Matrix;
