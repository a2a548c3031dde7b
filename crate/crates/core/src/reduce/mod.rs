//! q-reduction of (m,k)-stars.
//!
//! Removing `q` of the `m` twins of a uniform star and giving each of the
//! `p = m - q` survivors mass `m / p` keeps every eigenvalue of the
//! adjacency matrix except `q` copies of 0, and every Laplacian eigenvalue
//! except `q` copies of the star weight, provided the reduced Laplacian is
//! taken as `diag(colsums(MB)) - M^{1/2} B M^{1/2}`.
//!
//! The link between the two graphs is the lifting matrix `K` (`n x (n-q)`)
//! with `K^T K = I` and `K^T A K = M^{1/2} B M^{1/2}`. Eigenvectors of the
//! reduced symmetric operators lift to eigenvectors of the original ones as
//! `K v`.

mod operators;
mod verify;

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

pub use operators::{
    lift_vector, mass_adjacency, mass_degree, mass_laplacian, sym_mass_adjacency,
    sym_mass_laplacian, LiftSource,
};
pub use verify::{
    interlacing_check, verify_adjacency_reduction, verify_laplacian_reduction, CONGRUENCE_TOL,
    ORTHONORMAL_TOL, TRACE_TOL,
};

use crate::eigen::EigenError;
use crate::graph::{Graph, GraphError};
use crate::math::sqrt;
use crate::matrix::Matrix;
use crate::structure::{detect_stars, star_weight, MkStar, StructureError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ReduceError {
    #[error("q = {q} is outside 1..={max} for a star with m = {m}", max = .m - 1)]
    InvalidQ { q: usize, m: usize },
    #[error("star with v1 starting at {first} has unequal weight vectors and cannot be reduced")]
    StructuralStarOnly { first: usize },
    #[error("v1 starting at {first} is not a twin class with neighborhood v2 in this graph")]
    NotAStar { first: usize },
    #[error("input graph already carries non-unit masses")]
    MassedInput,
    #[error("policy lists {got} values of q but the graph has {expected} stars")]
    PolicyLength { expected: usize, got: usize },
    #[error("vector has length {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Eigen(#[from] EigenError),
}

/// How many twins to remove from each detected star.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Policy {
    /// `q = m - 1`: one survivor per star.
    CollapseToOne,
    /// `q = max(0, m - 2)`: two survivors per star.
    KeepPair,
    /// One `q` per star in [`detect_stars`] order. `q = 0` leaves a star alone.
    Explicit(Vec<usize>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexImage {
    /// Index in the reduced graph.
    Kept(usize),
    /// Removed twin of `Reduction::stars[star]`.
    Removed { star: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReducedStar {
    pub star: MkStar,
    pub q: usize,
    /// Surviving `v1` vertices (original indices), ascending.
    pub kept: Vec<usize>,
    /// Removed `v1` vertices: the `q` largest.
    pub removed: Vec<usize>,
    /// Star weight `w(S)`.
    pub weight: f64,
}

impl ReducedStar {
    pub fn m(&self) -> usize {
        self.star.m()
    }

    /// Mass given to each survivor, `m / (m - q)`.
    pub fn mass(&self) -> f64 {
        self.m() as f64 / self.kept.len() as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reduction {
    pub original: Graph,
    /// Kept vertices in original order; masses hold the diagonal of `M`.
    pub reduced: Graph,
    pub vertex_map: Vec<VertexImage>,
    pub stars: Vec<ReducedStar>,
    /// `n x (n - q)`, orthonormal columns.
    pub k_matrix: Matrix,
}

impl Reduction {
    /// The no-op reduction.
    pub fn identity(g: &Graph) -> Self {
        let n = g.n();
        Reduction {
            original: g.clone(),
            reduced: g.clone(),
            vertex_map: (0..n).map(VertexImage::Kept).collect(),
            stars: Vec::new(),
            k_matrix: Matrix::identity(n),
        }
    }

    /// Total number of removed vertices.
    pub fn q(&self) -> usize {
        self.stars.iter().map(|s| s.q).sum()
    }

    pub fn is_identity(&self) -> bool {
        self.stars.is_empty()
    }

    /// Original index of each reduced vertex.
    pub fn kept_vertices(&self) -> Vec<usize> {
        let mut kept = vec![0; self.reduced.n()];
        for (v, img) in self.vertex_map.iter().enumerate() {
            if let VertexImage::Kept(r) = *img {
                kept[r] = v;
            }
        }
        kept
    }

    /// Removed original vertices, ascending.
    pub fn removed_vertices(&self) -> Vec<usize> {
        (0..self.vertex_map.len())
            .filter(|&v| matches!(self.vertex_map[v], VertexImage::Removed { .. }))
            .collect()
    }

    /// The reduced vertex standing in for `v`: itself if kept, otherwise the
    /// smallest surviving twin.
    pub fn representative(&self, v: usize) -> usize {
        match self.vertex_map[v] {
            VertexImage::Kept(r) => r,
            VertexImage::Removed { star } => match self.vertex_map[self.stars[star].kept[0]] {
                VertexImage::Kept(r) => r,
                VertexImage::Removed { .. } => unreachable!("kept twins are kept"),
            },
        }
    }
}

/// Removes the `q` largest-index twins of `s`.
pub fn reduce_star(g: &Graph, s: &MkStar, q: usize) -> Result<Reduction, ReduceError> {
    reduce_many(g, vec![(s.clone(), q)])
}

/// Reduces every detected uniform star according to `policy`.
///
/// Under the two fixed policies, stars whose twins have unequal weight
/// vectors are left alone; an explicit positive `q` for one is an error.
pub fn reduce_all(g: &Graph, policy: Policy) -> Result<Reduction, ReduceError> {
    let stars = detect_stars(g);
    let qs: Vec<usize> = match policy {
        Policy::CollapseToOne => stars
            .iter()
            .map(|s| if s.is_uniform() { s.m() - 1 } else { 0 })
            .collect(),
        Policy::KeepPair => stars
            .iter()
            .map(|s| if s.is_uniform() { s.m().saturating_sub(2) } else { 0 })
            .collect(),
        Policy::Explicit(qs) => {
            if qs.len() != stars.len() {
                return Err(ReduceError::PolicyLength {
                    expected: stars.len(),
                    got: qs.len(),
                });
            }
            qs
        }
    };
    let plan = stars.into_iter().zip(qs).filter(|&(_, q)| q > 0).collect();
    reduce_many(g, plan)
}

fn reduce_many(g: &Graph, plan: Vec<(MkStar, usize)>) -> Result<Reduction, ReduceError> {
    if !g.has_unit_masses() {
        return Err(ReduceError::MassedInput);
    }
    let n = g.n();
    let mut vertex_map = vec![VertexImage::Kept(0); n];
    let mut mass = vec![1.0; n];
    let mut stars = Vec::with_capacity(plan.len());
    for (idx, (star, q)) in plan.into_iter().enumerate() {
        let m = star.m();
        if q == 0 || q >= m {
            return Err(ReduceError::InvalidQ { q, m });
        }
        check_twins(g, &star)?;
        if star.weight_uniform.is_none() {
            return Err(ReduceError::StructuralStarOnly { first: star.v1[0] });
        }
        let weight = star_weight(g, &star).map_err(|e| match e {
            StructureError::Graph(e) => ReduceError::Graph(e),
            _ => ReduceError::StructuralStarOnly { first: star.v1[0] },
        })?;
        let (kept, removed) = star.v1.split_at(m - q);
        for &v in removed {
            if matches!(vertex_map[v], VertexImage::Removed { .. }) {
                return Err(ReduceError::NotAStar { first: star.v1[0] });
            }
            vertex_map[v] = VertexImage::Removed { star: idx };
        }
        for &v in kept {
            mass[v] = m as f64 / (m - q) as f64;
        }
        stars.push(ReducedStar {
            kept: kept.to_vec(),
            removed: removed.to_vec(),
            star,
            q,
            weight,
        });
    }

    let mut next = 0;
    for img in vertex_map.iter_mut() {
        if let VertexImage::Kept(r) = img {
            *r = next;
            next += 1;
        }
    }
    let index = |v: usize| match vertex_map[v] {
        VertexImage::Kept(r) => Some(r),
        VertexImage::Removed { .. } => None,
    };
    let edges: Vec<(usize, usize, f64)> = g
        .edges()
        .iter()
        .filter_map(|e| Some((index(e.u)?, index(e.v)?, e.w)))
        .collect();
    let masses: Vec<f64> = (0..n).filter(|&v| index(v).is_some()).map(|v| mass[v]).collect();
    let reduced = Graph::new(next, edges)?.with_masses(masses)?;

    let mut r = Reduction {
        original: g.clone(),
        reduced,
        vertex_map,
        stars,
        k_matrix: Matrix::zeros(0, 0),
    };
    r.k_matrix = build_k_matrix(&r);
    Ok(r)
}

// v1 must be a set of twins whose common neighborhood is v2.
fn check_twins(g: &Graph, s: &MkStar) -> Result<(), ReduceError> {
    let first = s.v1.first().copied().unwrap_or(0);
    let sorted = s.v1.windows(2).all(|w| w[0] < w[1]);
    let in_range = s.v1.iter().chain(&s.v2).all(|&v| v < g.n());
    if s.v1.len() < 2 || s.v2.is_empty() || !sorted || !in_range {
        return Err(ReduceError::NotAStar { first });
    }
    for &v in &s.v1 {
        let nbrs = g.neighbors(v);
        if nbrs.len() != s.v2.len() || nbrs.iter().zip(&s.v2).any(|(&(u, _), &y)| u != y) {
            return Err(ReduceError::NotAStar { first });
        }
    }
    Ok(())
}

/// The lifting matrix `K`.
///
/// Untouched vertices get identity columns. For a star with `m` twins and
/// `p` survivors, survivor `c` (the `c`-th smallest) gets the column
///
/// ```text
/// k_c[i] = 1/sqrt(m p) + [i == c] - 1/p   for the p smallest twins i
/// k_c[i] = 1/sqrt(m p)                    for the q removed twins
/// ```
///
/// These columns are orthonormal and each sums to `sqrt(m / p)`.
pub fn build_k_matrix(r: &Reduction) -> Matrix {
    let n = r.vertex_map.len();
    let mut k = Matrix::zeros(n, r.reduced.n());
    for (v, img) in r.vertex_map.iter().enumerate() {
        if let VertexImage::Kept(c) = *img {
            k[(v, c)] = 1.0;
        }
    }
    for s in &r.stars {
        let m = s.m();
        let p = s.kept.len();
        let base = 1.0 / sqrt((m * p) as f64);
        for (c, &kv) in s.kept.iter().enumerate() {
            let col = match r.vertex_map[kv] {
                VertexImage::Kept(col) => col,
                VertexImage::Removed { .. } => unreachable!("kept twins are kept"),
            };
            for (i, &row) in s.star.v1.iter().enumerate() {
                k[(row, col)] = if i < p {
                    base + if i == c { 1.0 } else { 0.0 } - 1.0 / p as f64
                } else {
                    base
                };
            }
        }
    }
    k
}
