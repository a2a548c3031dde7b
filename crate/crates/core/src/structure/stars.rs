use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{StructureError, WEIGHT_TOL};
use crate::graph::Graph;
use crate::math::rel_eq;

/// A maximal set of twins (`v1`) together with their common neighborhood.
#[derive(Debug, Clone, PartialEq)]
pub struct MkStar {
    /// Sorted, `|v1| = m >= 2`.
    pub v1: Vec<usize>,
    /// Sorted, `|v2| = k >= 1`.
    pub v2: Vec<usize>,
    /// The common strength, present iff all `v1` rows agree within
    /// [`WEIGHT_TOL`].
    pub weight_uniform: Option<f64>,
    /// Rows agree only up to the tolerance, not bit for bit.
    pub near_equal: bool,
}

impl MkStar {
    pub fn m(&self) -> usize {
        self.v1.len()
    }

    pub fn k(&self) -> usize {
        self.v2.len()
    }

    pub fn degree(&self) -> usize {
        self.v1.len() - 1
    }

    pub fn is_uniform(&self) -> bool {
        self.weight_uniform.is_some()
    }
}

/// Stars sharing one weight value.
#[derive(Debug, Clone, PartialEq)]
pub struct StarClass {
    pub weight: f64,
    pub stars: Vec<MkStar>,
    /// `sum (m_j - 1)`.
    pub degree: usize,
}

/// Finds every class of at least two vertices with identical nonempty open
/// neighborhoods, ordered by smallest `v1` vertex.
pub fn detect_stars(g: &Graph) -> Vec<MkStar> {
    let mut classes: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for v in 0..g.n() {
        let nbrs: Vec<usize> = g.neighbors(v).iter().map(|&(u, _)| u).collect();
        if !nbrs.is_empty() {
            classes.entry(nbrs).or_default().push(v);
        }
    }
    let mut stars: Vec<MkStar> = classes
        .into_iter()
        .filter(|(_, v1)| v1.len() >= 2)
        .map(|(v2, v1)| {
            let (uniform, near_equal) = compare_rows(g, &v1);
            MkStar {
                weight_uniform: uniform.then(|| g.strength(v1[0]).expect("vertex in range")),
                v1,
                v2,
                near_equal,
            }
        })
        .collect();
    stars.sort_by_key(|s| s.v1[0]);
    stars
}

// (rows equal within tolerance, some pair equal only within tolerance)
fn compare_rows(g: &Graph, v1: &[usize]) -> (bool, bool) {
    let first = g.neighbors(v1[0]);
    let mut near = false;
    for &v in &v1[1..] {
        for (&(_, a), &(_, b)) in first.iter().zip(g.neighbors(v)) {
            if a != b {
                if !rel_eq(a, b, WEIGHT_TOL) {
                    return (false, false);
                }
                near = true;
            }
        }
    }
    (true, near)
}

/// The star weight `w(S)`: the common strength of the `v1` vertices, which
/// is defined only when their weight vectors coincide.
pub fn star_weight(g: &Graph, s: &MkStar) -> Result<f64, StructureError> {
    let first = g.neighbors(s.v1[0]);
    for &v in &s.v1[1..] {
        let row = g.neighbors(v);
        let same = row.len() == first.len()
            && first
                .iter()
                .zip(row)
                .all(|(&(i, a), &(j, b))| i == j && rel_eq(a, b, WEIGHT_TOL));
        if !same {
            return Err(StructureError::UnequalWeightVectors {
                first: s.v1[0],
                vertex: v,
            });
        }
    }
    Ok(g.strength(s.v1[0])?)
}

/// Groups uniform stars by weight (within `tol_rel * max(1, w)`), ascending.
/// Stars without a uniform weight are skipped.
pub fn group_by_weight(stars: &[MkStar], tol_rel: f64) -> Vec<StarClass> {
    let mut uniform: Vec<(f64, &MkStar)> = stars
        .iter()
        .filter_map(|s| s.weight_uniform.map(|w| (w, s)))
        .collect();
    uniform.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.v1[0].cmp(&b.1.v1[0])));

    let mut classes: Vec<StarClass> = Vec::new();
    for (w, s) in uniform {
        match classes.last_mut() {
            Some(c) if (w - c.weight).abs() <= tol_rel * c.weight.max(1.0) => {
                c.degree += s.degree();
                c.stars.push(s.clone());
            }
            _ => classes.push(StarClass {
                weight: w,
                degree: s.degree(),
                stars: alloc::vec![s.clone()],
            }),
        }
    }
    for c in &mut classes {
        c.stars.sort_by_key(|s| s.v1[0]);
    }
    classes
}
