use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::{MkStar, StructureError, WEIGHT_TOL};
use crate::eigen::sym_eigen;
use crate::graph::Graph;
use crate::math::{dot, norm2, rel_eq};
use crate::matrix::Matrix;

/// Vertex sets proposed as an l-dependent block, before verification.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LDependentCandidate {
    pub v1: Vec<usize>,
    pub v2: Vec<usize>,
    pub v3: Vec<usize>,
}

/// A verified l-dependent block.
#[derive(Debug, Clone, PartialEq)]
pub struct LDependentPartition {
    pub v1: Vec<usize>,
    pub v2: Vec<usize>,
    pub v3: Vec<usize>,
    /// For each `v3[i]`, the coefficients `(j, a_j)` with `j` in `v1` such
    /// that `row_i = sum a_j row_j`.
    pub coefficients: Vec<Vec<(usize, f64)>>,
    /// Common strength of `v1 ∪ v3`.
    pub wtilde: f64,
    /// Every coefficient is nonnegative (up to 1e-12). Linear dependence
    /// alone already forces the eigenvalue; this records whether the
    /// combination is also a positive one.
    pub positive: bool,
    pub max_residual: f64,
}

impl LDependentPartition {
    pub fn l(&self) -> usize {
        self.v3.len()
    }
}

fn sorted_unique(v: &[usize]) -> Vec<usize> {
    let mut v = v.to_vec();
    v.sort_unstable();
    v.dedup();
    v
}

/// Checks an l-dependent candidate and solves for its row coefficients.
///
/// Conditions are tested in order: (1) every `v1` vertex has a neighbor in
/// `v2` and every `v2` vertex has a neighbor in `v1`; (2) `v1 ∪ v3`
/// vertices only have neighbors in `v2`; (3) each `v3` row is a linear
/// combination of `v1` rows (minimum-norm least squares, residual at most
/// `1e-9 * w̃`); finally all of `v1 ∪ v3` must share one strength.
pub fn verify_ldependent(
    g: &Graph,
    cand: &LDependentCandidate,
) -> Result<LDependentPartition, StructureError> {
    let n = g.n();
    let v1 = sorted_unique(&cand.v1);
    let v2 = sorted_unique(&cand.v2);
    let v3 = sorted_unique(&cand.v3);
    if v1.len() != cand.v1.len() || v2.len() != cand.v2.len() || v3.len() != cand.v3.len() {
        return Err(StructureError::InvalidPartition("repeated vertex in a set"));
    }
    if v1.is_empty() {
        return Err(StructureError::InvalidPartition("v1 is empty"));
    }
    let mut role = vec![0u8; n];
    for (tag, set) in [(1u8, &v1), (2, &v2), (3, &v3)] {
        for &v in set.iter() {
            if v >= n {
                return Err(StructureError::InvalidPartition("vertex out of range"));
            }
            if role[v] != 0 {
                return Err(StructureError::InvalidPartition("sets are not disjoint"));
            }
            role[v] = tag;
        }
    }

    // condition 1
    for &i in &v1 {
        if !g.neighbors(i).iter().any(|&(j, _)| role[j] == 2) {
            return Err(StructureError::ConditionViolated { condition: 1, vertex: i });
        }
    }
    for &j in &v2 {
        if !g.neighbors(j).iter().any(|&(i, _)| role[i] == 1) {
            return Err(StructureError::ConditionViolated { condition: 1, vertex: j });
        }
    }
    // condition 2
    for &i in v1.iter().chain(&v3) {
        if g.neighbors(i).iter().any(|&(j, _)| role[j] != 2) {
            return Err(StructureError::ConditionViolated { condition: 2, vertex: i });
        }
    }

    // condition 3: rows restricted to v2 columns
    let col: BTreeMap<usize, usize> = v2.iter().enumerate().map(|(c, &v)| (v, c)).collect();
    let row_of = |v: usize| {
        let mut r = vec![0.0; v2.len()];
        for &(j, w) in g.neighbors(v) {
            r[col[&j]] = w;
        }
        r
    };
    let basis: Vec<Vec<f64>> = v1.iter().map(|&v| row_of(v)).collect();
    let all = g.strengths();
    let strengths: Vec<f64> = v1.iter().chain(&v3).map(|&v| all[v]).collect();
    let scale = strengths.iter().fold(0.0f64, |m, s| m.max(*s));
    let solver = MinNormSolver::new(&basis)?;

    let mut coefficients = Vec::with_capacity(v3.len());
    let mut positive = true;
    let mut max_residual = 0.0f64;
    for &i in &v3 {
        let target = row_of(i);
        let a = solver.solve(&basis, &target);
        let mut residual = 0.0f64;
        for (c, t) in target.iter().enumerate() {
            let fit: f64 = a.iter().zip(&basis).map(|(aj, r)| aj * r[c]).sum();
            residual = residual.max((t - fit).abs());
        }
        if residual > 1e-9 * scale {
            return Err(StructureError::ConditionViolated { condition: 3, vertex: i });
        }
        max_residual = max_residual.max(residual);
        positive &= a.iter().all(|&x| x >= -1e-12);
        coefficients.push(v1.iter().copied().zip(a).collect());
    }

    let wtilde = strengths[0];
    for (&v, &s) in v1.iter().chain(&v3).zip(&strengths) {
        if !rel_eq(s, wtilde, WEIGHT_TOL) {
            return Err(StructureError::NoCommonStrength {
                vertex: v,
                strength: s,
                expected: wtilde,
            });
        }
    }

    Ok(LDependentPartition {
        v1,
        v2,
        v3,
        coefficients,
        wtilde,
        positive,
        max_residual,
    })
}

// Minimum-norm least squares against a fixed set of rows through the
// pseudo-inverse of their Gram matrix.
struct MinNormSolver {
    // (eigenvalue, eigenvector) pairs above the rank cutoff
    modes: Vec<(f64, Vec<f64>)>,
}

impl MinNormSolver {
    fn new(rows: &[Vec<f64>]) -> Result<Self, StructureError> {
        let p = rows.len();
        let gram = Matrix::from_fn(p, p, |i, j| dot(&rows[i], &rows[j]));
        let spec = sym_eigen(&gram)?;
        let top = spec.values.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let cutoff = 1e-12 * top;
        let modes = spec
            .values
            .iter()
            .enumerate()
            .filter(|(_, &lam)| lam > cutoff && lam > 0.0)
            .map(|(i, &lam)| (lam, spec.vector(i)))
            .collect();
        Ok(MinNormSolver { modes })
    }

    fn solve(&self, rows: &[Vec<f64>], target: &[f64]) -> Vec<f64> {
        let rhs: Vec<f64> = rows.iter().map(|r| dot(r, target)).collect();
        let mut a = vec![0.0; rows.len()];
        for (lam, q) in &self.modes {
            let c = dot(q, &rhs) / lam;
            for (ai, qi) in a.iter_mut().zip(q) {
                *ai += c * qi;
            }
        }
        a
    }
}

/// Finds l-dependent blocks whose `v3` rows are proportional to a single
/// `v1` row: vertices are bucketed by normalized row (`row / strength`),
/// then by strength; each bucket of size `>= 2` becomes a block with the
/// smallest vertex as `v1`, the rest as `v3` and `v2` their neighborhood.
pub fn detect_proportional_ldependent(g: &Graph) -> Vec<LDependentPartition> {
    let strengths = g.strengths();
    let mut by_support: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (v, &s) in strengths.iter().enumerate() {
        if s > 0.0 {
            let support = g.neighbors(v).iter().map(|&(j, _)| j).collect();
            by_support.entry(support).or_default().push(v);
        }
    }

    let mut out = Vec::new();
    for (support, members) in by_support {
        if members.len() < 2 {
            continue;
        }
        // direction buckets, then strength buckets
        let mut buckets: Vec<Vec<usize>> = Vec::new();
        for &v in &members {
            let found = buckets.iter_mut().find(|b| {
                let rep = b[0];
                rel_eq(strengths[rep], strengths[v], WEIGHT_TOL)
                    && g.neighbors(rep).iter().zip(g.neighbors(v)).all(|(&(_, a), &(_, b))| {
                        (a / strengths[rep] - b / strengths[v]).abs() <= WEIGHT_TOL
                    })
            });
            match found {
                Some(b) => b.push(v),
                None => buckets.push(vec![v]),
            }
        }
        for b in buckets.into_iter().filter(|b| b.len() >= 2) {
            let cand = LDependentCandidate {
                v1: vec![b[0]],
                v2: support.clone(),
                v3: b[1..].to_vec(),
            };
            if let Ok(p) = verify_ldependent(g, &cand) {
                out.push(p);
            }
        }
    }
    out.sort_by_key(|p| p.v1[0]);
    out
}

/// Tries to read a structural star (twins whose weight vectors differ) as
/// an l-dependent block: the twins must share one strength and some of
/// their rows must be combinations of the others. `v1` is chosen greedily
/// as a maximal independent subset in vertex order.
pub fn certify_star_as_ldependent(
    g: &Graph,
    s: &MkStar,
) -> Result<LDependentPartition, StructureError> {
    let strengths = g.strengths();
    let expected = strengths[s.v1[0]];
    for &v in &s.v1 {
        if !rel_eq(strengths[v], expected, WEIGHT_TOL) {
            return Err(StructureError::NoCommonStrength {
                vertex: v,
                strength: strengths[v],
                expected,
            });
        }
    }
    // Gram-Schmidt over rows (twins share support, so neighbor lists align)
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut v1 = Vec::new();
    let mut v3 = Vec::new();
    for &v in &s.v1 {
        let row: Vec<f64> = g.neighbors(v).iter().map(|&(_, w)| w).collect();
        let mut r = row.clone();
        for q in &basis {
            let c = dot(q, &r);
            r.iter_mut().zip(q).for_each(|(x, qi)| *x -= c * qi);
        }
        let rn = norm2(&r);
        if rn > 1e-9 * norm2(&row) {
            basis.push(r.into_iter().map(|x| x / rn).collect());
            v1.push(v);
        } else {
            v3.push(v);
        }
    }
    if v3.is_empty() {
        return Err(StructureError::InvalidPartition("twin rows are linearly independent"));
    }
    verify_ldependent(
        g,
        &LDependentCandidate {
            v1,
            v2: s.v2.clone(),
            v3,
        },
    )
}
