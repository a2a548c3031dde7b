//! Spectral partitioning: Fiedler bisection, recursive spectral bisection,
//! k-way clustering of the low Laplacian eigenvectors, and the sign
//! agreement between the Fiedler vectors of a graph and of its reduction.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::eigen::{group_multiplicities, spectral_gap_index, sym_eigen, EigenError, DEFAULT_TOL};
use crate::eigen::{normalize_sign, MultiplicityTable};
use crate::graph::Graph;
use crate::math::{norm2, sqrt};
use crate::reduce::{lift_vector, sym_mass_laplacian, LiftSource, Reduction, VertexImage};

/// Fiedler entries this small count as zero.
pub const ZERO_ENTRY: f64 = 1e-12;
/// Entries this small are left out of sign comparisons.
pub const SIGN_FLOOR: f64 = 1e-9;
const LLOYD_CAP: usize = 100;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PartitionError {
    #[error("graph has {components} connected components")]
    Disconnected { components: usize },
    #[error("graph has {0} vertices, at least 2 are needed")]
    TooSmall(usize),
    #[error("k = {k} is outside 2..={n}")]
    BadK { k: usize, n: usize },
    #[error(transparent)]
    Eigen(#[from] EigenError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiedlerResult {
    /// Second-smallest Laplacian eigenvalue.
    pub lambda2: f64,
    /// Unit norm, first significant entry positive.
    pub vector: Vec<f64>,
    /// Multiplicity of `lambda2` above 1.
    pub degenerate: bool,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Provenance {
    /// Signs of the Fiedler vector.
    Fiedler { lambda2: f64, degenerate: bool },
    /// `lambda2` of the cluster split at each step, in order.
    RecursiveBisection { splits: Vec<f64> },
    /// Lloyd clustering of the rows of the `k` lowest eigenvectors.
    KWay { k: usize, auto: bool, iterations: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    /// Cluster id per vertex, contiguous from 0.
    pub labels: Vec<usize>,
    pub provenance: Provenance,
    /// Vertices whose deciding Fiedler entry was zero.
    pub zero_entries: Vec<usize>,
}

impl Partition {
    pub fn cluster_count(&self) -> usize {
        self.labels.iter().max().map_or(0, |&c| c + 1)
    }

    /// Members of each cluster, ascending.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.cluster_count()];
        for (v, &c) in self.labels.iter().enumerate() {
            out[c].push(v);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RsbStop {
    /// Split until this many clusters exist (or nothing can be split).
    MaxClusters(usize),
    /// Split only clusters whose `lambda2` is below the threshold.
    Lambda2Threshold(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KSelect {
    Fixed(usize),
    /// Largest gap in the Laplacian spectrum, at least 2.
    Auto,
}

fn require_connected(g: &Graph) -> Result<(), PartitionError> {
    if g.n() < 2 {
        return Err(PartitionError::TooSmall(g.n()));
    }
    let components = g.connected_components().len();
    if components > 1 {
        return Err(PartitionError::Disconnected { components });
    }
    Ok(())
}

fn multiplicity_of(table: &MultiplicityTable, lambda: f64) -> usize {
    table.group_at(lambda).map_or(0, |g| g.multiplicity)
}

pub fn fiedler(g: &Graph) -> Result<FiedlerResult, PartitionError> {
    require_connected(g)?;
    let s = sym_eigen(&g.laplacian())?;
    let lambda2 = s.values[1];
    let multiplicity = multiplicity_of(&group_multiplicities(&s.values, DEFAULT_TOL), lambda2);
    Ok(FiedlerResult {
        lambda2,
        vector: s.vector(1),
        degenerate: multiplicity > 1,
        multiplicity,
    })
}

/// Cluster 0 holds the vertices with nonnegative Fiedler entry (zero
/// entries included and reported), cluster 1 the rest.
pub fn sign_bipartition(g: &Graph) -> Result<Partition, PartitionError> {
    let f = fiedler(g)?;
    let (labels, zero_entries) = sign_labels(&f.vector);
    Ok(Partition {
        labels,
        provenance: Provenance::Fiedler {
            lambda2: f.lambda2,
            degenerate: f.degenerate,
        },
        zero_entries,
    })
}

fn sign_labels(x: &[f64]) -> (Vec<usize>, Vec<usize>) {
    let zeros = (0..x.len()).filter(|&i| x[i].abs() <= ZERO_ENTRY).collect();
    let labels = x
        .iter()
        .map(|&v| usize::from(v < 0.0 && v.abs() > ZERO_ENTRY))
        .collect();
    (labels, zeros)
}

// A cluster waiting to be split: its lambda2 and its two halves.
struct Pending {
    members: Vec<usize>,
    lambda2: f64,
    halves: Option<(Vec<usize>, Vec<usize>)>,
    zeros: Vec<usize>,
}

fn plan_split(g: &Graph, members: Vec<usize>) -> Result<Pending, PartitionError> {
    let idle = |members| Pending {
        members,
        lambda2: f64::INFINITY,
        halves: None,
        zeros: Vec::new(),
    };
    if members.len() < 2 {
        return Ok(idle(members));
    }
    let sub = g.induced_subgraph(&members);
    let comps = sub.connected_components();
    if comps.len() > 1 {
        let first: Vec<usize> = comps[0].iter().map(|&i| members[i]).collect();
        let rest = members.iter().copied().filter(|v| !first.contains(v)).collect();
        return Ok(Pending {
            members,
            lambda2: 0.0,
            halves: Some((first, rest)),
            zeros: Vec::new(),
        });
    }
    let f = fiedler(&sub)?;
    let (labels, zeros) = sign_labels(&f.vector);
    let (mut a, mut b) = (Vec::new(), Vec::new());
    for (i, &v) in members.iter().enumerate() {
        if labels[i] == 0 { a.push(v) } else { b.push(v) }
    }
    if b.is_empty() {
        return Ok(idle(members));
    }
    Ok(Pending {
        zeros: zeros.into_iter().map(|i| members[i]).collect(),
        members,
        lambda2: f.lambda2,
        halves: Some((a, b)),
    })
}

/// Repeatedly bisects (by Fiedler signs of the induced subgraph) the
/// cluster with the smallest `lambda2`, ties going to the cluster holding
/// the smallest vertex. Cluster ids follow smallest member.
pub fn recursive_bisection(g: &Graph, stop: RsbStop) -> Result<Partition, PartitionError> {
    require_connected(g)?;
    if let RsbStop::MaxClusters(0) = stop {
        return Err(PartitionError::BadK { k: 0, n: g.n() });
    }
    let mut clusters = vec![plan_split(g, (0..g.n()).collect())?];
    let mut splits = Vec::new();
    let mut zero_entries = Vec::new();
    loop {
        if let RsbStop::MaxClusters(c) = stop {
            if clusters.len() >= c {
                break;
            }
        }
        let Some(idx) = (0..clusters.len())
            .filter(|&i| clusters[i].halves.is_some())
            .min_by(|&i, &j| {
                clusters[i]
                    .lambda2
                    .total_cmp(&clusters[j].lambda2)
                    .then(clusters[i].members[0].cmp(&clusters[j].members[0]))
            })
        else {
            break;
        };
        if let RsbStop::Lambda2Threshold(t) = stop {
            if clusters[idx].lambda2 >= t {
                break;
            }
        }
        let chosen = clusters.swap_remove(idx);
        splits.push(chosen.lambda2);
        zero_entries.extend(chosen.zeros);
        let (a, b) = chosen.halves.expect("filtered on halves");
        clusters.push(plan_split(g, a)?);
        clusters.push(plan_split(g, b)?);
    }

    clusters.sort_by_key(|c| c.members.iter().copied().min());
    let mut labels = vec![0; g.n()];
    for (id, c) in clusters.iter().enumerate() {
        for &v in &c.members {
            labels[v] = id;
        }
    }
    zero_entries.sort_unstable();
    Ok(Partition {
        labels,
        provenance: Provenance::RecursiveBisection { splits },
        zero_entries,
    })
}

/// Lloyd clustering of the rows of the `k` lowest Laplacian eigenvectors,
/// seeded farthest-first from row 0. Ids follow first appearance.
pub fn kway(g: &Graph, k: KSelect) -> Result<Partition, PartitionError> {
    require_connected(g)?;
    let n = g.n();
    let s = sym_eigen(&g.laplacian())?;
    let (k, auto) = match k {
        KSelect::Fixed(k) => (k, false),
        KSelect::Auto => (spectral_gap_index(&s.values)?.max(2), true),
    };
    if k < 2 || k > n {
        return Err(PartitionError::BadK { k, n });
    }
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..k).map(|j| s.vectors[(i, j)]).collect())
        .collect();
    let (assign, iterations) = lloyd(&rows, k);

    let mut relabel = vec![usize::MAX; k];
    let mut next = 0;
    let labels = assign
        .iter()
        .map(|&c| {
            if relabel[c] == usize::MAX {
                relabel[c] = next;
                next += 1;
            }
            relabel[c]
        })
        .collect();
    Ok(Partition {
        labels,
        provenance: Provenance::KWay { k, auto, iterations },
        zero_entries: Vec::new(),
    })
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest(row: &[f64], centers: &[Vec<f64>]) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (c, center) in centers.iter().enumerate() {
        let d = dist2(row, center);
        if d < best_d {
            best_d = d;
            best = c;
        }
    }
    best
}

fn lloyd(rows: &[Vec<f64>], k: usize) -> (Vec<usize>, usize) {
    let mut centers = vec![rows[0].clone()];
    let mut closest: Vec<f64> = rows.iter().map(|r| dist2(r, &rows[0])).collect();
    while centers.len() < k {
        let mut far = 0;
        for (i, &d) in closest.iter().enumerate() {
            if d > closest[far] {
                far = i;
            }
        }
        centers.push(rows[far].clone());
        for (c, r) in closest.iter_mut().zip(rows) {
            *c = c.min(dist2(r, &rows[far]));
        }
    }

    let mut assign: Vec<usize> = rows.iter().map(|r| nearest(r, &centers)).collect();
    let mut iterations = 0;
    while iterations < LLOYD_CAP {
        iterations += 1;
        let dim = rows[0].len();
        let mut sums = vec![vec![0.0; dim]; k];
        let mut counts = vec![0usize; k];
        for (r, &c) in rows.iter().zip(&assign) {
            counts[c] += 1;
            for (s, x) in sums[c].iter_mut().zip(r) {
                *s += x;
            }
        }
        for c in 0..k {
            if counts[c] > 0 {
                centers[c] = sums[c].iter().map(|s| s / counts[c] as f64).collect();
            }
        }
        let next: Vec<usize> = rows.iter().map(|r| nearest(r, &centers)).collect();
        if next == assign {
            break;
        }
        assign = next;
    }
    (assign, iterations)
}

/// Fiedler pair of the reduced graph, computed on the symmetric operator
/// `tilde L` and returned as the right eigenvector `M^{1/2} v` of `L(MB)`,
/// renormalized.
pub fn reduced_fiedler(r: &Reduction) -> Result<FiedlerResult, PartitionError> {
    require_connected(&r.reduced)?;
    let s = sym_eigen(&sym_mass_laplacian(r))?;
    let lambda2 = s.values[1];
    let multiplicity = multiplicity_of(&group_multiplicities(&s.values, DEFAULT_TOL), lambda2);
    let mut vector: Vec<f64> = s
        .vector(1)
        .iter()
        .zip(r.reduced.mass())
        .map(|(x, &m)| x * sqrt(m))
        .collect();
    if !r.reduced.has_unit_masses() {
        let len = norm2(&vector);
        vector.iter_mut().for_each(|x| *x /= len);
        normalize_sign(&mut vector);
    }
    Ok(FiedlerResult {
        lambda2,
        vector,
        degenerate: multiplicity > 1,
        multiplicity,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignStatus {
    Agree,
    Disagree,
    /// The eigenvalue is repeated, so its eigenvector is not unique.
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignPair {
    /// Original vertex index.
    pub vertex: usize,
    pub original: f64,
    /// Lifted reduced entry, after the global flip.
    pub lifted: f64,
    /// Both entries exceed [`SIGN_FLOOR`] in magnitude.
    pub counted: bool,
    pub agree: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignAgreementReport {
    pub status: SignStatus,
    pub lambda2_reduced: f64,
    /// The original eigenvalue paired with `lambda2_reduced`.
    pub lambda_original: f64,
    pub degenerate: bool,
    /// One pair per kept vertex; empty when degenerate.
    pub pairs: Vec<SignPair>,
    pub flipped: bool,
    /// Agreeing fraction of the counted pairs (1 when none are counted).
    pub agreement: f64,
    /// `(removed vertex, kept twin whose side it takes)`.
    pub inherited: Vec<(usize, usize)>,
}

impl SignAgreementReport {
    /// Agreement, or nothing to compare.
    pub fn acceptable(&self) -> bool {
        self.status != SignStatus::Disagree
    }
}

/// Compares the signs of the lifted reduced Fiedler vector with the
/// original eigenvector of the same eigenvalue on the kept vertices.
///
/// A star weight removed by the reduction may be the original `lambda2`;
/// the reduced Fiedler value is then the next original eigenvalue, and
/// that eigenpair is the one compared. Repeated eigenvalues on either side
/// give [`SignStatus::Degenerate`].
pub fn compare_signs(g: &Graph, r: &Reduction) -> Result<SignAgreementReport, PartitionError> {
    require_connected(g)?;
    let red = reduced_fiedler(r)?;
    let orig = sym_eigen(&g.laplacian())?;
    let table = group_multiplicities(&orig.values, DEFAULT_TOL);
    let group = table.group_at(red.lambda2);

    let inherited = r
        .vertex_map
        .iter()
        .enumerate()
        .filter_map(|(v, img)| match *img {
            VertexImage::Removed { star } => Some((v, r.stars[star].kept[0])),
            VertexImage::Kept(_) => None,
        })
        .collect();
    let mut report = SignAgreementReport {
        status: SignStatus::Degenerate,
        lambda2_reduced: red.lambda2,
        lambda_original: group.map_or(f64::NAN, |gr| gr.value),
        degenerate: true,
        pairs: Vec::new(),
        flipped: false,
        agreement: 1.0,
        inherited,
    };
    let Some(group) = group else {
        report.status = SignStatus::Disagree;
        report.degenerate = red.degenerate;
        report.agreement = 0.0;
        return Ok(report);
    };
    if red.degenerate || group.multiplicity > 1 {
        return Ok(report);
    }
    report.degenerate = false;

    let original = orig.vector(group.start);
    let mut lifted = lift_vector(r, &red.vector, LiftSource::RightEigvecOfLMB)
        .expect("reduced vector has the reduced order");
    let len = norm2(&lifted);
    lifted.iter_mut().for_each(|x| *x /= len);

    let kept = r.kept_vertices();
    let score = |sign: f64| {
        kept.iter()
            .filter(|&&v| original[v].abs() > SIGN_FLOOR && lifted[v].abs() > SIGN_FLOOR)
            .filter(|&&v| (original[v] > 0.0) == (sign * lifted[v] > 0.0))
            .count()
    };
    report.flipped = score(-1.0) > score(1.0);
    let sign = if report.flipped { -1.0 } else { 1.0 };

    let (mut counted, mut agreed) = (0usize, 0usize);
    for &v in &kept {
        let l = sign * lifted[v];
        let is_counted = original[v].abs() > SIGN_FLOOR && l.abs() > SIGN_FLOOR;
        let agree = (original[v] > 0.0) == (l > 0.0);
        if is_counted {
            counted += 1;
            agreed += usize::from(agree);
        }
        report.pairs.push(SignPair {
            vertex: v,
            original: original[v],
            lifted: l,
            counted: is_counted,
            agree: !is_counted || agree,
        });
    }
    report.agreement = if counted == 0 { 1.0 } else { agreed as f64 / counted as f64 };
    report.status = if agreed == counted { SignStatus::Agree } else { SignStatus::Disagree };
    Ok(report)
}
