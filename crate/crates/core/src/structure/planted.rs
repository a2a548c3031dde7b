use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{detect_stars, verify_ldependent, LDependentCandidate, MkStar, StructureError};
use crate::graph::Graph;

const ATTEMPTS: usize = 64;

/// Requested star: `m` twins sharing `k` neighbors, common strength `w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarSpec {
    pub m: usize,
    pub k: usize,
    pub w: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlantedStars {
    pub graph: Graph,
    /// The detected star matching each spec, in spec order.
    pub stars: Vec<MkStar>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlantedLDependent {
    pub graph: Graph,
    pub candidate: LDependentCandidate,
}

/// Random connected graph on `n` vertices containing the requested stars.
///
/// Every `v1` vertex of a star gets the same random positive weight vector
/// toward its `v2` (summing to `w`). Background edges (a random spanning
/// tree plus sparse extra edges) only join non-`v1` vertices, so the `v1`
/// sets stay twins. Vertex labels are shuffled. Draws that accidentally
/// merge a background vertex into a planted twin class are rejected and
/// redrawn from the same stream, so the result depends only on `seed`.
pub fn plant_star_graph(
    seed: u64,
    n: usize,
    specs: &[StarSpec],
) -> Result<PlantedStars, StructureError> {
    for s in specs {
        if s.m < 2 || s.k < 1 {
            return Err(StructureError::InfeasibleSpec("stars need m >= 2 and k >= 1"));
        }
        if !(s.w.is_finite() && s.w > 0.0) {
            return Err(StructureError::InfeasibleSpec("star weight must be positive"));
        }
    }
    let needed: usize = specs.iter().map(|s| s.m + s.k).sum();
    if needed > n {
        return Err(StructureError::InfeasibleSpec("stars need more than n vertices"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ATTEMPTS {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);

        let mut edges = Vec::new();
        let mut in_v1 = vec![false; n];
        let mut planted = Vec::with_capacity(specs.len());
        let mut cursor = 0;
        for s in specs {
            let mut v1 = perm[cursor..cursor + s.m].to_vec();
            let v2 = &perm[cursor + s.m..cursor + s.m + s.k];
            cursor += s.m + s.k;
            let raw: Vec<f64> = (0..s.k).map(|_| rng.gen_range(0.5..1.5)).collect();
            let total: f64 = raw.iter().sum();
            for &i in &v1 {
                in_v1[i] = true;
                for (&j, r) in v2.iter().zip(&raw) {
                    edges.push((i, j, r / total * s.w));
                }
            }
            v1.sort_unstable();
            planted.push(v1);
        }

        // background on the non-v1 vertices, as positions into `rest`
        let rest: Vec<usize> = perm.iter().copied().filter(|&v| !in_v1[v]).collect();
        let r = rest.len();
        let mut linked = vec![false; r * r];
        let link = |linked: &mut Vec<bool>, a: usize, b: usize| {
            linked[a * r + b] = true;
            linked[b * r + a] = true;
        };
        for t in 1..r {
            link(&mut linked, rng.gen_range(0..t), t);
        }
        let extra = (2.0 / r.max(1) as f64).min(1.0);
        for a in 0..r {
            for b in a + 1..r {
                if !linked[a * r + b] && rng.gen_bool(extra) {
                    link(&mut linked, a, b);
                }
            }
        }
        // a free vertex whose neighborhood is some star's v2 would join
        // that star's twin class; give it one more neighbor
        let mut v2_sets: Vec<Vec<usize>> = Vec::new();
        let mut in_v2 = vec![false; r];
        let mut cursor = 0;
        for s in specs {
            let mut set: Vec<usize> = perm[cursor + s.m..cursor + s.m + s.k]
                .iter()
                .map(|v| rest.iter().position(|x| x == v).expect("v2 is background"))
                .collect();
            set.iter().for_each(|&p| in_v2[p] = true);
            set.sort_unstable();
            v2_sets.push(set);
            cursor += s.m + s.k;
        }
        for a in (0..r).filter(|&a| !in_v2[a]) {
            let nbrs: Vec<usize> = (0..r).filter(|&b| linked[a * r + b]).collect();
            if v2_sets.contains(&nbrs) {
                let free: Vec<usize> = (0..r).filter(|&b| b != a && !linked[a * r + b]).collect();
                if !free.is_empty() {
                    link(&mut linked, a, free[rng.gen_range(0..free.len())]);
                }
            }
        }
        for a in 0..r {
            for b in a + 1..r {
                if linked[a * r + b] {
                    edges.push((rest[a], rest[b], rng.gen_range(0.5..2.0)));
                }
            }
        }

        let graph = Graph::new(n, edges)?;
        let detected = detect_stars(&graph);
        let matched: Option<Vec<MkStar>> = planted
            .iter()
            .map(|v1| detected.iter().find(|s| &s.v1 == v1 && s.is_uniform()).cloned())
            .collect();
        if let Some(stars) = matched {
            return Ok(PlantedStars { graph, stars });
        }
    }
    Err(StructureError::InfeasibleSpec("could not isolate the planted stars"))
}

/// Random l-dependent block: `|v1| = a`, `|v2| = b`, `|v3| = l`, no other
/// vertices. `v1` rows are random positive vectors over all of `v2`
/// rescaled to strength `wtilde`; `v3` rows are random convex combinations
/// of them, so they share that strength. `v2` vertices are joined among
/// themselves at random. Vertex labels are shuffled.
pub fn plant_ldependent_graph(
    seed: u64,
    (a, b, l): (usize, usize, usize),
    wtilde: f64,
) -> Result<PlantedLDependent, StructureError> {
    if a == 0 || b == 0 {
        return Err(StructureError::InfeasibleSpec("v1 and v2 must be nonempty"));
    }
    if !(wtilde.is_finite() && wtilde > 0.0) {
        return Err(StructureError::InfeasibleSpec("wtilde must be positive"));
    }
    let n = a + b + l;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..ATTEMPTS {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let (v1, tail) = perm.split_at(a);
        let (v2, v3) = tail.split_at(b);

        let rows: Vec<Vec<f64>> = (0..a)
            .map(|_| {
                let raw: Vec<f64> = (0..b).map(|_| rng.gen_range(0.5..1.5)).collect();
                let total: f64 = raw.iter().sum();
                raw.into_iter().map(|x| x / total * wtilde).collect()
            })
            .collect();
        let mut edges = Vec::new();
        for (&i, row) in v1.iter().zip(&rows) {
            edges.extend(v2.iter().zip(row).map(|(&j, &w)| (i, j, w)));
        }
        for &i in v3 {
            let raw: Vec<f64> = (0..a).map(|_| rng.gen_range(0.25..1.0)).collect();
            let total: f64 = raw.iter().sum();
            for (c, &j) in v2.iter().enumerate() {
                let w: f64 = raw.iter().zip(&rows).map(|(x, r)| x / total * r[c]).sum();
                edges.push((i, j, w));
            }
        }
        for x in 0..b {
            for y in x + 1..b {
                if rng.gen_bool(0.3) {
                    edges.push((v2[x], v2[y], rng.gen_range(0.5..2.0)));
                }
            }
        }

        let graph = Graph::new(n, edges)?;
        let candidate = LDependentCandidate {
            v1: sorted(v1),
            v2: sorted(v2),
            v3: sorted(v3),
        };
        if verify_ldependent(&graph, &candidate).is_ok() {
            return Ok(PlantedLDependent { graph, candidate });
        }
    }
    Err(StructureError::InfeasibleSpec("could not plant a verifiable block"))
}

fn sorted(v: &[usize]) -> Vec<usize> {
    let mut v = v.to_vec();
    v.sort_unstable();
    v
}
