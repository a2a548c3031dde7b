use alloc::format;
use alloc::vec::Vec;

use super::{
    detect_proportional_ldependent, detect_stars, group_by_weight, LDependentPartition, MkStar,
    StarClass, StructureError,
};
use crate::check::{Check, VerificationRecord};
use crate::eigen::{group_multiplicities, multiplicity_at, sym_eigen, MultiplicityTable, DEFAULT_TOL};
use crate::graph::{Graph, MatrixKind};

/// "`eigenvalue` occurs with multiplicity at least `min_multiplicity`".
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prediction {
    pub eigenvalue: f64,
    pub min_multiplicity: usize,
}

/// Everything the detected structure says about the spectra of `L`, `Q`
/// and the normalized Laplacian.
#[derive(Debug, Clone, PartialEq)]
pub struct PredictionReport {
    pub stars: Vec<MkStar>,
    pub classes: Vec<StarClass>,
    /// One entry per star class: `(w_i, deg(S_{w_i}))`.
    pub laplacian: Vec<Prediction>,
    pub signless: Vec<Prediction>,
    /// `(1, sum_i deg(S_{w_i}))`, absent without uniform stars.
    pub normalized: Option<Prediction>,
    pub ldependent: Vec<LDependentPartition>,
    /// `(w̃, l)` per l-dependent block; each also forces eigenvalue 1 of the
    /// normalized Laplacian with multiplicity `>= l`.
    pub ldependent_predictions: Vec<Prediction>,
}

impl PredictionReport {
    /// Stars left out because their weight vectors differ.
    pub fn structural_stars(&self) -> impl Iterator<Item = &MkStar> {
        self.stars.iter().filter(|s| !s.is_uniform())
    }

    pub fn is_empty(&self) -> bool {
        self.laplacian.is_empty() && self.ldependent_predictions.is_empty()
    }
}

pub fn predict_multiplicities(g: &Graph) -> PredictionReport {
    let stars = detect_stars(g);
    let classes = group_by_weight(&stars, DEFAULT_TOL);
    let laplacian: Vec<Prediction> = classes
        .iter()
        .map(|c| Prediction {
            eigenvalue: c.weight,
            min_multiplicity: c.degree,
        })
        .collect();
    let total: usize = classes.iter().map(|c| c.degree).sum();
    let ldependent = detect_proportional_ldependent(g);
    let ldependent_predictions = ldependent
        .iter()
        .map(|p| Prediction {
            eigenvalue: p.wtilde,
            min_multiplicity: p.l(),
        })
        .collect();
    PredictionReport {
        stars,
        classes,
        signless: laplacian.clone(),
        laplacian,
        normalized: (total > 0).then_some(Prediction {
            eigenvalue: 1.0,
            min_multiplicity: total,
        }),
        ldependent,
        ldependent_predictions,
    }
}

fn table(g: &Graph, kind: MatrixKind, tol_rel: f64) -> Result<MultiplicityTable, StructureError> {
    let spectrum = sym_eigen(&g.matrix(kind)?)?;
    Ok(group_multiplicities(&spectrum.values, tol_rel))
}

fn multiplicity_check(
    name: &str,
    table: &MultiplicityTable,
    p: &Prediction,
    tol_rel: f64,
) -> Check {
    let got = multiplicity_at(table, p.eigenvalue, tol_rel);
    Check::at_least(
        format!("{name}[{}]", p.eigenvalue),
        got as f64,
        p.min_multiplicity as f64,
    )
    .with_detail(format!(
        "multiplicity of {} is {got}, predicted >= {}",
        p.eigenvalue, p.min_multiplicity
    ))
}

/// Compares the star predictions with computed multiplicities. A graph
/// without uniform stars passes vacuously; structural stars are reported as
/// warnings.
pub fn verify_star_predictions(
    g: &Graph,
    tol_rel: f64,
) -> Result<(PredictionReport, VerificationRecord), StructureError> {
    let report = predict_multiplicities(g);
    let mut record = VerificationRecord::new("star multiplicities");
    for s in report.structural_stars() {
        record.warn(format!(
            "star v1={:?} v2={:?} has unequal weight vectors; no prediction",
            s.v1, s.v2
        ));
    }
    for s in report.stars.iter().filter(|s| s.near_equal) {
        record.warn(format!(
            "star v1={:?} weight vectors agree only within tolerance; treated as equal",
            s.v1
        ));
    }
    if report.laplacian.is_empty() {
        record.warn("no uniform (m,k)-star: nothing to predict");
        return Ok((report, record));
    }

    let lap = table(g, MatrixKind::Laplacian, tol_rel)?;
    let sgn = table(g, MatrixKind::Signless, tol_rel)?;
    for p in &report.laplacian {
        record.push(multiplicity_check("laplacian", &lap, p, tol_rel));
    }
    for p in &report.signless {
        record.push(multiplicity_check("signless", &sgn, p, tol_rel));
    }
    if let Some(p) = &report.normalized {
        match table(g, MatrixKind::Normalized, tol_rel) {
            Ok(t) => record.push(multiplicity_check("normalized", &t, p, tol_rel)),
            Err(StructureError::Graph(e)) => {
                record.warn(format!("normalized Laplacian skipped: {e}"))
            }
            Err(e) => return Err(e),
        }
    }
    Ok((report, record))
}

/// Checks `m_L(w̃) >= l` and `m_L̂(1) >= l` for each block.
pub fn verify_ldependent_predictions(
    g: &Graph,
    blocks: &[LDependentPartition],
    tol_rel: f64,
) -> Result<VerificationRecord, StructureError> {
    let mut record = VerificationRecord::new("l-dependent multiplicities");
    if blocks.iter().all(|b| b.l() == 0) {
        record.warn("no l-dependent block with l >= 1: nothing to predict");
        return Ok(record);
    }
    let lap = table(g, MatrixKind::Laplacian, tol_rel)?;
    let normalized = match table(g, MatrixKind::Normalized, tol_rel) {
        Ok(t) => Some(t),
        Err(StructureError::Graph(e)) => {
            record.warn(format!("normalized Laplacian skipped: {e}"));
            None
        }
        Err(e) => return Err(e),
    };
    for b in blocks.iter().filter(|b| b.l() > 0) {
        let p = Prediction {
            eigenvalue: b.wtilde,
            min_multiplicity: b.l(),
        };
        record.push(multiplicity_check("ldependent.laplacian", &lap, &p, tol_rel));
        if let Some(t) = &normalized {
            let one = Prediction {
                eigenvalue: 1.0,
                min_multiplicity: b.l(),
            };
            record.push(multiplicity_check("ldependent.normalized", t, &one, tol_rel));
        }
    }
    Ok(record)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn k32() -> Graph {
        Graph::new(5, (0..3).flat_map(|i| [(i, 3, 1.0), (i, 4, 1.0)])).unwrap()
    }

    fn p(eigenvalue: f64, min_multiplicity: usize) -> Prediction {
        Prediction {
            eigenvalue,
            min_multiplicity,
        }
    }

    #[test]
    fn k32_predictions() {
        let r = predict_multiplicities(&k32());
        assert_eq!(r.laplacian, vec![p(2.0, 2), p(3.0, 1)]);
        assert_eq!(r.signless, r.laplacian);
        assert_eq!(r.normalized, Some(p(1.0, 3)));
        assert_eq!(r.ldependent_predictions, vec![p(2.0, 2), p(3.0, 1)]);
    }

    #[test]
    fn double_star_predictions() {
        let g = Graph::new(6, [(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0), (1, 4, 1.0), (1, 5, 1.0)])
            .unwrap();
        let r = predict_multiplicities(&g);
        assert_eq!(r.laplacian, vec![p(1.0, 2)]);
        assert_eq!(r.normalized, Some(p(1.0, 2)));
        let (_, rec) = verify_star_predictions(&g, DEFAULT_TOL).unwrap();
        assert!(rec.passed());
        assert_eq!(rec.checks.len(), 3);
    }

    #[test]
    fn path_predicts_nothing() {
        let g = Graph::new(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)]).unwrap();
        let r = predict_multiplicities(&g);
        assert!(r.is_empty() && r.normalized.is_none() && r.signless.is_empty());
    }

    #[test]
    fn k32_verification_is_tight() {
        let (_, rec) = verify_star_predictions(&k32(), DEFAULT_TOL).unwrap();
        assert!(rec.passed(), "{rec:?}");
        let lap2 = rec.checks.iter().find(|c| c.name == "laplacian[2]").unwrap();
        assert_eq!((lap2.observed, lap2.bound), (2.0, 2.0));
    }

    #[test]
    fn perturbed_star_is_vacuous_with_warning() {
        let mut e: Vec<_> = (0..3).flat_map(|i| [(i, 3, 1.0), (i, 4, 1.0)]).collect();
        e[0].2 = 1.1;
        let g = Graph::new(5, e).unwrap();
        let (r, rec) = verify_star_predictions(&g, DEFAULT_TOL).unwrap();
        assert!(r.laplacian.is_empty());
        assert!(rec.passed() && rec.checks.is_empty());
        assert!(!rec.warnings.is_empty());
    }
}
