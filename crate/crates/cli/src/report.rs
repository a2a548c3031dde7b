//! JSON documents for `--json` output and `reduce --report`.
//!
//! `serde_json` maps are ordered by key, so identical inputs serialize to
//! identical bytes.

use mkstar_core::eigen::MultiplicityTable;
use mkstar_core::partition::{
    FiedlerResult, Partition, Provenance, SignAgreementReport, SignStatus, SIGN_FLOOR, ZERO_ENTRY,
};
use mkstar_core::reduce::{Reduction, VertexImage, CONGRUENCE_TOL, ORTHONORMAL_TOL, TRACE_TOL};
use mkstar_core::structure::{LDependentPartition, MkStar, PredictionReport, StarClass, WEIGHT_TOL};
use mkstar_core::{Graph, VerificationRecord};
use serde_json::{json, Map, Value};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// How the reduced degree matrix is defined.
pub const MASS_DEGREE_NOTE: &str = "diag(MB) is taken as the column sums of MB; each kept vertex \
then keeps its original strength, and tilde L = diag(MB) - M^{1/2} B M^{1/2}";

/// Wraps a command's sections with the version, tolerances and notes.
pub fn document(command: &str, tol: f64, sections: Map<String, Value>) -> Value {
    let mut doc = sections;
    doc.insert("command".into(), json!(command));
    doc.insert("version".into(), json!(VERSION));
    doc.insert(
        "tolerances".into(),
        json!({
            "eigen_relative": tol,
            "orthonormality": ORTHONORMAL_TOL,
            "congruence_relative": CONGRUENCE_TOL,
            "trace_relative": TRACE_TOL,
            "weight_relative": WEIGHT_TOL,
            "fiedler_zero_entry": ZERO_ENTRY,
            "sign_floor": SIGN_FLOOR,
        }),
    );
    doc.insert("notes".into(), json!([MASS_DEGREE_NOTE]));
    Value::Object(doc)
}

pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values are plain JSON");
    s.push('\n');
    s
}

pub fn graph_summary(g: &Graph) -> Value {
    let strengths = g.strengths();
    let fold = |f: fn(f64, f64) -> f64, init: f64| strengths.iter().copied().fold(init, f);
    let components = g.connected_components().len();
    json!({
        "vertices": g.n(),
        "edges": g.edge_count(),
        "total_weight": g.edges().iter().map(|e| e.w).sum::<f64>(),
        "components": components,
        "connected": g.n() > 0 && components == 1,
        "unit_masses": g.has_unit_masses(),
        "min_strength": if g.n() == 0 { Value::Null } else { json!(fold(f64::min, f64::INFINITY)) },
        "max_strength": if g.n() == 0 { Value::Null } else { json!(fold(f64::max, 0.0)) },
    })
}

pub fn spectrum(values: &[f64], table: &MultiplicityTable) -> Value {
    json!({
        "values": values,
        "groups": table.groups.iter().map(|g| json!({
            "value": g.value,
            "multiplicity": g.multiplicity,
        })).collect::<Vec<_>>(),
        "group_threshold": table.threshold,
    })
}

pub fn star(s: &MkStar) -> Value {
    json!({
        "v1": s.v1,
        "v2": s.v2,
        "m": s.m(),
        "k": s.k(),
        "weight": s.weight_uniform,
        "uniform": s.is_uniform(),
        "near_equal": s.near_equal,
    })
}

fn class(c: &StarClass) -> Value {
    json!({
        "weight": c.weight,
        "degree": c.degree,
        "stars": c.stars.iter().map(|s| s.v1.clone()).collect::<Vec<_>>(),
    })
}

pub fn predictions(r: &PredictionReport) -> Value {
    let pred = |p: &mkstar_core::structure::Prediction| {
        json!({"eigenvalue": p.eigenvalue, "min_multiplicity": p.min_multiplicity})
    };
    json!({
        "stars": r.stars.iter().map(star).collect::<Vec<_>>(),
        "classes": r.classes.iter().map(class).collect::<Vec<_>>(),
        "laplacian": r.laplacian.iter().map(pred).collect::<Vec<_>>(),
        "signless": r.signless.iter().map(pred).collect::<Vec<_>>(),
        "normalized": r.normalized.as_ref().map(pred),
    })
}

pub fn ldependent(p: &LDependentPartition) -> Value {
    json!({
        "v1": p.v1,
        "v2": p.v2,
        "v3": p.v3,
        "l": p.l(),
        "wtilde": p.wtilde,
        "positive": p.positive,
        "max_residual": p.max_residual,
        "coefficients": p.coefficients.iter().map(|row| {
            row.iter().map(|&(j, a)| json!([j, a])).collect::<Vec<_>>()
        }).collect::<Vec<_>>(),
    })
}

pub fn record(r: &VerificationRecord) -> Value {
    json!({
        "title": r.title,
        "passed": r.passed(),
        "checks": r.checks.iter().map(|c| json!({
            "name": c.name,
            "passed": c.passed,
            "observed": c.observed,
            "bound": c.bound,
            "detail": c.detail,
        })).collect::<Vec<_>>(),
        "warnings": r.warnings,
    })
}

pub fn reduction(r: &Reduction) -> Value {
    json!({
        "original_vertices": r.original.n(),
        "reduced_vertices": r.reduced.n(),
        "removed": r.removed_vertices(),
        "masses": r.reduced.mass(),
        "vertex_map": r.vertex_map.iter().map(|img| match *img {
            VertexImage::Kept(i) => json!({"kept": i}),
            VertexImage::Removed { star } => json!({"removed_from_star": star}),
        }).collect::<Vec<_>>(),
        "stars": r.stars.iter().map(|s| json!({
            "v1": s.star.v1,
            "v2": s.star.v2,
            "q": s.q,
            "kept": s.kept,
            "removed": s.removed,
            "weight": s.weight,
            "mass": s.mass(),
        })).collect::<Vec<_>>(),
    })
}

pub fn fiedler(f: &FiedlerResult) -> Value {
    json!({
        "lambda2": f.lambda2,
        "vector": f.vector,
        "degenerate": f.degenerate,
        "multiplicity": f.multiplicity,
    })
}

pub fn partition(p: &Partition) -> Value {
    let provenance = match &p.provenance {
        Provenance::Fiedler { lambda2, degenerate } => {
            json!({"method": "fiedler-sign", "lambda2": lambda2, "degenerate": degenerate})
        }
        Provenance::RecursiveBisection { splits } => {
            json!({"method": "recursive-bisection", "split_lambda2": splits})
        }
        Provenance::KWay { k, auto, iterations } => json!({
            "method": "kway",
            "k": k,
            "auto": auto,
            "eigenvectors": (0..*k).collect::<Vec<_>>(),
            "iterations": iterations,
        }),
    };
    json!({
        "labels": p.labels,
        "clusters": p.cluster_count(),
        "provenance": provenance,
        "zero_entries": p.zero_entries,
    })
}

pub fn status_name(s: SignStatus) -> &'static str {
    match s {
        SignStatus::Agree => "agree",
        SignStatus::Disagree => "disagree",
        SignStatus::Degenerate => "degenerate",
    }
}

pub fn signs(r: &SignAgreementReport) -> Value {
    json!({
        "status": status_name(r.status),
        "lambda2_reduced": r.lambda2_reduced,
        "lambda_original": r.lambda_original,
        "degenerate": r.degenerate,
        "flipped": r.flipped,
        "agreement": r.agreement,
        "pairs": r.pairs.iter().map(|p| json!({
            "vertex": p.vertex,
            "original": p.original,
            "lifted": p.lifted,
            "counted": p.counted,
            "agree": p.agree,
        })).collect::<Vec<_>>(),
        "inherited": r.inherited.iter().map(|&(v, t)| json!({"vertex": v, "twin": t})).collect::<Vec<_>>(),
    })
}
