use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::operators::{mass_laplacian, sym_mass_adjacency, sym_mass_laplacian};
use super::Reduction;
use crate::check::{Check, VerificationRecord};
use crate::eigen::{sym_eigen, Spectrum};
use crate::graph::Graph;
use crate::math::{norm2, sqrt};
use crate::matrix::Matrix;

/// Bound on `max|K^T K - I|`.
pub const ORTHONORMAL_TOL: f64 = 1e-10;
/// Relative bound on `max|K^T A K - M^{1/2} B M^{1/2}|`.
pub const CONGRUENCE_TOL: f64 = 1e-9;
/// Relative bound on the trace identity.
pub const TRACE_TOL: f64 = 1e-9;

/// Adjacency side: `sigma(A)` equals `sigma(M^{1/2} B M^{1/2})` plus `q`
/// zeros, `K` is orthonormal and congruent, and every reduced eigenvector
/// lifts to an eigenvector of `A`.
pub fn verify_adjacency_reduction(g: &Graph, r: &Reduction, tol_rel: f64) -> VerificationRecord {
    let mut rec = VerificationRecord::new("adjacency reduction");
    let a = g.adjacency();
    let k = &r.k_matrix;
    let bt = sym_mass_adjacency(r);
    push_frame_checks(&mut rec, &a, k, &bt, "congruence");

    let (orig, red) = match (sym_eigen(&a), sym_eigen(&bt)) {
        (Ok(o), Ok(t)) => (o, t),
        (Err(e), _) | (_, Err(e)) => {
            rec.push(Check::new("spectrum", false, f64::INFINITY, 0.0).with_detail(format!("{e}")));
            return rec;
        }
    };
    let tol = tol_rel * spectral_radius(&orig.values).max(1.0);
    rec.push(match_spectra(&orig.values, &[(0.0, r.q())], &red.values, tol));
    rec.push(lift_check(&a, k, &red, tol));
    rec
}

/// Laplacian side: `sigma(L)` equals `sigma(tilde L)` plus `q` copies of
/// each reduced star's weight, with lifted eigenvectors, the similarity
/// between `L(MB)` and `tilde L`, and the trace identity.
pub fn verify_laplacian_reduction(g: &Graph, r: &Reduction, tol_rel: f64) -> VerificationRecord {
    let mut rec = VerificationRecord::new("laplacian reduction");
    let l = g.laplacian();
    let k = &r.k_matrix;
    let lt = sym_mass_laplacian(r);

    let bound = CONGRUENCE_TOL * l.max_abs().max(1.0);
    let congruence = k.transpose().mul(&l).mul(k).sub(&lt).max_abs();
    rec.push(Check::at_most("laplacian_congruence", congruence, bound));

    let s: Vec<f64> = r.reduced.mass().iter().map(|&m| sqrt(m)).collect();
    let inv: Vec<f64> = s.iter().map(|x| 1.0 / x).collect();
    let similar = mass_laplacian(r).scale_rows(&inv).scale_cols(&s);
    rec.push(Check::at_most(
        "similarity",
        similar.sub(&lt).max_abs(),
        tol_rel * lt.max_abs().max(1.0),
    ));

    let removed: f64 = r.stars.iter().map(|st| st.q as f64 * st.weight).sum();
    let expected = l.trace() - removed;
    rec.push(Check::at_most(
        "trace",
        (lt.trace() - expected).abs(),
        TRACE_TOL * l.trace().abs().max(1.0),
    ));

    let (orig, red) = match (sym_eigen(&l), sym_eigen(&lt)) {
        (Ok(o), Ok(t)) => (o, t),
        (Err(e), _) | (_, Err(e)) => {
            rec.push(Check::new("spectrum", false, f64::INFINITY, 0.0).with_detail(format!("{e}")));
            return rec;
        }
    };
    let tol = tol_rel * spectral_radius(&orig.values).max(1.0);
    let removals: Vec<(f64, usize)> = r.stars.iter().map(|st| (st.weight, st.q)).collect();
    rec.push(match_spectra(&orig.values, &removals, &red.values, tol));
    rec.push(lift_check(&l, k, &red, tol));
    rec
}

/// Eigenvalues of `K^T A K` interlace those of `A`, with slack `tol`.
pub fn interlacing_check(g: &Graph, r: &Reduction, tol: f64) -> bool {
    let a = g.adjacency();
    let k = &r.k_matrix;
    let compressed = k.transpose().mul(&a).mul(k);
    let (Ok(alpha), Ok(beta)) = (sym_eigen(&a), sym_eigen(&compressed)) else {
        return false;
    };
    let alpha: Vec<f64> = alpha.values.into_iter().rev().collect();
    let beta: Vec<f64> = beta.values.into_iter().rev().collect();
    let (na, nb) = (alpha.len(), beta.len());
    if nb > na {
        return false;
    }
    beta.iter()
        .enumerate()
        .all(|(i, &b)| alpha[i] >= b - tol && b >= alpha[na - nb + i] - tol)
}

fn push_frame_checks(rec: &mut VerificationRecord, a: &Matrix, k: &Matrix, bt: &Matrix, name: &str) {
    let ktk = k.transpose().mul(k).sub(&Matrix::identity(k.cols())).max_abs();
    rec.push(Check::at_most("orthonormality", ktk, ORTHONORMAL_TOL));
    let congruence = k.transpose().mul(a).mul(k).sub(bt).max_abs();
    rec.push(Check::at_most(name, congruence, CONGRUENCE_TOL * a.max_abs().max(1.0)));
}

fn spectral_radius(values: &[f64]) -> f64 {
    values.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

// Removes the requested copies from `original`, then pairs every reduced
// value with its nearest remaining original value.
fn match_spectra(original: &[f64], removals: &[(f64, usize)], reduced: &[f64], tol: f64) -> Check {
    let mut pool: Vec<f64> = original.to_vec();
    let mut problems: Vec<String> = Vec::new();
    let mut worst = 0.0f64;

    let take_nearest = |pool: &mut Vec<f64>, x: f64| -> Option<f64> {
        let (idx, dist) = pool
            .iter()
            .enumerate()
            .map(|(i, &y)| (i, (y - x).abs()))
            .min_by(|a, b| a.1.total_cmp(&b.1))?;
        pool.remove(idx);
        Some(dist)
    };

    for &(value, count) in removals {
        for _ in 0..count {
            match take_nearest(&mut pool, value) {
                Some(d) if d <= tol => worst = worst.max(d),
                Some(d) => {
                    worst = worst.max(d);
                    problems.push(format!("no copy of {value} to remove (nearest off by {d:e})"));
                }
                None => problems.push(format!("no copy of {value} to remove")),
            }
        }
    }
    for &x in reduced {
        match take_nearest(&mut pool, x) {
            Some(d) => {
                worst = worst.max(d);
                if d > tol {
                    problems.push(format!("reduced eigenvalue {x} off by {d:e}"));
                }
            }
            None => {
                worst = f64::INFINITY;
                problems.push(format!("reduced eigenvalue {x} unmatched"));
            }
        }
    }
    if !pool.is_empty() {
        worst = f64::INFINITY;
        problems.push(format!("original eigenvalues {pool:?} unmatched"));
    }
    let passed = problems.is_empty();
    Check::new("spectrum", passed, worst, tol).with_detail(problems.join("; "))
}

fn lift_check(op: &Matrix, k: &Matrix, reduced: &Spectrum, tol: f64) -> Check {
    let mut worst = 0.0f64;
    for (i, &mu) in reduced.values.iter().enumerate() {
        let lifted = k.mul_vec(&reduced.vector(i));
        let image = op.mul_vec(&lifted);
        let resid: Vec<f64> = image.iter().zip(&lifted).map(|(y, x)| y - mu * x).collect();
        let scale = norm2(&lifted);
        let rel = if scale > 0.0 { norm2(&resid) / scale } else { f64::INFINITY };
        worst = worst.max(rel);
    }
    Check::at_most("lift_residual", worst, tol)
}

#[cfg(test)]
mod tests {
    use alloc::vec;

    use super::*;
    use crate::reduce::tests::{f2, k32};
    use crate::reduce::{reduce_all, Policy};
    use crate::DEFAULT_TOL;

    fn assert_pass(rec: &VerificationRecord) {
        assert!(rec.passed(), "{:#?}", rec.failures().collect::<Vec<_>>());
    }

    #[test]
    fn k32_reductions_pass() {
        let g = k32();
        for qs in [vec![1, 0], vec![2, 0], vec![2, 1], vec![0, 1]] {
            let r = reduce_all(&g, Policy::Explicit(qs)).unwrap();
            assert_pass(&verify_adjacency_reduction(&g, &r, DEFAULT_TOL));
            assert_pass(&verify_laplacian_reduction(&g, &r, DEFAULT_TOL));
            assert!(interlacing_check(&g, &r, 1e-10));
        }
    }

    #[test]
    fn f2_collapse_passes() {
        let g = f2();
        let r = reduce_all(&g, Policy::CollapseToOne).unwrap();
        let rec = verify_laplacian_reduction(&g, &r, DEFAULT_TOL);
        assert_pass(&rec);
        assert_eq!(rec.checks.len(), 5);
        assert_pass(&verify_adjacency_reduction(&g, &r, DEFAULT_TOL));
    }

    #[test]
    fn identity_passes() {
        let g = Graph::new(4, [(0, 1, 1.0), (1, 2, 2.0), (2, 3, 1.0)]).unwrap();
        let r = Reduction::identity(&g);
        assert_pass(&verify_adjacency_reduction(&g, &r, DEFAULT_TOL));
        assert_pass(&verify_laplacian_reduction(&g, &r, DEFAULT_TOL));
        assert!(interlacing_check(&g, &r, 0.0));
    }

    #[test]
    fn wrong_masses_are_caught() {
        let g = k32();
        let mut r = reduce_all(&g, Policy::Explicit(vec![1, 0])).unwrap();
        r.reduced = r.reduced.clone().with_masses(vec![1.0; 4]).unwrap();
        assert!(!verify_laplacian_reduction(&g, &r, DEFAULT_TOL).passed());
        assert!(!verify_adjacency_reduction(&g, &r, DEFAULT_TOL).passed());
    }

    #[test]
    fn spectrum_matching_reports_leftovers() {
        let c = match_spectra(&[0.0, 1.0, 2.0], &[(1.0, 1)], &[0.0, 2.0], 1e-9);
        assert!(c.passed);
        let c = match_spectra(&[0.0, 1.0, 2.0], &[(5.0, 1)], &[0.0, 2.0], 1e-9);
        assert!(!c.passed);
        assert!(c.detail.contains("no copy of 5"));
    }
}
