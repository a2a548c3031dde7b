//! Dense symmetric eigendecomposition and multiplicity bookkeeping.
//!
//! The solver reduces the matrix to tridiagonal form with Householder
//! reflections and diagonalizes it with the implicit QL algorithm
//! (Martin, Reinsch & Wilkinson's `tred2`/`tql2`). It runs the same
//! floating point operations in the same order on every call, so identical
//! inputs give bit-identical spectra.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::math::hypot;
use crate::matrix::Matrix;

/// Relative tolerance used to decide that two eigenvalues coincide.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Entries with magnitude at or below this are ignored by sign normalization.
pub const SIGN_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EigenError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric (max asymmetry {asymmetry:e})")]
    NotSymmetric { asymmetry: f64 },
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("QL iteration did not converge within {0} iterations")]
    IterationLimit(usize),
    #[error("need at least two eigenvalues, got {0}")]
    TooFewValues(usize),
}

/// Ascending eigenvalues with orthonormal eigenvectors; column `i` of
/// `vectors` belongs to `values[i]`. In every column the first entry with
/// magnitude above [`SIGN_EPS`] is positive.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub values: Vec<f64>,
    pub vectors: Matrix,
}

impl Spectrum {
    pub fn order(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, i: usize) -> Vec<f64> {
        self.vectors.column(i)
    }

    pub fn multiplicities(&self, tol_rel: f64) -> MultiplicityTable {
        group_multiplicities(&self.values, tol_rel)
    }
}

/// Eigendecomposition of a symmetric matrix.
pub fn sym_eigen(a: &Matrix) -> Result<Spectrum, EigenError> {
    if !a.is_square() {
        return Err(EigenError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if !a.is_finite() {
        return Err(EigenError::NonFinite);
    }
    let asymmetry = a.asymmetry();
    if asymmetry > 1e-12 * a.max_abs().max(1.0) {
        return Err(EigenError::NotSymmetric { asymmetry });
    }
    let n = a.rows();
    if n == 0 {
        return Ok(Spectrum {
            values: Vec::new(),
            vectors: Matrix::zeros(0, 0),
        });
    }

    // Work on the symmetrized lower triangle.
    let mut v = Matrix::from_fn(n, n, |i, j| if j <= i { a[(i, j)] } else { a[(j, i)] });
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    tridiagonalize(&mut v, &mut d, &mut e);
    diagonalize(&mut v, &mut d, &mut e)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].total_cmp(&d[j]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| d[i]).collect();
    let mut vectors = Matrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    normalize_signs(&mut vectors);
    Ok(Spectrum { values, vectors })
}

/// Flips each column so its first significant entry is positive.
pub fn normalize_signs(vectors: &mut Matrix) {
    for c in 0..vectors.cols() {
        let lead = (0..vectors.rows())
            .map(|r| vectors[(r, c)])
            .find(|x| x.abs() > SIGN_EPS);
        if lead.is_some_and(|x| x < 0.0) {
            for r in 0..vectors.rows() {
                vectors[(r, c)] = -vectors[(r, c)];
            }
        }
    }
}

/// Sign-normalizes a single vector in place.
pub fn normalize_sign(v: &mut [f64]) {
    if v.iter().find(|x| x.abs() > SIGN_EPS).is_some_and(|&x| x < 0.0) {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

// Householder reduction to tridiagonal form. On return `d` holds the
// diagonal, `e[1..]` the subdiagonal and `v` the accumulated transform.
fn tridiagonalize(v: &mut Matrix, d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    for j in 0..n {
        d[j] = v[(n - 1, j)];
    }
    for i in (1..n).rev() {
        let mut scale = 0.0;
        let mut h = 0.0;
        for dk in d.iter().take(i) {
            scale += dk.abs();
        }
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[(i - 1, j)];
                v[(i, j)] = 0.0;
                v[(j, i)] = 0.0;
            }
        } else {
            for dk in d.iter_mut().take(i) {
                *dk /= scale;
                h += *dk * *dk;
            }
            let f = d[i - 1];
            let mut g = crate::math::sqrt(h);
            if f > 0.0 {
                g = -g;
            }
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for ej in e.iter_mut().take(i) {
                *ej = 0.0;
            }
            for j in 0..i {
                let f = d[j];
                v[(j, i)] = f;
                let mut g = e[j] + v[(j, j)] * f;
                for k in j + 1..i {
                    g += v[(k, j)] * d[k];
                    e[k] += v[(k, j)] * f;
                }
                e[j] = g;
            }
            let mut f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                let f = d[j];
                let g = e[j];
                for k in j..i {
                    v[(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[(i - 1, j)];
                v[(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }

    for i in 0..n - 1 {
        v[(n - 1, i)] = v[(i, i)];
        v[(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[(k, i + 1)] * v[(k, j)];
                }
                for k in 0..=i {
                    v[(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[(n - 1, j)];
        v[(n - 1, j)] = 0.0;
    }
    v[(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

// Implicit QL on the tridiagonal matrix, accumulating rotations into `v`.
fn diagonalize(v: &mut Matrix, d: &mut [f64], e: &mut [f64]) -> Result<(), EigenError> {
    let n = d.len();
    let cap = 64 * n.max(1);
    let mut iterations = 0usize;
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;

    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1 = 0.0f64;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            loop {
                iterations += 1;
                if iterations > cap {
                    return Err(EigenError::IterationLimit(cap));
                }
                let g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = hypot(p, 1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    let g = c * e[i];
                    let h = c * p;
                    r = hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    for k in 0..n {
                        let h = v[(k, i + 1)];
                        v[(k, i + 1)] = s * v[(k, i)] + c * h;
                        v[(k, i)] = c * v[(k, i)] - s * h;
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

/// One cluster of numerically equal eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicityGroup {
    /// Mean of the members.
    pub value: f64,
    pub multiplicity: usize,
    /// First index into the ascending spectrum.
    pub start: usize,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiplicityTable {
    pub groups: Vec<MultiplicityGroup>,
    /// Absolute threshold used for grouping.
    pub threshold: f64,
}

impl MultiplicityTable {
    pub fn total(&self) -> usize {
        self.groups.iter().map(|g| g.multiplicity).sum()
    }

    pub fn group_at(&self, lambda: f64) -> Option<&MultiplicityGroup> {
        self.groups
            .iter()
            .find(|g| lambda >= g.min - self.threshold && lambda <= g.max + self.threshold)
    }
}

/// Single-linkage grouping of ascending values: consecutive values closer
/// than `tol_rel * max(1, max|value|)` share a group.
pub fn group_multiplicities(values: &[f64], tol_rel: f64) -> MultiplicityTable {
    let scale = values.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let threshold = tol_rel * scale;
    let mut groups: Vec<MultiplicityGroup> = Vec::new();
    for (i, &x) in values.iter().enumerate() {
        match groups.last_mut() {
            Some(g) if x - g.max <= threshold => {
                g.multiplicity += 1;
                g.max = x;
            }
            _ => groups.push(MultiplicityGroup {
                value: x,
                multiplicity: 1,
                start: i,
                min: x,
                max: x,
            }),
        }
    }
    for g in &mut groups {
        let members = &values[g.start..g.start + g.multiplicity];
        g.value = members.iter().sum::<f64>() / g.multiplicity as f64;
    }
    MultiplicityTable { groups, threshold }
}

/// Multiplicity of the group containing `lambda`, or 0.
///
/// `tol_rel` widens the match window beyond the table's own threshold when
/// it is larger.
pub fn multiplicity_at(table: &MultiplicityTable, lambda: f64, tol_rel: f64) -> usize {
    let window = table.threshold.max(tol_rel * lambda.abs().max(1.0));
    table
        .groups
        .iter()
        .find(|g| lambda >= g.min - window && lambda <= g.max + window)
        .map_or(0, |g| g.multiplicity)
}

/// The `k` (1-based) maximizing `values[k] - values[k-1]` in 1-based terms,
/// i.e. the largest gap sits between the k-th and (k+1)-th value. Ties go to
/// the smallest `k`.
pub fn spectral_gap_index(values: &[f64]) -> Result<usize, EigenError> {
    if values.len() < 2 {
        return Err(EigenError::TooFewValues(values.len()));
    }
    let mut best = 1;
    let mut best_gap = f64::NEG_INFINITY;
    for (i, pair) in values.windows(2).enumerate() {
        let gap = pair[1] - pair[0];
        if gap > best_gap {
            best_gap = gap;
            best = i + 1;
        }
    }
    Ok(best)
}
