use alloc::vec::Vec;

use super::{ReduceError, Reduction};
use crate::math::sqrt;
use crate::matrix::Matrix;

/// Which reduced eigenvector a vector is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LiftSource {
    /// Eigenvector of the symmetric operators (`M^{1/2} B M^{1/2}`,
    /// [`sym_mass_laplacian`]).
    TildeL,
    /// Right eigenvector of [`mass_laplacian`], i.e. `M^{1/2}` times a
    /// `TildeL` eigenvector.
    RightEigvecOfLMB,
}

fn sqrt_mass(r: &Reduction) -> Vec<f64> {
    r.reduced.mass().iter().map(|&m| sqrt(m)).collect()
}

/// `MB`: the reduced adjacency with row `i` scaled by mass `i`.
pub fn mass_adjacency(r: &Reduction) -> Matrix {
    r.reduced.adjacency().scale_rows(r.reduced.mass())
}

/// `M^{1/2} B M^{1/2}`, similar to `MB`.
pub fn sym_mass_adjacency(r: &Reduction) -> Matrix {
    let s = sqrt_mass(r);
    r.reduced.adjacency().scale_rows(&s).scale_cols(&s)
}

/// Diagonal of the mass degree matrix: the column sums of `MB`. For every
/// kept vertex this equals its strength in the original graph.
pub fn mass_degree(r: &Reduction) -> Vec<f64> {
    let mass = r.reduced.mass();
    (0..r.reduced.n())
        .map(|j| r.reduced.neighbors(j).iter().map(|&(i, w)| mass[i] * w).sum())
        .collect()
}

/// `diag(colsums(MB)) - M^{1/2} B M^{1/2}`, symmetric.
pub fn sym_mass_laplacian(r: &Reduction) -> Matrix {
    Matrix::from_diag(&mass_degree(r)).sub(&sym_mass_adjacency(r))
}

/// `L(MB) = diag(colsums(MB)) - MB`, generally nonsymmetric.
pub fn mass_laplacian(r: &Reduction) -> Matrix {
    Matrix::from_diag(&mass_degree(r)).sub(&mass_adjacency(r))
}

/// Maps a reduced eigenvector to the original vertex set.
pub fn lift_vector(r: &Reduction, v: &[f64], source: LiftSource) -> Result<Vec<f64>, ReduceError> {
    let expected = r.reduced.n();
    if v.len() != expected {
        return Err(ReduceError::DimensionMismatch {
            expected,
            got: v.len(),
        });
    }
    Ok(match source {
        LiftSource::TildeL => r.k_matrix.mul_vec(v),
        LiftSource::RightEigvecOfLMB => {
            let scaled: Vec<f64> = v.iter().zip(sqrt_mass(r)).map(|(x, s)| x / s).collect();
            r.k_matrix.mul_vec(&scaled)
        }
    })
}

#[cfg(test)]
mod tests {
    use alloc::vec;

    use super::*;
    use crate::eigen::sym_eigen;
    use crate::reduce::tests::k32;
    use crate::reduce::{reduce_all, Policy};

    fn close_all(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    fn keep_two() -> Reduction {
        reduce_all(&k32(), Policy::Explicit(vec![1, 0])).unwrap()
    }

    fn keep_one() -> Reduction {
        reduce_all(&k32(), Policy::Explicit(vec![2, 0])).unwrap()
    }

    #[test]
    fn mass_adjacency_scales_rows() {
        let r = keep_two();
        let mb = mass_adjacency(&r);
        assert_eq!(mb.row(0), &[0.0, 0.0, 1.5, 1.5]);
        assert_eq!(mb.row(2), &[1.0, 1.0, 0.0, 0.0]);
        assert_eq!(mass_adjacency(&keep_one()).row(0), &[0.0, 3.0, 3.0]);

        let unit = Reduction::identity(&k32());
        assert_eq!(mass_adjacency(&unit), k32().adjacency());
    }

    #[test]
    fn mass_degree_recovers_strengths() {
        assert_eq!(mass_degree(&keep_two()), vec![2.0, 2.0, 3.0, 3.0]);
        assert_eq!(mass_degree(&keep_one()), vec![2.0, 3.0, 3.0]);
        assert_eq!(mass_degree(&Reduction::identity(&k32())), k32().strengths());
    }

    #[test]
    fn tilde_l_spectra() {
        let r = keep_two();
        let lt = sym_mass_laplacian(&r);
        assert!(lt.asymmetry() == 0.0);
        let s = sym_eigen(&lt).unwrap();
        assert!(close_all(&s.values, &[0.0, 2.0, 3.0, 5.0], 1e-10));

        let s = sym_eigen(&sym_mass_laplacian(&keep_one())).unwrap();
        assert!(close_all(&s.values, &[0.0, 3.0, 5.0], 1e-10));

        let unit = Reduction::identity(&k32());
        assert_eq!(sym_mass_laplacian(&unit), k32().laplacian());
    }

    #[test]
    fn similarity_to_mass_laplacian() {
        let r = keep_two();
        let s = sqrt_mass(&r);
        let inv: Vec<f64> = s.iter().map(|x| 1.0 / x).collect();
        let similar = mass_laplacian(&r).scale_rows(&inv).scale_cols(&s);
        assert!(similar.sub(&sym_mass_laplacian(&r)).max_abs() < 1e-14);
    }

    #[test]
    fn lift_top_eigenvector() {
        let r = keep_two();
        let g = k32();
        let s = sym_eigen(&sym_mass_laplacian(&r)).unwrap();
        let lifted = lift_vector(&r, &s.vector(3), LiftSource::TildeL).unwrap();
        let ratio = lifted[0];
        let expected = [1.0, 1.0, 1.0, -1.5, -1.5];
        for (x, e) in lifted.iter().zip(expected) {
            assert!((x - ratio * e).abs() < 1e-10, "{lifted:?}");
        }
        let lx = g.laplacian().mul_vec(&lifted);
        for (a, b) in lx.iter().zip(&lifted) {
            assert!((a - 5.0 * b).abs() < 1e-10);
        }
    }

    #[test]
    fn lift_twin_difference() {
        let r = keep_two();
        let g = k32();
        let lifted = lift_vector(&r, &[1.0, -1.0, 0.0, 0.0], LiftSource::TildeL).unwrap();
        assert!(lifted.iter().sum::<f64>().abs() < 1e-12);
        assert!(lifted[3].abs() < 1e-12 && lifted[4].abs() < 1e-12);
        let lx = g.laplacian().mul_vec(&lifted);
        for (a, b) in lx.iter().zip(&lifted) {
            assert!((a - 2.0 * b).abs() < 1e-12);
        }
    }

    #[test]
    fn lift_right_eigenvector() {
        let r = keep_two();
        let s = sym_eigen(&sym_mass_laplacian(&r)).unwrap();
        let v = s.vector(3);
        let right: Vec<f64> = v.iter().zip(sqrt_mass(&r)).map(|(x, m)| x * m).collect();
        let lmb = mass_laplacian(&r).mul_vec(&right);
        assert!(close_all(&lmb, &right.iter().map(|x| 5.0 * x).collect::<Vec<_>>(), 1e-10));
        let a = lift_vector(&r, &right, LiftSource::RightEigvecOfLMB).unwrap();
        let b = lift_vector(&r, &v, LiftSource::TildeL).unwrap();
        assert!(close_all(&a, &b, 1e-14));
    }

    #[test]
    fn lift_identity_and_length() {
        let r = Reduction::identity(&k32());
        let v = [0.5, -1.0, 2.0, 0.0, 3.0];
        assert_eq!(lift_vector(&r, &v, LiftSource::TildeL).unwrap(), v.to_vec());
        assert_eq!(
            lift_vector(&keep_two(), &v, LiftSource::TildeL),
            Err(ReduceError::DimensionMismatch { expected: 4, got: 5 })
        );
    }
}
