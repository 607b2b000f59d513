//! Concavity of `J ppt` on PSD matrices whose (2,2) blocks share a kernel,
//! and the two consequences read off its diagonal blocks: concavity of the
//! Schur complement and convexity of the pseudoinverse.
//!
//! Each function returns the gap between the transform of a convex
//! combination and the combination of transforms, oriented so that the
//! claimed inequality says the gap is PSD.

use crate::block::{jppt, partition_mismatch, schur_complement, BlockMatrix};
use crate::error::{invalid, precondition, Result};
use crate::linalg::{is_psd, kernel_basis, min_eigenvalue, pinv, subspace_eq, Matrix, ToleranceConfig};

#[derive(Debug, Clone)]
pub struct Gap {
    pub gap: Matrix,
    /// `λ_min(gap) ≥ -psd_tol`
    pub psd: bool,
    pub min_eigenvalue: f64,
}

impl Gap {
    fn of(gap: Matrix, tol: &ToleranceConfig) -> Result<Self> {
        let gap = gap.hermitian_part();
        let min = min_eigenvalue(&gap, tol)?;
        Ok(Self {
            psd: min >= -tol.psd_tol,
            min_eigenvalue: min,
            gap,
        })
    }
}

fn check_t(t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(invalid(format!("t = {t} is outside [0, 1]")))
    }
}

fn require_same_kernel_psd(c: &Matrix, d: &Matrix, what: &str, tol: &ToleranceConfig) -> Result<()> {
    if !is_psd(c, tol)? || !is_psd(d, tol)? {
        return Err(precondition(format!("{what} are not both positive semidefinite")));
    }
    if !subspace_eq(&kernel_basis(c, tol)?, &kernel_basis(d, tol)?, tol)? {
        return Err(precondition(format!("kernels of {what} differ")));
    }
    Ok(())
}

fn require_hypotheses(a: &BlockMatrix, b: &BlockMatrix, t: f64, tol: &ToleranceConfig) -> Result<()> {
    check_t(t)?;
    if !a.same_partition(b) {
        return Err(partition_mismatch(a, b));
    }
    if !is_psd(a.matrix(), tol)? || !is_psd(b.matrix(), tol)? {
        return Err(precondition("A and B are not both positive semidefinite"));
    }
    require_same_kernel_psd(&a.a22(), &b.a22(), "A22 and B22", tol)
}

fn mix(c: &Matrix, d: &Matrix, t: f64) -> Matrix {
    &c.scale(1.0 - t) + &d.scale(t)
}

/// `J ppt((1-t)A + tB) - [(1-t) J ppt(A) + t J ppt(B)]`.
pub fn jppt_concavity_gap(a: &BlockMatrix, b: &BlockMatrix, t: f64, tol: &ToleranceConfig) -> Result<Gap> {
    require_hypotheses(a, b, t, tol)?;
    let at = a.lerp(b, t)?;
    let lhs = jppt(&at, tol)?;
    let rhs = mix(jppt(a, tol)?.matrix(), jppt(b, tol)?.matrix(), t);
    Gap::of(lhs.matrix() - &rhs, tol)
}

/// `[(1-t)A + tB]/[(1-t)A + tB]22 - [(1-t) A/A22 + t B/B22]`.
pub fn schur_concavity_gap(a: &BlockMatrix, b: &BlockMatrix, t: f64, tol: &ToleranceConfig) -> Result<Gap> {
    require_hypotheses(a, b, t, tol)?;
    let at = a.lerp(b, t)?;
    let rhs = mix(&schur_complement(a, tol)?, &schur_complement(b, tol)?, t);
    Gap::of(&schur_complement(&at, tol)? - &rhs, tol)
}

/// `(1-t) C⁺ + t D⁺ - [(1-t)C + tD]⁺`.
pub fn pinv_convexity_gap(c: &Matrix, d: &Matrix, t: f64, tol: &ToleranceConfig) -> Result<Gap> {
    check_t(t)?;
    if c.shape() != d.shape() || !c.is_square() {
        return Err(invalid(format!("need square matrices of equal size, got {:?} and {:?}", c.shape(), d.shape())));
    }
    require_same_kernel_psd(c, d, "C and D", tol)?;
    let lhs = mix(&pinv(c, tol)?, &pinv(d, tol)?, t);
    Gap::of(&lhs - &pinv(&mix(c, d, t), tol)?, tol)
}

/// `[[0, 0], [0, C]]` partitioned `(1, m)`: the embedding through which the
/// pseudoinverse inherits convexity from the concavity of `J ppt`.
pub fn bordered(c: &Matrix) -> Result<BlockMatrix> {
    if !c.is_square() {
        return Err(invalid(format!("need a square matrix, got {:?}", c.shape())));
    }
    let m = c.nrows();
    BlockMatrix::from_blocks(&Matrix::zeros(1, 1), &Matrix::zeros(1, m), &Matrix::zeros(m, 1), c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_diff;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn gram(n1: usize, n2: usize, rows: usize, v: &[f64]) -> BlockMatrix {
        let p = Matrix::from_real(rows, n1 + n2, v).unwrap();
        BlockMatrix::new(n1, n2, &p.adjoint() * &p).unwrap()
    }

    #[test]
    fn scalar_pinv_gap() {
        let g = pinv_convexity_gap(&Matrix::from_diagonal(&[1.0]), &Matrix::from_diagonal(&[2.0]), 0.5, &tol()).unwrap();
        assert!((g.gap.get(0, 0).re - 1.0 / 12.0).abs() <= 1e-15);
        assert!(g.psd);
    }

    #[test]
    fn equal_arguments_and_endpoints_give_zero() {
        let a = gram(1, 2, 2, &[1.0, 2.0, 0.0, 0.0, 1.0, 1.0]);
        let b = gram(1, 2, 3, &[1.0, 0.0, 0.0, 2.0, 1.0, 1.0, 0.0, -1.0, 1.0]);
        for t in [0.0, 0.3, 1.0] {
            assert!(jppt_concavity_gap(&a, &a, t, &tol()).unwrap().gap.max_abs() <= 1e-12);
            assert!(schur_concavity_gap(&a, &a, t, &tol()).unwrap().gap.max_abs() <= 1e-12);
        }
        for t in [0.0, 1.0] {
            assert!(jppt_concavity_gap(&a, &b, t, &tol()).unwrap().gap.max_abs() <= 1e-12);
        }
    }

    #[test]
    fn block_diagonal_schur_gap_vanishes() {
        let a = BlockMatrix::new(1, 1, Matrix::from_diagonal(&[2.0, 1.0])).unwrap();
        let b = BlockMatrix::new(1, 1, Matrix::from_diagonal(&[5.0, 3.0])).unwrap();
        let g = schur_concavity_gap(&a, &b, 0.4, &tol()).unwrap();
        assert!(g.gap.max_abs() <= 1e-15);
    }

    #[test]
    fn blocks_of_jppt_gap() {
        let c = Matrix::from_real(2, 2, &[2.0, 1.0, 1.0, 1.0]).unwrap();
        let d = Matrix::from_real(2, 2, &[1.0, 0.0, 0.0, 3.0]).unwrap();
        let t = 0.35;
        let j = jppt_concavity_gap(&bordered(&c).unwrap(), &bordered(&d).unwrap(), t, &tol()).unwrap();
        let p = pinv_convexity_gap(&c, &d, t, &tol()).unwrap();
        assert!(max_diff(&j.gap.submatrix(1, 1, 2, 2), &p.gap) <= 1e-12);
        assert!(p.psd);
    }

    #[test]
    fn kernel_mismatch_is_rejected() {
        let a = BlockMatrix::new(1, 1, Matrix::from_diagonal(&[1.0, 0.0])).unwrap();
        let b = BlockMatrix::new(1, 1, Matrix::from_diagonal(&[1.0, 1.0])).unwrap();
        assert!(matches!(jppt_concavity_gap(&a, &b, 0.5, &tol()), Err(crate::Error::Precondition(_))));
        assert!(matches!(jppt_concavity_gap(&a, &a, 1.5, &tol()), Err(crate::Error::InvalidInput(_))));
    }
}
