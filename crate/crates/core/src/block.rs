//! 2x2 block-partitioned matrices and the transforms pivoting on the (2,2) block.
//!
//! For `A = [[A11, A12], [A21, A22]]` with `A22⁺` the Moore-Penrose
//! pseudoinverse:
//!
//! ```text
//! A/A22   = A11 - A12 A22⁺ A21
//! ppt(A)  = [[A/A22,  A12 A22⁺], [-A22⁺ A21,  A22⁺]]
//! J ppt(A)= [[A/A22,  A12 A22⁺], [ A22⁺ A21, -A22⁺]]   J = diag(I, -I)
//! ```
//!
//! Every transform is total: singular `A22` is handled by the pseudoinverse.

use crate::error::{invalid, precondition, Error, Inclusion, Result};
use crate::linalg::{imag_part, is_ep, max_diff, pinv, Matrix, ToleranceConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct BlockMatrix {
    n1: usize,
    n2: usize,
    data: Matrix,
}

impl BlockMatrix {
    pub fn new(n1: usize, n2: usize, data: Matrix) -> Result<Self> {
        let n = n1 + n2;
        if data.shape() != (n, n) {
            return Err(invalid(format!(
                "partition ({n1}, {n2}) needs a {n}x{n} matrix, got {:?}",
                data.shape()
            )));
        }
        Ok(Self { n1, n2, data })
    }

    pub fn from_blocks(a11: &Matrix, a12: &Matrix, a21: &Matrix, a22: &Matrix) -> Result<Self> {
        let (n1, n2) = (a11.nrows(), a22.nrows());
        if !a11.is_square() || !a22.is_square() {
            return Err(invalid("diagonal blocks must be square"));
        }
        Self::new(n1, n2, Matrix::from_blocks(a11, a12, a21, a22)?)
    }

    /// Same data under a different partition.
    pub fn repartition(&self, n1: usize, n2: usize) -> Result<Self> {
        Self::new(n1, n2, self.data.clone())
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    pub fn dim(&self) -> usize {
        self.n1 + self.n2
    }

    pub fn matrix(&self) -> &Matrix {
        &self.data
    }

    pub fn into_matrix(self) -> Matrix {
        self.data
    }

    pub fn a11(&self) -> Matrix {
        self.data.submatrix(0, 0, self.n1, self.n1)
    }

    pub fn a12(&self) -> Matrix {
        self.data.submatrix(0, self.n1, self.n1, self.n2)
    }

    pub fn a21(&self) -> Matrix {
        self.data.submatrix(self.n1, 0, self.n2, self.n1)
    }

    pub fn a22(&self) -> Matrix {
        self.data.submatrix(self.n1, self.n1, self.n2, self.n2)
    }

    pub fn same_partition(&self, other: &BlockMatrix) -> bool {
        self.n1 == other.n1 && self.n2 == other.n2
    }

    pub fn adjoint(&self) -> BlockMatrix {
        BlockMatrix {
            n1: self.n1,
            n2: self.n2,
            data: self.data.adjoint(),
        }
    }

    /// `(1 - t) self + t other`.
    pub fn lerp(&self, other: &BlockMatrix, t: f64) -> Result<BlockMatrix> {
        if !self.same_partition(other) {
            return Err(partition_mismatch(self, other));
        }
        Ok(BlockMatrix {
            n1: self.n1,
            n2: self.n2,
            data: &self.data.scale(1.0 - t) + &other.data.scale(t),
        })
    }

    pub fn sub(&self, other: &BlockMatrix) -> Result<BlockMatrix> {
        if !self.same_partition(other) {
            return Err(partition_mismatch(self, other));
        }
        Ok(BlockMatrix {
            n1: self.n1,
            n2: self.n2,
            data: &self.data - &other.data,
        })
    }
}

pub(crate) fn partition_mismatch(a: &BlockMatrix, b: &BlockMatrix) -> Error {
    invalid(format!(
        "partitions differ: ({}, {}) vs ({}, {})",
        a.n1, a.n2, b.n1, b.n2
    ))
}

/// `diag(I_{n1}, -I_{n2})`.
pub fn signature_matrix(n1: usize, n2: usize) -> Matrix {
    let diag: Vec<f64> = std::iter::repeat_n(1.0, n1).chain(std::iter::repeat_n(-1.0, n2)).collect();
    Matrix::from_diagonal(&diag)
}

/// Blocks shared by every transform, computed with one pseudoinverse.
struct Pieces {
    a11: Matrix,
    a12: Matrix,
    a21: Matrix,
    a22: Matrix,
    a22_pinv: Matrix,
}

impl Pieces {
    fn of(a: &BlockMatrix, tol: &ToleranceConfig) -> Result<Self> {
        let a22 = a.a22();
        let a22_pinv = pinv(&a22, tol)?;
        Ok(Self {
            a11: a.a11(),
            a12: a.a12(),
            a21: a.a21(),
            a22,
            a22_pinv,
        })
    }

    fn schur(&self) -> Matrix {
        &self.a11 - &(&(&self.a12 * &self.a22_pinv) * &self.a21)
    }
}

/// Generalized Schur complement `A/A22 = A11 - A12 A22⁺ A21`.
pub fn schur_complement(a: &BlockMatrix, tol: &ToleranceConfig) -> Result<Matrix> {
    Ok(Pieces::of(a, tol)?.schur())
}

/// Generalized principal pivot transform with respect to `A22`.
pub fn gppt(a: &BlockMatrix, tol: &ToleranceConfig) -> Result<BlockMatrix> {
    let p = Pieces::of(a, tol)?;
    let top_right = &p.a12 * &p.a22_pinv;
    let bottom_left = -&(&p.a22_pinv * &p.a21);
    BlockMatrix::from_blocks(&p.schur(), &top_right, &bottom_left, &p.a22_pinv)
}

/// `J ppt(A)`, computed as the product with [`signature_matrix`].
pub fn jppt(a: &BlockMatrix, tol: &ToleranceConfig) -> Result<BlockMatrix> {
    let g = gppt(a, tol)?;
    let j = signature_matrix(a.n1, a.n2);
    BlockMatrix::new(a.n1, a.n2, &j * g.matrix())
}

/// The `(n + n2) x (n + n2)` matrix, partitioned `(n, n2)`, whose Schur
/// complement is `J ppt(A)`:
///
/// ```text
/// [[A11,  0,          A12       ],
///  [0,    0,         -A22⁺ A22  ],
///  [A21, -A22 A22⁺,   A22       ]]
/// ```
pub fn hat_embedding(a: &BlockMatrix, tol: &ToleranceConfig) -> Result<BlockMatrix> {
    let (n1, n2) = (a.n1, a.n2);
    let p = Pieces::of(a, tol)?;
    let corange = &p.a22_pinv * &p.a22;
    let range = &p.a22 * &p.a22_pinv;
    let hat11 = Matrix::from_blocks(
        &p.a11,
        &Matrix::zeros(n1, n2),
        &Matrix::zeros(n2, n1),
        &Matrix::zeros(n2, n2),
    )?;
    let hat12 = Matrix::from_blocks(&p.a12, &Matrix::zeros(n1, 0), &-&corange, &Matrix::zeros(n2, 0))?;
    let hat21 = Matrix::from_blocks(&p.a21, &-&range, &Matrix::zeros(0, n1), &Matrix::zeros(0, n2))?;
    BlockMatrix::from_blocks(&hat11, &hat12, &hat21, &p.a22)
}

#[derive(Debug, Clone)]
pub struct EpCongruence {
    /// `V = [I; -A22⁺ A21]`, `n x n1`.
    pub vector_map: Matrix,
    /// `‖A/A22 - Vᴴ A V‖_max`
    pub schur_identity_residual: f64,
    /// `‖Im(A/A22) - Vᴴ Im(A) V‖_max`
    pub im_identity_residual: f64,
}

fn require_ep(a22: &Matrix, tol: &ToleranceConfig) -> Result<()> {
    if is_ep(a22, tol)? {
        Ok(())
    } else {
        Err(precondition("A22 is not EP (A22 A22⁺ ≠ A22⁺ A22)"))
    }
}

/// Checks the congruence formulas for `A/A22` and `Im(A/A22)` that hold
/// when `A22` is EP.
pub fn ep_congruence_schur(a: &BlockMatrix, tol: &ToleranceConfig) -> Result<EpCongruence> {
    let p = Pieces::of(a, tol)?;
    require_ep(&p.a22, tol)?;
    let v = Matrix::from_blocks(
        &Matrix::identity(a.n1),
        &Matrix::zeros(a.n1, 0),
        &-&(&p.a22_pinv * &p.a21),
        &Matrix::zeros(a.n2, 0),
    )?;
    let vh = v.adjoint();
    let schur = p.schur();
    let congruent = &(&vh * a.matrix()) * &v;
    let im_congruent = &(&vh * &imag_part(a.matrix())?) * &v;
    Ok(EpCongruence {
        schur_identity_residual: max_diff(&schur, &congruent),
        im_identity_residual: max_diff(&imag_part(&schur)?, &im_congruent),
        vector_map: v,
    })
}

#[derive(Debug, Clone)]
pub struct JpptImCongruence {
    /// `W = [[I, 0], [-A22⁺ A21, A22⁺]]`
    pub congruence_map: Matrix,
    /// `‖Im(J ppt(A)) - Wᴴ Im(A) W‖_max`
    pub residual: f64,
}

pub fn jppt_im_congruence(a: &BlockMatrix, tol: &ToleranceConfig) -> Result<JpptImCongruence> {
    let p = Pieces::of(a, tol)?;
    require_ep(&p.a22, tol)?;
    let w = Matrix::from_blocks(
        &Matrix::identity(a.n1),
        &Matrix::zeros(a.n1, a.n2),
        &-&(&p.a22_pinv * &p.a21),
        &p.a22_pinv,
    )?;
    let lhs = imag_part(jppt(a, tol)?.matrix())?;
    let rhs = &(&w.adjoint() * &imag_part(a.matrix())?) * &w;
    Ok(JpptImCongruence {
        residual: max_diff(&lhs, &rhs),
        congruence_map: w,
    })
}

/// Factors of `[[I, -X], [0, I]] A [[I, 0], [-Y, I]] = diag(W, Z)`.
#[derive(Debug, Clone)]
pub struct BlockDiagonalization {
    pub x: Matrix,
    pub y: Matrix,
    pub w: Matrix,
    pub z: Matrix,
    /// Max-norm residual of the factorization identity.
    pub residual: f64,
}

impl BlockDiagonalization {
    /// `[[I, X], [0, I]] diag(W, Z) [[I, 0], [Y, I]]`, which should be `A`.
    pub fn reassemble(&self) -> Result<Matrix> {
        let (n1, n2) = (self.w.nrows(), self.z.nrows());
        let left = Matrix::from_blocks(
            &Matrix::identity(n1),
            &self.x,
            &Matrix::zeros(n2, n1),
            &Matrix::identity(n2),
        )?;
        let mid = Matrix::from_blocks(&self.w, &Matrix::zeros(n1, n2), &Matrix::zeros(n2, n1), &self.z)?;
        let right = Matrix::from_blocks(
            &Matrix::identity(n1),
            &Matrix::zeros(n1, n2),
            &self.y,
            &Matrix::identity(n2),
        )?;
        Ok(&(&left * &mid) * &right)
    }
}

/// Residual certificates `‖A12 - A12 A22⁺ A22‖` and `‖A21 - A22 A22⁺ A21‖`
/// for `ker A22 ⊆ ker A12` and `ran A21 ⊆ ran A22`.
pub fn inclusion_residuals(a: &BlockMatrix, tol: &ToleranceConfig) -> Result<[f64; 2]> {
    let p = Pieces::of(a, tol)?;
    Ok(inclusion_residuals_of(&p))
}

fn inclusion_residuals_of(p: &Pieces) -> [f64; 2] {
    let ker = max_diff(&p.a12, &(&(&p.a12 * &p.a22_pinv) * &p.a22));
    let ran = max_diff(&p.a21, &(&(&p.a22 * &p.a22_pinv) * &p.a21));
    [ker, ran]
}

/// Threshold for the residual certificates, scaled by `‖A‖_max`.
pub(crate) fn certificate_threshold(a: &Matrix, tol: &ToleranceConfig) -> f64 {
    tol.eq_tol * (1.0 + a.max_abs())
}

/// Generalized Aitken block diagonalization. Fails, naming the offending
/// inclusions, unless `ker A22 ⊆ ker A12` and `ran A21 ⊆ ran A22`.
pub fn block_diagonalize(a: &BlockMatrix, tol: &ToleranceConfig) -> Result<BlockDiagonalization> {
    let (n1, n2) = (a.n1, a.n2);
    let p = Pieces::of(a, tol)?;
    let residuals = inclusion_residuals_of(&p);
    let limit = certificate_threshold(a.matrix(), tol);
    let mut failed = Vec::new();
    if residuals[0] > limit {
        failed.push(Inclusion::KernelIntoA12);
    }
    if residuals[1] > limit {
        failed.push(Inclusion::RangeOfA21);
    }
    if !failed.is_empty() {
        return Err(Error::InclusionFailure { failed, residuals });
    }
    let x = &p.a12 * &p.a22_pinv;
    let y = &p.a22_pinv * &p.a21;
    let w = p.schur();
    let left = Matrix::from_blocks(
        &Matrix::identity(n1),
        &-&x,
        &Matrix::zeros(n2, n1),
        &Matrix::identity(n2),
    )?;
    let right = Matrix::from_blocks(
        &Matrix::identity(n1),
        &Matrix::zeros(n1, n2),
        &-&y,
        &Matrix::identity(n2),
    )?;
    let lhs = &(&left * a.matrix()) * &right;
    let rhs = Matrix::from_blocks(&w, &Matrix::zeros(n1, n2), &Matrix::zeros(n2, n1), &p.a22)?;
    Ok(BlockDiagonalization {
        residual: max_diff(&lhs, &rhs),
        x,
        y,
        w,
        z: p.a22,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{Complex64, Field};

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn real(n: usize, v: &[f64]) -> Matrix {
        Matrix::from_real(n, n, v).unwrap()
    }

    #[test]
    fn signature_matrices() {
        assert_eq!(signature_matrix(1, 1), Matrix::from_diagonal(&[1.0, -1.0]));
        assert_eq!(signature_matrix(0, 3), Matrix::from_diagonal(&[-1.0; 3]));
        let j = signature_matrix(2, 2);
        assert_eq!(j, Matrix::from_diagonal(&[1.0, 1.0, -1.0, -1.0]));
        assert_eq!(&j * &j, Matrix::identity(4));
        assert_eq!(j.adjoint(), j);
    }

    #[test]
    fn rejects_bad_partition() {
        assert!(BlockMatrix::new(1, 1, Matrix::identity(3)).is_err());
    }

    #[test]
    fn schur_with_zero_coupling_is_a11() {
        let a = BlockMatrix::new(2, 1, real(3, &[1.0, 2.0, 5.0, 3.0, 4.0, 6.0, 0.0, 0.0, 7.0])).unwrap();
        assert_eq!(schur_complement(&a, &tol()).unwrap(), a.a11());
    }

    #[test]
    fn identity_is_fixed_by_ppt() {
        for (n1, n2) in [(0, 3), (1, 2), (3, 0)] {
            let a = BlockMatrix::new(n1, n2, Matrix::identity(n1 + n2)).unwrap();
            assert!(max_diff(gppt(&a, &tol()).unwrap().matrix(), &Matrix::identity(n1 + n2)) <= 1e-15);
        }
    }

    #[test]
    fn jppt_is_signature_times_gppt() {
        let a = BlockMatrix::new(1, 2, real(3, &[1.0, 2.0, 0.5, -1.0, 3.0, 1.0, 4.0, 1.0, 2.0])).unwrap();
        let g = gppt(&a, &tol()).unwrap();
        let j = jppt(&a, &tol()).unwrap();
        assert_eq!(*j.matrix(), &signature_matrix(1, 2) * g.matrix());
    }

    #[test]
    fn hat_of_zero_a22() {
        let a = BlockMatrix::new(1, 1, real(2, &[3.0, 1.0, 2.0, 0.0])).unwrap();
        let h = hat_embedding(&a, &tol()).unwrap();
        assert_eq!((h.n1(), h.n2()), (2, 1));
        assert_eq!(h.a12().get(1, 0), Complex64::new(0.0, 0.0));
        assert_eq!(h.a21().get(0, 1), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn hat_of_identity() {
        let a = BlockMatrix::new(1, 2, Matrix::identity(3)).unwrap();
        let h = hat_embedding(&a, &tol()).unwrap();
        assert!(max_diff(&h.a22(), &Matrix::identity(2)) <= 1e-15);
        assert!(max_diff(&h.a12().submatrix(1, 0, 2, 2), &-&Matrix::identity(2)) <= 1e-15);
        assert!(max_diff(&h.a21().submatrix(0, 1, 2, 2), &-&Matrix::identity(2)) <= 1e-15);
        let s = schur_complement(&h, &tol()).unwrap();
        assert!(max_diff(&s, jppt(&a, &tol()).unwrap().matrix()) <= 1e-15);
    }

    #[test]
    fn ep_congruence_on_hermitian() {
        let a = BlockMatrix::new(1, 2, real(3, &[2.0, 1.0, -1.0, 1.0, 1.0, 1.0, -1.0, 1.0, 1.0])).unwrap();
        let r = ep_congruence_schur(&a, &tol()).unwrap();
        assert!(r.schur_identity_residual <= 1e-12);
        assert!(r.im_identity_residual <= 1e-12);
        assert_eq!(r.vector_map.shape(), (3, 1));
    }

    #[test]
    fn ep_congruence_needs_ep_block() {
        let a = BlockMatrix::new(1, 2, real(3, &[1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0])).unwrap();
        assert!(matches!(ep_congruence_schur(&a, &tol()), Err(Error::Precondition(_))));
        assert!(matches!(jppt_im_congruence(&a, &tol()), Err(Error::Precondition(_))));
    }

    #[test]
    fn im_congruence_of_i_times_identity() {
        let a = BlockMatrix::new(1, 1, Matrix::identity(2).scale_complex(Complex64::new(0.0, 1.0))).unwrap();
        let j = jppt(&a, &tol()).unwrap();
        // J ppt(iI) = diag(i, -(1/i)) = iI.
        assert!(max_diff(j.matrix(), a.matrix()) <= 1e-15);
        let r = jppt_im_congruence(&a, &tol()).unwrap();
        assert!(r.residual <= 1e-15);
        assert_eq!(r.congruence_map.get(1, 1), Complex64::new(0.0, -1.0));
    }

    #[test]
    fn im_congruence_of_real_symmetric_is_zero() {
        let a = BlockMatrix::new(2, 1, real(3, &[1.0, 2.0, 3.0, 2.0, 0.0, 1.0, 3.0, 1.0, 5.0])).unwrap();
        let r = jppt_im_congruence(&a, &tol()).unwrap();
        assert_eq!(r.residual, 0.0);
    }

    #[test]
    fn block_diagonal_input() {
        let a = BlockMatrix::new(1, 1, Matrix::from_diagonal(&[3.0, -2.0])).unwrap();
        let d = block_diagonalize(&a, &tol()).unwrap();
        assert_eq!(d.x.max_abs(), 0.0);
        assert_eq!(d.y.max_abs(), 0.0);
        assert_eq!(d.w, a.a11());
        assert_eq!(d.z, a.a22());
    }

    #[test]
    fn block_diagonalize_invertible_a22() {
        let a = BlockMatrix::new(1, 2, real(3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 10.0])).unwrap();
        let d = block_diagonalize(&a, &tol()).unwrap();
        assert!(d.residual <= 1e-12);
        assert!(max_diff(&d.reassemble().unwrap(), a.matrix()) <= 1e-12);
        assert!(max_diff(&d.w, &schur_complement(&a, &tol()).unwrap()) == 0.0);
    }

    #[test]
    fn block_diagonalize_names_failed_inclusion() {
        let a = BlockMatrix::new(1, 1, real(2, &[0.0, 1.0, 0.0, 0.0])).unwrap();
        match block_diagonalize(&a, &tol()) {
            Err(Error::InclusionFailure { failed, .. }) => {
                assert_eq!(failed, vec![Inclusion::KernelIntoA12])
            }
            other => panic!("expected inclusion failure, got {other:?}"),
        }
        let at = BlockMatrix::new(1, 1, real(2, &[0.0, 0.0, 1.0, 0.0])).unwrap();
        match block_diagonalize(&at, &tol()) {
            Err(Error::InclusionFailure { failed, .. }) => assert_eq!(failed, vec![Inclusion::RangeOfA21]),
            other => panic!("expected inclusion failure, got {other:?}"),
        }
    }

    #[test]
    fn real_inputs_give_real_outputs() {
        let a = BlockMatrix::new(1, 1, real(2, &[1.0, 2.0, 3.0, 4.0])).unwrap();
        assert_eq!(jppt(&a, &tol()).unwrap().matrix().field(), Field::Real);
        assert_eq!(hat_embedding(&a, &tol()).unwrap().matrix().field(), Field::Real);
    }
}
