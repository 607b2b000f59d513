//! Dense linear algebra over ℝ or ℂ.
//!
//! Every matrix is stored with complex entries; a [`Field`] tag records
//! whether the value is real, in which case all imaginary parts are exactly
//! zero. Results inherit the real tag when every operand is real.
//!
//! Numerical decisions (rank, kernels, Loewner order) are governed by a
//! single [`ToleranceConfig`]:
//!
//! * singular values at or below `rank_rel_tol * σ_max` are treated as zero;
//! * a Hermitian matrix is PSD when its smallest eigenvalue is `>= -psd_tol`,
//!   and eigenvalues in `[-psd_tol, psd_tol]` count as zero for inertia;
//! * entrywise identities hold when the max-norm residual is `<= eq_tol`.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
pub use num_complex::Complex64;

use crate::error::{invalid, precondition, Error, Result};

pub type Vector = DVector<Complex64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    /// The field of a result computed from operands in `self` and `other`.
    pub fn join(self, other: Field) -> Field {
        if self == Field::Real && other == Field::Real {
            Field::Real
        } else {
            Field::Complex
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    pub rank_rel_tol: f64,
    pub psd_tol: f64,
    pub eq_tol: f64,
}

impl ToleranceConfig {
    pub const DEFAULT_RANK_REL_TOL: f64 = 1e-10;
    pub const DEFAULT_PSD_TOL: f64 = 1e-8;
    pub const DEFAULT_EQ_TOL: f64 = 1e-9;

    pub fn new(rank_rel_tol: f64, psd_tol: f64, eq_tol: f64) -> Result<Self> {
        for (name, v) in [
            ("rank_rel_tol", rank_rel_tol),
            ("psd_tol", psd_tol),
            ("eq_tol", eq_tol),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(invalid(format!("{name} must be positive and finite, got {v}")));
            }
        }
        Ok(Self {
            rank_rel_tol,
            psd_tol,
            eq_tol,
        })
    }
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            rank_rel_tol: Self::DEFAULT_RANK_REL_TOL,
            psd_tol: Self::DEFAULT_PSD_TOL,
            eq_tol: Self::DEFAULT_EQ_TOL,
        }
    }
}

/// Eigenvalue sign counts of a Hermitian matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Inertia {
    pub n_pos: usize,
    pub n_neg: usize,
    pub n_zero: usize,
}

impl Inertia {
    pub fn dim(&self) -> usize {
        self.n_pos + self.n_neg + self.n_zero
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    field: Field,
    data: DMatrix<Complex64>,
}

impl Matrix {
    /// Wraps `data`, rejecting a real tag on data with nonzero imaginary parts.
    pub fn new(field: Field, data: DMatrix<Complex64>) -> Result<Self> {
        if field == Field::Real && data.iter().any(|z| z.im != 0.0) {
            return Err(invalid("real matrix has nonzero imaginary parts"));
        }
        Ok(Self { field, data })
    }

    /// Real tag if every imaginary part is exactly zero, complex otherwise.
    pub fn from_dmatrix(data: DMatrix<Complex64>) -> Self {
        let field = if data.iter().all(|z| z.im == 0.0) {
            Field::Real
        } else {
            Field::Complex
        };
        Self { field, data }
    }

    /// Wraps `data` under `field`, dropping imaginary parts for real results.
    pub(crate) fn wrap(field: Field, mut data: DMatrix<Complex64>) -> Self {
        if field == Field::Real {
            data.iter_mut().for_each(|z| z.im = 0.0);
        }
        Self { field, data }
    }

    pub fn from_real(rows: usize, cols: usize, row_major: &[f64]) -> Result<Self> {
        if row_major.len() != rows * cols {
            return Err(invalid(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                row_major.len()
            )));
        }
        let data = DMatrix::from_fn(rows, cols, |i, j| Complex64::new(row_major[i * cols + j], 0.0));
        Ok(Self {
            field: Field::Real,
            data,
        })
    }

    pub fn from_complex(rows: usize, cols: usize, row_major: &[Complex64]) -> Result<Self> {
        if row_major.len() != rows * cols {
            return Err(invalid(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                row_major.len()
            )));
        }
        let data = DMatrix::from_fn(rows, cols, |i, j| row_major[i * cols + j]);
        Ok(Self {
            field: Field::Complex,
            data,
        })
    }

    pub fn from_real_dmatrix(m: &DMatrix<f64>) -> Self {
        Self {
            field: Field::Real,
            data: m.map(|x| Complex64::new(x, 0.0)),
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            field: Field::Real,
            data: DMatrix::zeros(rows, cols),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            field: Field::Real,
            data: DMatrix::identity(n, n),
        }
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut data = DMatrix::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            data[(i, i)] = Complex64::new(d, 0.0);
        }
        Self {
            field: Field::Real,
            data,
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn nrows(&self) -> usize {
        self.data.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.data.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.data.shape()
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols()
    }

    pub fn data(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    pub fn into_inner(self) -> DMatrix<Complex64> {
        self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[(i, j)]
    }

    pub fn to_row_major(&self) -> Vec<Complex64> {
        let (r, c) = self.shape();
        (0..r)
            .flat_map(|i| (0..c).map(move |j| (i, j)))
            .map(|(i, j)| self.data[(i, j)])
            .collect()
    }

    /// Copy of the `nr x nc` submatrix starting at `(r0, c0)`.
    pub fn submatrix(&self, r0: usize, c0: usize, nr: usize, nc: usize) -> Matrix {
        Matrix {
            field: self.field,
            data: self.data.view((r0, c0), (nr, nc)).into_owned(),
        }
    }

    /// Assembles `[[m11, m12], [m21, m22]]`.
    pub fn from_blocks(m11: &Matrix, m12: &Matrix, m21: &Matrix, m22: &Matrix) -> Result<Matrix> {
        let (r1, c1) = m11.shape();
        let (r2, c2) = m22.shape();
        if m12.shape() != (r1, c2) || m21.shape() != (r2, c1) {
            return Err(invalid(format!(
                "inconsistent block shapes: {:?} {:?} / {:?} {:?}",
                m11.shape(),
                m12.shape(),
                m21.shape(),
                m22.shape()
            )));
        }
        let mut data = DMatrix::zeros(r1 + r2, c1 + c2);
        data.view_mut((0, 0), (r1, c1)).copy_from(&m11.data);
        data.view_mut((0, c1), (r1, c2)).copy_from(&m12.data);
        data.view_mut((r1, 0), (r2, c1)).copy_from(&m21.data);
        data.view_mut((r1, c1), (r2, c2)).copy_from(&m22.data);
        let field = m11.field.join(m12.field).join(m21.field).join(m22.field);
        Ok(Matrix { field, data })
    }

    pub fn adjoint(&self) -> Matrix {
        Matrix {
            field: self.field,
            data: self.data.adjoint(),
        }
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix {
            field: self.field,
            data: self.data.map(|z| z * s),
        }
    }

    pub fn scale_complex(&self, s: Complex64) -> Matrix {
        let field = if s.im == 0.0 { self.field } else { Field::Complex };
        Matrix::wrap(field, self.data.map(|z| z * s))
    }

    /// `(H + Hᴴ) / 2`.
    pub fn hermitian_part(&self) -> Matrix {
        Matrix::wrap(self.field, (&self.data + self.data.adjoint()).map(|z| z * 0.5))
    }

    /// Largest entry modulus; 0 for empty matrices.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Hermitian within `eq_tol`, scaled by the matrix magnitude once it exceeds 1.
    pub fn is_hermitian(&self, tol: &ToleranceConfig) -> bool {
        if !self.is_square() {
            return false;
        }
        let skew = (&self.data - self.data.adjoint()).iter().fold(0.0f64, |m, z| m.max(z.norm()));
        skew <= tol.eq_tol * self.max_abs().max(1.0)
    }

    pub fn mul_vec(&self, v: &Vector) -> Vector {
        &self.data * v
    }

    pub fn trace(&self) -> Complex64 {
        self.data.trace()
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        Matrix {
            field: self.field.join(rhs.field),
            data: &self.data + &rhs.data,
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        Matrix {
            field: self.field.join(rhs.field),
            data: &self.data - &rhs.data,
        }
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        Matrix {
            field: self.field.join(rhs.field),
            data: &self.data * &rhs.data,
        }
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix {
            field: self.field,
            data: -&self.data,
        }
    }
}

/// Max-norm of `a - b`. Shapes must agree.
pub fn max_diff(a: &Matrix, b: &Matrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "max_diff: shape mismatch");
    a.data
        .iter()
        .zip(b.data.iter())
        .fold(0.0, |m, (x, y)| m.max((x - y).norm()))
}

/// An orthonormal basis of a subspace of 𝔽^ambient_dim, one vector per column.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis {
    ambient_dim: usize,
    vectors: DMatrix<Complex64>,
}

impl SubspaceBasis {
    /// Wraps columns that are already orthonormal.
    pub fn from_orthonormal(ambient_dim: usize, vectors: DMatrix<Complex64>) -> Result<Self> {
        if vectors.nrows() != ambient_dim {
            return Err(invalid(format!(
                "basis vectors have length {}, ambient dimension is {ambient_dim}",
                vectors.nrows()
            )));
        }
        Ok(Self {
            ambient_dim,
            vectors,
        })
    }

    /// Orthonormal basis of the span of the columns of `m`.
    pub fn span(m: &Matrix, tol: &ToleranceConfig) -> Result<Self> {
        range_basis(m, tol)
    }

    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            vectors: DMatrix::zeros(ambient_dim, 0),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            vectors: DMatrix::identity(ambient_dim, ambient_dim),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.vectors.ncols()
    }

    pub fn vectors(&self) -> &DMatrix<Complex64> {
        &self.vectors
    }

    pub fn as_matrix(&self) -> Matrix {
        Matrix::from_dmatrix(self.vectors.clone())
    }

    /// Orthogonal projector `Q Qᴴ` onto the subspace.
    pub fn projector(&self) -> Matrix {
        Matrix::from_dmatrix(&self.vectors * self.vectors.adjoint())
    }

    /// Max-norm deviation of `QᴴQ` from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let g = self.vectors.adjoint() * &self.vectors;
        let k = g.nrows();
        max_diff(&Matrix::from_dmatrix(g), &Matrix::identity(k))
    }

    /// Orthonormal basis of the orthogonal complement.
    pub fn complement(&self, tol: &ToleranceConfig) -> Result<SubspaceBasis> {
        // ker Qᴴ rather than ran(I - QQᴴ): the singular values of Qᴴ are all
        // one, while I - QQᴴ for a full basis is pure rounding noise that a
        // relative cutoff would keep.
        kernel_basis(&self.as_matrix().adjoint(), tol)
    }

    /// Distance from `v` to the subspace, `‖(I - QQᴴ)v‖`.
    pub fn residual(&self, v: &Vector) -> f64 {
        let proj = &self.vectors * (self.vectors.adjoint() * v);
        (v - proj).norm()
    }
}

fn check_finite(m: &Matrix) -> Result<()> {
    if m.is_finite() {
        Ok(())
    } else {
        Err(invalid("matrix has non-finite entries"))
    }
}

struct Svd {
    /// `rows x k` left singular vectors, one per singular value.
    u: DMatrix<Complex64>,
    sigma: Vec<f64>,
    /// `cols x cols` right singular vectors when computed with `full_v`.
    v: DMatrix<Complex64>,
}

fn to_faer(m: &DMatrix<Complex64>) -> faer::Mat<Complex64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer(m: faer::MatRef<'_, Complex64>) -> DMatrix<Complex64> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn no_convergence(what: &str) -> Error {
    Error::Numerical(format!("{what} did not converge"))
}

fn svd(m: &Matrix, full_v: bool) -> Result<Svd> {
    let (r, c) = m.shape();
    let k = r.min(c);
    if k == 0 {
        return Ok(Svd {
            u: DMatrix::zeros(r, 0),
            sigma: Vec::new(),
            v: if full_v {
                DMatrix::identity(c, c)
            } else {
                DMatrix::zeros(c, 0)
            },
        });
    }
    let f = to_faer(m.data());
    let s = if full_v { f.svd() } else { f.thin_svd() }.map_err(|_| no_convergence("SVD"))?;
    let sigma: Vec<f64> = s.S().column_vector().iter().map(|z| z.re).collect();
    Ok(Svd {
        u: from_faer(s.U().subcols(0, k)),
        sigma,
        v: from_faer(s.V()),
    })
}

fn cutoff(sigma: &[f64], tol: &ToleranceConfig) -> f64 {
    let smax = sigma.iter().copied().fold(0.0, f64::max);
    tol.rank_rel_tol * smax
}

fn select_columns(m: &DMatrix<Complex64>, keep: impl Fn(usize) -> bool) -> DMatrix<Complex64> {
    let cols: Vec<_> = (0..m.ncols()).filter(|&j| keep(j)).collect();
    DMatrix::from_fn(m.nrows(), cols.len(), |i, j| m[(i, cols[j])])
}

/// Singular values in descending order.
pub fn singular_values(m: &Matrix) -> Result<Vec<f64>> {
    check_finite(m)?;
    let mut s = svd(m, false)?.sigma;
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// Moore-Penrose pseudoinverse via the SVD with a relative rank cutoff.
pub fn pinv(m: &Matrix, tol: &ToleranceConfig) -> Result<Matrix> {
    check_finite(m)?;
    let (r, c) = m.shape();
    let s = svd(m, false)?;
    let cut = cutoff(&s.sigma, tol);
    let mut out = DMatrix::zeros(c, r);
    for (k, &sk) in s.sigma.iter().enumerate() {
        if sk > cut {
            let vk = s.v.column(k);
            let uk = s.u.column(k);
            out += (vk * uk.adjoint()) * Complex64::new(1.0 / sk, 0.0);
        }
    }
    Ok(Matrix::wrap(m.field(), out))
}

pub fn rank(m: &Matrix, tol: &ToleranceConfig) -> Result<usize> {
    check_finite(m)?;
    let s = svd(m, false)?.sigma;
    let cut = cutoff(&s, tol);
    Ok(s.iter().filter(|&&x| x > cut).count())
}

/// Orthonormal basis of `ker M`, using the same cutoff as [`pinv`].
pub fn kernel_basis(m: &Matrix, tol: &ToleranceConfig) -> Result<SubspaceBasis> {
    check_finite(m)?;
    let c = m.ncols();
    let s = svd(m, true)?;
    let cut = cutoff(&s.sigma, tol);
    // V has c columns; the ones past the singular values are kernel vectors too.
    let vectors = select_columns(&s.v, |j| s.sigma.get(j).is_none_or(|&x| x <= cut));
    SubspaceBasis::from_orthonormal(c, vectors)
}

/// Orthonormal basis of `ran M`, using the same cutoff as [`pinv`].
pub fn range_basis(m: &Matrix, tol: &ToleranceConfig) -> Result<SubspaceBasis> {
    check_finite(m)?;
    let r = m.nrows();
    let s = svd(m, false)?;
    let cut = cutoff(&s.sigma, tol);
    let vectors = select_columns(&s.u, |j| s.sigma[j] > cut);
    SubspaceBasis::from_orthonormal(r, vectors)
}

/// `S1 ⊆ S2`, tested by projecting each basis vector of `S1` onto `S2`.
pub fn subspace_leq(s1: &SubspaceBasis, s2: &SubspaceBasis, tol: &ToleranceConfig) -> Result<bool> {
    if s1.ambient_dim != s2.ambient_dim {
        return Err(invalid(format!(
            "subspaces live in different spaces ({} vs {})",
            s1.ambient_dim, s2.ambient_dim
        )));
    }
    Ok((0..s1.dim()).all(|j| s2.residual(&s1.vectors.column(j).into_owned()) <= tol.eq_tol))
}

pub fn subspace_eq(s1: &SubspaceBasis, s2: &SubspaceBasis, tol: &ToleranceConfig) -> Result<bool> {
    Ok(subspace_leq(s1, s2, tol)? && subspace_leq(s2, s1, tol)?)
}

/// `‖Y K‖_max` for an orthonormal basis `K` of `ker X`; zero iff `ker X ⊆ ker Y`.
pub fn kernel_inclusion_residual(x: &Matrix, y: &Matrix, tol: &ToleranceConfig) -> Result<f64> {
    if x.ncols() != y.ncols() {
        return Err(invalid(format!(
            "kernel inclusion needs equal column counts, got {} and {}",
            x.ncols(),
            y.ncols()
        )));
    }
    let k = kernel_basis(x, tol)?;
    Ok((y * &k.as_matrix()).max_abs())
}

/// `‖(I - X X⁺) Y‖_max`; zero iff `ran Y ⊆ ran X`.
pub fn range_inclusion_residual(x: &Matrix, y: &Matrix, tol: &ToleranceConfig) -> Result<f64> {
    if x.nrows() != y.nrows() {
        return Err(invalid(format!(
            "range inclusion needs equal row counts, got {} and {}",
            x.nrows(),
            y.nrows()
        )));
    }
    let p = projector_range(x, tol)?;
    Ok((y - &(&p * y)).max_abs())
}

/// Decision threshold for the inclusion residuals above.
pub fn inclusion_threshold(y: &Matrix, tol: &ToleranceConfig) -> f64 {
    tol.eq_tol * (1.0 + y.max_abs())
}

pub fn kernel_included(x: &Matrix, y: &Matrix, tol: &ToleranceConfig) -> Result<bool> {
    Ok(kernel_inclusion_residual(x, y, tol)? <= inclusion_threshold(y, tol))
}

pub fn range_included(y: &Matrix, x: &Matrix, tol: &ToleranceConfig) -> Result<bool> {
    Ok(range_inclusion_residual(x, y, tol)? <= inclusion_threshold(y, tol))
}

pub(crate) fn require_hermitian(h: &Matrix, what: &str, tol: &ToleranceConfig) -> Result<()> {
    check_finite(h)?;
    if !h.is_hermitian(tol) {
        return Err(precondition(format!("{what} is not Hermitian")));
    }
    Ok(())
}

/// Ascending eigenvalues of the Hermitian part of `h`.
pub fn hermitian_eigenvalues(h: &Matrix, tol: &ToleranceConfig) -> Result<Vec<f64>> {
    require_hermitian(h, "matrix", tol)?;
    eigenvalues_unchecked(h)
}

pub(crate) fn eigenvalues_unchecked(h: &Matrix) -> Result<Vec<f64>> {
    if h.nrows() == 0 {
        return Ok(Vec::new());
    }
    let sym = to_faer(h.hermitian_part().data());
    let mut ev = sym
        .self_adjoint_eigenvalues(faer::Side::Lower)
        .map_err(|_| no_convergence("Hermitian eigensolver"))?;
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// Eigenvalues of a general square matrix, in no particular order.
pub(crate) fn general_eigenvalues(m: &DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    to_faer(m).eigenvalues().map_err(|_| no_convergence("eigensolver"))
}

/// Smallest eigenvalue of the Hermitian part; `+∞` for the empty matrix.
pub fn min_eigenvalue(h: &Matrix, tol: &ToleranceConfig) -> Result<f64> {
    Ok(hermitian_eigenvalues(h, tol)?.first().copied().unwrap_or(f64::INFINITY))
}

pub fn inertia(h: &Matrix, tol: &ToleranceConfig) -> Result<Inertia> {
    let ev = hermitian_eigenvalues(h, tol)?;
    let n_pos = ev.iter().filter(|&&x| x > tol.psd_tol).count();
    let n_neg = ev.iter().filter(|&&x| x < -tol.psd_tol).count();
    Ok(Inertia {
        n_pos,
        n_neg,
        n_zero: ev.len() - n_pos - n_neg,
    })
}

/// `H1 ≤ H2` in the Loewner order: `λ_min(H2 - H1) >= -psd_tol`.
pub fn loewner_leq(h1: &Matrix, h2: &Matrix, tol: &ToleranceConfig) -> Result<bool> {
    if h1.shape() != h2.shape() {
        return Err(precondition(format!(
            "Loewner comparison of {:?} and {:?}",
            h1.shape(),
            h2.shape()
        )));
    }
    require_hermitian(h1, "left operand", tol)?;
    require_hermitian(h2, "right operand", tol)?;
    Ok(min_eigenvalue(&(h2 - h1), tol)? >= -tol.psd_tol)
}

/// `0 ≤ H`.
pub fn is_psd(h: &Matrix, tol: &ToleranceConfig) -> Result<bool> {
    require_hermitian(h, "matrix", tol)?;
    Ok(min_eigenvalue(h, tol)? >= -tol.psd_tol)
}

/// `M M⁺`, the orthogonal projector onto `ran M`.
pub fn projector_range(m: &Matrix, tol: &ToleranceConfig) -> Result<Matrix> {
    Ok(m * &pinv(m, tol)?)
}

/// `M⁺ M`, the orthogonal projector onto `ran Mᴴ`.
pub fn projector_corange(m: &Matrix, tol: &ToleranceConfig) -> Result<Matrix> {
    Ok(&pinv(m, tol)? * m)
}

/// `M M⁺ = M⁺ M` within `eq_tol`.
pub fn is_ep(m: &Matrix, tol: &ToleranceConfig) -> Result<bool> {
    if !m.is_square() {
        return Err(invalid(format!("EP test needs a square matrix, got {:?}", m.shape())));
    }
    let p = pinv(m, tol)?;
    Ok(max_diff(&(m * &p), &(&p * m)) <= tol.eq_tol)
}

/// `Im(M) = (M - Mᴴ) / 2i`, always Hermitian.
pub fn imag_part(m: &Matrix) -> Result<Matrix> {
    if !m.is_square() {
        return Err(invalid(format!("imaginary part needs a square matrix, got {:?}", m.shape())));
    }
    let d = m.data() - m.data().adjoint();
    let half_over_i = Complex64::new(0.0, -0.5);
    let mut out = d.map(|z| z * half_over_i);
    // Entries on the diagonal are real by construction.
    for i in 0..out.nrows() {
        out[(i, i)].im = 0.0;
    }
    Ok(Matrix::from_dmatrix(out))
}

/// Column vector from real values.
pub fn real_vector(values: &[f64]) -> Vector {
    DVector::from_iterator(values.len(), values.iter().map(|&x| Complex64::new(x, 0.0)))
}

pub(crate) fn stack(top: &Vector, bottom: &Vector) -> Vector {
    let mut out = DVector::zeros(top.len() + bottom.len());
    out.rows_mut(0, top.len()).copy_from(top);
    out.rows_mut(top.len(), bottom.len()).copy_from(bottom);
    out
}
