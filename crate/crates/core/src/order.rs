//! Loewner-order monotonicity of `J ppt`.
//!
//! For Hermitian `A ≤ B` with the same partition the following are
//! equivalent, and any of them implies `A/A22 ≤ B/B22`:
//!
//! * (a) `J ppt(A) ≤ J ppt(B)`
//! * (b) `B22⁺ ≤ A22⁺`
//! * (c) `t ↦ rank((1 - t) A22 + t B22)` is constant on `[0, 1]`
//!
//! [`theorem1_report`] evaluates each statement by its own algorithm so the
//! equivalence can be checked numerically. Statement (c) is decided exactly
//! (kernel comparison, then the spectrum of `D⁻¹C` on the compressed space);
//! rank sampling on a grid is available as an independent route.

use crate::block::{jppt, partition_mismatch, schur_complement, BlockMatrix};
use crate::error::{invalid, precondition, Result};
use crate::linalg::{
    general_eigenvalues, inertia, is_psd, kernel_basis, kernel_included, loewner_leq, pinv, range_basis, range_included,
    rank, require_hermitian, singular_values, subspace_eq, Complex64, Matrix, SubspaceBasis,
    ToleranceConfig,
};

/// Number of uniformly spaced points in `[0, 1]` used by grid-based routes.
pub const GRID_POINTS: usize = 101;

/// Width to which a rank-drop witness is refined.
const WITNESS_RESOLUTION: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RankPathMethod {
    /// `ker C = ker D` and `i₋(C) = i₋(D)`.
    KernelInertia,
    /// Kernel comparison, then no eigenvalue of `D⁻¹C` in `(-∞, 0]` after
    /// compressing to the complement of the common kernel.
    Spectral,
    /// Rank and inertia evaluated on the uniform grid.
    Sampled,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankPathReport {
    pub constant: bool,
    /// Rank along the whole path, when it is constant.
    pub common_rank: Option<usize>,
    /// A `t` where the rank differs from `rank C`; absent when constant.
    pub witness_t: Option<f64>,
    /// `rank C ≠ rank D`.
    pub endpoint_ranks_differ: bool,
    pub method: RankPathMethod,
    /// The spectral route saw eigenvalues of `D⁻¹C` with imaginary part above `eq_tol`.
    pub complex_spectrum: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlbertConditions {
    pub psd22: bool,
    pub ker_incl: bool,
    pub psd_schur: bool,
    pub overall: bool,
}

/// `0 ≤ A` via `0 ≤ A22`, `ker A22 ⊆ ker A12` and `0 ≤ A/A22`.
pub fn albert_psd_conditions(a: &BlockMatrix, tol: &ToleranceConfig) -> Result<AlbertConditions> {
    require_hermitian(a.matrix(), "A", tol)?;
    let psd22 = is_psd(&a.a22(), tol)?;
    let ker_incl = kernel_included(&a.a22(), &a.a12(), tol)?;
    let psd_schur = is_psd(&schur_complement(a, tol)?.hermitian_part(), tol)?;
    Ok(AlbertConditions {
        psd22,
        ker_incl,
        psd_schur,
        overall: psd22 && ker_incl && psd_schur,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PinvMonotonicity {
    /// `ker C = ker D ∧ i₋(C) = i₋(D)`
    pub holds: bool,
    pub ker_equal: bool,
    pub inertia_equal: bool,
    /// `D⁺ ≤ C⁺` tested directly.
    pub direct: bool,
}

fn require_ordered(c: &Matrix, d: &Matrix, tol: &ToleranceConfig) -> Result<()> {
    if c.shape() != d.shape() || !c.is_square() {
        return Err(invalid(format!("need square matrices of equal size, got {:?} and {:?}", c.shape(), d.shape())));
    }
    require_hermitian(c, "C", tol)?;
    require_hermitian(d, "D", tol)?;
    if !loewner_leq(c, d, tol)? {
        return Err(precondition("C ≤ D does not hold"));
    }
    Ok(())
}

fn kernels_equal(c: &Matrix, d: &Matrix, tol: &ToleranceConfig) -> Result<bool> {
    subspace_eq(&kernel_basis(c, tol)?, &kernel_basis(d, tol)?, tol)
}

/// Decides `D⁺ ≤ C⁺` for Hermitian `C ≤ D` from kernels and inertia.
pub fn pinv_monotone(c: &Matrix, d: &Matrix, tol: &ToleranceConfig) -> Result<PinvMonotonicity> {
    require_ordered(c, d, tol)?;
    let ker_equal = kernels_equal(c, d, tol)?;
    let inertia_equal = inertia(c, tol)?.n_neg == inertia(d, tol)?.n_neg;
    let direct = loewner_leq(&pinv(d, tol)?.hermitian_part(), &pinv(c, tol)?.hermitian_part(), tol)?;
    Ok(PinvMonotonicity {
        holds: ker_equal && inertia_equal,
        ker_equal,
        inertia_equal,
        direct,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralPathCheck {
    /// `det((1 - t) C + t D) ≠ 0` for every `t ∈ [0, 1]`.
    pub no_crossing: bool,
    /// Every eigenvalue of `D⁻¹C` has imaginary part within `eq_tol`.
    pub real_spectrum: bool,
    pub eigvals: Vec<Complex64>,
}

/// Eigenvalues of `D⁻¹C`; the path `(1 - t) C + t D` is singular somewhere
/// in `[0, 1]` exactly when one of them lies in `(-∞, 0]`.
pub fn spectral_path_check(c: &Matrix, d: &Matrix, tol: &ToleranceConfig) -> Result<SpectralPathCheck> {
    if c.shape() != d.shape() || !c.is_square() {
        return Err(invalid(format!("need square matrices of equal size, got {:?} and {:?}", c.shape(), d.shape())));
    }
    require_hermitian(c, "C", tol)?;
    require_hermitian(d, "D", tol)?;
    let n = c.nrows();
    if n == 0 {
        return Ok(SpectralPathCheck {
            no_crossing: true,
            real_spectrum: true,
            eigvals: Vec::new(),
        });
    }
    if rank(d, tol)? < n {
        return Err(precondition("D is singular"));
    }
    let ordered = loewner_leq(c, d, tol)?;
    let m = d
        .data()
        .clone()
        .lu()
        .solve(c.data())
        .ok_or_else(|| precondition("D is singular"))?;
    let eigvals = general_eigenvalues(&m)?;
    let real_spectrum = eigvals.iter().all(|z| z.im.abs() <= tol.eq_tol * z.norm().max(1.0));
    // With C ≤ D the spectrum is real and imaginary parts are rounding noise;
    // otherwise only eigenvalues that are numerically real can sit on (-∞, 0].
    let loose = tol.eq_tol.sqrt();
    let on_axis = |z: &Complex64| ordered || z.im.abs() <= loose * z.norm().max(1.0);
    let singular_c = rank(c, tol)? < n;
    let no_crossing = !singular_c && !eigvals.iter().any(|z| on_axis(z) && z.re <= tol.psd_tol);
    Ok(SpectralPathCheck {
        no_crossing,
        real_spectrum,
        eigvals,
    })
}

fn path_point(c: &Matrix, d: &Matrix, t: f64) -> Matrix {
    &c.scale(1.0 - t) + &d.scale(t)
}

fn grid() -> impl Iterator<Item = f64> {
    (0..GRID_POINTS).map(|k| k as f64 / (GRID_POINTS - 1) as f64)
}

fn smallest_singular_value(m: &Matrix) -> f64 {
    singular_values(m)
        .map(|s| s.last().copied().unwrap_or(f64::INFINITY))
        .unwrap_or(f64::NAN)
}

/// `t ∈ [0, 1]` minimizing the smallest singular value of the path: grid
/// search, then golden-section refinement inside the bracketing cells.
fn locate_singular_point(c: &Matrix, d: &Matrix) -> f64 {
    let ts: Vec<f64> = grid().collect();
    let vals: Vec<f64> = ts.iter().map(|&t| smallest_singular_value(&path_point(c, d, t))).collect();
    let k = (0..ts.len())
        .min_by(|&i, &j| vals[i].total_cmp(&vals[j]))
        .expect("grid is non-empty");
    if vals[k] == 0.0 {
        return ts[k];
    }
    let (mut lo, mut hi) = (ts[k.saturating_sub(1)], ts[(k + 1).min(ts.len() - 1)]);
    let f = |t: f64| smallest_singular_value(&path_point(c, d, t));
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > WITNESS_RESOLUTION {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        }
    }
    let mid = 0.5 * (lo + hi);
    // Prefer the grid point when refinement did not improve on it.
    if f(mid) <= vals[k] {
        mid
    } else {
        ts[k]
    }
}

/// First grid `t` whose rank or inertia differs from that of `C`.
///
/// Eigenvalues move continuously along the path, so an eigenvalue that
/// crosses zero strictly between two grid points still shows up as an
/// inertia change at the next point.
fn grid_rank_change(c: &Matrix, d: &Matrix, tol: &ToleranceConfig) -> Result<Option<f64>> {
    let r0 = rank(c, tol)?;
    let i0 = inertia(c, tol)?;
    for t in grid() {
        let p = path_point(c, d, t);
        if rank(&p, tol)? != r0 || inertia(&p, tol)? != i0 {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

/// Witness for a non-constant path whose kernels already differ.
fn kernel_witness(c: &Matrix, d: &Matrix, tol: &ToleranceConfig) -> Result<f64> {
    Ok(grid_rank_change(c, d, tol)?.unwrap_or(1.0))
}

/// Decides whether `rank((1 - t) C + t D)` is constant on `[0, 1]` for
/// Hermitian `C ≤ D`, using the spectral route.
pub fn rank_path_constant(c: &Matrix, d: &Matrix, tol: &ToleranceConfig) -> Result<RankPathReport> {
    rank_path_constant_with(c, d, RankPathMethod::Spectral, tol)
}

pub fn rank_path_constant_with(
    c: &Matrix,
    d: &Matrix,
    method: RankPathMethod,
    tol: &ToleranceConfig,
) -> Result<RankPathReport> {
    require_ordered(c, d, tol)?;
    rank_path_unchecked(c, d, method, tol)
}

/// Same as [`rank_path_constant_with`] without the `C ≤ D` precondition.
fn rank_path_unchecked(
    c: &Matrix,
    d: &Matrix,
    method: RankPathMethod,
    tol: &ToleranceConfig,
) -> Result<RankPathReport> {
    let rank_c = rank(c, tol)?;
    let endpoint_ranks_differ = rank_c != rank(d, tol)?;
    let mut report = RankPathReport {
        constant: false,
        common_rank: None,
        witness_t: None,
        endpoint_ranks_differ,
        method,
        complex_spectrum: false,
    };
    match method {
        RankPathMethod::Sampled => {
            match grid_rank_change(c, d, tol)? {
                Some(t) => report.witness_t = Some(t),
                None => {
                    report.constant = true;
                    report.common_rank = Some(rank_c);
                }
            }
            return Ok(report);
        }
        RankPathMethod::KernelInertia => {
            let constant = kernels_equal(c, d, tol)? && inertia(c, tol)?.n_neg == inertia(d, tol)?.n_neg;
            if constant {
                report.constant = true;
                report.common_rank = Some(rank_c);
            } else {
                report.witness_t = Some(witness(c, d, tol)?);
            }
            return Ok(report);
        }
        RankPathMethod::Spectral => {}
    }
    if !kernels_equal(c, d, tol)? {
        report.witness_t = Some(kernel_witness(c, d, tol)?);
        return Ok(report);
    }
    let (cr, dr) = compress(c, d, tol)?;
    if cr.nrows() == 0 {
        report.constant = true;
        report.common_rank = Some(0);
        return Ok(report);
    }
    match spectral_path_check(&cr, &dr, tol) {
        Ok(s) => {
            report.complex_spectrum = !s.real_spectrum;
            if s.no_crossing {
                report.constant = true;
                report.common_rank = Some(cr.nrows());
            } else {
                report.witness_t = Some(locate_singular_point(&cr, &dr));
            }
        }
        // The compressed D is only singular when the kernels agree to within
        // eq_tol but the ranks do not; treat it as a rank change at t = 1.
        Err(crate::Error::Precondition(_)) => report.witness_t = Some(1.0),
        Err(e) => return Err(e),
    }
    Ok(report)
}

/// Restriction of `C` and `D` to the complement of `ker C`.
fn compress(c: &Matrix, d: &Matrix, tol: &ToleranceConfig) -> Result<(Matrix, Matrix)> {
    let v = range_basis(c, tol)?.as_matrix();
    let vh = v.adjoint();
    let cr = &(&vh * c) * &v;
    let dr = &(&vh * d) * &v;
    Ok((cr.hermitian_part(), dr.hermitian_part()))
}

fn witness(c: &Matrix, d: &Matrix, tol: &ToleranceConfig) -> Result<f64> {
    if !kernels_equal(c, d, tol)? {
        return kernel_witness(c, d, tol);
    }
    let (cr, dr) = compress(c, d, tol)?;
    Ok(locate_singular_point(&cr, &dr))
}

/// Evaluated statements of the monotonicity theorem for a pair `A, B`.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityReport {
    /// `A ≤ B`, both Hermitian.
    pub hypothesis_ok: bool,
    /// `J ppt(A) ≤ J ppt(B)`
    pub stmt_a: bool,
    /// `B22⁺ ≤ A22⁺`
    pub stmt_b: bool,
    /// Constant rank along `(1 - t) A22 + t B22`.
    pub stmt_c: RankPathReport,
    /// `A/A22 ≤ B/B22`
    pub schur_mono: bool,
    /// The three statements agree, and the Schur conclusion holds if they do.
    pub consistent: bool,
}

pub fn theorem1_report(a: &BlockMatrix, b: &BlockMatrix, tol: &ToleranceConfig) -> Result<MonotonicityReport> {
    if !a.same_partition(b) {
        return Err(partition_mismatch(a, b));
    }
    require_hermitian(a.matrix(), "A", tol)?;
    require_hermitian(b.matrix(), "B", tol)?;
    let hypothesis_ok = loewner_leq(a.matrix(), b.matrix(), tol)?;

    let ja = jppt(a, tol)?;
    let jb = jppt(b, tol)?;
    let stmt_a = loewner_leq(&ja.matrix().hermitian_part(), &jb.matrix().hermitian_part(), tol)?;

    let (a22, b22) = (a.a22().hermitian_part(), b.a22().hermitian_part());
    let stmt_b = loewner_leq(&pinv(&b22, tol)?.hermitian_part(), &pinv(&a22, tol)?.hermitian_part(), tol)?;
    let stmt_c = rank_path_unchecked(&a22, &b22, RankPathMethod::Spectral, tol)?;

    let schur_mono = loewner_leq(
        &schur_complement(a, tol)?.hermitian_part(),
        &schur_complement(b, tol)?.hermitian_part(),
        tol,
    )?;
    let agree = stmt_a == stmt_b && stmt_b == stmt_c.constant;
    let consistent = agree && (!stmt_a || schur_mono);
    Ok(MonotonicityReport {
        hypothesis_ok,
        stmt_a,
        stmt_b,
        stmt_c,
        schur_mono,
        consistent,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Corollary33 {
    /// `B22⁺ ≤ A22⁺`
    pub pinv_leq: bool,
    /// `ker(A22⁺ - B22⁺) ⊆ ker(B12 B22⁺ - A12 A22⁺)`
    pub ker_incl: bool,
    /// `0 ≤ B/B22 - A/A22 - X (A22⁺ - B22⁺)⁺ Xᴴ` with `X = B12 B22⁺ - A12 A22⁺`.
    pub residual_psd: bool,
    pub overall: bool,
}

/// The three blocks of `J ppt(B) - J ppt(A)` needed by the Albert conditions.
struct PptDifference {
    d11: Matrix,
    d12: Matrix,
    d21: Matrix,
    d22: Matrix,
}

fn ppt_difference(a: &BlockMatrix, b: &BlockMatrix, tol: &ToleranceConfig) -> Result<PptDifference> {
    let a22p = pinv(&a.a22(), tol)?;
    let b22p = pinv(&b.a22(), tol)?;
    Ok(PptDifference {
        d11: &schur_complement(b, tol)? - &schur_complement(a, tol)?,
        d12: &(&b.a12() * &b22p) - &(&a.a12() * &a22p),
        d21: &(&b22p * &b.a21()) - &(&a22p * &a.a21()),
        d22: &a22p - &b22p,
    })
}

/// Albert conditions applied to `J ppt(B) - J ppt(A)`, written in terms of
/// the blocks of `A` and `B`.
pub fn corollary33_conditions(a: &BlockMatrix, b: &BlockMatrix, tol: &ToleranceConfig) -> Result<Corollary33> {
    if !a.same_partition(b) {
        return Err(partition_mismatch(a, b));
    }
    require_hermitian(a.matrix(), "A", tol)?;
    require_hermitian(b.matrix(), "B", tol)?;
    let diff = ppt_difference(a, b, tol)?;
    let d22 = diff.d22.hermitian_part();
    let pinv_leq = is_psd(&d22, tol)?;
    let ker_incl = kernel_included(&d22, &diff.d12, tol)?;
    let residual = &diff.d11 - &(&(&diff.d12 * &pinv(&d22, tol)?) * &diff.d21);
    let residual_psd = is_psd(&residual.hermitian_part(), tol)?;
    Ok(Corollary33 {
        pinv_leq,
        ker_incl,
        residual_psd,
        overall: pinv_leq && ker_incl && residual_psd,
    })
}

#[derive(Debug, Clone)]
pub struct Prop35Identity {
    /// `(B - A)/(B - A)22`
    pub lhs: Matrix,
    /// `B/B22 - A/A22 - (B12 B22⁺ - A12 A22⁺)(A22⁺ - B22⁺)⁺(B22⁺ B21 - A22⁺ A21)`
    pub rhs: Matrix,
    /// Same with the correction written through `A22 + A22 (B22 - A22)⁺ A22`.
    pub rhs_alt: Matrix,
    pub residual: f64,
    pub alt_residual: f64,
    /// `ker(A22⁺ - B22⁺) ⊆ ker(B12 B22⁺ - A12 A22⁺)` and
    /// `ran(B22⁺ B21 - A22⁺ A21) ⊆ ran(A22⁺ - B22⁺)`.
    pub inclusions_ok: bool,
}

/// Schur complement of a difference versus the difference of Schur
/// complements, for pairs with matching kernels and ranges of the (2,2)
/// blocks and an admissible difference `B - A`.
pub fn prop35_identity(a: &BlockMatrix, b: &BlockMatrix, tol: &ToleranceConfig) -> Result<Prop35Identity> {
    if !a.same_partition(b) {
        return Err(partition_mismatch(a, b));
    }
    let (a22, b22) = (a.a22(), b.a22());
    if !kernels_equal(&a22, &b22, tol)? {
        return Err(precondition("ker A22 ≠ ker B22"));
    }
    if !subspace_eq(&range_basis(&a22, tol)?, &range_basis(&b22, tol)?, tol)? {
        return Err(precondition("ran A22 ≠ ran B22"));
    }
    let delta = b.sub(a)?;
    if !kernel_included(&delta.a22(), &delta.a12(), tol)? {
        return Err(precondition("ker(B22 - A22) ⊄ ker(B12 - A12)"));
    }
    if !range_included(&delta.a21(), &delta.a22(), tol)? {
        return Err(precondition("ran(B21 - A21) ⊄ ran(B22 - A22)"));
    }

    let diff = ppt_difference(a, b, tol)?;
    let d22_pinv = pinv(&diff.d22, tol)?;

    let lhs = schur_complement(&delta, tol)?;
    let rhs = &diff.d11 - &(&(&diff.d12 * &d22_pinv) * &diff.d21);
    // (A12 A22⁺ - B12 B22⁺) = -d12 and (A22⁺ A21 - B22⁺ B21) = -d21; the signs cancel.
    let middle = &a22 + &(&(&a22 * &pinv(&delta.a22(), tol)?) * &a22);
    let rhs_alt = &diff.d11 - &(&(&diff.d12 * &middle) * &diff.d21);

    let inclusions_ok = kernel_included(&diff.d22, &diff.d12, tol)? && range_included(&diff.d21, &diff.d22, tol)?;
    Ok(Prop35Identity {
        residual: crate::linalg::max_diff(&lhs, &rhs),
        alt_residual: crate::linalg::max_diff(&lhs, &rhs_alt),
        lhs,
        rhs,
        rhs_alt,
        inclusions_ok,
    })
}

/// Orthonormal basis of `ker A22`, exposed for reports.
pub fn kernel_of_a22(a: &BlockMatrix, tol: &ToleranceConfig) -> Result<SubspaceBasis> {
    kernel_basis(&a.a22(), tol)
}
