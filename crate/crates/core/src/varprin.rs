//! Variational characterizations of `A/A22` and `J ppt(A)` and the closed-form
//! solution of the saddle-point problem
//!
//! ```text
//! A11 x1 + A12 x2 = y1
//! A21 x1 + A22 x2 = y2      (x1, y2 given; y1, x2 sought)
//! ```
//!
//! Under `0 ≤ A22` and `ker A22 ⊆ ker A12`:
//!
//! * `min over x2 of (z, A z)` with `z = [x1; x2]` equals `(x1, (A/A22) x1)`;
//! * `min over x2 of ½(z, A z) - Re(y2, A22 A22⁺ x2)` equals `½(w, J ppt(A) w)`
//!   with `w = [x1; y2]`;
//!
//! and in both cases the minimizers form an affine translate of `ker A22`.
//! The saddle solver needs only the two block inclusions, not definiteness.

use crate::block::{certificate_threshold, inclusion_residuals, jppt, schur_complement, BlockMatrix};
use crate::error::{invalid, precondition, Error, Inclusion, Result};
use crate::gen::Rng;
use crate::linalg::{
    is_psd, kernel_basis, pinv, require_hermitian, stack, Complex64, Field, Matrix, SubspaceBasis,
    ToleranceConfig, Vector,
};

/// `particular + span(kernel)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineSet {
    pub particular: Vector,
    pub kernel: SubspaceBasis,
}

impl AffineSet {
    /// `‖(I - P_kernel)(v - particular)‖ ≤ eq_tol`.
    pub fn contains(&self, v: &Vector, tol: &ToleranceConfig) -> bool {
        v.len() == self.particular.len() && self.kernel.residual(&(v - &self.particular)) <= tol.eq_tol
    }

    /// `particular + K c` where `K` is the orthonormal kernel basis.
    pub fn point(&self, coeffs: &Vector) -> Vector {
        &self.particular + self.kernel.vectors() * coeffs
    }

    pub fn dim(&self) -> usize {
        self.kernel.dim()
    }

    /// Same point set, compared through membership of each other's
    /// particular point and equality of the directions.
    pub fn same_as(&self, other: &AffineSet, tol: &ToleranceConfig) -> Result<bool> {
        Ok(crate::linalg::subspace_eq(&self.kernel, &other.kernel, tol)?
            && self.contains(&other.particular, tol)
            && other.contains(&self.particular, tol))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub value: f64,
    pub minimizers: AffineSet,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SaddleSolution {
    pub y1: Vector,
    pub x2_set: AffineSet,
    pub particular_x2: Vector,
    /// `‖A [x1; x2⁰] - [y1; y2]‖_max`
    pub residual: f64,
    /// `‖J ppt(A) [x1; y2] - [y1; -x2⁰]‖_max`
    pub jppt_residual: f64,
}

fn check_len(v: &Vector, n: usize, what: &str) -> Result<()> {
    if v.len() == n {
        Ok(())
    } else {
        Err(invalid(format!("{what} has length {}, expected {n}", v.len())))
    }
}

/// `0 ≤ A22`, `ker A22 ⊆ ker A12` (by residual certificate) and `A` Hermitian.
fn require_minimization_hypotheses(a: &BlockMatrix, tol: &ToleranceConfig) -> Result<()> {
    require_hermitian(a.matrix(), "A", tol)?;
    if !is_psd(&a.a22(), tol)? {
        return Err(precondition("A22 is not positive semidefinite"));
    }
    let [ker, _] = inclusion_residuals(a, tol)?;
    if ker > certificate_threshold(a.matrix(), tol) {
        return Err(precondition(format!("ker A22 ⊄ ker A12 (residual {ker:e})")));
    }
    Ok(())
}

/// `Re(zᴴ M z)` after checking the discarded imaginary part is negligible.
fn real_form(m: &Matrix, z: &Vector, tol: &ToleranceConfig) -> Result<f64> {
    let q: Complex64 = z.dotc(&m.mul_vec(z));
    let scale = 1.0 + m.max_abs() * z.norm_squared();
    if q.im.abs() > tol.eq_tol * scale {
        return Err(precondition(format!("quadratic form has imaginary part {:e}", q.im)));
    }
    Ok(q.re)
}

/// `(z, A z)` for `z = [x1; x2]`: the function minimized over `x2`.
pub fn quadratic_form(a: &BlockMatrix, x1: &Vector, x2: &Vector, tol: &ToleranceConfig) -> Result<f64> {
    check_len(x1, a.n1(), "x1")?;
    check_len(x2, a.n2(), "x2")?;
    real_form(a.matrix(), &stack(x1, x2), tol)
}

/// Minimum of [`quadratic_form`] over `x2` together with the minimizers.
pub fn schur_min(a: &BlockMatrix, x1: &Vector, tol: &ToleranceConfig) -> Result<Minimum> {
    check_len(x1, a.n1(), "x1")?;
    require_minimization_hypotheses(a, tol)?;
    let value = real_form(&schur_complement(a, tol)?, x1, tol)?;
    let particular = -(pinv(&a.a22(), tol)?.mul_vec(&a.a21().mul_vec(x1)));
    Ok(Minimum {
        value,
        minimizers: AffineSet {
            particular,
            kernel: kernel_basis(&a.a22(), tol)?,
        },
    })
}

/// `½ (z, A z) - Re(y2, A22 A22⁺ x2)` with `z = [x1; x2]`.
pub fn objective(a: &BlockMatrix, x1: &Vector, x2: &Vector, y2: &Vector, tol: &ToleranceConfig) -> Result<f64> {
    check_len(y2, a.n2(), "y2")?;
    let quad = quadratic_form(a, x1, x2, tol)?;
    let a22 = a.a22();
    let proj = &a22 * &pinv(&a22, tol)?;
    Ok(0.5 * quad - y2.dotc(&proj.mul_vec(x2)).re)
}

/// Minimum of [`objective`] over `x2`.
pub fn ppt_min(a: &BlockMatrix, x1: &Vector, y2: &Vector, tol: &ToleranceConfig) -> Result<Minimum> {
    check_len(x1, a.n1(), "x1")?;
    check_len(y2, a.n2(), "y2")?;
    require_minimization_hypotheses(a, tol)?;
    let w = stack(x1, y2);
    let value = 0.5 * real_form(jppt(a, tol)?.matrix(), &w, tol)?;
    let a22p = pinv(&a.a22(), tol)?;
    let particular = &a22p.mul_vec(y2) - &a22p.mul_vec(&a.a21().mul_vec(x1));
    Ok(Minimum {
        value,
        minimizers: AffineSet {
            particular,
            kernel: kernel_basis(&a.a22(), tol)?,
        },
    })
}

fn inf_norm(v: &Vector) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// All `(y1, x2)` solving the saddle-point system for given `x1`, `y2`.
///
/// Requires `ran A21 ⊆ ran A22` and `ker A22 ⊆ ker A12`, certified by the
/// residuals of [`inclusion_residuals`]. When `y2 - A21 x1` has a component
/// outside `ran A22` no `x2` exists and [`Error::NoSolution`] carries that
/// component's size.
pub fn solve_saddle(a: &BlockMatrix, x1: &Vector, y2: &Vector, tol: &ToleranceConfig) -> Result<SaddleSolution> {
    check_len(x1, a.n1(), "x1")?;
    check_len(y2, a.n2(), "y2")?;
    if !a.matrix().is_finite() || x1.iter().chain(y2.iter()).any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(invalid("non-finite input"));
    }
    let residuals = inclusion_residuals(a, tol)?;
    let limit = certificate_threshold(a.matrix(), tol);
    let failed: Vec<Inclusion> = [Inclusion::KernelIntoA12, Inclusion::RangeOfA21]
        .into_iter()
        .zip(residuals)
        .filter(|&(_, r)| r > limit)
        .map(|(inc, _)| inc)
        .collect();
    if !failed.is_empty() {
        return Err(Error::InclusionFailure { failed, residuals });
    }

    let (a12, a21, a22) = (a.a12(), a.a21(), a.a22());
    let a22p = pinv(&a22, tol)?;
    let rhs = y2 - a21.mul_vec(x1);
    let off_range = &rhs - a22.mul_vec(&a22p.mul_vec(&rhs));
    let scale = 1.0 + a.matrix().max_abs();
    let data_scale = 1.0f64.max(inf_norm(x1)).max(inf_norm(y2));
    let miss = inf_norm(&off_range);
    if miss > tol.eq_tol * scale * data_scale {
        return Err(Error::NoSolution { residual: miss });
    }

    let x2 = a22p.mul_vec(&rhs);
    let y1 = &a.a11().mul_vec(x1) + &a12.mul_vec(&x2);
    let lhs = a.matrix().mul_vec(&stack(x1, &x2));
    let residual = inf_norm(&(&lhs - &stack(&y1, y2)));
    let packed = jppt(a, tol)?.matrix().mul_vec(&stack(x1, y2));
    let jppt_residual = inf_norm(&(&packed - &stack(&y1, &(-&x2))));

    Ok(SaddleSolution {
        y1,
        x2_set: AffineSet {
            particular: x2.clone(),
            kernel: kernel_basis(&a22, tol)?,
        },
        particular_x2: x2,
        residual,
        jppt_residual,
    })
}

/// Recovers the self-adjoint `M` with `q(z) = ½ (z, M z)` from values of `q`
/// at `e_j`, `e_j + e_k` and (complex field) `e_j + i e_k`.
pub fn polarize(n: usize, field: Field, mut q: impl FnMut(&Vector) -> Result<f64>) -> Result<Matrix> {
    let unit = |j: usize, s: Complex64| {
        let mut v = Vector::zeros(n);
        v[j] = s;
        v
    };
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let diag: Vec<f64> = (0..n).map(|j| q(&unit(j, one))).collect::<Result<_>>()?;
    let mut m = nalgebra::DMatrix::<Complex64>::zeros(n, n);
    for j in 0..n {
        m[(j, j)] = Complex64::new(2.0 * diag[j], 0.0);
        for k in j + 1..n {
            let re = q(&(unit(j, one) + unit(k, one)))? - diag[j] - diag[k];
            let im = match field {
                Field::Real => 0.0,
                Field::Complex => diag[j] + diag[k] - q(&(unit(j, one) + unit(k, i)))?,
            };
            m[(j, k)] = Complex64::new(re, im);
            m[(k, j)] = Complex64::new(re, -im);
        }
    }
    Ok(Matrix::from_dmatrix(m))
}

/// `J ppt(A)` rebuilt from [`ppt_min`] values alone.
pub fn reconstruct_jppt(a: &BlockMatrix, tol: &ToleranceConfig) -> Result<Matrix> {
    let n1 = a.n1();
    polarize(a.dim(), a.matrix().field(), |w| {
        let x1 = w.rows(0, n1).into_owned();
        let y2 = w.rows(n1, a.n2()).into_owned();
        Ok(ppt_min(a, &x1, &y2, tol)?.value)
    })
}

/// Outcome of sampling a minimization problem around its claimed minimizers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeReport {
    /// Largest amount by which a perturbed point beat the claimed minimum;
    /// non-positive when no sample did better.
    pub worst_improvement: f64,
    /// Largest deviation of the objective from the minimum over sampled
    /// members of the minimizer set.
    pub flatness: f64,
}

/// Number of off-set perturbations per probe.
pub const PROBE_PERTURBATIONS: usize = 100;
/// Number of sampled members of the minimizer set per probe.
pub const PROBE_MEMBERS: usize = 20;
const PERTURBATION_SIZES: [f64; 3] = [1e-3, 1e-1, 1.0];

fn probe(
    min: &Minimum,
    field: Field,
    seed: u64,
    mut f: impl FnMut(&Vector) -> Result<f64>,
) -> Result<ProbeReport> {
    let mut rng = Rng::new(seed);
    let set = &min.minimizers;
    let n2 = set.particular.len();
    let mut worst = f64::NEG_INFINITY;
    let mut flat: f64 = 0.0;
    if n2 > set.dim() {
        let off = &Matrix::identity(n2) - &set.kernel.projector();
        for s in 0..PROBE_PERTURBATIONS {
            let mut d = off.mul_vec(&rng.vector(n2, field, 1.0));
            let norm = d.norm();
            if norm == 0.0 {
                continue;
            }
            d *= Complex64::new(PERTURBATION_SIZES[s % PERTURBATION_SIZES.len()] / norm, 0.0);
            worst = worst.max(min.value - f(&(&set.particular + d))?);
        }
    }
    for _ in 0..PROBE_MEMBERS {
        let c = rng.vector(set.dim(), field, 1.0);
        flat = flat.max((f(&set.point(&c))? - min.value).abs());
    }
    Ok(ProbeReport {
        worst_improvement: worst,
        flatness: flat,
    })
}

/// Samples [`quadratic_form`] around the result of [`schur_min`].
pub fn probe_schur_min(a: &BlockMatrix, x1: &Vector, seed: u64, tol: &ToleranceConfig) -> Result<ProbeReport> {
    let min = schur_min(a, x1, tol)?;
    probe(&min, a.matrix().field(), seed, |x2| quadratic_form(a, x1, x2, tol))
}

/// Samples [`objective`] around the result of [`ppt_min`].
pub fn probe_ppt_min(
    a: &BlockMatrix,
    x1: &Vector,
    y2: &Vector,
    seed: u64,
    tol: &ToleranceConfig,
) -> Result<ProbeReport> {
    let min = ppt_min(a, x1, y2, tol)?;
    let a22 = a.a22();
    let proj = &a22 * &pinv(&a22, tol)?;
    let z_len = a.dim();
    probe(&min, a.matrix().field(), seed, |x2| {
        let z = stack(x1, x2);
        debug_assert_eq!(z.len(), z_len);
        Ok(0.5 * real_form(a.matrix(), &z, tol)? - y2.dotc(&proj.mul_vec(x2)).re)
    })
}
