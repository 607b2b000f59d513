//! Seeded generators for the hypothesis classes the checks need.
//!
//! # Reproducibility contract
//!
//! The generator is xoshiro256++ seeded through SplitMix64 from the 64-bit
//! seed (the `seed_from_u64` convention). A real draw takes one 64-bit output
//! `w` and maps it to `x = magnitude * (2u - 1)` with `u = (w >> 11) * 2⁻⁵³`.
//! Matrices are filled row by row; a complex entry draws its real part and
//! then its imaginary part, while a real entry makes a single draw. Each
//! generator documents the order in which it consumes the stream, so another
//! implementation following the same recipe reproduces the fixtures bit for
//! bit (up to the floating-point behaviour of the QR factorization used for
//! random unitaries).

use nalgebra::DMatrix;
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::{SplitMix64, Xoshiro256PlusPlus};

use crate::block::BlockMatrix;
use crate::error::{invalid, Result};
use crate::linalg::{Complex64, Field, Matrix, SubspaceBasis, Vector};

/// Shape, field, seed and entry scale of a generated instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenSpec {
    pub n1: usize,
    pub n2: usize,
    pub field: Field,
    pub seed: u64,
    /// Entries are drawn uniformly from `[-magnitude, magnitude]`.
    pub magnitude: f64,
}

impl GenSpec {
    pub fn new(n1: usize, n2: usize, field: Field, seed: u64) -> Self {
        Self {
            n1,
            n2,
            field,
            seed,
            magnitude: 1.0,
        }
    }

    pub fn dim(&self) -> usize {
        self.n1 + self.n2
    }

    pub fn with_magnitude(mut self, magnitude: f64) -> Self {
        self.magnitude = magnitude;
        self
    }

    fn rng(&self) -> Rng {
        Rng::new(self.seed)
    }
}

/// Seed for trial `trial` of a batch driven by `master`.
///
/// Deterministic and independent of how trials are scheduled.
pub fn trial_seed(master: u64, trial: u64) -> u64 {
    let mut sm = SplitMix64::seed_from_u64(master ^ trial.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    sm.next_u64()
}

/// Thin wrapper over xoshiro256++ implementing the draw conventions above.
#[derive(Debug, Clone)]
pub struct Rng(Xoshiro256PlusPlus);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Self(Xoshiro256PlusPlus::seed_from_u64(seed))
    }

    /// Uniform on `[0, 1)` with 53 random bits.
    pub fn unit(&mut self) -> f64 {
        (self.0.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform on `[-mag, mag)`.
    pub fn entry(&mut self, mag: f64) -> f64 {
        mag * (2.0 * self.unit() - 1.0)
    }

    /// Uniform integer in `lo..=hi`.
    pub fn int(&mut self, lo: usize, hi: usize) -> usize {
        debug_assert!(lo <= hi);
        lo + ((self.unit() * (hi - lo + 1) as f64) as usize).min(hi - lo)
    }

    pub fn coin(&mut self) -> bool {
        self.0.next_u64() >> 63 == 1
    }

    pub fn scalar(&mut self, field: Field, mag: f64) -> Complex64 {
        let re = self.entry(mag);
        let im = match field {
            Field::Real => 0.0,
            Field::Complex => self.entry(mag),
        };
        Complex64::new(re, im)
    }

    pub fn matrix(&mut self, rows: usize, cols: usize, field: Field, mag: f64) -> Matrix {
        let entries: Vec<Complex64> = (0..rows * cols).map(|_| self.scalar(field, mag)).collect();
        let data = DMatrix::from_row_slice(rows, cols, &entries);
        Matrix::wrap(field, data)
    }

    pub fn vector(&mut self, len: usize, field: Field, mag: f64) -> Vector {
        Vector::from_iterator(len, (0..len).map(|_| self.scalar(field, mag)))
    }

    /// Hermitian `(M + Mᴴ)/2`, exactly self-adjoint in floating point.
    pub fn hermitian(&mut self, n: usize, field: Field, mag: f64) -> Matrix {
        symmetrize(&self.matrix(n, n, field, mag))
    }

    /// `n x k` matrix with orthonormal columns from the QR factorization of
    /// a random `n x k` matrix; requires `k <= n`.
    pub fn orthonormal(&mut self, n: usize, k: usize, field: Field) -> Matrix {
        debug_assert!(k <= n);
        if k == 0 {
            return Matrix::wrap(field, DMatrix::zeros(n, 0));
        }
        let g = self.matrix(n, k, field, 1.0);
        let q = g.into_inner().qr().q();
        Matrix::wrap(field, q)
    }

    /// Draw in `[lo, hi]` with a uniformly distributed logarithm.
    pub fn log_uniform(&mut self, lo: f64, hi: f64) -> f64 {
        (lo.ln() + self.unit() * (hi.ln() - lo.ln())).exp()
    }
}

fn symmetrize(m: &Matrix) -> Matrix {
    (m + &m.adjoint()).scale(0.5)
}

/// `V diag(d) Vᴴ`, symmetrized so the result is exactly Hermitian.
fn spectral(v: &Matrix, d: &[f64]) -> Matrix {
    let scaled = v * &Matrix::from_diagonal(d);
    symmetrize(&(&scaled * &v.adjoint()))
}

/// Orthonormal basis of a random `k`-dimensional subspace of the orthogonal
/// complement of `kernel` (columns of the returned `n x k` matrix).
fn complement_frame(rng: &mut Rng, kernel: &Matrix, k: usize, field: Field) -> Matrix {
    let n = kernel.nrows();
    if k == 0 {
        return Matrix::wrap(field, DMatrix::zeros(n, 0));
    }
    let g = rng.matrix(n, k, field, 1.0);
    let proj = &Matrix::identity(n) - &(kernel * &kernel.adjoint());
    let g = &proj * &g;
    Matrix::wrap(field, g.into_inner().qr().q())
}

/// Random Hermitian block matrix.
///
/// Draws: one `n x n` matrix.
pub fn rand_hermitian(spec: &GenSpec) -> BlockMatrix {
    let mut rng = spec.rng();
    block(spec, rng.hermitian(spec.dim(), spec.field, spec.magnitude))
}

fn block(spec: &GenSpec, m: Matrix) -> BlockMatrix {
    BlockMatrix::new(spec.n1, spec.n2, m).expect("generated matrix matches its partition")
}

/// PSD matrix with the prescribed kernel.
///
/// The eigenvalues on the complement are drawn from `[magnitude/100, magnitude]`.
/// The dimension is `kernel.ambient_dim()`; the spec's shape is ignored.
/// Draws: an `n x r` matrix for the eigenbasis, then `r` eigenvalues.
pub fn rand_psd_with_kernel(spec: &GenSpec, kernel: &SubspaceBasis) -> Matrix {
    let mut rng = spec.rng();
    psd_with_kernel(&mut rng, kernel, spec.field, spec.magnitude)
}

fn psd_with_kernel(rng: &mut Rng, kernel: &SubspaceBasis, field: Field, mag: f64) -> Matrix {
    let n = kernel.ambient_dim();
    let r = n.saturating_sub(kernel.dim());
    if r == 0 {
        return Matrix::wrap(field, DMatrix::zeros(n, n));
    }
    let k = Matrix::wrap(field, kernel.vectors().clone());
    let q = complement_frame(rng, &k, r, field);
    let d: Vec<f64> = (0..r).map(|_| mag * (0.01 + 0.99 * rng.unit())).collect();
    spectral(&q, &d)
}

/// Random `dim`-dimensional subspace of `𝔽^n`.
pub fn rand_subspace(rng: &mut Rng, n: usize, dim: usize, field: Field) -> SubspaceBasis {
    let q = rng.orthonormal(n, dim, field);
    SubspaceBasis::from_orthonormal(n, q.into_inner()).expect("QR factor has orthonormal columns")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairMode {
    /// `B - A = PᴴP` with an unconstrained square `P`.
    Generic,
    /// `B22` keeps the kernel and inertia of `A22`, so the rank path of the
    /// (2,2) blocks is constant.
    ConstantRank,
    /// The rank path of the (2,2) blocks is forced to change, either by an
    /// eigenvalue of `A22` crossing zero or by `ker B22` shrinking.
    KernelBreak,
}

/// Hermitian `A ≤ B` with `B - A = PᴴP` exactly.
///
/// `KernelBreak` needs `n2 ≥ 1`; every other combination succeeds.
pub fn rand_ordered_pair(spec: &GenSpec, mode: PairMode) -> Result<(BlockMatrix, BlockMatrix)> {
    let mut rng = spec.rng();
    let (n1, n2, f, mag) = (spec.n1, spec.n2, spec.field, spec.magnitude);
    let n = n1 + n2;
    let (a, p) = match mode {
        PairMode::Generic => {
            let a = rng.hermitian(n, f, mag);
            let p = rng.matrix(n, n, f, mag);
            (a, p)
        }
        PairMode::ConstantRank => constant_rank_parts(&mut rng, spec),
        PairMode::KernelBreak => {
            if n2 == 0 {
                return Err(invalid("kernel_break pairs need n2 ≥ 1"));
            }
            if rng.coin() {
                inertia_flip_parts(&mut rng, spec)
            } else {
                kernel_shrink_parts(&mut rng, spec)
            }
        }
    };
    let b = &a + &(&p.adjoint() * &p);
    Ok((block(spec, a), block(spec, symmetrize(&b))))
}

/// Hermitian pair satisfying the hypotheses of the difference-of-Schur
/// complements identity: matching kernels and ranges of the (2,2) blocks and
/// a difference whose (2,2) block dominates its off-diagonal blocks.
pub fn rand_pair_constant_rank(spec: &GenSpec) -> (BlockMatrix, BlockMatrix) {
    rand_ordered_pair(spec, PairMode::ConstantRank).expect("constant-rank pairs exist for every shape")
}

/// Random Hermitian `n1 x n1`, `n1 x n2` coupling, and `A22 = V Λ Vᴴ`.
fn assemble(rng: &mut Rng, spec: &GenSpec, a22: &Matrix) -> Matrix {
    let (n1, n2, f, mag) = (spec.n1, spec.n2, spec.field, spec.magnitude);
    let a11 = rng.hermitian(n1, f, mag);
    let a12 = rng.matrix(n1, n2, f, mag);
    Matrix::from_blocks(&a11, &a12, &a12.adjoint(), a22).expect("block shapes agree")
}

/// Nonzero eigenvalues with random signs, magnitudes in `[mag/10, mag]`.
fn signed_spectrum(rng: &mut Rng, r: usize, mag: f64) -> Vec<f64> {
    (0..r)
        .map(|_| {
            let s = if rng.coin() { 1.0 } else { -1.0 };
            s * mag * (0.1 + 0.9 * rng.unit())
        })
        .collect()
}

// Draws: rank r, eigenbasis, spectrum, A11, A12, row count k, G (k x r),
// P1 (k x n1).
fn constant_rank_parts(rng: &mut Rng, spec: &GenSpec) -> (Matrix, Matrix) {
    let (n1, n2, f, mag) = (spec.n1, spec.n2, spec.field, spec.magnitude);
    let r = rng.int(0, n2);
    let v = rng.orthonormal(n2, r, f);
    let lam = signed_spectrum(rng, r, mag);
    let a = assemble(rng, spec, &spectral(&v, &lam));

    let k = rng.int(1, n1 + n2);
    let g = rng.matrix(k, r, f, mag);
    let p1 = rng.matrix(k, n1, f, mag);
    // B22 - A22 = ε V GᴴG Vᴴ. Keeping ε‖GᴴG‖ at a quarter of the smallest
    // |λ| preserves every eigenvalue sign.
    let gap = lam.iter().map(|x| x.abs()).fold(f64::INFINITY, f64::min);
    let gg = crate::linalg::singular_values(&g).ok().and_then(|s| s.first().copied()).unwrap_or(0.0);
    let eps = if r == 0 || gg == 0.0 { 0.0 } else { 0.25 * gap / (gg * gg) };
    let p2 = (&g * &v.adjoint()).scale(eps.sqrt());
    let p = Matrix::from_blocks(&p1, &p2, &Matrix::zeros(0, n1), &Matrix::zeros(0, n2)).expect("block shapes agree");
    (a, p)
}

// A22 has an eigenvalue -λ along a unit vector u; P adds 2λ uuᴴ to the
// (2,2) block so that eigenvalue ends at +λ and passes through zero at t = 1/2.
// Draws: rank r ≥ 1, eigenbasis, spectrum, A11, A12, P1 (1 x n1).
fn inertia_flip_parts(rng: &mut Rng, spec: &GenSpec) -> (Matrix, Matrix) {
    let (n1, n2, f, mag) = (spec.n1, spec.n2, spec.field, spec.magnitude);
    let r = rng.int(1, n2);
    let v = rng.orthonormal(n2, r, f);
    let mut lam = signed_spectrum(rng, r, mag);
    lam[0] = -lam[0].abs();
    let a = assemble(rng, spec, &spectral(&v, &lam));
    let u = v.submatrix(0, 0, n2, 1);
    let c = (2.0 * lam[0].abs()).sqrt();
    let p1 = rng.matrix(1, n1, f, mag);
    let p2 = u.adjoint().scale(c);
    let p = Matrix::from_blocks(&p1, &p2, &Matrix::zeros(0, n1), &Matrix::zeros(0, n2)).expect("block shapes agree");
    (a, p)
}

// A22 has a nontrivial kernel and P2 is a full random k x n2 block, so
// ker B22 is strictly smaller than ker A22.
// Draws: rank r < n2, eigenbasis, spectrum, A11, A12, row count k, P (k x n).
fn kernel_shrink_parts(rng: &mut Rng, spec: &GenSpec) -> (Matrix, Matrix) {
    let (n1, n2, f, mag) = (spec.n1, spec.n2, spec.field, spec.magnitude);
    let r = rng.int(0, n2 - 1);
    let v = rng.orthonormal(n2, r, f);
    let lam = signed_spectrum(rng, r, mag);
    let a = assemble(rng, spec, &spectral(&v, &lam));
    let k = rng.int(1, n1 + n2);
    let p = rng.matrix(k, n1 + n2, f, mag);
    (a, p)
}

/// Complex `A = H + i PᴴP` with `Im(A) = PᴴP ≥ 0`.
///
/// With even odds `A22` is made singular: a random subspace `K` of dimension
/// `1..n2` lies in the kernels of both `H22` and `P2`. On the complement of
/// `K`, `Im(A22)` has eigenvalues in `[mag/10, mag]`, which keeps `A22`
/// well conditioned there whatever `H22` is.
/// Draws: singular flag, kernel dimension and basis, complement frame, H,
/// P1, frame of P2, spectrum of `Im(A22)`.
pub fn rand_im_psd(spec: &GenSpec) -> Result<BlockMatrix> {
    if spec.field != Field::Complex {
        return Err(invalid("Im-PSD matrices are generated over the complex field only"));
    }
    let mut rng = spec.rng();
    let (n1, n2, mag) = (spec.n1, spec.n2, spec.magnitude);
    let n = n1 + n2;
    let f = Field::Complex;
    let kdim = if n2 > 0 && rng.coin() { rng.int(1, n2) } else { 0 };
    let k = rng.orthonormal(n2, kdim, f);
    let r = n2 - kdim;
    let c = complement_frame(&mut rng, &k, r, f);
    let h = rng.hermitian(n, f, mag);
    // Only the (2,2) block of H is confined to span(C); the coupling blocks
    // stay generic. Compressing through C rather than projecting with
    // I - KKᴴ makes the block exactly zero when K is everything.
    let h = BlockMatrix::new(n1, n2, h).expect("partition");
    let inner = &(&c.adjoint() * &h.a22()) * &c;
    let h22 = symmetrize(&(&(&c * &inner) * &c.adjoint()));
    let h = Matrix::from_blocks(&h.a11(), &h.a12(), &h.a21(), &h22).expect("block shapes agree");

    // P = [P1, Q diag(√d) Cᴴ], so Im(A22) = C diag(d) Cᴴ.
    let p1 = rng.matrix(n, n1, f, mag.sqrt());
    let q = rng.orthonormal(n, r, f);
    let d: Vec<f64> = (0..r).map(|_| (mag * (0.1 + 0.9 * rng.unit())).sqrt()).collect();
    let p2 = &(&q * &Matrix::from_diagonal(&d)) * &c.adjoint();
    let p = Matrix::from_blocks(&p1, &p2, &Matrix::zeros(0, n1), &Matrix::zeros(0, n2)).expect("block shapes agree");
    let im = symmetrize(&(&p.adjoint() * &p));
    let a = &h + &im.scale_complex(Complex64::new(0.0, 1.0));
    Ok(block(spec, a))
}

/// Instance with `ran A21 ⊆ ran A22` and `ker A22 ⊆ ker A12` forced:
/// `A22` PSD with a random kernel of dimension `1..=n2`, `A21 = A22 R`,
/// `A12 = L A22` and `A11` Hermitian.
///
/// Draws: kernel dimension and basis, A22 eigenbasis and spectrum, R, L, A11.
pub fn rand_saddle_instance(spec: &GenSpec) -> BlockMatrix {
    saddle(spec, false)
}

/// As [`rand_saddle_instance`] with `L = Rᴴ`, so the instance is Hermitian
/// with `0 ≤ A22`. Draws: as above without `L`.
pub fn rand_saddle_instance_hermitian(spec: &GenSpec) -> BlockMatrix {
    saddle(spec, true)
}

fn saddle(spec: &GenSpec, hermitian: bool) -> BlockMatrix {
    let mut rng = spec.rng();
    let (n1, n2, f, mag) = (spec.n1, spec.n2, spec.field, spec.magnitude);
    let kdim = if n2 > 0 { rng.int(1, n2) } else { 0 };
    let kernel = rand_subspace(&mut rng, n2, kdim, f);
    let a22 = psd_with_kernel(&mut rng, &kernel, f, mag);
    let r = rng.matrix(n2, n1, f, mag);
    let l = if hermitian { r.adjoint() } else { rng.matrix(n1, n2, f, mag) };
    let a11 = rng.hermitian(n1, f, mag);
    let a21 = &a22 * &r;
    let a12 = &l * &a22;
    block(spec, Matrix::from_blocks(&a11, &a12, &a21, &a22).expect("block shapes agree"))
}

/// PSD `A = [Y I]ᴴ A22 [Y I] + diag(S, 0)` with `A22 ≥ 0` having the given
/// kernel, `S ≥ 0` of random rank.
fn psd_block_with_kernel(rng: &mut Rng, spec: &GenSpec, kernel: &SubspaceBasis) -> BlockMatrix {
    let (n1, n2, f, mag) = (spec.n1, spec.n2, spec.field, spec.magnitude);
    let a22 = psd_with_kernel(rng, kernel, f, mag);
    let y = rng.matrix(n2, n1, f, mag);
    let srank = rng.int(0, n1);
    let s = rng.matrix(srank, n1, f, mag);
    let a21 = &a22 * &y;
    let a11 = symmetrize(&(&(&y.adjoint() * &a21) + &(&s.adjoint() * &s)));
    block(spec, Matrix::from_blocks(&a11, &a21.adjoint(), &a21, &a22).expect("block shapes agree"))
}

/// PSD block matrices `A, B` with `ker A22 = ker B22`.
///
/// Draws: kernel dimension `0..=n2` and basis, then `A`, then `B`, each as
/// A22 eigenbasis and spectrum, Y, rank of S, S.
pub fn rand_same_kernel_psd_pair(spec: &GenSpec) -> (BlockMatrix, BlockMatrix) {
    let mut rng = spec.rng();
    let kdim = rng.int(0, spec.n2);
    let kernel = rand_subspace(&mut rng, spec.n2, kdim, spec.field);
    let a = psd_block_with_kernel(&mut rng, spec, &kernel);
    let b = psd_block_with_kernel(&mut rng, spec, &kernel);
    (a, b)
}

/// PSD `C, D` of size `n` sharing a random kernel of dimension `0..n`.
///
/// Draws: kernel dimension and basis, then `C`, then `D`.
pub fn rand_same_kernel_psd_matrices(spec: &GenSpec, n: usize) -> (Matrix, Matrix) {
    let mut rng = spec.rng();
    let kdim = rng.int(0, n.saturating_sub(1));
    let kernel = rand_subspace(&mut rng, n, kdim, spec.field);
    let c = psd_with_kernel(&mut rng, &kernel, spec.field, spec.magnitude);
    let d = psd_with_kernel(&mut rng, &kernel, spec.field, spec.magnitude);
    (c, d)
}

/// General (non-Hermitian) block matrix whose `A22` has the given rank and
/// nonzero singular values log-uniform in `[magnitude, magnitude * cond]`.
///
/// Draws: A11, A12, A21, left and right singular frames, singular values.
pub fn rand_block_with_a22_rank(spec: &GenSpec, rank: usize, cond: f64) -> Result<BlockMatrix> {
    let (n1, n2, f, mag) = (spec.n1, spec.n2, spec.field, spec.magnitude);
    if rank > n2 {
        return Err(invalid(format!("rank {rank} exceeds n2 = {n2}")));
    }
    if !(cond >= 1.0 && cond.is_finite()) {
        return Err(invalid("condition bound must be finite and ≥ 1"));
    }
    let mut rng = spec.rng();
    let a11 = rng.matrix(n1, n1, f, mag);
    let a12 = rng.matrix(n1, n2, f, mag);
    let a21 = rng.matrix(n2, n1, f, mag);
    let u = rng.orthonormal(n2, rank, f);
    let v = rng.orthonormal(n2, rank, f);
    let s: Vec<f64> = (0..rank).map(|_| mag * rng.log_uniform(1.0, cond)).collect();
    let a22 = &(&u * &Matrix::from_diagonal(&s)) * &v.adjoint();
    Ok(block(spec, Matrix::from_blocks(&a11, &a12, &a21, &a22).expect("block shapes agree")))
}
