//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Tolerances are pinned here rather than taken from the library defaults,
//! so changing a default cannot silently loosen a criterion.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::{rank_one_pair, sign_flip_pair, trial_spec, RANK_ONE_JPPT_A, RANK_ONE_JPPT_B};
use ppt_core::block::{gppt, hat_embedding, jppt, jppt_im_congruence, schur_complement};
use ppt_core::convexity::{bordered, jppt_concavity_gap, pinv_convexity_gap, schur_concavity_gap};
use ppt_core::gen::{
    rand_block_with_a22_rank, rand_im_psd, rand_ordered_pair, rand_pair_constant_rank, rand_same_kernel_psd_pair,
    rand_saddle_instance, rand_saddle_instance_hermitian, trial_seed, GenSpec, PairMode, Rng,
};
use ppt_core::linalg::{imag_part, kernel_basis, max_diff, min_eigenvalue, pinv, rank, subspace_leq};
use ppt_core::order::{pinv_monotone, prop35_identity, spectral_path_check, theorem1_report, RankPathMethod};
use ppt_core::varprin::{ppt_min, probe_ppt_min, reconstruct_jppt, schur_min, solve_saddle};
use ppt_core::{Field, Matrix, ToleranceConfig, Vector};

const EXACT: f64 = 1e-12;
const FIXTURE_BUDGET: Duration = Duration::from_millis(100);
const MASTER_SEED: u64 = 20_240_917;

type Outcome = Result<String, String>;

fn tol() -> ToleranceConfig {
    ToleranceConfig::new(1e-10, 1e-8, 1e-9).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<T: std::fmt::Debug>(x: T) -> String {
    format!("{x:?}")
}

fn fixture_sign_flip() -> Outcome {
    let start = Instant::now();
    let tol = tol();
    let (a, b) = sign_flip_pair();
    let ja = jppt(&a, &tol).map_err(e)?;
    let jb = jppt(&b, &tol).map_err(e)?;
    let da = max_diff(ja.matrix(), &Matrix::from_diagonal(&[0.0, 1.0]));
    let db = max_diff(jb.matrix(), &Matrix::from_diagonal(&[0.0, -1.0]));
    ensure(da <= EXACT && db <= EXACT, || format!("jppt mismatch {da:e} {db:e}"))?;
    let r = theorem1_report(&a, &b, &tol).map_err(e)?;
    ensure(!r.stmt_a && !r.stmt_b && !r.stmt_c.constant, || format!("statements {r:?}"))?;
    ensure(r.consistent, || "inconsistent report".into())?;
    let t = r.stmt_c.witness_t.ok_or("no witness")?;
    ensure((t - 0.5).abs() <= 1e-6, || format!("witness t = {t}"))?;
    let elapsed = start.elapsed();
    ensure(elapsed < FIXTURE_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("witness t = {t}, {elapsed:?}"))
}

fn fixture_rank_one() -> Outcome {
    let start = Instant::now();
    let tol = tol();
    let (a, b) = rank_one_pair();
    let ja = jppt(&a, &tol).map_err(e)?;
    let jb = jppt(&b, &tol).map_err(e)?;
    let da = max_diff(ja.matrix(), &Matrix::from_real(4, 4, &RANK_ONE_JPPT_A).unwrap());
    let db = max_diff(jb.matrix(), &Matrix::from_real(4, 4, &RANK_ONE_JPPT_B).unwrap());
    ensure(da <= EXACT && db <= EXACT, || format!("jppt mismatch {da:e} {db:e}"))?;
    let pb = pinv(&b.a22(), &tol).map_err(e)?;
    let pa = pinv(&a.a22(), &tol).map_err(e)?;
    let dpb = max_diff(&pb, &Matrix::from_real(2, 2, &[0.25; 4]).unwrap());
    let dpa = max_diff(&pa, &Matrix::from_real(2, 2, &[0.5; 4]).unwrap());
    ensure(dpb <= EXACT && dpa <= EXACT, || format!("pinv mismatch {dpb:e} {dpa:e}"))?;
    let r = theorem1_report(&a, &b, &tol).map_err(e)?;
    ensure(r.stmt_a && r.stmt_b && r.stmt_c.constant && r.schur_mono && r.consistent, || format!("{r:?}"))?;
    let incl = subspace_leq(
        &kernel_basis(&b.a22(), &tol).map_err(e)?,
        &kernel_basis(&b.a12(), &tol).map_err(e)?,
        &tol,
    )
    .map_err(e)?;
    ensure(!incl, || "ker B22 ⊆ ker B12 unexpectedly".into())?;
    let elapsed = start.elapsed();
    ensure(elapsed < FIXTURE_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!("{elapsed:?}"))
}

fn theorem_consistency() -> Outcome {
    let start = Instant::now();
    let tol = tol();
    let modes = [PairMode::Generic, PairMode::ConstantRank, PairMode::KernelBreak];
    let mut total = 0;
    for (m, mode) in modes.into_iter().enumerate() {
        for trial in 0..500u64 {
            let spec = trial_spec(MASTER_SEED + m as u64, trial, 6, 6);
            let (a, b) = rand_ordered_pair(&spec, mode).map_err(e)?;
            let r = theorem1_report(&a, &b, &tol).map_err(e)?;
            let ok = r.hypothesis_ok
                && r.consistent
                && match mode {
                    PairMode::Generic => true,
                    PairMode::ConstantRank => r.stmt_a && r.stmt_b && r.stmt_c.constant && r.schur_mono,
                    PairMode::KernelBreak => !r.stmt_a && !r.stmt_b && !r.stmt_c.constant,
                };
            ensure(ok, || format!("{mode:?} seed {} ({}, {}): {r:?}", spec.seed, spec.n1, spec.n2))?;
            total += 1;
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(30), || format!("took {elapsed:?}"))?;
    Ok(format!("{total} pairs, {elapsed:?}"))
}

/// Hermitian `C ≤ D` of size up to `max_n`, cycling through the pair modes.
fn ordered_blocks(trial: u64, max_n: usize) -> (GenSpec, Matrix, Matrix) {
    let seed = trial_seed(MASTER_SEED ^ 0x4C, trial);
    let n = Rng::new(seed).int(1, max_n);
    let field = if trial % 2 == 0 { Field::Real } else { Field::Complex };
    let spec = GenSpec::new(0, n, field, seed);
    let mode = [PairMode::Generic, PairMode::ConstantRank, PairMode::KernelBreak][(trial % 3) as usize];
    let (a, b) = rand_ordered_pair(&spec, mode).expect("n2 ≥ 1");
    (spec, a.into_matrix(), b.into_matrix())
}

fn pinv_monotonicity() -> Outcome {
    let tol = tol();
    let mut holds = 0;
    for trial in 0..500 {
        let (spec, c, d) = ordered_blocks(trial, 8);
        let r = pinv_monotone(&c, &d, &tol).map_err(e)?;
        ensure(r.holds == r.direct, || format!("seed {}: {r:?}", spec.seed))?;
        holds += r.holds as usize;
    }
    Ok(format!("500 pairs agree ({holds} monotone)"))
}

/// Crossing verdict from a 101-point grid: a rank drop at a grid point or a
/// sign change of the determinant between neighbours.
fn grid_crossing(c: &Matrix, d: &Matrix, tol: &ToleranceConfig) -> bool {
    let n = c.nrows();
    let mut prev_sign = 0.0;
    for k in 0..=100 {
        let t = k as f64 / 100.0;
        let p = &c.scale(1.0 - t) + &d.scale(t);
        if rank(&p, tol).unwrap() < n {
            return true;
        }
        let sign = p.data().determinant().re.signum();
        if prev_sign != 0.0 && sign != prev_sign {
            return true;
        }
        prev_sign = sign;
    }
    false
}

fn spectral_vs_grid() -> Outcome {
    let tol = tol();
    let (mut checked, mut crossings, mut trial) = (0, 0, 0u64);
    while checked < 500 {
        let (spec, c, d) = ordered_blocks(10_000 + trial, 6);
        trial += 1;
        if rank(&d, &tol).unwrap() < d.nrows() {
            continue;
        }
        let s = spectral_path_check(&c, &d, &tol).map_err(e)?;
        let g = grid_crossing(&c, &d, &tol);
        ensure(s.no_crossing != g, || format!("seed {}: spectral {:?}, grid crossing {g}", spec.seed, s))?;
        // The exact route and the sampled route of the rank-path decision agree too.
        let exact = ppt_core::order::rank_path_constant(&c, &d, &tol).map_err(e)?;
        let sampled = ppt_core::order::rank_path_constant_with(&c, &d, RankPathMethod::Sampled, &tol).map_err(e)?;
        let ki = ppt_core::order::rank_path_constant_with(&c, &d, RankPathMethod::KernelInertia, &tol).map_err(e)?;
        ensure(exact.constant == sampled.constant && exact.constant == ki.constant, || {
            format!("seed {}: routes disagree", spec.seed)
        })?;
        checked += 1;
        crossings += g as usize;
    }
    Ok(format!("500 pairs agree ({crossings} crossings, {} skipped singular D)", trial - 500))
}

fn hat_identity() -> Outcome {
    let tol = tol();
    let mut worst: f64 = 0.0;
    for trial in 0..500u64 {
        let spec = trial_spec(MASTER_SEED ^ 0x22, trial, 5, 5);
        let r = Rng::new(spec.seed).int(0, spec.n2);
        let a = rand_block_with_a22_rank(&spec, r, 1e4).map_err(e)?;
        let lhs = jppt(&a, &tol).map_err(e)?;
        let rhs = schur_complement(&hat_embedding(&a, &tol).map_err(e)?, &tol).map_err(e)?;
        let d = max_diff(lhs.matrix(), &rhs);
        ensure(d <= 1e-10, || format!("seed {}: residual {d:e}", spec.seed))?;
        worst = worst.max(d);
    }
    Ok(format!("max residual {worst:e}"))
}

fn penrose_and_involution() -> Outcome {
    let tol = tol();
    let mut worst_p: f64 = 0.0;
    for trial in 0..200u64 {
        let seed = trial_seed(MASTER_SEED ^ 0x77, trial);
        let mut rng = Rng::new(seed);
        let (rows, cols) = (rng.int(1, 10), rng.int(1, 10));
        let k = rng.int(0, rows.min(cols));
        let field = if trial % 2 == 0 { Field::Real } else { Field::Complex };
        let m = &rng.matrix(rows, k, field, 1.0) * &rng.matrix(k, cols, field, 1.0);
        let p = pinv(&m, &tol).map_err(e)?;
        let rel = |x: f64, s: f64| x / s.max(f64::MIN_POSITIVE).max(1e-300);
        let mp = &m * &p;
        let pm = &p * &m;
        let r = [
            rel(max_diff(&(&mp * &m), &m), m.max_abs().max(1.0)),
            rel(max_diff(&(&pm * &p), &p), p.max_abs().max(1.0)),
            max_diff(&mp, &mp.adjoint()),
            max_diff(&pm, &pm.adjoint()),
        ];
        let w = r.iter().copied().fold(0.0, f64::max);
        ensure(w <= 1e-10, || format!("seed {seed}: Penrose residuals {r:?}"))?;
        worst_p = worst_p.max(w);
    }
    let mut worst_i: f64 = 0.0;
    for trial in 0..200u64 {
        let spec = trial_spec(MASTER_SEED ^ 0x78, trial, 5, 5);
        let a = rand_block_with_a22_rank(&spec, spec.n2, 1e6).map_err(e)?;
        let back = gppt(&gppt(&a, &tol).map_err(e)?, &tol).map_err(e)?;
        // Inverting a block with condition 1e6 loses about eps * 1e6 relative
        // to the largest entry, so the residual is scaled by it.
        let d = max_diff(back.matrix(), a.matrix()) / a.matrix().max_abs().max(1.0);
        ensure(d <= 1e-8, || format!("seed {}: involution residual {d:e}", spec.seed))?;
        worst_i = worst_i.max(d);
    }
    Ok(format!("Penrose {worst_p:e}, involution {worst_i:e}"))
}

fn split(v: &Vector, n1: usize) -> (Vector, Vector) {
    (v.rows(0, n1).into_owned(), v.rows(n1, v.len() - n1).into_owned())
}

fn variational() -> Outcome {
    let tol = tol();
    let (mut improve, mut flat, mut polar): (f64, f64, f64) = (f64::NEG_INFINITY, 0.0, 0.0);
    for trial in 0..200u64 {
        let spec = trial_spec(MASTER_SEED ^ 0x88, trial, 4, 4);
        let a = rand_saddle_instance_hermitian(&spec);
        let mut rng = Rng::new(spec.seed.rotate_left(17));
        let (x1, y2) = split(&rng.vector(spec.dim(), spec.field, 1.0), spec.n1);
        let p = probe_ppt_min(&a, &x1, &y2, spec.seed, &tol).map_err(e)?;
        ensure(p.worst_improvement <= 1e-8, || format!("seed {}: beaten by {:e}", spec.seed, p.worst_improvement))?;
        ensure(p.flatness <= 1e-9, || format!("seed {}: flatness {:e}", spec.seed, p.flatness))?;
        let zero = Vector::zeros(spec.n2);
        let s = schur_min(&a, &x1, &tol).map_err(e)?;
        let q = ppt_min(&a, &x1, &zero, &tol).map_err(e)?;
        ensure((q.value - 0.5 * s.value).abs() <= 1e-9 * (1.0 + s.value.abs()), || {
            format!("seed {}: {} vs {}", spec.seed, q.value, s.value)
        })?;
        ensure(q.minimizers.same_as(&s.minimizers, &tol).map_err(e)?, || {
            format!("seed {}: minimizer sets differ at y2 = 0", spec.seed)
        })?;
        let rec = reconstruct_jppt(&a, &tol).map_err(e)?;
        let d = max_diff(&rec, jppt(&a, &tol).map_err(e)?.matrix());
        ensure(d <= 1e-8, || format!("seed {}: polarization residual {d:e}", spec.seed))?;
        improve = improve.max(p.worst_improvement);
        flat = flat.max(p.flatness);
        polar = polar.max(d);
    }
    Ok(format!("max improvement {improve:e}, flatness {flat:e}, polarization {polar:e}"))
}

fn saddle_round_trip() -> Outcome {
    let tol = tol();
    let mut worst: f64 = 0.0;
    for trial in 0..200u64 {
        let spec = trial_spec(MASTER_SEED ^ 0x99, trial, 5, 5);
        let a = rand_saddle_instance(&spec);
        let mut rng = Rng::new(spec.seed.rotate_left(9));
        let x1 = rng.vector(spec.n1, spec.field, 1.0);
        let w = rng.vector(spec.n2, spec.field, 1.0);
        let y2 = &a.a21().mul_vec(&x1) + &a.a22().mul_vec(&w);
        let s = solve_saddle(&a, &x1, &y2, &tol).map_err(e)?;
        let limit = 1e-9 * (1.0 + a.matrix().max_abs());
        // Every member of the solution set, not only the particular one.
        let c = rng.vector(s.x2_set.dim(), spec.field, 1.0);
        let x2 = s.x2_set.point(&c);
        let full = a.matrix().mul_vec(&concat(&x1, &x2));
        let member = (&full - &concat(&s.y1, &y2)).iter().map(|z| z.norm()).fold(0.0, f64::max);
        let r = s.residual.max(s.jppt_residual).max(member);
        ensure(r <= limit, || format!("seed {}: residuals {} {} {member}", spec.seed, s.residual, s.jppt_residual))?;
        worst = worst.max(r / (1.0 + a.matrix().max_abs()));
    }
    Ok(format!("max scaled residual {worst:e}"))
}

fn concat(a: &Vector, b: &Vector) -> Vector {
    Vector::from_iterator(a.len() + b.len(), a.iter().chain(b.iter()).copied())
}

fn concavity() -> Outcome {
    let tol = tol();
    let (mut min_gap, mut extract): (f64, f64) = (f64::INFINITY, 0.0);
    for trial in 0..200u64 {
        let spec = trial_spec(MASTER_SEED ^ 0xAA, trial, 4, 4);
        let (a, b) = rand_same_kernel_psd_pair(&spec);
        let (c, d) = (a.a22(), b.a22());
        let (ba, bb) = (bordered(&c).map_err(e)?, bordered(&d).map_err(e)?);
        let mut rng = Rng::new(spec.seed.rotate_left(5));
        let ts: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).chain((0..20).map(|_| rng.unit())).collect();
        for t in ts {
            let j = jppt_concavity_gap(&a, &b, t, &tol).map_err(e)?;
            let s = schur_concavity_gap(&a, &b, t, &tol).map_err(e)?;
            let p = pinv_convexity_gap(&c, &d, t, &tol).map_err(e)?;
            let jb = jppt_concavity_gap(&ba, &bb, t, &tol).map_err(e)?;
            let m = j.min_eigenvalue.min(s.min_eigenvalue).min(p.min_eigenvalue);
            ensure(m >= -1e-8, || format!("seed {}, t = {t}: λ_min {m:e}", spec.seed))?;
            let x1 = max_diff(&s.gap, &j.gap.submatrix(0, 0, spec.n1, spec.n1));
            let x2 = max_diff(&p.gap, &jb.gap.submatrix(1, 1, spec.n2, spec.n2));
            ensure(x1 <= 1e-10 && x2 <= 1e-10, || format!("seed {}, t = {t}: extraction {x1:e} {x2:e}", spec.seed))?;
            min_gap = min_gap.min(m);
            extract = extract.max(x1).max(x2);
        }
    }
    Ok(format!("min λ_min {min_gap:e}, extraction {extract:e}"))
}

fn difference_identity() -> Outcome {
    let tol = tol();
    let mut worst: f64 = 0.0;
    for trial in 0..200u64 {
        let spec = trial_spec(MASTER_SEED ^ 0xBB, trial, 4, 4);
        let (a, b) = rand_pair_constant_rank(&spec);
        let p = prop35_identity(&a, &b, &tol).map_err(e)?;
        ensure(p.residual <= 1e-9 && p.alt_residual <= 1e-9 && p.inclusions_ok, || {
            format!("seed {}: {} {} {}", spec.seed, p.residual, p.alt_residual, p.inclusions_ok)
        })?;
        worst = worst.max(p.residual).max(p.alt_residual);
    }
    Ok(format!("max residual {worst:e}"))
}

fn im_preservation() -> Outcome {
    let tol = tol();
    let (mut min_eig, mut worst): (f64, f64) = (f64::INFINITY, 0.0);
    for trial in 0..200u64 {
        let mut spec = trial_spec(MASTER_SEED ^ 0xCC, trial, 4, 4);
        spec.field = Field::Complex;
        let a = rand_im_psd(&spec).map_err(e)?;
        let im = imag_part(jppt(&a, &tol).map_err(e)?.matrix()).map_err(e)?;
        let m = min_eigenvalue(&im, &tol).map_err(e)?;
        ensure(m >= -1e-8, || format!("seed {}: λ_min Im = {m:e}", spec.seed))?;
        let c = jppt_im_congruence(&a, &tol).map_err(e)?;
        ensure(c.residual <= 1e-10, || format!("seed {}: congruence {:e}", spec.seed, c.residual))?;
        min_eig = min_eig.min(m);
        worst = worst.max(c.residual);
    }
    Ok(format!("min λ_min {min_eig:e}, congruence {worst:e}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("sign-flip fixture", fixture_sign_flip),
        ("rank-one fixture", fixture_rank_one),
        ("monotonicity equivalence on generated pairs", theorem_consistency),
        ("pseudoinverse monotonicity oracle", pinv_monotonicity),
        ("spectral crossing test vs grid", spectral_vs_grid),
        ("hat embedding identity", hat_identity),
        ("Penrose identities and involution", penrose_and_involution),
        ("variational principles", variational),
        ("saddle solver round trip", saddle_round_trip),
        ("concavity and convexity gaps", concavity),
        ("Schur complement of a difference", difference_identity),
        ("imaginary part preservation", im_preservation),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
