//! Randomized verification suites behind `ppt verify`.
//!
//! Trial `k` of a run with master seed `m` draws everything from
//! `trial_seed(m, k)`, so any failure can be replayed on its own with
//! `--replay <seed>`, and fanning trials out over threads cannot change a
//! result. Thresholds are fixed here; the tolerance flags only steer the
//! library's rank, sign and equality decisions.

use std::thread;

use clap::ValueEnum;
use ppt_core::block::{ep_congruence_schur, gppt, jppt, jppt_im_congruence, schur_complement};
use ppt_core::convexity::{bordered, jppt_concavity_gap, pinv_convexity_gap, schur_concavity_gap};
use ppt_core::gen::{
    rand_block_with_a22_rank, rand_im_psd, rand_ordered_pair, rand_pair_constant_rank, rand_saddle_instance,
    rand_saddle_instance_hermitian, rand_same_kernel_psd_pair, trial_seed, GenSpec, PairMode, Rng,
};
use ppt_core::linalg::{imag_part, is_ep, max_diff, min_eigenvalue, pinv};
use ppt_core::order::{prop35_identity, theorem1_report};
use ppt_core::varprin::{ppt_min, probe_ppt_min, reconstruct_jppt, schur_min, solve_saddle};
use ppt_core::{Field, ToleranceConfig, Vector};
use serde_json::json;

use crate::report::Report;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Penrose,
    Involution,
    Theorem1,
    Varprin,
    Concavity,
    Prop35,
    Lemma23,
    All,
}

const PENROSE_REL: f64 = 1e-10;
const INVOLUTION_REL: f64 = 1e-8;
const INVOLUTION_COND: f64 = 1e6;
const PROBE_IMPROVEMENT: f64 = 1e-8;
const FLATNESS: f64 = 1e-9;
const POLARIZATION: f64 = 1e-8;
const SADDLE_REL: f64 = 1e-9;
const GAP_SLACK: f64 = 1e-8;
const EXTRACTION: f64 = 1e-10;
const DIFFERENCE_IDENTITY: f64 = 1e-9;
const IM_SLACK: f64 = 1e-8;
const CONGRUENCE: f64 = 1e-10;

/// Largest residual-like quantity seen in a passing trial, or the reason
/// the trial failed.
type TrialResult = Result<f64, String>;
type TrialFn = fn(u64, &ToleranceConfig) -> TrialResult;

impl Suite {
    fn members(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![
                Suite::Penrose,
                Suite::Involution,
                Suite::Theorem1,
                Suite::Varprin,
                Suite::Concavity,
                Suite::Prop35,
                Suite::Lemma23,
            ],
            s => vec![s],
        }
    }

    fn name(self) -> &'static str {
        match self {
            Suite::Penrose => "penrose",
            Suite::Involution => "involution",
            Suite::Theorem1 => "theorem1",
            Suite::Varprin => "varprin",
            Suite::Concavity => "concavity",
            Suite::Prop35 => "prop35",
            Suite::Lemma23 => "lemma23",
            Suite::All => "all",
        }
    }

    fn trial(self) -> TrialFn {
        match self {
            Suite::Penrose => penrose,
            Suite::Involution => involution,
            Suite::Theorem1 => monotonicity,
            Suite::Varprin => variational,
            Suite::Concavity => concavity,
            Suite::Prop35 => difference_identity,
            Suite::Lemma23 => imaginary_part,
            Suite::All => unreachable!("expanded by members()"),
        }
    }
}

/// Which trials to run: `count` trials from a master seed, or one trial
/// with an explicit seed taken from an earlier report.
#[derive(Debug, Clone, Copy)]
pub enum Trials {
    Master { seed: u64, count: u64 },
    Replay(u64),
}

pub fn run(suite: Suite, trials: Trials, tol: &ToleranceConfig, report: &mut Report) {
    for s in suite.members() {
        let results = match trials {
            Trials::Master { seed, count } => run_parallel(s.trial(), seed, count, tol),
            Trials::Replay(seed) => vec![(0, seed, (s.trial())(seed, tol))],
        };
        let mut worst: f64 = 0.0;
        let mut failures = 0u64;
        for (k, seed, r) in &results {
            match r {
                Ok(x) => worst = worst.max(*x),
                Err(msg) => {
                    failures += 1;
                    report.failure(s.name(), *k, *seed, msg.clone());
                }
            }
        }
        let detail = json!({ "trials": results.len(), "failures": failures });
        report.check(s.name(), failures == 0, Some(worst), detail);
    }
}

fn run_parallel(f: TrialFn, master: u64, count: u64, tol: &ToleranceConfig) -> Vec<(u64, u64, TrialResult)> {
    let workers = thread::available_parallelism().map_or(1, |n| n.get()).min(count as usize).max(1) as u64;
    let mut out: Vec<_> = thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                scope.spawn(move || {
                    (w..count)
                        .step_by(workers as usize)
                        .map(|k| {
                            let seed = trial_seed(master, k);
                            (k, seed, f(seed, tol))
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("trial thread panicked")).collect()
    });
    out.sort_by_key(|(k, _, _)| *k);
    out
}

/// Block sizes in `1..=max` and the field, drawn from the trial seed.
fn shape(seed: u64, max_n1: usize, max_n2: usize) -> GenSpec {
    let mut rng = Rng::new(seed.rotate_left(32));
    let n1 = rng.int(1, max_n1);
    let n2 = rng.int(1, max_n2);
    let field = if rng.coin() { Field::Complex } else { Field::Real };
    GenSpec::new(n1, n2, field, seed)
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: ppt_core::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn penrose(seed: u64, tol: &ToleranceConfig) -> TrialResult {
    let mut rng = Rng::new(seed);
    let (rows, cols) = (rng.int(1, 8), rng.int(1, 8));
    let k = rng.int(0, rows.min(cols));
    let field = if rng.coin() { Field::Complex } else { Field::Real };
    let m = &rng.matrix(rows, k, field, 1.0) * &rng.matrix(k, cols, field, 1.0);
    let p = lib(pinv(&m, tol))?;
    let (mp, pm) = (&m * &p, &p * &m);
    let r = [
        max_diff(&(&mp * &m), &m) / m.max_abs().max(1.0),
        max_diff(&(&pm * &p), &p) / p.max_abs().max(1.0),
        max_diff(&mp, &mp.adjoint()),
        max_diff(&pm, &pm.adjoint()),
    ];
    let worst = r.iter().copied().fold(0.0, f64::max);
    check(worst <= PENROSE_REL, || format!("Penrose residuals {r:?}"))?;
    Ok(worst)
}

fn involution(seed: u64, tol: &ToleranceConfig) -> TrialResult {
    let spec = shape(seed, 5, 5);
    let a = lib(rand_block_with_a22_rank(&spec, spec.n2, INVOLUTION_COND))?;
    let back = lib(gppt(&lib(gppt(&a, tol))?, tol))?;
    let d = max_diff(back.matrix(), a.matrix()) / a.matrix().max_abs().max(1.0);
    check(d <= INVOLUTION_REL, || format!("relative involution residual {d:e}"))?;
    Ok(d)
}

fn monotonicity(seed: u64, tol: &ToleranceConfig) -> TrialResult {
    let spec = shape(seed, 6, 6);
    let modes = [PairMode::Generic, PairMode::ConstantRank, PairMode::KernelBreak];
    let mode = modes[Rng::new(seed ^ 0x3).int(0, 2)];
    let (a, b) = lib(rand_ordered_pair(&spec, mode))?;
    let r = lib(theorem1_report(&a, &b, tol))?;
    let statements = [r.stmt_a, r.stmt_b, r.stmt_c.constant];
    check(r.hypothesis_ok, || format!("{mode:?} pair is not ordered"))?;
    check(r.consistent, || format!("{mode:?}: inconsistent statements {statements:?}, schur_mono {}", r.schur_mono))?;
    match mode {
        PairMode::ConstantRank => check(statements == [true; 3] && r.schur_mono, || {
            format!("constant-rank pair gave {statements:?}, schur_mono {}", r.schur_mono)
        })?,
        PairMode::KernelBreak => check(statements == [false; 3], || format!("kernel-break pair gave {statements:?}"))?,
        PairMode::Generic => {}
    }
    Ok(0.0)
}

fn split(v: &Vector, n1: usize) -> (Vector, Vector) {
    (v.rows(0, n1).into_owned(), v.rows(n1, v.len() - n1).into_owned())
}

fn concat(a: &Vector, b: &Vector) -> Vector {
    Vector::from_iterator(a.len() + b.len(), a.iter().chain(b.iter()).copied())
}

fn variational(seed: u64, tol: &ToleranceConfig) -> TrialResult {
    let spec = shape(seed, 4, 4);
    let a = rand_saddle_instance_hermitian(&spec);
    let mut rng = Rng::new(seed.rotate_left(17));
    let (x1, y2) = split(&rng.vector(spec.dim(), spec.field, 1.0), spec.n1);

    let p = lib(probe_ppt_min(&a, &x1, &y2, seed, tol))?;
    check(p.worst_improvement <= PROBE_IMPROVEMENT, || format!("minimum beaten by {:e}", p.worst_improvement))?;
    check(p.flatness <= FLATNESS, || format!("minimizer set not flat: {:e}", p.flatness))?;

    let zero = Vector::zeros(spec.n2);
    let s = lib(schur_min(&a, &x1, tol))?;
    let q = lib(ppt_min(&a, &x1, &zero, tol))?;
    let half = (q.value - 0.5 * s.value).abs() / (1.0 + s.value.abs());
    check(half <= FLATNESS, || format!("y2 = 0 value {} vs half of {}", q.value, s.value))?;
    check(lib(q.minimizers.same_as(&s.minimizers, tol))?, || "minimizer sets differ at y2 = 0".into())?;

    let rebuilt = lib(reconstruct_jppt(&a, tol))?;
    let polar = max_diff(&rebuilt, lib(jppt(&a, tol))?.matrix());
    check(polar <= POLARIZATION, || format!("polarization residual {polar:e}"))?;

    // Saddle round trip on a general admissible instance with y2 chosen so
    // the system is consistent.
    let b = rand_saddle_instance(&spec);
    let w = rng.vector(spec.n2, spec.field, 1.0);
    let y2 = &b.a21().mul_vec(&x1) + &b.a22().mul_vec(&w);
    let sol = lib(solve_saddle(&b, &x1, &y2, tol))?;
    let scale = 1.0 + b.matrix().max_abs();
    // A random member of the solution set must satisfy the system too.
    let x2 = sol.x2_set.point(&rng.vector(sol.x2_set.dim(), spec.field, 1.0));
    let lhs = b.matrix().mul_vec(&concat(&x1, &x2));
    let member = (&lhs - &concat(&sol.y1, &y2)).iter().map(|z| z.norm()).fold(0.0, f64::max);
    let r = sol.residual.max(sol.jppt_residual).max(member) / scale;
    check(r <= SADDLE_REL, || format!("saddle residuals {:e} {:e} {member:e}", sol.residual, sol.jppt_residual))?;

    Ok(p.worst_improvement.max(0.0).max(p.flatness).max(polar).max(r))
}

fn concavity(seed: u64, tol: &ToleranceConfig) -> TrialResult {
    let spec = shape(seed, 4, 4);
    let (a, b) = rand_same_kernel_psd_pair(&spec);
    let (c, d) = (a.a22(), b.a22());
    let (ba, bb) = (lib(bordered(&c))?, lib(bordered(&d))?);
    let mut rng = Rng::new(seed.rotate_left(5));
    let ts: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).chain((0..20).map(|_| rng.unit())).collect();
    let mut worst: f64 = 0.0;
    for t in ts {
        let j = lib(jppt_concavity_gap(&a, &b, t, tol))?;
        let s = lib(schur_concavity_gap(&a, &b, t, tol))?;
        let p = lib(pinv_convexity_gap(&c, &d, t, tol))?;
        let jb = lib(jppt_concavity_gap(&ba, &bb, t, tol))?;
        let m = j.min_eigenvalue.min(s.min_eigenvalue).min(p.min_eigenvalue);
        check(m >= -GAP_SLACK, || format!("t = {t}: gap has eigenvalue {m:e}"))?;
        let x1 = max_diff(&s.gap, &j.gap.submatrix(0, 0, spec.n1, spec.n1));
        let x2 = max_diff(&p.gap, &jb.gap.submatrix(1, 1, spec.n2, spec.n2));
        check(x1.max(x2) <= EXTRACTION, || format!("t = {t}: block extraction {x1:e} {x2:e}"))?;
        worst = worst.max(-m).max(x1).max(x2);
    }
    Ok(worst)
}

fn difference_identity(seed: u64, tol: &ToleranceConfig) -> TrialResult {
    let spec = shape(seed, 4, 4);
    let (a, b) = rand_pair_constant_rank(&spec);
    let p = lib(prop35_identity(&a, &b, tol))?;
    check(p.inclusions_ok, || "kernel or range inclusion failed".into())?;
    let worst = p.residual.max(p.alt_residual);
    check(worst <= DIFFERENCE_IDENTITY, || format!("residuals {:e} {:e}", p.residual, p.alt_residual))?;
    Ok(worst)
}

fn imaginary_part(seed: u64, tol: &ToleranceConfig) -> TrialResult {
    let mut spec = shape(seed, 4, 4);
    spec.field = Field::Complex;
    let a = lib(rand_im_psd(&spec))?;
    check(lib(is_ep(&a.a22(), tol))?, || "A22 is not EP".into())?;

    let ep = lib(ep_congruence_schur(&a, tol))?;
    let ep_worst = ep.schur_identity_residual.max(ep.im_identity_residual);
    check(ep_worst <= tol.eq_tol, || format!("EP congruence residuals {ep_worst:e}"))?;
    let schur_im = lib(min_eigenvalue(&lib(imag_part(&lib(schur_complement(&a, tol))?))?, tol))?;
    check(schur_im >= -IM_SLACK, || format!("Im(A/A22) has eigenvalue {schur_im:e}"))?;

    let im = lib(imag_part(lib(jppt(&a, tol))?.matrix()))?;
    let m = lib(min_eigenvalue(&im, tol))?;
    check(m >= -IM_SLACK, || format!("Im(J ppt(A)) has eigenvalue {m:e}"))?;
    let c = lib(jppt_im_congruence(&a, tol))?;
    check(c.residual <= CONGRUENCE, || format!("congruence residual {:e}", c.residual))?;
    Ok(ep_worst.max(c.residual).max(-m).max(-schur_im).max(0.0))
}
