#![allow(dead_code)]

use ppt_core::gen::{trial_seed, GenSpec, Rng};
use ppt_core::{BlockMatrix, Field, Matrix};

/// `A = diag(0, -1) ≤ B = diag(0, 1)`, partitioned `(1, 1)`. The rank of
/// `(1 - t) A22 + t B22` drops to zero at `t = 1/2`.
pub fn sign_flip_pair() -> (BlockMatrix, BlockMatrix) {
    let a = BlockMatrix::new(1, 1, Matrix::from_diagonal(&[0.0, -1.0])).unwrap();
    let b = BlockMatrix::new(1, 1, Matrix::from_diagonal(&[0.0, 1.0])).unwrap();
    (a, b)
}

/// A 4x4 pair, partitioned `(2, 2)`, with rank-one (2,2) blocks sharing a
/// kernel, for which every statement of the monotonicity theorem holds.
pub fn rank_one_pair() -> (BlockMatrix, BlockMatrix) {
    #[rustfmt::skip]
    let a = [
        0.0, 0.0, 1.0, -0.5,
        0.0, 0.0, 0.0, 0.0,
        1.0, 0.0, 0.5, 0.5,
        -0.5, 0.0, 0.5, 0.5,
    ];
    #[rustfmt::skip]
    let b = [
        0.5, 0.0, 1.0, -0.5,
        0.0, 0.0, 0.0, 0.0,
        1.0, 0.0, 1.0, 1.0,
        -0.5, 0.0, 1.0, 1.0,
    ];
    (
        BlockMatrix::new(2, 2, Matrix::from_real(4, 4, &a).unwrap()).unwrap(),
        BlockMatrix::new(2, 2, Matrix::from_real(4, 4, &b).unwrap()).unwrap(),
    )
}

#[rustfmt::skip]
pub const RANK_ONE_JPPT_A: [f64; 16] = [
    -0.125, 0.0, 0.25, 0.25,
    0.0, 0.0, 0.0, 0.0,
    0.25, 0.0, -0.5, -0.5,
    0.25, 0.0, -0.5, -0.5,
];

#[rustfmt::skip]
pub const RANK_ONE_JPPT_B: [f64; 16] = [
    0.4375, 0.0, 0.125, 0.125,
    0.0, 0.0, 0.0, 0.0,
    0.125, 0.0, -0.25, -0.25,
    0.125, 0.0, -0.25, -0.25,
];

/// Spec for trial `trial`: block sizes drawn from `1..=max_n1`, `1..=max_n2`
/// and the field alternating between trials.
pub fn trial_spec(master: u64, trial: u64, max_n1: usize, max_n2: usize) -> GenSpec {
    let seed = trial_seed(master, trial);
    let mut rng = Rng::new(seed ^ 0xA5A5_A5A5_A5A5_A5A5);
    let n1 = rng.int(1, max_n1);
    let n2 = rng.int(1, max_n2);
    let field = if trial % 2 == 0 { Field::Real } else { Field::Complex };
    GenSpec::new(n1, n2, field, seed)
}
