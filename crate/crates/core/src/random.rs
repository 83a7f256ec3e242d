//! Seeded random instances.
//!
//! The generator is ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded through
//! `SeedableRng::seed_from_u64`; integer entries are drawn uniformly from
//! `[-9, 9]` with `Rng::gen_range`. A given `(seed, n, kind)` always yields
//! the same instance. Nonsingular generators resample one matrix (or one
//! edge basis) at a time until its determinant is nonzero.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::engine::{DenseTensorForm, MatrixTuple};
use crate::error::{Error, Result};
use crate::exact::{det, int, Matrix, Polynomial, Rational};
use crate::onn::ColorfulInstance;
use crate::perms::Shape;
use crate::svrtan::{edge_count, EdgeBasis, SpinorInstance};

pub const ENTRY_BOUND: i64 = 9;
pub const RESAMPLE_CAP: usize = 1000;

pub type InstanceRng = ChaCha8Rng;

pub fn rng(seed: u64) -> InstanceRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn entry(rng: &mut InstanceRng) -> Rational {
    int(rng.gen_range(-ENTRY_BOUND..=ENTRY_BOUND))
}

pub fn integer_matrix(rng: &mut InstanceRng, n: usize) -> Matrix {
    let entries = (0..n * n).map(|_| entry(rng)).collect();
    Matrix::new(n, n, entries).expect("n*n entries")
}

pub fn nonsingular_matrix(rng: &mut InstanceRng, n: usize) -> Result<Matrix> {
    for _ in 0..RESAMPLE_CAP {
        let m = integer_matrix(rng, n);
        if !det(&m)?.is_zero() {
            return Ok(m);
        }
    }
    Err(Error::SamplingExhausted(RESAMPLE_CAP))
}

/// Integer matrices of the given shape, singular or not.
pub fn matrix_tuple(rng: &mut InstanceRng, shape: &Shape) -> MatrixTuple {
    MatrixTuple::new(shape.sizes().iter().map(|&n| integer_matrix(rng, n)).collect())
        .expect("square matrices of a valid shape")
}

pub fn nonsingular_tuple(rng: &mut InstanceRng, shape: &Shape) -> Result<MatrixTuple> {
    let matrices = shape
        .sizes()
        .iter()
        .map(|&n| nonsingular_matrix(rng, n))
        .collect::<Result<Vec<_>>>()?;
    MatrixTuple::new(matrices)
}

pub fn dense_form(rng: &mut InstanceRng, shape: &Shape) -> Result<DenseTensorForm> {
    let count = DenseTensorForm::coefficient_count(shape).ok_or_else(|| {
        Error::InvalidArgument(format!("dense form of shape {shape:?} is too large"))
    })?;
    DenseTensorForm::new(shape.clone(), (0..count).map(|_| entry(rng)).collect())
}

/// `n` nonsingular `n x n` integer matrices.
pub fn colorful_instance(n: usize, seed: u64) -> Result<ColorfulInstance> {
    let mut rng = rng(seed);
    let matrices = (0..n)
        .map(|_| nonsingular_matrix(&mut rng, n))
        .collect::<Result<Vec<_>>>()?;
    ColorfulInstance::new(matrices)
}

fn linear(rng: &mut InstanceRng) -> Polynomial {
    Polynomial::linear(entry(rng), entry(rng))
}

/// Integer spinor bases with every edge determinant nonzero.
pub fn spinor_instance(n: usize, seed: u64) -> Result<SpinorInstance> {
    let mut rng = rng(seed);
    let mut bases = Vec::with_capacity(edge_count(n));
    for _ in 0..edge_count(n) {
        let basis = (0..RESAMPLE_CAP)
            .map(|_| EdgeBasis {
                p1: linear(&mut rng),
                p2: linear(&mut rng),
            })
            .find(|b| !b.det().is_zero())
            .ok_or(Error::SamplingExhausted(RESAMPLE_CAP))?;
        bases.push(basis);
    }
    SpinorInstance::new(n, bases)
}
