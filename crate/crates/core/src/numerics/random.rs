//! Seeded random states and unitaries.
//!
//! All generators draw from an explicitly passed [`TrialRng`]; the
//! `*_from_seed` wrappers are bit-for-bit reproducible for a given seed.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::matrix::ComplexMatrix;
use super::state::PureState;
use crate::error::Result;

pub type TrialRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> TrialRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Per-trial seed derived from a master seed and the trial index (SplitMix64).
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Standard complex Gaussian: (N(0,1) + i N(0,1))/√2.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn haar_state<R: Rng + ?Sized>(rng: &mut R, dims: &[usize]) -> Result<PureState> {
    let total: usize = dims.iter().product();
    let amps: Vec<Complex64> = (0..total).map(|_| complex_gaussian(rng)).collect();
    PureState::normalized(dims.to_vec(), amps)
}

pub fn haar_state_from_seed(dims: &[usize], seed: u64) -> Result<PureState> {
    haar_state(&mut rng_from_seed(seed), dims)
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases of
/// R's diagonal moved into Q.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let mut data = Vec::with_capacity(n * n);
    for _ in 0..n * n {
        data.push(complex_gaussian(rng));
    }
    let g = ComplexMatrix::new(n, n, data).expect("n*n entries");
    let qr = g.to_nalgebra().qr();
    let q = qr.q();
    let r = qr.r();
    let mut u = ComplexMatrix::from_nalgebra(&q);
    for c in 0..n {
        let d = r[(c, c)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for row in 0..n {
            u[(row, c)] *= ph;
        }
    }
    u
}

pub fn haar_unitary_from_seed(n: usize, seed: u64) -> ComplexMatrix {
    haar_unitary(&mut rng_from_seed(seed), n)
}

/// Splits the first `dim` columns of a Haar unitary of size `blocks·dim` into
/// `blocks` stacked `dim × dim` operators; Σ K†K = I by construction.
pub fn haar_isometry_blocks<R: Rng + ?Sized>(rng: &mut R, dim: usize, blocks: usize) -> Vec<ComplexMatrix> {
    let u = haar_unitary(rng, dim * blocks);
    (0..blocks).map(|b| ComplexMatrix::from_fn(dim, dim, |r, c| u[(b * dim + r, c)])).collect()
}
