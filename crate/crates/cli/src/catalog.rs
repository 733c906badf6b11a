//! The standard set of entropies exercised by `--entropy all`.

use bregkit_core::EntropySpec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const NAMES: [&str; 10] =
    ["bgs", "hct", "burg", "iterlog", "beta", "alpha-beta", "l2lp", "quadratic", "ell2", "all"];

/// Pairs of the ℓ²-type entropy; its dimension is twice this.
pub const ELL2_PAIRS: usize = 8;

/// Symmetric positive definite MᵀM/n + ½I with M uniform in [−1, 1].
pub fn random_spd(dim: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m: Vec<f64> = (0..dim * dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut a = vec![0.0; dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            let s: f64 = (0..dim).map(|k| m[k * dim + i] * m[k * dim + j]).sum();
            a[i * dim + j] = s / dim as f64 + if i == j { 0.5 } else { 0.0 };
        }
    }
    a
}

/// Every base entropy with the parameter values used in the standard checks.
pub fn catalog(dim: usize, seed: u64) -> Vec<EntropySpec> {
    let mut out = vec![EntropySpec::bgs(dim)];
    for q in [-1.0, 0.5, 1.5, 2.0, 3.0] {
        out.push(EntropySpec::hct(q, dim).expect("valid q"));
    }
    out.push(EntropySpec::burg(dim));
    out.push(EntropySpec::iterated_log(dim));
    for b in [0.0, 0.5, 1.0, 2.0] {
        out.push(EntropySpec::beta(b, dim).expect("valid beta"));
    }
    for (a, b) in [(1.0, 0.5), (2.0, 0.5)] {
        out.push(EntropySpec::alpha_beta(a, b, dim).expect("valid alpha, beta"));
    }
    out.push(EntropySpec::l2lp(1.5, dim).expect("valid p"));
    out.push(EntropySpec::quadratic(&random_spd(dim, seed), dim).expect("positive definite"));
    for split in [0, 2] {
        out.push(EntropySpec::ell2_type(split, ELL2_PAIRS).expect("valid split"));
    }
    out
}
