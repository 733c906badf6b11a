use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{EntropySpec, Node};
use crate::error::{check_dim, Error, Result};
use crate::norms::NormSpec;

const SEMI_EQUIVALENCE_SAMPLES: usize = 10_000;
const SEMI_EQUIVALENCE_SEED: u64 = 0x5eed;

/// λ·b + ⟨ℓ, ·⟩. Its divergence is λ times the divergence of `spec`.
pub fn scale_plus_linear(spec: EntropySpec, lambda: f64, ell: &[f64]) -> Result<EntropySpec> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::NonpositiveLambda(lambda));
    }
    check_dim(ell, spec.dim)?;
    let (dim, norm) = (spec.dim, spec.norm);
    let scaled = EntropySpec::from_node(Node::Scaled { lambda, inner: Box::new(spec) }, dim, norm);
    Ok(EntropySpec::from_node(Node::PlusLinear { ell: ell.to_vec(), inner: Box::new(scaled) }, dim, norm))
}

/// x ↦ b(x + z₀); the zone moves by −z₀.
pub fn translate(spec: EntropySpec, z0: &[f64]) -> Result<EntropySpec> {
    check_dim(z0, spec.dim)?;
    let (dim, norm) = (spec.dim, spec.norm);
    Ok(EntropySpec::from_node(Node::Translated { z0: z0.to_vec(), inner: Box::new(spec) }, dim, norm))
}

/// Σ w_k b_k over members sharing dimension and norm.
pub fn sum_of(members: Vec<(f64, EntropySpec)>) -> Result<EntropySpec> {
    let first = members
        .first()
        .ok_or_else(|| Error::InvalidParameter("sum needs at least one member".into()))?;
    let (dim, norm) = (first.1.dim, first.1.norm);
    for (w, m) in &members {
        if !(*w > 0.0) || !w.is_finite() {
            return Err(Error::NonpositiveLambda(*w));
        }
        if m.dim != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: m.dim });
        }
        if m.norm != norm {
            return Err(Error::InvalidParameter("sum members must share the ambient norm".into()));
        }
    }
    Ok(EntropySpec::from_node(Node::SumOf(members), dim, norm))
}

/// Block-separable b(x) = Σ b_i(x_i) on the product space, with ‖·‖_# = (Σ‖x_i‖²)^{1/2}
/// required to dominate c·`norm`. The domination is checked on seeded samples.
pub fn direct_sum(blocks: Vec<EntropySpec>, c: f64, norm: NormSpec) -> Result<EntropySpec> {
    if blocks.is_empty() {
        return Err(Error::InvalidParameter("direct sum needs at least one block".into()));
    }
    if !(c > 0.0) || !c.is_finite() {
        return Err(Error::InvalidParameter(format!("semi-equivalence constant must be positive, got {c}")));
    }
    let dim: usize = blocks.iter().map(|b| b.dim).sum();
    if norm.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: norm.dim() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEMI_EQUIVALENCE_SEED);
    let mut v = vec![0.0; dim];
    for i in 0..SEMI_EQUIVALENCE_SAMPLES {
        let active = i % (blocks.len() + 1);
        let mut off = 0;
        for (k, b) in blocks.iter().enumerate() {
            for c in &mut v[off..off + b.dim] {
                *c = if active == 0 || active == k + 1 { rng.gen_range(-1.0..1.0) } else { 0.0 };
            }
            off += b.dim;
        }
        let sharp = sharp_norm(&blocks, &v);
        let scaled = c * norm.eval_unchecked(&v);
        if sharp < scaled - 1e-12 * scaled.max(1.0) {
            return Err(Error::SemiEquivalenceViolated { sharp, scaled });
        }
    }
    Ok(EntropySpec::from_node(Node::DirectSum { blocks, c }, dim, norm))
}

pub(crate) fn sharp_norm(blocks: &[EntropySpec], v: &[f64]) -> f64 {
    let mut off = 0;
    let mut sq = 0.0;
    for b in blocks {
        let n = b.norm.eval_unchecked(&v[off..off + b.dim]);
        sq += n * n;
        off += b.dim;
    }
    sq.sqrt()
}
