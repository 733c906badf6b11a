//! Norms on ℝⁿ and their comparison constants with ‖·‖₂ and ‖·‖∞.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{check_dim, Error, Result};
use crate::numerics::{norm2, norm_inf};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormKind {
    /// p ∈ [1, ∞]; `f64::INFINITY` is the max norm.
    Lp(f64),
    /// ℓ₁ on the first `l1_coords` coordinates plus ℓ₂ on the rest.
    MixedL1L2 { l1_coords: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormSpec {
    kind: NormKind,
    dim: usize,
}

/// `c2·‖v‖ ≤ ‖v‖₂`, `‖v‖∞ ≤ c_inf·‖v‖`, `‖v‖ ≤ gamma·‖v‖∞`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquivalenceConstants {
    pub c2: f64,
    pub c_inf: f64,
    pub gamma: f64,
}

impl NormSpec {
    pub fn lp(p: f64, dim: usize) -> Result<Self> {
        if !(p >= 1.0) {
            return Err(Error::InvalidParameter(format!("norm exponent p must be in [1, inf], got {p}")));
        }
        Self::new(NormKind::Lp(p), dim)
    }

    pub fn euclidean(dim: usize) -> Self {
        Self::lp(2.0, dim).expect("valid euclidean norm")
    }

    pub fn mixed(l1_coords: usize, dim: usize) -> Result<Self> {
        if l1_coords > dim {
            return Err(Error::InvalidParameter(format!(
                "mixed norm split {l1_coords} exceeds dimension {dim}"
            )));
        }
        Self::new(NormKind::MixedL1L2 { l1_coords }, dim)
    }

    fn new(kind: NormKind, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be at least 1".into()));
        }
        Ok(Self { kind, dim })
    }

    pub fn kind(&self) -> NormKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Same family on a different dimension; the mixed split is clamped.
    pub fn with_dim(&self, dim: usize) -> Result<Self> {
        match self.kind {
            NormKind::Lp(p) => Self::lp(p, dim),
            NormKind::MixedL1L2 { l1_coords } => Self::mixed(l1_coords.min(dim), dim),
        }
    }

    pub fn eval(&self, v: &[f64]) -> Result<f64> {
        check_dim(v, self.dim)?;
        Ok(self.eval_unchecked(v))
    }

    pub(crate) fn eval_unchecked(&self, v: &[f64]) -> f64 {
        match self.kind {
            NormKind::Lp(p) if p == 1.0 => v.iter().map(|x| x.abs()).sum(),
            NormKind::Lp(p) if p == 2.0 => norm2(v),
            NormKind::Lp(p) if p.is_infinite() => norm_inf(v),
            NormKind::Lp(p) => {
                // scale by the max entry to avoid overflow in |x|^p
                let m = norm_inf(v);
                if m == 0.0 {
                    return 0.0;
                }
                m * v.iter().map(|x| (x.abs() / m).powf(p)).sum::<f64>().powf(1.0 / p)
            }
            NormKind::MixedL1L2 { l1_coords } => {
                let (head, tail) = v.split_at(l1_coords);
                head.iter().map(|x| x.abs()).sum::<f64>() + norm2(tail)
            }
        }
    }

    pub fn equivalence_constants(&self) -> EquivalenceConstants {
        let n = self.dim as f64;
        match self.kind {
            NormKind::Lp(p) => {
                let c2 = if p >= 2.0 { 1.0 } else { n.powf(0.5 - 1.0 / p) };
                let gamma = if p.is_infinite() { 1.0 } else { n.powf(1.0 / p) };
                EquivalenceConstants { c2, c_inf: 1.0, gamma }
            }
            NormKind::MixedL1L2 { l1_coords } => {
                let c2 = if l1_coords == 0 {
                    1.0
                } else {
                    let pairs = (l1_coords as f64 / 2.0).max(1.0);
                    1.0 / (2.0 * pairs.sqrt())
                };
                let gamma = l1_coords as f64 + ((self.dim - l1_coords) as f64).sqrt();
                EquivalenceConstants { c2, c_inf: 1.0, gamma }
            }
        }
    }
}

impl EquivalenceConstants {
    /// Largest violation of the three inequalities over seeded random vectors
    /// (negative or zero means all held).
    pub fn worst_violation(&self, norm: &NormSpec, samples: usize, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = f64::NEG_INFINITY;
        let mut v = vec![0.0; norm.dim];
        for i in 0..samples {
            for (k, c) in v.iter_mut().enumerate() {
                *c = match i % 4 {
                    0 => rng.gen_range(-1.0..1.0),
                    1 => if rng.gen_bool(0.5) { 1.0 } else { -1.0 },
                    2 => if k == i % norm.dim { 1.0 } else { 0.0 },
                    _ => rng.gen_range(-1.0..1.0) * 10f64.powf(rng.gen_range(-3.0..3.0)),
                };
            }
            let nv = norm.eval_unchecked(&v);
            let tol = 1e-12 * nv.max(1.0);
            worst = worst
                .max(self.c2 * nv - norm2(&v) - tol)
                .max(norm_inf(&v) - self.c_inf * nv - tol)
                .max(nv - self.gamma * norm_inf(&v) - tol);
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm_examples() {
        assert_eq!(NormSpec::euclidean(2).eval(&[3.0, 4.0]).unwrap(), 5.0);
        assert_eq!(NormSpec::lp(1.0, 3).unwrap().eval(&[1.0, -2.0, 3.0]).unwrap(), 6.0);
        let m = NormSpec::mixed(2, 4).unwrap();
        assert_eq!(m.eval(&[1.0, 1.0, 3.0, 4.0]).unwrap(), 7.0);
    }

    #[test]
    fn general_p_matches_definition() {
        let n = NormSpec::lp(3.0, 3).unwrap();
        let v = [1.0, -2.0, 0.5];
        let direct = (1.0f64 + 8.0 + 0.125).powf(1.0 / 3.0);
        assert!((n.eval(&v).unwrap() - direct).abs() < 1e-15);
    }

    #[test]
    fn constants_examples() {
        let c = NormSpec::lp(1.0, 4).unwrap().equivalence_constants();
        assert_eq!((c.c2, c.c_inf, c.gamma), (0.5, 1.0, 4.0));
        let c = NormSpec::euclidean(5).equivalence_constants();
        assert_eq!((c.c2, c.c_inf), (1.0, 1.0));
        assert!((c.gamma - 5f64.sqrt()).abs() < 1e-15);
        let c = NormSpec::lp(f64::INFINITY, 3).unwrap().equivalence_constants();
        assert_eq!((c.c2, c.c_inf, c.gamma), (1.0, 1.0, 1.0));
    }

    #[test]
    fn constants_hold_on_samples() {
        let norms = [
            NormSpec::lp(1.0, 4).unwrap(),
            NormSpec::lp(1.5, 5).unwrap(),
            NormSpec::euclidean(5),
            NormSpec::lp(3.0, 2).unwrap(),
            NormSpec::lp(f64::INFINITY, 3).unwrap(),
            NormSpec::mixed(0, 4).unwrap(),
            NormSpec::mixed(1, 3).unwrap(),
            NormSpec::mixed(4, 16).unwrap(),
            NormSpec::mixed(16, 16).unwrap(),
        ];
        for n in norms {
            let c = n.equivalence_constants();
            assert!(c.worst_violation(&n, 10_000, 42) <= 0.0, "{n:?}");
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(NormSpec::lp(0.5, 2).is_err());
        assert!(NormSpec::lp(f64::NAN, 2).is_err());
        assert!(NormSpec::mixed(3, 2).is_err());
        assert!(NormSpec::euclidean(2).eval(&[1.0]).is_err());
    }
}
