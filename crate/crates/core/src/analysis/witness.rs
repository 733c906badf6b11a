//! Explicit pairs along which uniform or strong convexity fails.

use crate::bregman::EntropySpec;
use crate::error::{check_dim, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UcKind {
    Bgs,
    HctHalf,
    Burg,
    IterLog,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UcWitness {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub b_expected: f64,
}

impl UcKind {
    pub fn spec(self, dim: usize) -> EntropySpec {
        match self {
            UcKind::Bgs => EntropySpec::bgs(dim),
            UcKind::HctHalf => EntropySpec::hct(0.5, dim).expect("valid q"),
            UcKind::Burg => EntropySpec::burg(dim),
            UcKind::IterLog => EntropySpec::iterated_log(dim),
        }
    }
}

/// Pair (x(s), y(s)) whose divergence tends to 0 while ‖x − y‖ does not.
pub fn uc_failure_witness(kind: UcKind, s: f64, dim: usize) -> Result<UcWitness> {
    if dim == 0 {
        return Err(Error::InvalidParameter("dimension must be at least 1".into()));
    }
    let lowest = if kind == UcKind::IterLog { s > 1.0 } else { s >= 1.0 };
    if !lowest || !s.is_finite() {
        return Err(Error::SOutOfRange(s));
    }
    let pad = if kind == UcKind::IterLog { 2.0 } else { 1.0 };
    let mut x = vec![pad; dim];
    let mut y = vec![pad; dim];
    let b_expected = match kind {
        UcKind::Bgs => {
            x[0] = s;
            y[0] = s + 1.0;
            1.0 - s * (1.0 / s).ln_1p()
        }
        UcKind::Burg => {
            x[0] = s;
            y[0] = s + 1.0;
            (1.0 / s).ln_1p() - 1.0 / (s + 1.0)
        }
        UcKind::IterLog => {
            x[0] = s;
            y[0] = s + 1.0;
            ((1.0 / s).ln_1p() / s.ln()).ln_1p() - 1.0 / ((s + 1.0) * (s + 1.0).ln())
        }
        UcKind::HctHalf => {
            x[0] = s + s.sqrt();
            y[0] = s;
            let u = 1.0 / s.sqrt();
            let root = (1.0 + u).sqrt();
            // (root − 1)/(root + 1) with the numerator written as u/(root + 1)
            u / ((root + 1.0) * (root + 1.0))
        }
    };
    Ok(UcWitness { x, y, b_expected })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScWitness {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// B(x, y)/(½‖x − y‖₂²) from the divergence.
    pub ratio: f64,
    /// The same ratio from its closed form.
    pub ratio_closed: f64,
}

/// Pairs showing HCT(q) has no strong-convexity parameter on the open orthant.
/// `param` is ε ∈ (0, 1) for q > 2 and y₁ > 1 for q ∈ (0, 2) \ {1}.
pub fn sc_failure_witness(q: f64, param: f64, dim: usize) -> Result<ScWitness> {
    if dim == 0 {
        return Err(Error::InvalidParameter("dimension must be at least 1".into()));
    }
    let mut x = vec![1.0; dim];
    let mut y = vec![1.0; dim];
    let ratio_closed = if q > 2.0 {
        if !(param > 0.0 && param < 1.0) {
            return Err(Error::InvalidParameter(format!("epsilon must lie in (0, 1), got {param}")));
        }
        x[0] = 2.0 * param;
        y[0] = param;
        2.0 * (2f64.powf(q) - 1.0 - q) * param.powf(q - 2.0) / (q - 1.0)
    } else if q > 0.0 && q < 2.0 && q != 1.0 {
        if !(param > 1.0) || !param.is_finite() {
            return Err(Error::InvalidParameter(format!("y1 must exceed 1, got {param}")));
        }
        y[0] = param;
        let d = 1.0 - param;
        (1.0 - param.powf(q) - q * param.powf(q - 1.0) * d) / (0.5 * (q - 1.0) * d * d)
    } else {
        return Err(Error::QOutOfRange(q));
    };
    let spec = EntropySpec::hct(q, dim)?;
    let b = spec.divergence_closed(&x, &y)?.to_f64();
    let d = x[0] - y[0];
    Ok(ScWitness { x, y, ratio: b / (0.5 * d * d), ratio_closed })
}

/// For q < 0: a t₀ with (t₀, ∞)ⁿ inside the level set {y : B(x, y) ≤ γ}.
pub fn hct_negq_levelset_witness(q: f64, x: &[f64], gamma: f64) -> Result<f64> {
    if !(q < 0.0) {
        return Err(Error::QOutOfRange(q));
    }
    check_dim(x, x.len())?;
    if x.is_empty() || x.iter().any(|&v| v < 1.0) {
        return Err(Error::InvalidParameter("x must lie in [1, inf)^n".into()));
    }
    let n = x.len() as f64;
    let bound = x.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(n * v.powf(q) / (1.0 - q)));
    if !(gamma > bound) {
        return Err(Error::GammaTooSmall { gamma, bound });
    }
    let level = gamma / n;
    // per coordinate f(t) = (x^q − t^q − q t^{q−1}(x − t))/(1 − q) falls on (0, x] and rises to x^q/(1 − q) < γ/n
    let mut t0: f64 = 0.0;
    for &xk in x {
        let f = |t: f64| (xk.powf(q) - t.powf(q) - q * t.powf(q - 1.0) * (xk - t)) / (1.0 - q);
        let (mut lo, mut hi) = (0.0f64, xk);
        let mut probe = xk;
        while f(probe) <= level {
            probe *= 0.5;
            if probe == 0.0 {
                break;
            }
        }
        if probe > 0.0 {
            lo = probe;
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if f(mid) > level {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
        }
        t0 = t0.max(hi.next_up().max(lo));
    }
    Ok(t0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn uc_examples() {
        let w = uc_failure_witness(UcKind::Bgs, 10.0, 2).unwrap();
        assert!((w.b_expected - 0.0468982019567514).abs() < 1e-13);
        let w = uc_failure_witness(UcKind::Burg, 1.0, 1).unwrap();
        assert!((w.b_expected - (2f64.ln() - 0.5)).abs() < 1e-15);
        let w = uc_failure_witness(UcKind::HctHalf, 1.0, 1).unwrap();
        let r2 = 2f64.sqrt();
        assert!((w.b_expected - (r2 - 1.0) / (r2 + 1.0)).abs() < 1e-15);
        assert!(uc_failure_witness(UcKind::IterLog, 1.0, 1).is_err());
        assert!(uc_failure_witness(UcKind::Bgs, 0.5, 1).is_err());
    }

    #[test]
    fn uc_witnesses_match_generic_divergence() {
        for kind in [UcKind::Bgs, UcKind::HctHalf, UcKind::Burg, UcKind::IterLog] {
            for s in [1.5, 3.0, 10.0, 50.0, 100.0] {
                let w = uc_failure_witness(kind, s, 3).unwrap();
                let spec = kind.spec(3);
                let g = spec.divergence_generic(&w.x, &w.y).unwrap().to_f64();
                let c = spec.divergence_closed(&w.x, &w.y).unwrap().to_f64();
                assert!(rel(g, w.b_expected) < 1e-9, "{kind:?} {s} {g} {}", w.b_expected);
                assert!(rel(c, w.b_expected) < 1e-9, "{kind:?} {s}");
            }
        }
    }

    #[test]
    fn uc_witnesses_match_closed_divergence_for_large_s() {
        for kind in [UcKind::Bgs, UcKind::HctHalf, UcKind::Burg, UcKind::IterLog] {
            for k in 3..=6 {
                let s = 10f64.powi(k);
                let w = uc_failure_witness(kind, s, 2).unwrap();
                let c = kind.spec(2).divergence_closed(&w.x, &w.y).unwrap().to_f64();
                assert!(rel(c, w.b_expected) < 1e-9, "{kind:?} {s} {c} {}", w.b_expected);
            }
        }
    }

    #[test]
    fn sc_examples() {
        let w = sc_failure_witness(3.0, 0.01, 2).unwrap();
        assert!((w.ratio_closed - 0.04).abs() < 1e-15);
        assert!(rel(w.ratio, w.ratio_closed) < 1e-9);
        let half = sc_failure_witness(3.0, 0.005, 2).unwrap();
        assert!(rel(half.ratio, 0.02) < 1e-9);
        let a = sc_failure_witness(1.5, 1e2, 2).unwrap();
        let b = sc_failure_witness(1.5, 1e4, 2).unwrap();
        assert!(b.ratio < a.ratio);
        assert!(rel(b.ratio, b.ratio_closed) < 1e-9);
        assert!(sc_failure_witness(1.0, 2.0, 1).is_err());
        assert!(sc_failure_witness(-1.0, 2.0, 1).is_err());
    }

    #[test]
    fn negq_examples() {
        let spec = EntropySpec::hct(-1.0, 1).unwrap();
        let t0 = hct_negq_levelset_witness(-1.0, &[1.0], 1.0).unwrap();
        assert!(t0.is_finite() && t0 > 0.0 && t0 < 1.0);
        assert!(spec.divergence_closed(&[1.0], &[1e6]).unwrap().to_f64() <= 1.0);
        assert!(spec.divergence_closed(&[1.0], &[t0 * (1.0 + 1e-9)]).unwrap().to_f64() <= 1.0);
        let t1 = hct_negq_levelset_witness(-1.0, &[1.0], 2.0).unwrap();
        assert!(t1 <= t0);
        let spec2 = EntropySpec::hct(-1.0, 2).unwrap();
        let t = hct_negq_levelset_witness(-1.0, &[2.0, 2.0], 2.0).unwrap();
        assert!(spec2.divergence_closed(&[2.0, 2.0], &[t + 1.0, t + 1.0]).unwrap().to_f64() <= 2.0);
        assert!(matches!(
            hct_negq_levelset_witness(-1.0, &[1.0], 0.4),
            Err(Error::GammaTooSmall { .. })
        ));
    }
}
