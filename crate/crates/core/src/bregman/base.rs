//! Closed-form formulas for the catalog entropies.

use crate::error::{Error, Result};
use crate::numerics::{dot, log_term, pow_term, sub, xlogx_term};

use super::DomainStatus;

const EXP_SQUARE_LIMIT: f64 = 700.0;

#[derive(Debug, Clone, PartialEq)]
pub enum Base {
    /// Σ x log x on the closed orthant.
    Bgs,
    /// Tsallis-type power entropy, q ∉ {0, 1}.
    Hct { q: f64 },
    /// −Σ log x on the open orthant.
    Burg,
    /// −Σ log log x on (1, ∞)ⁿ.
    IteratedLog,
    /// β ≥ 0; β = 0 and β = 1 are the Itakura-Saito and Kullback-Leibler limits.
    Beta { beta: f64 },
    /// Σ (x^α − x^β) with α ≥ 1, β ∈ (0, 1).
    AlphaBeta { alpha: f64, beta: f64 },
    /// ½‖x‖_p², p ∈ (1, 2].
    L2Lp { p: f64 },
    /// ½⟨Ax, x⟩ with A symmetric positive definite, stored row-major.
    Quadratic { a: Vec<f64>, min_eigenvalue: f64 },
    /// Σ_i (e^{(x_{2i−1}+x_{2i})²} + e^{(x_{2i−1}−x_{2i})²} − 2); `n_split` only selects the native norm.
    Ell2Type { n_split: usize },
}

/// Shape of dom(b).
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum DomainShape {
    ClosedOrthant,
    OpenOrthant,
    /// x_k > 1 for all k.
    AboveOne,
    Whole,
}

impl Base {
    pub(crate) fn shape(&self) -> DomainShape {
        match *self {
            Base::Bgs | Base::AlphaBeta { .. } => DomainShape::ClosedOrthant,
            Base::Hct { q } if q > 0.0 => DomainShape::ClosedOrthant,
            Base::Hct { .. } | Base::Burg => DomainShape::OpenOrthant,
            Base::Beta { beta } if beta > 0.0 => DomainShape::ClosedOrthant,
            Base::Beta { .. } => DomainShape::OpenOrthant,
            Base::IteratedLog => DomainShape::AboveOne,
            Base::L2Lp { .. } | Base::Quadratic { .. } | Base::Ell2Type { .. } => DomainShape::Whole,
        }
    }

    pub(crate) fn validate(&self, dim: usize) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        match *self {
            Base::Hct { q } if !q.is_finite() || q == 0.0 || q == 1.0 => bad(format!("HCT requires q outside {{0, 1}}, got {q}")),
            Base::Beta { beta } if !(beta >= 0.0) || !beta.is_finite() => bad(format!("beta entropy requires beta >= 0, got {beta}")),
            Base::AlphaBeta { alpha, beta } if !(alpha >= 1.0) || !alpha.is_finite() || !(beta > 0.0 && beta < 1.0) => {
                bad(format!("(alpha, beta)-entropy requires alpha >= 1 and beta in (0, 1), got ({alpha}, {beta})"))
            }
            Base::L2Lp { p } if !(p > 1.0 && p <= 2.0) => bad(format!("l2-lp entropy requires p in (1, 2], got {p}")),
            Base::Quadratic { ref a, min_eigenvalue } => {
                if a.len() != dim * dim {
                    return bad(format!("quadratic matrix has {} entries, expected {}", a.len(), dim * dim));
                }
                if !(min_eigenvalue > 0.0) {
                    return bad(format!("quadratic matrix is not positive definite (min eigenvalue {min_eigenvalue})"));
                }
                Ok(())
            }
            Base::Ell2Type { n_split } => {
                if dim % 2 != 0 || dim == 0 {
                    return bad(format!("l2-type entropy needs an even dimension, got {dim}"));
                }
                if n_split > dim / 2 {
                    return bad(format!("n_split {n_split} exceeds pair count {}", dim / 2));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    pub(crate) fn classify(&self, x: &[f64]) -> DomainStatus {
        match self.shape() {
            DomainShape::Whole => DomainStatus::Interior,
            DomainShape::AboveOne => {
                if x.iter().all(|&c| c > 1.0) {
                    DomainStatus::Interior
                } else {
                    DomainStatus::OutsideDomain
                }
            }
            DomainShape::OpenOrthant => {
                if x.iter().all(|&c| c > 0.0) {
                    DomainStatus::Interior
                } else {
                    DomainStatus::OutsideDomain
                }
            }
            DomainShape::ClosedOrthant => {
                if x.iter().any(|&c| c < 0.0) {
                    DomainStatus::OutsideDomain
                } else if x.iter().all(|&c| c > 0.0) {
                    DomainStatus::Interior
                } else {
                    DomainStatus::BoundaryInDomain
                }
            }
        }
    }

    /// b(x) for x ∈ dom(b).
    pub(crate) fn value(&self, x: &[f64]) -> Result<f64> {
        Ok(match *self {
            Base::Bgs => x.iter().map(|&t| if t == 0.0 { 0.0 } else { t * t.ln() }).sum(),
            Base::Hct { q } => {
                let coef = if q > 0.0 { 1.0 / (q - 1.0) } else { 1.0 / (1.0 - q) };
                coef * x.iter().map(|&t| t.powf(q) - 1.0).sum::<f64>()
            }
            Base::Burg => -x.iter().map(|t| t.ln()).sum::<f64>(),
            Base::IteratedLog => -x.iter().map(|t| t.ln().ln()).sum::<f64>(),
            Base::Beta { beta } => beta_value(beta, x),
            Base::AlphaBeta { alpha, beta } => x.iter().map(|&t| t.powf(alpha) - t.powf(beta)).sum(),
            Base::L2Lp { p } => {
                let n = lp_norm(p, x);
                0.5 * n * n
            }
            Base::Quadratic { ref a, .. } => 0.5 * dot(&mat_vec(a, x), x),
            Base::Ell2Type { .. } => {
                let mut sum = 0.0;
                for pair in x.chunks_exact(2) {
                    let (s, d) = sum_diff(pair)?;
                    sum += (s * s).exp_m1() + (d * d).exp_m1();
                }
                sum
            }
        })
    }

    /// b′(x) for x in the zone.
    pub(crate) fn grad(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(match *self {
            Base::Bgs => x.iter().map(|t| t.ln() + 1.0).collect(),
            Base::Hct { q } => {
                let coef = q.abs() / (q - 1.0);
                x.iter().map(|t| coef * t.powf(q - 1.0)).collect()
            }
            Base::Burg => x.iter().map(|t| -1.0 / t).collect(),
            Base::IteratedLog => x.iter().map(|t| -1.0 / (t * t.ln())).collect(),
            Base::Beta { beta } => x
                .iter()
                .map(|&t| {
                    if beta == 1.0 {
                        t.ln()
                    } else if beta == 0.0 {
                        1.0 - 1.0 / t
                    } else {
                        (t.powf(beta - 1.0) - 1.0) / (beta - 1.0)
                    }
                })
                .collect(),
            Base::AlphaBeta { alpha, beta } => x
                .iter()
                .map(|&t| alpha * t.powf(alpha - 1.0) - beta * t.powf(beta - 1.0))
                .collect(),
            Base::L2Lp { p } => {
                let n = lp_norm(p, x);
                if n == 0.0 {
                    vec![0.0; x.len()]
                } else {
                    let scale = n.powf(2.0 - p);
                    x.iter().map(|&t| t.signum() * t.abs().powf(p - 1.0) * scale).collect()
                }
            }
            Base::Quadratic { ref a, .. } => mat_vec(a, x),
            Base::Ell2Type { .. } => {
                let mut g = Vec::with_capacity(x.len());
                for pair in x.chunks_exact(2) {
                    let (s, d) = sum_diff(pair)?;
                    let es = s * (s * s).exp();
                    let ed = d * (d * d).exp();
                    g.push(2.0 * (es + ed));
                    g.push(2.0 * (es - ed));
                }
                g
            }
        })
    }

    /// b″(x)(w, w) for x in the zone.
    pub(crate) fn hessian_quadform(&self, x: &[f64], w: &[f64]) -> Result<f64> {
        let diag = |f: &dyn Fn(f64) -> f64| -> f64 { x.iter().zip(w).map(|(&t, &v)| f(t) * v * v).sum() };
        Ok(match *self {
            Base::Bgs => diag(&|t| 1.0 / t),
            Base::Hct { q } => diag(&|t| q.abs() * t.powf(q - 2.0)),
            Base::Burg => diag(&|t| 1.0 / (t * t)),
            Base::IteratedLog => diag(&|t| {
                let zl = t * t.ln();
                (1.0 / zl) * (1.0 / zl + 1.0 / t)
            }),
            Base::Beta { beta } => diag(&|t| t.powf(beta - 2.0)),
            Base::AlphaBeta { alpha, beta } => diag(&|t| {
                let big = if alpha == 1.0 { 0.0 } else { alpha * (alpha - 1.0) * t.powf(alpha - 2.0) };
                big + beta * (1.0 - beta) * t.powf(beta - 2.0)
            }),
            Base::L2Lp { p } => l2lp_hessian(p, x, w),
            Base::Quadratic { ref a, .. } => dot(&mat_vec(a, w), w),
            Base::Ell2Type { .. } => {
                let mut sum = 0.0;
                for (pair, wp) in x.chunks_exact(2).zip(w.chunks_exact(2)) {
                    let (s, d) = sum_diff(pair)?;
                    let ws = wp[0] + wp[1];
                    let wd = wp[0] - wp[1];
                    sum += 2.0 * (s * s).exp() * (1.0 + 2.0 * s * s) * ws * ws
                        + 2.0 * (d * d).exp() * (1.0 + 2.0 * d * d) * wd * wd;
                }
                sum
            }
        })
    }

    /// Closed-form B(x, y) for x ∈ dom(b), y in the zone.
    pub(crate) fn divergence(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        let terms = |f: &dyn Fn(f64, f64) -> f64| -> f64 { x.iter().zip(y).map(|(&a, &b)| f(a, b)).sum() };
        Ok(match *self {
            Base::Bgs => terms(&kl_term),
            Base::Hct { q } => {
                let coef = if q > 0.0 { 1.0 / (q - 1.0) } else { 1.0 / (1.0 - q) };
                coef * terms(&|a, b| b.powf(q) * pow_term((a - b) / b, q))
            }
            Base::Burg => terms(&|a, b| log_term((a - b) / b)),
            Base::IteratedLog => terms(&|a, b| {
                let ly = b.ln();
                let rho = (a - b) / b;
                let u = rho.ln_1p() / ly;
                log_term(rho) / ly + log_term(u)
            }),
            Base::Beta { beta } => {
                if beta == 1.0 {
                    terms(&kl_term)
                } else if beta == 0.0 {
                    terms(&|a, b| log_term((a - b) / b))
                } else {
                    terms(&|a, b| b.powf(beta) * pow_term((a - b) / b, beta)) / (beta * (beta - 1.0))
                }
            }
            Base::AlphaBeta { alpha, beta } => terms(&|a, b| {
                let r = (a - b) / b;
                let big = if alpha == 1.0 { 0.0 } else { b.powf(alpha) * pow_term(r, alpha) };
                big - b.powf(beta) * pow_term(r, beta)
            }),
            Base::L2Lp { p } => {
                let nx = lp_norm(p, x);
                let ny = lp_norm(p, y);
                let g = self.grad(y)?;
                0.5 * nx * nx - 0.5 * ny * ny - dot(&g, &sub(x, y))
            }
            Base::Quadratic { ref a, .. } => {
                let d = sub(x, y);
                0.5 * dot(&mat_vec(a, &d), &d)
            }
            Base::Ell2Type { .. } => {
                let mut sum = 0.0;
                for (px, py) in x.chunks_exact(2).zip(y.chunks_exact(2)) {
                    let (sx, dx) = sum_diff(px)?;
                    let (sy, dy) = sum_diff(py)?;
                    sum += exp_square_gap(sx, sy) + exp_square_gap(dx, dy);
                }
                sum
            }
        })
    }
}

fn kl_term(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        b
    } else {
        b * xlogx_term((a - b) / b)
    }
}

fn beta_value(beta: f64, x: &[f64]) -> f64 {
    if beta == 1.0 {
        x.iter().map(|&t| if t == 0.0 { 1.0 } else { t * t.ln() - t + 1.0 }).sum()
    } else if beta == 0.0 {
        x.iter().map(|&t| t - t.ln() + 1.0).sum()
    } else {
        let c = 1.0 / (beta * (beta - 1.0));
        c * x.iter().map(|&t| t.powf(beta) - beta * t + beta - 1.0).sum::<f64>()
    }
}

pub(crate) fn lp_norm(p: f64, x: &[f64]) -> f64 {
    let m = x.iter().fold(0.0f64, |m, t| m.max(t.abs()));
    if m == 0.0 {
        return 0.0;
    }
    m * x.iter().map(|t| (t.abs() / m).powf(p)).sum::<f64>().powf(1.0 / p)
}

fn l2lp_hessian(p: f64, x: &[f64], w: &[f64]) -> f64 {
    let n = lp_norm(p, x);
    if n == 0.0 {
        let nw = lp_norm(p, w);
        return nw * nw;
    }
    let mut cross = 0.0;
    let mut diag = 0.0;
    for (&t, &v) in x.iter().zip(w) {
        if v == 0.0 {
            continue;
        }
        if t == 0.0 && p < 2.0 {
            return f64::INFINITY;
        }
        cross += t.signum() * t.abs().powf(p - 1.0) * v;
        diag += t.abs().powf(p - 2.0) * v * v;
    }
    (2.0 - p) * n.powf(2.0 - 2.0 * p) * cross * cross + (p - 1.0) * n.powf(2.0 - p) * diag
}

fn mat_vec(a: &[f64], x: &[f64]) -> Vec<f64> {
    a.chunks_exact(x.len()).map(|row| dot(row, x)).collect()
}

fn sum_diff(pair: &[f64]) -> Result<(f64, f64)> {
    let s = pair[0] + pair[1];
    let d = pair[0] - pair[1];
    for t in [s, d] {
        if t * t > EXP_SQUARE_LIMIT {
            return Err(Error::Overflow(t * t));
        }
    }
    Ok((s, d))
}

/// φ(a) − φ(b) − φ′(b)(a − b) for φ(t) = e^{t²} − 1.
fn exp_square_gap(a: f64, b: f64) -> f64 {
    (a * a).exp_m1() - (b * b).exp_m1() - 2.0 * b * (b * b).exp() * (a - b)
}
