//! Level-set diameters, limiting differences and gradient blow-up at the boundary.

use super::sampler::sample_sphere;
use super::{ProbeReport, Sampler, Tally, Witness};
use crate::bregman::{DomainStatus, EntropySpec};
use crate::entropies::{documented_gauge, Region};
use crate::error::{check_dim, Error, Result};
use crate::numerics::{norm2, sub};

/// i = 1, 2, 5, 10, …, 10⁴.
pub const LIMITING_STEPS: [u64; 13] = [1, 2, 5, 10, 20, 50, 100, 200, 500, 1000, 2000, 5000, 10000];

/// i = 10ᵏ for k = 0, …, 12.
pub const BLOWUP_STEPS: [u64; 13] = [
    1,
    10,
    100,
    1_000,
    10_000,
    100_000,
    1_000_000,
    10_000_000,
    100_000_000,
    1_000_000_000,
    10_000_000_000,
    100_000_000_000,
    1_000_000_000_000,
];

const RAY_ITERATIONS: usize = 64;
const RAY_PRECISION: f64 = 1e-9;
const RAY_CAP_DOUBLINGS: usize = 60;

#[derive(Debug, Clone, PartialEq)]
pub struct LevelSetOutcome {
    pub report: ProbeReport,
    /// Largest distance between two sampled points of the level set.
    pub diameter: f64,
    /// max{2ψ⁻¹(γ), 2r, ψ⁻¹(γ) + r + ‖x‖} from the documented gauge.
    pub bound: f64,
}

/// Samples the boundary of {y ∈ U : B(x, y) ≤ γ} by ray bisection from x and
/// compares the sampled diameter with the gauge bound.
pub fn levelset_probe(spec: &EntropySpec, x: &[f64], gamma: f64, sampler: &Sampler) -> Result<LevelSetOutcome> {
    if !(gamma >= 0.0) || !gamma.is_finite() {
        return Err(Error::InvalidParameter(format!("gamma must be finite and nonnegative, got {gamma}")));
    }
    let (gauge, pair) = documented_gauge(spec, x)?;
    let inv = gauge
        .inverse(gamma)
        .ok_or_else(|| Error::NoDocumentedGauge(format!("the gauge of {} has no inverse", spec.name())))?;
    let r = match pair.s2 {
        Region::Exterior { radius } => radius,
        _ => 0.0,
    };
    let norm = spec.norm();
    let nx = norm.eval_unchecked(x);
    let bound = (2.0 * inv).max(2.0 * r).max(inv + r + nx);

    let member = |y: &[f64]| -> Result<bool> {
        if spec.classify(y)? != DomainStatus::Interior {
            return Ok(false);
        }
        Ok(spec.divergence_closed(x, y)?.to_f64() <= gamma)
    };
    let along = |u: &[f64], t: f64| -> Vec<f64> { x.iter().zip(u).map(|(a, b)| a + t * b).collect() };

    let mut rng = sampler.rng();
    let mut tally = Tally::new(format!("levelset/{}", spec.name()), sampler.seed);
    let mut points: Vec<Vec<f64>> = vec![x.to_vec()];
    let mut diameter: f64 = 0.0;
    for _ in 0..sampler.count {
        let u = sample_sphere(norm, &mut rng);
        let mut hi = 1.0;
        let mut unbounded = true;
        for _ in 0..RAY_CAP_DOUBLINGS {
            if !member(&along(&u, hi))? {
                unbounded = false;
                break;
            }
            hi *= 2.0;
        }
        let t = if unbounded {
            f64::INFINITY
        } else {
            let mut lo = 0.0;
            for _ in 0..RAY_ITERATIONS {
                if hi - lo <= RAY_PRECISION * hi.max(1.0) {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                if member(&along(&u, mid))? {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            lo
        };
        let y = if t.is_finite() { along(&u, t) } else { vec![f64::INFINITY; x.len()] };
        let widest = if t.is_finite() {
            points.iter().map(|p| norm.eval_unchecked(&sub(p, &y))).fold(0.0, f64::max)
        } else {
            f64::INFINITY
        };
        diameter = diameter.max(widest);
        tally.record(bound + 1e-6 - widest, || Witness::new(&[("x", x), ("direction", &u), ("t", &[t])]));
        if t.is_finite() {
            points.push(y);
        }
    }
    Ok(LevelSetOutcome { report: tally.finish(), diameter, bound })
}

/// d_i = B(x, y_i) − B(y, y_i) along y_i = y + v/i: the error |d_i − B(x, y)| must not grow,
/// and the last one must be within tol·max(1, |B(x, y)|).
pub fn limiting_difference_probe(
    spec: &EntropySpec,
    x: &[f64],
    y: &[f64],
    v: &[f64],
    steps: &[u64],
    tol: f64,
) -> Result<ProbeReport> {
    let n = spec.dim();
    check_dim(x, n)?;
    check_dim(y, n)?;
    check_dim(v, n)?;
    if steps.is_empty() {
        return Err(Error::InvalidParameter("no steps given".into()));
    }
    if spec.classify(x)? == DomainStatus::OutsideDomain {
        return Err(Error::InvalidParameter("x must lie in dom(b)".into()));
    }
    if spec.classify(y)? != DomainStatus::Interior {
        return Err(Error::NotInZone);
    }
    let target = spec.divergence_closed(x, y)?.to_f64();
    let scale = target.abs().max(1.0);
    let mut tally = Tally::new(format!("limiting/{}", spec.name()), 0);
    let mut prev: Option<f64> = None;
    for &i in steps {
        let yi: Vec<f64> = y.iter().zip(v).map(|(a, b)| a + b / i as f64).collect();
        if spec.classify(&yi)? != DomainStatus::Interior {
            return Err(Error::SequenceLeavesZone(i));
        }
        let d = spec.divergence_closed(x, &yi)?.to_f64() - spec.divergence_closed(y, &yi)?.to_f64();
        let err = (d - target).abs();
        if let Some(p) = prev {
            tally.record(p - err + 1e-12 * scale, || Witness::new(&[("i", &[i as f64]), ("d_i", &[d])]));
        }
        prev = Some(err);
    }
    let last = prev.unwrap_or(0.0);
    let i_last = *steps.last().unwrap() as f64;
    tally.record(tol * scale - last, || Witness::new(&[("i", &[i_last]), ("error", &[last])]));
    Ok(tally.finish())
}

/// ‖b′(p + v/i)‖₂ must increase over the second half of `steps` and end above `threshold`.
pub fn boundary_blowup_probe(
    spec: &EntropySpec,
    p: &[f64],
    v: &[f64],
    steps: &[u64],
    threshold: f64,
) -> Result<ProbeReport> {
    if !spec.metadata().essentially_smooth {
        return Err(Error::NotEssentiallySmooth);
    }
    check_dim(p, spec.dim())?;
    check_dim(v, spec.dim())?;
    if steps.is_empty() {
        return Err(Error::InvalidParameter("no steps given".into()));
    }
    if spec.classify(p)? == DomainStatus::Interior {
        return Err(Error::InvalidParameter("p must lie on the boundary of the domain".into()));
    }
    let mut tally = Tally::new(format!("blowup/{}", spec.name()), 0);
    let mut norms = Vec::with_capacity(steps.len());
    for &i in steps {
        let z: Vec<f64> = p.iter().zip(v).map(|(a, b)| a + b / i as f64).collect();
        if spec.classify(&z)? != DomainStatus::Interior {
            return Err(Error::SequenceLeavesZone(i));
        }
        norms.push(norm2(&spec.grad(&z)?));
    }
    let half = steps.len() / 2;
    for k in half.max(1)..steps.len() {
        let (a, b) = (norms[k - 1], norms[k]);
        tally.record(b - a, || Witness::new(&[("i", &[steps[k] as f64]), ("grad_norm", &[a, b])]));
    }
    let last = *norms.last().unwrap();
    tally.record(last - threshold, || {
        Witness::new(&[("i", &[*steps.last().unwrap() as f64]), ("grad_norm", &[last])])
    });
    Ok(tally.finish())
}
