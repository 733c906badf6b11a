use rand::Rng;

use super::sampler::{region_contains, sample_region, sample_unit};
use super::{ProbeReport, Sampler, Tally, Witness, LAMBDA_GRID};
use crate::bregman::{DomainStatus, EntropySpec};
use crate::entropies::{GaugeSpec, PairDomainSpec, StrongConvexityCertificate};
use crate::error::{check_dim, Error, Result};
use crate::extended::ExtendedReal;
use crate::numerics::sub;

/// λb(x) + (1−λ)b(y) − b(λx + (1−λ)y).
pub fn convexity_gap(spec: &EntropySpec, x: &[f64], y: &[f64], lambda: f64) -> Result<ExtendedReal> {
    check_dim(x, spec.dim())?;
    check_dim(y, spec.dim())?;
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::InvalidParameter(format!("lambda must lie in (0, 1), got {lambda}")));
    }
    if spec.classify(x)? == DomainStatus::OutsideDomain || spec.classify(y)? == DomainStatus::OutsideDomain {
        return Err(Error::SegmentLeavesDomain);
    }
    if x == y {
        return Ok(ExtendedReal::Finite(0.0));
    }
    let mid: Vec<f64> = x.iter().zip(y).map(|(a, b)| lambda * a + (1.0 - lambda) * b).collect();
    let bx = spec.value(x)?.to_f64();
    let by = spec.value(y)?.to_f64();
    let bm = spec.value(&mid)?.to_f64();
    Ok(ExtendedReal::finite(lambda * bx + (1.0 - lambda) * by - bm))
}

/// Geometric distance buckets: (0, e₀], (e₀, e₁], … with e_{k+1} = ratio·e_k.
#[derive(Debug, Clone, PartialEq)]
pub struct BucketGrid {
    edges: Vec<f64>,
}

impl BucketGrid {
    pub fn geometric(t_min: f64, t_max: f64, ratio: f64) -> Result<Self> {
        if !(t_min > 0.0 && t_max > t_min && ratio > 1.0) {
            return Err(Error::InvalidParameter("bucket grid needs 0 < t_min < t_max and ratio > 1".into()));
        }
        let mut edges = vec![0.0, t_min];
        while *edges.last().unwrap() < t_max {
            let next = edges.last().unwrap() * ratio;
            edges.push(next);
        }
        Ok(Self { edges })
    }

    fn locate(&self, t: f64) -> Option<usize> {
        if !(t > 0.0) || t > *self.edges.last().unwrap() {
            return None;
        }
        Some(self.edges.partition_point(|&e| e < t) - 1)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bucket {
    pub t_lo: f64,
    pub t_hi: f64,
    pub t_center: f64,
    pub t_width: f64,
    pub psi_hat: ExtendedReal,
    pub n_samples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModulusTable {
    pub buckets: Vec<Bucket>,
}

/// Sampled upper estimate of the modulus: per bucket, the least gap/(λ(1−λ)) seen.
pub fn modulus_estimate(
    spec: &EntropySpec,
    pair: &PairDomainSpec,
    grid: &BucketGrid,
    sampler: &Sampler,
) -> Result<ModulusTable> {
    let mut rng = sampler.rng();
    let mut buckets: Vec<Bucket> = grid
        .edges
        .windows(2)
        .map(|e| Bucket {
            t_lo: e[0],
            t_hi: e[1],
            t_center: if e[0] == 0.0 { 0.5 * e[1] } else { (e[0] * e[1]).sqrt() },
            t_width: e[1] - e[0],
            psi_hat: ExtendedReal::PosInfinity,
            n_samples: 0,
        })
        .collect();
    let t_min = grid.edges.iter().copied().find(|&e| e > 0.0).unwrap_or(1.0);
    let t_max = grid.edges[grid.edges.len() - 1].max(t_min * 2.0);
    for i in 0..sampler.count {
        let x = sample_region(spec, &pair.s1, None, &mut rng)?;
        // every other pair is y = x ± t·u at a log-uniform distance t, which reaches
        // the aligned, far-from-center pairs that attain the infimum
        let y = match (i % 2 == 1).then(|| directed(spec, pair, &x, t_min, t_max, &mut rng)).flatten() {
            Some(y) => y,
            None => sample_region(spec, &pair.s2, Some(&x), &mut rng)?,
        };
        let t = spec.norm().eval_unchecked(&sub(&x, &y));
        let Some(k) = grid.locate(t) else { continue };
        let b = &mut buckets[k];
        b.n_samples += 1;
        for &lambda in &LAMBDA_GRID {
            let q = convexity_gap(spec, &x, &y, lambda)?.to_f64() / (lambda * (1.0 - lambda));
            let q = ExtendedReal::finite(q.max(0.0));
            if q < b.psi_hat {
                b.psi_hat = q;
            }
        }
    }
    Ok(ModulusTable { buckets })
}

fn directed(
    spec: &EntropySpec,
    pair: &PairDomainSpec,
    x: &[f64],
    t_min: f64,
    t_max: f64,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Option<Vec<f64>> {
    let u = sample_unit(spec.norm(), rng);
    let mut t = rng.gen_range(t_min.ln()..t_max.ln()).exp();
    for _ in 0..20 {
        for sign in [1.0, -1.0] {
            let y: Vec<f64> = x.iter().zip(&u).map(|(a, b)| a + sign * t * b).collect();
            if region_contains(spec, &pair.s2, &y) {
                return Some(y);
            }
        }
        t *= 0.5;
    }
    None
}

/// Checks ψ̂(ct) ≥ (1 − slack)·c²·ψ̂(t) between populated buckets with 1 < c ≤ `max_ratio`.
pub fn modulus_scaling_check(table: &ModulusTable, slack: f64, max_ratio: f64, seed: u64) -> ProbeReport {
    let mut tally = Tally::new("modulus-scaling", seed);
    let live: Vec<&Bucket> = table.buckets.iter().filter(|b| b.psi_hat.is_finite()).collect();
    for (i, a) in live.iter().enumerate() {
        for b in &live[i + 1..] {
            let c = b.t_center / a.t_center;
            if c > max_ratio {
                break;
            }
            let pa = a.psi_hat.to_f64();
            let pb = b.psi_hat.to_f64();
            let margin = pb - (1.0 - slack) * c * c * pa;
            tally.record(margin, || Witness::new(&[("t", &[a.t_center, b.t_center]), ("psi_hat", &[pa, pb])]));
        }
    }
    tally.finish()
}

/// Sampled check of ψ(‖x−y‖) ≤ B(x, y) on the pair domain.
pub fn gauge_check(spec: &EntropySpec, gauge: &GaugeSpec, pair: &PairDomainSpec, sampler: &Sampler) -> Result<ProbeReport> {
    let mut rng = sampler.rng();
    let mut tally = Tally::new(format!("gauge/{}", spec.name()), sampler.seed);
    for _ in 0..sampler.count {
        let x = sample_region(spec, &pair.s1, None, &mut rng)?;
        let y = sample_region(spec, &pair.s2, Some(&x), &mut rng)?;
        let b = spec.divergence_closed(&x, &y)?.to_f64();
        let psi = gauge.eval(spec.norm().eval_unchecked(&sub(&x, &y)));
        let margin = if b.is_infinite() { f64::INFINITY } else { b + 1e-9 * b.abs().max(1.0) - psi };
        tally.record(margin, || Witness::new(&[("x", &x), ("y", &y)]));
    }
    Ok(tally.finish())
}

/// Gap route on sampled (x, y, λ) plus the Hessian route on sampled (z, w).
pub fn strong_convexity_check(
    spec: &EntropySpec,
    cert: &StrongConvexityCertificate,
    sampler: &Sampler,
) -> Result<ProbeReport> {
    let mut rng = sampler.rng();
    let mut tally = Tally::new(format!("strong-convexity/{}", spec.name()), sampler.seed);
    let mu = cert.mu;
    let norm = spec.norm();
    for i in 0..sampler.count {
        let x = sample_region(spec, &cert.set, None, &mut rng)?;
        let mut y = sample_region(spec, &cert.set, None, &mut rng)?;
        if rng.gen_bool(0.25) {
            // differ in one coordinate only
            let k = rng.gen_range(0..spec.dim());
            let keep = y[k];
            y.clone_from(&x);
            y[k] = keep;
            if spec.norm().eval_unchecked(&y) > set_radius(cert) {
                y = x.clone();
            }
        }
        let lambda = LAMBDA_GRID[i % LAMBDA_GRID.len()];
        let gap = convexity_gap(spec, &x, &y, lambda)?.to_f64();
        let d = norm.eval_unchecked(&sub(&x, &y));
        let need = 0.5 * mu * lambda * (1.0 - lambda) * d * d;
        tally.record(gap - need + 1e-9 * gap.abs().max(1.0), || {
            Witness::new(&[("x", &x), ("y", &y), ("lambda", &[lambda])])
        });

        let z = sample_region(spec, &cert.set, None, &mut rng)?;
        if spec.classify(&z)? != DomainStatus::Interior {
            continue;
        }
        let w = sample_unit(norm, &mut rng);
        let h = spec.hessian_quadform(&z, &w)?;
        tally.record(h - mu + 1e-9 * mu.max(1.0), || Witness::new(&[("z", &z), ("w", &w)]));
    }
    Ok(tally.finish())
}

fn set_radius(cert: &StrongConvexityCertificate) -> f64 {
    match &cert.set {
        crate::entropies::Region::Ball { center, radius, .. } if center.iter().all(|&c| c == 0.0) => *radius,
        _ => f64::INFINITY,
    }
}

/// ‖x − y‖ ≤ (2B(x, y)/μ)^{1/2} on sampled pairs of the certificate set.
pub fn sequential_consistency_probe(
    spec: &EntropySpec,
    cert: &StrongConvexityCertificate,
    sampler: &Sampler,
) -> Result<ProbeReport> {
    let mut rng = sampler.rng();
    let mut tally = Tally::new(format!("sequential-consistency/{}", spec.name()), sampler.seed);
    let mut drawn = 0;
    while drawn < sampler.count {
        let x = sample_region(spec, &cert.set, None, &mut rng)?;
        let y = sample_region(spec, &cert.set, None, &mut rng)?;
        if spec.classify(&y)? != DomainStatus::Interior {
            continue;
        }
        drawn += 1;
        let b = spec.divergence_closed(&x, &y)?.to_f64();
        let d = spec.norm().eval_unchecked(&sub(&x, &y));
        let bound = (2.0 * b.max(0.0) / cert.mu).sqrt();
        tally.record(bound + 1e-9 - d, || Witness::new(&[("x", &x), ("y", &y)]));
    }
    Ok(tally.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entropies::{documented_gauge, documented_strong_convexity, Region};

    #[test]
    fn gap_examples() {
        let q = EntropySpec::identity_quadratic(1);
        assert_eq!(convexity_gap(&q, &[0.0], &[2.0], 0.5).unwrap(), ExtendedReal::Finite(0.5));
        assert_eq!(convexity_gap(&q, &[3.0], &[3.0], 0.3).unwrap(), ExtendedReal::Finite(0.0));
        let e = std::f64::consts::E;
        let g = convexity_gap(&EntropySpec::bgs(1), &[1.0], &[e], 0.5).unwrap().to_f64();
        let m = (1.0 + e) / 2.0;
        assert!((g - (0.5 * e - m * m.ln())).abs() < 1e-15);
        assert_eq!(
            convexity_gap(&EntropySpec::burg(1), &[1.0], &[-1.0], 0.5),
            Err(Error::SegmentLeavesDomain)
        );
    }

    #[test]
    fn quadratic_modulus_is_half_square() {
        let q = EntropySpec::identity_quadratic(2);
        let ball = Region::Ball { center: vec![0.0; 2], radius: 1.0, floor: None };
        let pair = PairDomainSpec { s1: ball.clone(), s2: ball };
        let grid = BucketGrid::geometric(0.05, 3.0, 1.05).unwrap();
        let table = modulus_estimate(&q, &pair, &grid, &Sampler::new(42, 4000)).unwrap();
        for b in &table.buckets {
            if let Some(p) = b.psi_hat.value() {
                assert!(p >= 0.5 * b.t_lo * b.t_lo * (1.0 - 1e-12));
                assert!(p <= 0.5 * b.t_hi * b.t_hi * (1.0 + 1e-12));
            } else {
                assert_eq!(b.n_samples, 0);
            }
        }
        // distances above the diameter 2 are never seen
        assert!(table.buckets.iter().filter(|b| b.t_lo > 2.0).all(|b| b.psi_hat == ExtendedReal::PosInfinity));
        assert!(modulus_scaling_check(&table, 0.1, f64::INFINITY, 42).pass);
    }

    #[test]
    fn documented_certificates_pass() {
        let spec = EntropySpec::bgs(3);
        let cert = documented_strong_convexity(&spec, 10.0, None).unwrap();
        let r = strong_convexity_check(&spec, &cert, &Sampler::new(1, 3000)).unwrap();
        assert!(r.pass, "{r:?}");
        let doubled = cert.with_mu(2.0 * cert.mu);
        assert!(!strong_convexity_check(&spec, &doubled, &Sampler::new(1, 3000)).unwrap().pass);
        let s = sequential_consistency_probe(&spec, &cert, &Sampler::new(7, 3000)).unwrap();
        assert!(s.pass);
    }

    #[test]
    fn l2lp_two_is_exact() {
        let spec = EntropySpec::l2lp(2.0, 3).unwrap();
        let cert = documented_strong_convexity(&spec, 3.0, None).unwrap();
        assert_eq!(cert.mu, 1.0);
        assert!(strong_convexity_check(&spec, &cert, &Sampler::new(3, 2000)).unwrap().pass);
    }

    #[test]
    fn bgs_gauge_and_negative_control() {
        let spec = EntropySpec::bgs(2);
        let (g, pair) = documented_gauge(&spec, &[1.0, 1.0]).unwrap();
        assert!(gauge_check(&spec, &g, &pair, &Sampler::new(1, 10_000)).unwrap().pass);
        let GaugeSpec::Linear { a } = g else { unreachable!() };
        let doubled = GaugeSpec::Linear { a: 2.0 * a };
        let r = gauge_check(&spec, &doubled, &pair, &Sampler::new(1, 10_000)).unwrap();
        assert!(r.violations > 0);
        assert!(r.witness.is_some());
    }

    #[test]
    fn reports_are_reproducible() {
        let spec = EntropySpec::burg(2);
        let cert = documented_strong_convexity(&spec, 3.0, None).unwrap();
        let a = strong_convexity_check(&spec, &cert, &Sampler::new(9, 500)).unwrap();
        let b = strong_convexity_check(&spec, &cert, &Sampler::new(9, 500)).unwrap();
        assert_eq!(a, b);
    }
}
