//! Agreement checks between the independent evaluation paths of an entropy.

use rand::Rng;

use super::sampler::{sample_interior, sample_unit};
use super::{ProbeReport, Sampler, Tally, Witness};
use crate::bregman::{DomainStatus, EntropySpec};
use crate::error::Result;
use crate::numerics::{dot, norm2, norm_inf, sub};

/// |closed − generic| ≤ tol·max(1, |B|) on interior pairs.
pub fn oracle_agreement_probe(spec: &EntropySpec, sampler: &Sampler, tol: f64) -> Result<ProbeReport> {
    let mut rng = sampler.rng();
    let mut tally = Tally::new(format!("oracle/{}", spec.name()), sampler.seed);
    for _ in 0..sampler.count {
        let x = sample_interior(spec, &mut rng);
        let y = sample_interior(spec, &mut rng);
        let c = spec.divergence_closed(&x, &y)?.to_f64();
        let g = spec.divergence_generic(&x, &y)?.to_f64();
        tally.record(tol * c.abs().max(1.0) - (c - g).abs(), || Witness::new(&[("x", &x), ("y", &y)]));
    }
    Ok(tally.finish())
}

/// B ≥ −tol everywhere, B(x, x) = 0 exactly and B > 0 once ‖x − y‖₂ ≥ 1e−3.
/// On closed domains some x are pushed onto the boundary.
pub fn nonnegativity_probe(spec: &EntropySpec, sampler: &Sampler, tol: f64) -> Result<ProbeReport> {
    let mut rng = sampler.rng();
    let mut tally = Tally::new(format!("nonneg/{}", spec.name()), sampler.seed);
    let meta = spec.metadata();
    for _ in 0..sampler.count {
        let mut x = sample_interior(spec, &mut rng);
        let y = sample_interior(spec, &mut rng);
        if meta.dom_closed && rng.gen_bool(0.1) {
            let k = rng.gen_range(0..spec.dim());
            if let Some(l) = meta.zone.lower[k] {
                x[k] = l;
                if spec.classify(&x)? == DomainStatus::OutsideDomain {
                    x[k] = y[k];
                }
            }
        }
        let b = spec.divergence_closed(&x, &y)?.to_f64();
        let wit = || Witness::new(&[("x", &x), ("y", &y)]);
        tally.record(b + tol, wit);
        if norm2(&sub(&x, &y)) >= 1e-3 {
            tally.record(if b > 0.0 { b } else { b.min(-f64::MIN_POSITIVE) }, wit);
        }
        let own = spec.divergence_closed(&y, &y)?.to_f64();
        tally.record(-own.abs(), || Witness::new(&[("x", &y), ("y", &y)]));
    }
    Ok(tally.finish())
}

/// Central differences of value against grad, and of grad against the Hessian form.
/// Errors are measured as |fd − exact| ≤ tol·max(1, |exact|) with ∞-norms for vectors.
pub fn derivative_probe(spec: &EntropySpec, sampler: &Sampler, grad_tol: f64, hess_tol: f64) -> Result<ProbeReport> {
    let mut rng = sampler.rng();
    let mut tally = Tally::new(format!("gradient/{}", spec.name()), sampler.seed);
    let n = spec.dim();
    for _ in 0..sampler.count {
        let z = sample_interior(spec, &mut rng);
        let g = spec.grad(&z)?;
        let mut fd = vec![0.0; n];
        for k in 0..n {
            let mut h = 1e-5 * z[k].abs().max(1.0);
            let (plus, minus) = loop {
                let mut p = z.clone();
                let mut m = z.clone();
                p[k] += h;
                m[k] -= h;
                if spec.classify(&p)? == DomainStatus::Interior && spec.classify(&m)? == DomainStatus::Interior {
                    break (p, m);
                }
                h *= 0.5;
            };
            fd[k] = (spec.value(&plus)?.to_f64() - spec.value(&minus)?.to_f64()) / (2.0 * h);
        }
        let scale = norm_inf(&g).max(1.0);
        tally.record(grad_tol * scale - norm_inf(&sub(&fd, &g)), || Witness::new(&[("z", &z), ("fd", &fd), ("grad", &g)]));

        let w = sample_unit(spec.norm(), &mut rng);
        let exact = spec.hessian_quadform(&z, &w)?;
        let mut h = 1e-5 * norm_inf(&z).max(1.0) / norm_inf(&w);
        let (plus, minus) = loop {
            let p: Vec<f64> = z.iter().zip(&w).map(|(a, b)| a + h * b).collect();
            let m: Vec<f64> = z.iter().zip(&w).map(|(a, b)| a - h * b).collect();
            if spec.classify(&p)? == DomainStatus::Interior && spec.classify(&m)? == DomainStatus::Interior {
                break (p, m);
            }
            h *= 0.5;
        };
        let approx = dot(&sub(&spec.grad(&plus)?, &spec.grad(&minus)?), &w) / (2.0 * h);
        tally.record(hess_tol * exact.abs().max(1.0) - (approx - exact).abs(), || {
            Witness::new(&[("z", &z), ("w", &w), ("fd", &[approx]), ("exact", &[exact])])
        });
    }
    Ok(tally.finish())
}

/// |three-point residual| ≤ tol·max(1, |B(x, z)|) on interior triples.
pub fn three_point_probe(spec: &EntropySpec, sampler: &Sampler, tol: f64) -> Result<ProbeReport> {
    let mut rng = sampler.rng();
    let mut tally = Tally::new(format!("three-point/{}", spec.name()), sampler.seed);
    for _ in 0..sampler.count {
        let x = sample_interior(spec, &mut rng);
        let y = sample_interior(spec, &mut rng);
        let z = sample_interior(spec, &mut rng);
        let r = spec.three_point_residual(&x, &y, &z)?;
        let bxz = spec.divergence_closed(&x, &z)?.to_f64();
        tally.record(tol * bxz.abs().max(1.0) - r.abs(), || Witness::new(&[("x", &x), ("y", &y), ("z", &z)]));
    }
    Ok(tally.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn catalog() -> Vec<EntropySpec> {
        vec![
            EntropySpec::bgs(3),
            EntropySpec::hct(-1.0, 3).unwrap(),
            EntropySpec::hct(0.5, 3).unwrap(),
            EntropySpec::hct(3.0, 3).unwrap(),
            EntropySpec::burg(3),
            EntropySpec::iterated_log(3),
            EntropySpec::beta(0.0, 3).unwrap(),
            EntropySpec::alpha_beta(2.0, 0.5, 3).unwrap(),
            EntropySpec::l2lp(1.5, 3).unwrap(),
            EntropySpec::ell2_type(2, 2).unwrap(),
        ]
    }

    #[test]
    fn catalog_passes_small_runs() {
        let s = Sampler::new(3, 300);
        for spec in catalog() {
            let name = spec.name();
            assert!(oracle_agreement_probe(&spec, &s, 1e-10).unwrap().pass, "{name}");
            assert!(nonnegativity_probe(&spec, &s, 1e-12).unwrap().pass, "{name}");
            let d = derivative_probe(&spec, &Sampler::new(3, 100), 1e-5, 1e-4).unwrap();
            assert!(d.pass, "{name} {d:?}");
            assert!(three_point_probe(&spec, &s, 1e-10).unwrap().pass, "{name}");
        }
    }

    #[test]
    fn reports_are_reproducible() {
        let spec = EntropySpec::burg(2);
        let a = derivative_probe(&spec, &Sampler::new(9, 50), 1e-5, 1e-4).unwrap();
        let b = derivative_probe(&spec, &Sampler::new(9, 50), 1e-5, 1e-4).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn impossible_tolerance_is_reported() {
        let r = oracle_agreement_probe(&EntropySpec::bgs(2), &Sampler::new(1, 50), -1.0).unwrap();
        assert!(!r.pass && r.witness.is_some() && r.worst_margin < 0.0);
    }
}
