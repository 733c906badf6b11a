use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bregman::{Base, DomainStatus, EntropySpec, Node};
use crate::entropies::Region;
use crate::error::{Error, Result};
use crate::norms::NormSpec;

const MAX_TRIES: usize = 100_000;

/// Seeded sample source. Equal seeds give equal streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sampler {
    pub seed: u64,
    pub count: usize,
}

impl Sampler {
    pub fn new(seed: u64, count: usize) -> Self {
        Self { seed, count }
    }

    pub(crate) fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

/// Coordinate box of interior points at distance ≥ 0.1 from the zone boundary.
pub fn interior_box(spec: &EntropySpec) -> (Vec<f64>, Vec<f64>) {
    let half = if contains_base(spec, &|b| matches!(b, Base::Ell2Type { .. })) { 1.0 } else { 2.0 };
    spec.metadata()
        .zone
        .lower
        .iter()
        .map(|l| match l {
            Some(l) => (l + 0.1, l + 4.0),
            None => (-half, half),
        })
        .unzip()
}

fn contains_base(spec: &EntropySpec, pred: &dyn Fn(&Base) -> bool) -> bool {
    match spec.node() {
        Node::Base(b) => pred(b),
        Node::Scaled { inner, .. } | Node::PlusLinear { inner, .. } | Node::Translated { inner, .. } => {
            contains_base(inner, pred)
        }
        Node::SumOf(m) => m.iter().any(|(_, s)| contains_base(s, pred)),
        Node::DirectSum { blocks, .. } => blocks.iter().any(|s| contains_base(s, pred)),
    }
}

/// Interior point from [`interior_box`]. Coordinates of ½‖·‖_p² stay away from 0, where it is not C².
pub(crate) fn sample_interior(spec: &EntropySpec, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let (lo, hi) = interior_box(spec);
    let avoid_zero = contains_base(spec, &|b| matches!(b, Base::L2Lp { .. }));
    loop {
        let x: Vec<f64> = lo
            .iter()
            .zip(&hi)
            .map(|(&l, &h)| {
                if avoid_zero && l < 0.0 {
                    let m = rng.gen_range(0.1..h);
                    if rng.gen_bool(0.5) { m } else { -m }
                } else {
                    rng.gen_range(l..h)
                }
            })
            .collect();
        if spec.classify(&x) == Ok(DomainStatus::Interior) {
            return x;
        }
    }
}

/// Random nonzero vector with mixed structure, scaled to unit ambient norm.
pub(crate) fn sample_unit(norm: &NormSpec, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let n = norm.dim();
    loop {
        let mut w = vec![0.0; n];
        match rng.gen_range(0..4) {
            0 => w[rng.gen_range(0..n)] = 1.0,
            1 => w.iter_mut().for_each(|c| *c = if rng.gen_bool(0.5) { 1.0 } else { -1.0 }),
            2 => {
                let j = rng.gen_range(0..n);
                let k = rng.gen_range(0..n);
                w[j] += 1.0;
                w[k] += if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            }
            _ => w.iter_mut().for_each(|c| *c = rng.gen_range(-1.0..1.0)),
        }
        let nw = norm.eval_unchecked(&w);
        if nw > 0.0 {
            return w.into_iter().map(|c| c / nw).collect();
        }
    }
}

/// Direction uniform on the unit sphere of `norm`, by rejection from the enclosing cube.
pub(crate) fn sample_sphere(norm: &NormSpec, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let c_inf = norm.equivalence_constants().c_inf;
    for _ in 0..MAX_TRIES {
        let u: Vec<f64> = (0..norm.dim()).map(|_| rng.gen_range(-c_inf..c_inf)).collect();
        let nu = norm.eval_unchecked(&u);
        if nu <= 1.0 && nu > 1e-3 {
            return u.into_iter().map(|c| c / nu).collect();
        }
    }
    sample_unit(norm, rng)
}

/// Point of `region` ∩ dom(b). `anchor` biases exterior samples toward its ray.
pub(crate) fn sample_region(
    spec: &EntropySpec,
    region: &Region,
    anchor: Option<&[f64]>,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<f64>> {
    match region {
        Region::Point(x) => Ok(x.clone()),
        Region::Box { lower, upper } => {
            for _ in 0..MAX_TRIES {
                let x: Vec<f64> = lower.iter().zip(upper).map(|(&l, &h)| uniform(rng, l, h)).collect();
                if spec.classify(&x)? != DomainStatus::OutsideDomain {
                    return Ok(x);
                }
            }
            Err(Error::EmptyPair("box does not meet dom(b)".into()))
        }
        Region::Ball { center, radius, floor } => sample_ball(spec, center, *radius, floor.as_deref(), rng),
        Region::Exterior { radius } => sample_exterior(spec, *radius, anchor, rng),
        Region::Product(parts) => {
            let Node::DirectSum { blocks, .. } = spec.node() else {
                return Err(Error::EmptyPair("product region needs a direct-sum entropy".into()));
            };
            if blocks.len() != parts.len() {
                return Err(Error::EmptyPair("product region does not match the blocks".into()));
            }
            let mut out = Vec::with_capacity(spec.dim());
            for (b, r) in blocks.iter().zip(parts) {
                out.extend(sample_region(b, r, None, rng)?);
            }
            Ok(out)
        }
    }
}

/// Whether `x` lies in `region` ∩ dom(b).
pub(crate) fn region_contains(spec: &EntropySpec, region: &Region, x: &[f64]) -> bool {
    if spec.classify(x).map_or(true, |s| s == DomainStatus::OutsideDomain) {
        return false;
    }
    let norm = spec.norm();
    match region {
        Region::Point(p) => p.as_slice() == x,
        Region::Box { lower, upper } => x.iter().zip(lower.iter().zip(upper)).all(|(&c, (&l, &h))| c >= l && c <= h),
        Region::Ball { center, radius, floor } => {
            let off: Vec<f64> = x.iter().zip(center).map(|(a, b)| a - b).collect();
            norm.eval_unchecked(&off) <= *radius
                && floor.as_ref().map_or(true, |f| x.iter().zip(f).all(|(&c, &l)| c >= l))
        }
        Region::Exterior { radius } => {
            norm.eval_unchecked(x) > *radius && spec.classify(x) == Ok(DomainStatus::Interior)
        }
        Region::Product(parts) => {
            let Node::DirectSum { blocks, .. } = spec.node() else { return false };
            let mut at = 0;
            blocks.iter().zip(parts).all(|(b, r)| {
                let xb = &x[at..at + b.dim()];
                at += b.dim();
                region_contains(b, r, xb)
            })
        }
    }
}

fn uniform(rng: &mut ChaCha8Rng, l: f64, h: f64) -> f64 {
    if h > l {
        rng.gen_range(l..=h)
    } else {
        l
    }
}

fn sample_ball(
    spec: &EntropySpec,
    center: &[f64],
    radius: f64,
    floor: Option<&[f64]>,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<f64>> {
    let norm = spec.norm();
    let reach = norm.equivalence_constants().c_inf * radius;
    let zone = spec.metadata().zone.lower;
    let bounds: Vec<(f64, f64)> = (0..spec.dim())
        .map(|k| {
            let mut lo = center[k] - reach;
            if let Some(l) = zone[k] {
                lo = lo.max(l);
            }
            if let Some(f) = floor {
                lo = lo.max(f[k]);
            }
            (lo, center[k] + reach)
        })
        .collect();
    if bounds.iter().any(|(l, h)| l > h) {
        return Err(Error::EmptyPair("ball does not meet dom(b)".into()));
    }
    for _ in 0..MAX_TRIES {
        let mode = rng.gen_range(0..4);
        let mut x: Vec<f64> = bounds.iter().map(|&(l, h)| uniform(rng, l, h)).collect();
        match mode {
            // hug the lower edge in a random subset of coordinates
            1 => {
                for (c, &(l, h)) in x.iter_mut().zip(&bounds) {
                    if rng.gen_bool(0.5) {
                        *c = l + (h - l) * 1e-3 * rng.gen::<f64>();
                    }
                }
            }
            // contract toward the center
            2 => {
                let s = rng.gen::<f64>().powi(3);
                for (c, (&z, &(l, _))) in x.iter_mut().zip(center.iter().zip(&bounds)) {
                    *c = (z + s * (*c - z)).max(l);
                }
            }
            _ => {}
        }
        let off: Vec<f64> = x.iter().zip(center).map(|(a, b)| a - b).collect();
        if norm.eval_unchecked(&off) <= radius && spec.classify(&x)? != DomainStatus::OutsideDomain {
            return Ok(x);
        }
    }
    Err(Error::EmptyPair("could not sample the ball".into()))
}

fn sample_exterior(
    spec: &EntropySpec,
    radius: f64,
    anchor: Option<&[f64]>,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<f64>> {
    let norm = spec.norm();
    let zone = spec.metadata().zone.lower;
    let base: Vec<f64> = zone.iter().map(|l| l.unwrap_or(0.0)).collect();
    for _ in 0..MAX_TRIES {
        let mut d: Vec<f64> = zone
            .iter()
            .map(|l| match l {
                Some(_) => 10f64.powf(rng.gen_range(-4.0..0.0)),
                None => rng.gen_range(-1.0..1.0),
            })
            .collect();
        if let (Some(a), true) = (anchor, rng.gen_bool(0.25)) {
            for ((c, &ak), &bk) in d.iter_mut().zip(a).zip(&base) {
                let along = ak - bk;
                *c = along * (1.0 + 0.05 * rng.gen_range(-1.0..1.0));
                if zone.iter().any(|l| l.is_some()) && *c <= 0.0 {
                    *c = 1e-6;
                }
            }
        }
        let target = if radius > 0.0 {
            if rng.gen_bool(0.5) {
                radius * (1.0 + 10f64.powf(rng.gen_range(-6.0..-1.0)))
            } else {
                radius * 10f64.powf(rng.gen_range(0.0..1.0))
            }
        } else {
            10f64.powf(rng.gen_range(-2.0..2.0))
        };
        let at = |s: f64| -> Vec<f64> { base.iter().zip(&d).map(|(b, c)| b + s * c).collect() };
        let y = if norm.eval_unchecked(&base) < target {
            let mut hi = 1.0;
            while norm.eval_unchecked(&at(hi)) < target {
                hi *= 2.0;
            }
            let mut lo = 0.0;
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if norm.eval_unchecked(&at(mid)) < target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            at(hi)
        } else {
            at(target * rng.gen::<f64>())
        };
        if norm.eval_unchecked(&y) > radius && spec.classify(&y)? == DomainStatus::Interior {
            return Ok(y);
        }
    }
    Err(Error::EmptyPair("could not sample the exterior region".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let spec = EntropySpec::bgs(3);
        let region = Region::Ball { center: vec![0.0; 3], radius: 2.0, floor: None };
        let draw = |seed| {
            let mut rng = Sampler::new(seed, 0).rng();
            (0..20).map(|_| sample_region(&spec, &region, None, &mut rng).unwrap()).collect::<Vec<_>>()
        };
        assert_eq!(draw(5), draw(5));
        assert_ne!(draw(5), draw(6));
    }

    #[test]
    fn ball_samples_respect_constraints() {
        let spec = EntropySpec::hct(3.0, 2).unwrap();
        let region = Region::Ball { center: vec![0.0; 2], radius: 3.0, floor: Some(vec![0.5; 2]) };
        let mut rng = Sampler::new(1, 0).rng();
        for _ in 0..500 {
            let x = sample_region(&spec, &region, None, &mut rng).unwrap();
            assert!(x.iter().all(|&c| c >= 0.5));
            assert!(spec.norm().eval(&x).unwrap() <= 3.0);
        }
    }

    #[test]
    fn exterior_samples_leave_the_radius() {
        let spec = EntropySpec::iterated_log(2);
        let mut rng = Sampler::new(2, 0).rng();
        for r in [0.5, 3.0, 100.0] {
            for _ in 0..300 {
                let y = sample_region(&spec, &Region::Exterior { radius: r }, Some(&[2.0, 2.0]), &mut rng).unwrap();
                assert!(spec.norm().eval(&y).unwrap() > r);
                assert!(y.iter().all(|&c| c > 1.0));
            }
        }
    }

    #[test]
    fn sphere_directions_are_unit() {
        let norm = NormSpec::lp(1.0, 5).unwrap();
        let mut rng = Sampler::new(3, 0).rng();
        for _ in 0..100 {
            let d = sample_sphere(&norm, &mut rng);
            assert!((norm.eval(&d).unwrap() - 1.0).abs() < 1e-12);
        }
    }
}
