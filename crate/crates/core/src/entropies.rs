//! Documented constants per entropy: strong-convexity parameters, relative gauges
//! and the sets on which they hold.

use crate::bregman::{Base, EntropySpec, Node};
use crate::error::{check_dim, Error, Result};
use crate::norms::{NormKind, NormSpec};
use crate::numerics::norm_inf;

/// Exponent s₁ = 4⁸ in the Burg radius.
pub const BURG_S1: f64 = 65536.0;

/// A closed-form gauge ψ on [0, ∞).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GaugeSpec {
    Linear { a: f64 },
    /// a·t^e. A negative exponent is allowed (it is decreasing and has no inverse).
    Power { a: f64, e: f64 },
    /// ½μt².
    Quadratic { mu: f64 },
    /// ¼·log(1 + t).
    Log,
    /// β·log(1 + log(1 + t)); only a conjecture for the iterated-log entropy.
    LogLog { beta: f64 },
}

impl GaugeSpec {
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            GaugeSpec::Linear { a } => a * t,
            GaugeSpec::Power { a, e } => a * t.powf(e),
            GaugeSpec::Quadratic { mu } => 0.5 * mu * t * t,
            GaugeSpec::Log => 0.25 * t.ln_1p(),
            GaugeSpec::LogLog { beta } => beta * t.ln_1p().ln_1p(),
        }
    }

    /// ψ⁻¹(v) for v ≥ 0; `None` when ψ is not increasing.
    pub fn inverse(&self, v: f64) -> Option<f64> {
        match *self {
            GaugeSpec::Linear { a } => Some(v / a),
            GaugeSpec::Power { a, e } if e > 0.0 => Some((v / a).powf(1.0 / e)),
            GaugeSpec::Power { .. } => None,
            GaugeSpec::Quadratic { mu } => Some((2.0 * v / mu).sqrt()),
            GaugeSpec::Log => Some((4.0 * v).exp_m1()),
            GaugeSpec::LogLog { beta } => Some((v / beta).exp_m1().exp_m1()),
        }
    }
}

/// A set of points, always read as intersected with dom(b).
#[derive(Debug, Clone, PartialEq)]
pub enum Region {
    Point(Vec<f64>),
    Box { lower: Vec<f64>, upper: Vec<f64> },
    /// {w : ‖w − center‖ ≤ radius, w_k ≥ floor_k}.
    Ball { center: Vec<f64>, radius: f64, floor: Option<Vec<f64>> },
    /// zone ∩ {w : ‖w‖ > radius}.
    Exterior { radius: f64 },
    /// One region per block of a direct sum.
    Product(Vec<Region>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairDomainSpec {
    pub s1: Region,
    pub s2: Region,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StrongConvexityCertificate {
    pub set: Region,
    pub mu: f64,
    pub provenance: String,
}

impl StrongConvexityCertificate {
    pub fn with_mu(&self, mu: f64) -> Self {
        Self { mu, provenance: format!("{} (overridden)", self.provenance), ..self.clone() }
    }
}

/// Strong-convexity parameter on {‖w‖ ≤ m_s} ∩ dom(b), intersected with {w ≥ ε} when a floor is given.
pub fn documented_strong_convexity(
    spec: &EntropySpec,
    m_s: f64,
    eps_floor: Option<f64>,
) -> Result<StrongConvexityCertificate> {
    if !(m_s > 0.0) {
        return Err(Error::InvalidParameter(format!("set radius must be positive, got {m_s}")));
    }
    if let Some(e) = eps_floor {
        if !(e > 0.0) || !e.is_finite() {
            return Err(Error::InvalidParameter(format!("floor must be positive, got {e}")));
        }
    }
    let dim = spec.dim();
    match spec.node() {
        Node::Base(base) => {
            let (mu, provenance) = base_mu(base, spec.norm(), m_s, eps_floor)?;
            Ok(StrongConvexityCertificate {
                set: Region::Ball { center: vec![0.0; dim], radius: m_s, floor: eps_floor.map(|e| vec![e; dim]) },
                mu,
                provenance,
            })
        }
        Node::Scaled { lambda, inner } => {
            let c = documented_strong_convexity(inner, m_s, eps_floor)?;
            Ok(StrongConvexityCertificate { mu: lambda * c.mu, provenance: format!("{lambda}*[{}]", c.provenance), ..c })
        }
        Node::PlusLinear { inner, .. } => documented_strong_convexity(inner, m_s, eps_floor),
        Node::Translated { z0, inner } => {
            let c = documented_strong_convexity(inner, m_s, eps_floor)?;
            let set = match c.set {
                Region::Ball { center, radius, floor } => Region::Ball {
                    center: center.iter().zip(z0).map(|(c, z)| c - z).collect(),
                    radius,
                    floor: floor.map(|f| f.iter().zip(z0).map(|(f, z)| f - z).collect()),
                },
                other => other,
            };
            Ok(StrongConvexityCertificate { set, provenance: format!("translated [{}]", c.provenance), ..c })
        }
        Node::SumOf(members) => {
            let mut mu = 0.0;
            let mut parts = Vec::new();
            for (w, m) in members {
                let c = documented_strong_convexity(m, m_s, eps_floor)?;
                mu += w * c.mu;
                parts.push(format!("{w}*[{}]", c.provenance));
            }
            Ok(StrongConvexityCertificate {
                set: Region::Ball { center: vec![0.0; dim], radius: m_s, floor: eps_floor.map(|e| vec![e; dim]) },
                mu,
                provenance: parts.join(" + "),
            })
        }
        Node::DirectSum { blocks, c } => {
            let certs = blocks
                .iter()
                .map(|b| documented_strong_convexity(b, m_s, eps_floor))
                .collect::<Result<Vec<_>>>()?;
            let min_mu = certs.iter().map(|c| c.mu).fold(f64::INFINITY, f64::min);
            Ok(StrongConvexityCertificate {
                set: Region::Product(certs.into_iter().map(|c| c.set).collect()),
                mu: c * c * min_mu,
                provenance: format!("c^2*min(mu_i), c = {c}"),
            })
        }
    }
}

fn base_mu(base: &Base, norm: &NormSpec, m: f64, floor: Option<f64>) -> Result<(f64, String)> {
    let k = norm.equivalence_constants();
    let (c2, ci) = (k.c2, k.c_inf);
    let unbounded = |what: &str| Err(Error::NoDocumentedParameter(format!("{what} needs a bounded set")));
    // Parameter of Σ x_k^q / (q(q−1))-type terms whose Hessian is x^{q−2}, times `scale`.
    let power_mu = |q: f64, scale: f64, label: &str| -> Result<(f64, String)> {
        if q == 2.0 {
            Ok((scale * c2 * c2, format!("{label}: {scale}*c2^2")))
        } else if q < 2.0 {
            if !m.is_finite() {
                return unbounded(label);
            }
            Ok((scale * c2 * c2 / (ci * m).powf(2.0 - q), format!("{label}: {scale}*c2^2/(c_inf*M)^(2-q), q = {q}")))
        } else {
            match floor {
                Some(e) => Ok((scale * c2 * c2 * e.powf(q - 2.0), format!("{label}: {scale}*c2^2*eps^(q-2), q = {q}"))),
                None => Err(Error::NoDocumentedParameter(format!("{label} with q = {q} > 2 is not strongly convex without a floor"))),
            }
        }
    };
    match *base {
        Base::Bgs => {
            if !m.is_finite() {
                return unbounded("bgs");
            }
            Ok((c2 * c2 / (ci * m), "c2^2/(c_inf*M)".into()))
        }
        Base::Hct { q } => power_mu(q, q.abs(), "hct"),
        Base::Burg => {
            if !m.is_finite() {
                return unbounded("burg");
            }
            Ok((c2 * c2 / (ci * ci * m * m), "c2^2/(c_inf^2*M^2)".into()))
        }
        Base::IteratedLog => {
            let km = ci * m;
            if !(km > 1.0) || !km.is_finite() {
                return Err(Error::NoDocumentedParameter(format!(
                    "iterated log needs 1 < c_inf*M < inf, got {km}"
                )));
            }
            let zl = km * km.ln();
            Ok((c2 * c2 / zl * (1.0 / zl + 1.0 / km), "c2^2/(K log K)*(1/(K log K)+1/K), K = c_inf*M".into()))
        }
        Base::Beta { beta } => power_mu(beta, 1.0, "beta"),
        Base::AlphaBeta { alpha, beta } => {
            let (small, _) = power_mu(beta, beta * (1.0 - beta), "alphabeta")?;
            let big = if alpha == 1.0 {
                0.0
            } else {
                power_mu(alpha, alpha * (alpha - 1.0), "alphabeta").map(|r| r.0).unwrap_or(0.0)
            };
            Ok((small + big, format!("(1-beta)*hct_beta + (alpha-1)*hct_alpha, alpha = {alpha}, beta = {beta}")))
        }
        Base::L2Lp { p } => {
            let k = lp_lower_factor(p, norm);
            Ok(((p - 1.0) * k * k, format!("(p-1)*k^2, p = {p}, k = {k}")))
        }
        Base::Quadratic { min_eigenvalue, .. } => {
            Ok((min_eigenvalue * c2 * c2, "lambda_min(A)*c2^2".into()))
        }
        Base::Ell2Type { .. } => Ok((4.0 * c2 * c2, "4*c2^2".into())),
    }
}

/// Largest k with ‖w‖_p ≥ k‖w‖ for every w, for p ≤ 2.
fn lp_lower_factor(p: f64, norm: &NormSpec) -> f64 {
    let n = norm.dim() as f64;
    match norm.kind() {
        NormKind::Lp(r) if r >= p => 1.0,
        NormKind::Lp(r) => n.powf(1.0 / p - 1.0 / r),
        NormKind::MixedL1L2 { .. } => norm.equivalence_constants().c2,
    }
}

/// Documented gauge ψ and the pair ({x}, S₂) on which ψ(‖x − y‖) ≤ B(x, y).
pub fn documented_gauge(spec: &EntropySpec, x: &[f64]) -> Result<(GaugeSpec, PairDomainSpec)> {
    check_dim(x, spec.dim())?;
    let Node::Base(base) = spec.node() else {
        return Err(Error::NoDocumentedGauge(format!("{} is a composite entropy", spec.name())));
    };
    if spec.classify(x)? == crate::DomainStatus::OutsideDomain {
        return Err(Error::InvalidParameter("x must lie in dom(b)".into()));
    }
    let norm = spec.norm();
    let k = norm.equivalence_constants();
    let (c2, ci) = (k.c2, k.c_inf);
    let nx = norm.eval_unchecked(x);
    let pair = |radius: f64| PairDomainSpec { s1: Region::Point(x.to_vec()), s2: Region::Exterior { radius } };
    match *base {
        Base::Bgs => Ok((GaugeSpec::Linear { a: c2 * c2 / (4.0 * ci) }, pair(2.0 * nx))),
        Base::Hct { q } if q == 2.0 => Ok((GaugeSpec::Quadratic { mu: 2.0 * c2 * c2 }, pair(0.0))),
        Base::Hct { q } if q < 2.0 => {
            let a = q.abs() * c2 * c2 / (ci.powf(2.0 - q) * 2f64.powf(3.0 - q));
            Ok((GaugeSpec::Power { a, e: q }, pair(2.0 * nx)))
        }
        Base::Burg => {
            let r = burg_rx(x, norm)?;
            Ok((GaugeSpec::Log, pair(r.rx)))
        }
        Base::L2Lp { .. } | Base::Quadratic { .. } | Base::Ell2Type { .. } => {
            let c = documented_strong_convexity(spec, f64::INFINITY, None)?;
            Ok((GaugeSpec::Quadratic { mu: c.mu }, pair(0.0)))
        }
        Base::Hct { q } => Err(Error::NoDocumentedGauge(format!("hct with q = {q} > 2"))),
        Base::IteratedLog => Err(Error::NoDocumentedGauge("iterated log has only a conjectured gauge".into())),
        Base::Beta { .. } | Base::AlphaBeta { .. } => Err(Error::NoDocumentedGauge(spec.name())),
    }
}

/// The conjectured iterated-log gauge β·log(1 + log(1 + t)). Experimental; no pair domain is known.
pub fn conjectured_iterated_log_gauge(beta: f64) -> Result<GaugeSpec> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::InvalidParameter(format!("beta must lie in (0, 1), got {beta}")));
    }
    Ok(GaugeSpec::LogLog { beta })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BurgRadius {
    pub t1: f64,
    pub t2: f64,
    pub rx: f64,
}

/// r_x = max{t₁, 2t₂, 2‖x‖} for the Burg gauge.
pub fn burg_rx(x: &[f64], norm: &NormSpec) -> Result<BurgRadius> {
    check_dim(x, norm.dim())?;
    if x.iter().any(|&v| v <= 0.0) {
        return Err(Error::NotInZone);
    }
    let gamma = norm.equivalence_constants().gamma;
    let t1 = x.iter().fold(0.0f64, |m, &v| m.max(BURG_S1 * gamma * v));
    let scale = 2.0 * gamma * norm_inf(x);
    let f = |t: f64| 0.5 * (t / scale).ln() - 4.0 - 0.25 * t.ln_1p();
    // f is increasing on (0, ∞), so the threshold is its unique root (or 1 if f(1) ≥ 0).
    let t2 = if f(1.0) >= 0.0 {
        1.0
    } else {
        let mut hi = 2.0;
        while f(hi) <= 0.0 {
            hi *= 2.0;
        }
        let mut lo = hi / 2.0;
        while hi - lo > 1e-6 && hi.next_down() > lo {
            let mid = 0.5 * (lo + hi);
            if f(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi.next_up()
    };
    let rx = t1.max(2.0 * t2).max(2.0 * norm.eval_unchecked(x));
    Ok(BurgRadius { t1, t2, rx })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn certificate_examples() {
        let c = documented_strong_convexity(&EntropySpec::bgs(3), 10.0, None).unwrap();
        assert!((c.mu - 0.1).abs() < 1e-15);
        let c = documented_strong_convexity(&EntropySpec::l2lp(1.5, 4).unwrap(), 7.0, None).unwrap();
        assert_eq!(c.mu, 0.5);
        let c = documented_strong_convexity(&EntropySpec::burg(2), 2.0, None).unwrap();
        assert_eq!(c.mu, 0.25);
        let c = documented_strong_convexity(&EntropySpec::hct(2.0, 2).unwrap(), 1.0, None).unwrap();
        assert_eq!(c.mu, 2.0);
        let c = documented_strong_convexity(&EntropySpec::hct(3.0, 2).unwrap(), 5.0, Some(0.5)).unwrap();
        assert_eq!(c.mu, 1.5);
        let c = documented_strong_convexity(&EntropySpec::ell2_type(2, 4).unwrap(), 1.0, None).unwrap();
        assert!((c.mu - 0.5).abs() < 1e-15);
        let c = documented_strong_convexity(&EntropySpec::ell2_type(0, 4).unwrap(), 1.0, None).unwrap();
        assert_eq!(c.mu, 4.0);
    }

    #[test]
    fn missing_parameters() {
        let h = EntropySpec::hct(3.0, 2).unwrap();
        assert!(matches!(documented_strong_convexity(&h, 5.0, None), Err(Error::NoDocumentedParameter(_))));
        let h = EntropySpec::hct(0.5, 2).unwrap();
        assert!(matches!(
            documented_strong_convexity(&h, f64::INFINITY, None),
            Err(Error::NoDocumentedParameter(_))
        ));
    }

    #[test]
    fn l2lp_factor_under_other_norms() {
        let s = EntropySpec::l2lp(1.5, 4).unwrap().with_norm(NormSpec::euclidean(4)).unwrap();
        assert_eq!(documented_strong_convexity(&s, 1.0, None).unwrap().mu, 0.5);
        let s = EntropySpec::l2lp(1.5, 4).unwrap().with_norm(NormSpec::lp(1.0, 4).unwrap()).unwrap();
        // ‖w‖_1 ≤ 4^{1/3}‖w‖_{3/2}
        let mu = documented_strong_convexity(&s, 1.0, None).unwrap().mu;
        assert!((mu - 0.5 * 4f64.powf(-2.0 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn gauge_examples() {
        let (g, pair) = documented_gauge(&EntropySpec::bgs(2), &[0.6, 0.8]).unwrap();
        assert_eq!(g, GaugeSpec::Linear { a: 0.25 });
        assert_eq!(pair.s2, Region::Exterior { radius: 2.0 });
        let (g, _) = documented_gauge(&EntropySpec::hct(0.5, 1).unwrap(), &[1.0]).unwrap();
        let a = 0.5 / 2f64.powf(2.5);
        assert_eq!(g, GaugeSpec::Power { a, e: 0.5 });
        assert!(matches!(
            documented_gauge(&EntropySpec::iterated_log(1), &[2.0]),
            Err(Error::NoDocumentedGauge(_))
        ));
        assert!(matches!(
            documented_gauge(&EntropySpec::hct(3.0, 1).unwrap(), &[2.0]),
            Err(Error::NoDocumentedGauge(_))
        ));
    }

    #[test]
    fn gauge_inverse_round_trip() {
        let gauges = [
            GaugeSpec::Linear { a: 0.25 },
            GaugeSpec::Power { a: 0.3, e: 0.5 },
            GaugeSpec::Power { a: 0.3, e: 1.5 },
            GaugeSpec::Quadratic { mu: 2.0 },
            GaugeSpec::Log,
            GaugeSpec::LogLog { beta: 0.5 },
        ];
        for g in gauges {
            assert_eq!(g.eval(0.0), 0.0);
            for t in [1e-6, 0.3, 1.0, 17.0, 1e4] {
                let back = g.inverse(g.eval(t)).unwrap();
                assert!((back - t).abs() <= 1e-9 * t.max(1.0), "{g:?} {t} {back}");
            }
        }
        assert_eq!(GaugeSpec::Power { a: 1.0, e: -1.0 }.inverse(1.0), None);
    }

    #[test]
    fn burg_radius_for_unit_point() {
        let norm = NormSpec::euclidean(1);
        let r = burg_rx(&[1.0], &norm).unwrap();
        assert_eq!(r.t1, 65536.0);
        let f = |t: f64| 0.5 * (t / 2.0).ln() - 4.0 - 0.25 * t.ln_1p();
        // bisection oracle, independent bracket
        let (mut lo, mut hi) = (1.0f64, 1e30f64);
        for _ in 0..400 {
            let mid = (lo * hi).sqrt();
            if f(mid) > 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        assert!(r.t2 >= hi && r.t2 - hi < 1e-5);
        assert!(f(r.t2) > 0.0);
        for k in 1..200 {
            assert!(f(r.t2 * (1.0 + k as f64 * 0.37)) > 0.0);
        }
        assert_eq!(r.rx, 65536f64.max(2.0 * r.t2).max(2.0));
        assert!(burg_rx(&[0.0], &norm).is_err());
    }

    #[test]
    fn burg_s1_satisfies_its_inequality() {
        // 1.5·s^{5/8}·log s − s + 1 < 0 for s > 4⁸
        for k in 0..400 {
            let s = BURG_S1 * (1.0 + k as f64 * 0.25).powi(3);
            assert!(1.5 * s.powf(0.625) * s.ln() - s + 1.0 < 0.0);
        }
    }

    #[test]
    fn burg_radius_is_monotone() {
        let norm = NormSpec::euclidean(2);
        let a = burg_rx(&[1.0, 2.0], &norm).unwrap().rx;
        let b = burg_rx(&[1.5, 2.0], &norm).unwrap().rx;
        let c = burg_rx(&[1.5, 9.0], &norm).unwrap().rx;
        assert!(a <= b && b <= c);
    }
}
