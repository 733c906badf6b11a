//! Probe suites run by `bregkit check`.

use bregkit_core::analysis::{
    boundary_blowup_probe, derivative_probe, gauge_check, hct_negq_levelset_witness, levelset_probe,
    limiting_difference_probe, modulus_estimate, modulus_scaling_check, nonnegativity_probe, oracle_agreement_probe,
    sc_failure_witness, sequential_consistency_probe, strong_convexity_check, three_point_probe, uc_failure_witness,
    BucketGrid, ProbeReport, Sampler, UcKind, Witness, BLOWUP_STEPS,
};
use bregkit_core::entropies::{
    documented_gauge, documented_strong_convexity, PairDomainSpec, Region, StrongConvexityCertificate,
};
use bregkit_core::{EntropySpec, Error};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::catalog::catalog;
use crate::config::{parse_norm, Tolerances};

pub const SUITES: [&str; 13] = [
    "all",
    "blowup",
    "gauge",
    "gradient",
    "levelset",
    "limiting",
    "modulus",
    "nonneg",
    "oracle",
    "sequential",
    "strong-convexity",
    "three-point",
    "witness",
];

/// Steps 10ᵏ, k = 0..10, used by the limiting suite.
pub const LIMITING_SUITE_STEPS: [u64; 11] = [
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
];

/// Gradient threshold for the entropy x log x, whose gradient grows only like |log t|.
pub const BGS_BLOWUP_THRESHOLD: f64 = 20.0;

#[derive(Debug, Clone)]
pub enum Selection {
    All,
    One(EntropySpec),
}

#[derive(Debug, Clone)]
pub struct Settings {
    pub selection: Selection,
    pub dim: usize,
    pub norm: Option<String>,
    pub seed: u64,
    pub samples: Option<usize>,
    pub tol: Tolerances,
    pub mu: Option<f64>,
    pub x: Option<Vec<f64>>,
    pub y: Option<Vec<f64>>,
    pub gamma: Option<f64>,
}

impl Settings {
    fn sampler(&self, default: usize) -> Sampler {
        Sampler::new(self.seed, self.samples.unwrap_or(default))
    }

    fn specs(&self) -> Result<Vec<EntropySpec>, String> {
        self.fixed(catalog(self.dim, self.seed))
    }

    /// `specs` under the selected norm, or the single selected entropy.
    fn fixed(&self, specs: Vec<EntropySpec>) -> Result<Vec<EntropySpec>, String> {
        match &self.selection {
            Selection::One(s) => Ok(vec![s.clone()]),
            Selection::All => specs
                .into_iter()
                .map(|s| match &self.norm {
                    Some(n) => {
                        let norm = parse_norm(n, s.dim())?;
                        s.with_norm(norm).map_err(|e| e.to_string())
                    }
                    None => Ok(s),
                })
                .collect(),
        }
    }
}

/// Runs one suite (or all of them). Reports come back sorted by probe name.
pub fn run(suite: &str, st: &Settings) -> Result<Vec<ProbeReport>, String> {
    let mut out = Vec::new();
    let names: Vec<&str> = if suite == "all" { SUITES[1..].to_vec() } else { vec![suite] };
    for name in names {
        out.extend(run_one(name, st)?);
    }
    out.sort_by(|a, b| a.probe.cmp(&b.probe));
    Ok(out)
}

fn run_one(suite: &str, st: &Settings) -> Result<Vec<ProbeReport>, String> {
    let e = |e: Error| e.to_string();
    let mut out = Vec::new();
    match suite {
        "oracle" => {
            for s in st.specs()? {
                out.push(oracle_agreement_probe(&s, &st.sampler(10_000), st.tol.oracle).map_err(e)?);
            }
        }
        "nonneg" => {
            for s in st.specs()? {
                out.push(nonnegativity_probe(&s, &st.sampler(10_000), st.tol.nonneg).map_err(e)?);
            }
        }
        "three-point" => {
            for s in st.specs()? {
                out.push(three_point_probe(&s, &st.sampler(10_000), st.tol.three_point).map_err(e)?);
            }
        }
        "gradient" => {
            for s in st.specs()? {
                out.push(derivative_probe(&s, &st.sampler(1_000), st.tol.gradient, st.tol.hessian).map_err(e)?);
            }
        }
        "strong-convexity" | "sequential" => {
            for (s, cert) in certificates(st)? {
                let r = if suite == "sequential" {
                    sequential_consistency_probe(&s, &cert, &st.sampler(10_000))
                } else {
                    strong_convexity_check(&s, &cert, &st.sampler(10_000))
                };
                out.push(r.map_err(e)?);
            }
        }
        "gauge" => out.extend(gauge_suite(st)?),
        "levelset" => out.extend(levelset_suite(st)?),
        "limiting" => out.extend(limiting_suite(st)?),
        "blowup" => out.extend(blowup_suite(st)?),
        "witness" => out.extend(witness_suite(st)?),
        "modulus" => out.extend(modulus_suite(st)?),
        other => return Err(format!("unknown suite `{other}` (expected one of {})", SUITES.join(", "))),
    }
    Ok(out)
}

/// Radius of the certificate ball. The ℓ²-type entropy overflows far from the origin.
fn certificate_radius(s: &EntropySpec) -> f64 {
    if s.name().contains("ell2") {
        1.0
    } else {
        10.0
    }
}

/// Documented certificate on the ball of radius 10, with floor 0.1 where a floor is required.
pub fn certificate_for(s: &EntropySpec) -> Result<StrongConvexityCertificate, Error> {
    let m = certificate_radius(s);
    match documented_strong_convexity(s, m, None) {
        Err(Error::NoDocumentedParameter(_)) => documented_strong_convexity(s, m, Some(0.1)),
        other => other,
    }
}

fn certificates(st: &Settings) -> Result<Vec<(EntropySpec, StrongConvexityCertificate)>, String> {
    st.specs()?
        .into_iter()
        .map(|s| {
            let c = certificate_for(&s).map_err(|e| format!("{}: {e}", s.name()))?;
            let c = match st.mu {
                Some(mu) => c.with_mu(mu),
                None => c,
            };
            Ok((s, c))
        })
        .collect()
}

fn default_point(s: &EntropySpec, value: f64) -> Vec<f64> {
    s.metadata().zone.lower.iter().map(|l| l.map_or(value, |l| l + value)).collect()
}

fn rename(mut r: ProbeReport, probe: String) -> ProbeReport {
    r.probe = probe;
    r
}

fn gauge_suite(st: &Settings) -> Result<Vec<ProbeReport>, String> {
    let e = |e: Error| e.to_string();
    let specs = st.fixed(vec![
        EntropySpec::bgs(st.dim),
        EntropySpec::hct(-1.0, st.dim).map_err(e)?,
        EntropySpec::hct(0.5, st.dim).map_err(e)?,
        EntropySpec::hct(1.5, st.dim).map_err(e)?,
        EntropySpec::burg(st.dim),
    ])?;
    let mut out = Vec::new();
    for s in specs {
        let points = match &st.x {
            Some(x) => vec![x.clone()],
            None => vec![default_point(&s, 1.0), default_point(&s, 0.1)],
        };
        for x in points {
            let (g, pair) = documented_gauge(&s, &x).map_err(|er| format!("{}: {er}", s.name()))?;
            let r = gauge_check(&s, &g, &pair, &st.sampler(10_000)).map_err(e)?;
            out.push(rename(r, format!("gauge/{}/x0={}", s.name(), x[0])));
        }
    }
    Ok(out)
}

fn levelset_suite(st: &Settings) -> Result<Vec<ProbeReport>, String> {
    let e = |e: Error| e.to_string();
    let specs = st.fixed(vec![EntropySpec::bgs(st.dim), EntropySpec::burg(st.dim)])?;
    let gammas = match st.gamma {
        Some(g) => vec![g],
        None => vec![0.1, 1.0, 10.0],
    };
    let mut out = Vec::new();
    for s in &specs {
        let x = st.x.clone().unwrap_or_else(|| default_point(s, 1.0));
        for &g in &gammas {
            let o = levelset_probe(s, &x, g, &st.sampler(1_000)).map_err(|er| format!("{}: {er}", s.name()))?;
            out.push(rename(o.report, format!("levelset/{}/gamma={g}", s.name())));
        }
    }
    if matches!(st.selection, Selection::All) {
        out.push(negq_membership(st.dim, st.seed).map_err(e)?);
    }
    Ok(out)
}

/// For q = −1 and x = (1, …, 1): points above the witness t₀ and the point (10⁶, …, 10⁶)
/// all lie in the level set {B(x, ·) ≤ γ}.
pub fn negq_membership(dim: usize, seed: u64) -> Result<ProbeReport, Error> {
    let spec = EntropySpec::hct(-1.0, dim)?;
    let x = vec![1.0; dim];
    let gamma = dim as f64;
    let t0 = hct_negq_levelset_witness(-1.0, &x, gamma)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = vec![vec![1e6; dim]];
    for _ in 0..1000 {
        checks.push((0..dim).map(|_| t0 * (1.0 + 1e-9) + rng.gen_range(0.0f64..6.0).exp_m1() * t0.max(1.0)).collect());
    }
    let margins = checks
        .into_iter()
        .map(|y| {
            let b = spec.divergence_closed(&x, &y)?.to_f64();
            Ok((gamma - b, Witness::new(&[("y", &y), ("t0", &[t0])])))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(report("levelset/hct(q=-1)/unbounded".into(), seed, margins))
}

/// Builds a report from explicit margins.
pub fn report(probe: String, seed: u64, margins: Vec<(f64, Witness)>) -> ProbeReport {
    let mut r = ProbeReport {
        probe,
        seed,
        samples: margins.len(),
        violations: 0,
        worst_margin: f64::INFINITY,
        witness: None,
        pass: true,
    };
    let mut worst_violation = 0.0;
    for (m, w) in margins {
        let m = if m.is_nan() { f64::NEG_INFINITY } else { m };
        r.worst_margin = r.worst_margin.min(m);
        if m < 0.0 {
            r.violations += 1;
            if m < worst_violation || r.witness.is_none() {
                worst_violation = m;
                r.witness = Some(w);
            }
        }
    }
    r.pass = r.violations == 0;
    r
}

fn limiting_suite(st: &Settings) -> Result<Vec<ProbeReport>, String> {
    let e = |e: Error| e.to_string();
    let mut out = Vec::new();
    let mut configs: Vec<(EntropySpec, Vec<f64>, Vec<f64>, Vec<f64>, String)> = Vec::new();
    if let Selection::All = st.selection {
        configs.push((EntropySpec::bgs(1), vec![2.0], vec![1.0], vec![1.0], "example".into()));
        configs.push((EntropySpec::burg(1), vec![1.0], vec![2.0], vec![-1.0], "example".into()));
    }
    let specs = st.fixed(vec![EntropySpec::bgs(1), EntropySpec::burg(1), EntropySpec::hct(1.5, 1).map_err(e)?])?;
    let mut rng = ChaCha8Rng::seed_from_u64(st.seed);
    for s in specs {
        let n = s.dim();
        let lower = default_point(&s, 0.0);
        for k in 0..10 {
            let x: Vec<f64> = lower.iter().map(|l| l + rng.gen_range(0.5..3.0)).collect();
            let y: Vec<f64> = lower.iter().map(|l| l + rng.gen_range(0.5..3.0)).collect();
            let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.4..0.4)).collect();
            configs.push((s.clone(), x, y, v, format!("config{k}")));
        }
    }
    for (s, x, y, v, label) in configs {
        let (x, y) = match (&st.x, &st.y) {
            (Some(x), Some(y)) => (x.clone(), y.clone()),
            _ => (x, y),
        };
        let r = limiting_difference_probe(&s, &x, &y, &v, &LIMITING_SUITE_STEPS, st.tol.limiting).map_err(e)?;
        out.push(rename(with_seed(r, st.seed), format!("limiting/{}/{label}", s.name())));
    }
    Ok(out)
}

fn with_seed(mut r: ProbeReport, seed: u64) -> ProbeReport {
    r.seed = seed;
    r
}

fn blowup_suite(st: &Settings) -> Result<Vec<ProbeReport>, String> {
    let e = |e: Error| e.to_string();
    let n = st.dim;
    let mut out = Vec::new();
    let mut run = |s: &EntropySpec, threshold: f64, label: String| -> Result<(), String> {
        let interior = default_point(s, 1.0);
        let mut p = interior.clone();
        p[0] = s.metadata().zone.lower[0].ok_or_else(|| format!("{} has no boundary", s.name()))?;
        let mut v = vec![0.0; s.dim()];
        v[0] = 0.5;
        let r = boundary_blowup_probe(s, &p, &v, &BLOWUP_STEPS, threshold).map_err(e)?;
        out.push(rename(with_seed(r, st.seed), label));
        Ok(())
    };
    match &st.selection {
        Selection::One(s) => {
            let t = if s.name() == "bgs" { BGS_BLOWUP_THRESHOLD } else { 1e6 };
            run(s, t, format!("blowup/{}", s.name()))?;
        }
        Selection::All => {
            run(&EntropySpec::bgs(n), BGS_BLOWUP_THRESHOLD, format!("blowup/bgs/threshold={BGS_BLOWUP_THRESHOLD}"))?;
            for s in [EntropySpec::burg(n), EntropySpec::iterated_log(n), EntropySpec::hct(0.5, n).map_err(e)?] {
                run(&s, 1e6, format!("blowup/{}", s.name()))?;
            }
            let hct3 = EntropySpec::hct(3.0, n).map_err(e)?;
            let got = boundary_blowup_probe(&hct3, &vec![0.0; n], &vec![1.0; n], &BLOWUP_STEPS, 1e6);
            let ok = matches!(got, Err(Error::NotEssentiallySmooth));
            out.push(report(
                "blowup/hct(q=3)/rejected".into(),
                st.seed,
                vec![(if ok { 0.0 } else { -1.0 }, Witness::default())],
            ));
        }
    }
    Ok(out)
}

fn witness_suite(st: &Settings) -> Result<Vec<ProbeReport>, String> {
    let e = |e: Error| e.to_string();
    let n = st.dim;
    let decades: Vec<f64> = (1..=6).map(|k| 10f64.powi(k)).collect();
    let fine: Vec<f64> = (4..=24).map(|k| 10f64.powf(k as f64 / 4.0)).collect();
    let mut out = Vec::new();

    let mut m = Vec::new();
    for &s in &decades {
        let w = uc_failure_witness(UcKind::Bgs, s, n).map_err(e)?;
        let b = EntropySpec::bgs(n).divergence_closed(&w.x, &w.y).map_err(e)?.to_f64();
        let d: f64 = w.x.iter().zip(&w.y).map(|(a, c)| (a - c) * (a - c)).sum::<f64>().sqrt();
        let wit = Witness::new(&[("s", &[s]), ("b", &[b])]);
        m.push((b - 0.25 / s, wit.clone()));
        m.push((1.0 / s - b, wit.clone()));
        m.push((-(d - 1.0).abs(), wit));
    }
    out.push(report("witness/bgs-uc".into(), st.seed, m));

    for kind in [UcKind::Burg, UcKind::IterLog, UcKind::HctHalf] {
        let spec = kind.spec(n);
        let mut m = Vec::new();
        let mut prev = f64::INFINITY;
        for &s in &fine {
            let w = uc_failure_witness(kind, s, n).map_err(e)?;
            let b = spec.divergence_closed(&w.x, &w.y).map_err(e)?.to_f64();
            let wit = Witness::new(&[("s", &[s]), ("b", &[b])]);
            m.push((prev - b, wit.clone()));
            prev = b;
            if kind == UcKind::HctHalf {
                let d = w.x[0] - w.y[0];
                m.push((1e-12 * s.sqrt() - (d - s.sqrt()).abs(), wit));
            }
        }
        if kind != UcKind::HctHalf {
            m.push((1e-5 - prev, Witness::new(&[("s", &[1e6]), ("b", &[prev])])));
        }
        let label = match kind {
            UcKind::Burg => "burg",
            UcKind::IterLog => "iterlog",
            _ => "hct-half",
        };
        out.push(report(format!("witness/{label}-uc"), st.seed, m));
    }

    for (q, params) in [
        (3.0, (1..=8).map(|k| 10f64.powi(-k)).collect::<Vec<_>>()),
        (1.5, (2..=6).map(|k| 10f64.powi(k)).collect()),
    ] {
        let mut m = Vec::new();
        let mut prev = f64::INFINITY;
        for p in params {
            let w = sc_failure_witness(q, p, n).map_err(e)?;
            let wit = Witness::new(&[("param", &[p]), ("ratio", &[w.ratio])]);
            m.push((1e-6 * w.ratio_closed.abs() - (w.ratio - w.ratio_closed).abs(), wit.clone()));
            m.push((prev - w.ratio, wit));
            prev = w.ratio;
        }
        out.push(report(format!("witness/hct(q={q})-sc"), st.seed, m));
    }
    out.push(rename(negq_membership(n, st.seed).map_err(e)?, "witness/hct(q=-1)-levelset".into()));
    Ok(out)
}

fn modulus_suite(st: &Settings) -> Result<Vec<ProbeReport>, String> {
    let e = |e: Error| e.to_string();
    let n = st.dim;
    let grid = BucketGrid::geometric(0.05, 30.0, 1.05).map_err(e)?;
    let mut out = Vec::new();
    let mut go = |s: EntropySpec, pair: PairDomainSpec, slack: f64| -> Result<(), String> {
        let table = modulus_estimate(&s, &pair, &grid, &st.sampler(10_000)).map_err(e)?;
        out.push(rename(modulus_scaling_check(&table, slack, MODULUS_MAX_RATIO, st.seed), format!("modulus/{}", s.name())));
        Ok(())
    };
    match &st.selection {
        Selection::One(s) => {
            let (lo, hi) = bregkit_core::analysis::interior_box(s);
            let b = Region::Box { lower: lo, upper: hi };
            go(s.clone(), PairDomainSpec { s1: b.clone(), s2: b }, MODULUS_SLACK)?;
        }
        Selection::All => {
            let ball = Region::Ball { center: vec![0.0; n], radius: 1.0, floor: None };
            go(EntropySpec::identity_quadratic(n), PairDomainSpec { s1: ball.clone(), s2: ball }, 0.1)?;
            let b = Region::Box { lower: vec![0.1; n], upper: vec![10.0; n] };
            go(EntropySpec::bgs(n), PairDomainSpec { s1: b.clone(), s2: b }, MODULUS_SLACK)?;
        }
    }
    Ok(out)
}

/// Slack of the scaling check for estimated (not closed-form) moduli.
pub const MODULUS_SLACK: f64 = 0.5;

/// Largest distance ratio compared by the scaling check (every pair of buckets).
pub const MODULUS_MAX_RATIO: f64 = f64::INFINITY;
