//! Argument parsing and the five subcommands.

use std::io::Write;
use std::path::PathBuf;

use bregkit_core::analysis::{
    hct_negq_levelset_witness, interior_box, levelset_probe, modulus_estimate, sc_failure_witness,
    uc_failure_witness, BucketGrid, Sampler, UcKind,
};
use bregkit_core::entropies::{PairDomainSpec, Region};
use bregkit_core::{EntropySpec, ExtendedReal};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::config::{self, EntropyConfig, RunConfig};
use crate::report::{self, render};
use crate::suites::{self, Selection, Settings};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "bregkit", version, about = "Evaluate Bregman divergences and probe convexity claims")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Divergence B(x, y) by the closed form and by the generic definition.
    Eval(Common),
    /// Run a probe suite and write a report.
    Check {
        #[arg(long)]
        suite: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Print a witness pair, or sweep its parameter.
    Witness {
        #[arg(long, value_enum)]
        kind: WitnessKind,
        /// s1:s2:N for N log-spaced values, or s1:s2:log for one per decade.
        #[arg(long)]
        sweep: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Estimate the modulus of convexity on the sampling box.
    Modulus(Common),
    /// Ray-search the level set {y : B(x, y) ≤ γ}.
    Levelset(Common),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WitnessKind {
    BgsUc,
    BurgUc,
    IterlogUc,
    HctHalfUc,
    HctSc,
    HctNegq,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Default, Args)]
pub struct Common {
    #[arg(long)]
    pub entropy: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub n_split: Option<usize>,
    #[arg(long)]
    pub dim: Option<usize>,
    /// lp:P or mixed:K
    #[arg(long)]
    pub norm: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub y: Option<String>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub s: Option<f64>,
    /// Replace documented strong-convexity parameters.
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long, env = "BREGKIT_SEED")]
    pub seed: Option<u64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Flags merged over the config file.
struct Resolved {
    file: RunConfig,
    entropy: Option<EntropyConfig>,
    dim: Option<usize>,
    norm: Option<String>,
    x: Option<Vec<f64>>,
    y: Option<Vec<f64>>,
    gamma: Option<f64>,
    s: Option<f64>,
    mu: Option<f64>,
    seed: u64,
    samples: Option<usize>,
    /// `None` when neither flag nor file chose one.
    format: Option<Format>,
    out: Option<PathBuf>,
}

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_DIM: usize = 3;

fn resolve(c: &Common) -> Result<Resolved, String> {
    let file = match &c.config {
        Some(p) => config::load(p)?,
        None => RunConfig::default(),
    };
    let mut entropy = match (&c.entropy, &file.entropy) {
        (Some(name), Some(f)) if *name == f.name => Some(f.clone()),
        (Some(name), _) => Some(EntropyConfig::named(name)),
        (None, f) => f.clone(),
    };
    if let Some(e) = entropy.as_mut() {
        e.q = c.q.or(e.q);
        e.beta = c.beta.or(e.beta);
        e.alpha = c.alpha.or(e.alpha);
        e.p = c.p.or(e.p);
        e.n_split = c.n_split.or(e.n_split);
    }
    let vector = |flag: &Option<String>, file: &Option<Vec<f64>>| -> Result<Option<Vec<f64>>, String> {
        match flag {
            Some(t) => config::parse_vector(t).map(Some),
            None => Ok(file.clone()),
        }
    };
    let format = match (c.format, file.format.as_deref()) {
        (Some(f), _) => Some(f),
        (None, None) => None,
        (None, Some("json")) => Some(Format::Json),
        (None, Some("csv")) => Some(Format::Csv),
        (None, Some(other)) => return Err(format!("format must be json or csv, got `{other}`")),
    };
    Ok(Resolved {
        entropy,
        dim: c.dim.or(file.dim),
        norm: c.norm.clone().or_else(|| file.norm.clone()),
        x: vector(&c.x, &file.x)?,
        y: vector(&c.y, &file.y)?,
        gamma: c.gamma.or(file.gamma),
        s: c.s.or(file.s),
        mu: c.mu.or(file.mu),
        seed: c.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
        samples: c.samples.or(file.samples),
        format,
        out: c.out.clone().or_else(|| file.out.clone()),
        file,
    })
}

impl Resolved {
    fn single(&self, dim: usize) -> Result<EntropySpec, String> {
        match &self.entropy {
            Some(e) if e.name != "all" => config::build_entropy(e, dim, self.norm.as_deref()),
            _ => Err("this command needs a single --entropy".into()),
        }
    }

    fn selection(&self, dim: usize) -> Result<Selection, String> {
        match &self.entropy {
            None => Ok(Selection::All),
            Some(e) if e.name == "all" => Ok(Selection::All),
            Some(_) => self.single(dim).map(Selection::One),
        }
    }

    fn emit(&self, text: &str) -> Result<(), String> {
        match &self.out {
            Some(p) => std::fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
            None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
        }
    }
}

/// Parses `args` and runs the command. Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cmd: Command) -> Result<i32, String> {
    match cmd {
        Command::Eval(c) => eval(&resolve(&c)?),
        Command::Check { suite, common } => {
            let r = resolve(&common)?;
            let suite = suite.or_else(|| r.file.suite.clone()).unwrap_or_else(|| "all".into());
            check(&r, &suite)
        }
        Command::Witness { kind, sweep, common } => witness(&resolve(&common)?, kind, sweep.as_deref()),
        Command::Modulus(c) => modulus(&resolve(&c)?),
        Command::Levelset(c) => levelset(&resolve(&c)?),
    }
}

fn eval(r: &Resolved) -> Result<i32, String> {
    let x = r.x.clone().ok_or("eval needs --x")?;
    let y = r.y.clone().ok_or("eval needs --y")?;
    let dim = r.dim.unwrap_or(x.len());
    let spec = r.single(dim)?;
    let closed = spec.divergence_closed(&x, &y).map_err(|e| e.to_string())?;
    let generic = spec.divergence_generic(&x, &y).map_err(|e| e.to_string())?;
    let diff = match (closed, generic) {
        (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => render((a - b).abs()),
        (ExtendedReal::PosInfinity, ExtendedReal::PosInfinity) => "0".into(),
        _ => "inf".into(),
    };
    let text = match r.format {
        None => format!("closed     {closed}\ngeneric    {generic}\ndifference {diff}\n"),
        Some(Format::Json) => {
            let v = json!({
                "closed": report::number(closed.to_f64()),
                "generic": report::number(generic.to_f64()),
                "difference": diff,
            });
            format!("{v}\n")
        }
        Some(Format::Csv) => format!("closed,generic,difference\n{closed},{generic},{diff}\n"),
    };
    r.emit(&text)?;
    Ok(EXIT_PASS)
}

fn check(r: &Resolved, suite: &str) -> Result<i32, String> {
    let dim = r.dim.unwrap_or(DEFAULT_DIM);
    let settings = Settings {
        selection: r.selection(dim)?,
        dim,
        norm: r.norm.clone(),
        seed: r.seed,
        samples: r.samples,
        tol: r.file.tolerances,
        mu: r.mu,
        x: r.x.clone(),
        y: r.y.clone(),
        gamma: r.gamma,
    };
    let reports = suites::run(suite, &settings)?;
    let text = match r.format.unwrap_or(Format::Json) {
        Format::Json => report::to_json(&reports),
        Format::Csv => report::to_csv(&reports),
    };
    r.emit(&text)?;
    let failed: Vec<&str> = reports.iter().filter(|p| !p.pass).map(|p| p.probe.as_str()).collect();
    eprintln!("{} probes, {} failed", reports.len(), failed.len());
    for f in &failed {
        eprintln!("FAIL {f}");
    }
    Ok(if failed.is_empty() { EXIT_PASS } else { EXIT_VIOLATION })
}

fn parse_sweep(text: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || format!("sweep `{text}` must be s1:s2:N or s1:s2:log");
    let [a, b, n] = parts[..] else { return Err(bad()) };
    let a: f64 = a.parse().map_err(|_| bad())?;
    let b: f64 = b.parse().map_err(|_| bad())?;
    if !(a > 0.0 && b > a) {
        return Err(bad());
    }
    if n == "log" {
        let mut out = vec![a];
        let mut s = 10f64.powf(a.log10().floor() + 1.0);
        while s < b {
            out.push(s);
            s *= 10.0;
        }
        out.push(b);
        return Ok(out);
    }
    let n: usize = n.parse().map_err(|_| bad())?;
    if n < 2 {
        return Err(bad());
    }
    let (la, lb) = (a.ln(), b.ln());
    Ok((0..n).map(|k| (la + (lb - la) * k as f64 / (n - 1) as f64).exp()).collect())
}

fn witness(r: &Resolved, kind: WitnessKind, sweep: Option<&str>) -> Result<i32, String> {
    let e = |e: bregkit_core::Error| e.to_string();
    if kind == WitnessKind::HctNegq {
        let q = r.entropy.as_ref().and_then(|c| c.q).unwrap_or(-1.0);
        let x = r.x.clone().ok_or("hct-negq needs --x")?;
        let gamma = r.gamma.ok_or("hct-negq needs --gamma")?;
        let t0 = hct_negq_levelset_witness(q, &x, gamma).map_err(e)?;
        r.emit(&format!("t0 {}\n", render(t0)))?;
        return Ok(EXIT_PASS);
    }
    let dim = r.dim.unwrap_or(1);
    let values = match sweep {
        Some(s) => parse_sweep(s)?,
        None => vec![r.s.ok_or("witness needs --s or --sweep")?],
    };
    let mut rows = Vec::new();
    for &s in &values {
        let (x, y, b) = match kind {
            WitnessKind::HctSc => {
                let q = r.entropy.as_ref().and_then(|c| c.q).ok_or("hct-sc needs --q")?;
                let w = sc_failure_witness(q, s, dim).map_err(e)?;
                (w.x, w.y, w.ratio)
            }
            _ => {
                let k = match kind {
                    WitnessKind::BgsUc => UcKind::Bgs,
                    WitnessKind::BurgUc => UcKind::Burg,
                    WitnessKind::IterlogUc => UcKind::IterLog,
                    _ => UcKind::HctHalf,
                };
                let w = uc_failure_witness(k, s, dim).map_err(e)?;
                let b = k.spec(dim).divergence_closed(&w.x, &w.y).map_err(e)?.to_f64();
                (w.x, w.y, b)
            }
        };
        rows.push((s, x, y, b));
    }
    let label = if kind == WitnessKind::HctSc { "ratio" } else { "b" };
    let text = if sweep.is_some() {
        let mut t = format!("s,{label}\n");
        for (s, _, _, b) in &rows {
            t.push_str(&format!("{},{}\n", render(*s), render(*b)));
        }
        t
    } else {
        let (_, x, y, b) = &rows[0];
        let join = |v: &[f64]| v.iter().map(|c| render(*c)).collect::<Vec<_>>().join(",");
        format!("x {}\ny {}\n{label} {}\n", join(x), join(y), render(*b))
    };
    r.emit(&text)?;
    Ok(EXIT_PASS)
}

fn modulus(r: &Resolved) -> Result<i32, String> {
    let e = |e: bregkit_core::Error| e.to_string();
    let dim = r.dim.unwrap_or(DEFAULT_DIM);
    let spec = r.single(dim)?;
    let (lo, hi) = interior_box(&spec);
    let b = Region::Box { lower: lo, upper: hi };
    let grid = BucketGrid::geometric(0.05, 30.0, 1.05).map_err(e)?;
    let sampler = Sampler::new(r.seed, r.samples.unwrap_or(10_000));
    let table = modulus_estimate(&spec, &PairDomainSpec { s1: b.clone(), s2: b }, &grid, &sampler).map_err(e)?;
    let text = match r.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut t = String::from("t_lo,t_hi,t_center,t_width,psi_hat,n_samples\n");
            for b in &table.buckets {
                t.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    render(b.t_lo),
                    render(b.t_hi),
                    render(b.t_center),
                    render(b.t_width),
                    render(b.psi_hat.to_f64()),
                    b.n_samples
                ));
            }
            t
        }
        Format::Json => {
            let rows: Vec<Value> = table
                .buckets
                .iter()
                .map(|b| {
                    json!({
                        "t_lo": report::number(b.t_lo),
                        "t_hi": report::number(b.t_hi),
                        "t_center": report::number(b.t_center),
                        "t_width": report::number(b.t_width),
                        "psi_hat": report::number(b.psi_hat.to_f64()),
                        "n_samples": b.n_samples,
                    })
                })
                .collect();
            format!("{}\n", serde_json::to_string_pretty(&rows).expect("serializable"))
        }
    };
    r.emit(&text)?;
    Ok(EXIT_PASS)
}

fn levelset(r: &Resolved) -> Result<i32, String> {
    let x = r.x.clone().ok_or("levelset needs --x")?;
    let dim = r.dim.unwrap_or(x.len());
    let spec = r.single(dim)?;
    let gamma = r.gamma.ok_or("levelset needs --gamma")?;
    let sampler = Sampler::new(r.seed, r.samples.unwrap_or(1_000));
    let out = levelset_probe(&spec, &x, gamma, &sampler).map_err(|e| e.to_string())?;
    let mut v = report::to_value(&out.report);
    v["diameter"] = report::number(out.diameter);
    v["bound"] = report::number(out.bound);
    let text = match r.format.unwrap_or(Format::Json) {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&v).expect("serializable")),
        Format::Csv => format!("diameter,bound,pass\n{},{},{}\n", render(out.diameter), render(out.bound), out.report.pass),
    };
    r.emit(&text)?;
    Ok(if out.report.pass { EXIT_PASS } else { EXIT_VIOLATION })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweeps() {
        assert_eq!(parse_sweep("10:1000000:log").unwrap(), vec![10.0, 100.0, 1e3, 1e4, 1e5, 1e6]);
        let v = parse_sweep("1:100:3").unwrap();
        assert_eq!(v.len(), 3);
        assert!((v[1] - 10.0).abs() < 1e-12);
        assert!(parse_sweep("1:2").is_err());
        assert!(parse_sweep("5:1:3").is_err());
    }
}
