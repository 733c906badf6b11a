//! JSON run configuration and its translation into entropy specs.

use std::path::{Path, PathBuf};

use bregkit_core::{scale_plus_linear, translate, EntropySpec, NormSpec};
use serde::Deserialize;

use crate::catalog;

/// Settings read from `--config`. Every field may also come from a flag; flags win.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub entropy: Option<EntropyConfig>,
    pub norm: Option<String>,
    pub dim: Option<usize>,
    pub suite: Option<String>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    #[serde(default)]
    pub tolerances: Tolerances,
    /// Replaces every documented strong-convexity parameter.
    pub mu: Option<f64>,
    pub format: Option<String>,
    pub out: Option<PathBuf>,
    pub x: Option<Vec<f64>>,
    pub y: Option<Vec<f64>>,
    pub gamma: Option<f64>,
    pub s: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EntropyConfig {
    pub name: String,
    pub q: Option<f64>,
    pub beta: Option<f64>,
    pub alpha: Option<f64>,
    pub p: Option<f64>,
    /// Rows of the quadratic form.
    pub matrix: Option<Vec<Vec<f64>>>,
    pub n_split: Option<usize>,
    /// Applied in order, innermost first.
    #[serde(default)]
    pub wrappers: Vec<Wrapper>,
}

impl EntropyConfig {
    pub fn named(name: &str) -> Self {
        Self { name: name.into(), q: None, beta: None, alpha: None, p: None, matrix: None, n_split: None, wrappers: vec![] }
    }
}

// A flat struct rather than an internally tagged enum: serde buffers tagged
// content, and buffered numbers under arbitrary_precision no longer parse as f64.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Wrapper {
    pub kind: WrapperKind,
    pub lambda: Option<f64>,
    pub ell: Option<Vec<f64>>,
    pub z0: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WrapperKind {
    ScalePlusLinear,
    Translate,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub oracle: f64,
    pub nonneg: f64,
    pub gradient: f64,
    pub hessian: f64,
    pub three_point: f64,
    pub limiting: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { oracle: 1e-10, nonneg: 1e-12, gradient: 1e-5, hessian: 1e-4, three_point: 1e-10, limiting: 1e-6 }
    }
}

/// Reads a config file. Errors name the file, the field path and the line.
pub fn load(path: &Path) -> Result<RunConfig, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn parse(text: &str) -> Result<RunConfig, String> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        format!("field `{path}`: {inner}")
    })
}

/// Parses `lp:P` or `mixed:K`.
pub fn parse_norm(text: &str, dim: usize) -> Result<NormSpec, String> {
    let (kind, arg) = text.split_once(':').ok_or_else(|| format!("norm `{text}` must be lp:P or mixed:K"))?;
    let bad = |e: bregkit_core::Error| format!("norm `{text}`: {e}");
    match kind {
        "lp" => {
            let p = if arg == "inf" { f64::INFINITY } else { arg.parse().map_err(|_| format!("norm `{text}`: bad exponent"))? };
            NormSpec::lp(p, dim).map_err(bad)
        }
        "mixed" => {
            let k = arg.parse().map_err(|_| format!("norm `{text}`: bad coordinate count"))?;
            NormSpec::mixed(k, dim).map_err(bad)
        }
        _ => Err(format!("norm `{text}` must be lp:P or mixed:K")),
    }
}

/// Parses a comma-separated vector.
pub fn parse_vector(text: &str) -> Result<Vec<f64>, String> {
    text.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("`{t}` is not a number")))
        .collect()
}

/// Builds a single entropy. `dim` is the ambient dimension; for `ell2` it must be even.
pub fn build_entropy(cfg: &EntropyConfig, dim: usize, norm: Option<&str>) -> Result<EntropySpec, String> {
    let need = |v: Option<f64>, what: &str| v.ok_or_else(|| format!("entropy `{}` needs --{what}", cfg.name));
    let err = |e: bregkit_core::Error| format!("entropy `{}`: {e}", cfg.name);
    if dim == 0 {
        return Err("dimension must be at least 1".into());
    }
    let mut spec = match cfg.name.as_str() {
        "bgs" => EntropySpec::bgs(dim),
        "hct" => EntropySpec::hct(need(cfg.q, "q")?, dim).map_err(err)?,
        "burg" => EntropySpec::burg(dim),
        "iterlog" => EntropySpec::iterated_log(dim),
        "beta" => EntropySpec::beta(need(cfg.beta, "beta")?, dim).map_err(err)?,
        "alpha-beta" => EntropySpec::alpha_beta(need(cfg.alpha, "alpha")?, need(cfg.beta, "beta")?, dim).map_err(err)?,
        "l2lp" => EntropySpec::l2lp(need(cfg.p, "p")?, dim).map_err(err)?,
        "quadratic" => match &cfg.matrix {
            Some(rows) => {
                if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                    return Err(format!("quadratic matrix must be {dim}x{dim}"));
                }
                EntropySpec::quadratic(&rows.concat(), dim).map_err(err)?
            }
            None => EntropySpec::identity_quadratic(dim),
        },
        "ell2" => {
            if dim % 2 != 0 {
                return Err(format!("entropy `ell2` needs an even dimension, got {dim}"));
            }
            EntropySpec::ell2_type(cfg.n_split.unwrap_or(0), dim / 2).map_err(err)?
        }
        other => {
            return Err(format!("unknown entropy `{other}` (expected one of {})", catalog::NAMES.join(", ")))
        }
    };
    if let Some(n) = norm {
        spec = spec.with_norm(parse_norm(n, dim)?).map_err(err)?;
    }
    for w in &cfg.wrappers {
        spec = match w.kind {
            WrapperKind::ScalePlusLinear => {
                let lambda = w.lambda.ok_or("scale-plus-linear wrapper needs `lambda`".to_string())?;
                if w.z0.is_some() {
                    return Err("scale-plus-linear wrapper takes no `z0`".into());
                }
                let ell = w.ell.clone().unwrap_or_else(|| vec![0.0; dim]);
                scale_plus_linear(spec, lambda, &ell).map_err(err)?
            }
            WrapperKind::Translate => {
                let z0 = w.z0.as_ref().ok_or("translate wrapper needs `z0`".to_string())?;
                if w.lambda.is_some() || w.ell.is_some() {
                    return Err("translate wrapper takes only `z0`".into());
                }
                translate(spec, z0).map_err(err)?
            }
        };
    }
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn errors_are_located() {
        let e = parse("{\n  \"entropy\": {\"name\": \"bgs\", \"q\": \"x\"}\n}").unwrap_err();
        assert!(e.contains("entropy.q") && e.contains("line 2"), "{e}");
        let e = parse("{\"seeed\": 1}").unwrap_err();
        assert!(e.contains("seeed"), "{e}");
    }

    #[test]
    fn wrappers_apply_in_order() {
        let cfg: RunConfig = parse(
            r#"{"entropy": {"name": "burg", "wrappers": [
                {"kind": "scale-plus-linear", "lambda": 2.0},
                {"kind": "translate", "z0": [1.0]}]}}"#,
        )
        .unwrap();
        let spec = build_entropy(cfg.entropy.as_ref().unwrap(), 1, None).unwrap();
        let b = spec.divergence_closed(&[1.0], &[1.0]).unwrap().to_f64();
        assert_eq!(b, 0.0);
        let direct = EntropySpec::burg(1).divergence_closed(&[3.0], &[2.0]).unwrap().to_f64();
        assert!((spec.divergence_closed(&[2.0], &[1.0]).unwrap().to_f64() - 2.0 * direct).abs() < 1e-15);
    }

    #[test]
    fn norms_and_vectors() {
        assert!(parse_norm("lp:1", 3).is_ok());
        assert!(parse_norm("mixed:2", 4).is_ok());
        assert!(parse_norm("l1", 3).is_err());
        assert_eq!(parse_vector("1, 2.5,-3").unwrap(), vec![1.0, 2.5, -3.0]);
        assert!(parse_vector("1,,2").is_err());
        let mut cfg = EntropyConfig::named("ell2");
        assert!(build_entropy(&cfg, 3, None).is_err());
        cfg.name = "nope".into();
        assert!(build_entropy(&cfg, 3, None).unwrap_err().contains("unknown entropy"));
    }
}
