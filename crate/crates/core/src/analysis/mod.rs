//! Sampling probes for the convexity claims attached to each entropy.

mod consistency;
mod convexity;
mod probes;
mod sampler;
mod witness;

pub use consistency::{derivative_probe, nonnegativity_probe, oracle_agreement_probe, three_point_probe};
pub use convexity::{
    convexity_gap, gauge_check, modulus_estimate, modulus_scaling_check, sequential_consistency_probe,
    strong_convexity_check, Bucket, BucketGrid, ModulusTable,
};
pub use probes::{
    boundary_blowup_probe, limiting_difference_probe, levelset_probe, LevelSetOutcome, BLOWUP_STEPS, LIMITING_STEPS,
};
pub use sampler::{interior_box, Sampler};
pub use witness::{
    hct_negq_levelset_witness, sc_failure_witness, uc_failure_witness, ScWitness, UcKind, UcWitness,
};

/// λ values used wherever an infimum over λ ∈ (0, 1) is sampled.
pub const LAMBDA_GRID: [f64; 21] = [
    0.01, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85, 0.9, 0.95, 0.99,
];

/// Named input vectors of the worst violating sample.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Witness {
    pub fields: Vec<(String, Vec<f64>)>,
}

impl Witness {
    pub fn new(fields: &[(&str, &[f64])]) -> Self {
        Self { fields: fields.iter().map(|(k, v)| (k.to_string(), v.to_vec())).collect() }
    }
}

/// Outcome of one probe. `worst_margin` is the smallest slack seen; negative means violated.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport {
    pub probe: String,
    pub seed: u64,
    pub samples: usize,
    pub violations: usize,
    pub worst_margin: f64,
    pub witness: Option<Witness>,
    pub pass: bool,
}

/// Accumulates per-sample margins into a report.
#[derive(Debug)]
pub(crate) struct Tally {
    probe: String,
    seed: u64,
    samples: usize,
    violations: usize,
    worst_margin: f64,
    worst_violation: f64,
    witness: Option<Witness>,
}

impl Tally {
    pub(crate) fn new(probe: impl Into<String>, seed: u64) -> Self {
        Self {
            probe: probe.into(),
            seed,
            samples: 0,
            violations: 0,
            worst_margin: f64::INFINITY,
            worst_violation: 0.0,
            witness: None,
        }
    }

    pub(crate) fn record(&mut self, margin: f64, witness: impl FnOnce() -> Witness) {
        self.samples += 1;
        let margin = if margin.is_nan() { f64::NEG_INFINITY } else { margin };
        self.worst_margin = self.worst_margin.min(margin);
        if margin < 0.0 {
            self.violations += 1;
            if margin < self.worst_violation || self.witness.is_none() {
                self.worst_violation = margin;
                self.witness = Some(witness());
            }
        }
    }

    pub(crate) fn finish(self) -> ProbeReport {
        ProbeReport {
            probe: self.probe,
            seed: self.seed,
            samples: self.samples,
            violations: self.violations,
            worst_margin: self.worst_margin,
            witness: self.witness,
            pass: self.violations == 0,
        }
    }
}
