use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("non-finite coordinate at index {0}")]
    NonFinite(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("point is not in the interior of the domain")]
    NotInInterior,
    #[error("point is not in the zone")]
    NotInZone,
    #[error("overflow evaluating exp(t^2) with t^2 = {0}")]
    Overflow(f64),
    #[error("lambda must be positive, got {0}")]
    NonpositiveLambda(f64),
    #[error("semi-equivalence constant violated: |x|_# = {sharp}, c|x| = {scaled}")]
    SemiEquivalenceViolated { sharp: f64, scaled: f64 },
    #[error("no documented strong convexity parameter: {0}")]
    NoDocumentedParameter(String),
    #[error("no documented gauge: {0}")]
    NoDocumentedGauge(String),
    #[error("segment leaves the domain")]
    SegmentLeavesDomain,
    #[error("pair domain is infeasible: {0}")]
    EmptyPair(String),
    #[error("parameter s out of range: {0}")]
    SOutOfRange(f64),
    #[error("q out of range: {0}")]
    QOutOfRange(f64),
    #[error("gamma too small: need gamma > {bound}, got {gamma}")]
    GammaTooSmall { gamma: f64, bound: f64 },
    #[error("sequence leaves the zone at step {0}")]
    SequenceLeavesZone(u64),
    #[error("entropy is not essentially smooth")]
    NotEssentiallySmooth,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(v: &[f64], expected: usize) -> Result<()> {
    if v.len() != expected {
        return Err(Error::DimensionMismatch { expected, got: v.len() });
    }
    if let Some(i) = v.iter().position(|c| !c.is_finite()) {
        return Err(Error::NonFinite(i));
    }
    Ok(())
}
