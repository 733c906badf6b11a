//! Bregman functions on ℝⁿ: a catalog of entropies with closed-form divergences,
//! their documented convexity constants, and sampling probes that check them.

pub mod analysis;
pub mod bregman;
pub mod entropies;
pub mod error;
pub mod extended;
pub mod norms;
pub mod numerics;

pub use bregman::{direct_sum, scale_plus_linear, sum_of, translate, Base, DomainStatus, EntropyMetadata, EntropySpec, ZoneDescriptor};
pub use error::{Error, Result};
pub use extended::ExtendedReal;
pub use norms::{EquivalenceConstants, NormKind, NormSpec};
