//! Krippendorff's alpha for inter-rater agreement.
//!
//! The crate estimates the agreement coefficient `alpha = 1 - Do/De`, where
//! `Do` is the observed disagreement between the scores assigned to each unit
//! and `De` is the disagreement expected when scores are paired at random.
//! Scores may be missing: units keep whatever scores are present, units with
//! fewer than two scores contribute nothing to `Do`, and every present score
//! participates in `De`.
//!
//! Beyond the point estimate there are bootstrap confidence intervals
//! ([`resample_alpha`]), leave-one-out influence diagnostics ([`dfbeta_units`],
//! [`dfbeta_coders`]), and a one-way ANOVA simulator for coverage studies
//! ([`run_coverage`]). All randomized routines are deterministic given a seed,
//! independently of how many worker threads run them.

pub mod alpha;
pub mod bootstrap;
pub mod distance;
pub mod expr;
pub mod influence;
pub mod matrix;
pub mod mrpp;
pub mod simulate;

mod stream;
#[cfg(test)]
mod testdata;

pub use alpha::{
    alpha_point, anova_alpha_oracle, expected_disagreement, interpret, observed_disagreement,
    AgreementLabel, AlphaError, AlphaEstimate,
};
pub use bootstrap::{
    confint, quantile, resample_alpha, resample_alpha_with_progress, BootstrapConfig,
    BootstrapError, BootstrapResult,
};
pub use distance::{DistanceError, DistanceSpec};
pub use expr::{parse, EvalError, Expr, ParseError};
pub use influence::{dfbeta, dfbeta_coders, dfbeta_units, DfBetaReport, InfluenceError};
pub use matrix::{MatrixError, ReliabilityMatrix};
pub use mrpp::{mrpp_delta, MrppError, MrppInput};
pub use simulate::{
    gen_anova, run_coverage, true_alpha, AnovaConfig, CoverageReport, RepRecord, SimulateError,
};
