//! Bootstrap confidence intervals for alpha.
//!
//! Units (rows) are resampled with replacement; the observed disagreement is
//! recomputed for each resample while the expected disagreement stays fixed
//! at its full-sample value, so a replicate is `1 - Do_i/De`. Rows with fewer
//! than two scores can be drawn but contribute nothing; a resample whose rows
//! are all unpairable is redrawn.

use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::alpha::{alpha_point, unit_contributions, AlphaError, UnitContribution};
use crate::distance::DistanceSpec;
use crate::matrix::ReliabilityMatrix;
use crate::stream;

#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapConfig {
    /// Number of bootstrap replicates.
    pub bootit: usize,
    /// Two-sided confidence level for the reported interval.
    pub conf_level: f64,
    pub seed: u64,
    /// Worker threads; replicate values do not depend on this.
    pub workers: usize,
    /// How many times one replicate may redraw a degenerate resample.
    pub max_redraws: usize,
}

impl BootstrapConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            bootit: 1000,
            conf_level: 0.95,
            seed,
            workers: 1,
            max_redraws: 100,
        }
    }
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        Self::with_seed(0)
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BootstrapError {
    #[error("replicate {replicate} found no pairable unit even after {redraws} redraws")]
    ResampleDegenerate { replicate: usize, redraws: usize },
    #[error("cannot take a quantile of an empty sample")]
    EmptySample,
    #[error("quantile probability must lie in [0, 1], got {0}")]
    BadProbability(f64),
    #[error("confidence level must lie strictly between 0 and 1, got {0}")]
    BadConfLevel(f64),
    #[error("bootit must be at least 1")]
    ZeroBootit,
    #[error("could not build worker pool: {0}")]
    WorkerPool(String),
    #[error(transparent)]
    Alpha(#[from] AlphaError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BootstrapResult {
    /// Replicate alphas in replicate order, exactly `bootit` of them.
    pub replicates: Vec<f64>,
    pub ci_lower: f64,
    pub ci_upper: f64,
    /// Expected disagreement of the original matrix, shared by all replicates.
    pub d_expected_fixed: f64,
    pub config: BootstrapConfig,
}

/// Resamples units and returns replicate alphas plus the central interval at
/// `config.conf_level`.
pub fn resample_alpha(
    matrix: &ReliabilityMatrix,
    distance: &DistanceSpec,
    config: &BootstrapConfig,
) -> Result<BootstrapResult, BootstrapError> {
    run_resample(matrix, distance, config, None)
}

/// Same as [`resample_alpha`], invoking `progress` once per finished
/// replicate (from whichever thread finished it).
pub fn resample_alpha_with_progress(
    matrix: &ReliabilityMatrix,
    distance: &DistanceSpec,
    config: &BootstrapConfig,
    progress: &(dyn Fn() + Sync),
) -> Result<BootstrapResult, BootstrapError> {
    run_resample(matrix, distance, config, Some(progress))
}

fn run_resample(
    matrix: &ReliabilityMatrix,
    distance: &DistanceSpec,
    config: &BootstrapConfig,
    progress: Option<&(dyn Fn() + Sync)>,
) -> Result<BootstrapResult, BootstrapError> {
    if config.bootit == 0 {
        return Err(BootstrapError::ZeroBootit);
    }
    if !(config.conf_level > 0.0 && config.conf_level < 1.0) {
        return Err(BootstrapError::BadConfLevel(config.conf_level));
    }
    let base = alpha_point(matrix, distance)?;
    let d_expected = base.d_expected;
    // Each unit collapses to (weighted pair sum, pairable score count); a
    // replicate only re-draws rows and re-reduces, with no distance calls.
    let contributions = unit_contributions(matrix, distance)?;
    let n_units = matrix.n_units();

    let task = |replicate: usize| -> Result<f64, BootstrapError> {
        let value = replicate_alpha(
            &contributions,
            n_units,
            d_expected,
            config.seed,
            replicate,
            config.max_redraws,
        )?;
        if let Some(report) = progress {
            report();
        }
        Ok(value)
    };

    let workers = config.workers.max(1);
    let replicates: Vec<f64> = if workers == 1 {
        (0..config.bootit).map(task).collect::<Result<_, _>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| BootstrapError::WorkerPool(e.to_string()))?;
        pool.install(|| {
            (0..config.bootit)
                .into_par_iter()
                .map(task)
                .collect::<Result<_, _>>()
        })?
    };

    let tail = (1.0 - config.conf_level) / 2.0;
    let ci_lower = quantile(&replicates, tail)?;
    let ci_upper = quantile(&replicates, 1.0 - tail)?;
    Ok(BootstrapResult {
        replicates,
        ci_lower,
        ci_upper,
        d_expected_fixed: d_expected,
        config: config.clone(),
    })
}

/// One replicate: draw `n_units` rows with replacement from its own RNG
/// stream, keyed by `(seed, replicate)` alone.
fn replicate_alpha(
    contributions: &[UnitContribution],
    n_units: usize,
    d_expected: f64,
    seed: u64,
    replicate: usize,
    max_redraws: usize,
) -> Result<f64, BootstrapError> {
    let mut rng = stream::substream(seed, replicate as u64);
    for _ in 0..=max_redraws {
        let mut num = 0.0;
        let mut n_pairable = 0usize;
        for _ in 0..n_units {
            let pick = rng.random_range(0..n_units);
            let c = contributions[pick];
            num += c.weighted;
            n_pairable += c.pairable_m;
        }
        if n_pairable > 0 {
            return Ok(1.0 - (num / n_pairable as f64) / d_expected);
        }
    }
    Err(BootstrapError::ResampleDegenerate {
        replicate,
        redraws: max_redraws,
    })
}

/// Quantile by linear interpolation of order statistics: with `n` sorted
/// values the `p`-quantile sits at rank `(n - 1) p + 1`.
pub fn quantile(sample: &[f64], p: f64) -> Result<f64, BootstrapError> {
    if sample.is_empty() {
        return Err(BootstrapError::EmptySample);
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(BootstrapError::BadProbability(p));
    }
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    let frac = h - lo as f64;
    Ok(sorted[lo] + frac * (sorted[hi] - sorted[lo]))
}

/// Central interval at `level` from the stored replicates; `confint(r, r.config.conf_level)`
/// reproduces `(r.ci_lower, r.ci_upper)` exactly.
pub fn confint(result: &BootstrapResult, level: f64) -> Result<(f64, f64), BootstrapError> {
    if !(level > 0.0 && level < 1.0) {
        return Err(BootstrapError::BadConfLevel(level));
    }
    let tail = (1.0 - level) / 2.0;
    Ok((
        quantile(&result.replicates, tail)?,
        quantile(&result.replicates, 1.0 - tail)?,
    ))
}
