//! One-way ANOVA data generation and bootstrap coverage studies.
//!
//! Scores follow `Y_ij = mu + tau_i + eps_ij` with unit effects
//! `tau_i ~ N(0, sigma_tau^2)` and noise `eps_ij ~ N(0, sigma_eps^2)`, so the
//! population agreement coefficient is
//! `sigma_tau^2 / (sigma_tau^2 + sigma_eps^2)`. Cells are then blanked
//! independently with probability `missing_rate`.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::alpha::alpha_point;
use crate::bootstrap::{resample_alpha, BootstrapConfig, BootstrapError};
use crate::distance::DistanceSpec;
use crate::matrix::{MatrixError, ReliabilityMatrix};
use crate::stream;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnovaConfig {
    pub mu: f64,
    pub sigma_tau: f64,
    pub sigma_eps: f64,
    pub n_units: usize,
    pub n_coders: usize,
    /// Probability that any one cell is blanked, independently.
    pub missing_rate: f64,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimulateError {
    #[error("mu must be finite, got {0}")]
    BadMu(f64),
    #[error("sigma_tau must be finite and non-negative, got {0}")]
    BadSigmaTau(f64),
    #[error("sigma_eps must be finite and positive, got {0}")]
    BadSigmaEps(f64),
    #[error("missing_rate must lie in [0, 1), got {0}")]
    BadMissingRate(f64),
    #[error("reps must be at least 1")]
    ZeroReps,
    #[error("replication {rep} failed: {source}")]
    Rep { rep: usize, source: BootstrapError },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

impl AnovaConfig {
    fn validate(&self) -> Result<(), SimulateError> {
        if !self.mu.is_finite() {
            return Err(SimulateError::BadMu(self.mu));
        }
        if !self.sigma_tau.is_finite() || self.sigma_tau < 0.0 {
            return Err(SimulateError::BadSigmaTau(self.sigma_tau));
        }
        if !self.sigma_eps.is_finite() || self.sigma_eps <= 0.0 {
            return Err(SimulateError::BadSigmaEps(self.sigma_eps));
        }
        if !(0.0..1.0).contains(&self.missing_rate) {
            return Err(SimulateError::BadMissingRate(self.missing_rate));
        }
        if self.n_units == 0 {
            return Err(SimulateError::Matrix(MatrixError::NoUnits));
        }
        if self.n_coders < 2 {
            return Err(SimulateError::Matrix(MatrixError::TooFewCoders(
                self.n_coders,
            )));
        }
        Ok(())
    }
}

/// Population alpha implied by the variance components.
pub fn true_alpha(cfg: &AnovaConfig) -> f64 {
    let tau2 = cfg.sigma_tau * cfg.sigma_tau;
    let eps2 = cfg.sigma_eps * cfg.sigma_eps;
    tau2 / (tau2 + eps2)
}

/// Standard normal draws by the Marsaglia polar method, caching the second
/// value of each accepted pair.
struct GaussianSource<R: Rng> {
    rng: R,
    spare: Option<f64>,
}

impl<R: Rng> GaussianSource<R> {
    fn new(rng: R) -> Self {
        Self { rng, spare: None }
    }

    fn next(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        loop {
            let u = self.rng.random::<f64>() * 2.0 - 1.0;
            let v = self.rng.random::<f64>() * 2.0 - 1.0;
            let s = u * u + v * v;
            if s > 0.0 && s < 1.0 {
                let scale = (-2.0 * s.ln() / s).sqrt();
                self.spare = Some(v * scale);
                return u * scale;
            }
        }
    }

    fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }
}

/// Draws one complete matrix from the model, then blanks cells. The result
/// depends only on `(cfg, seed)`.
pub fn gen_anova(cfg: &AnovaConfig, seed: u64) -> Result<ReliabilityMatrix, SimulateError> {
    cfg.validate()?;
    let mut source = GaussianSource::new(stream::substream(seed, 0));
    let mut cells: Vec<Option<f64>> = Vec::with_capacity(cfg.n_units * cfg.n_coders);
    for _ in 0..cfg.n_units {
        let tau = cfg.sigma_tau * source.next();
        for _ in 0..cfg.n_coders {
            let eps = cfg.sigma_eps * source.next();
            cells.push(Some(cfg.mu + tau + eps));
        }
    }
    if cfg.missing_rate > 0.0 {
        for cell in &mut cells {
            if source.uniform() < cfg.missing_rate {
                *cell = None;
            }
        }
    }
    Ok(ReliabilityMatrix::new(cfg.n_units, cfg.n_coders, cells)?)
}

/// One replication of a coverage study.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RepRecord {
    pub rep: usize,
    pub alpha_hat: f64,
    pub ci_lower: f64,
    pub ci_upper: f64,
    pub hit: bool,
}

/// Aggregate outcome of repeatedly bootstrapping simulated data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub reps: usize,
    /// Replications whose interval covered the population alpha.
    pub hits: usize,
    pub coverage: f64,
    pub mean_ci_width: f64,
    pub true_alpha: f64,
    #[serde(skip)]
    pub records: Vec<RepRecord>,
}

/// Runs `reps` replications: generate a matrix, fit alpha with the interval
/// distance, bootstrap an interval, and check whether it covers the
/// population alpha.
///
/// `bcfg.seed` is the master seed; every replication derives its own
/// generator and bootstrap seeds from it, so reports depend only on
/// `(cfg, reps, bcfg)` and not on `bcfg.workers`, which here parallelizes
/// replications (each inner bootstrap runs on one thread).
pub fn run_coverage(
    cfg: &AnovaConfig,
    reps: usize,
    bcfg: &BootstrapConfig,
) -> Result<CoverageReport, SimulateError> {
    cfg.validate()?;
    if reps == 0 {
        return Err(SimulateError::ZeroReps);
    }
    let target = true_alpha(cfg);
    let distance = DistanceSpec::Interval;

    let one_rep = |rep: usize| -> Result<RepRecord, SimulateError> {
        let matrix = gen_anova(cfg, stream::mix(bcfg.seed, 2 * rep as u64))?;
        let inner = BootstrapConfig {
            seed: stream::mix(bcfg.seed, 2 * rep as u64 + 1),
            workers: 1,
            ..bcfg.clone()
        };
        let fit = alpha_point(&matrix, &distance)
            .map_err(|e| SimulateError::Rep { rep, source: e.into() })?;
        let boot = resample_alpha(&matrix, &distance, &inner)
            .map_err(|source| SimulateError::Rep { rep, source })?;
        Ok(RepRecord {
            rep,
            alpha_hat: fit.alpha,
            ci_lower: boot.ci_lower,
            ci_upper: boot.ci_upper,
            hit: boot.ci_lower <= target && target <= boot.ci_upper,
        })
    };

    let workers = bcfg.workers.max(1);
    let records: Vec<RepRecord> = if workers == 1 {
        (0..reps).map(one_rep).collect::<Result<_, _>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| SimulateError::Rep {
                rep: 0,
                source: BootstrapError::WorkerPool(e.to_string()),
            })?;
        pool.install(|| {
            (0..reps)
                .into_par_iter()
                .map(one_rep)
                .collect::<Result<_, _>>()
        })?
    };

    let hits = records.iter().filter(|r| r.hit).count();
    let mut width_sum = 0.0;
    for r in &records {
        width_sum += r.ci_upper - r.ci_lower;
    }
    Ok(CoverageReport {
        reps,
        hits,
        coverage: hits as f64 / reps as f64,
        mean_ci_width: width_sum / reps as f64,
        true_alpha: target,
        records,
    })
}
