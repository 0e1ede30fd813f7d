//! Point estimation of the agreement coefficient.

use std::fmt;

use thiserror::Error;

use crate::distance::{DistanceError, DistanceSpec};
use crate::matrix::ReliabilityMatrix;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlphaError {
    #[error("no unit has two or more scores, so observed disagreement is undefined")]
    NoPairableUnits,
    #[error("need at least two scores in total, got {0}")]
    InsufficientScores(usize),
    #[error("expected disagreement is zero (all {0} pooled scores agree), so alpha is undefined")]
    DegenerateData(usize),
    #[error("unit {unit} is missing a score from coder {coder}; complete data required")]
    IncompleteData { unit: usize, coder: usize },
    #[error(transparent)]
    Distance(#[from] DistanceError),
}

/// Point estimate together with the quantities that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaEstimate {
    pub alpha: f64,
    pub d_observed: f64,
    pub d_expected: f64,
    /// Present scores pooled over all units (`N`).
    pub n_scores_pooled: usize,
    /// Present scores inside units that have at least two (`N_o`).
    pub n_scores_pairable: usize,
    /// Units with two or more scores, in row order.
    pub retained_units: Vec<usize>,
    /// Units with fewer than two scores; they still feed the pooled scores.
    pub dropped_units: Vec<usize>,
}

/// Per-unit share of the observed disagreement.
///
/// `weighted` is the unit's ordered-pair distance sum divided by `m - 1`,
/// or zero when the unit has fewer than two scores; `pairable_m` is `m` for
/// pairable units and zero otherwise. Summing both fields over any bag of
/// units and dividing reproduces the observed disagreement of that bag,
/// which is what the bootstrap resamples.
#[derive(Debug, Clone, Copy)]
pub(crate) struct UnitContribution {
    pub weighted: f64,
    pub pairable_m: usize,
}

pub(crate) fn unit_contributions(
    matrix: &ReliabilityMatrix,
    distance: &DistanceSpec,
) -> Result<Vec<UnitContribution>, AlphaError> {
    let mut out = Vec::with_capacity(matrix.n_units());
    for row in matrix.rows() {
        let m = row.iter().filter(|c| c.is_some()).count();
        if m < 2 {
            out.push(UnitContribution {
                weighted: 0.0,
                pairable_m: 0,
            });
            continue;
        }
        let mut sum = 0.0;
        for (j, a) in row.iter().enumerate() {
            let Some(a) = a else { continue };
            for (k, b) in row.iter().enumerate() {
                let Some(b) = b else { continue };
                if j != k {
                    sum += distance.evaluate_present(*a, *b)?;
                }
            }
        }
        out.push(UnitContribution {
            weighted: sum / (m - 1) as f64,
            pairable_m: m,
        });
    }
    Ok(out)
}

pub(crate) fn reduce_contributions(contributions: &[UnitContribution]) -> Option<(f64, usize)> {
    let mut num = 0.0;
    let mut n_pairable = 0usize;
    for c in contributions {
        num += c.weighted;
        n_pairable += c.pairable_m;
    }
    if n_pairable == 0 {
        return None;
    }
    Some((num / n_pairable as f64, n_pairable))
}

/// Observed disagreement: each unit's mean pairwise distance weighted by its
/// score count, pooled over every unit that has at least two scores.
pub fn observed_disagreement(
    matrix: &ReliabilityMatrix,
    distance: &DistanceSpec,
) -> Result<f64, AlphaError> {
    let contributions = unit_contributions(matrix, distance)?;
    match reduce_contributions(&contributions) {
        Some((d_o, _)) => Ok(d_o),
        None => Err(AlphaError::NoPairableUnits),
    }
}

/// Expected disagreement: the mean distance over all ordered pairs of
/// distinct score positions, pooling every present score regardless of
/// whether its unit was pairable.
pub fn expected_disagreement(
    matrix: &ReliabilityMatrix,
    distance: &DistanceSpec,
) -> Result<f64, AlphaError> {
    let pooled: Vec<f64> = matrix.present_scores().collect();
    let n = pooled.len();
    if n < 2 {
        return Err(AlphaError::InsufficientScores(n));
    }
    let mut sum = 0.0;
    for (p, a) in pooled.iter().enumerate() {
        for (q, b) in pooled.iter().enumerate() {
            if p != q {
                sum += distance.evaluate_present(*a, *b)?;
            }
        }
    }
    Ok(sum / (n * (n - 1)) as f64)
}

/// Agreement coefficient `alpha = 1 - Do/De` with full bookkeeping.
pub fn alpha_point(
    matrix: &ReliabilityMatrix,
    distance: &DistanceSpec,
) -> Result<AlphaEstimate, AlphaError> {
    let contributions = unit_contributions(matrix, distance)?;
    let (d_observed, n_scores_pairable) =
        reduce_contributions(&contributions).ok_or(AlphaError::NoPairableUnits)?;
    let d_expected = expected_disagreement(matrix, distance)?;
    let n_scores_pooled = matrix.present_total();
    if d_expected == 0.0 {
        return Err(AlphaError::DegenerateData(n_scores_pooled));
    }
    let mut retained_units = Vec::new();
    let mut dropped_units = Vec::new();
    for (i, c) in contributions.iter().enumerate() {
        if c.pairable_m >= 2 {
            retained_units.push(i);
        } else {
            dropped_units.push(i);
        }
    }
    Ok(AlphaEstimate {
        alpha: 1.0 - d_observed / d_expected,
        d_observed,
        d_expected,
        n_scores_pooled,
        n_scores_pairable,
        retained_units,
        dropped_units,
    })
}

/// One-way ANOVA intraclass correlation on complete data.
///
/// Computed through unit means and mean squares (`1 - MSW/MST`), a different
/// route from the pairwise sums of [`alpha_point`], but algebraically the
/// same quantity as the interval-distance coefficient.
pub fn anova_alpha_oracle(matrix: &ReliabilityMatrix) -> Result<f64, AlphaError> {
    for (unit, row) in matrix.rows().enumerate() {
        if let Some(coder) = row.iter().position(|c| c.is_none()) {
            return Err(AlphaError::IncompleteData { unit, coder });
        }
    }
    let n = matrix.n_units();
    let r = matrix.n_coders();
    let total = n * r;

    let grand_mean = matrix.present_scores().sum::<f64>() / total as f64;
    let mut ss_within = 0.0;
    let mut ss_total = 0.0;
    for row in matrix.rows() {
        let unit_mean = row.iter().flatten().sum::<f64>() / r as f64;
        for cell in row.iter().flatten() {
            let w = cell - unit_mean;
            ss_within += w * w;
            let t = cell - grand_mean;
            ss_total += t * t;
        }
    }
    if ss_total == 0.0 {
        return Err(AlphaError::DegenerateData(total));
    }
    let ms_within = ss_within / (n * (r - 1)) as f64;
    let ms_total = ss_total / (total - 1) as f64;
    Ok(1.0 - ms_within / ms_total)
}

/// Qualitative reading of an alpha value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AgreementLabel {
    Slight,
    Fair,
    Moderate,
    Substantial,
    NearPerfect,
}

impl fmt::Display for AgreementLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            AgreementLabel::Slight => "Slight Agreement",
            AgreementLabel::Fair => "Fair Agreement",
            AgreementLabel::Moderate => "Moderate Agreement",
            AgreementLabel::Substantial => "Substantial Agreement",
            AgreementLabel::NearPerfect => "Near-Perfect Agreement",
        };
        f.write_str(s)
    }
}

/// Maps alpha to its conventional label; upper bounds are inclusive, so 0.8
/// is still Substantial and anything above is Near-Perfect.
pub fn interpret(alpha: f64) -> AgreementLabel {
    if alpha <= 0.2 {
        AgreementLabel::Slight
    } else if alpha <= 0.4 {
        AgreementLabel::Fair
    } else if alpha <= 0.6 {
        AgreementLabel::Moderate
    } else if alpha <= 0.8 {
        AgreementLabel::Substantial
    } else {
        AgreementLabel::NearPerfect
    }
}
