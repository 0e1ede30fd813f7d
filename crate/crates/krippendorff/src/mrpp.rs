//! Weighted within-group agreement statistic over multiple response groups.
//!
//! `delta = sum_i C_i * theta_i`, where `theta_i` is the average distance
//! over all unordered pairs inside group `i` and the `C_i` are positive
//! weights summing to one. With one group per pairable unit, weights
//! `m_i / N_o`, and the squared distance as `rho`, delta reproduces the
//! observed disagreement of the agreement coefficient.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MrppError {
    #[error("need at least one group")]
    NoGroups,
    #[error("group {index} has {size} member(s); every group needs at least two")]
    GroupTooSmall { index: usize, size: usize },
    #[error("got {groups} groups but {weights} weights")]
    WeightCountMismatch { groups: usize, weights: usize },
    #[error("group weights must be positive; weight {index} is {value}")]
    NonPositiveWeight { index: usize, value: f64 },
    #[error("group weights must sum to 1, got {0}")]
    BadWeightSum(f64),
}

/// Validated groups and weights; construction enforces every invariant, so a
/// built value always yields a well-defined delta.
#[derive(Debug, Clone, PartialEq)]
pub struct MrppInput {
    groups: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl MrppInput {
    pub fn new(groups: Vec<Vec<f64>>, weights: Vec<f64>) -> Result<Self, MrppError> {
        if groups.is_empty() {
            return Err(MrppError::NoGroups);
        }
        if groups.len() != weights.len() {
            return Err(MrppError::WeightCountMismatch {
                groups: groups.len(),
                weights: weights.len(),
            });
        }
        for (index, group) in groups.iter().enumerate() {
            if group.len() < 2 {
                return Err(MrppError::GroupTooSmall {
                    index,
                    size: group.len(),
                });
            }
        }
        let mut sum = 0.0;
        for (index, &value) in weights.iter().enumerate() {
            if !value.is_finite() || value <= 0.0 {
                return Err(MrppError::NonPositiveWeight { index, value });
            }
            sum += value;
        }
        if (sum - 1.0).abs() > 1e-12 {
            return Err(MrppError::BadWeightSum(sum));
        }
        Ok(Self { groups, weights })
    }

    pub fn groups(&self) -> &[Vec<f64>] {
        &self.groups
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Weighted mean of within-group average pairwise distances.
pub fn mrpp_delta(input: &MrppInput, rho: impl Fn(f64, f64) -> f64) -> f64 {
    let mut delta = 0.0;
    for (group, weight) in input.groups.iter().zip(&input.weights) {
        let mut sum = 0.0;
        for (j, &a) in group.iter().enumerate() {
            for &b in &group[j + 1..] {
                sum += rho(a, b);
            }
        }
        let pairs = group.len() * (group.len() - 1) / 2;
        delta += weight * (sum / pairs as f64);
    }
    delta
}
