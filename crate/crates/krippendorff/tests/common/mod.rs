//! Shared generators and independent oracles for integration tests.
// Each test target compiles this module separately and uses its own subset.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use krippendorff::{alpha_point, DistanceSpec, ReliabilityMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard normal via the polar method; test-local so generated data does
/// not depend on library internals.
pub fn normal(rng: &mut impl Rng) -> f64 {
    loop {
        let u: f64 = rng.random_range(-1.0..1.0);
        let v: f64 = rng.random_range(-1.0..1.0);
        let s = u * u + v * v;
        if s > 0.0 && s < 1.0 {
            return u * (-2.0 * s.ln() / s).sqrt();
        }
    }
}

/// Complete matrix of Gaussian scores, `2..=30` units by `2..=6` coders.
pub fn random_complete(rng: &mut impl Rng) -> ReliabilityMatrix {
    let n_units = rng.random_range(2..=30);
    let n_coders = rng.random_range(2..=6);
    let rows: Vec<Vec<Option<f64>>> = (0..n_units)
        .map(|_| (0..n_coders).map(|_| Some(normal(rng))).collect())
        .collect();
    ReliabilityMatrix::from_rows(&rows).unwrap()
}

/// Gaussian matrix with cells blanked at `rate`, redrawn until the interval
/// fit is well defined.
pub fn random_with_missing(rng: &mut impl Rng, rate: f64) -> ReliabilityMatrix {
    loop {
        let n_units = rng.random_range(3..=25);
        let n_coders = rng.random_range(2..=6);
        let rows: Vec<Vec<Option<f64>>> = (0..n_units)
            .map(|_| {
                (0..n_coders)
                    .map(|_| {
                        if rng.random::<f64>() < rate {
                            None
                        } else {
                            Some(normal(rng))
                        }
                    })
                    .collect()
            })
            .collect();
        let m = ReliabilityMatrix::from_rows(&rows).unwrap();
        if alpha_point(&m, &DistanceSpec::Interval).is_ok() {
            return m;
        }
    }
}

/// Matrix of small integer codes, for nominal-scale checks.
pub fn random_nominal(rng: &mut impl Rng, rate: f64) -> ReliabilityMatrix {
    loop {
        let n_units = rng.random_range(3..=20);
        let n_coders = rng.random_range(2..=5);
        let rows: Vec<Vec<Option<f64>>> = (0..n_units)
            .map(|_| {
                (0..n_coders)
                    .map(|_| {
                        if rng.random::<f64>() < rate {
                            None
                        } else {
                            Some(rng.random_range(1..=5) as f64)
                        }
                    })
                    .collect()
            })
            .collect();
        let m = ReliabilityMatrix::from_rows(&rows).unwrap();
        if alpha_point(&m, &DistanceSpec::Nominal).is_ok() {
            return m;
        }
    }
}

/// Observed disagreement for nominal data by counting disagreeing pairs:
/// a unit with `m` scores and value counts `c_v` has `m(m-1) - sum c_v(c_v-1)`
/// disagreeing ordered pairs. Completely independent of the pairwise-sum
/// route used by the library.
pub fn nominal_do_by_counting(m: &ReliabilityMatrix) -> f64 {
    let mut numerator = 0.0;
    let mut n_pairable = 0usize;
    for row in m.rows() {
        let scores: Vec<i64> = row.iter().flatten().map(|v| *v as i64).collect();
        if scores.len() < 2 {
            continue;
        }
        let mut counts = std::collections::HashMap::new();
        for s in &scores {
            *counts.entry(*s).or_insert(0usize) += 1;
        }
        let m_i = scores.len();
        let agreeing: usize = counts.values().map(|c| c * (c - 1)).sum();
        let disagreeing = m_i * (m_i - 1) - agreeing;
        numerator += disagreeing as f64 / (m_i - 1) as f64;
        n_pairable += m_i;
    }
    numerator / n_pairable as f64
}

/// Expected disagreement for nominal data from pooled value counts.
pub fn nominal_de_by_counting(m: &ReliabilityMatrix) -> f64 {
    let mut counts = std::collections::HashMap::new();
    let mut n = 0usize;
    for v in m.present_scores() {
        *counts.entry(v as i64).or_insert(0usize) += 1;
        n += 1;
    }
    let agreeing: usize = counts.values().map(|c| c * (c - 1)).sum();
    let disagreeing = n * (n - 1) - agreeing;
    disagreeing as f64 / (n * (n - 1)) as f64
}
