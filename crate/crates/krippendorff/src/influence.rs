//! Leave-one-out influence on alpha.
//!
//! The influence of a unit (or coder) is `alpha(full) - alpha(without it)`,
//! from an exact refit of the reduced matrix, so reported values satisfy
//! `alpha(full) - influence = alpha(reduced)` by construction.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::alpha::{alpha_point, AlphaError};
use crate::distance::DistanceSpec;
use crate::matrix::{MatrixError, ReliabilityMatrix};

#[derive(Debug, Error)]
pub enum InfluenceError {
    #[error("fit on the full matrix failed: {0}")]
    BaseFit(#[source] AlphaError),
    #[error("cannot drop unit {unit}: {source}")]
    UnitDrop { unit: usize, source: MatrixError },
    #[error("cannot drop coder {coder}: {source}")]
    CoderDrop { coder: usize, source: MatrixError },
    #[error("refit without unit {unit} failed: {source}")]
    UnitRefit { unit: usize, source: AlphaError },
    #[error("refit without coder {coder} failed: {source}")]
    CoderRefit { coder: usize, source: AlphaError },
}

/// Influence values keyed by zero-based unit or coder index.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DfBetaReport {
    pub base_alpha: f64,
    pub unit_dfbetas: BTreeMap<usize, f64>,
    pub coder_dfbetas: BTreeMap<usize, f64>,
}

/// Influence of each listed unit on alpha.
pub fn dfbeta_units(
    matrix: &ReliabilityMatrix,
    distance: &DistanceSpec,
    units: &[usize],
) -> Result<DfBetaReport, InfluenceError> {
    dfbeta(matrix, distance, units, &[])
}

/// Influence of each listed coder on alpha.
pub fn dfbeta_coders(
    matrix: &ReliabilityMatrix,
    distance: &DistanceSpec,
    coders: &[usize],
) -> Result<DfBetaReport, InfluenceError> {
    dfbeta(matrix, distance, &[], coders)
}

/// Influence of the listed units and coders in one report.
pub fn dfbeta(
    matrix: &ReliabilityMatrix,
    distance: &DistanceSpec,
    units: &[usize],
    coders: &[usize],
) -> Result<DfBetaReport, InfluenceError> {
    let base = alpha_point(matrix, distance).map_err(InfluenceError::BaseFit)?;
    let mut report = DfBetaReport {
        base_alpha: base.alpha,
        ..DfBetaReport::default()
    };
    for &unit in units {
        let reduced = matrix
            .without_unit(unit)
            .map_err(|source| InfluenceError::UnitDrop { unit, source })?;
        let fit = alpha_point(&reduced, distance)
            .map_err(|source| InfluenceError::UnitRefit { unit, source })?;
        report.unit_dfbetas.insert(unit, base.alpha - fit.alpha);
    }
    for &coder in coders {
        let reduced = matrix
            .without_coder(coder)
            .map_err(|source| InfluenceError::CoderDrop { coder, source })?;
        let fit = alpha_point(&reduced, distance)
            .map_err(|source| InfluenceError::CoderRefit { coder, source })?;
        report.coder_dfbetas.insert(coder, base.alpha - fit.alpha);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testdata::survey;

    #[test]
    fn unit_influence_on_survey() {
        let m = survey();
        let d = DistanceSpec::Nominal;
        let report = dfbeta_units(&m, &d, &[5, 11]).unwrap();
        assert!((report.base_alpha - 237.0 / 319.0).abs() < 1e-15);

        // Removing the all-distinct unit lifts alpha from 237/319 to 6/7.
        let worst = report.unit_dfbetas[&5];
        assert!((worst - (237.0 / 319.0 - 6.0 / 7.0)).abs() < 1e-15);
        assert!((worst + 0.1141961).abs() < 1e-7);

        // Unit 12 holds a single score: dropping it shifts only the pool,
        // moving alpha from 237/319 to 113/152, a difference of -23/48488.
        let lone = report.unit_dfbetas[&11];
        assert!((lone + 23.0 / 48488.0).abs() < 1e-12);
    }

    #[test]
    fn reconstruction_is_exact() {
        let m = survey();
        let d = DistanceSpec::Nominal;
        let report = dfbeta_units(&m, &d, &[0, 1, 2, 5, 9, 11]).unwrap();
        for (&unit, &value) in &report.unit_dfbetas {
            let reduced = alpha_point(&m.without_unit(unit).unwrap(), &d).unwrap();
            assert!(
                (report.base_alpha - value - reduced.alpha).abs() < 1e-12,
                "unit {unit}"
            );
        }
    }

    #[test]
    fn coder_influence_on_survey() {
        let m = survey();
        let d = DistanceSpec::Nominal;
        let report = dfbeta_coders(&m, &d, &[0, 2]).unwrap();
        // Hand-derived refit without coder 3: Do = 3/29, De = 728/930.
        let expected = 1.0 - (3.0 / 29.0) / (728.0 / 930.0);
        assert!((report.coder_dfbetas[&2] - (report.base_alpha - expected)).abs() < 1e-12);
    }

    #[test]
    fn combined_report() {
        let m = survey();
        let report = dfbeta(&m, &DistanceSpec::Nominal, &[5], &[2]).unwrap();
        assert_eq!(report.unit_dfbetas.len(), 1);
        assert_eq!(report.coder_dfbetas.len(), 1);
    }

    #[test]
    fn drop_errors_carry_the_index() {
        let m = survey();
        let d = DistanceSpec::Nominal;
        match dfbeta_units(&m, &d, &[40]).unwrap_err() {
            InfluenceError::UnitDrop { unit: 40, .. } => {}
            other => panic!("unexpected error {other:?}"),
        }
        let two_coders = ReliabilityMatrix::from_rows(&[
            vec![Some(1.0), Some(2.0)],
            vec![Some(2.0), Some(2.0)],
        ])
        .unwrap();
        match dfbeta_coders(&two_coders, &d, &[0]).unwrap_err() {
            InfluenceError::CoderDrop { coder: 0, .. } => {}
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn refit_failure_names_the_unit() {
        // Dropping unit 0 leaves only constant scores: degenerate refit.
        let m = ReliabilityMatrix::from_rows(&[
            vec![Some(1.0), Some(2.0)],
            vec![Some(2.0), Some(2.0)],
            vec![Some(2.0), Some(2.0)],
        ])
        .unwrap();
        match dfbeta_units(&m, &DistanceSpec::Nominal, &[0]).unwrap_err() {
            InfluenceError::UnitRefit {
                unit: 0,
                source: AlphaError::DegenerateData(_),
            } => {}
            other => panic!("unexpected error {other:?}"),
        }
    }
}
