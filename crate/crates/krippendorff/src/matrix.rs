//! Units-by-coders score matrix with missing cells.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatrixError {
    #[error("a reliability matrix needs at least one unit")]
    NoUnits,
    #[error("a reliability matrix needs at least two coders, got {0}")]
    TooFewCoders(usize),
    #[error("score at unit {unit}, coder {coder} is not finite")]
    NonFiniteScore { unit: usize, coder: usize },
    #[error("unit {unit} has {got} cells, expected {expected}")]
    UnevenRows {
        unit: usize,
        got: usize,
        expected: usize,
    },
    #[error("cell count {got} does not match {units} units x {coders} coders")]
    ShapeMismatch {
        got: usize,
        units: usize,
        coders: usize,
    },
    #[error("unit index {0} out of range")]
    UnitOutOfRange(usize),
    #[error("coder index {0} out of range")]
    CoderOutOfRange(usize),
}

/// Reliability data: one row per unit, one column per coder, `None` where a
/// coder did not score a unit. Present scores are always finite.
#[derive(Debug, Clone, PartialEq)]
pub struct ReliabilityMatrix {
    n_units: usize,
    n_coders: usize,
    cells: Vec<Option<f64>>,
}

impl ReliabilityMatrix {
    /// Builds a matrix from row-major cells.
    pub fn new(
        n_units: usize,
        n_coders: usize,
        cells: Vec<Option<f64>>,
    ) -> Result<Self, MatrixError> {
        if n_units == 0 {
            return Err(MatrixError::NoUnits);
        }
        if n_coders < 2 {
            return Err(MatrixError::TooFewCoders(n_coders));
        }
        if cells.len() != n_units * n_coders {
            return Err(MatrixError::ShapeMismatch {
                got: cells.len(),
                units: n_units,
                coders: n_coders,
            });
        }
        for (idx, cell) in cells.iter().enumerate() {
            if let Some(v) = cell {
                if !v.is_finite() {
                    return Err(MatrixError::NonFiniteScore {
                        unit: idx / n_coders,
                        coder: idx % n_coders,
                    });
                }
            }
        }
        Ok(Self {
            n_units,
            n_coders,
            cells,
        })
    }

    /// Builds a matrix from per-unit rows, which must all have the same length.
    pub fn from_rows(rows: &[Vec<Option<f64>>]) -> Result<Self, MatrixError> {
        let n_units = rows.len();
        if n_units == 0 {
            return Err(MatrixError::NoUnits);
        }
        let n_coders = rows[0].len();
        for (unit, row) in rows.iter().enumerate() {
            if row.len() != n_coders {
                return Err(MatrixError::UnevenRows {
                    unit,
                    got: row.len(),
                    expected: n_coders,
                });
            }
        }
        let cells = rows.iter().flatten().copied().collect();
        Self::new(n_units, n_coders, cells)
    }

    pub fn n_units(&self) -> usize {
        self.n_units
    }

    pub fn n_coders(&self) -> usize {
        self.n_coders
    }

    pub fn get(&self, unit: usize, coder: usize) -> Option<f64> {
        self.cells[unit * self.n_coders + coder]
    }

    pub fn row(&self, unit: usize) -> &[Option<f64>] {
        &self.cells[unit * self.n_coders..(unit + 1) * self.n_coders]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Option<f64>]> {
        self.cells.chunks(self.n_coders)
    }

    /// Number of present scores in one unit (`m_i`).
    pub fn present_in_unit(&self, unit: usize) -> usize {
        self.row(unit).iter().filter(|c| c.is_some()).count()
    }

    /// Total number of present scores (`N`), pooled over all units.
    pub fn present_total(&self) -> usize {
        self.cells.iter().filter(|c| c.is_some()).count()
    }

    /// All present scores in row-major order.
    pub fn present_scores(&self) -> impl Iterator<Item = f64> + '_ {
        self.cells.iter().filter_map(|c| *c)
    }

    /// Copy of the matrix with one unit removed.
    pub fn without_unit(&self, unit: usize) -> Result<Self, MatrixError> {
        if unit >= self.n_units {
            return Err(MatrixError::UnitOutOfRange(unit));
        }
        if self.n_units == 1 {
            return Err(MatrixError::NoUnits);
        }
        let cells = self
            .rows()
            .enumerate()
            .filter(|(i, _)| *i != unit)
            .flat_map(|(_, row)| row.iter().copied())
            .collect();
        Self::new(self.n_units - 1, self.n_coders, cells)
    }

    /// Copy of the matrix with one coder's column removed.
    pub fn without_coder(&self, coder: usize) -> Result<Self, MatrixError> {
        if coder >= self.n_coders {
            return Err(MatrixError::CoderOutOfRange(coder));
        }
        if self.n_coders == 2 {
            return Err(MatrixError::TooFewCoders(1));
        }
        let cells = self
            .rows()
            .flat_map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != coder)
                    .map(|(_, c)| *c)
            })
            .collect();
        Self::new(self.n_units, self.n_coders - 1, cells)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ReliabilityMatrix {
        ReliabilityMatrix::from_rows(&[
            vec![Some(1.0), Some(2.0), None],
            vec![None, Some(3.0), Some(3.0)],
        ])
        .unwrap()
    }

    #[test]
    fn shape_and_access() {
        let m = small();
        assert_eq!(m.n_units(), 2);
        assert_eq!(m.n_coders(), 3);
        assert_eq!(m.get(0, 1), Some(2.0));
        assert_eq!(m.get(1, 0), None);
        assert_eq!(m.present_in_unit(0), 2);
        assert_eq!(m.present_total(), 4);
        let pooled: Vec<f64> = m.present_scores().collect();
        assert_eq!(pooled, vec![1.0, 2.0, 3.0, 3.0]);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert_eq!(
            ReliabilityMatrix::from_rows(&[]).unwrap_err(),
            MatrixError::NoUnits
        );
        assert_eq!(
            ReliabilityMatrix::from_rows(&[vec![Some(1.0)]]).unwrap_err(),
            MatrixError::TooFewCoders(1)
        );
        assert_eq!(
            ReliabilityMatrix::from_rows(&[vec![Some(1.0), Some(2.0)], vec![Some(1.0)]])
                .unwrap_err(),
            MatrixError::UnevenRows {
                unit: 1,
                got: 1,
                expected: 2
            }
        );
        assert_eq!(
            ReliabilityMatrix::new(2, 2, vec![None; 3]).unwrap_err(),
            MatrixError::ShapeMismatch {
                got: 3,
                units: 2,
                coders: 2
            }
        );
        assert_eq!(
            ReliabilityMatrix::new(1, 2, vec![Some(f64::NAN), None]).unwrap_err(),
            MatrixError::NonFiniteScore { unit: 0, coder: 0 }
        );
    }

    #[test]
    fn drops_units_and_coders() {
        let m = small();
        let no_first = m.without_unit(0).unwrap();
        assert_eq!(no_first.n_units(), 1);
        assert_eq!(no_first.row(0), &[None, Some(3.0), Some(3.0)]);
        let no_mid = m.without_coder(1).unwrap();
        assert_eq!(no_mid.n_coders(), 2);
        assert_eq!(no_mid.row(0), &[Some(1.0), None]);

        assert_eq!(m.without_unit(2).unwrap_err(), MatrixError::UnitOutOfRange(2));
        assert_eq!(
            m.without_coder(5).unwrap_err(),
            MatrixError::CoderOutOfRange(5)
        );
        let two = ReliabilityMatrix::from_rows(&[vec![Some(1.0), Some(2.0)]]).unwrap();
        assert_eq!(two.without_unit(0).unwrap_err(), MatrixError::NoUnits);
        assert_eq!(two.without_coder(0).unwrap_err(), MatrixError::TooFewCoders(1));
    }
}
