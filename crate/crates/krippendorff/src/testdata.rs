//! Shared fixtures for unit tests.

use crate::matrix::ReliabilityMatrix;

/// Twelve units scored by four coders on a five-point nominal scale, with
/// seven missing cells. Unit 6 (index 5) is the strongest disagreement and
/// unit 12 (index 11) holds a single score.
pub(crate) fn survey() -> ReliabilityMatrix {
    let na = None;
    let rows: Vec<Vec<Option<f64>>> = vec![
        vec![Some(1.0), Some(1.0), na, Some(1.0)],
        vec![Some(2.0), Some(2.0), Some(3.0), Some(2.0)],
        vec![Some(3.0), Some(3.0), Some(3.0), Some(3.0)],
        vec![Some(3.0), Some(3.0), Some(3.0), Some(3.0)],
        vec![Some(2.0), Some(2.0), Some(2.0), Some(2.0)],
        vec![Some(1.0), Some(2.0), Some(3.0), Some(4.0)],
        vec![Some(4.0), Some(4.0), Some(4.0), Some(4.0)],
        vec![Some(1.0), Some(1.0), Some(2.0), Some(1.0)],
        vec![Some(2.0), Some(2.0), Some(2.0), Some(2.0)],
        vec![na, Some(5.0), Some(5.0), Some(5.0)],
        vec![na, na, Some(1.0), Some(1.0)],
        vec![na, Some(3.0), na, na],
    ];
    ReliabilityMatrix::from_rows(&rows).unwrap()
}
