//! Building blocks for the `kripp` binary: CSV ingestion, report rendering,
//! SVG histograms, and the progress bar.

pub mod ingest;
pub mod progress;
pub mod report;
pub mod svg;
