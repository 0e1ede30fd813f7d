//! Run reports in text and JSON form.

use std::collections::BTreeMap;

use krippendorff::{interpret, AlphaEstimate, BootstrapResult, CoverageReport, DfBetaReport};
use serde::{Deserialize, Serialize};

/// Everything one `alpha` run reports. JSON serialization keeps full float
/// precision; the text rendering rounds to four decimals.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub alpha: f64,
    pub ci_lower: Option<f64>,
    pub ci_upper: Option<f64>,
    pub conf_level: Option<f64>,
    pub d_observed: f64,
    pub d_expected: f64,
    pub n_units: usize,
    pub n_coders: usize,
    pub retained_units: usize,
    pub dropped_units: usize,
    pub bootit: Option<usize>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub distance: String,
    pub interpretation: String,
}

impl RunReport {
    pub fn new(
        estimate: &AlphaEstimate,
        bootstrap: Option<&BootstrapResult>,
        n_units: usize,
        n_coders: usize,
        distance: String,
    ) -> Self {
        Self {
            alpha: estimate.alpha,
            ci_lower: bootstrap.map(|b| b.ci_lower),
            ci_upper: bootstrap.map(|b| b.ci_upper),
            conf_level: bootstrap.map(|b| b.config.conf_level),
            d_observed: estimate.d_observed,
            d_expected: estimate.d_expected,
            n_units,
            n_coders,
            retained_units: estimate.retained_units.len(),
            dropped_units: estimate.dropped_units.len(),
            bootit: bootstrap.map(|b| b.config.bootit),
            seed: bootstrap.map(|b| b.config.seed),
            workers: bootstrap.map(|b| b.config.workers),
            distance,
            interpretation: interpret(estimate.alpha).to_string(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_text(&self, call: &str) -> String {
        let mut out = String::new();
        out.push_str("Krippendorff's Alpha\n\n");
        out.push_str("Call:\n  ");
        out.push_str(call);
        out.push_str("\n\n");
        out.push_str(&format!(
            "Data: {} units, {} coders ({} retained, {} dropped)\n",
            self.n_units, self.n_coders, self.retained_units, self.dropped_units
        ));
        out.push_str(&format!("Distance: {}\n", self.distance));
        if let (Some(bootit), Some(seed), Some(workers)) = (self.bootit, self.seed, self.workers)
        {
            out.push_str(&format!(
                "Bootstrap: {bootit} replicates, seed {seed}, {workers} worker(s)\n"
            ));
        }
        out.push('\n');
        match (self.ci_lower, self.ci_upper) {
            (Some(lower), Some(upper)) => {
                out.push_str("      Estimate  Lower  Upper\n");
                out.push_str(&format!(
                    "alpha   {:.4} {:.4} {:.4}\n",
                    self.alpha, lower, upper
                ));
            }
            _ => {
                out.push_str("      Estimate\n");
                out.push_str(&format!("alpha   {:.4}\n", self.alpha));
            }
        }
        out.push('\n');
        out.push_str(&format!("Interpretation: {}\n", self.interpretation));
        if let Some(level) = self.conf_level {
            out.push_str(&format!("Confidence level: {level}\n"));
        }
        out.push_str(&format!(
            "Do = {:.4}, De = {:.4}\n",
            self.d_observed, self.d_expected
        ));
        out
    }
}

/// Influence values keyed by 1-based unit and coder labels.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InfluenceReport {
    pub base_alpha: f64,
    pub units: BTreeMap<usize, f64>,
    pub coders: BTreeMap<usize, f64>,
    pub distance: String,
}

impl InfluenceReport {
    /// Shifts the library's 0-based indices to the 1-based labels people use.
    pub fn new(report: &DfBetaReport, distance: String) -> Self {
        Self {
            base_alpha: report.base_alpha,
            units: report
                .unit_dfbetas
                .iter()
                .map(|(&k, &v)| (k + 1, v))
                .collect(),
            coders: report
                .coder_dfbetas
                .iter()
                .map(|(&k, &v)| (k + 1, v))
                .collect(),
            distance,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("base alpha: {:.7}\n", self.base_alpha));
        for (unit, value) in &self.units {
            out.push_str(&format!("unit {unit}: {value:+.7}\n"));
        }
        for (coder, value) in &self.coders {
            out.push_str(&format!("coder {coder}: {value:+.7}\n"));
        }
        out
    }
}

/// Coverage study summary plus the configuration that produced it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimulateReport {
    pub reps: usize,
    pub hits: usize,
    pub coverage: f64,
    pub mean_ci_width: f64,
    pub true_alpha: f64,
    pub mu: f64,
    pub sigma_tau: f64,
    pub sigma_eps: f64,
    pub n_units: usize,
    pub n_coders: usize,
    pub missing_rate: f64,
    pub bootit: usize,
    pub conf_level: f64,
    pub seed: u64,
    pub workers: usize,
}

impl SimulateReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// One CSV row per replication: `rep,alpha_hat,ci_lower,ci_upper,hit`.
pub fn per_rep_csv(report: &CoverageReport) -> String {
    let mut out = String::from("rep,alpha_hat,ci_lower,ci_upper,hit\n");
    for r in &report.records {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.rep + 1,
            r.alpha_hat,
            r.ci_lower,
            r.ci_upper,
            u8::from(r.hit)
        ));
    }
    out
}

/// One line per replicate alpha, full precision, no header; reading the
/// column back reproduces the replicate vector bit for bit.
pub fn boot_sample_csv(replicates: &[f64]) -> String {
    let mut out = String::new();
    for v in replicates {
        out.push_str(&format!("{v}\n"));
    }
    out
}
