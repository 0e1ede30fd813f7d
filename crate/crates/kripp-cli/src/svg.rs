//! SVG histogram of bootstrap replicates.

use std::io;
use std::path::Path;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 55.0;

/// Sturges' bin count, `ceil(log2 n + 1)`.
pub fn sturges_bins(n: usize) -> usize {
    if n <= 1 {
        return 1;
    }
    ((n as f64).log2() + 1.0).ceil() as usize
}

/// Renders the histogram with a solid vertical line at the point estimate
/// and dashed lines at the interval bounds. Pure function of its inputs, so
/// repeated runs emit identical bytes.
pub fn render_histogram(replicates: &[f64], alpha: f64, ci: (f64, f64)) -> String {
    assert!(!replicates.is_empty(), "histogram needs replicates");
    let data_min = replicates.iter().copied().fold(f64::INFINITY, f64::min);
    let data_max = replicates.iter().copied().fold(f64::NEG_INFINITY, f64::max);

    // Degenerate spread (every replicate equal) collapses to a single bin.
    let bins = if data_min == data_max {
        1
    } else {
        sturges_bins(replicates.len())
    };
    let (bin_lo, bin_hi) = if data_min == data_max {
        (data_min - 0.5, data_max + 0.5)
    } else {
        (data_min, data_max)
    };
    let mut counts = vec![0usize; bins];
    for &v in replicates {
        let t = (v - bin_lo) / (bin_hi - bin_lo);
        let idx = ((t * bins as f64) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    let max_count = counts.iter().copied().max().unwrap_or(1).max(1);

    // The axis covers bars and markers alike.
    let span_lo = bin_lo.min(alpha).min(ci.0);
    let span_hi = bin_hi.max(alpha).max(ci.1);
    let pad = 0.05 * (span_hi - span_lo);
    let axis_lo = span_lo - pad;
    let axis_hi = span_hi + pad;

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let x = |v: f64| MARGIN_LEFT + (v - axis_lo) / (axis_hi - axis_lo) * plot_w;
    let y = |count: f64| MARGIN_TOP + plot_h - count / max_count as f64 * plot_h;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    // Bars.
    let bin_width = (bin_hi - bin_lo) / bins as f64;
    for (i, &count) in counts.iter().enumerate() {
        if count == 0 {
            continue;
        }
        let left = x(bin_lo + i as f64 * bin_width);
        let right = x(bin_lo + (i + 1) as f64 * bin_width);
        let top = y(count as f64);
        svg.push_str(&format!(
            "<rect x=\"{:.2}\" y=\"{:.2}\" width=\"{:.2}\" height=\"{:.2}\" \
             fill=\"#cfcfcf\" stroke=\"#9a9a9a\" stroke-width=\"0.5\"/>\n",
            left,
            top,
            right - left,
            MARGIN_TOP + plot_h - top,
        ));
    }

    // Axes.
    svg.push_str(&format!(
        "<line x1=\"{l:.2}\" y1=\"{b:.2}\" x2=\"{r:.2}\" y2=\"{b:.2}\" stroke=\"black\"/>\n",
        l = MARGIN_LEFT,
        b = MARGIN_TOP + plot_h,
        r = WIDTH - MARGIN_RIGHT,
    ));
    svg.push_str(&format!(
        "<line x1=\"{l:.2}\" y1=\"{t:.2}\" x2=\"{l:.2}\" y2=\"{b:.2}\" stroke=\"black\"/>\n",
        l = MARGIN_LEFT,
        t = MARGIN_TOP,
        b = MARGIN_TOP + plot_h,
    ));
    for i in 0..=4 {
        let v = axis_lo + (axis_hi - axis_lo) * i as f64 / 4.0;
        let px = x(v);
        svg.push_str(&format!(
            "<line x1=\"{px:.2}\" y1=\"{b:.2}\" x2=\"{px:.2}\" y2=\"{tick:.2}\" stroke=\"black\"/>\n\
             <text x=\"{px:.2}\" y=\"{label:.2}\" font-size=\"12\" text-anchor=\"middle\">{v:.3}</text>\n",
            b = MARGIN_TOP + plot_h,
            tick = MARGIN_TOP + plot_h + 5.0,
            label = MARGIN_TOP + plot_h + 20.0,
        ));
        let count = max_count as f64 * i as f64 / 4.0;
        let py = y(count);
        svg.push_str(&format!(
            "<line x1=\"{tick:.2}\" y1=\"{py:.2}\" x2=\"{l:.2}\" y2=\"{py:.2}\" stroke=\"black\"/>\n\
             <text x=\"{label:.2}\" y=\"{ty:.2}\" font-size=\"12\" text-anchor=\"end\">{count:.0}</text>\n",
            l = MARGIN_LEFT,
            tick = MARGIN_LEFT - 5.0,
            label = MARGIN_LEFT - 8.0,
            ty = py + 4.0,
        ));
    }
    svg.push_str(&format!(
        "<text x=\"{cx:.2}\" y=\"{cy:.2}\" font-size=\"14\" text-anchor=\"middle\">Bootstrap replicates of alpha</text>\n",
        cx = MARGIN_LEFT + plot_w / 2.0,
        cy = HEIGHT - 12.0,
    ));
    svg.push_str(&format!(
        "<text x=\"18\" y=\"{cy:.2}\" font-size=\"14\" text-anchor=\"middle\" \
         transform=\"rotate(-90 18 {cy:.2})\">Frequency</text>\n",
        cy = MARGIN_TOP + plot_h / 2.0,
    ));

    // Markers: solid point estimate, dashed interval bounds.
    let marker = |v: f64, color: &str, dashed: bool| {
        let px = x(v);
        let dash = if dashed {
            " stroke-dasharray=\"6 4\""
        } else {
            ""
        };
        format!(
            "<line x1=\"{px:.2}\" y1=\"{t:.2}\" x2=\"{px:.2}\" y2=\"{b:.2}\" \
             stroke=\"{color}\" stroke-width=\"2\"{dash}/>\n",
            t = MARGIN_TOP,
            b = MARGIN_TOP + plot_h,
        )
    };
    svg.push_str(&marker(alpha, "#e66101", false));
    svg.push_str(&marker(ci.0, "#1f78b4", true));
    svg.push_str(&marker(ci.1, "#1f78b4", true));
    svg.push_str("</svg>\n");
    svg
}

/// Writes the rendered histogram to `path`.
pub fn emit_histogram(
    replicates: &[f64],
    alpha: f64,
    ci: (f64, f64),
    path: &Path,
) -> io::Result<()> {
    std::fs::write(path, render_histogram(replicates, alpha, ci))
}
