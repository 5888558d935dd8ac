//! Distribution of the labels over (0, 1]: Coverageability at the configured
//! budget next to mean coverage, with log-scaled counts.

use std::fmt::Write as _;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::labeling::TargetVector;

pub const DEFAULT_BINS: usize = 50;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub bins: usize,
    pub coverageability: Vec<u64>,
    pub mean_coverage: Vec<u64>,
}

/// Bin `k` covers `(k/bins, (k+1)/bins]`; 0 falls in the first bin.
pub fn bin_index(v: f64, bins: usize) -> usize {
    (1..bins).filter(|&k| v > k as f64 / bins as f64).count()
}

pub fn log_count(c: u64) -> f64 {
    (1.0 + c as f64).log10()
}

pub fn histogram(targets: &[TargetVector], bins: usize) -> Result<Histogram> {
    if bins < 1 {
        return Err(CoreError::InvalidArgument("histogram needs at least one bin".into()));
    }
    if targets.is_empty() {
        return Err(CoreError::Empty("no labels to summarise"));
    }
    let mut h = Histogram {
        bins,
        coverageability: vec![0; bins],
        mean_coverage: vec![0; bins],
    };
    for t in targets {
        h.coverageability[bin_index(t.coverageability, bins)] += 1;
        h.mean_coverage[bin_index(t.mean, bins)] += 1;
    }
    Ok(h)
}

impl Histogram {
    pub fn edges(&self, k: usize) -> (f64, f64) {
        (k as f64 / self.bins as f64, (k + 1) as f64 / self.bins as f64)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let fail = |e: csv::Error| CoreError::Format(e.to_string());
        let mut w = crate::csv_writer(out);
        w.write_record([
            "bin_lower",
            "bin_upper",
            "coverageability_count",
            "coverageability_log10",
            "mean_coverage_count",
            "mean_coverage_log10",
        ])
        .map_err(fail)?;
        for k in 0..self.bins {
            let (lo, hi) = self.edges(k);
            let (c, m) = (self.coverageability[k], self.mean_coverage[k]);
            w.write_record([
                lo.to_string(),
                hi.to_string(),
                c.to_string(),
                log_count(c).to_string(),
                m.to_string(),
                log_count(m).to_string(),
            ])
            .map_err(fail)?;
        }
        w.flush().map_err(|e| CoreError::Format(e.to_string()))
    }

    /// Standalone SVG with the two series as paired bars.
    pub fn to_svg(&self) -> String {
        const W: f64 = 800.0;
        const H: f64 = 400.0;
        const PAD: f64 = 50.0;
        let top = self
            .coverageability
            .iter()
            .chain(&self.mean_coverage)
            .map(|&c| log_count(c))
            .fold(0.0, f64::max)
            .max(1.0);
        let slot = (W - 2.0 * PAD) / self.bins as f64;
        let mut s = String::new();
        let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#);
        let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
        let base = H - PAD;
        for (series, colour, offset) in [(&self.coverageability, "#1f77b4", 0.0), (&self.mean_coverage, "#ff7f0e", 0.5)] {
            for (k, &c) in series.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                let h = log_count(c) / top * (H - 2.0 * PAD);
                let x = PAD + k as f64 * slot + offset * slot;
                let _ = writeln!(
                    s,
                    r#"<rect x="{x:.2}" y="{:.2}" width="{:.2}" height="{h:.2}" fill="{colour}"><title>{c}</title></rect>"#,
                    base - h,
                    slot / 2.0
                );
            }
        }
        let _ = writeln!(s, r#"<line x1="{PAD}" y1="{base}" x2="{}" y2="{base}" stroke="black"/>"#, W - PAD);
        let _ = writeln!(s, r#"<line x1="{PAD}" y1="{PAD}" x2="{PAD}" y2="{base}" stroke="black"/>"#);
        for tick in 0..=10 {
            let x = PAD + tick as f64 / 10.0 * (W - 2.0 * PAD);
            let _ = writeln!(
                s,
                r#"<text x="{x:.2}" y="{:.2}" font-size="11" text-anchor="middle">{:.1}</text>"#,
                base + 16.0,
                tick as f64 / 10.0
            );
        }
        let _ = writeln!(s, r##"<text x="{}" y="30" font-size="12" fill="#1f77b4">Coverageability</text>"##, W - 260.0);
        let _ = writeln!(s, r##"<text x="{}" y="30" font-size="12" fill="#ff7f0e">Mean coverage</text>"##, W - 140.0);
        let _ = writeln!(
            s,
            r#"<text x="16" y="{}" font-size="11" transform="rotate(-90 16 {})">log10(1 + count)</text>"#,
            H / 2.0,
            H / 2.0
        );
        s.push_str("</svg>\n");
        s
    }
}
