use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use super::{Comparison, ScalingReport, Verdict};
use crate::field::io::fmt_float;

pub const CSV_HEADER: &str =
    "family,n,alpha_re,alpha_im,p,q,j,in_norm,out_norm_restricted,out_norm_full,log2_ratio";

/// One CSV row per scale, floats in the fixed [`fmt_float`] format.
pub fn write_report_csv<W: Write>(mut out: W, report: &ScalingReport) -> io::Result<()> {
    let c = &report.config;
    writeln!(out, "{CSV_HEADER}")?;
    for r in &report.rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            c.family.as_str(),
            c.dim,
            fmt_float(c.alpha.re),
            fmt_float(c.alpha.im),
            c.p,
            c.q,
            r.j,
            fmt_float(r.in_norm),
            fmt_float(r.out_norm_restricted),
            fmt_float(r.out_norm_full),
            fmt_float(r.log2_ratio),
        )?;
    }
    Ok(())
}

/// The JSON summary of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportSummary {
    pub family: String,
    pub fitted_slope: f64,
    pub predicted_slope: f64,
    pub predicted_exponent: String,
    pub comparison: Comparison,
    pub tolerance: f64,
    pub slope_window: (u32, u32),
    pub fit_residual_max: f64,
    pub in_norm_slope: f64,
    pub verdict: Verdict,
    pub flags: Vec<String>,
}

impl From<&ScalingReport> for ReportSummary {
    fn from(r: &ScalingReport) -> Self {
        ReportSummary {
            family: r.config.family.as_str().to_string(),
            fitted_slope: r.fitted_slope,
            predicted_slope: r.predicted_slope,
            predicted_exponent: r.predicted_exponent.clone(),
            comparison: r.comparison,
            tolerance: r.tolerance,
            slope_window: r.slope_window,
            fit_residual_max: r.fit_residual_max,
            in_norm_slope: r.in_norm_slope,
            verdict: r.verdict,
            flags: r.flags.clone(),
        }
    }
}
