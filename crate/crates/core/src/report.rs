//! Machine-readable output: grid CSV, sweep plot data, and JSON reports.
//!
//! All emitters are deterministic for a fixed input; timestamps only appear
//! in comment lines and only when a stamp is passed in explicitly.

use serde::Serialize;

use crate::budget::BudgetEvaluation;
use crate::explore::{SweepResult, ViabilityGrid};
use crate::optimize::OptimumDuplet;
use crate::platform::LinkVariant;

/// Fixed column set of the grid CSV; extra detail goes to JSON only.
pub const GRID_CSV_HEADER: &str =
    "platform,minimized_loss,wide_fsr,increased_maop,class,n_lambda,br_gbps,adr_gbps,max_viable_cm,epb_pj";

/// Columns of the sweep plot-data format.
pub const SWEEP_PLOT_COLUMNS: &str = "length_cm aggregate_gbps epb_pj n_lambda error_db";

/// dB and dBm values print with 3 decimals.
pub fn format_db(value: f64) -> String {
    if value.is_finite() {
        format!("{value:.3}")
    } else if value < 0.0 {
        "-inf".to_string()
    } else {
        "inf".to_string()
    }
}

/// Gb/s values print as integers when whole.
pub fn format_gbps(value: f64) -> String {
    if value.fract() == 0.0 && value.abs() < 1e15 {
        format!("{}", value as i64)
    } else {
        format!("{value}")
    }
}

fn format_length(value: f64) -> String {
    format_gbps(value)
}

fn format_epb(epb: Option<f64>) -> String {
    match epb {
        Some(v) => format!("{v:.3}"),
        None => String::new(),
    }
}

/// Render the grid with the fixed CSV column set.
pub fn grid_csv(grid: &ViabilityGrid) -> String {
    let mut out = String::from(GRID_CSV_HEADER);
    out.push('\n');
    for row in &grid.rows {
        let d = &row.at_report_length;
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            row.platform,
            row.pathways.minimized_loss as u8,
            row.pathways.wide_fsr as u8,
            row.pathways.increased_maop as u8,
            row.class,
            d.n_lambda,
            format_gbps(d.br_gbps),
            format_gbps(d.aggregate_bw_gbps),
            format_length(row.max_viable_length_cm),
            format_epb(d.epb_pj),
        ));
    }
    out
}

/// Whitespace-column sweep series with `#` metadata comments, one row per
/// length; ready for plotting tools.
pub fn sweep_plot(sweep: &SweepResult, stamp: Option<&str>) -> String {
    let mut out = String::new();
    out.push_str(&format!("# platform: {}\n", sweep.variant.base.name));
    out.push_str(&format!("# pathways: {}\n", sweep.variant.pathways));
    if let Some(stamp) = stamp {
        out.push_str(&format!("# generated: {stamp}\n"));
    }
    out.push_str(&format!("# columns: {SWEEP_PLOT_COLUMNS}\n"));
    for point in &sweep.points {
        let d = &point.optimum;
        out.push_str(&format!(
            "{} {} {} {} {}\n",
            format_length(point.length_cm),
            format_gbps(d.aggregate_bw_gbps),
            d.epb_pj.map_or("nan".to_string(), |v| format!("{v:.3}")),
            d.n_lambda,
            format_db(d.error_db),
        ));
    }
    out
}

/// Budget report: the evaluated duplet and its full breakdown.
#[derive(Debug, Clone, Serialize)]
pub struct BudgetReport<'a> {
    pub platform: &'a str,
    pub pathways: String,
    pub length_cm: f64,
    pub n_lambda: u32,
    pub br_gbps: f64,
    pub evaluation: &'a BudgetEvaluation,
}

/// Optimize report: the winning duplet for one variant and length.
#[derive(Debug, Clone, Serialize)]
pub struct OptimizeReport<'a> {
    pub platform: &'a str,
    pub pathways: String,
    pub length_cm: f64,
    pub optimum: &'a OptimumDuplet,
}

pub fn budget_report<'a>(
    variant: &'a LinkVariant,
    length_cm: f64,
    n_lambda: u32,
    br_gbps: f64,
    evaluation: &'a BudgetEvaluation,
) -> BudgetReport<'a> {
    BudgetReport {
        platform: &variant.base.name,
        pathways: variant.pathways.label(),
        length_cm,
        n_lambda,
        br_gbps,
        evaluation,
    }
}

pub fn optimize_report<'a>(
    variant: &'a LinkVariant,
    length_cm: f64,
    optimum: &'a OptimumDuplet,
) -> OptimizeReport<'a> {
    OptimizeReport {
        platform: &variant.base.name,
        pathways: variant.pathways.label(),
        length_cm,
        optimum,
    }
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report types serialize");
    text.push('\n');
    text
}
