//! Length sweeps, viability classification, and the full variant grid.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::budget::{BudgetError, LinkGeometry};
use crate::optimize::{Optimizer, OptimumDuplet};
use crate::platform::{enumerate_variants, FabricationPlatform, LinkVariant, PlatformError};

#[derive(Debug, Error, PartialEq)]
pub enum ExploreError {
    #[error("sweep upper bound must be at least 1 cm, got {0}")]
    SweepTooShort(f64),
    #[error("sweep step must be positive, got {0}")]
    BadStep(f64),
    #[error(transparent)]
    Platform(#[from] PlatformError),
    #[error(transparent)]
    Budget(#[from] BudgetError),
}

/// One optimized point of a length sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub length_cm: f64,
    pub optimum: OptimumDuplet,
}

/// Optimizer results for one variant across waveguide lengths.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub variant: LinkVariant,
    pub points: Vec<SweepPoint>,
}

/// Whether a variant closes its link budget across the swept lengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum ViabilityClass {
    #[serde(rename = "NV")]
    NonViable,
    #[serde(rename = "VR")]
    ViableWithRepeaters,
    #[serde(rename = "V")]
    Viable,
}

impl ViabilityClass {
    pub fn code(self) -> &'static str {
        match self {
            ViabilityClass::Viable => "V",
            ViabilityClass::ViableWithRepeaters => "VR",
            ViabilityClass::NonViable => "NV",
        }
    }
}

impl fmt::Display for ViabilityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// One row of the variant grid: class, the duplet at the report length, and
/// the longest length the budget still closes at.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridRow {
    pub platform: String,
    pub pathways: crate::platform::PathwaySet,
    pub class: ViabilityClass,
    pub at_report_length: OptimumDuplet,
    pub max_viable_length_cm: f64,
}

/// The platforms × pathway-sets result matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ViabilityGrid {
    pub l_max_cm: f64,
    pub report_length_cm: f64,
    pub rows: Vec<GridRow>,
}

/// Optimize a variant at every length from 1 cm to `l_max_cm` in `step_cm`
/// increments.
pub fn sweep(
    optimizer: &Optimizer,
    variant: &LinkVariant,
    l_max_cm: f64,
    step_cm: f64,
) -> Result<SweepResult, ExploreError> {
    if !l_max_cm.is_finite() || l_max_cm < 1.0 {
        return Err(ExploreError::SweepTooShort(l_max_cm));
    }
    if !step_cm.is_finite() || step_cm <= 0.0 {
        return Err(ExploreError::BadStep(step_cm));
    }
    let mut points = Vec::new();
    let mut index = 0u32;
    loop {
        let length = 1.0 + index as f64 * step_cm;
        if length > l_max_cm + 1e-9 {
            break;
        }
        let geometry = LinkGeometry::new(length)?;
        points.push(SweepPoint {
            length_cm: length,
            optimum: optimizer.optimize(variant, geometry),
        });
        index += 1;
    }
    Ok(SweepResult {
        variant: variant.clone(),
        points,
    })
}

/// Classify a sweep: viable when every point closes, non-viable when even the
/// shortest fails, otherwise viable with repeaters beyond the last closing
/// length. Returns the class and the largest feasible length (0 when none).
pub fn classify(sweep: &SweepResult) -> (ViabilityClass, f64) {
    let feasible: Vec<bool> = sweep.points.iter().map(|p| p.optimum.feasible).collect();
    if feasible.is_empty() {
        return (ViabilityClass::NonViable, 0.0);
    }
    if feasible.iter().all(|&f| f) {
        return (
            ViabilityClass::Viable,
            sweep.points.last().expect("non-empty").length_cm,
        );
    }
    if !feasible[0] {
        return (ViabilityClass::NonViable, 0.0);
    }
    let max_viable = sweep
        .points
        .iter()
        .filter(|p| p.optimum.feasible)
        .map(|p| p.length_cm)
        .fold(0.0, f64::max);
    (ViabilityClass::ViableWithRepeaters, max_viable)
}

/// Sweep and classify every variant of the given platforms. The duplet column
/// is taken at `report_length_cm` and is infeasible-marked for variants whose
/// budget no longer closes there.
pub fn build_grid(
    optimizer: &Optimizer,
    platforms: &[FabricationPlatform],
    l_max_cm: f64,
    report_length_cm: f64,
) -> Result<ViabilityGrid, ExploreError> {
    let variants = enumerate_variants(platforms)?;
    let report_geometry = LinkGeometry::new(report_length_cm)?;
    let mut rows = Vec::with_capacity(variants.len());
    for variant in &variants {
        let swept = sweep(optimizer, variant, l_max_cm, 1.0)?;
        let (class, max_viable_length_cm) = classify(&swept);
        rows.push(GridRow {
            platform: variant.base.name.clone(),
            pathways: variant.pathways,
            class,
            at_report_length: optimizer.optimize(variant, report_geometry),
            max_viable_length_cm,
        });
    }
    Ok(ViabilityGrid {
        l_max_cm,
        report_length_cm,
        rows,
    })
}
