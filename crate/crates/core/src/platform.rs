//! Fabrication-platform parameter records, design-pathway overrides, and
//! derivation of the per-platform link variants.

use std::fmt;
use std::str::FromStr;

use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

/// Propagation-loss target of the minimized-loss pathway (dB/cm).
pub const MINIMIZED_PROPAGATION_LOSS_DB_PER_CM: f64 = 1.0;
/// Coupling-loss target of the minimized-loss pathway (dB per link).
pub const MINIMIZED_COUPLING_LOSS_DB: f64 = 1.0;
/// FSR target of the wide-FSR pathway (nm), capped by the usable comb-laser span.
pub const WIDE_FSR_NM: f64 = 80.0;
/// Per-wavelength MAOP target of the increased-MAOP pathway (dBm).
pub const INCREASED_MAOP_PER_WAVELENGTH_DBM: f64 = 15.0;

/// Errors raised while validating or combining platform records.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum PlatformError {
    #[error("platform `{name}`: {reason}")]
    Invalid { name: String, reason: String },
    #[error("platform list is empty")]
    EmptyPlatformList,
}

/// Per-waveguide maximum allowable optical power: a dBm ceiling, or unbounded
/// once the nonlinear-loss cap is removed.
///
/// In configuration files this is either a number (dBm) or the string
/// `"unbounded"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WaveguideMaop {
    Dbm(f64),
    Unbounded,
}

impl WaveguideMaop {
    pub fn is_unbounded(self) -> bool {
        matches!(self, WaveguideMaop::Unbounded)
    }

    pub fn dbm(self) -> Option<f64> {
        match self {
            WaveguideMaop::Dbm(v) => Some(v),
            WaveguideMaop::Unbounded => None,
        }
    }
}

impl Serialize for WaveguideMaop {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            WaveguideMaop::Dbm(v) => serializer.serialize_f64(*v),
            WaveguideMaop::Unbounded => serializer.serialize_str("unbounded"),
        }
    }
}

impl<'de> Deserialize<'de> for WaveguideMaop {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct Visitor;

        impl<'de> de::Visitor<'de> for Visitor {
            type Value = WaveguideMaop;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a power in dBm or the string \"unbounded\"")
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> Result<WaveguideMaop, E> {
                Ok(WaveguideMaop::Dbm(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<WaveguideMaop, E> {
                Ok(WaveguideMaop::Dbm(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<WaveguideMaop, E> {
                Ok(WaveguideMaop::Dbm(v as f64))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<WaveguideMaop, E> {
                if v.eq_ignore_ascii_case("unbounded") {
                    Ok(WaveguideMaop::Unbounded)
                } else {
                    Err(E::invalid_value(de::Unexpected::Str(v), &self))
                }
            }
        }

        deserializer.deserialize_any(Visitor)
    }
}

/// Design parameters of one silicon-photonic fabrication process.
///
/// Field names double as the configuration-file schema, so units live in the
/// docs rather than the names: Q factors are dimensionless, `mrr_radius` is in
/// µm, `operating_wavelength` and `fsr` in nm, bandwidths in GHz, powers in
/// dBm, losses in dB (propagation in dB/cm), and `bitrate_max` in Gb/s.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FabricationPlatform {
    pub name: String,
    /// Q factor of the modulator MRRs.
    pub q_modulator: f64,
    /// Q factor of the filter MRRs.
    pub q_filter: f64,
    /// Ring radius in µm. Informational; the budget math never reads it.
    pub mrr_radius: f64,
    /// Operating wavelength in nm.
    pub operating_wavelength: f64,
    /// Free-spectral range in nm; the spectral window available for channels.
    pub fsr: f64,
    /// Modulator electro-optic bandwidth in GHz.
    pub modulator_bandwidth: f64,
    /// Detector bandwidth in GHz.
    pub detector_bandwidth: f64,
    /// Receiver sensitivity in dBm (negative).
    pub receiver_sensitivity: f64,
    /// Waveguide propagation loss in dB/cm.
    pub propagation_loss: f64,
    /// Per-wavelength maximum allowable optical power in dBm.
    pub maop_per_wavelength: f64,
    /// Per-waveguide maximum allowable optical power in dBm, or unbounded.
    pub maop_per_waveguide: WaveguideMaop,
    /// Lumped grating-coupler loss per link in dB.
    pub coupling_loss: f64,
    /// Highest channel bitrate the process supports, Gb/s.
    pub bitrate_max: f64,
    /// Insertion loss of the Tx modulator MRR group, dB.
    pub modulator_il: f64,
    /// Insertion loss of the Rx filter MRR group, dB.
    pub filter_il: f64,
}

impl FabricationPlatform {
    /// Check the record invariants. NaN and infinities are rejected along
    /// with out-of-range values.
    pub fn validate(&self) -> Result<(), PlatformError> {
        let fail = |reason: &str| {
            Err(PlatformError::Invalid {
                name: self.name.clone(),
                reason: reason.to_string(),
            })
        };
        let positive = |v: f64| v.is_finite() && v > 0.0;
        let non_negative = |v: f64| v.is_finite() && v >= 0.0;
        if !positive(self.q_modulator) {
            return fail("q_modulator must be positive");
        }
        if !positive(self.q_filter) {
            return fail("q_filter must be positive");
        }
        if !positive(self.fsr) {
            return fail("fsr must be positive");
        }
        if !positive(self.operating_wavelength) {
            return fail("operating_wavelength must be positive");
        }
        if !positive(self.bitrate_max) {
            return fail("bitrate_max must be positive");
        }
        if !non_negative(self.propagation_loss)
            || !non_negative(self.coupling_loss)
            || !non_negative(self.modulator_il)
            || !non_negative(self.filter_il)
        {
            return fail("loss figures must be non-negative");
        }
        if !self.receiver_sensitivity.is_finite() || !self.maop_per_wavelength.is_finite() {
            return fail("power figures must be finite");
        }
        if let WaveguideMaop::Dbm(wg) = self.maop_per_waveguide {
            if self.maop_per_wavelength > wg {
                return fail("maop_per_wavelength exceeds maop_per_waveguide");
            }
        }
        if self.receiver_sensitivity >= self.maop_per_wavelength {
            // Otherwise the per-wavelength budget is non-positive and no link closes.
            return fail("receiver_sensitivity must be below maop_per_wavelength");
        }
        Ok(())
    }
}

/// The three built-in fabrication platforms.
pub fn builtin_platforms() -> Vec<FabricationPlatform> {
    vec![
        FabricationPlatform {
            name: "45nm-soi".to_string(),
            q_modulator: 10_000.0,
            q_filter: 8_500.0,
            mrr_radius: 5.0,
            operating_wavelength: 1290.0,
            fsr: 12.6,
            modulator_bandwidth: 13.0,
            detector_bandwidth: 5.0,
            receiver_sensitivity: -17.645,
            propagation_loss: 3.7,
            maop_per_wavelength: 2.3,
            maop_per_waveguide: WaveguideMaop::Dbm(20.0),
            coupling_loss: 1.5,
            bitrate_max: 12.0,
            modulator_il: 4.7,
            filter_il: 0.18,
        },
        FabricationPlatform {
            name: "32nm-soi".to_string(),
            q_modulator: 6_000.0,
            q_filter: 6_500.0,
            mrr_radius: 5.0,
            operating_wavelength: 1310.0,
            fsr: 13.0,
            modulator_bandwidth: 13.5,
            detector_bandwidth: 12.5,
            receiver_sensitivity: -11.79,
            propagation_loss: 10.0,
            maop_per_wavelength: 4.0,
            maop_per_waveguide: WaveguideMaop::Dbm(20.0),
            coupling_loss: 4.9,
            bitrate_max: 12.5,
            modulator_il: 2.8,
            filter_il: 0.14,
        },
        FabricationPlatform {
            name: "poly-si".to_string(),
            q_modulator: 5_000.0,
            q_filter: 5_000.0,
            mrr_radius: 7.5,
            operating_wavelength: 1300.0,
            fsr: 8.54,
            modulator_bandwidth: 16.8,
            detector_bandwidth: 11.0,
            receiver_sensitivity: -20.414,
            propagation_loss: 20.0,
            maop_per_wavelength: 4.5,
            maop_per_waveguide: WaveguideMaop::Dbm(20.0),
            coupling_loss: 5.2,
            bitrate_max: 11.0,
            modulator_il: 3.8,
            filter_il: 0.11,
        },
    ]
}

/// Look up a built-in platform by name, accepting a few common spellings.
pub fn builtin_platform(name: &str) -> Option<FabricationPlatform> {
    let key = name.to_ascii_lowercase();
    let canonical = match key.as_str() {
        "45nm-soi" | "45nm" | "45nm-soi-cmos" => "45nm-soi",
        "32nm-soi" | "32nm" | "32nm-soi-cmos" => "32nm-soi",
        "poly-si" | "polysi" | "poly" | "deposited-poly-si" => "poly-si",
        _ => return None,
    };
    builtin_platforms()
        .into_iter()
        .find(|p| p.name == canonical)
}

/// Which of the three design pathways a variant applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PathwaySet {
    pub minimized_loss: bool,
    pub wide_fsr: bool,
    pub increased_maop: bool,
}

impl PathwaySet {
    pub const VANILLA: PathwaySet = PathwaySet {
        minimized_loss: false,
        wide_fsr: false,
        increased_maop: false,
    };

    pub const ALL: PathwaySet = PathwaySet {
        minimized_loss: true,
        wide_fsr: true,
        increased_maop: true,
    };

    /// All eight pathway sets in binary order, minimized-loss as the high bit.
    pub fn all_sets() -> [PathwaySet; 8] {
        let mut out = [PathwaySet::VANILLA; 8];
        for (code, slot) in out.iter_mut().enumerate() {
            *slot = PathwaySet {
                minimized_loss: code & 0b100 != 0,
                wide_fsr: code & 0b010 != 0,
                increased_maop: code & 0b001 != 0,
            };
        }
        out
    }

    /// Binary code of this set (minimized-loss the most significant bit).
    pub fn code(self) -> u8 {
        (self.minimized_loss as u8) << 2 | (self.wide_fsr as u8) << 1 | self.increased_maop as u8
    }

    pub fn is_vanilla(self) -> bool {
        self == PathwaySet::VANILLA
    }

    /// Short label, e.g. `vanilla` or `ml+wf`.
    pub fn label(self) -> String {
        if self.is_vanilla() {
            return "vanilla".to_string();
        }
        let mut parts = Vec::new();
        if self.minimized_loss {
            parts.push("ml");
        }
        if self.wide_fsr {
            parts.push("wf");
        }
        if self.increased_maop {
            parts.push("im");
        }
        parts.join("+")
    }
}

impl fmt::Display for PathwaySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Parse a pathway selector such as `vanilla`, `ml`, `ml,wf,im`, or `ml+wf`.
impl FromStr for PathwaySet {
    type Err = PlatformError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let text = s.trim().to_ascii_lowercase();
        if text == "vanilla" || text == "none" {
            return Ok(PathwaySet::VANILLA);
        }
        let mut set = PathwaySet::VANILLA;
        for token in text.split([',', '+']) {
            match token.trim() {
                "ml" | "minimized-loss" | "minimized_loss" => set.minimized_loss = true,
                "wf" | "wide-fsr" | "wide_fsr" => set.wide_fsr = true,
                "im" | "increased-maop" | "increased_maop" => set.increased_maop = true,
                other => {
                    return Err(PlatformError::Invalid {
                        name: s.to_string(),
                        reason: format!("unknown pathway flag `{other}`"),
                    })
                }
            }
        }
        Ok(set)
    }
}

/// A fabrication platform with a pathway set applied: the effective record is
/// what the budget math consumes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinkVariant {
    pub base: FabricationPlatform,
    pub pathways: PathwaySet,
    pub effective: FabricationPlatform,
}

impl LinkVariant {
    /// `<platform> <pathways>`, e.g. `45nm-soi ml+wf`.
    pub fn label(&self) -> String {
        format!("{} {}", self.base.name, self.pathways)
    }
}

/// Apply pathway overrides to a platform. Fields not targeted by an active
/// pathway are copied from the base unchanged.
pub fn apply_pathways(base: &FabricationPlatform, pathways: PathwaySet) -> LinkVariant {
    let mut effective = base.clone();
    if pathways.minimized_loss {
        effective.propagation_loss = MINIMIZED_PROPAGATION_LOSS_DB_PER_CM;
        effective.coupling_loss = MINIMIZED_COUPLING_LOSS_DB;
    }
    if pathways.wide_fsr {
        effective.fsr = WIDE_FSR_NM;
    }
    if pathways.increased_maop {
        effective.maop_per_wavelength = INCREASED_MAOP_PER_WAVELENGTH_DBM;
        effective.maop_per_waveguide = WaveguideMaop::Unbounded;
    }
    LinkVariant {
        base: base.clone(),
        pathways,
        effective,
    }
}

/// Derive the eight pathway variants of every platform, platform-major, with
/// pathway sets in binary order.
pub fn enumerate_variants(
    platforms: &[FabricationPlatform],
) -> Result<Vec<LinkVariant>, PlatformError> {
    if platforms.is_empty() {
        return Err(PlatformError::EmptyPlatformList);
    }
    let mut variants = Vec::with_capacity(platforms.len() * 8);
    for platform in platforms {
        for pathways in PathwaySet::all_sets() {
            variants.push(apply_pathways(platform, pathways));
        }
    }
    Ok(variants)
}
