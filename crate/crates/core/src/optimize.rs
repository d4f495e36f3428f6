//! Search heuristic for the optimal (N, BR) duplet of a variant, aggregate
//! bandwidth and energy-per-bit accounting, and a brute-force oracle that
//! re-derives the winner with no shortcuts.

use std::num::NonZeroU32;

use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::budget::{BudgetEvaluation, BudgetModel, LinkGeometry};
use crate::platform::LinkVariant;

/// Default minimum channel spacing in filter linewidths (λ/Q). Spacings much
/// below ~1.3 linewidths put adjacent channels inside each other's drop
/// response and the reported grids never use them.
pub const DEFAULT_MIN_SPACING_LINEWIDTHS: f64 = 1.3;

#[derive(Debug, Error, PartialEq)]
pub enum OptimizeError {
    #[error("energy per bit is undefined for an infeasible duplet")]
    InfeasibleDuplet,
    #[error("invalid energy model: {0}")]
    InvalidEnergyModel(String),
}

/// Electrical-power coefficients for the energy-per-bit estimate. The four
/// terms are link laser power, thermal tuning power, modulator driver energy,
/// and receiver energy; every field is configurable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnergyModel {
    /// Laser wall-plug efficiency, a fraction in (0, 1].
    pub laser_wallplug_efficiency: f64,
    /// Thermal tuning power per ring, mW.
    pub tuning_power_per_mrr: f64,
    /// Modulator driver energy, pJ/bit.
    pub driver_energy: f64,
    /// Receiver energy, pJ/bit.
    pub receiver_energy: f64,
}

impl Default for EnergyModel {
    fn default() -> Self {
        EnergyModel {
            laser_wallplug_efficiency: 0.10,
            tuning_power_per_mrr: 0.5,
            driver_energy: 0.20,
            receiver_energy: 0.15,
        }
    }
}

impl EnergyModel {
    pub fn validate(&self) -> Result<(), OptimizeError> {
        let eff = self.laser_wallplug_efficiency;
        if !eff.is_finite() || eff <= 0.0 || eff > 1.0 {
            return Err(OptimizeError::InvalidEnergyModel(
                "laser_wallplug_efficiency must be in (0, 1]".into(),
            ));
        }
        let non_negative = |v: f64| v.is_finite() && v >= 0.0;
        if !non_negative(self.tuning_power_per_mrr)
            || !non_negative(self.driver_energy)
            || !non_negative(self.receiver_energy)
        {
            return Err(OptimizeError::InvalidEnergyModel(
                "power and energy terms must be non-negative".into(),
            ));
        }
        Ok(())
    }
}

/// How the bitrate axis of the search space is populated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BitrateSearch {
    /// The highest whole-Gb/s line rate the process supports. Reported duplets
    /// always select this rate, so it is the default.
    FixedMax,
    /// Sensitivity mode: 1.0, 1.5, … up to the process bitrate in 0.5 Gb/s steps.
    Sweep,
}

/// The optimizer's chosen duplet with its bandwidth, error value, and energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimumDuplet {
    pub n_lambda: u32,
    pub br_gbps: f64,
    pub aggregate_bw_gbps: f64,
    #[serde(serialize_with = "serialize_error_db")]
    pub error_db: f64,
    pub feasible: bool,
    /// Defined only for feasible duplets.
    pub epb_pj: Option<f64>,
}

impl OptimumDuplet {
    pub const INFEASIBLE: OptimumDuplet = OptimumDuplet {
        n_lambda: 0,
        br_gbps: 0.0,
        aggregate_bw_gbps: 0.0,
        error_db: 0.0,
        feasible: false,
        epb_pj: None,
    };
}

fn serialize_error_db<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_finite() {
        s.serialize_f64(*v)
    } else if *v < 0.0 {
        s.serialize_str("-inf")
    } else {
        s.serialize_str("inf")
    }
}

/// Duplet search over a variant's admissible (N, BR) grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Optimizer {
    pub model: BudgetModel,
    pub energy: EnergyModel,
    pub bitrate_search: BitrateSearch,
    /// Minimum channel spacing in filter linewidths; bounds the N axis.
    pub min_spacing_linewidths: f64,
}

impl Default for Optimizer {
    fn default() -> Self {
        Optimizer {
            model: BudgetModel::default(),
            energy: EnergyModel::default(),
            bitrate_search: BitrateSearch::FixedMax,
            min_spacing_linewidths: DEFAULT_MIN_SPACING_LINEWIDTHS,
        }
    }
}

impl Optimizer {
    /// Largest admissible channel count: the FSR divided by the minimum
    /// spacing. A single channel has no neighbor to crowd, so the floor is 1.
    pub fn max_channel_count(&self, variant: &LinkVariant) -> u32 {
        let eff = &variant.effective;
        let linewidth = eff.operating_wavelength / eff.q_filter;
        let min_spacing = self.min_spacing_linewidths * linewidth;
        let cap = (eff.fsr / min_spacing).floor();
        if cap < 1.0 {
            1
        } else {
            cap as u32
        }
    }

    /// Bitrate candidates for a variant, all within (0, bitrate_max].
    pub fn bitrate_candidates(&self, variant: &LinkVariant) -> Vec<f64> {
        let max = variant.effective.bitrate_max;
        match self.bitrate_search {
            BitrateSearch::FixedMax => {
                let whole = max.floor();
                vec![if whole >= 1.0 { whole } else { max }]
            }
            BitrateSearch::Sweep => {
                let mut out = Vec::new();
                let mut br = 1.0;
                while br <= max + 1e-9 {
                    out.push(br.min(max));
                    br += 0.5;
                }
                if out.is_empty() {
                    out.push(max);
                }
                out
            }
        }
    }

    /// Error value of one duplet: the unused optical power budget after all
    /// losses, penalties, and the 10·log10(N) multiplexing cost. Negative
    /// means infeasible; negative infinity means the per-wavelength budget is
    /// already blown.
    pub fn error_function(
        &self,
        variant: &LinkVariant,
        geometry: LinkGeometry,
        n_lambda: NonZeroU32,
        br_gbps: f64,
    ) -> f64 {
        self.model
            .evaluate(variant, geometry, n_lambda, br_gbps)
            .opb_margin_db
    }

    fn duplet_from(n_lambda: u32, br_gbps: f64, eval: &BudgetEvaluation) -> OptimumDuplet {
        OptimumDuplet {
            n_lambda,
            br_gbps,
            aggregate_bw_gbps: n_lambda as f64 * br_gbps,
            error_db: eval.opb_margin_db,
            feasible: true,
            epb_pj: None,
        }
    }

    /// Selection rule: maximize aggregate bandwidth; break ties on minimum
    /// non-negative error, then on higher bitrate, then on fewer channels.
    fn prefers(candidate: &OptimumDuplet, incumbent: &OptimumDuplet) -> bool {
        if !incumbent.feasible {
            return true;
        }
        if candidate.aggregate_bw_gbps != incumbent.aggregate_bw_gbps {
            return candidate.aggregate_bw_gbps > incumbent.aggregate_bw_gbps;
        }
        if candidate.error_db != incumbent.error_db {
            return candidate.error_db < incumbent.error_db;
        }
        if candidate.br_gbps != incumbent.br_gbps {
            return candidate.br_gbps > incumbent.br_gbps;
        }
        candidate.n_lambda < incumbent.n_lambda
    }

    /// Pick the optimal duplet for a variant at one waveguide length.
    ///
    /// The budget margin shrinks monotonically as channels pack tighter, so
    /// per bitrate the feasible channel counts form a prefix of 1..=N_max and
    /// a descending scan may stop at the first feasible count. The brute-force
    /// oracle re-checks this assumption on every cell.
    pub fn optimize(&self, variant: &LinkVariant, geometry: LinkGeometry) -> OptimumDuplet {
        let eff = &variant.effective;
        let n_max = self.max_channel_count(variant);
        let mut best = OptimumDuplet::INFEASIBLE;
        for br in self.bitrate_candidates(variant) {
            let fraction =
                self.model
                    .truncation_fraction(eff.q_filter, eff.operating_wavelength, br);
            for n in (1..=n_max).rev() {
                let n_lambda = NonZeroU32::new(n).expect("n starts at 1");
                let eval = self
                    .model
                    .evaluate_with_fraction(variant, geometry, n_lambda, fraction);
                if eval.feasible() {
                    let candidate = Self::duplet_from(n, br, &eval);
                    if Self::prefers(&candidate, &best) {
                        best = candidate;
                    }
                    break;
                }
            }
        }
        self.attach_energy(variant, geometry, best)
    }

    /// Exhaustively evaluate every (N, BR) cell of the same search space with
    /// no pruning and no shared intermediate results, applying the same
    /// selection rule. Must agree with [`optimize`](Self::optimize)
    /// field-for-field.
    pub fn brute_force_optimum(
        &self,
        variant: &LinkVariant,
        geometry: LinkGeometry,
    ) -> OptimumDuplet {
        let n_max = self.max_channel_count(variant);
        let mut best = OptimumDuplet::INFEASIBLE;
        for br in self.bitrate_candidates(variant) {
            for n in 1..=n_max {
                let n_lambda = NonZeroU32::new(n).expect("n starts at 1");
                let eval = self.model.evaluate(variant, geometry, n_lambda, br);
                if eval.feasible() {
                    let candidate = Self::duplet_from(n, br, &eval);
                    if Self::prefers(&candidate, &best) {
                        best = candidate;
                    }
                }
            }
        }
        self.attach_energy(variant, geometry, best)
    }

    fn attach_energy(
        &self,
        variant: &LinkVariant,
        geometry: LinkGeometry,
        mut duplet: OptimumDuplet,
    ) -> OptimumDuplet {
        if duplet.feasible {
            let epb = self
                .energy_per_bit(variant, geometry, &duplet)
                .expect("feasible duplet");
            duplet.epb_pj = Some(epb);
        }
        duplet
    }

    /// Energy per bit of a feasible duplet, pJ/bit: laser plus tuning power
    /// spread over the aggregate bandwidth, plus driver and receiver energy.
    ///
    /// The per-wavelength launch power is the receiver sensitivity plus the
    /// total link loss; feasibility already guarantees it stays at or below
    /// the per-wavelength MAOP, which is asserted rather than clamped.
    pub fn energy_per_bit(
        &self,
        variant: &LinkVariant,
        geometry: LinkGeometry,
        duplet: &OptimumDuplet,
    ) -> Result<f64, OptimizeError> {
        if !duplet.feasible || duplet.n_lambda == 0 {
            return Err(OptimizeError::InfeasibleDuplet);
        }
        let n_lambda = NonZeroU32::new(duplet.n_lambda).expect("checked above");
        let eval = self
            .model
            .evaluate(variant, geometry, n_lambda, duplet.br_gbps);
        let eff = &variant.effective;
        let launch_dbm = eff.receiver_sensitivity + eval.p_loss_total_db;
        assert!(
            launch_dbm <= eff.maop_per_wavelength + 1e-9,
            "feasible duplet demands launch power above the per-wavelength MAOP"
        );
        let optical_mw = duplet.n_lambda as f64 * 10f64.powf(launch_dbm / 10.0);
        let laser_mw = optical_mw / self.energy.laser_wallplug_efficiency;
        // Tx and Rx rings both need tuning.
        let tuning_mw = 2.0 * duplet.n_lambda as f64 * self.energy.tuning_power_per_mrr;
        // mW per Gb/s is pJ/bit.
        Ok((laser_mw + tuning_mw) / duplet.aggregate_bw_gbps
            + self.energy.driver_energy
            + self.energy.receiver_energy)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::platform::{apply_pathways, builtin_platform, PathwaySet};

    fn nz(n: u32) -> NonZeroU32 {
        NonZeroU32::new(n).unwrap()
    }

    fn variant(platform: &str, spec: &str) -> LinkVariant {
        apply_pathways(
            &builtin_platform(platform).unwrap(),
            spec.parse::<PathwaySet>().unwrap(),
        )
    }

    fn cm(length: f64) -> LinkGeometry {
        LinkGeometry::new(length).unwrap()
    }

    #[test]
    fn error_is_negative_infinity_when_insertion_loss_alone_blows_budget() {
        let opt = Optimizer::default();
        let v = variant("32nm-soi", "vanilla");
        assert_eq!(
            opt.error_function(&v, cm(10.0), nz(1), 12.0),
            f64::NEG_INFINITY
        );
    }

    #[test]
    fn error_collapses_to_per_wavelength_slack_on_unbounded_variants() {
        let opt = Optimizer::default();
        let v = variant("45nm-soi", "im");
        let eval = opt.model.evaluate(&v, cm(1.0), nz(1), 12.0);
        let err = opt.error_function(&v, cm(1.0), nz(1), 12.0);
        assert!((err - (eval.opb_per_wavelength_db - eval.p_loss_total_db)).abs() < 1e-12);
    }

    #[test]
    fn reported_full_pathway_duplet_is_feasible_at_1cm() {
        let opt = Optimizer::default();
        let v = variant("45nm-soi", "ml+wf+im");
        let err = opt.error_function(&v, cm(1.0), nz(409), 12.0);
        assert!(err >= 0.0);
        assert!((err - 21.974805508).abs() < 1e-6, "got {err}");
    }

    #[test]
    fn bitrate_candidates_default_is_whole_rate() {
        let opt = Optimizer::default();
        assert_eq!(
            opt.bitrate_candidates(&variant("45nm-soi", "vanilla")),
            vec![12.0]
        );
        assert_eq!(
            opt.bitrate_candidates(&variant("32nm-soi", "vanilla")),
            vec![12.0]
        );
        assert_eq!(
            opt.bitrate_candidates(&variant("poly-si", "vanilla")),
            vec![11.0]
        );
    }

    #[test]
    fn bitrate_sweep_steps_by_half() {
        let opt = Optimizer {
            bitrate_search: BitrateSearch::Sweep,
            ..Optimizer::default()
        };
        let brs = opt.bitrate_candidates(&variant("32nm-soi", "vanilla"));
        assert_eq!(brs.len(), 24); // 1.0 ..= 12.5
        assert_eq!(brs[0], 1.0);
        assert_eq!(*brs.last().unwrap(), 12.5);
    }

    #[test]
    fn max_channel_count_scales_with_fsr() {
        let opt = Optimizer::default();
        assert_eq!(opt.max_channel_count(&variant("45nm-soi", "vanilla")), 63);
        assert_eq!(opt.max_channel_count(&variant("45nm-soi", "wf")), 405);
        assert_eq!(opt.max_channel_count(&variant("32nm-soi", "vanilla")), 49);
        assert_eq!(opt.max_channel_count(&variant("32nm-soi", "wf")), 305);
        assert_eq!(opt.max_channel_count(&variant("poly-si", "vanilla")), 25);
        assert_eq!(opt.max_channel_count(&variant("poly-si", "wf")), 236);
    }

    #[test]
    fn optimize_goldens() {
        let opt = Optimizer::default();
        let check = |platform: &str, spec: &str, length: f64, n: u32, br: f64| {
            let d = opt.optimize(&variant(platform, spec), cm(length));
            assert!(d.feasible, "{platform} {spec} @{length}");
            assert_eq!(
                (d.n_lambda, d.br_gbps),
                (n, br),
                "{platform} {spec} @{length}"
            );
            assert_eq!(d.aggregate_bw_gbps, n as f64 * br);
        };
        check("45nm-soi", "vanilla", 3.0, 48, 12.0);
        check("45nm-soi", "vanilla", 1.0, 63, 12.0);
        check("45nm-soi", "ml", 10.0, 63, 12.0);
        check("45nm-soi", "ml+wf", 8.0, 179, 12.0);
        check("45nm-soi", "ml+wf+im", 8.0, 405, 12.0);
        check("32nm-soi", "ml", 8.0, 43, 12.0);
        check("poly-si", "ml+wf", 8.0, 234, 11.0);
    }

    #[test]
    fn optimize_error_golden() {
        let opt = Optimizer::default();
        let d = opt.optimize(&variant("45nm-soi", "vanilla"), cm(3.0));
        assert!((d.error_db - 0.924976460).abs() < 1e-6);
        let d = opt.optimize(&variant("45nm-soi", "ml"), cm(10.0));
        assert!((d.error_db - 0.153135251).abs() < 1e-6);
    }

    #[test]
    fn infeasible_cells_report_zeros() {
        let opt = Optimizer::default();
        let d = opt.optimize(&variant("32nm-soi", "vanilla"), cm(10.0));
        assert_eq!(d, OptimumDuplet::INFEASIBLE);
        assert_eq!(d.n_lambda, 0);
        assert_eq!(d.aggregate_bw_gbps, 0.0);
        assert_eq!(d.epb_pj, None);
    }

    #[test]
    fn aggregate_never_grows_with_length() {
        let opt = Optimizer::default();
        for spec in ["vanilla", "ml", "wf", "ml+wf+im"] {
            let v = variant("45nm-soi", spec);
            let mut prev = f64::INFINITY;
            for length in 1..=10 {
                let d = opt.optimize(&v, cm(length as f64));
                assert!(d.aggregate_bw_gbps <= prev, "{spec} @{length}");
                prev = d.aggregate_bw_gbps;
            }
        }
    }

    #[test]
    fn brute_force_matches_optimize_spot_cells() {
        let opt = Optimizer::default();
        for (platform, spec, length) in [
            ("45nm-soi", "vanilla", 3.0),
            ("45nm-soi", "ml+wf", 8.0),
            ("45nm-soi", "im", 6.0),
            ("32nm-soi", "vanilla", 1.0),
            ("poly-si", "ml+wf+im", 10.0),
        ] {
            let v = variant(platform, spec);
            assert_eq!(
                opt.optimize(&v, cm(length)),
                opt.brute_force_optimum(&v, cm(length)),
                "{platform} {spec} @{length}"
            );
        }
    }

    #[test]
    fn brute_force_matches_in_sweep_mode() {
        let opt = Optimizer {
            bitrate_search: BitrateSearch::Sweep,
            ..Optimizer::default()
        };
        let v = variant("45nm-soi", "vanilla");
        assert_eq!(
            opt.optimize(&v, cm(2.0)),
            opt.brute_force_optimum(&v, cm(2.0))
        );
    }

    #[test]
    fn single_candidate_space_returns_that_candidate() {
        let opt = Optimizer {
            min_spacing_linewidths: 100.0, // forces the N cap to its floor of 1
            ..Optimizer::default()
        };
        let v = variant("45nm-soi", "ml");
        assert_eq!(opt.max_channel_count(&v), 1);
        let d = opt.optimize(&v, cm(1.0));
        assert_eq!(d.n_lambda, 1);
        assert_eq!(d, opt.brute_force_optimum(&v, cm(1.0)));
    }

    #[test]
    fn epb_golden_values() {
        let opt = Optimizer::default();
        let v = variant("45nm-soi", "ml+wf");
        let d = opt.optimize(&v, cm(8.0));
        assert!((d.epb_pj.unwrap() - 0.898749139).abs() < 1e-6);
        let v = variant("45nm-soi", "ml+wf+im");
        let d = opt.optimize(&v, cm(8.0));
        assert!((d.epb_pj.unwrap() - 1.261067168).abs() < 1e-6);
    }

    #[test]
    fn epb_rejects_infeasible_duplet() {
        let opt = Optimizer::default();
        let v = variant("32nm-soi", "vanilla");
        let err = opt
            .energy_per_bit(&v, cm(10.0), &OptimumDuplet::INFEASIBLE)
            .unwrap_err();
        assert_eq!(err, OptimizeError::InfeasibleDuplet);
    }

    #[test]
    fn epb_halves_when_bandwidth_doubles_at_fixed_power() {
        let opt = Optimizer {
            energy: EnergyModel {
                driver_energy: 0.0,
                receiver_energy: 0.0,
                ..EnergyModel::default()
            },
            ..Optimizer::default()
        };
        let v = variant("45nm-soi", "ml");
        let d = opt.optimize(&v, cm(5.0));
        let epb = d.epb_pj.unwrap();
        let mut doubled = d;
        doubled.aggregate_bw_gbps *= 2.0; // same powers spread twice as thin
        let launch = v.effective.receiver_sensitivity
            + opt
                .model
                .evaluate(&v, cm(5.0), nz(d.n_lambda), d.br_gbps)
                .p_loss_total_db;
        let power = d.n_lambda as f64 * 10f64.powf(launch / 10.0)
            / opt.energy.laser_wallplug_efficiency
            + 2.0 * d.n_lambda as f64 * opt.energy.tuning_power_per_mrr;
        assert!((epb - power / d.aggregate_bw_gbps).abs() < 1e-12);
        assert!((power / doubled.aggregate_bw_gbps - epb / 2.0).abs() < 1e-12);
    }

    #[test]
    fn epb_collapses_to_launch_term_with_ideal_electronics() {
        let opt = Optimizer {
            energy: EnergyModel {
                laser_wallplug_efficiency: 1.0,
                tuning_power_per_mrr: 0.0,
                driver_energy: 0.0,
                receiver_energy: 0.0,
            },
            ..Optimizer::default()
        };
        let v = variant("45nm-soi", "ml");
        let d = opt.optimize(&v, cm(10.0));
        let eval = opt.model.evaluate(&v, cm(10.0), nz(d.n_lambda), d.br_gbps);
        let launch = v.effective.receiver_sensitivity + eval.p_loss_total_db;
        let expected = d.n_lambda as f64 * 10f64.powf(launch / 10.0) / d.aggregate_bw_gbps;
        assert!((d.epb_pj.unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn epb_non_increasing_in_efficiency() {
        let v = variant("45nm-soi", "ml+wf");
        let mut prev = f64::INFINITY;
        for eff in [0.05, 0.1, 0.2, 0.5, 1.0] {
            let opt = Optimizer {
                energy: EnergyModel {
                    laser_wallplug_efficiency: eff,
                    ..EnergyModel::default()
                },
                ..Optimizer::default()
            };
            let d = opt.optimize(&v, cm(8.0));
            let epb = d.epb_pj.unwrap();
            assert!(epb <= prev);
            assert!(epb > 0.0 && epb.is_finite());
            prev = epb;
        }
    }

    #[test]
    fn energy_model_validation() {
        assert!(EnergyModel::default().validate().is_ok());
        let bad = EnergyModel {
            laser_wallplug_efficiency: 0.0,
            ..EnergyModel::default()
        };
        assert!(bad.validate().is_err());
        let bad = EnergyModel {
            driver_energy: -1.0,
            ..EnergyModel::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn energy_model_deserializes_partially() {
        let m: EnergyModel = serde_json::from_str(r#"{"driver_energy": 0.5}"#).unwrap();
        assert_eq!(m.driver_energy, 0.5);
        assert_eq!(m.receiver_energy, 0.15);
        assert_eq!(m.laser_wallplug_efficiency, 0.10);
        assert!(serde_json::from_str::<EnergyModel>(r#"{"bogus": 1}"#).is_err());
    }
}
