//! Scenario configuration files.
//!
//! The on-disk format is TOML with unit-suffixed keys so a value can
//! never be mistaken for the wrong unit. Every key is optional — an
//! empty file is the default BiDi scenario — but unknown keys are
//! rejected, and validation errors name the offending key.

use serde::{Deserialize, Serialize};

use crate::channels::{bidi_plan, dwdm_plan, GridConvention, WavelengthPlan};
use crate::error::{Error, Result};
use crate::experiment::{CalibrationPolicy, Scenario, SteadyParams};
use crate::optics::FiberSpec;
use crate::thermal::{ChamberProfile, FiberThermalModel, Segment};
use crate::wrlink::{FixedLatencies, NoiseModel};

pub const SCHEMA_VERSION: u32 = 1;

/// Default static offsets per plan kind, ps: the −20 °C baselines of the
/// two stock scenarios.
pub const BIDI_STATIC_OFFSET_PS: f64 = 29.0;
pub const DWDM_STATIC_OFFSET_PS: f64 = 24.9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub schema_version: u32,
    /// Report label; defaults to the plan's own label.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub fiber: FiberCfg,
    pub plan: PlanCfg,
    pub noise: NoiseCfg,
    pub profile: ProfileCfg,
    pub thermal: ThermalCfg,
    pub calibration: CalibrationCfg,
    pub sampling: SamplingCfg,
    pub steady: SteadyCfg,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            schema_version: SCHEMA_VERSION,
            label: None,
            fiber: FiberCfg::default(),
            plan: PlanCfg::default(),
            noise: NoiseCfg::default(),
            profile: ProfileCfg::default(),
            thermal: ThermalCfg::default(),
            calibration: CalibrationCfg::default(),
            sampling: SamplingCfg::default(),
            steady: SteadyCfg::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FiberCfg {
    pub length_km: f64,
    pub lambda0_nm: f64,
    pub s0_ps_per_nm2_km: f64,
    pub dlambda0_dt_nm_per_k: f64,
    pub alpha_l_per_k: f64,
    pub ng_ref: f64,
    pub dn_dt_per_k: f64,
    pub t_ref_c: f64,
}

impl Default for FiberCfg {
    fn default() -> Self {
        let f = FiberSpec::default();
        FiberCfg {
            length_km: f.length_km,
            lambda0_nm: f.lambda0_nm,
            s0_ps_per_nm2_km: f.s0,
            dlambda0_dt_nm_per_k: f.dlambda0_dt,
            alpha_l_per_k: f.alpha_l,
            ng_ref: f.ng_ref,
            dn_dt_per_k: f.dn_dt,
            t_ref_c: f.t_ref_c,
        }
    }
}

/// Plan kind selector plus the knobs each kind understands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PlanCfg {
    /// "bidi" or "dwdm".
    pub kind: String,
    /// BiDi only: 1310 nm on the master transmitter.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub short_at_master: Option<bool>,
    /// DWDM only.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ch_ms: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ch_sm: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convention: Option<GridConvention>,
    pub excess_ms_ps: f64,
    pub excess_sm_ps: f64,
}

impl Default for PlanCfg {
    fn default() -> Self {
        PlanCfg {
            kind: "bidi".to_string(),
            short_at_master: None,
            ch_ms: None,
            ch_sm: None,
            convention: None,
            excess_ms_ps: 0.0,
            excess_sm_ps: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NoiseCfg {
    pub timestamp_sigma_ps: f64,
    pub tic_sigma_ps: f64,
    pub seed: u64,
}

impl Default for NoiseCfg {
    fn default() -> Self {
        let n = NoiseModel::default();
        NoiseCfg {
            timestamp_sigma_ps: n.timestamp_sigma_ps,
            tic_sigma_ps: n.tic_sigma_ps,
            seed: n.seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProfileCfg {
    pub segments: Vec<SegmentCfg>,
}

impl Default for ProfileCfg {
    fn default() -> Self {
        ProfileCfg {
            segments: vec![
                SegmentCfg {
                    kind: "hold".into(),
                    setpoint_c: -20.0,
                    duration_s: Some(1800.0),
                    rate_c_per_min: None,
                },
                SegmentCfg {
                    kind: "hold".into(),
                    setpoint_c: 40.0,
                    duration_s: Some(9000.0),
                    rate_c_per_min: None,
                },
            ],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentCfg {
    /// "hold" or "ramp".
    pub kind: String,
    pub setpoint_c: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duration_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rate_c_per_min: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ThermalCfg {
    pub tau_thermal_s: f64,
    pub t_initial_c: f64,
}

impl Default for ThermalCfg {
    fn default() -> Self {
        ThermalCfg {
            tau_thermal_s: 1200.0,
            t_initial_c: -20.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CalibrationCfg {
    pub t_cal_c: f64,
    pub fixed_tx_m_ps: f64,
    pub fixed_rx_m_ps: f64,
    pub fixed_tx_s_ps: f64,
    pub fixed_rx_s_ps: f64,
    /// Defaults to the plan kind's baseline (29.0 ps BiDi, 24.9 ps DWDM).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub static_offset_ps: Option<f64>,
}

impl Default for CalibrationCfg {
    fn default() -> Self {
        CalibrationCfg {
            t_cal_c: -20.0,
            fixed_tx_m_ps: 0.0,
            fixed_rx_m_ps: 0.0,
            fixed_tx_s_ps: 0.0,
            fixed_rx_s_ps: 0.0,
            static_offset_ps: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SamplingCfg {
    pub sample_interval_s: f64,
    pub thermal_step_s: f64,
}

impl Default for SamplingCfg {
    fn default() -> Self {
        SamplingCfg {
            sample_interval_s: 1.0,
            thermal_step_s: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SteadyCfg {
    pub window_s: f64,
    pub slope_threshold_ps_per_s: f64,
    pub averaging_window_s: f64,
}

impl Default for SteadyCfg {
    fn default() -> Self {
        let s = SteadyParams::default();
        SteadyCfg {
            window_s: s.window_s,
            slope_threshold_ps_per_s: s.slope_threshold_ps_per_s,
            averaging_window_s: s.averaging_window_s,
        }
    }
}

impl ScenarioConfig {
    /// Builds and validates the runnable scenario.
    pub fn to_scenario(&self) -> Result<Scenario> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::InvalidConfig(format!(
                "schema_version: expected {SCHEMA_VERSION}, got {}",
                self.schema_version
            )));
        }
        let fiber = FiberSpec::new(
            self.fiber.length_km,
            self.fiber.lambda0_nm,
            self.fiber.s0_ps_per_nm2_km,
            self.fiber.dlambda0_dt_nm_per_k,
            self.fiber.alpha_l_per_k,
            self.fiber.ng_ref,
            self.fiber.dn_dt_per_k,
            self.fiber.t_ref_c,
        )?;
        let (mut plan, default_offset) = self.build_plan()?;
        if let Some(label) = &self.label {
            plan.label = label.clone();
        }
        let profile = self.build_profile()?;
        let thermal = FiberThermalModel::new(self.thermal.tau_thermal_s, self.thermal.t_initial_c)?;
        let scenario = Scenario {
            fiber,
            plan,
            noise: NoiseModel {
                timestamp_sigma_ps: self.noise.timestamp_sigma_ps,
                tic_sigma_ps: self.noise.tic_sigma_ps,
                seed: self.noise.seed,
            },
            profile,
            thermal,
            calibration: CalibrationPolicy {
                t_cal_c: self.calibration.t_cal_c,
                fixed: FixedLatencies {
                    tx_m_ps: self.calibration.fixed_tx_m_ps,
                    rx_m_ps: self.calibration.fixed_rx_m_ps,
                    tx_s_ps: self.calibration.fixed_tx_s_ps,
                    rx_s_ps: self.calibration.fixed_rx_s_ps,
                },
                static_offset_ps: self.calibration.static_offset_ps.unwrap_or(default_offset),
            },
            sample_interval_s: self.sampling.sample_interval_s,
            thermal_step_s: self.sampling.thermal_step_s,
            steady: SteadyParams {
                window_s: self.steady.window_s,
                slope_threshold_ps_per_s: self.steady.slope_threshold_ps_per_s,
                averaging_window_s: self.steady.averaging_window_s,
            },
        };
        scenario.validate()?;
        Ok(scenario)
    }

    fn build_plan(&self) -> Result<(WavelengthPlan, f64)> {
        let p = &self.plan;
        match p.kind.as_str() {
            "bidi" => {
                for (key, set) in [
                    ("plan.ch_ms", p.ch_ms.is_some()),
                    ("plan.ch_sm", p.ch_sm.is_some()),
                    ("plan.convention", p.convention.is_some()),
                ] {
                    if set {
                        return Err(Error::InvalidConfig(format!(
                            "{key}: only meaningful for kind = \"dwdm\""
                        )));
                    }
                }
                let mut plan = bidi_plan(p.short_at_master.unwrap_or(true));
                plan.excess_ms_ps = p.excess_ms_ps;
                plan.excess_sm_ps = p.excess_sm_ps;
                check_excess(&plan)?;
                Ok((plan, BIDI_STATIC_OFFSET_PS))
            }
            "dwdm" => {
                if p.short_at_master.is_some() {
                    return Err(Error::InvalidConfig(
                        "plan.short_at_master: only meaningful for kind = \"bidi\"".into(),
                    ));
                }
                let plan = dwdm_plan(
                    p.ch_ms.unwrap_or(33),
                    p.ch_sm.unwrap_or(34),
                    p.convention.unwrap_or_default(),
                    p.excess_ms_ps,
                    p.excess_sm_ps,
                )?;
                Ok((plan, DWDM_STATIC_OFFSET_PS))
            }
            other => Err(Error::InvalidConfig(format!(
                "plan.kind: expected \"bidi\" or \"dwdm\", got \"{other}\""
            ))),
        }
    }

    fn build_profile(&self) -> Result<ChamberProfile> {
        let mut segments = Vec::with_capacity(self.profile.segments.len());
        for (i, s) in self.profile.segments.iter().enumerate() {
            match s.kind.as_str() {
                "hold" => {
                    if s.rate_c_per_min.is_some() {
                        return Err(Error::InvalidConfig(format!(
                            "profile.segments[{i}].rate_c_per_min: only meaningful for kind = \"ramp\""
                        )));
                    }
                    let duration_s = s.duration_s.ok_or_else(|| {
                        Error::InvalidConfig(format!(
                            "profile.segments[{i}].duration_s: required for kind = \"hold\" (seconds)"
                        ))
                    })?;
                    segments.push(Segment::Hold {
                        setpoint_c: s.setpoint_c,
                        duration_s,
                    });
                }
                "ramp" => segments.push(Segment::Ramp {
                    setpoint_c: s.setpoint_c,
                    duration_s: s.duration_s,
                    rate_c_per_min: s.rate_c_per_min,
                }),
                other => {
                    return Err(Error::InvalidConfig(format!(
                        "profile.segments[{i}].kind: expected \"hold\" or \"ramp\", got \"{other}\""
                    )))
                }
            }
        }
        ChamberProfile::new(segments)
    }
}

fn check_excess(plan: &WavelengthPlan) -> Result<()> {
    if plan.excess_ms_ps < 0.0 || plan.excess_sm_ps < 0.0 {
        return Err(Error::InvalidConfig(format!(
            "plan.excess_ms_ps/excess_sm_ps: must be >= 0 ps (got {}, {})",
            plan.excess_ms_ps, plan.excess_sm_ps
        )));
    }
    Ok(())
}

/// Parses a config and returns the validated scenario. An empty string
/// is the all-defaults BiDi scenario.
pub fn parse_config(text: &str) -> Result<Scenario> {
    let cfg: ScenarioConfig =
        toml::from_str(text).map_err(|e| Error::ConfigParse(e.to_string()))?;
    cfg.to_scenario()
}

/// Loads and validates a scenario from a TOML file.
pub fn load_config(path: impl AsRef<std::path::Path>) -> Result<Scenario> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::ConfigParse(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

/// The default configuration rendered as TOML, every key explicit.
pub fn dump_default_config() -> String {
    toml::to_string_pretty(&ScenarioConfig::default()).expect("default config serializes")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_default_bidi_scenario() {
        let s = parse_config("").unwrap();
        assert_eq!(s, Scenario::default());
        assert_eq!(s.plan.label, "BiDi WDM");
        assert_eq!(s.calibration.static_offset_ps, 29.0);
    }

    #[test]
    fn dumped_default_round_trips_exactly() {
        let dumped = dump_default_config();
        let s = parse_config(&dumped).unwrap();
        assert_eq!(s, Scenario::default());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(matches!(
            parse_config("unknown_top = 1"),
            Err(Error::ConfigParse(_))
        ));
        assert!(matches!(
            parse_config("[fiber]\nlenght_km = 20.0"),
            Err(Error::ConfigParse(_))
        ));
        assert!(matches!(
            parse_config("[steady]\nslope_threshold_ps_per_min = 0.5"),
            Err(Error::ConfigParse(_))
        ));
    }

    #[test]
    fn fiber_band_violation_names_the_key() {
        let err = parse_config("[fiber]\nlambda0_nm = 1290.0").unwrap_err();
        assert!(matches!(err, Error::InvalidFiber(_)));
        assert!(err.to_string().contains("lambda0_nm"));
    }

    #[test]
    fn dwdm_plan_from_config() {
        let s = parse_config(
            "[plan]\nkind = \"dwdm\"\nch_ms = 33\nch_sm = 34\nconvention = \"itu-frequency\"",
        )
        .unwrap();
        assert!(s.plan.label.contains("DWDM"));
        assert_eq!(s.calibration.static_offset_ps, 24.9);
        assert!((s.plan.lambda_ms_nm - 1550.918).abs() < 1e-3);
    }

    #[test]
    fn kind_mismatched_keys_are_rejected() {
        assert!(parse_config("[plan]\nkind = \"bidi\"\nch_ms = 33").is_err());
        assert!(parse_config("[plan]\nkind = \"dwdm\"\nshort_at_master = true").is_err());
        assert!(parse_config("[plan]\nkind = \"cwdm\"").is_err());
    }

    #[test]
    fn explicit_static_offset_overrides_plan_default() {
        let s = parse_config("[calibration]\nstatic_offset_ps = 3.5").unwrap();
        assert_eq!(s.calibration.static_offset_ps, 3.5);
    }

    #[test]
    fn ramp_segments_parse() {
        let s = parse_config(
            r#"
[[profile.segments]]
kind = "hold"
setpoint_c = -20.0
duration_s = 1800.0

[[profile.segments]]
kind = "ramp"
setpoint_c = 40.0
rate_c_per_min = 2.0

[[profile.segments]]
kind = "hold"
setpoint_c = 40.0
duration_s = 7200.0
"#,
        )
        .unwrap();
        assert_eq!(s.profile.total_duration_s(), 1800.0 + 1800.0 + 7200.0);
        assert_eq!(s.profile.heat_start_s(), Some(1800.0));
    }

    #[test]
    fn bad_segment_kind_is_rejected() {
        let err = parse_config(
            "[[profile.segments]]\nkind = \"soak\"\nsetpoint_c = 0.0\nduration_s = 10.0",
        )
        .unwrap_err();
        assert!(err.to_string().contains("segments[0].kind"));
    }

    #[test]
    fn schema_version_checked() {
        assert!(parse_config("schema_version = 2").is_err());
    }

    #[test]
    fn sampling_alignment_enforced() {
        assert!(parse_config("[sampling]\nsample_interval_s = 1.0\nthermal_step_s = 0.4").is_err());
        assert!(parse_config("[sampling]\nsample_interval_s = 2.0\nthermal_step_s = 0.5").is_ok());
    }

    #[test]
    fn label_override_applies() {
        let s = parse_config("label = \"bench A\"").unwrap();
        assert_eq!(s.plan.label, "bench A");
    }
}
