//! Climatic-chamber setpoint profiles and the first-order thermal lag of
//! the fiber spool inside the chamber.
//!
//! The spool is modeled as a single first-order system,
//! `dT_f/dt = (T_chamber(t) − T_f)/τ`, integrated with a small fixed
//! explicit step. A spool that reaches within 0.5 °C of a 60 °C setpoint
//! step after ~96 minutes corresponds to τ ≈ 1200 s.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One piece of the chamber programme.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Segment {
    /// Hold `setpoint_c` for `duration_s`.
    Hold { setpoint_c: f64, duration_s: f64 },
    /// Ramp linearly from the previous level to `setpoint_c`.
    /// Exactly one of `duration_s` / `rate_c_per_min` must be given.
    Ramp {
        setpoint_c: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        duration_s: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rate_c_per_min: Option<f64>,
    },
}

/// Normalized segment: level trajectory from `start_c` to `end_c` over
/// `duration_s` (equal endpoints for holds).
#[derive(Debug, Clone, Copy)]
struct Piece {
    t_start_s: f64,
    duration_s: f64,
    start_c: f64,
    end_c: f64,
}

/// Ordered chamber programme. Consecutive holds at different setpoints
/// model a chamber whose slew is fast against the spool's thermal lag;
/// insert a ramp segment when the chamber's own rate matters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChamberProfile {
    pub segments: Vec<Segment>,
}

impl ChamberProfile {
    /// Validates and normalizes the programme. The first segment must be
    /// a hold (it defines the starting level a ramp would depart from).
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        let profile = ChamberProfile { segments };
        profile.pieces()?;
        Ok(profile)
    }

    /// Hold `setpoint_c` for the whole horizon.
    pub fn constant(setpoint_c: f64, duration_s: f64) -> Result<Self> {
        ChamberProfile::new(vec![Segment::Hold {
            setpoint_c,
            duration_s,
        }])
    }

    fn pieces(&self) -> Result<Vec<Piece>> {
        if self.segments.is_empty() {
            return Err(Error::InvalidConfig(
                "profile.segments: at least one segment required".into(),
            ));
        }
        let mut pieces = Vec::with_capacity(self.segments.len());
        let mut t = 0.0;
        let mut level = match self.segments[0] {
            Segment::Hold { setpoint_c, .. } => setpoint_c,
            Segment::Ramp { .. } => {
                return Err(Error::InvalidConfig(
                    "profile.segments: first segment must be a hold".into(),
                ))
            }
        };
        for (i, seg) in self.segments.iter().enumerate() {
            let piece = match *seg {
                Segment::Hold {
                    setpoint_c,
                    duration_s,
                } => {
                    if !(duration_s > 0.0) {
                        return Err(Error::InvalidConfig(format!(
                            "profile.segments[{i}].duration_s: must be > 0 s (got {duration_s})"
                        )));
                    }
                    Piece {
                        t_start_s: t,
                        duration_s,
                        start_c: setpoint_c,
                        end_c: setpoint_c,
                    }
                }
                Segment::Ramp {
                    setpoint_c,
                    duration_s,
                    rate_c_per_min,
                } => {
                    let duration = match (duration_s, rate_c_per_min) {
                        (Some(d), None) => {
                            if !(d > 0.0) {
                                return Err(Error::InvalidConfig(format!(
                                    "profile.segments[{i}].duration_s: must be > 0 s (got {d})"
                                )));
                            }
                            d
                        }
                        (None, Some(r)) => {
                            if !(r > 0.0) {
                                return Err(Error::InvalidConfig(format!(
                                    "profile.segments[{i}].rate_c_per_min: must be > 0 (got {r})"
                                )));
                            }
                            (setpoint_c - level).abs() / (r / 60.0)
                        }
                        _ => {
                            return Err(Error::InvalidConfig(format!(
                                "profile.segments[{i}]: ramp needs exactly one of duration_s / rate_c_per_min"
                            )))
                        }
                    };
                    if duration == 0.0 {
                        return Err(Error::InvalidConfig(format!(
                            "profile.segments[{i}]: ramp to the current level has zero duration"
                        )));
                    }
                    Piece {
                        t_start_s: t,
                        duration_s: duration,
                        start_c: level,
                        end_c: setpoint_c,
                    }
                }
            };
            t += piece.duration_s;
            level = piece.end_c;
            pieces.push(piece);
        }
        Ok(pieces)
    }

    /// Chamber setpoint at time `t_s`; holds the final level past the
    /// end of the programme.
    pub fn setpoint(&self, t_s: f64) -> f64 {
        let pieces = self.pieces().expect("profile validated at construction");
        for p in &pieces {
            if t_s < p.t_start_s + p.duration_s {
                if p.start_c == p.end_c {
                    return p.start_c;
                }
                let frac = (t_s - p.t_start_s) / p.duration_s;
                return p.start_c + frac.max(0.0) * (p.end_c - p.start_c);
            }
        }
        pieces.last().expect("nonempty").end_c
    }

    /// Total programmed duration, s.
    pub fn total_duration_s(&self) -> f64 {
        self.pieces()
            .expect("profile validated at construction")
            .iter()
            .map(|p| p.duration_s)
            .sum()
    }

    pub fn initial_setpoint_c(&self) -> f64 {
        self.setpoint(0.0)
    }

    pub fn final_setpoint_c(&self) -> f64 {
        self.pieces().expect("validated").last().unwrap().end_c
    }

    /// First instant the setpoint leaves its initial level, if any.
    /// This marks "ramp start" for stabilization-time bookkeeping.
    pub fn heat_start_s(&self) -> Option<f64> {
        let initial = self.initial_setpoint_c();
        for p in self.pieces().expect("validated") {
            if p.start_c != initial {
                return Some(p.t_start_s);
            }
            if p.end_c != initial {
                // ramp departing the initial level
                return Some(p.t_start_s);
            }
        }
        None
    }
}

/// First-order thermal model of the fiber spool.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiberThermalModel {
    /// Lag time constant, s.
    pub tau_thermal_s: f64,
    /// Fiber temperature at t = 0, °C.
    pub t_initial_c: f64,
}

impl FiberThermalModel {
    pub fn new(tau_thermal_s: f64, t_initial_c: f64) -> Result<Self> {
        if !(tau_thermal_s > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "thermal.tau_thermal_s: must be > 0 s (got {tau_thermal_s})"
            )));
        }
        Ok(FiberThermalModel {
            tau_thermal_s,
            t_initial_c,
        })
    }
}

/// Integrates the spool temperature against the chamber programme with
/// explicit steps of `dt_s`, returning `(t_s, t_fiber_c)` samples at
/// 0, dt, 2·dt, … covering `horizon_s` inclusive.
///
/// For `dt_s <= 1 s` the trajectory stays within 0.01 °C of the exact
/// exponential response. Steps larger than τ degenerate gracefully to
/// tracking the chamber (the τ → 0 limit).
pub fn fiber_temperature_series(
    profile: &ChamberProfile,
    model: &FiberThermalModel,
    dt_s: f64,
    horizon_s: f64,
) -> Result<Vec<(f64, f64)>> {
    if !(dt_s > 0.0 && dt_s <= 60.0) {
        return Err(Error::InvalidConfig(format!(
            "thermal integration step dt_s = {dt_s} must be in (0, 60] s"
        )));
    }
    if horizon_s < profile.total_duration_s() {
        return Err(Error::InvalidConfig(format!(
            "horizon {horizon_s} s does not cover the {} s profile",
            profile.total_duration_s()
        )));
    }
    let n = (horizon_s / dt_s).round() as usize;
    let mut series = Vec::with_capacity(n + 1);
    let mut t_fiber = model.t_initial_c;
    for k in 0..=n {
        let t_s = k as f64 * dt_s;
        series.push((t_s, t_fiber));
        let gain = (dt_s / model.tau_thermal_s).min(1.0);
        t_fiber += gain * (profile.setpoint(t_s) - t_fiber);
    }
    Ok(series)
}
