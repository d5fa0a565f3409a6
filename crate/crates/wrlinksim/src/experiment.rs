//! Scenario orchestration: drive a wavelength plan through a chamber
//! temperature programme, detect the steady plateaus on cRTT, and
//! condense the run into a cold/hot offset report.

use serde::{Deserialize, Serialize};

use crate::channels::WavelengthPlan;
use crate::error::{Error, Result};
use crate::optics::FiberSpec;
use crate::thermal::{fiber_temperature_series, ChamberProfile, FiberThermalModel};
use crate::wrlink::{calibrate_alpha, sample_link, FixedLatencies, LinkSample, NoiseGen, NoiseModel};

/// When and how the link was calibrated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationPolicy {
    /// Temperature at which alpha is computed and frozen, °C.
    pub t_cal_c: f64,
    pub fixed: FixedLatencies,
    /// Residual 1PPS comparison offset, ps.
    pub static_offset_ps: f64,
}

/// Steady-state detection and averaging parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteadyParams {
    /// Sliding regression window, s.
    pub window_s: f64,
    /// |least-squares slope of cRTT| below this marks steady, ps/s.
    pub slope_threshold_ps_per_s: f64,
    /// Trailing window each steady mean is taken over, s.
    pub averaging_window_s: f64,
}

impl Default for SteadyParams {
    fn default() -> Self {
        SteadyParams {
            window_s: 600.0,
            slope_threshold_ps_per_s: 0.5,
            averaging_window_s: 1200.0,
        }
    }
}

/// Complete description of one simulated run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub fiber: FiberSpec,
    pub plan: WavelengthPlan,
    pub noise: NoiseModel,
    pub profile: ChamberProfile,
    pub thermal: FiberThermalModel,
    pub calibration: CalibrationPolicy,
    /// Timestamp-exchange cadence, s.
    pub sample_interval_s: f64,
    /// Thermal integration step, s; the sample interval must be an
    /// integer multiple of it.
    pub thermal_step_s: f64,
    pub steady: SteadyParams,
}

impl Default for Scenario {
    /// The default run: 20 km BiDi 1310/1550 link calibrated at −20 °C,
    /// 30 min cold hold, chamber stepped to 40 °C, 1 Hz sampling for 3 h.
    fn default() -> Self {
        use crate::thermal::Segment;
        Scenario {
            fiber: FiberSpec::default(),
            plan: crate::channels::bidi_plan(true),
            noise: NoiseModel::default(),
            profile: ChamberProfile::new(vec![
                Segment::Hold {
                    setpoint_c: -20.0,
                    duration_s: 1800.0,
                },
                Segment::Hold {
                    setpoint_c: 40.0,
                    duration_s: 9000.0,
                },
            ])
            .expect("default profile is valid"),
            thermal: FiberThermalModel {
                tau_thermal_s: 1200.0,
                t_initial_c: -20.0,
            },
            calibration: CalibrationPolicy {
                t_cal_c: -20.0,
                fixed: FixedLatencies::default(),
                static_offset_ps: 29.0,
            },
            sample_interval_s: 1.0,
            thermal_step_s: 1.0,
            steady: SteadyParams::default(),
        }
    }
}

impl Scenario {
    /// Scenario horizon: the full programmed chamber profile.
    pub fn horizon_s(&self) -> f64 {
        self.profile.total_duration_s()
    }

    pub fn validate(&self) -> Result<()> {
        self.fiber.validate()?;
        self.noise.validate()?;
        self.calibration.fixed.validate()?;
        if !(self.sample_interval_s > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "sampling.sample_interval_s: must be > 0 s (got {})",
                self.sample_interval_s
            )));
        }
        let ratio = self.sample_interval_s / self.thermal_step_s;
        if (ratio - ratio.round()).abs() > 1e-9 || ratio < 1.0 - 1e-9 {
            return Err(Error::InvalidConfig(format!(
                "sampling.sample_interval_s ({}) must be an integer multiple of sampling.thermal_step_s ({})",
                self.sample_interval_s, self.thermal_step_s
            )));
        }
        let horizon = self.horizon_s();
        if self.steady.window_s >= horizon {
            return Err(Error::InvalidConfig(format!(
                "steady.window_s ({}) must be shorter than the {} s horizon",
                self.steady.window_s, horizon
            )));
        }
        if !(self.steady.window_s > 0.0 && self.steady.averaging_window_s > 0.0) {
            return Err(Error::InvalidConfig(
                "steady windows must be > 0 s".into(),
            ));
        }
        if !(self.steady.slope_threshold_ps_per_s >= 0.0) {
            return Err(Error::InvalidConfig(
                "steady.slope_threshold_ps_per_s must be >= 0".into(),
            ));
        }
        Ok(())
    }
}

/// One sampled instant: the link exchange plus the chamber setpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesRow {
    pub t_chamber_c: f64,
    pub sample: LinkSample,
}

/// Output of one scenario run.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSeries {
    pub label: String,
    pub sample_interval_s: f64,
    /// When the chamber first left its initial setpoint, if it did.
    pub heat_start_s: Option<f64>,
    pub rows: Vec<SeriesRow>,
}

impl ScenarioSeries {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Runs the scenario: calibrates alpha once at the calibration
/// temperature, integrates the fiber temperature, and performs one
/// timestamp exchange per sample interval across the horizon.
pub fn run_scenario(scenario: &Scenario) -> Result<ScenarioSeries> {
    scenario.validate()?;
    let calib = calibrate_alpha(
        &scenario.fiber,
        &scenario.plan,
        scenario.calibration.fixed,
        scenario.calibration.static_offset_ps,
        scenario.calibration.t_cal_c,
    )?;
    let horizon = scenario.horizon_s();
    let temps = fiber_temperature_series(
        &scenario.profile,
        &scenario.thermal,
        scenario.thermal_step_s,
        horizon,
    )?;
    let stride = (scenario.sample_interval_s / scenario.thermal_step_s).round() as usize;
    let n_samples = (horizon / scenario.sample_interval_s).round() as usize;
    let mut noise = NoiseGen::new(scenario.noise);
    let mut rows = Vec::with_capacity(n_samples);
    for k in 0..n_samples {
        let (t_s, t_fiber_c) = temps[k * stride];
        let sample = sample_link(
            &scenario.fiber,
            &scenario.plan,
            &calib,
            &mut noise,
            t_s,
            t_fiber_c,
        )?;
        rows.push(SeriesRow {
            t_chamber_c: scenario.profile.setpoint(t_s),
            sample,
        });
    }
    Ok(ScenarioSeries {
        label: scenario.plan.label.clone(),
        sample_interval_s: scenario.sample_interval_s,
        heat_start_s: scenario.profile.heat_start_s(),
        rows,
    })
}

/// A maximal run of steady sample times, inclusive, in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyInterval {
    pub start_s: f64,
    pub end_s: f64,
}

/// Finds the intervals where cRTT has no resolvable trend: a sample time
/// is steady when the least-squares slope of cRTT over the window
/// *starting* there stays below the threshold in magnitude. Marking
/// window starts keeps a plateau's steady interval clear of the
/// transient that follows it. Returns maximal merged intervals; an empty
/// result means the series never stabilizes.
pub fn detect_steady(
    series: &ScenarioSeries,
    window_s: f64,
    slope_threshold_ps_per_s: f64,
) -> Result<Vec<SteadyInterval>> {
    let n = series.rows.len();
    let h = series.sample_interval_s;
    let w = (window_s / h).round() as usize;
    if w < 2 {
        return Err(Error::InvalidConfig(format!(
            "steady window {window_s} s spans fewer than 2 samples at {h} s cadence"
        )));
    }
    if w > n {
        return Err(Error::InvalidConfig(format!(
            "steady window {window_s} s exceeds the {} s series",
            n as f64 * h
        )));
    }
    // centered least squares per window; x is time in seconds
    let x_mean = (w - 1) as f64 * h / 2.0;
    let denom: f64 = (0..w)
        .map(|j| {
            let d = j as f64 * h - x_mean;
            d * d
        })
        .sum();
    let mut intervals: Vec<SteadyInterval> = Vec::new();
    let mut current: Option<(f64, f64)> = None;
    for i in 0..=(n - w) {
        let window = &series.rows[i..i + w];
        let y_mean = window.iter().map(|r| r.sample.crtt_ps).sum::<f64>() / w as f64;
        let cov: f64 = window
            .iter()
            .enumerate()
            .map(|(j, r)| (j as f64 * h - x_mean) * (r.sample.crtt_ps - y_mean))
            .sum();
        let slope = cov / denom;
        let t = series.rows[i].sample.t_s;
        if slope.abs() <= slope_threshold_ps_per_s {
            current = match current {
                Some((start, _)) => Some((start, t)),
                None => Some((t, t)),
            };
        } else if let Some((start, end)) = current.take() {
            intervals.push(SteadyInterval {
                start_s: start,
                end_s: end,
            });
        }
    }
    if let Some((start, end)) = current {
        intervals.push(SteadyInterval {
            start_s: start,
            end_s: end,
        });
    }
    Ok(intervals)
}

/// Steady-state means per Table-1 column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub label: String,
    /// Mean Δt over the cold steady window, ps.
    pub dt_cold_ps: f64,
    /// Mean Δt over the hot steady window, ps.
    pub dt_hot_ps: f64,
    /// |Δt_hot − Δt_cold|, ps.
    pub dt_delta_ps: f64,
    /// Time from the chamber leaving its initial setpoint to the start
    /// of the hot steady interval, s.
    pub stabilization_time_s: f64,
    pub cold_samples: usize,
    pub hot_samples: usize,
}

/// Temperature span below which a series counts as single-phase, °C.
const SINGLE_PHASE_SPAN_C: f64 = 0.1;

fn rows_in<'a>(series: &'a ScenarioSeries, iv: &SteadyInterval) -> &'a [SeriesRow] {
    let h = series.sample_interval_s;
    let first = (iv.start_s / h).round() as usize;
    let last = (iv.end_s / h).round() as usize;
    &series.rows[first..=last.min(series.rows.len() - 1)]
}

fn mean_fiber_temp(series: &ScenarioSeries, iv: &SteadyInterval) -> f64 {
    let rows = rows_in(series, iv);
    rows.iter().map(|r| r.sample.t_fiber_c).sum::<f64>() / rows.len() as f64
}

fn trailing_mean_dt(series: &ScenarioSeries, iv: &SteadyInterval, window_s: f64) -> (f64, usize) {
    let h = series.sample_interval_s;
    let last = (iv.end_s / h).round() as usize;
    let span = (window_s / h).round() as usize;
    let first_in_iv = (iv.start_s / h).round() as usize;
    let first = last.saturating_sub(span.saturating_sub(1)).max(first_in_iv);
    let rows = &series.rows[first..=last];
    (
        rows.iter().map(|r| r.sample.dt_ps).sum::<f64>() / rows.len() as f64,
        rows.len(),
    )
}

/// Averages Δt over the trailing `averaging_window_s` of the cold and
/// hot steady intervals. Intervals are classified cold/hot by their mean
/// fiber temperature relative to the series extremes; a missing phase is
/// an error naming that phase.
pub fn summarize(
    series: &ScenarioSeries,
    steady: &[SteadyInterval],
    averaging_window_s: f64,
) -> Result<ExperimentReport> {
    if steady.is_empty() {
        return Err(Error::MissingSteadyPhase { phase: "cold" });
    }
    let t_min = series
        .rows
        .iter()
        .map(|r| r.sample.t_fiber_c)
        .fold(f64::INFINITY, f64::min);
    let t_max = series
        .rows
        .iter()
        .map(|r| r.sample.t_fiber_c)
        .fold(f64::NEG_INFINITY, f64::max);
    let span = t_max - t_min;

    let (cold_iv, hot_iv) = if span < SINGLE_PHASE_SPAN_C {
        // isothermal run: both phases collapse onto the same interval
        (steady[0], steady[steady.len() - 1])
    } else {
        let cold = steady
            .iter()
            .find(|iv| mean_fiber_temp(series, iv) < t_min + 0.25 * span)
            .copied()
            .ok_or(Error::MissingSteadyPhase { phase: "cold" })?;
        let hot = steady
            .iter()
            .rev()
            .find(|iv| mean_fiber_temp(series, iv) > t_max - 0.25 * span)
            .copied()
            .ok_or(Error::MissingSteadyPhase { phase: "hot" })?;
        (cold, hot)
    };

    let (dt_cold, cold_n) = trailing_mean_dt(series, &cold_iv, averaging_window_s);
    let (dt_hot, hot_n) = trailing_mean_dt(series, &hot_iv, averaging_window_s);
    let stabilization = match series.heat_start_s {
        Some(h0) => (hot_iv.start_s - h0).max(0.0),
        None => 0.0,
    };
    Ok(ExperimentReport {
        label: series.label.clone(),
        dt_cold_ps: dt_cold,
        dt_hot_ps: dt_hot,
        dt_delta_ps: (dt_hot - dt_cold).abs(),
        stabilization_time_s: stabilization,
        cold_samples: cold_n,
        hot_samples: hot_n,
    })
}

/// Ratio of the two reports' offset-change magnitudes, `a / b`.
pub fn compare_plans(a: &ExperimentReport, b: &ExperimentReport) -> Result<f64> {
    if b.dt_delta_ps == 0.0 {
        return Err(Error::UndefinedRatio);
    }
    Ok(a.dt_delta_ps / b.dt_delta_ps)
}
