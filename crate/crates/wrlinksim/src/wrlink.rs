//! White Rabbit two-way time-transfer model.
//!
//! The link is reduced to its steady-state delay estimate: the slave
//! measures the fiber round trip (cRTT), splits it with the asymmetry
//! parameter alpha frozen at calibration, and the residual between the
//! estimated and true master→slave delay appears as the 1PPS offset Δt.
//!
//! Alpha is the calibration-time ratio of the two fiber-path delays
//! minus one. The split `(1+α)/(2+α)` reproduces the true forward delay
//! exactly at the calibration temperature and stays exact under any
//! change that scales both directions by a common factor. A change that
//! shifts both directions by an equal *additive* amount (the thermo-optic
//! base term) is not of that form: a fraction `(k − ½) ≈ α/4` of the
//! round-trip change leaks into Δt. With default constants the leak is
//! ≈ −10.8 ps over a 60 °C swing on the 1310/1550 plan — about 5% of the
//! dispersion-asymmetry drift, and part of what a deployed link shows.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::channels::WavelengthPlan;
use crate::error::{Error, Result};
use crate::optics::FiberSpec;

/// Constant hardware latencies outside the fiber path, ps.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FixedLatencies {
    pub tx_m_ps: f64,
    pub rx_m_ps: f64,
    pub tx_s_ps: f64,
    pub rx_s_ps: f64,
}

impl FixedLatencies {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("fixed_tx_m_ps", self.tx_m_ps),
            ("fixed_rx_m_ps", self.rx_m_ps),
            ("fixed_tx_s_ps", self.tx_s_ps),
            ("fixed_rx_s_ps", self.rx_s_ps),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "{name}: fixed latency must be >= 0 ps (got {v})"
                )));
            }
        }
        Ok(())
    }
}

/// Link state frozen at calibration time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkCalibration {
    /// WR asymmetry parameter, dimensionless.
    pub alpha: f64,
    /// Temperature at which alpha was computed, °C.
    pub t_cal_c: f64,
    pub fixed: FixedLatencies,
    /// Residual device offset of the 1PPS comparison, ps.
    pub static_offset_ps: f64,
}

impl LinkCalibration {
    /// Fraction of the fiber round trip assigned to master→slave.
    pub fn split_fraction(&self) -> f64 {
        (1.0 + self.alpha) / (2.0 + self.alpha)
    }
}

/// White measurement noise, applied per exchange.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    /// Per-exchange white noise on cRTT, ps (1σ).
    pub timestamp_sigma_ps: f64,
    /// White noise of the time-interval counter on Δt, ps (1σ).
    pub tic_sigma_ps: f64,
    /// Generator seed; identical seeds produce identical sequences.
    pub seed: u64,
}

impl Default for NoiseModel {
    fn default() -> Self {
        NoiseModel {
            timestamp_sigma_ps: 5.0,
            tic_sigma_ps: 4.0,
            seed: 1,
        }
    }
}

impl NoiseModel {
    pub fn zero() -> Self {
        NoiseModel {
            timestamp_sigma_ps: 0.0,
            tic_sigma_ps: 0.0,
            seed: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.timestamp_sigma_ps < 0.0 || self.tic_sigma_ps < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "noise sigmas must be >= 0 ps (got {}, {})",
                self.timestamp_sigma_ps, self.tic_sigma_ps
            )));
        }
        Ok(())
    }
}

/// Explicit generator state for the noise model; pass one per scenario
/// and scenarios stay independently reproducible.
#[derive(Debug, Clone)]
pub struct NoiseGen {
    model: NoiseModel,
    rng: ChaCha8Rng,
}

impl NoiseGen {
    pub fn new(model: NoiseModel) -> Self {
        NoiseGen {
            rng: ChaCha8Rng::seed_from_u64(model.seed),
            model,
        }
    }

    fn draw(&mut self, sigma: f64) -> f64 {
        if sigma == 0.0 {
            return 0.0;
        }
        // Box-Muller on two uniform draws keeps the stream layout stable
        let u1: f64 = rand::Rng::gen_range(&mut self.rng, f64::EPSILON..1.0);
        let u2: f64 = rand::Rng::gen_range(&mut self.rng, 0.0..1.0);
        sigma * (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
    }

    pub fn crtt_noise_ps(&mut self) -> f64 {
        let sigma = self.model.timestamp_sigma_ps;
        self.draw(sigma)
    }

    pub fn tic_noise_ps(&mut self) -> f64 {
        let sigma = self.model.tic_sigma_ps;
        self.draw(sigma)
    }
}

/// One timestamp-exchange result.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkSample {
    /// Scenario time, s.
    pub t_s: f64,
    /// Fiber temperature, °C.
    pub t_fiber_c: f64,
    /// Corrected round-trip time (fiber contribution), ps.
    pub crtt_ps: f64,
    /// True master→slave delay, ps.
    pub delay_ms_true_ps: f64,
    /// WR-estimated master→slave delay, ps.
    pub delay_ms_est_ps: f64,
    /// Measured master/slave 1PPS offset, ps.
    pub dt_ps: f64,
}

/// One-way delays over the optical path only (fiber + mux/demux excess),
/// excluding fixed hardware latencies: `(ms, sm)` in ps.
pub fn fiber_path_delays(fiber: &FiberSpec, plan: &WavelengthPlan, t_c: f64) -> Result<(f64, f64)> {
    let ms = fiber.absolute_one_way_delay(plan.lambda_ms_nm, t_c)? + plan.excess_ms_ps;
    let sm = fiber.absolute_one_way_delay(plan.lambda_sm_nm, t_c)? + plan.excess_sm_ps;
    Ok((ms, sm))
}

/// Full one-way delays including fixed hardware latencies: `(ms, sm)` in ps.
pub fn true_delays(
    fiber: &FiberSpec,
    plan: &WavelengthPlan,
    fixed: &FixedLatencies,
    t_c: f64,
) -> Result<(f64, f64)> {
    let (fp_ms, fp_sm) = fiber_path_delays(fiber, plan, t_c)?;
    Ok((
        fp_ms + fixed.tx_m_ps + fixed.rx_s_ps,
        fp_sm + fixed.tx_s_ps + fixed.rx_m_ps,
    ))
}

/// Computes alpha from the fiber-path delay ratio at `t_cal_c` and
/// freezes it, together with the fixed latencies and static offset, into
/// a [`LinkCalibration`]. With the returned calibration,
/// [`estimate_delay_ms`] reproduces the true master→slave delay exactly
/// at the calibration temperature.
pub fn calibrate_alpha(
    fiber: &FiberSpec,
    plan: &WavelengthPlan,
    fixed: FixedLatencies,
    static_offset_ps: f64,
    t_cal_c: f64,
) -> Result<LinkCalibration> {
    fixed.validate()?;
    let (fp_ms, fp_sm) = fiber_path_delays(fiber, plan, t_cal_c)?;
    if fp_ms <= 0.0 || fp_sm <= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "non-positive fiber-path delay at calibration ({fp_ms}, {fp_sm} ps)"
        )));
    }
    Ok(LinkCalibration {
        alpha: fp_ms / fp_sm - 1.0,
        t_cal_c,
        fixed,
        static_offset_ps,
    })
}

/// WR link-delay estimate: the master→slave share of the measured fiber
/// round trip, `((1+α)/(2+α))·cRTT`, plus the fixed forward latencies.
pub fn estimate_delay_ms(crtt_fiber_ps: f64, calib: &LinkCalibration) -> f64 {
    debug_assert!(crtt_fiber_ps > 0.0);
    calib.split_fraction() * crtt_fiber_ps + calib.fixed.tx_m_ps + calib.fixed.rx_s_ps
}

/// Performs one timestamp exchange at fiber temperature `t_fiber_c`.
pub fn sample_link(
    fiber: &FiberSpec,
    plan: &WavelengthPlan,
    calib: &LinkCalibration,
    noise: &mut NoiseGen,
    t_s: f64,
    t_fiber_c: f64,
) -> Result<LinkSample> {
    let (fp_ms, fp_sm) = fiber_path_delays(fiber, plan, t_fiber_c)?;
    let crtt = fp_ms + fp_sm + noise.crtt_noise_ps();
    let delay_ms_true = fp_ms + calib.fixed.tx_m_ps + calib.fixed.rx_s_ps;
    let delay_ms_est = estimate_delay_ms(crtt, calib);
    let dt = (delay_ms_est - delay_ms_true) + calib.static_offset_ps + noise.tic_noise_ps();
    Ok(LinkSample {
        t_s,
        t_fiber_c,
        crtt_ps: crtt,
        delay_ms_true_ps: delay_ms_true,
        delay_ms_est_ps: delay_ms_est,
        dt_ps: dt,
    })
}

/// Zero-noise Δt at `t_c` for a link calibrated at `t_cal_c`, with no
/// fixed latencies and no static offset. Helper shared by the fit.
fn noiseless_dt(fiber: &FiberSpec, plan: &WavelengthPlan, t_cal_c: f64, t_c: f64) -> Result<f64> {
    let calib = calibrate_alpha(fiber, plan, FixedLatencies::default(), 0.0, t_cal_c)?;
    let (fp_ms, fp_sm) = fiber_path_delays(fiber, plan, t_c)?;
    Ok(estimate_delay_ms(fp_ms + fp_sm, &calib) - fp_ms)
}

/// Zero-noise Δt change between the calibration temperature and `t_hot_c`
/// for a fiber whose zero-dispersion shift coefficient is `dlambda0_dt`.
pub fn drift_for_coefficient(
    fiber_base: &FiberSpec,
    plan: &WavelengthPlan,
    t_cal_c: f64,
    t_hot_c: f64,
    dlambda0_dt: f64,
) -> Result<f64> {
    let mut fiber = *fiber_base;
    fiber.dlambda0_dt = dlambda0_dt;
    Ok(noiseless_dt(&fiber, plan, t_cal_c, t_hot_c)?
        - noiseless_dt(&fiber, plan, t_cal_c, t_cal_c)?)
}

/// First-order closed-form drift magnitude for a coefficient `dlambda0_dt`:
/// `½·L·(S0/2)·λ0³·|1/λ_ms² − 1/λ_sm²|·ΔT·dλ0dT`, ps.
pub fn closed_form_drift_magnitude(
    fiber: &FiberSpec,
    plan: &WavelengthPlan,
    delta_t_k: f64,
    dlambda0_dt: f64,
) -> f64 {
    0.5 * fiber.length_km
        * (fiber.s0 / 2.0)
        * fiber.lambda0_nm.powi(3)
        * (1.0 / plan.lambda_ms_nm.powi(2) - 1.0 / plan.lambda_sm_nm.powi(2)).abs()
        * delta_t_k.abs()
        * dlambda0_dt
}

/// Search bracket for the zero-dispersion shift coefficient, nm/K.
const FIT_BRACKET: (f64, f64) = (-0.05, 0.15);
/// Drift match tolerance for the fit, ps.
const FIT_TOLERANCE_PS: f64 = 1e-3;

/// Solves for the zero-dispersion thermal shift coefficient that makes
/// the zero-noise Δt drift between `t_cal_c` and `t_hot_c` match
/// `target_drift_ps` in magnitude (bisection on the monotone drift map,
/// to within 1e-3 ps). The sign of the drift follows the plan's
/// wavelength orientation. `fiber_base.dlambda0_dt` is ignored.
pub fn fit_dlambda0(
    fiber_base: &FiberSpec,
    plan: &WavelengthPlan,
    t_cal_c: f64,
    t_hot_c: f64,
    target_drift_ps: f64,
) -> Result<f64> {
    if plan.is_wavelength_symmetric() {
        return Err(Error::NoAsymmetrySensitivity {
            lambda_nm: plan.lambda_ms_nm,
        });
    }
    if t_hot_c == t_cal_c {
        return Err(Error::InvalidConfig(
            "fit requires t_hot_c != t_cal_c".into(),
        ));
    }
    let (mut lo, mut hi) = FIT_BRACKET;
    let drift =
        |x: f64| -> Result<f64> { drift_for_coefficient(fiber_base, plan, t_cal_c, t_hot_c, x) };
    let d_lo = drift(lo)?;
    let d_hi = drift(hi)?;
    // orientation: which way the drift moves as the coefficient grows
    let sign = if d_hi > d_lo { 1.0 } else { -1.0 };
    let goal = sign * target_drift_ps.abs();
    if (goal - d_lo) * (goal - d_hi) > 0.0 {
        return Err(Error::FitTargetUnreachable {
            target_ps: target_drift_ps,
            lo,
            hi,
        });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let d_mid = drift(mid)?;
        if (d_mid - goal) * sign < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if (d_mid - goal).abs() <= FIT_TOLERANCE_PS && (hi - lo) < 1e-12 {
            break;
        }
    }
    let x = 0.5 * (lo + hi);
    debug_assert!((drift(x)?.abs() - target_drift_ps.abs()).abs() <= FIT_TOLERANCE_PS);
    Ok(x)
}
