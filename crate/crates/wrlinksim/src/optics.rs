//! Temperature-dependent chromatic dispersion and group delay of a
//! G.652.D single-mode fiber.
//!
//! The dispersion model is the standard datasheet approximation
//! `D(λ) = (S0/4)·(λ − λ0⁴/λ³)` with the zero-dispersion wavelength
//! shifting linearly with temperature, `λ0(T) = λ0 + (dλ0/dT)·(T − T_ref)`.
//! Its antiderivative gives the relative group delay per wavelength,
//! which is what makes a two-wavelength link asymmetric.
//!
//! Units are fixed throughout: nm, ps, km, °C. Conversions happen at
//! module boundaries, never inside formulas.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speed of light in km/s.
pub const SPEED_OF_LIGHT_KM_PER_S: f64 = 299_792.458;

/// Dispersion model validity window, nm. Outside it the model errors
/// rather than extrapolates.
pub const LAMBDA_MIN_NM: f64 = 1260.0;
pub const LAMBDA_MAX_NM: f64 = 1625.0;

/// Temperature range the thermal coefficients are trusted over, °C.
pub const TEMP_MIN_C: f64 = -60.0;
pub const TEMP_MAX_C: f64 = 85.0;

/// G.652.D zero-dispersion wavelength conformance band, nm.
pub const G652D_LAMBDA0_MIN_NM: f64 = 1300.0;
pub const G652D_LAMBDA0_MAX_NM: f64 = 1324.0;

/// G.652.D maximum dispersion slope at λ0, ps/(nm²·km).
pub const G652D_S0_MAX: f64 = 0.092;

/// Default zero-dispersion thermal shift, nm/K, fitted so that the
/// default BiDi scenario drifts by 220.4 ps over a −20 → 40 °C swing
/// (see [`crate::wrlink::fit_dlambda0`]). Literature values for G.652
/// fiber run 0.02–0.03 nm/K.
pub const FITTED_DLAMBDA0_DT_NM_PER_K: f64 = 0.0203732;

/// Physical description of one fiber span.
///
/// `lambda0_nm`, `s0`, `ng_ref` and `length_km` are taken at the
/// reference temperature `t_ref_c`; the thermal coefficients move the
/// model away from that point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiberSpec {
    /// Fiber length at reference temperature, km.
    pub length_km: f64,
    /// Zero-dispersion wavelength at reference temperature, nm.
    pub lambda0_nm: f64,
    /// Dispersion slope at λ0, ps/(nm²·km).
    pub s0: f64,
    /// Thermal shift of the zero-dispersion wavelength, nm/K.
    pub dlambda0_dt: f64,
    /// Linear thermal-expansion coefficient of effective optical length, 1/K.
    pub alpha_l: f64,
    /// Group index at reference wavelength and temperature.
    pub ng_ref: f64,
    /// Thermo-optic coefficient applied to the group index, 1/K.
    pub dn_dt: f64,
    /// Reference temperature, °C.
    pub t_ref_c: f64,
}

impl Default for FiberSpec {
    /// 20 km of G.652.D with literature-typical thermal coefficients.
    fn default() -> Self {
        FiberSpec {
            length_km: 20.0,
            lambda0_nm: 1310.0,
            s0: G652D_S0_MAX,
            dlambda0_dt: FITTED_DLAMBDA0_DT_NM_PER_K,
            alpha_l: 5.6e-7,
            ng_ref: 1.468,
            dn_dt: 1.06e-5,
            t_ref_c: 20.0,
        }
    }
}

impl FiberSpec {
    /// Validates the G.652.D conformance bounds and returns the spec.
    pub fn new(
        length_km: f64,
        lambda0_nm: f64,
        s0: f64,
        dlambda0_dt: f64,
        alpha_l: f64,
        ng_ref: f64,
        dn_dt: f64,
        t_ref_c: f64,
    ) -> Result<Self> {
        let spec = FiberSpec {
            length_km,
            lambda0_nm,
            s0,
            dlambda0_dt,
            alpha_l,
            ng_ref,
            dn_dt,
            t_ref_c,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Checks every field invariant; used by constructors and config loading.
    pub fn validate(&self) -> Result<()> {
        if !(self.length_km > 0.0) || !self.length_km.is_finite() {
            return Err(Error::InvalidFiber(format!(
                "length_km = {} must be positive",
                self.length_km
            )));
        }
        if !(G652D_LAMBDA0_MIN_NM..=G652D_LAMBDA0_MAX_NM).contains(&self.lambda0_nm) {
            return Err(Error::InvalidFiber(format!(
                "lambda0_nm = {} outside G.652.D band [{}, {}] nm",
                self.lambda0_nm, G652D_LAMBDA0_MIN_NM, G652D_LAMBDA0_MAX_NM
            )));
        }
        if !(self.s0 > 0.0 && self.s0 <= G652D_S0_MAX) {
            return Err(Error::InvalidFiber(format!(
                "s0 = {} must be in (0, {}] ps/(nm²·km)",
                self.s0, G652D_S0_MAX
            )));
        }
        if !(self.ng_ref > 1.0 && self.ng_ref < 2.0) {
            return Err(Error::InvalidFiber(format!(
                "ng_ref = {} must be in (1.0, 2.0)",
                self.ng_ref
            )));
        }
        for (name, v) in [
            ("dlambda0_dt", self.dlambda0_dt),
            ("alpha_l", self.alpha_l),
            ("dn_dt", self.dn_dt),
            ("t_ref_c", self.t_ref_c),
        ] {
            if !v.is_finite() {
                return Err(Error::InvalidFiber(format!("{name} = {v} is not finite")));
            }
        }
        Ok(())
    }

    /// Zero-dispersion wavelength at fiber temperature `t_c`, nm.
    pub fn lambda0_at(&self, t_c: f64) -> Result<f64> {
        check_temperature(t_c)?;
        Ok(self.lambda0_nm + self.dlambda0_dt * (t_c - self.t_ref_c))
    }

    /// Effective optical length at `t_c`, km.
    pub fn length_at(&self, t_c: f64) -> Result<f64> {
        check_temperature(t_c)?;
        Ok(self.length_km * (1.0 + self.alpha_l * (t_c - self.t_ref_c)))
    }

    /// Chromatic dispersion at `lambda_nm` and fiber temperature `t_c`,
    /// ps/(nm·km). Zero at λ0(T), strictly increasing in λ over the
    /// validity window.
    pub fn dispersion(&self, lambda_nm: f64, t_c: f64) -> Result<f64> {
        check_wavelength(lambda_nm)?;
        let l0 = self.lambda0_at(t_c)?;
        Ok((self.s0 / 4.0) * (lambda_nm - l0.powi(4) / lambda_nm.powi(3)))
    }

    /// Wavelength-dependent part of the one-way group delay, ps.
    ///
    /// Antiderivative of `dispersion` times the temperature-expanded
    /// length: `L(T)·(S0/8)·(λ² + λ0(T)⁴/λ²)`. Defined up to a
    /// wavelength-independent constant, so only differences between two
    /// wavelengths carry meaning; the minimum sits at λ0(T).
    pub fn relative_group_delay(&self, lambda_nm: f64, t_c: f64) -> Result<f64> {
        check_wavelength(lambda_nm)?;
        let l0 = self.lambda0_at(t_c)?;
        let l_km = self.length_at(t_c)?;
        Ok(l_km * (self.s0 / 8.0) * (lambda_nm.powi(2) + l0.powi(4) / lambda_nm.powi(2)))
    }

    /// Full one-way propagation delay at `lambda_nm` and `t_c`, ps:
    /// thermo-optic base term plus the relative group delay.
    pub fn absolute_one_way_delay(&self, lambda_nm: f64, t_c: f64) -> Result<f64> {
        let l_km = self.length_at(t_c)?;
        let ng = self.ng_ref + self.dn_dt * (t_c - self.t_ref_c);
        let base_ps = l_km * ng * (1e12 / SPEED_OF_LIGHT_KM_PER_S);
        Ok(base_ps + self.relative_group_delay(lambda_nm, t_c)?)
    }

    /// Propagation-delay difference between the two directions of a
    /// two-wavelength link, ps: `τ_rel(λ_ms) − τ_rel(λ_sm)`.
    /// Antisymmetric under swapping the directions.
    pub fn asymmetry_delta(&self, lambda_ms_nm: f64, lambda_sm_nm: f64, t_c: f64) -> Result<f64> {
        Ok(self.relative_group_delay(lambda_ms_nm, t_c)?
            - self.relative_group_delay(lambda_sm_nm, t_c)?)
    }
}

/// Rejects wavelengths outside the model validity window.
pub fn check_wavelength(lambda_nm: f64) -> Result<()> {
    if !(LAMBDA_MIN_NM..=LAMBDA_MAX_NM).contains(&lambda_nm) {
        return Err(Error::WavelengthOutOfRange {
            lambda_nm,
            min_nm: LAMBDA_MIN_NM,
            max_nm: LAMBDA_MAX_NM,
        });
    }
    Ok(())
}

/// Rejects temperatures outside the trusted coefficient range.
pub fn check_temperature(t_c: f64) -> Result<()> {
    if !(TEMP_MIN_C..=TEMP_MAX_C).contains(&t_c) {
        return Err(Error::TemperatureOutOfRange {
            t_c,
            min_c: TEMP_MIN_C,
            max_c: TEMP_MAX_C,
        });
    }
    Ok(())
}
