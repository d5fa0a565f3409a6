//! Wavelength plans for BiDi WDM and DWDM transceivers, plus C-band
//! channel-grid arithmetic.
//!
//! Two grid conventions are supported because vendor datasheets and the
//! ITU 100 GHz grid disagree below the 0.1 nm level: `ItuFrequency`
//! anchors channels at 190.0 THz + ch·0.1 THz (the default), while
//! `VendorLinear` spaces them 0.8 nm apart from 1520.25 nm.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optics::{check_wavelength, SPEED_OF_LIGHT_KM_PER_S};

/// Speed of light as nm·THz (numerically equal to km/s).
const C_NM_THZ: f64 = SPEED_OF_LIGHT_KM_PER_S;

/// Frequency anchor for the 100 GHz ITU grid: channel ch sits at
/// 190.0 THz + ch·0.1 THz.
pub const ITU_ANCHOR_THZ: f64 = 190.0;
pub const ITU_STEP_THZ: f64 = 0.1;

/// Vendor-sheet linear grid: 1520.25 nm at channel 1, 0.8 nm per step.
pub const VENDOR_CH1_NM: f64 = 1520.25;
pub const VENDOR_STEP_NM: f64 = 0.8;

pub const CHANNEL_MIN: u32 = 1;
pub const CHANNEL_MAX: u32 = 72;

/// BiDi WDM wavelength pair, nm.
pub const BIDI_SHORT_NM: f64 = 1310.0;
pub const BIDI_LONG_NM: f64 = 1550.0;

/// How a DWDM channel index maps to a carrier wavelength.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridConvention {
    /// 100 GHz grid anchored at 190.0 THz; λ = c / (190.0 + 0.1·ch) THz.
    #[default]
    ItuFrequency,
    /// Affine vendor-sheet grid; λ = 1520.25 + 0.8·(ch − 1) nm.
    VendorLinear,
}

impl fmt::Display for GridConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GridConvention::ItuFrequency => write!(f, "itu-frequency"),
            GridConvention::VendorLinear => write!(f, "vendor-linear"),
        }
    }
}

/// Carrier wavelengths and fixed excess delays for one bidirectional link.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WavelengthPlan {
    /// Master→slave carrier wavelength, nm.
    pub lambda_ms_nm: f64,
    /// Slave→master carrier wavelength, nm.
    pub lambda_sm_nm: f64,
    /// Fixed extra one-way delay master→slave (mux/demux, pigtails), ps.
    pub excess_ms_ps: f64,
    /// Fixed extra one-way delay slave→master, ps.
    pub excess_sm_ps: f64,
    /// Plan name used in reports.
    pub label: String,
}

impl WavelengthPlan {
    /// Builds a plan from explicit wavelengths, validating the optics window.
    pub fn new(
        lambda_ms_nm: f64,
        lambda_sm_nm: f64,
        excess_ms_ps: f64,
        excess_sm_ps: f64,
        label: impl Into<String>,
    ) -> Result<Self> {
        check_wavelength(lambda_ms_nm)?;
        check_wavelength(lambda_sm_nm)?;
        if excess_ms_ps < 0.0 || excess_sm_ps < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "excess delays must be >= 0 ps (got {excess_ms_ps}, {excess_sm_ps})"
            )));
        }
        Ok(WavelengthPlan {
            lambda_ms_nm,
            lambda_sm_nm,
            excess_ms_ps,
            excess_sm_ps,
            label: label.into(),
        })
    }

    /// True when both directions use the same carrier wavelength.
    pub fn is_wavelength_symmetric(&self) -> bool {
        self.lambda_ms_nm == self.lambda_sm_nm
    }

    /// Same plan with master→slave and slave→master swapped.
    pub fn reversed(&self) -> Self {
        WavelengthPlan {
            lambda_ms_nm: self.lambda_sm_nm,
            lambda_sm_nm: self.lambda_ms_nm,
            excess_ms_ps: self.excess_sm_ps,
            excess_sm_ps: self.excess_ms_ps,
            label: self.label.clone(),
        }
    }
}

/// 1310/1550 nm BiDi WDM plan with zero excess delays.
///
/// `short_at_master` puts 1310 nm on the master transmitter, the
/// orientation whose offset drifts from positive to negative as the
/// fiber warms.
pub fn bidi_plan(short_at_master: bool) -> WavelengthPlan {
    let (ms, sm) = if short_at_master {
        (BIDI_SHORT_NM, BIDI_LONG_NM)
    } else {
        (BIDI_LONG_NM, BIDI_SHORT_NM)
    };
    WavelengthPlan {
        lambda_ms_nm: ms,
        lambda_sm_nm: sm,
        excess_ms_ps: 0.0,
        excess_sm_ps: 0.0,
        label: "BiDi WDM".to_string(),
    }
}

/// Carrier wavelength of C-band channel `ch` under `convention`, nm.
pub fn dwdm_channel_to_wavelength(ch: u32, convention: GridConvention) -> Result<f64> {
    if !(CHANNEL_MIN..=CHANNEL_MAX).contains(&ch) {
        return Err(Error::ChannelOutOfRange { ch });
    }
    Ok(match convention {
        GridConvention::ItuFrequency => C_NM_THZ / (ITU_ANCHOR_THZ + ITU_STEP_THZ * ch as f64),
        GridConvention::VendorLinear => VENDOR_CH1_NM + VENDOR_STEP_NM * (ch - 1) as f64,
    })
}

/// Channel frequency on the ITU grid, THz.
pub fn dwdm_channel_frequency_thz(ch: u32) -> Result<f64> {
    if !(CHANNEL_MIN..=CHANNEL_MAX).contains(&ch) {
        return Err(Error::ChannelOutOfRange { ch });
    }
    Ok(ITU_ANCHOR_THZ + ITU_STEP_THZ * ch as f64)
}

/// DWDM plan on two distinct channels with the given mux/demux excess delays.
pub fn dwdm_plan(
    ch_ms: u32,
    ch_sm: u32,
    convention: GridConvention,
    excess_ms_ps: f64,
    excess_sm_ps: f64,
) -> Result<WavelengthPlan> {
    if ch_ms == ch_sm {
        return Err(Error::InvalidConfig(format!(
            "DWDM channels must differ for bidirectional separation (both {ch_ms})"
        )));
    }
    let lambda_ms = dwdm_channel_to_wavelength(ch_ms, convention)?;
    let lambda_sm = dwdm_channel_to_wavelength(ch_sm, convention)?;
    let mut plan = WavelengthPlan::new(lambda_ms, lambda_sm, excess_ms_ps, excess_sm_ps, "DWDM")?;
    plan.label = format!("DWDM Ch{ch_ms}/Ch{ch_sm}");
    Ok(plan)
}

/// One row of the channel table the CLI prints.
#[derive(Debug, Clone, Copy)]
pub struct ChannelRow {
    pub channel: u32,
    pub frequency_thz: f64,
    pub itu_nm: f64,
    pub vendor_nm: f64,
}

/// Full 72-row channel↔wavelength table for both conventions.
pub fn channel_table() -> Vec<ChannelRow> {
    (CHANNEL_MIN..=CHANNEL_MAX)
        .map(|ch| ChannelRow {
            channel: ch,
            frequency_thz: dwdm_channel_frequency_thz(ch).expect("channel in range"),
            itu_nm: dwdm_channel_to_wavelength(ch, GridConvention::ItuFrequency)
                .expect("channel in range"),
            vendor_nm: dwdm_channel_to_wavelength(ch, GridConvention::VendorLinear)
                .expect("channel in range"),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn bidi_orientation_and_separation() {
        let p = bidi_plan(true);
        assert_eq!(p.lambda_ms_nm, 1310.0);
        assert_eq!(p.lambda_sm_nm, 1550.0);
        assert_eq!(p.excess_ms_ps, 0.0);
        assert_eq!(p.excess_sm_ps, 0.0);

        let q = bidi_plan(false);
        assert_eq!(q.lambda_ms_nm, 1550.0);
        assert_eq!(q.lambda_sm_nm, 1310.0);

        // Tx/Rx separation is 240 nm either way
        assert_eq!((p.lambda_ms_nm - p.lambda_sm_nm).abs(), 240.0);
        assert_eq!((q.lambda_ms_nm - q.lambda_sm_nm).abs(), 240.0);
    }

    #[test]
    fn vendor_grid_endpoints() {
        let ch1 = dwdm_channel_to_wavelength(1, GridConvention::VendorLinear).unwrap();
        let ch72 = dwdm_channel_to_wavelength(72, GridConvention::VendorLinear).unwrap();
        assert_eq!(ch1, 1520.25);
        assert_abs_diff_eq!(ch72, 1577.05, epsilon = 1e-9);
    }

    #[test]
    fn itu_grid_ch33_ch34() {
        let l33 = dwdm_channel_to_wavelength(33, GridConvention::ItuFrequency).unwrap();
        let l34 = dwdm_channel_to_wavelength(34, GridConvention::ItuFrequency).unwrap();
        assert_abs_diff_eq!(l33, 1550.918044490429, epsilon = 1e-9);
        assert_abs_diff_eq!(l34, 1550.116122026887, epsilon = 1e-9);
        assert_abs_diff_eq!(l33 - l34, 0.802, epsilon = 0.005);
    }

    #[test]
    fn channel_bounds() {
        assert!(matches!(
            dwdm_channel_to_wavelength(0, GridConvention::ItuFrequency),
            Err(Error::ChannelOutOfRange { ch: 0 })
        ));
        assert!(matches!(
            dwdm_channel_to_wavelength(73, GridConvention::VendorLinear),
            Err(Error::ChannelOutOfRange { ch: 73 })
        ));
    }

    #[test]
    fn dwdm_plan_separations() {
        let p = dwdm_plan(33, 34, GridConvention::ItuFrequency, 0.0, 0.0).unwrap();
        assert_abs_diff_eq!(p.lambda_ms_nm - p.lambda_sm_nm, 0.802, epsilon = 0.005);

        let q = dwdm_plan(1, 72, GridConvention::VendorLinear, 0.0, 0.0).unwrap();
        assert_abs_diff_eq!((q.lambda_ms_nm - q.lambda_sm_nm).abs(), 56.8, epsilon = 1e-9);
    }

    #[test]
    fn dwdm_plan_rejects_equal_channels() {
        assert!(matches!(
            dwdm_plan(33, 33, GridConvention::ItuFrequency, 0.0, 0.0),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn dwdm_plan_carries_excess_delays() {
        let p = dwdm_plan(33, 34, GridConvention::ItuFrequency, 500.0, 500.0).unwrap();
        assert_eq!(p.excess_ms_ps, 500.0);
        assert_eq!(p.excess_sm_ps, 500.0);
    }

    #[test]
    fn plan_rejects_negative_excess() {
        assert!(WavelengthPlan::new(1310.0, 1550.0, -1.0, 0.0, "x").is_err());
    }

    #[test]
    fn table_shape() {
        let t = channel_table();
        assert_eq!(t.len(), 72);
        assert_eq!(t[0].channel, 1);
        assert_eq!(t[71].channel, 72);
        assert_abs_diff_eq!(t[0].frequency_thz, 190.1, epsilon = 1e-12);
    }

    #[test]
    fn conventions_agree_on_spacing_near_1550() {
        // adjacent-channel spacing within 0.01 nm of 0.8 nm mid-band
        for ch in 25..=45 {
            let a = dwdm_channel_to_wavelength(ch, GridConvention::ItuFrequency).unwrap();
            let b = dwdm_channel_to_wavelength(ch + 1, GridConvention::ItuFrequency).unwrap();
            assert!(((a - b) - VENDOR_STEP_NM).abs() < 0.01, "ch {ch}: {}", a - b);
        }
    }

    proptest! {
        /// Vendor mapping is exactly affine in the channel index.
        #[test]
        fn vendor_mapping_affine(ch in 1u32..=70) {
            let a = dwdm_channel_to_wavelength(ch, GridConvention::VendorLinear).unwrap();
            let b = dwdm_channel_to_wavelength(ch + 1, GridConvention::VendorLinear).unwrap();
            let c = dwdm_channel_to_wavelength(ch + 2, GridConvention::VendorLinear).unwrap();
            prop_assert!((b - a - VENDOR_STEP_NM).abs() < 1e-9);
            prop_assert!(((c - b) - (b - a)).abs() < 1e-9);
        }

        /// ITU mapping is strictly decreasing in the channel index.
        #[test]
        fn itu_mapping_decreasing(ch in 1u32..=71) {
            let a = dwdm_channel_to_wavelength(ch, GridConvention::ItuFrequency).unwrap();
            let b = dwdm_channel_to_wavelength(ch + 1, GridConvention::ItuFrequency).unwrap();
            prop_assert!(b < a);
        }
    }
}
