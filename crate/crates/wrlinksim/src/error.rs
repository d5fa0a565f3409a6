//! Error type shared across the crate.
//!
//! Errors fall into three families that the CLI maps onto exit codes:
//! configuration problems (exit 2), physics model-validity violations
//! (exit 3), and everything else (exit 1).

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Wavelength outside the dispersion model's validity window.
    #[error("wavelength {lambda_nm} nm outside model validity window [{min_nm}, {max_nm}] nm")]
    WavelengthOutOfRange {
        lambda_nm: f64,
        min_nm: f64,
        max_nm: f64,
    },

    /// Temperature outside the range the thermal coefficients were fitted for.
    #[error("temperature {t_c} °C outside model validity range [{min_c}, {max_c}] °C")]
    TemperatureOutOfRange { t_c: f64, min_c: f64, max_c: f64 },

    /// A fiber parameter violates its physical bounds.
    #[error("invalid fiber spec: {0}")]
    InvalidFiber(String),

    /// DWDM channel index outside the C-band grid.
    #[error("DWDM channel {ch} outside grid range 1..=72")]
    ChannelOutOfRange { ch: u32 },

    /// Scenario/plan configuration is inconsistent.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// Config file failed to parse.
    #[error("config parse error: {0}")]
    ConfigParse(String),

    /// A wavelength plan with no bidirectional separation cannot be fitted.
    #[error("plan is wavelength-symmetric ({lambda_nm} nm both ways): offset drift is insensitive to the zero-dispersion shift")]
    NoAsymmetrySensitivity { lambda_nm: f64 },

    /// The fit target lies outside the searchable coefficient bracket.
    #[error("fit target {target_ps} ps not reachable within dlambda0_dt bracket [{lo}, {hi}] nm/K")]
    FitTargetUnreachable { target_ps: f64, lo: f64, hi: f64 },

    /// A steady phase required by the report is absent from the series.
    #[error("no steady {phase} interval detected; cannot summarize that phase")]
    MissingSteadyPhase { phase: &'static str },

    /// compare with a zero-drift denominator.
    #[error("undefined ratio: denominator report has dt_delta_ps = 0")]
    UndefinedRatio,

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code the CLI uses for this error family.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidConfig(_)
            | Error::ConfigParse(_)
            | Error::ChannelOutOfRange { .. }
            | Error::NoAsymmetrySensitivity { .. }
            | Error::FitTargetUnreachable { .. } => 2,
            Error::WavelengthOutOfRange { .. }
            | Error::TemperatureOutOfRange { .. }
            | Error::InvalidFiber(_) => 3,
            Error::MissingSteadyPhase { .. } | Error::UndefinedRatio | Error::Io(_) => 1,
        }
    }
}
