//! Command-line front end; all logic lives in the library.
//!
//! Exit codes: 0 success, 2 configuration error, 3 physics-validity
//! error, 1 anything else.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use wrlinksim::channels::channel_table;
use wrlinksim::config::load_config;
use wrlinksim::error::Result;
use wrlinksim::experiment::{compare_plans, detect_steady, run_scenario, summarize};
use wrlinksim::plot::emit_plot_svg;
use wrlinksim::report::{
    format_fixed3, read_report_csv, report_to_csv, write_report_csv, write_series_csv,
};
use wrlinksim::wrlink::{closed_form_drift_magnitude, fit_dlambda0};

#[derive(Parser)]
#[command(
    name = "wrlinksim",
    version,
    about = "White Rabbit link-offset simulator for temperature-cycled fiber"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write the sample series and report as CSV.
    Simulate {
        /// Scenario configuration file (TOML; empty file = defaults).
        config: PathBuf,
        /// Series CSV path (default: <label>_series.csv).
        #[arg(long)]
        series: Option<PathBuf>,
        /// Report CSV path (default: <label>_report.csv).
        #[arg(long)]
        report: Option<PathBuf>,
        /// Also render the two-panel SVG plot to this path.
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Directory the default file names are placed in.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Run a scenario and print the report CSV to stdout.
    Report {
        /// Scenario configuration file (TOML).
        config: PathBuf,
    },
    /// Fit the zero-dispersion thermal shift coefficient to a target
    /// offset drift between the calibration temperature and the
    /// profile's final setpoint.
    Fit {
        /// Scenario configuration file (TOML).
        config: PathBuf,
        /// Target |Δt| change, ps.
        #[arg(long = "target-ps")]
        target_ps: f64,
    },
    /// Print the 72-row DWDM channel table (CSV, both grid conventions).
    Channels,
    /// Print the ratio of two reports' dt_delta magnitudes (a / b).
    Compare {
        report_a: PathBuf,
        report_b: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Simulate {
            config,
            series,
            report,
            svg,
            out_dir,
        } => {
            let scenario = load_config(&config)?;
            let run = run_scenario(&scenario)?;
            let steady = detect_steady(
                &run,
                scenario.steady.window_s,
                scenario.steady.slope_threshold_ps_per_s,
            )?;
            let summary = summarize(&run, &steady, scenario.steady.averaging_window_s)?;
            let slug = run.label.to_lowercase().replace([' ', '/'], "_");
            let series_path = series.unwrap_or_else(|| out_dir.join(format!("{slug}_series.csv")));
            let report_path = report.unwrap_or_else(|| out_dir.join(format!("{slug}_report.csv")));
            write_series_csv(&run, &series_path)?;
            write_report_csv(&summary, &report_path)?;
            if let Some(svg_path) = svg {
                emit_plot_svg(&run, &svg_path)?;
                println!("svg:    {}", svg_path.display());
            }
            println!("series: {}", series_path.display());
            println!("report: {}", report_path.display());
            print!("{}", report_to_csv(&summary));
            Ok(())
        }
        Command::Report { config } => {
            let scenario = load_config(&config)?;
            let run = run_scenario(&scenario)?;
            let steady = detect_steady(
                &run,
                scenario.steady.window_s,
                scenario.steady.slope_threshold_ps_per_s,
            )?;
            let summary = summarize(&run, &steady, scenario.steady.averaging_window_s)?;
            print!("{}", report_to_csv(&summary));
            Ok(())
        }
        Command::Fit { config, target_ps } => {
            let scenario = load_config(&config)?;
            let t_cal = scenario.calibration.t_cal_c;
            let t_hot = scenario.profile.final_setpoint_c();
            let fitted = fit_dlambda0(&scenario.fiber, &scenario.plan, t_cal, t_hot, target_ps)?;
            let closed_form = target_ps.abs()
                / closed_form_drift_magnitude(&scenario.fiber, &scenario.plan, t_hot - t_cal, 1.0);
            println!("dlambda0_dt_nm_per_k = {fitted:.9}");
            println!("closed_form_nm_per_k = {closed_form:.9}");
            Ok(())
        }
        Command::Channels => {
            println!("channel,frequency_thz,itu_frequency_nm,vendor_linear_nm");
            for row in channel_table() {
                println!(
                    "{},{:.1},{},{}",
                    row.channel,
                    row.frequency_thz,
                    format_fixed3(row.itu_nm),
                    format_fixed3(row.vendor_nm)
                );
            }
            Ok(())
        }
        Command::Compare { report_a, report_b } => {
            let a = read_report_csv(&report_a)?;
            let b = read_report_csv(&report_b)?;
            let ratio = compare_plans(&a, &b)?;
            println!("{}", format_fixed3(ratio));
            Ok(())
        }
    }
}
