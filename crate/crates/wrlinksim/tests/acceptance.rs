//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line per clause with the measured value and the bound it is held to.
//!
//! Two clauses are expected to stay red with the stock constants and are
//! kept at their stated tolerance anyway (see the fit/drift-law notes in
//! the README): the frozen-ratio delay split leaks a share of the
//! common-mode thermal delay change into Δt, which moves the fitted
//! zero-dispersion shift coefficient ≈4.5% away from the leak-free
//! first-order closed form.

use std::path::{Path, PathBuf};
use std::time::Instant;

use wrlinksim::channels::{bidi_plan, dwdm_channel_to_wavelength, GridConvention, WavelengthPlan};
use wrlinksim::config::load_config;
use wrlinksim::experiment::{
    compare_plans, detect_steady, run_scenario, summarize, ExperimentReport, Scenario,
};
use wrlinksim::optics::FiberSpec;
use wrlinksim::wrlink::{
    calibrate_alpha, closed_form_drift_magnitude, drift_for_coefficient, fit_dlambda0,
    sample_link, FixedLatencies, NoiseGen, NoiseModel,
};

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

/// Prints one pass/fail line and returns whether the clause held.
fn check(name: &str, ok: bool, detail: String) -> bool {
    let tag = if ok { "PASS" } else { "FAIL" };
    println!("[{tag}] {name}: {detail}");
    ok
}

fn bidi_report() -> (ExperimentReport, Scenario, f64) {
    let scenario = load_config(configs_dir().join("bidi.cfg")).expect("bidi.cfg loads");
    let started = Instant::now();
    let series = run_scenario(&scenario).expect("scenario runs");
    let steady = detect_steady(
        &series,
        scenario.steady.window_s,
        scenario.steady.slope_threshold_ps_per_s,
    )
    .expect("steady detection");
    let report = summarize(&series, &steady, scenario.steady.averaging_window_s)
        .expect("summary");
    let elapsed = started.elapsed().as_secs_f64();
    (report, scenario, elapsed)
}

#[test]
fn criterion_1_bidi_table_reproduction() {
    let (report, _, elapsed) = bidi_report();
    let mut ok = true;
    ok &= check(
        "criterion 1a (cold baseline)",
        (report.dt_cold_ps - 29.0).abs() < 1e-6,
        format!("dt_cold = {:.9} ps, bound 29.0 ± 1e-6", report.dt_cold_ps),
    );
    ok &= check(
        "criterion 1b (offset change)",
        (report.dt_delta_ps - 220.4).abs() <= 0.01 * 220.4,
        format!(
            "dt_delta = {:.3} ps, bound 220.4 ± 2.204 (1%)",
            report.dt_delta_ps
        ),
    );
    ok &= check(
        "criterion 1c (hot offset)",
        (report.dt_hot_ps - (-191.4)).abs() <= 2.5,
        format!("dt_hot = {:.3} ps, bound −191.4 ± 2.5", report.dt_hot_ps),
    );
    ok &= check(
        "criterion 1d (runtime)",
        elapsed < 1.0,
        format!("3 h scenario at 1 Hz simulated and summarized in {elapsed:.3} s, bound < 1 s"),
    );
    assert!(ok, "criterion 1 failed");
}

#[test]
fn criterion_2_fit_consistency() {
    let fiber = FiberSpec::default();
    let plan = bidi_plan(true);
    let target = 220.4;
    let fitted = fit_dlambda0(&fiber, &plan, -20.0, 40.0, target).expect("fit converges");

    // independent oracle: brute-force scan at 1e-5 nm/K resolution
    let mut best_x = 0.0;
    let mut best_err = f64::INFINITY;
    let mut x = 0.0;
    while x <= 0.03 + 1e-12 {
        let drift = drift_for_coefficient(&fiber, &plan, -20.0, 40.0, x).unwrap();
        let err = (drift.abs() - target).abs();
        if err < best_err {
            best_err = err;
            best_x = x;
        }
        x += 1e-5;
    }

    let closed_form = target / closed_form_drift_magnitude(&fiber, &plan, 60.0, 1.0);
    let rel_dev = (fitted - closed_form).abs() / closed_form;

    let mut ok = true;
    ok &= check(
        "criterion 2a (fit bracket)",
        (0.0200..=0.0225).contains(&fitted),
        format!("fitted dλ0/dT = {fitted:.6} nm/K, bound [0.0200, 0.0225]"),
    );
    ok &= check(
        "criterion 2b (scan oracle)",
        (fitted - best_x).abs() <= 1e-5,
        format!(
            "fit {fitted:.6} vs brute-force scan {best_x:.6} nm/K, bound |diff| ≤ 1e-5"
        ),
    );
    ok &= check(
        "criterion 2c (closed-form consistency)",
        rel_dev <= 0.01,
        format!(
            "fit {fitted:.6} vs first-order closed form {closed_form:.6} nm/K: {:.2}% deviation, bound 1% \
             (the frozen-ratio split leaks part of the common-mode delay rise into the drift)",
            100.0 * rel_dev
        ),
    );
    assert!(ok, "criterion 2 failed");
}

#[test]
fn criterion_3_dwdm_bound_and_ratio() {
    let (bidi, _, _) = bidi_report();
    let scenario = load_config(configs_dir().join("dwdm.cfg")).expect("dwdm.cfg loads");
    let series = run_scenario(&scenario).expect("scenario runs");
    let steady = detect_steady(
        &series,
        scenario.steady.window_s,
        scenario.steady.slope_threshold_ps_per_s,
    )
    .expect("steady detection");
    let dwdm = summarize(&series, &steady, scenario.steady.averaging_window_s).expect("summary");

    let ratio = compare_plans(&bidi, &dwdm).expect("ratio defined");
    let mut ok = true;
    ok &= check(
        "criterion 3a (DWDM fiber-only bound)",
        dwdm.dt_delta_ps <= 2.0,
        format!(
            "DWDM dt_delta = {:.3} ps, bound ≤ 2 ps (fiber dispersion alone; a measured \
             DWDM link drifts more through non-fiber effects)",
            dwdm.dt_delta_ps
        ),
    );
    ok &= check(
        "criterion 3b (plan ratio)",
        ratio >= 13.0,
        format!("BiDi/DWDM dt_delta ratio = {ratio:.1}, bound ≥ 13"),
    );
    ok &= check(
        "criterion 3c (DWDM cold baseline)",
        (dwdm.dt_cold_ps - 24.9).abs() < 1e-6,
        format!("DWDM dt_cold = {:.9} ps, bound 24.9 ± 1e-6", dwdm.dt_cold_ps),
    );
    assert!(ok, "criterion 3 failed");
}

#[test]
fn criterion_4_stabilization_timing() {
    let scenario = load_config(configs_dir().join("bidi.cfg")).expect("bidi.cfg loads");
    assert_eq!(scenario.thermal.tau_thermal_s, 1200.0);
    assert_eq!(scenario.steady.window_s, 600.0);
    assert_eq!(scenario.steady.slope_threshold_ps_per_s, 0.5);
    let series = run_scenario(&scenario).expect("scenario runs");
    let steady = detect_steady(&series, 600.0, 0.5).expect("steady detection");
    let heat_start = series.heat_start_s.expect("profile heats up");
    let hot_onset_min = steady
        .last()
        .map(|iv| (iv.start_s - heat_start) / 60.0)
        .unwrap_or(f64::NAN);
    let ok = check(
        "criterion 4 (hot steady onset)",
        steady.len() == 2 && (80.0..=105.0).contains(&hot_onset_min),
        format!(
            "hot steady interval begins {hot_onset_min:.1} min after the setpoint change, \
             bound [80, 105] min (~90 min stabilization)"
        ),
    );
    assert!(ok, "criterion 4 failed");
}

#[test]
fn criterion_5_physics_oracle_suite() {
    let mut ok = true;

    // 5a: D(λ0(T), T) = 0 across the temperature range
    let mut fiber = FiberSpec::default();
    fiber.dlambda0_dt = 0.0213;
    let mut worst = 0.0f64;
    for i in 0..=29 {
        let t = -60.0 + i as f64 * 5.0;
        let l0 = fiber.lambda0_at(t).unwrap();
        worst = worst.max(fiber.dispersion(l0, t).unwrap().abs());
    }
    ok &= check(
        "criterion 5a (zero-dispersion root)",
        worst < 1e-9,
        format!("max |D(λ0(T),T)| = {worst:.2e} ps/(nm·km), bound < 1e-9"),
    );

    // 5b: finite-difference derivative of τ_rel matches D at 3 wavelengths
    let per_km = FiberSpec {
        length_km: 1.0,
        dlambda0_dt: 0.0,
        alpha_l: 0.0,
        dn_dt: 0.0,
        ..FiberSpec::default()
    };
    let h = 0.01;
    let mut worst_rel = 0.0f64;
    for lambda in [1310.0, 1490.0, 1550.0] {
        let fd = (per_km.relative_group_delay(lambda + h, 20.0).unwrap()
            - per_km.relative_group_delay(lambda - h, 20.0).unwrap())
            / (2.0 * h);
        let d = per_km.dispersion(lambda, 20.0).unwrap();
        worst_rel = worst_rel.max((fd - d).abs() / d.abs().max(1.0));
    }
    ok &= check(
        "criterion 5b (group-delay derivative)",
        worst_rel < 1e-6,
        format!("max relative FD-vs-D deviation = {worst_rel:.2e}, bound < 1e-6"),
    );

    // 5c: asymmetry antisymmetry is exact
    let mut exact = true;
    for (a, b) in [(1310.0, 1550.0), (1545.32, 1546.12), (1490.0, 1611.0)] {
        for t in [-20.0, 20.0, 40.0] {
            let ab = fiber.asymmetry_delta(a, b, t).unwrap();
            let ba = fiber.asymmetry_delta(b, a, t).unwrap();
            exact &= ab == -ba;
        }
    }
    ok &= check(
        "criterion 5c (antisymmetry)",
        exact,
        "δ(a,b,T) == −δ(b,a,T) bit-exact over 9 cases".to_string(),
    );

    // 5d: wavelength-symmetric plans hold Δt flat over any trajectory
    let sym = WavelengthPlan::new(1550.0, 1550.0, 250.0, 250.0, "sym").unwrap();
    let calib =
        calibrate_alpha(&FiberSpec::default(), &sym, FixedLatencies::default(), 29.0, -20.0)
            .unwrap();
    let mut noise = NoiseGen::new(NoiseModel::zero());
    let mut max_dev = 0.0f64;
    for i in 0..=60 {
        let t = -20.0 + i as f64;
        let s = sample_link(&FiberSpec::default(), &sym, &calib, &mut noise, i as f64, t).unwrap();
        max_dev = max_dev.max((s.dt_ps - 29.0).abs());
    }
    ok &= check(
        "criterion 5d (zero-asymmetry neutrality)",
        max_dev == 0.0,
        format!("max |Δt − offset| over a −20→40 °C sweep = {max_dev:.2e} ps, bound 0"),
    );

    // 5e: first-order drift law Δdt = −½·Δδ within 1% up to ΔT = 60 K
    let plan = bidi_plan(true);
    let dfiber = FiberSpec::default();
    let t_cal = -20.0;
    let mut worst_law = 0.0f64;
    let mut detail = String::new();
    for delta_t in [10.0, 30.0, 60.0] {
        let t_hot = t_cal + delta_t;
        let drift =
            drift_for_coefficient(&dfiber, &plan, t_cal, t_hot, dfiber.dlambda0_dt).unwrap();
        let delta_hot = dfiber
            .asymmetry_delta(plan.lambda_ms_nm, plan.lambda_sm_nm, t_hot)
            .unwrap();
        let delta_cal = dfiber
            .asymmetry_delta(plan.lambda_ms_nm, plan.lambda_sm_nm, t_cal)
            .unwrap();
        let law = -0.5 * (delta_hot - delta_cal);
        let rel = (drift - law).abs() / law.abs();
        worst_law = worst_law.max(rel);
        detail.push_str(&format!(
            "ΔT={delta_t}: Δdt={drift:.3} vs −½Δδ={law:.3} ps ({:.2}%); ",
            100.0 * rel
        ));
    }
    ok &= check(
        "criterion 5e (first-order drift law)",
        worst_law <= 0.01,
        format!(
            "{detail}bound 1% \
             (the α-ratio split leaks (k−½)·ΔcRTT ≈ 5% of the dispersion drift)"
        ),
    );

    assert!(ok, "criterion 5 failed");
}

#[test]
fn criterion_6_simulate_determinism() {
    let bin = env!("CARGO_BIN_EXE_wrlinksim");
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs_dir().join("bidi_noisy.cfg");

    let run = |tag: &str| -> (Vec<u8>, Vec<u8>) {
        let series = dir.path().join(format!("{tag}_series.csv"));
        let report = dir.path().join(format!("{tag}_report.csv"));
        let status = std::process::Command::new(bin)
            .arg("simulate")
            .arg(&cfg)
            .arg("--series")
            .arg(&series)
            .arg("--report")
            .arg(&report)
            .status()
            .expect("simulate runs");
        assert!(status.success(), "simulate exited with {status}");
        (
            std::fs::read(&series).unwrap(),
            std::fs::read(&report).unwrap(),
        )
    };

    let (series_a, report_a) = run("a");
    let (series_b, report_b) = run("b");
    let mut ok = true;
    ok &= check(
        "criterion 6a (series determinism)",
        series_a == series_b,
        format!(
            "two simulate runs on the same config/seed: series CSV byte-identical ({} bytes)",
            series_a.len()
        ),
    );
    ok &= check(
        "criterion 6b (report determinism)",
        report_a == report_b,
        format!(
            "two simulate runs on the same config/seed: report CSV byte-identical ({} bytes)",
            report_a.len()
        ),
    );
    assert!(ok, "criterion 6 failed");
}

#[test]
fn criterion_7_grid_checks() {
    let vendor_ch1 = dwdm_channel_to_wavelength(1, GridConvention::VendorLinear).unwrap();
    let itu_33 = dwdm_channel_to_wavelength(33, GridConvention::ItuFrequency).unwrap();
    let itu_34 = dwdm_channel_to_wavelength(34, GridConvention::ItuFrequency).unwrap();
    let sep = itu_33 - itu_34;
    let mut ok = true;
    ok &= check(
        "criterion 7a (vendor anchor)",
        vendor_ch1 == 1520.25,
        format!("vendor-linear channel 1 = {vendor_ch1} nm, bound exactly 1520.25"),
    );
    ok &= check(
        "criterion 7b (ITU adjacent separation)",
        (sep - 0.802).abs() <= 0.005,
        format!("ITU Ch33−Ch34 separation = {sep:.4} nm, bound 0.802 ± 0.005"),
    );
    assert!(ok, "criterion 7 failed");
}
