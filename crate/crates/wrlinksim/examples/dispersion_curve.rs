//! Chromatic dispersion and relative group delay across the band,
//! at three fiber temperatures.
//!
//! ```bash
//! cargo run --example dispersion_curve
//! ```

use wrlinksim::FiberSpec;

fn main() -> wrlinksim::Result<()> {
    let fiber = FiberSpec::default();

    println!("fiber: {} km G.652.D, S0 = {} ps/(nm²·km)", fiber.length_km, fiber.s0);
    for t in [-20.0, 20.0, 40.0] {
        println!(
            "λ0({t:>5} °C) = {:.3} nm",
            fiber.lambda0_at(t)?
        );
    }

    println!("\nlambda_nm, D_m20_ps_nm_km, D_20_ps_nm_km, D_40_ps_nm_km");
    let mut lambda = 1280.0;
    while lambda <= 1620.0 {
        let d: Vec<String> = [-20.0, 20.0, 40.0]
            .iter()
            .map(|&t| format!("{:+.4}", fiber.dispersion(lambda, t).unwrap()))
            .collect();
        println!("{lambda:.0}, {}", d.join(", "));
        lambda += 20.0;
    }

    // the group-delay difference that makes a 1310/1550 link asymmetric
    let delta = fiber.asymmetry_delta(1310.0, 1550.0, 20.0)?;
    println!("\nτ(1310) − τ(1550) over {} km at 20 °C: {delta:.1} ps", fiber.length_km);
    let per_kelvin = (fiber.asymmetry_delta(1310.0, 1550.0, 21.0)? - delta).abs();
    println!("asymmetry changes by {per_kelvin:.2} ps per kelvin of fiber temperature");
    Ok(())
}
