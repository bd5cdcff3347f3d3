// Fit Lorentz oscillators to optical data above 2 eV, with and without noise,
// and check the fitted model against the dispersion relation.

use casimir::dispersion::{kk_residual_report, FrequencyGrid, Relation, ReportOptions};
use casimir::models::{Dielectric, Oscillator, OscillatorSet};
use casimir::optics::{fit_oscillators, synthetic_table, with_noise, FitOptions};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let truth = OscillatorSet::new(
        9.0,
        vec![Oscillator::new(3.0, 0.8, 5.0), Oscillator::new(8.0, 2.0, 40.0), Oscillator::new(20.0, 5.0, 150.0)],
    )?;
    let omegas: Vec<f64> = (0..300).map(|i| 0.5 * 120f64.powf(i as f64 / 299.0)).collect();
    let clean = synthetic_table(&Dielectric::Generalized(truth), &omegas, "synthetic")?;
    let opts = FitOptions { oscillators: 3, ..FitOptions::default() };

    let fit = fit_oscillators(&clean, &opts)?;
    println!("clean: {:?} after {} iterations, residual {:.2e}", fit.status, fit.iterations, fit.residual_norm);
    for p in &fit.parameters {
        println!("  {:<13} {:>12.6} ± {:.1e}", p.name, p.value, p.std_err);
    }
    let grid = FrequencyGrid::log_spaced(0.01, 100.0, 32)?;
    let kk = kk_residual_report(&Dielectric::Generalized(fit.oscillators.clone()), &grid, Relation::Generalized, &ReportOptions::default())?;
    println!("  dispersion residual of the fitted model: {:.2e}", kk.max_rel_residual);

    let noisy = with_noise(&clean, 0.01, 42)?;
    let fit = fit_oscillators(&noisy, &opts)?;
    println!("1% noise: residual {:.3e}", fit.residual_norm);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
