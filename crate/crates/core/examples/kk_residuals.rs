// Dispersion relations checked against closed forms on the imaginary axis,
// and the refusal to apply the standard relation to a plasma-like model.

use casimir::dispersion::{kk_real_axis_report, kk_residual_report, FrequencyGrid, Quantity, Relation, ReportOptions};
use casimir::models::{Dielectric, DrudeParams, Oscillator, OscillatorSet, PlasmaParams};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let grid = FrequencyGrid::log_spaced(0.01, 100.0, 32)?;
    let opts = ReportOptions::default();

    let drude = Dielectric::Drude(DrudeParams::new(9.0, 0.035)?);
    let r = kk_residual_report(&drude, &grid, Relation::Standard, &opts)?;
    println!("drude, standard:       max rel residual {:.2e}", r.max_rel_residual);

    let plasma = Dielectric::Plasma(PlasmaParams::new(9.0)?);
    match kk_residual_report(&plasma, &grid, Relation::Standard, &opts) {
        Err(e) => println!("plasma, standard:      {e}"),
        Ok(_) => unreachable!(),
    }
    let r = kk_residual_report(&plasma, &grid, Relation::Generalized, &opts)?;
    println!("plasma, generalized:   max abs residual {:.2e}", r.max_abs_residual);

    let set = OscillatorSet::new(
        9.0,
        vec![Oscillator::new(3.0, 0.8, 5.0), Oscillator::new(8.0, 2.0, 40.0), Oscillator::new(20.0, 5.0, 150.0)],
    )?;
    let r = kk_residual_report(&Dielectric::Generalized(set.clone()), &grid, Relation::Generalized, &opts)?;
    println!("3 oscillators:         max rel residual {:.2e}", r.max_rel_residual);
    for q in [Quantity::RealPart, Quantity::ImagPart] {
        let r = kk_real_axis_report(&set, &grid, q, &opts);
        println!("  real axis {q:?}: max rel residual {:.2e}", r.max_rel_residual);
    }
    print!("{}", r.to_csv().lines().take(4).collect::<Vec<_>>().join("\n"));
    println!();
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
