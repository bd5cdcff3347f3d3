// Load an n/k table and build ε(iξ) with an explicit choice of what happens
// below the first tabulated frequency.

use std::fmt::Write as _;

use casimir::dispersion::KkOptions;
use casimir::models::{chi_drude_imag_axis, chi_drude_real_axis, DrudeParams, PlasmaParams};
use casimir::optics::{eps_imag_axis_from_data, load_nk_table, nk_from_eps, Extrapolation, TableFormat};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let drude = DrudeParams::new(9.0, 0.035)?;
    let mut text = String::from("# omega_eV, n, k\n");
    for i in 0..600 {
        let w = 0.05 * 1e4f64.powf(i as f64 / 599.0);
        let (n, k) = nk_from_eps(1.0 + chi_drude_real_axis(&drude, w)?);
        writeln!(text, "{w:.12e}, {n:.12e}, {k:.12e}")?;
    }
    let table = load_nk_table(text.as_bytes(), TableFormat::ThreeColumn, "drude table")?;
    println!("{} rows spanning {:.1} decades", table.rows().len(), table.decades());

    let opts = KkOptions::default();
    for xi in [0.1, 1.0, 10.0] {
        let d = eps_imag_axis_from_data(&table, xi, &Extrapolation::DrudeBelowCutoff(drude), &opts)?;
        let p = eps_imag_axis_from_data(&table, xi, &Extrapolation::PlasmaBelowCutoff(PlasmaParams::new(9.0)?), &opts)?;
        let exact = 1.0 + chi_drude_imag_axis(&drude, xi)?;
        println!("ξ = {xi:5}: drude below {d:.6e} (exact {exact:.6e}), plasma below {p:.6e}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
