// Static (l = 0) reflection coefficients for each class of material.

use casimir::lifshitz::zero_frequency_coefficients;
use casimir::models::{MaterialModel, OscillatorSet, Oscillator, PermeabilityModel};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let k = 0.01; // ħc k in eV
    let cases = [
        ("drude", MaterialModel::drude(9.0, 0.035)?),
        ("drude, mu = 110", MaterialModel::drude(4.89, 0.0436)?.with_permeability(PermeabilityModel::static_only(110.0))?),
        ("plasma", MaterialModel::plasma(9.0)?),
        ("dielectric", MaterialModel::generalized(OscillatorSet::new(0.0, vec![Oscillator::new(10.0, 0.5, 300.0)])?)?),
    ];
    for (name, m) in &cases {
        let r = zero_frequency_coefficients(m, k);
        println!("{name:>16}: r_TE = {:+.12}, r_TM = {:+.12}", r.te, r.tm);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
