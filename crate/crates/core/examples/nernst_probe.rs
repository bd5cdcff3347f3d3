// Casimir entropy at low temperature: the plasma model's entropy vanishes,
// the Drude model's does not.

use casimir::lifshitz::{LifshitzOptions, MirrorPair};
use casimir::models::{MaterialModel, PermeabilityModel};
use casimir::thermo::{entropy, nernst_probe, NernstOptions, NernstVerdict, DEFAULT_LADDER};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let opts = LifshitzOptions::default();
    let s = entropy(&MirrorPair::symmetric(MaterialModel::plasma(9.0)?, 1000.0), 300.0, 0.1, &opts)?;
    println!("plasma, 300 K: S = {:.4e} ± {:.1e} J/(m² K)", s.entropy, s.err_est);

    let models = [
        ("plasma", MaterialModel::plasma(9.0)?),
        ("drude", MaterialModel::drude(9.0, 0.035)?),
        ("magnetic drude", MaterialModel::drude(9.0, 0.035)?.with_permeability(PermeabilityModel::static_only(110.0))?),
    ];
    for (name, m) in models {
        let r = nernst_probe(&MirrorPair::symmetric(m, 1000.0), &DEFAULT_LADDER, &NernstOptions::default(), &opts)?;
        let n = r.curve.entropy.len();
        let verdict = match r.verdict {
            NernstVerdict::SatisfiesNernst => "satisfies".to_string(),
            NernstVerdict::ViolatesNernst { plateau } => format!("violates, S(0) ≈ {plateau:.3e}"),
        };
        println!("{name:>15}: S(2 K) = {:+.3e}, {verdict}", r.curve.entropy[n - 1]);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
