// The Drude pressure does not approach the plasma pressure as γ → 0.
// The difference sits entirely in the static transverse-electric term.

use casimir::lifshitz::{compare_models, pressure, LifshitzOptions, MirrorPair, NamedModel};
use casimir::models::MaterialModel;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let opts = LifshitzOptions::default();
    let (a, t) = (1000.0, 300.0);
    let ladder = [1e-3, 1e-4, 1e-5, 1e-6];
    let plasma = MaterialModel::plasma(9.0)?;
    let models = [
        NamedModel::symmetric("drude", MaterialModel::drude(9.0, 0.035)?),
        NamedModel::symmetric("plasma", plasma.clone()),
    ];
    let table = compare_models(&[a], t, &models, &ladder, &opts);
    for row in &table.rows {
        println!("{:>7}: P = {:.6e} Pa", row.model_id, row.pressure.clone()?);
    }

    let rungs: Vec<f64> = table.rows[0].gamma_ladder.iter().map(|c| c.clone().unwrap().unwrap()).collect();
    for (g, p) in ladder.iter().zip(&rungs) {
        println!("  drude γ = {g:.0e} eV: {p:.9e} Pa");
    }
    let p = pressure(&MirrorPair::symmetric(plasma, a), t, &opts)?;
    let gap = p.pressure - rungs[rungs.len() - 1];
    println!("gap to plasma {:.3e} Pa, static TE term {:.3e} Pa ({:.2}%)", gap, p.l0_te, 100.0 * p.l0_te / gap);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
