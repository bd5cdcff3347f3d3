// Casimir pressure between two gold-like plates as a function of separation,
// for the Drude and plasma descriptions, relative to the ideal-metal result.

use casimir::lifshitz::{pressure, pressure_ideal_metal, LifshitzOptions, MirrorPair};
use casimir::models::MaterialModel;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let opts = LifshitzOptions::default();
    let drude = MaterialModel::drude(9.0, 0.035)?;
    let plasma = MaterialModel::plasma(9.0)?;
    let t = 300.0;

    println!("{:>8} {:>14} {:>14} {:>9} {:>9}", "a (nm)", "P_drude (Pa)", "P_plasma (Pa)", "D/ideal", "P/ideal");
    for a in [200.0, 500.0, 1000.0, 2000.0] {
        let pd = pressure(&MirrorPair::symmetric(drude.clone(), a), t, &opts)?;
        let pp = pressure(&MirrorPair::symmetric(plasma.clone(), a), t, &opts)?;
        let ideal = pressure_ideal_metal(a);
        println!(
            "{a:8.0} {:14.6e} {:14.6e} {:9.4} {:9.4}",
            pd.pressure,
            pp.pressure,
            pd.pressure / ideal,
            pp.pressure / ideal
        );
        assert!(pd.pressure < 0.0 && pp.pressure < pd.pressure);
    }

    // A very large plasma frequency approaches the ideal metal.
    let near_ideal = MaterialModel::plasma(1e3)?;
    let p = pressure(&MirrorPair::symmetric(near_ideal, 1000.0), 10.0, &opts)?;
    println!("plasma(1e3 eV), 1000 nm, 10 K: {:.6e} Pa (ideal {:.6e} Pa)", p.pressure, pressure_ideal_metal(1000.0));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
