// As γ → 0 the Drude absorption tends to the distribution π ωp² δ(ω)/ω,
// seen only through its action on smooth test functions.

use casimir::dispersion::{
    mollified_delta_identity, predicted_weak_limit, test_suite, weak_limit_drude, MollifiedDelta, MollifierFamily,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let phi = |w: f64| w * (-w * w).exp();
    let limit = predicted_weak_limit(1.0, 1.0);
    for p in weak_limit_drude(1.0, phi, &[1e-2, 1e-3, 1e-4, 1e-5], 1e-12)? {
        println!("γ = {:.0e}: I = {:.10}, |I − π| = {:.2e}", p.gamma, p.value, (p.value - limit).abs());
    }

    // ω δ′(ω) + δ(ω) = 0, tested with shrinking Gaussian mollifiers.
    let deltas: Vec<MollifiedDelta> = [1e-1, 1e-2].iter().map(|&e| MollifiedDelta::new(e, MollifierFamily::Gaussian)).collect();
    let mut worst = [0.0f64; 2];
    for f in test_suite() {
        let v = mollified_delta_identity(|w| f.eval(w), &deltas, 1e-12)?;
        for (w, x) in worst.iter_mut().zip(&v) {
            *w = w.max(x.abs());
        }
    }
    println!("max |⟨ω δ′_η + δ_η, φ⟩| over the suite: η = 0.1: {:.2e}, η = 0.01: {:.2e}", worst[0], worst[1]);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
