// Acceptance suite. Runs without the libtest harness so that one PASS/FAIL
// line per criterion is always printed; exits non-zero if any criterion fails.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use casimir::cli::{builtin_material, builtin_oscillators};
use casimir::dispersion::{
    kk_residual_report, mollified_delta_identity, test_suite, weak_limit_drude, DispersionError, FrequencyGrid,
    MollifiedDelta, MollifierFamily, Relation, ReportOptions,
};
use casimir::lifshitz::{
    compare_models, free_energy, pressure, zero_frequency_coefficients, LifshitzOptions, MirrorPair, NamedModel,
};
use casimir::models::{Dielectric, MaterialModel, PlasmaParams};
use casimir::optics::{fit_oscillators, synthetic_table, FitOptions};
use casimir::thermo::{nernst_probe, NernstOptions, NernstVerdict, DEFAULT_LADDER};

type Res<T> = Result<T, Box<dyn std::error::Error>>;

struct Outcome {
    checks: Vec<(String, bool)>,
    output: String,
}

impl Outcome {
    fn new() -> Self {
        Self { checks: Vec::new(), output: String::new() }
    }

    fn check(&mut self, what: impl Into<String>, ok: bool) {
        self.checks.push((what.into(), ok));
    }

    fn within(&mut self, elapsed: Duration, limit: Duration) {
        self.check(format!("runtime {:.2} s < {} s", elapsed.as_secs_f64(), limit.as_secs()), elapsed < limit);
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.1)
    }
}

fn gold_drude() -> MaterialModel {
    builtin_material("drude").unwrap()
}

fn gold_plasma() -> MaterialModel {
    builtin_material("plasma").unwrap()
}

fn ideal_metal_limit() -> Res<Outcome> {
    let mut o = Outcome::new();
    let start = Instant::now();
    let p = pressure(&MirrorPair::symmetric(MaterialModel::plasma(1e3)?, 1000.0), 10.0, &LifshitzOptions::default())?;
    let elapsed = start.elapsed();
    let rel = (p.pressure / -1.3001e-3 - 1.0).abs();
    writeln!(o.output, "{:e}", p.pressure)?;
    o.check(format!("P = {:.6e} Pa, {:.3}% from -1.3001e-3", p.pressure, 100.0 * rel), rel <= 0.01);
    o.within(elapsed, Duration::from_secs(10));
    Ok(o)
}

fn thermodynamic_consistency() -> Res<Outcome> {
    let mut o = Outcome::new();
    let opts = LifshitzOptions::default();
    let start = Instant::now();
    let mut worst = 0.0f64;
    for model in [gold_drude(), gold_plasma()] {
        for a in [200.0, 500.0, 1000.0] {
            for t in [77.0, 300.0, 600.0] {
                let f = |x: f64| free_energy(&MirrorPair::symmetric(model.clone(), x), t, &opts).map(|r| r.free_energy);
                let h = 1e-3 * a;
                let d1 = (f(a + h)? - f(a - h)?) / (2.0 * h);
                let d2 = (f(a + 0.5 * h)? - f(a - 0.5 * h)?) / h;
                // J/m² per nm to Pa
                let dfda = (4.0 * d2 - d1) / 3.0 * 1e9;
                let p = pressure(&MirrorPair::symmetric(model.clone(), a), t, &opts)?.pressure;
                let r = (p + dfda).abs() / p.abs();
                writeln!(o.output, "{a:e},{t:e},{p:e},{dfda:e}")?;
                worst = worst.max(r);
            }
        }
    }
    let elapsed = start.elapsed();
    o.check(format!("max |P + dF/da|/|P| = {worst:.2e}"), worst <= 1e-4);
    o.within(elapsed, Duration::from_secs(120));
    Ok(o)
}

fn kk_compliance() -> Res<Outcome> {
    let mut o = Outcome::new();
    let grid = FrequencyGrid::log_spaced(0.01, 100.0, 32)?;
    let opts = ReportOptions::default();
    let plasma = Dielectric::Plasma(PlasmaParams::new(9.0)?);
    let r = kk_residual_report(&plasma, &grid, Relation::Generalized, &opts)?;
    writeln!(o.output, "{}", r.to_csv())?;
    let tol = opts.kk.tol;
    o.check(
        format!("plasma generalized max rel residual {:.2e}", r.max_rel_residual),
        r.max_rel_residual <= tol && r.failed_nodes == 0,
    );
    let r = kk_residual_report(&Dielectric::Generalized(builtin_oscillators()), &grid, Relation::Generalized, &opts)?;
    writeln!(o.output, "{}", r.to_csv())?;
    o.check(
        format!("3-oscillator max rel residual {:.2e}", r.max_rel_residual),
        r.max_rel_residual <= 1e-5 && r.failed_nodes == 0,
    );
    let refused = kk_residual_report(&plasma, &grid, Relation::Standard, &opts);
    writeln!(o.output, "{}", refused.is_err())?;
    o.check(
        "standard relation on plasma refused as inadmissible",
        matches!(refused, Err(DispersionError::Inadmissible(_))),
    );
    Ok(o)
}

fn weak_limit_convergence() -> Res<Outcome> {
    let mut o = Outcome::new();
    let phi = |w: f64| w * (-w * w).exp();
    let gammas = [1e-2, 1e-3, 1e-4, 1e-5];
    let pts = weak_limit_drude(1.0, phi, &gammas, 1e-12)?;
    let diffs: Vec<f64> = pts.iter().map(|p| (p.value - std::f64::consts::PI).abs()).collect();
    for p in &pts {
        writeln!(o.output, "{:e},{:e}", p.gamma, p.value)?;
    }
    o.check(format!("|I(1e-4) - pi| = {:.2e}", diffs[2]), diffs[2] <= 1e-3);
    o.check("|I - pi| decreasing along the ladder", diffs.windows(2).all(|w| w[1] < w[0]));

    let deltas = [MollifiedDelta::new(1e-1, MollifierFamily::Gaussian), MollifiedDelta::new(1e-2, MollifierFamily::Gaussian)];
    let mut worst = [0.0f64; 2];
    for f in test_suite() {
        let v = mollified_delta_identity(|w| f.eval(w), &deltas, 1e-12)?;
        writeln!(o.output, "{:e},{:e}", v[0], v[1])?;
        worst[0] = worst[0].max(v[0].abs());
        worst[1] = worst[1].max(v[1].abs());
    }
    o.check(
        format!("mollified identity max |value| {:.2e} at eta 1e-1, {:.2e} at 1e-2", worst[0], worst[1]),
        worst[1] <= 1e-3 && worst[1] < worst[0],
    );
    Ok(o)
}

fn discontinuity() -> Res<Outcome> {
    let mut o = Outcome::new();
    let opts = LifshitzOptions::default();
    let (a, t) = (1000.0, 300.0);
    let ladder = [1e-3, 1e-4, 1e-5, 1e-6];
    let start = Instant::now();
    let table = compare_models(&[a], t, &[NamedModel::symmetric("drude", gold_drude())], &ladder, &opts);
    let rungs = table.rows[0]
        .gamma_ladder
        .iter()
        .map(|c| c.clone().expect("drude has a ladder").map_err(Into::into))
        .collect::<Res<Vec<f64>>>()?;
    let p = pressure(&MirrorPair::symmetric(gold_plasma(), a), t, &opts)?;
    let elapsed = start.elapsed();
    let last = rungs[3];
    let step = ((rungs[3] - rungs[2]) / rungs[2]).abs();
    let gap = p.pressure - last;
    let share = p.l0_te / gap;
    for r in &rungs {
        writeln!(o.output, "{r:e}")?;
    }
    writeln!(o.output, "{:e},{:e}", p.pressure, p.l0_te)?;
    o.check(format!("last rung change {step:.2e}"), step <= 1e-3);
    o.check(format!("plasma differs by {:.2}%", 100.0 * (gap / p.pressure).abs()), (gap / p.pressure).abs() >= 0.01);
    o.check(format!("static TE share of the gap {:.4}%", 100.0 * share), share >= 0.99);
    o.within(elapsed, Duration::from_secs(60));
    Ok(o)
}

fn nernst() -> Res<Outcome> {
    let mut o = Outcome::new();
    let opts = LifshitzOptions::default();
    let n = NernstOptions::default();
    let start = Instant::now();
    let probe = |m: MaterialModel| nernst_probe(&MirrorPair::symmetric(m, 1000.0), &DEFAULT_LADDER, &n, &opts);
    let plasma = probe(gold_plasma())?;
    let drude = probe(gold_drude())?;
    let magnetic = probe(builtin_material("magnetic_drude").unwrap())?;
    let elapsed = start.elapsed();
    for r in [&plasma, &drude, &magnetic] {
        writeln!(o.output, "{}", serde_json::to_string(r)?)?;
    }

    o.check(
        format!(
            "plasma satisfies: |S(0)| = {:.2e} vs 1e-3 |S(300 K)| = {:.2e}",
            plasma.curve.extrapolated_zero.abs(),
            1e-3 * plasma.reference_entropy.abs()
        ),
        plasma.verdict == NernstVerdict::SatisfiesNernst,
    );
    let s = &drude.curve.entropy;
    let (s_lo, s_prev) = (s[s.len() - 1], s[s.len() - 2]);
    let negative = matches!(drude.verdict, NernstVerdict::ViolatesNernst { plateau } if plateau < 0.0);
    o.check(format!("drude violates with negative plateau: {:?}", drude.verdict), negative);
    let drift = ((s_lo - s_prev) / s_prev).abs();
    o.check(
        format!("drude plateau between the two lowest points {s_prev:.4e} -> {s_lo:.4e}, drift {:.2}% (<= 5%)", 100.0 * drift),
        drift <= 0.05,
    );
    o.check(
        format!("magnetic drude violates: {:?}", magnetic.verdict),
        matches!(magnetic.verdict, NernstVerdict::ViolatesNernst { .. }),
    );
    o.within(elapsed, Duration::from_secs(300));
    Ok(o)
}

fn zero_frequency() -> Res<Outcome> {
    let mut o = Outcome::new();
    let mu = 110.0;
    let magnetic = builtin_material("magnetic_drude").unwrap();
    let mut worst = 0.0f64;
    for k in [1e-4, 1e-2, 1.0, 9.0, 1e2] {
        let d = zero_frequency_coefficients(&gold_drude(), k);
        let m = zero_frequency_coefficients(&magnetic, k);
        let p = zero_frequency_coefficients(&gold_plasma(), k);
        let s = (k * k + 81.0f64).sqrt();
        let expect = [0.0, 1.0, (mu - 1.0) / (mu + 1.0), 1.0, (k - s) / (k + s), 1.0];
        let got = [d.te, d.tm, m.te, m.tm, p.te, p.tm];
        for (g, e) in got.iter().zip(expect) {
            worst = worst.max((g - e).abs());
        }
        writeln!(o.output, "{:?}", got)?;
    }
    o.check(format!("max deviation {worst:.1e}"), worst <= 1e-12);
    Ok(o)
}

fn fit_round_trip() -> Res<Outcome> {
    let mut o = Outcome::new();
    let truth = builtin_oscillators();
    let start = Instant::now();
    let omegas: Vec<f64> = (0..300).map(|i| 0.5 * 120f64.powf(i as f64 / 299.0)).collect();
    let table = synthetic_table(&Dielectric::Generalized(truth.clone()), &omegas, "synthetic")?;
    let fit = fit_oscillators(&table, &FitOptions { oscillators: 3, ..FitOptions::default() })?;
    let grid = FrequencyGrid::log_spaced(0.01, 100.0, 32)?;
    let kk = kk_residual_report(
        &Dielectric::Generalized(fit.oscillators.clone()),
        &grid,
        Relation::Generalized,
        &ReportOptions::default(),
    )?;
    let elapsed = start.elapsed();
    writeln!(o.output, "{}", serde_json::to_string(&fit)?)?;
    writeln!(o.output, "{}", kk.to_csv())?;

    let mut worst = 0.0f64;
    for (f, t) in fit.oscillators.oscillators.iter().zip(&truth.oscillators) {
        for (x, y) in [(f.resonance, t.resonance), (f.damping, t.damping), (f.strength, t.strength)] {
            worst = worst.max((x / y - 1.0).abs());
        }
    }
    o.check(format!("worst parameter error {worst:.2e}"), worst <= 0.01 && fit.oscillators.oscillators.len() == 3);
    o.check(format!("residual {:.2e}", fit.residual_norm), fit.residual_norm <= 1e-8);
    o.check(format!("fitted model max rel residual {:.2e}", kk.max_rel_residual), kk.max_rel_residual <= 1e-5);
    o.within(elapsed, Duration::from_secs(30));
    Ok(o)
}

type Criterion = fn() -> Res<Outcome>;

const CRITERIA: [(&str, Criterion); 8] = [
    ("ideal-metal limit", ideal_metal_limit),
    ("thermodynamic consistency", thermodynamic_consistency),
    ("dispersion-relation compliance", kk_compliance),
    ("weak-limit convergence", weak_limit_convergence),
    ("drude/plasma discontinuity", discontinuity),
    ("nernst probe", nernst),
    ("zero-frequency exactness", zero_frequency),
    ("fit round trip", fit_round_trip),
];

fn in_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool").install(f)
}

fn report(index: usize, name: &str, outcome: &Result<Outcome, String>) -> bool {
    match outcome {
        Ok(o) => {
            let pass = o.passed();
            println!("criterion {index} {name}: {}", if pass { "PASS" } else { "FAIL" });
            for (what, ok) in &o.checks {
                println!("    [{}] {what}", if *ok { "ok" } else { "FAIL" });
            }
            pass
        }
        Err(e) => {
            println!("criterion {index} {name}: FAIL");
            println!("    error: {e}");
            false
        }
    }
}

fn main() {
    let mut all = true;
    let mut single = Vec::new();
    for (i, (name, run)) in CRITERIA.iter().enumerate() {
        let outcome = in_pool(1, || run().map_err(|e| e.to_string()));
        all &= report(i + 1, name, &outcome);
        single.push(outcome.map(|o| o.output));
    }

    let mut differing = Vec::new();
    for (i, (_, run)) in CRITERIA.iter().enumerate() {
        let four = in_pool(4, || run().map(|o| o.output).map_err(|e| e.to_string()));
        if four != single[i] {
            differing.push(i + 1);
        }
    }
    let pass = differing.is_empty();
    println!("criterion 9 determinism across 1 and 4 workers: {}", if pass { "PASS" } else { "FAIL" });
    if !pass {
        println!("    outputs differ for criteria {differing:?}");
    }
    all &= pass;

    if !all {
        std::process::exit(1);
    }
}
