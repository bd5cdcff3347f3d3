//! Every example compiles and runs to completion.

mod pressure_sweep {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/pressure_sweep.rs"));
}

#[test]
fn pressure_sweep_runs() {
    pressure_sweep::run_example().expect("pressure_sweep example failed");
}

mod gamma_ladder {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/gamma_ladder.rs"));
}

#[test]
fn gamma_ladder_runs() {
    gamma_ladder::run_example().expect("gamma_ladder example failed");
}

mod zero_frequency {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/zero_frequency.rs"));
}

#[test]
fn zero_frequency_runs() {
    zero_frequency::run_example().expect("zero_frequency example failed");
}

mod kk_residuals {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/kk_residuals.rs"));
}

#[test]
fn kk_residuals_runs() {
    kk_residuals::run_example().expect("kk_residuals example failed");
}

mod weak_limit {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/weak_limit.rs"));
}

#[test]
fn weak_limit_runs() {
    weak_limit::run_example().expect("weak_limit example failed");
}

mod nernst_probe {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/nernst_probe.rs"));
}

#[test]
fn nernst_probe_runs() {
    nernst_probe::run_example().expect("nernst_probe example failed");
}

mod fit_oscillators {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/fit_oscillators.rs"));
}

#[test]
fn fit_oscillators_runs() {
    fit_oscillators::run_example().expect("fit_oscillators example failed");
}

mod eps_from_table {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/eps_from_table.rs"));
}

#[test]
fn eps_from_table_runs() {
    eps_from_table::run_example().expect("eps_from_table example failed");
}

mod cli_run {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/cli_run.rs"));
}

#[test]
fn cli_run_runs() {
    cli_run::run_example().expect("cli_run example failed");
}
