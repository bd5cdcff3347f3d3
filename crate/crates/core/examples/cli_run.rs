// Drive the command-line front end from a JSON configuration.

use casimir::cli;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join(format!("casimir-example-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let config = dir.join("gold.json");
    std::fs::write(
        &config,
        r#"{
  "materials": {
    "au_drude": {"inline": {"dielectric": {"type": "drude", "plasma_freq": 9.0, "gamma": 0.035}}},
    "au_plasma": {"inline": {"dielectric": {"type": "plasma", "plasma_freq": 9.0}}}
  },
  "compare": {"models": ["au_drude", "au_plasma"]}
}"#,
    )?;
    let out = dir.join("out");
    let code = cli::run([
        "casimir",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "compare",
        "--a",
        "500:2000:4",
        "--T",
        "300",
    ]);
    println!("compare exited with {code}");
    print!("{}", std::fs::read_to_string(out.join("compare.csv"))?);

    let code = cli::run(["casimir", "--out", out.to_str().unwrap(), "kk-check", "--model", "plasma", "--relation", "standard"]);
    println!("kk-check on plasma with the standard relation exited with {code}");
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
