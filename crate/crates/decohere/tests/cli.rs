//! End-to-end tests of the `decohere` binary: interface contract, exit
//! codes, override precedence, and output routing.

use std::path::Path;
use std::process::{Command, Output};

fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_decohere")
}

fn run(args: &[&str]) -> Output {
    Command::new(binary()).args(args).output().expect("spawn")
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("scenario.conf");
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn evolve_emits_the_schema_header_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "tau.points = 2\n");
    let output = run(&["evolve", "--config", &config]);
    assert!(output.status.success());
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.starts_with("tau,abs_rho_12,arg_rho_12,gamma_vac,gamma_i,purity,coherence_l1\n"));
    assert_eq!(stdout.lines().count(), 3);
    assert!(stdout.ends_with('\n'));
}

#[test]
fn out_flag_writes_the_same_bytes_as_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "tau.points = 4\nregime = uncorrelated\n");
    let stdout_run = run(&["evolve", "--config", &config]);
    let file = dir.path().join("out.csv");
    let file_run = run(&["evolve", "--config", &config, "--out", file.to_str().unwrap()]);
    assert!(stdout_run.status.success() && file_run.status.success());
    assert_eq!(std::fs::read(&file).unwrap(), stdout_run.stdout);
}

#[test]
fn overrides_take_precedence_over_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "tau.points = 2\n");
    let base = run(&["figure1", "--config", &config]);
    let overridden = run(&["figure1", "--config", &config, "figure1.q=1,2"]);
    assert!(overridden.status.success());
    let header = String::from_utf8(overridden.stdout).unwrap();
    assert!(header.starts_with("tau,abs_gamma_vac_Q1,abs_gamma_vac_Q2\n"));
    assert_ne!(header.as_bytes(), base.stdout.as_slice());
}

#[test]
fn config_problems_exit_with_code_one() {
    let dir = tempfile::tempdir().unwrap();
    // Missing file.
    let missing = dir.path().join("nope.conf");
    let output = run(&["evolve", "--config", missing.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(1));

    // Bad key.
    let config = write_config(dir.path(), "frequency = 3\n");
    let output = run(&["evolve", "--config", &config]);
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(stderr.contains("frequency"), "{stderr}");

    // Bad value through an override.
    let config = write_config(dir.path(), "");
    let output = run(&["evolve", "--config", &config, "omega_ir=-1"]);
    assert_eq!(output.status.code(), Some(1));

    // Missing required flag is a usage problem, also exit 1.
    let output = run(&["evolve"]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn relativistic_packets_warn_on_stderr_but_run() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "packet.center = 0.3\npacket.width = 0.05\ntau.points = 2\n",
    );
    let output = run(&["evolve", "--config", &config]);
    assert!(output.status.success());
    let stderr = String::from_utf8(output.stderr).unwrap();
    assert!(stderr.contains("non-relativistic"), "{stderr}");
}

#[test]
fn validate_passes_and_reports_every_check() {
    let output = run(&["validate"]);
    assert!(output.status.success(), "validate failed");
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.starts_with("check,status,observed,tolerance\n"));
    let rows: Vec<&str> = stdout.lines().skip(1).collect();
    assert!(rows.len() >= 8, "{stdout}");
    for row in rows {
        assert!(row.contains(",pass,"), "unexpected row: {row}");
    }
}

#[test]
fn help_and_version_exit_zero() {
    assert!(run(&["--help"]).status.success());
    assert!(run(&["--version"]).status.success());
    assert!(run(&["evolve", "--help"]).status.success());
}
