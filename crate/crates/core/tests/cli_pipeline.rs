use std::fs;
use std::path::Path;
use std::process::Command;

use surgectl::cli::{
    emit_report, exit_code, metrics_csv, parse_config, prepare_output_dir, run_compare, scenario_realizations,
    RunConfig, METRICS_FILE, REPORT_FILE,
};
use surgectl::error::Error;
use surgectl::exec::Execution;

const BIN: &str = env!("CARGO_BIN_EXE_surgectl");

fn short_config(dir: &Path) -> RunConfig {
    let mut cfg = parse_config("sim.horizon = 10\nsim.dt = 0.01").unwrap();
    cfg.output_dir = dir.to_path_buf();
    cfg
}

#[test]
fn config_text_round_trips() {
    let default = RunConfig::default();
    assert_eq!(parse_config(&default.to_config_string()).unwrap(), default);

    let edited = parse_config(
        "sim.dt = 0.002\nsim.seed = 9\nwave.amplitude = 3.5\nrun.execution = sequential\n\
         controllers = imc, extra\n\
         controller.imc.lambda = 0.35\n\
         controller.extra.kind = PID\ncontroller.extra.kp = 10\ncontroller.extra.ki = 1\n\
         controller.extra.kd = 0.5\ncontroller.extra.tf = 0.2\n",
    )
    .unwrap();
    assert_eq!(edited.controllers.len(), 2);
    assert_eq!(edited.execution, Execution::Sequential);
    assert_eq!(parse_config(&edited.to_config_string()).unwrap(), edited);
}

#[test]
fn config_errors_map_to_exit_code_one() {
    for text in ["sim.dt = fast", "no.such.key = 1", "sim.dt = -1"] {
        let err = parse_config(text).and_then(|c| c.validate().map(|_| c)).unwrap_err();
        assert_eq!(exit_code(&err), 1, "{text}: {err}");
    }
}

#[test]
fn compare_fills_the_matrix_and_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = short_config(dir.path());
    let results = run_compare(&cfg).unwrap();
    assert_eq!(results.cells.len(), 24);
    assert!(results.first_failure().is_none());
    emit_report(&results, &cfg).unwrap();

    let csv = fs::read_to_string(dir.path().join(METRICS_FILE)).unwrap();
    assert_eq!(csv.lines().count(), 25);

    let report = fs::read_to_string(dir.path().join(REPORT_FILE)).unwrap();
    let sections: Vec<&str> = report.split("\n## ").skip(1).collect();
    assert_eq!(sections.len(), 4);
    for s in sections {
        // header, separator and one row per controller
        assert_eq!(s.lines().filter(|l| l.starts_with('|')).count(), 8, "{s}");
    }
    assert_eq!(fs::read_dir(dir.path().join("traces")).unwrap().count(), 24);
}

#[test]
fn execution_policy_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = short_config(dir.path());
    let parallel = metrics_csv(&run_compare(&cfg).unwrap());
    cfg.set_execution(Execution::Sequential);
    assert_eq!(metrics_csv(&run_compare(&cfg).unwrap()), parallel);
}

#[test]
fn controller_selection_leaves_realizations_alone() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = short_config(dir.path());
    let fewer = RunConfig { controllers: cfg.controllers[3..].to_vec(), ..cfg.clone() };
    assert_eq!(scenario_realizations(&cfg).unwrap(), scenario_realizations(&fewer).unwrap());
    let all = run_compare(&cfg).unwrap();
    let some = run_compare(&fewer).unwrap();
    for si in 0..4 {
        for ci in 0..3 {
            let a = all.cell(ci + 3, si).trace().unwrap();
            let b = some.cell(ci, si).trace().unwrap();
            assert_eq!(a, b);
        }
    }
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("blocker");
    fs::write(&blocker, b"").unwrap();
    let err = prepare_output_dir(&blocker.join("out")).unwrap_err();
    assert!(matches!(err, Error::Io { .. }));
    assert_eq!(exit_code(&err), 3);
}

fn run_bin(args: &[&str]) -> (i32, String) {
    let out = Command::new(BIN).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8_lossy(&out.stderr).into_owned())
}

#[test]
fn binary_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let p = dir.path().join(name);
        fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_owned()
    };
    let short = "sim.horizon = 5\nsim.dt = 0.01\noutput.emit = csv\n";

    let bad = write("bad.conf", "sim.dt = zero\n");
    assert_eq!(run_bin(&["--config", &bad, "compare"]).0, 1);

    let ok = write("ok.conf", short);
    let out = dir.path().join("run");
    assert_eq!(run_bin(&["--config", &ok, "--out", out.to_str().unwrap(), "compare"]), (0, String::new()));
    assert!(out.join(METRICS_FILE).exists());

    let blocked = dir.path().join("blocker");
    fs::write(&blocked, b"").unwrap();
    let nested = blocked.join("out");
    assert_eq!(run_bin(&["--config", &ok, "--out", nested.to_str().unwrap(), "compare"]).0, 3);

    let failing = write("failing.conf", &format!("{short}controller.imc.order = 2\n"));
    let (code, stderr) = run_bin(&["--config", &failing, "--out", out.to_str().unwrap(), "compare"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("imc") || stderr.contains("IMC"), "{stderr}");
}
