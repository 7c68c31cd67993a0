use std::path::Path;
use std::process::{Command, Output};

fn ratelab(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ratelab"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn rate_for_binary_spectrum_state() {
    let dir = tempfile::tempdir().unwrap();
    let o = ratelab(&["rate", "--lambda", "0.9168", "--d", "2"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("dims,gamma,maximized,hamiltonian_file\n2x2,1.91227"), "{text}");
    assert!(dir.path().join("optimal_hamiltonian.json").exists());
}

#[test]
fn bell_state_under_diagonal_hamiltonian_does_not_entangle() {
    let dir = tempfile::tempdir().unwrap();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    std::fs::write(
        dir.path().join("bell.json"),
        format!(r#"{{"dims": [2, 2], "re": [{s}, 0, 0, {s}], "im": [0, 0, 0, 0]}}"#),
    )
    .unwrap();
    std::fs::write(
        dir.path().join("zz.json"),
        r#"{"dim": 4,
            "re": [[1, 0, 0, 0], [0, -1, 0, 0], [0, 0, -1, 0], [0, 0, 0, 1]],
            "im": [[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]]}"#,
    )
    .unwrap();
    let o = ratelab(&["rate", "--state", "bell.json", "--ham", "zz.json", "--format", "json"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(report["gamma"].as_f64().unwrap().abs() < 1e-12);
    assert_eq!(report["maximized"], false);
}

#[test]
fn malformed_input_reports_location_and_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.json"), "{\"dims\": [2, 2],\n \"re\": [1, 0, 0,\n").unwrap();
    let o = ratelab(&["rate", "--state", "bad.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("bad.json") && err.contains("line"), "{err}");
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["fig2", "--bogus"][..],
        &["rate"],
        &["rate", "--lambda", "0.3", "--d", "2"],
        &["solve", "--dims", "4", "--p", "0.7"],
        &["verify", "--suite", "nonsense"],
        &["fig3", "--pcount", "0"],
    ] {
        let o = ratelab(args, dir.path());
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stderr(&o));
    }
    assert_eq!(ratelab(&["--help"], dir.path()).status.code(), Some(0));
}

#[test]
fn fig2_rows_are_derived_optima() {
    let dir = tempfile::tempdir().unwrap();
    let o = ratelab(&["fig2", "--d", "8"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "d,log2d,lambda_opt,gamma_d,entropy_bits");
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("2,1.00000000000,0.91677"), "{}", lines[1]);
}

#[test]
fn fig3_output_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["fig3", "--dims", "4", "--pcount", "3", "--restarts", "4", "--iters", "8", "--seed", "5"];
    let a = ratelab(&[&args[..], &["--out", "a.csv"]].concat(), dir.path());
    let b = ratelab(&[&args[..], &["--out", "b.csv"]].concat(), dir.path());
    assert_eq!(a.status.code(), Some(0), "{}", stderr(&a));
    assert_eq!(b.status.code(), Some(0));
    let first = std::fs::read(dir.path().join("a.csv")).unwrap();
    assert_eq!(first, std::fs::read(dir.path().join("b.csv")).unwrap());
    let text = String::from_utf8(first).unwrap();
    assert!(text.starts_with("D,p,F_max,entropy_bits,precision\n"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn solve_reports_json() {
    let dir = tempfile::tempdir().unwrap();
    let o = ratelab(&["solve", "--dims", "4", "--p", "0.5", "--restarts", "4", "--iters", "8"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let result: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let f = result["f_max"].as_f64().unwrap();
    assert!(f > 0.0 && f <= 1.0 + 1e-2);
    assert_eq!(result["k_opt"]["dim"], 4);
}

#[test]
fn lemma_suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = ratelab(&["verify", "--suite", "lemmas", "--instances", "100", "--seed", "7"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("check,instances,passed,skipped,failed\n"));
    assert!(text.lines().skip(1).all(|l| l.ends_with(",0")), "{text}");
}
