use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use sphx_core::harness::{golden_compare, run_suite, RunConfig, Suite};
use sphx_core::Error;

fn sphx(args: &[&str], out: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sphx"));
    cmd.args(args);
    match out {
        Some(p) => cmd.env("SPHX_OUT", p),
        None => cmd.env_remove("SPHX_OUT"),
    };
    cmd.output().expect("sphx runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn exponents_run(dir: &Path) {
    let cfg = RunConfig { suite: Suite::Exponents, seed: 7, output_dir: dir.to_path_buf(), ..RunConfig::default() };
    let results = run_suite(&cfg).unwrap();
    assert!(results.iter().all(|r| r.passed()));
}

#[test]
fn catalog_lists_every_space() {
    let o = sphx(&["catalog"], None);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let text = v.to_string();
    for id in ["H2", "H3", "SL3R", "S2", "SU2group", "SU3group"] {
        assert!(text.contains(&format!("\"{id}\"")), "{id} missing");
    }
}

#[test]
fn exponent_graph_row_for_sl3r() {
    let o = sphx(&["exponent", "--space", "SL3R", "--points", "5"], None);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("space,p,inv_p,delta0,delta,"));
    assert!(text.lines().any(|l| l.starts_with("SL3R,inf,0,2,1.5,")));
}

#[test]
fn eval_emits_one_row() {
    let o = sphx(&["eval", "--space", "H2", "--t", "4", "--lambda", "1.4142135623730951", "--H", "0.5"], None);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("space,t,lambda,H,re_phi,im_phi,err_est,nodes"));
    assert!(lines.next().unwrap().starts_with("H2,4,"));
}

#[test]
fn configuration_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(sphx(&["exponent", "--space", "E8"], None).status.code(), Some(2));
    let cfg = dir.path().join("bad.json");
    fs::write(&cfg, r#"{"suite": "all", "t_ladder": []}"#).unwrap();
    assert_eq!(sphx(&["suite", "--config", cfg.to_str().unwrap()], Some(dir.path())).status.code(), Some(2));
    fs::write(&cfg, r#"{"suite": "exponents", "t_ladder": [20, 10]}"#).unwrap();
    assert_eq!(sphx(&["suite", "--config", cfg.to_str().unwrap()], Some(dir.path())).status.code(), Some(2));
    fs::write(&cfg, r#"{"suite": "exponents", "t_ladder": [20], "tolerances": {"c3.drift": -1}}"#).unwrap();
    assert_eq!(sphx(&["suite", "--config", cfg.to_str().unwrap()], Some(dir.path())).status.code(), Some(2));
    assert_eq!(sphx(&["suite", "--suite", "exponents", "--spaces", "H4"], Some(dir.path())).status.code(), Some(2));
}

#[test]
fn suite_writes_under_sphx_out() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(&cfg, r#"{"suite": "beams", "t_ladder": [20, 40], "output_dir": "ignored"}"#).unwrap();
    let o = sphx(&["suite", "--config", cfg.to_str().unwrap(), "--suite", "exponents"], Some(&dir.path().join("out")));
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(dir.path().join("out/summary.json").exists());
    assert!(dir.path().join("out/exponent_graph_SL3R.csv").exists());
    assert!(!dir.path().join("ignored").exists());
    let o = sphx(&["exponent", "--space", "H2", "--out", "graphs/h2.csv"], Some(dir.path()));
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("graphs/h2.csv").exists());
}

#[test]
fn suite_runs_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    exponents_run(a.path());
    exponents_run(b.path());
    let mut names: Vec<_> =
        fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).filter(|n| n.to_string_lossy().ends_with(".csv")).collect();
    names.sort();
    assert!(names.len() > 2);
    for n in names {
        assert_eq!(fs::read(a.path().join(&n)).unwrap(), fs::read(b.path().join(&n)).unwrap(), "{n:?} differs");
    }
}

#[test]
fn golden_identical_dirs_pass() {
    let (run, golden) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    exponents_run(run.path());
    exponents_run(golden.path());
    let (check, drifts) = golden_compare(run.path(), golden.path(), &BTreeMap::new(), 1e-9, 1e-6).unwrap();
    assert!(check.passed() && drifts.is_empty());
    let o = sphx(&["golden", "--run", run.path().to_str().unwrap(), "--golden", golden.path().to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn golden_perturbation_names_file_row_column() {
    let (run, golden) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    exponents_run(run.path());
    exponents_run(golden.path());
    let file = run.path().join("exponent_graph_SL3R.csv");
    let text = fs::read_to_string(&file).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let header: Vec<&str> = lines[0].split(',').collect();
    let col = header.iter().position(|h| *h == "delta").unwrap();
    let mut cells: Vec<String> = lines[1].split(',').map(String::from).collect();
    cells[col] = format!("{}", cells[col].parse::<f64>().unwrap() + 1e-3);
    lines[1] = cells.join(",");
    fs::write(&file, lines.join("\n") + "\n").unwrap();

    let (check, drifts) = golden_compare(run.path(), golden.path(), &BTreeMap::new(), 1e-9, 1e-6).unwrap();
    assert!(!check.passed());
    assert_eq!(drifts.len(), 1);
    assert_eq!(drifts[0].file, "exponent_graph_SL3R.csv");
    assert_eq!(drifts[0].column, "delta");
    assert!(check.detail.contains("exponent_graph_SL3R.csv"));

    let tol = BTreeMap::from([("delta".to_string(), 1e-2)]);
    assert!(golden_compare(run.path(), golden.path(), &tol, 1e-9, 1e-6).unwrap().0.passed());

    let o = sphx(&["golden", "--run", run.path().to_str().unwrap(), "--golden", golden.path().to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("exponent_graph_SL3R.csv") && text.contains("column delta"), "{text}");
}

#[test]
fn golden_extra_column_is_a_schema_error() {
    let (run, golden) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    exponents_run(run.path());
    exponents_run(golden.path());
    let file = run.path().join("exponent_graph_H2.csv");
    let text = fs::read_to_string(&file).unwrap();
    let widened: Vec<String> = text.lines().enumerate().map(|(i, l)| if i == 0 { format!("{l},extra") } else { format!("{l},0") }).collect();
    fs::write(&file, widened.join("\n") + "\n").unwrap();
    match golden_compare(run.path(), golden.path(), &BTreeMap::new(), 1e-9, 1e-6) {
        Err(Error::Schema { file, .. }) => assert!(file.contains("exponent_graph_H2.csv")),
        other => panic!("expected a schema error, got {other:?}"),
    }
    let o = sphx(&["golden", "--run", run.path().to_str().unwrap(), "--golden", golden.path().to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(2));
}
