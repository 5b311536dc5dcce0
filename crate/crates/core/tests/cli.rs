use qhj::report::parse_spectrum_document;
use std::process::{Command, Output};

fn qhj(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qhj")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn list_shows_every_model() {
    let out = qhj(&["list"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out).lines().count(), 8);
    let json: serde_json::Value = serde_json::from_str(&stdout(&qhj(&["list", "--json"]))).unwrap();
    let ids: Vec<&str> = json.as_array().unwrap().iter().map(|m| m["id"].as_str().unwrap()).collect();
    assert_eq!(
        ids,
        ["hydrogen", "scarf1", "scarf_periodic", "lame", "assoc_lame_es", "assoc_lame_qes", "khare_mandal", "complex_scarf"]
    );
    let lame = stdout(&qhj(&["list", "lame"]));
    assert!(lame.contains("j") && lame.contains("m"));
}

#[test]
fn solve_json_is_deterministic_and_round_trips() {
    let args = ["solve", "lame", "--j", "2", "--m", "0.5", "--json"];
    let a = qhj(&args);
    let b = qhj(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let doc = parse_spectrum_document(&stdout(&a)).unwrap();
    assert_eq!(doc.lines.len(), 5);
    assert_eq!(qhj::report::to_json(&doc).unwrap(), stdout(&a));
    let r3 = 3.0f64.sqrt();
    let mut energies: Vec<f64> = doc.lines.iter().map(|l| l.energy.re).collect();
    energies.sort_by(f64::total_cmp);
    // j = 2 edges at m = 1/2, measured from the lowest one
    let want = [0.0, r3 - 1.5, r3, 1.5 + r3, 2.0 * r3];
    for (e, w) in energies.iter().zip(want) {
        assert!((e - w).abs() < 1e-10, "{e} vs {w}");
    }
}

#[test]
fn solve_text_and_csv_rows() {
    let text = stdout(&qhj(&["solve", "hydrogen", "--e2", "2", "--l", "1", "--levels", "3"]));
    assert!(text.contains("5/36"));
    let csv = stdout(&qhj(&["solve", "hydrogen", "--e2", "2", "--l", "1", "--levels", "3", "--format", "csv"]));
    let mut rows = csv.lines();
    assert!(rows.next().unwrap().starts_with("set_label,n,energy_re"));
    assert_eq!(rows.count(), 3);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&qhj(&["solve", "lame", "--j", "1", "--m", "2"])), 1);
    assert_eq!(code(&qhj(&["solve", "no_such_model"])), 1);
    assert_eq!(code(&qhj(&["solve", "lame", "--j", "1", "--m", "0.5", "--zeta", "0.1"])), 1);
    assert_eq!(code(&qhj(&["wavefunction", "lame", "--j", "1", "--m", "0.5", "--state", "9"])), 1);
    assert_eq!(code(&qhj(&["solve", "assoc_lame_qes", "--a", "0.3", "--b", "0.2", "--m", "0.5"])), 2);
    assert_eq!(code(&qhj(&["verify", "lame", "--j", "1", "--m", "0.5"])), 0);
    assert_eq!(code(&qhj(&["verify", "lame", "--j", "1", "--m", "0.5", "--tol", "1e-14"])), 3);
}

#[test]
fn wavefunction_samples() {
    let one = stdout(&qhj(&["wavefunction", "hydrogen", "--e2", "2", "--l", "0", "--samples", "1"]));
    let rows: Vec<&str> = one.lines().collect();
    assert_eq!(rows[0], "x,re,im");
    assert_eq!(rows.len(), 2);
    assert!(rows[1].starts_with("0.0000000000000000e0,"));

    let csv = stdout(&qhj(&["wavefunction", "lame", "--j", "2", "--m", "0.5", "--state", "4", "--samples", "400"]));
    let re: Vec<f64> = csv.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    let sup = re.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    assert!((sup - 1.0).abs() < 1e-12);
    let json: serde_json::Value =
        serde_json::from_str(&stdout(&qhj(&["wavefunction", "lame", "--j", "2", "--m", "0.5", "--state", "4", "--json"])))
            .unwrap();
    assert_eq!(json["zero_locations"].as_array().unwrap().len(), 2);
}

#[test]
fn config_file_merges_with_flags() {
    let dir = std::env::temp_dir().join(format!("qhj-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.json");
    std::fs::write(&cfg, r#"{"model": "lame", "j": 3, "m": 0.5, "format": "json"}"#).unwrap();
    let from_cfg = parse_spectrum_document(&stdout(&qhj(&["solve", "--config", cfg.to_str().unwrap()]))).unwrap();
    assert_eq!(from_cfg.lines.len(), 7);
    let out = dir.join("out.json");
    let flagged = qhj(&["solve", "--config", cfg.to_str().unwrap(), "--j", "1", "-o", out.to_str().unwrap()]);
    assert_eq!(code(&flagged), 0);
    assert!(flagged.stdout.is_empty());
    let doc = parse_spectrum_document(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc.lines.len(), 3);
    std::fs::write(&cfg, r#"{"model": "lame", "j": 1, "m": 0.5, "bogus": 1}"#).unwrap();
    assert_eq!(code(&qhj(&["solve", "--config", cfg.to_str().unwrap()])), 1);
    std::fs::remove_dir_all(&dir).unwrap();
}
