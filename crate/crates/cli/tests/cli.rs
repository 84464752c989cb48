use std::path::{Path, PathBuf};

use gp_spectrum_cli::run;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn invoke(cmd: &str, config: &str, out: &Path, extra: &[&str]) -> Run {
    let dir = out.parent().unwrap();
    let cfg = dir.join(format!("{cmd}-{}.toml", out.file_name().unwrap().to_str().unwrap()));
    std::fs::write(&cfg, config).unwrap();
    let mut args = vec![
        "gp-spectrum".to_string(),
        cmd.to_string(),
        "--config".into(),
        cfg.display().to_string(),
        "--out".into(),
        out.display().to_string(),
    ];
    args.extend(extra.iter().map(|s| s.to_string()));
    let (mut stdout, mut stderr) = (Vec::new(), Vec::new());
    let code = run(args, &mut stdout, &mut stderr);
    Run {
        code,
        stdout: String::from_utf8(stdout).unwrap(),
        stderr: String::from_utf8(stderr).unwrap(),
    }
}

/// Data rows of a CSV file, split into fields, skipping comment and header lines.
fn rows(path: &Path) -> Vec<Vec<String>> {
    let text = std::fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# gp-spectrum v1"));
    lines
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn field(row: &[String], i: usize) -> f64 {
    row[i].parse().unwrap()
}

fn out_dir(tmp: &TempDir, name: &str) -> PathBuf {
    tmp.path().join(name)
}

const CONSTANT: &str = r#"
n_min = 1
n_max = 3
J = 0
[kernel]
family = "finite-list"
a = [1.0]
b = [0.0]
"#;

const TWO_TERM_N1: &str = r#"
n_min = 1
n_max = 1
J = 1
[kernel]
family = "finite-list"
a = [2.0, 1.0]
b = [0.0, 1.0]
"#;

#[test]
fn spectrum_constant_kernel_rows() {
    let tmp = TempDir::new().unwrap();
    let out = out_dir(&tmp, "c");
    let r = invoke("spectrum", CONSTANT, &out, &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rows = rows(&out.join("spectrum.csv"));
    assert_eq!(rows.len(), 6);
    for (i, row) in rows.iter().enumerate() {
        let n = (i / 2 + 1) as f64;
        let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
        assert_eq!(row[1], if sign > 0.0 { "+" } else { "-" });
        assert!(field(row, 2).abs() < 1e-12);
        assert!((field(row, 3) - sign * n).abs() < 1e-10);
    }
}

#[test]
fn spectrum_two_term_matches_cubic() {
    // roots of z^3 + z^2 + 3z + 2
    let expected = [
        (-0.715_225_238_435_090_4, 0.0),
        (-0.142_387_380_782_454_78, 1.666_147_573_612_059_7),
        (-0.142_387_380_782_454_78, -1.666_147_573_612_059_7),
    ];
    let tmp = TempDir::new().unwrap();
    let out = out_dir(&tmp, "t");
    let r = invoke("spectrum", TWO_TERM_N1, &out, &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rows = rows(&out.join("spectrum.csv"));
    assert_eq!(rows.len(), 3);
    for (row, (re, im)) in rows.iter().zip(expected) {
        assert!((field(row, 2) - re).abs() < 1e-10, "{row:?}");
        assert!((field(row, 3) - im).abs() < 1e-10, "{row:?}");
        assert!(field(row, 7) < 1e-8, "oracle distance {row:?}");
    }
}

#[test]
fn json_output_parses() {
    let tmp = TempDir::new().unwrap();
    let out = out_dir(&tmp, "j");
    let r = invoke("spectrum", TWO_TERM_N1, &out, &["--format", "json"]);
    assert_eq!(r.code, 0);
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("spectrum.json")).unwrap()).unwrap();
    assert_eq!(doc["records"].as_array().unwrap().len(), 3);
    assert_eq!(doc["version"], "gp-spectrum v1");
}

#[test]
fn divergent_power_law_is_a_config_error() {
    let tmp = TempDir::new().unwrap();
    let out = out_dir(&tmp, "g");
    let cfg = r#"
n_min = 1
n_max = 2
J = 0
[kernel]
family = "power-law"
M = 5
[kernel.params]
gamma = 1.0
beta = 1.0
"#;
    let r = invoke("spectrum", cfg, &out, &[]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("alpha_sq diverges"), "{}", r.stderr);
    assert!(!out.exists(), "no files on validation failure");
}

#[test]
fn unknown_keys_and_bad_ranges_are_rejected() {
    let tmp = TempDir::new().unwrap();
    let bogus = format!("{CONSTANT}\nbogus = 1\n");
    assert_eq!(invoke("spectrum", &bogus, &out_dir(&tmp, "u"), &[]).code, 1);
    let inverted = CONSTANT.replace("n_max = 3", "n_max = 0");
    assert_eq!(invoke("spectrum", &inverted, &out_dir(&tmp, "v"), &[]).code, 1);
    let too_many = CONSTANT.replace("J = 0", "J = 1");
    assert_eq!(invoke("spectrum", &too_many, &out_dir(&tmp, "w"), &[]).code, 1);
}

#[test]
fn verify_constant_kernel_passes() {
    let tmp = TempDir::new().unwrap();
    let out = out_dir(&tmp, "vc");
    let r = invoke("verify", CONSTANT, &out, &[]);
    assert_eq!(r.code, 0, "{}{}", r.stdout, r.stderr);
    assert!(!r.stdout.contains("FAIL"));
    assert!(r.stdout.contains("interlacing"));
}

#[test]
fn verify_two_term_up_to_twenty() {
    let tmp = TempDir::new().unwrap();
    let out = out_dir(&tmp, "vt");
    let cfg = TWO_TERM_N1.replace("n_max = 1", "n_max = 20");
    let r = invoke("verify", &cfg, &out, &[]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let claims = rows(&out.join("verify.csv"));
    for name in ["interlacing", "containment", "monotone_in_n", "left_half_plane", "oracle_equality", "pair_asymptotics"] {
        let row = claims.iter().find(|c| c[0] == name).unwrap();
        assert_eq!(row[1], "PASS", "{row:?}");
    }
}

#[test]
fn verify_loglog_marks_contour_claims_not_applicable() {
    let tmp = TempDir::new().unwrap();
    let out = out_dir(&tmp, "vl");
    let cfg = r#"
n_min = 1
n_max = 4
J = 3
[kernel]
family = "logarithmic"
M = 40
[kernel.params]
gamma = 2.0
"#;
    let r = invoke("verify", cfg, &out, &[]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let claims = rows(&out.join("verify.csv"));
    let winding = claims.iter().find(|c| c[0] == "winding_consistency").unwrap();
    assert_eq!(winding[1], "N/A");
    assert!(winding[3].contains("not applicable: gap condition unmet"));
    let evaluated = claims.iter().filter(|c| c[1] == "PASS").count();
    assert!(evaluated >= 5);
}

#[test]
fn simulate_constant_kernel_against_cosine() {
    let tmp = TempDir::new().unwrap();
    let out = out_dir(&tmp, "sc");
    let cfg = format!("{CONSTANT}\n[simulate]\nxi = [1.0]\nt_end = 6.283185307179586\nsamples = 100\n");
    let r = invoke("simulate", &cfg, &out, &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rows = rows(&out.join("trajectories.csv"));
    assert_eq!(rows.len(), 101);
    let worst = rows.iter().map(|r| (field(r, 1) - field(r, 2)).abs()).fold(0.0, f64::max);
    assert!(worst < 10.0 * 1e-9, "{worst}");
}

#[test]
fn simulate_two_term_decays_and_writes_field() {
    let tmp = TempDir::new().unwrap();
    let out = out_dir(&tmp, "st");
    let cfg = format!("{TWO_TERM_N1}\n[simulate]\nxi = [1.0, 0.0, 0.25]\nt_end = 20.0\nsamples = 50\nx_samples = [0.0, 1.0, 3.141592653589793]\n");
    let r = invoke("simulate", &cfg, &out, &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let traj = rows(&out.join("trajectories.csv"));
    assert!(field(traj.last().unwrap(), 1).abs() < 1.0);
    let field_rows = rows(&out.join("field.csv"));
    assert_eq!(field_rows.len(), 51);
    for row in &field_rows {
        assert!(field(row, 1).abs() < 1e-12 && field(row, 3).abs() < 1e-12);
    }
}

#[test]
fn simulate_zero_data_gives_zero_trajectories() {
    let tmp = TempDir::new().unwrap();
    let out = out_dir(&tmp, "sz");
    let cfg = format!("{TWO_TERM_N1}\n[simulate]\nxi = [0.0, 0.0]\nt_end = 5.0\nsamples = 20\n");
    let r = invoke("simulate", &cfg, &out, &[]);
    assert_eq!(r.code, 0);
    for row in rows(&out.join("trajectories.csv")) {
        assert!(row[1..].iter().all(|v| v.parse::<f64>().unwrap() == 0.0));
    }
}

#[test]
fn simulate_without_section_is_a_config_error() {
    let tmp = TempDir::new().unwrap();
    assert_eq!(invoke("simulate", CONSTANT, &out_dir(&tmp, "sn"), &[]).code, 1);
}

#[test]
fn sweep_two_term_decreases() {
    let tmp = TempDir::new().unwrap();
    let out = out_dir(&tmp, "sw");
    let cfg = TWO_TERM_N1.replace("n_min = 1", "n_min = 4").replace("n_max = 1", "n_max = 64") + "\n[sweep]\nj = 1\n";
    let r = invoke("sweep", &cfg, &out, &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let rows = rows(&out.join("sweep.csv"));
    let ns: Vec<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(ns, ["4", "8", "16", "32", "64"]);
    for w in rows.windows(2) {
        assert!(field(&w[1], 1).abs() < field(&w[0], 1).abs());
        assert!(field(&w[1], 2) < field(&w[0], 2));
    }
}

#[test]
fn sweep_constant_kernel_has_zero_pair_gap() {
    let tmp = TempDir::new().unwrap();
    let out = out_dir(&tmp, "swc");
    let cfg = CONSTANT.replace("n_max = 3", "n_max = 16");
    let r = invoke("sweep", &cfg, &out, &[]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    for row in rows(&out.join("sweep.csv")) {
        assert!(field(&row, 1).abs() < 1e-15);
    }
}

#[test]
fn sweep_needs_three_doublings() {
    let tmp = TempDir::new().unwrap();
    let out = out_dir(&tmp, "sw1");
    let r = invoke("sweep", TWO_TERM_N1, &out, &[]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("insufficient doublings"));
    assert!(!out.exists());
}

#[test]
fn output_is_independent_of_job_count() {
    let tmp = TempDir::new().unwrap();
    let cfg = TWO_TERM_N1.replace("n_max = 1", "n_max = 30");
    let serial = out_dir(&tmp, "p1");
    let parallel = out_dir(&tmp, "p4");
    assert_eq!(invoke("spectrum", &cfg, &serial, &[]).code, 0);
    assert_eq!(invoke("spectrum", &cfg, &parallel, &["--jobs", "4"]).code, 0);
    assert_eq!(
        std::fs::read(serial.join("spectrum.csv")).unwrap(),
        std::fs::read(parallel.join("spectrum.csv")).unwrap()
    );
}
