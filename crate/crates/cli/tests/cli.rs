use std::path::PathBuf;
use std::process::{Command, Output};

use tempfile::TempDir;

fn tia(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tia")).args(args).env_remove("TIA_THREADS").output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, content: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, content).unwrap();
    path
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

const K_HAT: &str = r#"{"vertices": [[0,0,0],[1,0,0],[0,1,0],[0,0,1]]}"#;

fn sliver_json(h: f64, alpha: f64) -> String {
    let z = h.powf(alpha);
    format!(r#"{{"vertices": [[{h},0,0],[{m},0,0],[0,{m},{z}],[0,{h},{z}]]}}"#, m = -h)
}

#[test]
fn analyze_reference_element() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "k.json", K_HAT);
    let out = tia(&["analyze", path.to_str().unwrap()]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((report["h_K"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-14);
    assert_eq!(report["facets"].as_array().unwrap().len(), 4);
}

#[test]
fn analyze_sliver_reports_large_projected_radius() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "s.json", &sliver_json(0.1, 2.5));
    let out = tia(&["analyze", path.to_str().unwrap()]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let (r_k, r_sphere) = (report["R_K"].as_f64().unwrap(), report["R_sphere"].as_f64().unwrap());
    assert!((r_sphere - 0.1).abs() < 1e-3);
    // R_K grows like h^(2 - alpha) while R_sphere shrinks like h
    assert!(r_k > r_sphere);
    assert!((r_k / 0.1f64.powf(-0.5) - 0.25).abs() < 0.01);
}

#[test]
fn analyze_exit_codes() {
    let dir = TempDir::new().unwrap();
    let flat = write(&dir, "flat.json", r#"{"vertices": [[0,0,0],[1,0,0],[0,1,0],[1,1,0]]}"#);
    let out = tia(&["analyze", flat.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(String::from_utf8(out.stderr).unwrap().lines().count(), 1);
    let broken = write(&dir, "broken.json", "{\"vertices\": [[0,0,0]");
    assert_eq!(tia(&["analyze", broken.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(tia(&["analyze", "/nonexistent/k.json"]).status.code(), Some(2));
}

#[test]
fn mesh_audit_flags_slivers() {
    let dir = TempDir::new().unwrap();
    let h: f64 = 0.01;
    let z = h.powf(2.8);
    let mesh = format!(
        r#"{{"vertices": [[0,0,0],[1,0,0],[0,1,0],[0,0,1],[{h},0,0],[{m},0,0],[0,{m},{z}],[0,{h},{z}],[2,2,2]],
            "tets": [[0,1,2,3],[4,5,6,7],[0,1,2,8]]}}"#,
        m = -h
    );
    let path = write(&dir, "mesh.json", &mesh);
    let out = tia(&["mesh-audit", path.to_str().unwrap()]);
    assert!(out.status.success());
    let rows: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0]["sliver_flag"], false);
    assert_eq!(rows[1]["sliver_flag"], true);
    assert_eq!(rows[2]["degenerate"], false);

    let out = tia(&["mesh-audit", path.to_str().unwrap(), "--format", "csv"]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "index,h_K,rho_K,R_sphere,R_K,R_K/h_K,sliver_flag,degenerate");
    assert_eq!(lines.count(), 3);
}

#[test]
fn mesh_audit_degenerate_and_empty() {
    let dir = TempDir::new().unwrap();
    let mesh = r#"{"vertices": [[0,0,0],[1,0,0],[0,1,0],[1,1,0],[0,0,1]], "tets": [[0,1,2,3],[0,1,2,4]]}"#;
    let path = write(&dir, "mesh.json", mesh);
    let out = tia(&["mesh-audit", path.to_str().unwrap()]);
    assert!(out.status.success());
    let rows: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(rows[0]["degenerate"], true);
    assert!(rows[0]["h_K"].is_null());
    assert_eq!(rows[1]["degenerate"], false);

    let empty = write(&dir, "empty.json", r#"{"vertices": [], "tets": []}"#);
    let out = tia(&["mesh-audit", empty.to_str().unwrap(), "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 1);

    let bad = write(&dir, "bad.json", r#"{"vertices": [[0,0,0]], "tets": [[0,1,2,3]]}"#);
    assert_eq!(tia(&["mesh-audit", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn interp_error_record() {
    let dir = TempDir::new().unwrap();
    let k = write(&dir, "k.json", K_HAT);
    let f = write(&dir, "f.json", r#"{"terms": [{"exp": [2,0,0], "coef": 1.0}, {"exp": [0,1,1], "coef": -2.0}]}"#);
    let out = tia(&["interp-error", k.to_str().unwrap(), f.to_str().unwrap(), "--k", "1", "--m", "0", "--p", "2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let rec: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(rec["p"], "2");
    assert!(rec["error_seminorm"].as_f64().unwrap() > 0.0);
    assert!(rec["ratio_projected"].as_f64().unwrap() > 0.0);
    let bad = tia(&["interp-error", k.to_str().unwrap(), f.to_str().unwrap(), "--k", "1", "--m", "1", "--p", "2"]);
    assert_eq!(bad.status.code(), Some(4));
}

#[test]
fn sweep_writes_csv_and_summary() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("sweep.csv");
    let out = tia(&[
        "sweep",
        "--family",
        "sliver",
        "--alpha",
        "2.5",
        "--h-grid",
        "0.2,0.1,0.05",
        "--k",
        "1",
        "--m",
        "1",
        "--p",
        "inf",
        "--seed",
        "3",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout(&out).lines().count(), 4);
    let csv = std::fs::read_to_string(&out_path).unwrap();
    assert!(csv.starts_with(
        "family,kind_param,h_param,k,m,p,function_id,h_K,rho_K,R_sphere,R_K,error_seminorm,data_seminorm,ratio_projected,ratio_naive\n"
    ));
    assert_eq!(csv.lines().count(), 1 + 3 * 27);
}

#[test]
fn sweep_is_deterministic_across_thread_counts() {
    let args = ["sweep", "--family", "squeezed", "--b-grid", "1,4,16", "--k", "2", "--m", "0", "--p", "2"];
    let one = Command::new(env!("CARGO_BIN_EXE_tia")).args(args).env("TIA_THREADS", "1").output().unwrap();
    let many = Command::new(env!("CARGO_BIN_EXE_tia")).args(args).arg("--threads").arg("3").output().unwrap();
    assert!(one.status.success() && many.status.success());
    assert_eq!(one.stdout, many.stdout);
    assert!(!one.stdout.is_empty());
}

#[test]
fn sweep_rejects_inadmissible_exponent() {
    let out = tia(&["sweep", "--family", "sliver", "--k", "1", "--m", "1", "--p", "2"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8(out.stderr).unwrap().contains("requires p > 2"));
}

#[test]
fn verify_suites() {
    let out = tia(&["verify", "--suite", "interp"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("polynomial reproduction") && text.contains("basis cardinality"));
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 5);
    assert_eq!(tia(&["verify", "--suite", "everything"]).status.code(), Some(2));
}
