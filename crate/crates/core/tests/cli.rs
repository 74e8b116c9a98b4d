use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use symcomp::mesh::import_mesh;

fn symcomp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_symcomp")).args(args).output().unwrap()
}

fn config(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("configs")
        .join(format!("{name}.json"))
        .display()
        .to_string()
}

fn write_config(dir: &Path, json: &str) -> String {
    let p = dir.join("case.json");
    std::fs::write(&p, json).unwrap();
    p.display().to_string()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn disk_run_passes_and_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out: PathBuf = dir.path().join("disk");
    let o = symcomp(&["run", &config("disk_equality"), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    for csv in ["solution.csv", "distribution.csv", "rearrangement.csv", "profiles.csv", "checks.csv", "convergence.csv"] {
        let text = std::fs::read_to_string(out.join(csv)).unwrap();
        let mut lines = text.lines();
        let header = lines.next().unwrap();
        assert!(header.chars().any(char::is_alphabetic), "{csv} has no header");
        assert!(lines.next().is_some(), "{csv} has no data rows");
    }
    for svg in ["distribution.svg", "profiles.svg", "convergence.svg"] {
        let text = std::fs::read_to_string(out.join(svg)).unwrap();
        assert!(text.starts_with("<?xml"));
        assert_eq!(text.matches("<svg").count(), 1);
        assert!(text.trim_end().ends_with("</svg>"));
        assert_eq!(text.matches('<').count(), text.matches('>').count());
    }
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["schema"], "symcomp-report v1");
    assert_eq!(report["verdict"], "pass");
    assert!(report["checks"].as_array().unwrap().len() >= 10);
    import_mesh(&std::fs::read_to_string(out.join("mesh.txt")).unwrap()).unwrap();
}

#[test]
fn negative_beta_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"name": "bad", "manifold": {"kind": "plane"}, "domain": {"shape": "disk", "radius": 1.0},
            "source": {"type": "constant", "value": 1.0}, "beta": {"type": "constant", "value": -1.0}, "h": 0.1}"#,
    );
    let o = symcomp(&["run", &cfg]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("beta.value"), "{}", stderr(&o));
}

#[test]
fn parse_errors_name_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"name": "bad", "manifold": {"kind": "plane"}, "domain": {"shape": "disk", "radius": "one"},
            "source": {"type": "constant", "value": 1.0}, "beta": {"type": "constant", "value": 1.0}, "h": 0.1}"#,
    );
    let o = symcomp(&["run", &cfg]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("domain"), "{}", stderr(&o));
}

#[test]
fn tight_tolerance_reports_a_violation() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("tight");
    let o = symcomp(&["run", &config("disk_equality"), "--out", out.to_str().unwrap(), "--tol-scale", "1e-9"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    let report = std::fs::read_to_string(out.join("report.json")).unwrap();
    assert!(report.contains("\"violation\""));
}

#[test]
fn convergence_needs_two_refinements() {
    let o = symcomp(&["convergence", &config("disk_equality"), "--levels", "0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("at least 2"), "{}", stderr(&o));
}

#[test]
fn convergence_reports_orders() {
    let dir = tempfile::tempdir().unwrap();
    let o = symcomp(&["convergence", &config("disk_equality"), "--levels", "2", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let table: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("convergence.json")).unwrap()).unwrap();
    let orders = table["orders"].as_array().unwrap();
    let oracle = orders.iter().find(|o| o["quantity"] == "oracle_linf").unwrap();
    for v in oracle["orders"].as_array().unwrap() {
        assert!(v.as_f64().unwrap() >= 1.8, "{oracle}");
    }
    let l1 = orders.iter().find(|o| o["quantity"] == "l1").unwrap();
    for v in l1["orders"].as_array().unwrap() {
        assert!(v.as_f64().unwrap() >= 1.0, "{l1}");
    }
}

#[test]
fn mesh_subcommand_exports_an_importable_mesh() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("mesh.txt");
    let o = symcomp(&["mesh", &config("lshape_two_arc"), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let (mesh, beta) = import_mesh(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(beta.len(), mesh.boundary().len());
    assert!(beta.values().iter().any(|&b| b == 4.0));
    assert!(beta.values().iter().any(|&b| b == 1.0));
}

#[test]
fn thread_count_does_not_change_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let mut reports = Vec::new();
    for threads in ["1", "4"] {
        let out = dir.path().join(threads);
        let o = Command::new(env!("CARGO_BIN_EXE_symcomp"))
            .args(["run", &config("square_variable_source"), "--out", out.to_str().unwrap()])
            .env("SYMCOMP_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        reports.push(std::fs::read(out.join("report.json")).unwrap());
    }
    assert_eq!(reports[0], reports[1]);
}
