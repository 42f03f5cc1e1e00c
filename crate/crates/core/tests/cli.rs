use std::path::Path;
use std::process::Command;

use shapeflow::experiment::{self, Command as Cmd, ExperimentSpec};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_shapeflow"))
}

fn files(dir: &Path) -> Vec<String> {
    let mut v: Vec<String> = std::fs::read_dir(dir)
        .map(|it| it.filter_map(|e| e.ok()).map(|e| e.file_name().to_string_lossy().into_owned()).collect())
        .unwrap_or_default();
    v.sort();
    v
}

#[test]
fn eigen_disk_reports_the_oracle_comparison() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("eigen");
    let o = bin().args(["eigen", "--shape", "disk", "--bc", "dirichlet", "--out"]).arg(&out).output().unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stdout).contains("disk oracle 5.78318596"));
    assert_eq!(files(&out), ["eigen.csv", "mesh.off"]);
    let csv = std::fs::read_to_string(out.join("eigen.csv")).unwrap();
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    let lam: f64 = row[4].parse().unwrap();
    assert!((lam - 5.7832).abs() / 5.7832 < 0.01);
}

#[test]
fn bmi_square_against_rotated_square_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bmi.csv");
    let o = bin().args(["bmi", "--k0", "square", "--k1", "square-rot45", "--out"]).arg(&out).output().unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("t,lambda,strong_margin,weak_margin\n"));
    assert_eq!(csv.lines().count(), 10);
    assert!(dir.path().join("bmi.json").exists());
}

#[test]
fn malformed_config_exits_one_without_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "command = eigen\nshape = disk\nmesh_h 0.04\n").unwrap();
    let out = dir.path().join("out");
    let o = bin().args(["eigen", "--config"]).arg(&cfg).arg("--out").arg(&out).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
    assert!(!out.exists());

    std::fs::write(&cfg, "command = eigen\nshape = disk\nmesh_h = coarse\n").unwrap();
    let o = bin().args(["eigen", "--config"]).arg(&cfg).arg("--out").arg(&out).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(!out.exists());
}

#[test]
fn config_values_are_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("e.cfg");
    std::fs::write(&cfg, "# disk, Robin by default\nshape = disk\nbc = robin\nbeta = 0.5\n").unwrap();
    let out = dir.path().join("out");
    let o = bin().args(["eigen", "--config"]).arg(&cfg).args(["--beta=10", "--out"]).arg(&out).output().unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(out.join("eigen.csv")).unwrap();
    assert!(csv.lines().nth(1).unwrap().starts_with("disk,robin,10,"));
}

#[test]
fn negative_beta_flow_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin().args(["flow", "run", "--init", "disk", "--beta=-1", "--out"]).arg(dir.path().join("f")).output().unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("beta < 0"));
}

#[test]
fn reruns_give_byte_identical_csv() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = bin()
            .args(["variation", "--shape", "perturbed-ball(3,0.1)", "--field", "random:4", "--mesh_factor", "0.03", "--seed", "9", "--out"])
            .arg(&out)
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        std::fs::read(out.join("variation.csv")).unwrap()
    };
    assert_eq!(run("a"), run("b"));
}

#[test]
fn flow_runs_are_deterministic_in_memory() {
    let mut spec = ExperimentSpec::new(Cmd::Flow);
    for (k, v) in [("init", "perturbed-ball(2,0.2)"), ("h", "0.05"), ("T", "0.1"), ("volume", "3.141592653589793"), ("max_evals", "200")] {
        spec.set(k, v).unwrap();
    }
    let a = experiment::run(&spec).unwrap();
    let b = experiment::run(&spec).unwrap();
    assert_eq!(a.artifacts, b.artifacts);
    assert_eq!(a.artifacts[0].name, "traj.json");
    assert!(a.artifacts[1].content.starts_with("step,t,phi,distance,evals,stagnated\n"));
}
