use std::fs;
use std::path::Path;
use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_maxwell-lab");

const SMALL_RUN: &str = r#"
[evolve]
t_final = 40
probes = [10.0]

[evolve.metric]
family = "schwarzschild"
mass = 1.0

[evolve.mode]
l = 1
s = 1
parity = "odd"

[evolve.grid]
rstar_min = -80.0
rstar_max = 160.0
n = 1201

[evolve.data]
center = 30.0

[evolve.null_lines]
u0 = [5.0]
"#;

fn lab(args: &[&str], root: &Path) -> std::process::Output {
    Command::new(BIN).args(args).env("MAXWELL_LAB_OUT", root).output().unwrap()
}

fn strip_timestamp(text: &str) -> String {
    text.lines().filter(|l| !l.contains("generated_unix")).collect::<Vec<_>>().join("\n")
}

#[test]
fn evolve_is_reproducible_and_emits_resolved_config() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("run.toml");
    fs::write(&cfg, SMALL_RUN).unwrap();
    let cfg = cfg.to_str().unwrap();
    let mut snapshots = Vec::new();
    for name in ["a", "b"] {
        let out = tmp.path().join(name);
        let res = lab(&["--config", cfg, "--out", out.to_str().unwrap(), "evolve"], tmp.path());
        assert!(res.status.success(), "{}", String::from_utf8_lossy(&res.stderr));
        let mut files: Vec<_> = fs::read_dir(&out).unwrap().map(|e| e.unwrap().path()).collect();
        files.sort();
        let names: Vec<_> = files.iter().map(|p| p.file_name().unwrap().to_string_lossy().into_owned()).collect();
        assert!(names.contains(&"probe_rstar_10.csv".to_string()));
        assert!(names.contains(&"outgoing_u_5.csv".to_string()));
        assert!(names.contains(&"resolved_config.toml".to_string()));
        let contents: Vec<String> = files
            .iter()
            .filter(|p| p.extension().unwrap() != "toml")
            .map(|p| strip_timestamp(&fs::read_to_string(p).unwrap()))
            .collect();
        snapshots.push(contents);
    }
    assert_eq!(snapshots[0], snapshots[1]);

    let resolved = tmp.path().join("a").join("resolved_config.toml");
    let text = fs::read_to_string(&resolved).unwrap();
    assert!(text.contains("spatial_order") && text.contains("sigma"));
    let rerun = lab(&["--config", resolved.to_str().unwrap(), "--out", tmp.path().join("c").to_str().unwrap(), "evolve"], tmp.path());
    assert!(rerun.status.success());
    let probe = |d: &str| fs::read_to_string(tmp.path().join(d).join("probe_rstar_10.csv")).unwrap();
    assert_eq!(probe("a"), probe("c"));
}

#[test]
fn bad_configuration_exits_with_two() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("bad.toml");
    fs::write(&cfg, "[evolve]\nt_final = 1\nwobble = 2\n").unwrap();
    let res = lab(&["--config", cfg.to_str().unwrap(), "evolve"], tmp.path());
    assert_eq!(res.status.code(), Some(2));
    let res = lab(&["report"], tmp.path());
    assert_eq!(res.status.code(), Some(2));
}

#[test]
fn numeric_failure_exits_with_three() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("run.toml");
    fs::write(&cfg, SMALL_RUN).unwrap();
    let cfg = cfg.to_str().unwrap();
    assert!(lab(&["--config", cfg, "evolve"], tmp.path()).status.success());
    // A 40-unit run is far too short for a tail fit.
    let res = lab(&["--config", cfg, "fit"], tmp.path());
    assert_eq!(res.status.code(), Some(3), "{}", String::from_utf8_lossy(&res.stderr));
}

#[test]
fn identities_feed_the_report() {
    let tmp = tempfile::tempdir().unwrap();
    let res = lab(&["identities"], tmp.path());
    assert!(res.status.success());
    let ids = tmp.path().join("identities");
    assert!(ids.join("identities.csv").exists());
    let res = lab(&["report", ids.to_str().unwrap()], tmp.path());
    assert!(res.status.success());
    let stdout = String::from_utf8_lossy(&res.stdout);
    assert!(stdout.contains("double_star") && stdout.contains("PASS"));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("report").join("report.json")).unwrap()).unwrap();
    assert!(json["rows"].as_array().unwrap().len() >= 10);
}
