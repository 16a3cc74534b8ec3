use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_crndecomp"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("json report")
}

const EXAMPLE: &str = "X1 -> 2 X1 + X2\nX2 -> 2 X2 + X1\n";

#[test]
fn analyze_reports_deficiency_and_provenance() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("ex.crn"), EXAMPLE).unwrap();
    let v = json(&run(&["analyze", "ex.crn"], dir.path()));
    assert_eq!(v["report"]["structure"]["delta"], 1);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["config"]["seed"], 0);
    assert_eq!(v["config"]["command"]["command"], "analyze");
}

#[test]
fn decompose_linkage_is_incidence_independent() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("ex.crn"), EXAMPLE).unwrap();
    let v = json(&run(
        &["decompose", "ex.crn", "--blocks", "linkage"],
        dir.path(),
    ));
    assert_eq!(v["report"]["classification"]["incidence_independent"], true);
    assert_eq!(v["report"]["classification"]["independent"], false);

    fs::write(dir.path().join("d.json"), r#"{"blocks": [[0], [1]]}"#).unwrap();
    let v = json(&run(
        &["decompose", "ex.crn", "--blocks", "d.json"],
        dir.path(),
    ));
    assert_eq!(v["report"]["classification"]["k"], 2);
}

#[test]
fn realize_then_cover_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let model = r#"{"m": 2, "dependent": [true, true], "alpha": [1, 2], "beta": [3, 4],
                    "g": [[0, 0.5], [1, 0]], "h": [[1, 0], [0, 2]]}"#;
    fs::write(dir.path().join("model.json"), model).unwrap();
    let v = json(&run(
        &[
            "realize",
            "model.json",
            "--kind",
            "independent",
            "--network-out",
            "net.crn",
            "--kinetics-out",
            "kin.json",
        ],
        dir.path(),
    ));
    assert_eq!(v["report"]["ode_matches"], true);
    assert!(dir.path().join("kin.json").exists());
    let v = json(&run(&["cover", "net.crn"], dir.path()));
    assert_eq!(v["report"]["coverability"]["species_decomposable"], true);
}

#[test]
fn subnetwork_realization_is_a_covering() {
    let dir = tempfile::tempdir().unwrap();
    let model = r#"{"m": 3, "names": ["X", "Y", "Z"], "dependent": [true, true, true],
                    "alpha": [1, 1, 1], "beta": [1, 1, 1],
                    "g": [[0, 0, 0], [1, 0, 0], [0, 1, 0]], "h": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]}"#;
    let spec = r#"{"kind": "subnetwork", "rho": ["0", "X", "Y"], "pi": ["Y", "Z", "0"]}"#;
    fs::write(dir.path().join("model.json"), model).unwrap();
    fs::write(dir.path().join("spec.json"), spec).unwrap();
    let v = json(&run(
        &["realize", "model.json", "--spec", "spec.json"],
        dir.path(),
    ));
    assert_eq!(v["report"]["is_covering"], true);
    assert_eq!(v["report"]["structure"]["r"], 4);

    let out = run(
        &["realize", "model.json", "--kind", "subnetwork"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn generate_is_reproducible_and_checked() {
    let dir = tempfile::tempdir().unwrap();
    for kind in ["weakly-reversible", "species-decomposable", "c-decomposed"] {
        let a = run(&["generate", kind, "--seed", "5"], dir.path());
        let b = run(&["generate", kind, "--seed", "5"], dir.path());
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(json(&a)["report"]["post_check"]["holds"], true, "{kind}");
    }
    let out = run(
        &["generate", "c-decomposed", "--reactions", "61"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("size limit"));
}

#[test]
fn verify_equilibria_on_generated_network() {
    let dir = tempfile::tempdir().unwrap();
    let gen = run(
        &[
            "generate",
            "weakly-reversible",
            "--species",
            "3",
            "--reactions",
            "8",
            "--seed",
            "2",
            "--network-out",
            "n.crn",
            "--kinetics-out",
            "k.json",
            "--decomposition-out",
            "d.json",
        ],
        dir.path(),
    );
    assert!(gen.status.success());
    let args = [
        "verify-equilibria",
        "n.crn",
        "--kinetics",
        "k.json",
        "--blocks",
        "d.json",
        "--samples",
        "6",
    ];
    let a = run(&args, dir.path());
    let b = run(&args, dir.path());
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["report"]["equilibria"]["violations"], 0);
    assert!(!v["report"]["equilibria"]["whole_cb_witnesses"]
        .as_array()
        .unwrap()
        .is_empty());
}

#[test]
fn validation_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.crn"), "A -> B\nA -> -2 C\n").unwrap();
    let out = run(&["analyze", "bad.crn"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("negative"));
    let out = run(&["analyze", "missing.crn"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    fs::write(dir.path().join("ex.crn"), EXAMPLE).unwrap();
    let out = run(&["verify-equilibria", "ex.crn"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn text_format_and_output_file() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("ex.crn"), EXAMPLE).unwrap();
    let out = run(
        &["analyze", "ex.crn", "--format", "text", "--output", "r.txt"],
        dir.path(),
    );
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(dir.path().join("r.txt")).unwrap();
    assert!(text.contains("delta: 1"));
}
