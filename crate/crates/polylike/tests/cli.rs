use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use polylike::reports::{Report, OUT_DIR_ENV};

fn scratch_dir(name: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("polylike-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&d);
    std::fs::create_dir_all(&d).unwrap();
    d
}

fn run(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polylike")).args(args).current_dir(cwd).env_remove(OUT_DIR_ENV).output().unwrap()
}

fn report(path: &Path) -> Report {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn bounds_csv_is_deterministic() {
    let d = scratch_dir("bounds");
    let once = || {
        assert_eq!(run(&["bounds", "--out-dir", "."], &d).status.code(), Some(0));
        (std::fs::read(d.join("bounds.csv")).unwrap(), report(&d.join("bounds.json")).deterministic_json().unwrap())
    };
    let (csv_a, json_a) = once();
    let (csv_b, json_b) = once();
    assert_eq!(csv_a, csv_b);
    assert_eq!(json_a, json_b);
    let text = String::from_utf8(csv_a).unwrap();
    assert_eq!(text.lines().count(), 1 + 4 * 3 + 4);
    assert!(text.lines().any(|l| l == "k_star,2,0.625,,1.1937129433613969"));
}

#[test]
fn output_directory_from_environment() {
    let d = scratch_dir("env");
    let target = d.join("from-env");
    let out = Command::new(env!("CARGO_BIN_EXE_polylike"))
        .args(["geometry", "--format", "json"])
        .current_dir(&d)
        .env(OUT_DIR_ENV, &target)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(target.join("geometry.json").exists());
    assert!(!target.join("geometry_spiral.svg").exists());

    // the flag wins over the environment
    let flag = d.join("from-flag");
    let out = Command::new(env!("CARGO_BIN_EXE_polylike"))
        .args(["geometry", "--out-dir", flag.to_str().unwrap()])
        .current_dir(&d)
        .env(OUT_DIR_ENV, &target)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(flag.join("geometry_spiral.svg").exists());
}

#[test]
fn default_output_directory() {
    let d = scratch_dir("default");
    assert_eq!(run(&["bounds", "--format", "csv"], &d).status.code(), Some(0));
    assert!(d.join("polylike-out/bounds.csv").exists());
    assert!(!d.join("polylike-out/bounds.json").exists());
}

#[test]
fn configuration_errors_exit_with_one() {
    let d = scratch_dir("config");
    assert_eq!(run(&["bounds", "--theta", "2"], &d).status.code(), Some(1));
    assert_eq!(run(&["bounds", "--degree", "3"], &d).status.code(), Some(1));
    assert_eq!(run(&["bounds", "--config", "missing.toml"], &d).status.code(), Some(1));
    std::fs::write(d.join("bad.toml"), "degre = 4\n").unwrap();
    assert_eq!(run(&["bounds", "--config", "bad.toml"], &d).status.code(), Some(1));
    assert_eq!(run(&["analyze"], &d).status.code(), Some(1));
    assert_eq!(run(&["analyze", "--param-query", "golden:3"], &d).status.code(), Some(1));
}

#[test]
fn flags_override_config_file() {
    let d = scratch_dir("override");
    std::fs::write(d.join("run.toml"), "degree = 4\nc1 = -1.3\nlevels = 2\nout_dir = \"from-file\"\n").unwrap();
    assert_eq!(run(&["analyze", "--config", "run.toml"], &d).status.code(), Some(0));
    assert_eq!(report(&d.join("from-file/analyze.json")).config.degree, 4);
    assert_eq!(run(&["analyze", "--config", "run.toml", "--degree", "2", "--c1", "-1"], &d).status.code(), Some(0));
    let r = report(&d.join("from-file/analyze.json"));
    assert_eq!((r.config.degree, r.config.c1, r.config.levels), (2, Some(-1.0), 2));
}

#[test]
fn analyze_lists_cascade_periods() {
    let d = scratch_dir("analyze");
    assert_eq!(run(&["analyze", "--param-query", "cascade:6", "--out-dir", "."], &d).status.code(), Some(0));
    let r = report(&d.join("analyze.json"));
    let notes = &r.section("classification").unwrap().notes;
    assert!(notes["renormalization_periods"].starts_with("2,4,8,16,32"));
    assert_eq!(notes["kind"], "renormalizable");
}

#[test]
fn escaping_construct_reports_error_without_svg() {
    let d = scratch_dir("escape");
    let out = run(&["construct", "--c1", "0.5", "--out-dir", "."], &d);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&d.join("construct.json"));
    assert!(r.section("construct").unwrap().error.as_deref().unwrap().contains("escaped"));
    assert!(!std::fs::read_dir(&d).unwrap().any(|e| e.unwrap().path().extension().is_some_and(|x| x == "svg")));
}

#[test]
fn failed_check_exits_with_two() {
    let d = scratch_dir("fail");
    let out = run(
        &["construct", "--param-query", "fibonacci:8", "--variant", "general", "--levels", "1", "--out-dir", "."],
        &d,
    );
    assert_eq!(out.status.code(), Some(2));
    let r = report(&d.join("construct.json"));
    assert!(!r.all_passed());
}

/// `data-lo`/`data-hi` of the first element with the given class.
fn trace_endpoints(svg: &str, class: &str) -> (f64, f64) {
    let start = svg.find(&format!("class=\"{class}\"")).unwrap();
    let attr = |name: &str| -> f64 {
        let key = format!("{name}=\"");
        let i = start + svg[start..].find(&key).unwrap() + key.len();
        let j = i + svg[i..].find('"').unwrap();
        svg[i..j].parse().unwrap()
    };
    (attr("data-lo"), attr("data-hi"))
}

#[test]
fn svg_traces_match_report() {
    let d = scratch_dir("svg");
    let out =
        run(&["construct", "--param-query", "cascade:3", "--levels", "2", "--samples", "512", "--out-dir", "."], &d);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&d.join("construct.json"));
    for n in 1..=2 {
        let s = r.section(&format!("level {n}")).unwrap();
        let svg = std::fs::read_to_string(d.join(format!("construct_level{n}.svg"))).unwrap();
        assert!(svg.contains("viewBox=\"-2.5 -2.5 5 5\""));
        let (lo, hi) = trace_endpoints(&svg, "central-trace");
        assert_eq!(hi, s.values["central_right"].value);
        assert!((lo + hi).abs() <= 1e-12 * hi);
        let (olo, ohi) = trace_endpoints(&svg, "omega-trace");
        assert_eq!((olo, ohi), (s.values["omega_left"].value, s.values["omega_right"].value));
    }
}
