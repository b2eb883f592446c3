use std::path::Path;
use std::process::Command as Proc;

use helixforge::config::Geometry;
use helixforge::{execute, parse_config, Command, Overrides, Report, Status, Window};
use helixforge_core::grid::HostKind;
use serde_json::Value;

const Z30: &str = r#"
[group]
backend = "cyclic"
n = 30

[geometry]
kind = "quadratic"
L = { degree = 3, sum = 0 }
psi = 1

[points]
p = 2
q = 5
"#;

fn examples() -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples")
}

fn run_bin(args: &[&str]) -> (i32, String, String) {
    let out = Proc::new(env!("CARGO_BIN_EXE_helixforge")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn run_text(cmd: Command, text: &str) -> Report {
    let cfg = parse_config(text, cmd, Overrides::default()).unwrap();
    execute(cmd, &cfg, false)
}

fn validator() -> jsonschema::Validator {
    let schema: Value = serde_json::from_str(helixforge::report::SCHEMA).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

fn assert_valid(report: &Report) {
    let json = report.to_json();
    let value: Value = serde_json::from_str(&json).unwrap();
    let v = validator();
    let errors: Vec<String> = v.iter_errors(&value).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{}: {errors:?}", report.command);
    let reparsed = Report::from_json(&json).unwrap();
    assert_eq!(&reparsed, report);
    assert_eq!(reparsed.to_json(), json);
    let names: Vec<&str> = report.checks.iter().map(|c| c.name.as_str()).collect();
    let mut sorted = names.clone();
    sorted.sort();
    assert_eq!(names, sorted);
}

#[test]
fn minimal_config_fills_defaults() {
    let cfg = parse_config(Z30, Command::VerifyHelix, Overrides::default()).unwrap();
    let c = &cfg.config;
    assert_eq!(c.seed, 0);
    assert_eq!(c.windows.helix, Window(-10, 10));
    assert_eq!(c.windows.triviality, Window(-10, 10));
    assert_eq!(c.windows.dims, Window(0, 200));
    assert_eq!(c.grid.host, Some(HostKind::Quadratic));
    assert_eq!(c.random.instances, 0);
    assert_eq!(c.caps.degree, 60);
    assert!(matches!(c.geometry, Some(Geometry::Quadratic { .. })));
    assert_eq!(cfg.group().order().unwrap(), 30);
}

#[test]
fn overrides_replace_the_main_window_and_seed() {
    let o = Overrides { window: Some(Window(-3, 4)), seed: Some(99) };
    let cfg = parse_config(Z30, Command::Roundtrip, o).unwrap();
    assert_eq!((cfg.config.windows.helix, cfg.config.seed), (Window(-3, 4), 99));
    let err = parse_config("", Command::Dims, o).unwrap_err();
    assert!(err.message.contains("windows.dims"), "{err}");
    let cfg = parse_config("", Command::Dims, Overrides { window: Some(Window(0, 9)), seed: None }).unwrap();
    assert_eq!((cfg.config.windows.dims, cfg.config.windows.helix), (Window(0, 9), Window(-10, 10)));
    let cfg = parse_config("", Command::Grid, o).unwrap();
    assert_eq!(cfg.config.grid.b, Window(-3, 4));
}

#[test]
fn cremona_with_equal_points_names_the_orbit_rule() {
    let text = Z30.replace("q = 5", "q = 2\nr = 9");
    let err = parse_config(&text, Command::Cremona, Overrides::default()).unwrap_err();
    assert!(err.message.contains("tau-orbit rule"), "{err}");
    // q is the later point of the offending pair and sits on line 13
    assert_eq!(err.line, Some(13));
}

#[test]
fn blowup_rejects_the_shared_orbit_eagerly_but_roundtrip_reports_it() {
    let err = parse_config(Z30, Command::Blowup, Overrides::default()).unwrap_err();
    assert!(err.to_string().contains("tau-orbit rule"));
    let report = run_text(Command::Roundtrip, Z30);
    let id = report.checks.iter().find(|c| c.name == "roundtrip.identity").unwrap();
    let notes = id.details["notes"].to_string();
    assert!(notes.contains("share a tau-orbit"), "{notes}");
}

#[test]
fn singular_curve_is_rejected() {
    // 4a^3 + 27b^2 = 4(-27) + 27*4 = 0 over every field
    let text = "[group]\nbackend = \"weierstrass\"\np = 7\na = -3\nb = 2\n\n[geometry]\nkind = \"quadratic\"\nL = { degree = 3, sum = \"infinity\" }\npsi = \"infinity\"\n";
    let err = parse_config(text, Command::VerifyHelix, Overrides::default()).unwrap_err();
    assert!(err.message.contains("singular"), "{err}");
    assert_eq!(err.line, Some(1));
}

#[test]
fn syntax_and_schema_errors_are_line_anchored() {
    let err = parse_config("seed = 1\n[group\n", Command::Dims, Overrides::default()).unwrap_err();
    assert_eq!(err.line, Some(2), "{err}");
    let err = parse_config("[group]\nbackend = \"hexagonal\"\nn = 3\n", Command::VerifyHelix, Overrides::default()).unwrap_err();
    assert!(err.line.is_some_and(|l| l <= 2), "{err}");
    assert!(err.message.contains("hexagonal"), "{err}");
    let err = parse_config("[windows]\nhelix = [4, -4]\n", Command::Dims, Overrides::default()).unwrap_err();
    assert_eq!(err.line, Some(2));
    let err = parse_config("[windows]\ncolor = 3\n", Command::Dims, Overrides::default()).unwrap_err();
    assert!(err.message.contains("color"), "{err}");
    let text = Z30.replace("degree = 3", "degree = 2");
    let err = parse_config(&text, Command::VerifyHelix, Overrides::default()).unwrap_err();
    assert_eq!(err.line, Some(8), "{err}");
    let err = parse_config("[ibasis]\nn = [0, 90]\n", Command::IbasisCheck, Overrides::default()).unwrap_err();
    assert!(err.message.contains("caps.degree"), "{err}");
}

#[test]
fn missing_sections_and_points_are_reported() {
    let err = parse_config("", Command::VerifyHelix, Overrides::default()).unwrap_err();
    assert!(err.message.contains("[group]"));
    let text = Z30.replace("q = 5", "");
    let err = parse_config(&text, Command::Roundtrip, Overrides::default()).unwrap_err();
    assert!(err.message.contains("points.q"));
    let err = parse_config(Z30, Command::Blowdown, Overrides::default()).unwrap_err();
    assert!(err.message.contains("cubic"));
}

#[test]
fn worked_roundtrip_passes_with_exit_zero() {
    let report = run_text(Command::Roundtrip, Z30);
    assert!(report.checks.iter().all(|c| c.status == Status::Pass), "{report:?}");
    let id = &report.checks.iter().find(|c| c.name == "roundtrip.identity").unwrap().details;
    assert_eq!(id["inverse_points"], serde_json::json!([20]));
    assert_eq!(id["recovered_points"], serde_json::json!([2, 5]));
    let triv = &report.checks.iter().find(|c| c.name == "roundtrip.triviality").unwrap().details;
    assert_eq!(triv["cells_checked"], 441);
    assert_eq!(report.exit_code(), 0);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("z30.toml");
    std::fs::write(&path, Z30).unwrap();
    let (code, stdout, _) = run_bin(&["roundtrip", "--config", path.to_str().unwrap(), "--no-timing"]);
    assert_eq!(code, 0);
    assert_eq!(Report::from_json(&stdout).unwrap(), report);
}

#[test]
fn dims_table_satisfies_the_identity() {
    let report = run_text(Command::Dims, "");
    let check = &report.checks[0];
    assert_eq!(check.status, Status::Pass);
    let rows = check.details["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 201);
    for row in rows {
        let i = row["i"].as_u64().unwrap();
        let h = row["h"].as_u64().unwrap();
        assert_eq!(h, (i + 1) * (i + 2) / 2);
        assert_eq!(h - row["colength"].as_u64().unwrap(), row["h_prime"].as_u64().unwrap());
        assert_eq!(row["h_minus_colength"], row["h_prime"]);
    }
    assert_eq!(rows[2]["h_prime"], 4);
    assert_eq!(rows[3]["h_prime"], 6);
}

#[test]
fn cubic_grid_far_left_is_conjectural_and_does_not_fail() {
    let report = run_text(Command::Grid, "[grid]\nhost = \"cubic\"\na = [-3, -3]\nb = [8, 8]\n");
    let cell = report.checks.iter().find(|c| c.name == "grid.cell[a=-3,b=8]").unwrap();
    assert_eq!(cell.status, Status::Conjectural);
    // degree-2 monomials in three variables
    assert_eq!(cell.details["dim"], 6);
    assert_eq!(report.exit_code(), 0);
    assert_valid(&report);
}

#[test]
fn missing_roots_fail_the_run() {
    let report = run_text(Command::Invert, Z30);
    let spec = report.checks.iter().find(|c| c.name == "inverse.spec").unwrap();
    assert_eq!(spec.status, Status::Error);
    assert_eq!(report.checks.iter().find(|c| c.name == "inverse.point").unwrap().status, Status::Pass);
    assert_eq!(report.exit_code(), 1);
}

#[test]
fn every_command_emits_schema_valid_round_tripping_reports() {
    let cases = [
        ("roundtrip_z30.toml", vec![Command::VerifyHelix, Command::Invert, Command::Roundtrip]),
        ("blowdown_z40.toml", vec![Command::VerifyHelix, Command::Blowdown, Command::Invert, Command::Roundtrip]),
        ("cremona_curve.toml", vec![Command::Cremona, Command::Blowup, Command::Invert, Command::Roundtrip]),
        ("grid_cubic.toml", vec![Command::Dims, Command::Grid, Command::IbasisCheck]),
    ];
    for (file, cmds) in cases {
        let text = std::fs::read_to_string(examples().join(file)).unwrap();
        for cmd in cmds {
            let cfg = parse_config(&text, cmd, Overrides::default()).unwrap();
            let report = execute(cmd, &cfg, true);
            assert_valid(&report);
            if cmd != Command::Invert || file != "roundtrip_z30.toml" {
                assert_eq!(report.exit_code(), 0, "{file} {cmd}: {report:?}");
            }
        }
    }
}

#[test]
fn same_config_and_seed_give_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = examples().join("blowdown_z40.toml");
    for cmd in ["roundtrip", "verify-helix", "grid"] {
        let mut outputs = Vec::new();
        for k in 0..2 {
            let out = dir.path().join(format!("{cmd}-{k}.json"));
            let (code, stdout, stderr) = run_bin(&[
                cmd, "--config", cfg.to_str().unwrap(), "--seed", "5", "--window", "-7:7",
                "--no-timing", "--out", out.to_str().unwrap(),
            ]);
            assert_eq!(code, 0, "{stderr}");
            assert!(stdout.is_empty());
            outputs.push(std::fs::read(&out).unwrap());
        }
        assert_eq!(outputs[0], outputs[1], "{cmd}");
        let report = Report::from_json(std::str::from_utf8(&outputs[0]).unwrap()).unwrap();
        assert_eq!(report.config["seed"], 5);
        assert_valid(&report);
    }
    let a = run_bin(&["roundtrip", "--config", cfg.to_str().unwrap(), "--seed", "5", "--no-timing"]).1;
    let b = run_bin(&["roundtrip", "--config", cfg.to_str().unwrap(), "--seed", "6", "--no-timing"]).1;
    assert_ne!(a, b);
}

#[test]
fn config_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, Z30).unwrap();
    let (code, stdout, stderr) = run_bin(&["cremona", "--config", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stdout.is_empty());
    assert!(stderr.contains("points.r"), "{stderr}");
    let (code, _, stderr) = run_bin(&["dims", "--config", path.to_str().unwrap(), "--window", "3"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("a:b"), "{stderr}");
}
