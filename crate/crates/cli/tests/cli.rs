use std::process::{Command, Output};

fn mindc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mindc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn field<'a>(stdout: &'a str, key: &str) -> &'a str {
    stdout
        .lines()
        .find_map(|l| l.strip_prefix(key))
        .map(str::trim)
        .unwrap_or_else(|| panic!("no {key} in {stdout}"))
}

#[test]
fn exported_instance_solves_like_the_generated_one() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("box4.json");
    let file = file.to_str().unwrap();
    let out = mindc(&["export", "--problem", "pack-box", "--n", "4", "--out", file]);
    assert!(out.status.success());

    let gen = mindc(&[
        "solve",
        "--problem",
        "pack-box",
        "--n",
        "4",
        "--setting",
        "heur_0_pair_1",
    ]);
    let load = mindc(&["solve", "--instance", file, "--setting", "heur_0_pair_1"]);
    assert!(gen.status.success() && load.status.success());
    let (g, l) = (
        String::from_utf8(gen.stdout).unwrap(),
        String::from_utf8(load.stdout).unwrap(),
    );
    for key in ["status", "primal", "dual", "nodes"] {
        assert_eq!(field(&g, key), field(&l, key), "{key}");
    }
    let r: f64 = field(&g, "primal").parse().unwrap();
    assert!((r - 0.25).abs() < 1e-3, "{r}");
}

#[test]
fn solve_writes_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("one.csv");
    let out = mindc(&[
        "solve",
        "--problem",
        "kissing",
        "--n",
        "5",
        "--rotsym",
        "1",
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let rows = mindc_cli::read_records(&csv).unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0].setting_name, "heur_0_pair_0_rotsym");
    assert!(rows[0].solved());
}

#[test]
fn bad_input_is_rejected() {
    let out = mindc(&["solve", "--problem", "kissing", "--cutfreq", "5"]);
    assert!(!out.status.success());

    let out = mindc(&["solve", "--instance", "/nonexistent/x.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));

    let out = mindc(&[
        "solve",
        "--problem",
        "kissing",
        "--setting",
        "heur_2_pair_0",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
