use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use modlat::generators::{boolean, stacked};
use modlat::io::{parse_lattice, parse_mcs, serialize_lattice};
use modlat::iso::lattice_isomorphism;

fn modlat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modlat"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_dissect_glue_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let (lat, sys, sum) = (
        dir.path().join("l.lat"),
        dir.path().join("l.mcs"),
        dir.path().join("sum.lat"),
    );

    let out = modlat(&["gen", "stacked", "3", "2", "3"]);
    assert!(out.status.success());
    fs::write(&lat, out.stdout).unwrap();
    assert_eq!(
        parse_lattice(&fs::read_to_string(&lat).unwrap()).unwrap(),
        stacked(&[3, 2, 3])
    );

    let out = modlat(&["dissect", path(&lat)]);
    assert!(out.status.success());
    fs::write(&sys, out.stdout).unwrap();
    let (c, report) = parse_mcs(&fs::read_to_string(&sys).unwrap()).unwrap();
    assert!(report.is_valid() && report.is_monotone());
    assert_eq!(c.skeleton().size(), 3);

    let out = modlat(&["glue", path(&sys)]);
    assert!(out.status.success());
    fs::write(&sum, out.stdout).unwrap();
    let back = parse_lattice(&fs::read_to_string(&sum).unwrap()).unwrap();
    assert!(lattice_isomorphism(&back, &stacked(&[3, 2, 3])).is_some());

    assert_eq!(
        modlat(&["iso", path(&lat), path(&sum)]).status.code(),
        Some(0)
    );
    assert_eq!(modlat(&["roundtrip", path(&sys)]).status.code(), Some(0));
}

#[test]
fn check_reports_predicates() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("b.lat");
    fs::write(&f, serialize_lattice(&boolean(2))).unwrap();
    let out = modlat(&["check", path(&f)]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("distributive: yes"));
    assert!(text.contains("complemented: yes"));
}

#[test]
fn seeds_make_generation_reproducible() {
    let a = modlat(&["--seed", "7", "gen", "downset_random_poset", "5"]);
    let b = modlat(&["gen", "downset_random_poset", "5", "--seed", "7"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn size_limit_and_unknown_kind() {
    assert_eq!(
        modlat(&["--max-size", "8", "gen", "boolean", "4"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        modlat(&["gen", "boolean", "3", "--max-size", "8"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(modlat(&["gen", "hexagon", "3"]).status.code(), Some(2));
    assert_eq!(modlat(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn dot_with_blocks() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("s.lat");
    fs::write(&f, serialize_lattice(&stacked(&[3, 3]))).unwrap();
    let out = modlat(&["dot", path(&f), "--blocks"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("digraph"));
    assert_eq!(text.matches("subgraph cluster_").count(), 2);
}

#[test]
fn nonmonotone_system_checks_but_does_not_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("nm.mcs");
    let out = modlat(&["gen", "nonmonotone_example"]);
    fs::write(&f, out.stdout).unwrap();
    let out = modlat(&["check", path(&f)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("monotone: no"));
    assert_eq!(modlat(&["roundtrip", path(&f)]).status.code(), Some(1));
}
