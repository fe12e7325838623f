use std::path::Path;
use std::process::{Command, Output};

use regfactor::experiment::{read_csv_report, Cell};
use regfactor::graphs::io::read_graphs;
use regfactor::graphs::Graph;

fn regfactor(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_regfactor"))
        .args(args)
        .env_remove("REGFACTOR_THREADS")
        .output()
        .expect("binary runs")
}

fn variance_csv(dir: &Path, name: &str, threads: &str) -> Vec<u8> {
    let out = dir.join(name);
    let o = regfactor(&[
        "variance-report",
        "--n-list",
        "12,16",
        "--d-rule",
        "half",
        "--shape",
        "C3",
        "--samples",
        "200",
        "--seed",
        "7",
        "--threads",
        threads,
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    std::fs::read(out).unwrap()
}

#[test]
fn variance_report_is_reproducible_across_runs_and_threads() {
    let dir = tempfile::tempdir().unwrap();
    let a = variance_csv(dir.path(), "a.csv", "1");
    let b = variance_csv(dir.path(), "b.csv", "1");
    let c = variance_csv(dir.path(), "c.csv", "3");
    assert_eq!(a, b);
    assert_eq!(a, c);

    let table = read_csv_report(a.as_slice()).unwrap();
    assert_eq!(table.len(), 2);
    let ratio = table.column("ratio").unwrap();
    for row in &table.rows {
        match row[ratio] {
            Cell::Float(r) => assert!(r > 0.0 && r.is_finite()),
            ref other => panic!("ratio cell {other:?}"),
        }
    }
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("a.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["records"], 2);
    assert_eq!(manifest["success"], true);
}

#[test]
fn enumerate_emits_every_graph() {
    let o = regfactor(&["enumerate", "--n", "6", "--d", "3"]);
    assert!(o.status.success());
    let graphs = read_graphs(o.stdout.as_slice()).unwrap();
    assert_eq!(graphs.len(), 70);
    assert!(graphs.iter().all(|g| g.is_regular(3)));
}

#[test]
fn factors_of_an_edge_list_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    let mut text = Vec::new();
    regfactor::graphs::io::write_graph(&mut text, &Graph::cycle(8).complement()).unwrap();
    std::fs::write(&path, text).unwrap();
    let o = regfactor(&["factors", "--graph", path.to_str().unwrap(), "--d", "5", "--format", "json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rows.as_array().unwrap().len(), 4);
    assert_eq!(rows[0]["shape"], "0-1 0-2 1-2");
}

#[test]
fn exit_codes() {
    // n d odd: configuration error
    assert_eq!(regfactor(&["enumerate", "--n", "7", "--d", "3"]).status.code(), Some(2));
    assert_eq!(regfactor(&["reduce", "--shape", "0-1 1-x"]).status.code(), Some(2));
    let o = regfactor(&["proofcheck", "--lemma", "2.1", "--trials", "2000", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stdout).contains("exp-estimate"));
}

#[test]
fn reduce_prints_the_basis_expansion() {
    let o = regfactor(&["reduce", "--shape", "P4"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("0-1 0-2 1-2"), "{text}");
}
