use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use compgraph::io::{parse_graph, read_records};
use compgraph::{figure2_pair, graph_invariant, Backend};

const FIG1_LEFT: &str = r#"{"n":5,"k":3,"colors":[1,2,1,3,3],"edges":[[1,2],[1,3],[1,4],[2,3],[3,5],[4,5]]}"#;
const FIG1_MIDDLE: &str = r#"{"n":5,"k":3,"colors":[1,2,3,1,3],"edges":[[1,2],[1,3],[1,4],[2,4],[3,5],[4,5]]}"#;

fn compgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_compgraph"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn hash_figure1() {
    let dir = tempfile::tempdir().unwrap();
    let left = write(dir.path(), "left.json", FIG1_LEFT);
    let middle = write(dir.path(), "middle.json", FIG1_MIDDLE);
    for backend in ["md5", "concat"] {
        let a = compgraph(&["hash", s(&left), "--backend", backend]);
        let b = compgraph(&["hash", s(&middle), "--backend", backend]);
        let again = compgraph(&["hash", s(&left), "--backend", backend]);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(stdout(&a), stdout(&b));
        assert_eq!(stdout(&a), stdout(&again));
    }
    let md5 = stdout(&compgraph(&["hash", s(&left)]));
    assert_eq!(md5.trim_end().len(), 32);
    let expected = graph_invariant(&parse_graph(FIG1_LEFT, false).unwrap(), Backend::Md5);
    assert_eq!(md5, format!("{expected}\n"));
}

#[test]
fn hash_rejects_reversed_edge_unless_normalized() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(
        dir.path(),
        "rev.json",
        r#"{"n":3,"k":1,"colors":[1,1,1],"edges":[[1,3],[3,2]]}"#,
    );
    let out = compgraph(&["hash", s(&file)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("edge order violation"));

    let normalized = compgraph(&["hash", s(&file), "--normalize"]);
    assert_eq!(normalized.status.code(), Some(0));
    let path = write(dir.path(), "path.json", r#"{"n":3,"k":1,"colors":[1,1,1],"edges":[[1,2],[2,3]]}"#);
    assert_eq!(stdout(&normalized), stdout(&compgraph(&["hash", s(&path)])));
}

#[test]
fn hash_reports_path_condition_and_parse_errors() {
    let dir = tempfile::tempdir().unwrap();
    let stranded = write(dir.path(), "s.json", r#"{"n":3,"k":1,"colors":[1,1,1],"edges":[[1,3]]}"#);
    let out = compgraph(&["hash", s(&stranded)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("path condition violation: vertex 2"));

    let garbage = write(dir.path(), "g.json", "not json");
    assert_eq!(compgraph(&["hash", s(&garbage)]).status.code(), Some(2));
    assert_eq!(compgraph(&["hash", "/nonexistent/file.json"]).status.code(), Some(2));
    assert_eq!(compgraph(&["hash", s(&garbage), "--backend", "sha1"]).status.code(), Some(2));
}

#[test]
fn iso_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let left = write(dir.path(), "left.json", FIG1_LEFT);
    let middle = write(dir.path(), "middle.json", FIG1_MIDDLE);
    let out = compgraph(&["iso", s(&left), s(&middle)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "1 2 4 3 5\n");

    let pair = figure2_pair(1, 2).unwrap();
    let a = write(dir.path(), "a.json", &compgraph::io::graph_to_json(&pair.left));
    let b = write(dir.path(), "b.json", &compgraph::io::graph_to_json(&pair.right));
    let out = compgraph(&["iso", s(&a), s(&b)]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout(&out), "non-isomorphic\n");

    let n = 13;
    let edges: Vec<String> = (1..n).map(|i| format!("[{},{}]", i, i + 1)).collect();
    let big = format!(r#"{{"n":{n},"k":1,"colors":[{}],"edges":[{}]}}"#, vec!["1"; n].join(","), edges.join(","));
    let big = write(dir.path(), "big.json", &big);
    assert_eq!(compgraph(&["iso", s(&big), s(&big)]).status.code(), Some(3));
}

#[test]
fn enumerate_writes_records_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out_file = dir.path().join("three.jsonl");
    let out = compgraph(&[
        "enumerate", "--max-vertices", "3", "--max-edges", "3", "--colors", "1", "--out", s(&out_file),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "n=2: 1\nn=3: 2\ntotal: 3\n");
    let text = fs::read_to_string(&out_file).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[1].contains(r#""n":3,"colors":[1,1,1],"edges":[[1,2],[2,3]]"#));
    assert_eq!(lines[3], r#"{"summary":{"per_n":{"2":1,"3":2},"total":3}}"#);

    let (records, summary) = read_records(text.as_bytes()).unwrap();
    assert_eq!(summary.unwrap().total, 3);
    for r in records {
        let g = r.to_graph(1).unwrap();
        assert_eq!(graph_invariant(&g, Backend::Md5).to_hex(), r.hash);
    }

    let out = compgraph(&[
        "enumerate", "--max-vertices", "2", "--max-edges", "1", "--colors", "1", "--out", s(&out_file),
    ]);
    assert!(stdout(&out).ends_with("total: 1\n"));
}

#[test]
fn enumerate_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.jsonl"), dir.path().join("b.jsonl"));
    let args = ["enumerate", "--max-vertices", "5", "--max-edges", "9", "--colors", "3", "--reserved-io", "--out"];
    compgraph(&[&args[..], &[s(&a)]].concat());
    compgraph(&[&args[..], &[s(&b), "--parallel"]].concat());
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn enumerate_rejects_bad_flags() {
    let dir = tempfile::tempdir().unwrap();
    let out_file = dir.path().join("x.jsonl");
    for args in [
        vec!["--max-vertices", "1", "--colors", "1"],
        vec!["--max-vertices", "3", "--colors", "0"],
        vec!["--max-vertices", "3", "--max-edges", "0", "--colors", "1"],
        vec!["--max-vertices", "three", "--colors", "1"],
    ] {
        let out = compgraph(&[&["enumerate"][..], &args, &["--out", s(&out_file)]].concat());
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out_file.exists());
    }
    let out = compgraph(&["enumerate", "--max-vertices", "12", "--colors", "1", "--out", s(&out_file)]);
    assert_eq!(out.status.code(), Some(3));

    let missing_dir = dir.path().join("no/such/dir/out.jsonl");
    let out = compgraph(&["enumerate", "--max-vertices", "3", "--colors", "1", "--out", s(&missing_dir)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!missing_dir.exists());
}

#[test]
fn verify_exit_codes() {
    let out = compgraph(&["verify", "--max-vertices", "2", "--colors", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("all buckets pure"));

    let out = compgraph(&["verify", "--max-vertices", "5", "--max-edges", "9", "--colors", "3", "--reserved-io"]);
    assert_eq!(out.status.code(), Some(0));

    let dir = tempfile::tempdir().unwrap();
    let pair = figure2_pair(1, 2).unwrap();
    let a = write(dir.path(), "a.json", &compgraph::io::graph_to_json(&pair.left));
    let b = write(dir.path(), "b.json", &compgraph::io::graph_to_json(&pair.right));
    let out = compgraph(&[
        "verify", "--max-vertices", "3", "--colors", "1", "--inject", s(&a), "--inject", s(&b),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains(&format!("false merge under digest {}", pair.digest)));
    assert!(text.contains(&compgraph::io::graph_to_json(&pair.right)));

    let out = compgraph(&["verify", "--max-vertices", "13", "--colors", "1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn adversarial_commands() {
    let out = compgraph(&["adversarial", "--figure2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("vertices: 10, edges: 16"));
    assert!(text.contains("digests equal: true"));
    assert!(text.contains("non-isomorphic"));

    let dir = tempfile::tempdir().unwrap();
    let out = compgraph(&["adversarial", "--degree", "2", "--size", "4", "--out-dir", s(dir.path())]);
    assert_eq!(out.status.code(), Some(0));
    let left = parse_graph(&fs::read_to_string(dir.path().join("left.json")).unwrap(), false).unwrap();
    let right = parse_graph(&fs::read_to_string(dir.path().join("right.json")).unwrap(), false).unwrap();
    let figure = figure2_pair(1, 2).unwrap();
    assert!(compgraph::are_isomorphic(&left, &figure.left).unwrap().is_isomorphic());
    assert!(compgraph::are_isomorphic(&right, &figure.right).unwrap().is_isomorphic());

    let out = compgraph(&["adversarial", "--degree", "2", "--size", "3"]);
    assert_eq!(out.status.code(), Some(1));

    let out = compgraph(&["adversarial", "--degree", "2", "--size", "6"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("component sizes differ ([12] vs [6, 6])"));

    assert_eq!(compgraph(&["adversarial"]).status.code(), Some(2));
    assert_eq!(compgraph(&["adversarial", "--degree", "1", "--size", "6"]).status.code(), Some(2));
}

#[test]
fn written_graphs_round_trip() {
    let pair = figure2_pair(2, 2).unwrap();
    for g in [pair.left, pair.right] {
        assert_eq!(parse_graph(&compgraph::io::graph_to_json(&g), false).unwrap(), g);
    }
}
