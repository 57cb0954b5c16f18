use std::path::PathBuf;
use std::process::{Command, Output};

use associahedra::ainfinity::random::{random_algebra, template};
use associahedra_cli::json::{algebra_to_json, render, AnyChain};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_associahedra")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let o = run(&full);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("valid json")
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("associahedra-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn cell_counts() {
    assert_eq!(json(&["cells", "--complex", "K", "--n", "4"])["count"], 11);
    assert_eq!(json(&["cells", "--complex", "K", "--n", "5", "--dim", "0"])["count"], 14);
    // W_3: three vertices, two edges
    assert_eq!(json(&["cells", "--complex", "W", "--n", "3"])["count"], 5);
}

#[test]
fn diagonal_in_arity_3_has_two_terms() {
    let v = json(&["diagonal", "--n", "3"]);
    assert_eq!(v["terms"].as_array().unwrap().len(), 2);
    let direct = json(&["diagonal", "--n", "4", "--method", "direct"]);
    assert_eq!(direct, json(&["diagonal", "--n", "4", "--method", "composite"]));
}

#[test]
fn json_output_is_byte_stable_and_round_trips() {
    for args in [
        &["--format", "json", "boundary", "--complex", "K", "--cell", "(****)"][..],
        &["--format", "json", "boundary", "--complex", "W", "--cell", "(*(**)*)"][..],
        &["--format", "json", "q", "--n", "4"][..],
        &["--format", "json", "compose", "--complex", "K", "--left", "(***)", "--i", "2", "--right", "(**)"][..],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        let text = stdout(&a);
        assert_eq!(AnyChain::parse(&text).unwrap().render(), text, "{args:?}");
    }
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["verify", "--suite", "boundary", "--max-n", "6"]).status.code(), Some(0));
    assert_eq!(run(&["verify", "--suite", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(run(&["cells", "--complex", "K"]).status.code(), Some(2));
    assert_eq!(run(&["boundary", "--complex", "K", "--cell", "(*"]).status.code(), Some(2));
    assert_eq!(run(&["--format", "yaml", "q", "--n", "3"]).status.code(), Some(2));
    let bad = temp_file("bad.json", "{\"basis\": []}");
    let p = bad.to_str().unwrap();
    assert_eq!(run(&["tensor", "--a", p, "--b", p, "--max-arity", "3"]).status.code(), Some(2));
}

#[test]
fn verify_text_lines() {
    let o = run(&["verify", "--suite", "enumeration", "--max-n", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("PASS enumeration:")), "{text}");
    assert!(!text.contains("FAIL"));
}

#[test]
fn coassoc_search_is_certified() {
    let o = run(&["--format", "json", "coassoc-search"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(o.stdout, run(&["--format", "json", "coassoc-search"]).stdout);
}

#[test]
fn tensor_of_random_algebras_passes_the_check() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let a = temp_file("a.json", &render(&algebra_to_json(&random_algebra(&mut rng, 4))));
    let b = temp_file("b.json", &render(&algebra_to_json(&template(2, 4))));
    let (a, b) = (a.to_str().unwrap(), b.to_str().unwrap());
    let args = ["--format", "json", "tensor", "--a", a, "--b", b, "--max-arity", "4", "--check"];
    let o = run(&args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(o.stdout, run(&args).stdout);
}

#[test]
fn tensor_check_fails_on_a_non_associative_input() {
    // m_2(a, a) = b and m_2(a, b) = a, so (aa)a = 0 but a(aa) = a
    let bad = temp_file(
        "nonassoc.json",
        r#"{
  "basis": [{"name": "a", "degree": 0}, {"name": "b", "degree": 0}],
  "max_arity": 3,
  "ops": [
    {"arity": 1, "entries": []},
    {"arity": 2, "entries": [
      {"inputs": [0, 0], "output": 1, "coeff": "1"},
      {"inputs": [0, 1], "output": 0, "coeff": "1"}
    ]},
    {"arity": 3, "entries": []}
  ]
}"#,
    );
    let p = bad.to_str().unwrap();
    let o = run(&["tensor", "--a", p, "--b", p, "--max-arity", "3", "--check"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
    // without --check the product is still printed
    assert_eq!(run(&["tensor", "--a", p, "--b", p, "--max-arity", "3"]).status.code(), Some(0));
}
