use std::path::PathBuf;
use std::process::{Command, Output};

fn polyhom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polyhom"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_str(stdout(o).trim()).unwrap()
}

fn scratch_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("polyhom-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn projective_grotzsch_json() {
    let o = polyhom(&["projective", "--named", "grotzsch", "--json"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with(r#"{"status":"projective""#));
    let v = json(&o);
    assert_eq!(v["pp_definition"]["template"], "walk(len=3)");
}

#[test]
fn json_output_is_deterministic() {
    let args = ["classify-cores", "--n", "7", "--jobs", "2", "--json"];
    let a = polyhom(&args);
    let b = polyhom(&["classify-cores", "--n", "7", "--jobs", "1", "--json"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 11);
}

#[test]
fn classify_six() {
    let o = polyhom(&["classify-cores", "--n", "6"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("2 core(s) on 6 vertices"));
    assert!(text.contains("C5+1") && text.contains("K6"));
    assert!(text.contains("matches expected list: true"));
}

#[test]
fn n8_needs_flag() {
    let o = polyhom(&["classify-cores", "--n", "8"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn hom_k1_identity() {
    let o = polyhom(&["hom", "--named", "k1", "--named", "k1", "--json"]);
    assert!(o.status.success());
    assert_eq!(json(&o)["map"], serde_json::json!([0]));
}

#[test]
fn hom_with_pins_and_graph6() {
    // C5 -> K3 with two adjacent vertices pinned to the same colour
    let o = polyhom(&["hom", "Dhc", "Bw", "--pin", "0=1", "--pin", "1=2", "--json"]);
    assert!(o.status.success());
    let map = json(&o)["map"].clone();
    assert_eq!(map[0], 1);
    assert_eq!(map[1], 2);
    let bad = polyhom(&["hom", "Dhc", "Bw", "--pin", "0=1", "--pin", "1=1"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn usage_and_input_errors_exit_two() {
    assert_eq!(polyhom(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(polyhom(&["is-core", "not graph6!"]).status.code(), Some(2));
    assert_eq!(polyhom(&["is-core", "--named", "nonsense"]).status.code(), Some(2));
    assert_eq!(polyhom(&["poly", "--named", "k3"]).status.code(), Some(2));
}

#[test]
fn edge_list_input() {
    let path = scratch_file("c6.txt", "6 6\n0 1\n1 2\n2 3\n3 4\n4 5\n5 0\n");
    let o = polyhom(&["core", path.to_str().unwrap(), "--json"]);
    assert!(o.status.success());
    assert_eq!(json(&o)["order"], 2);
    let og = polyhom(&["odd-girth", path.to_str().unwrap(), "--json"]);
    assert_eq!(json(&og)["odd_girth"], "infinite");
}

#[test]
fn structural_queries() {
    assert_eq!(json(&polyhom(&["is-core", "--named", "g1", "--json"]))["is_core"], true);
    assert_eq!(json(&polyhom(&["odd-girth", "--named", "petersen", "--json"]))["odd_girth"], 5);
    let semi = json(&polyhom(&["semiproj", "--named", "g4", "--arity", "3", "--json"]));
    assert_eq!(semi["found"], false);
    assert_eq!(semi["arity_bound"], 3);
    let poly = json(&polyhom(&["poly", "--named", "c5", "--arity", "2", "--idempotent", "--json"]));
    assert_eq!(poly["found"], false);
    let dec = json(&polyhom(&["decompose", "--named", "c7", "--json"]));
    assert_eq!(dec["decomposable"], false);
}

#[test]
fn ppdef_templates() {
    let o = polyhom(&["ppdef", "--template", "complement_cycle", "--param", "3", "--named", "cc7", "--json"]);
    assert!(o.status.success());
    assert_eq!(json(&o)["equals_neq"], true);
    let bad = polyhom(&["ppdef", "--template", "odd_cycle", "--named", "c7"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn qfpp_and_wall_files() {
    let edges = scratch_file("c5-edges.rel", "5 2\n0 1\n1 0\n1 2\n2 1\n2 3\n3 2\n3 4\n4 3\n4 0\n0 4\n");
    let o = polyhom(&["qfpp", edges.to_str().unwrap(), "--named", "c5", "--json"]);
    assert_eq!(json(&o)["qfpp_definable"], true);
    let neq_k3 = scratch_file("neq3.rel", "3 2\n0 1\n1 0\n0 2\n2 0\n1 2\n2 1\n");
    let o = polyhom(&["qfpp", neq_k3.to_str().unwrap(), "Bo", "--json"]);
    assert_eq!(json(&o)["qfpp_definable"], false);

    let rel = scratch_file("r.rel", "5 2\n0 0\n0 2\n");
    let wall = scratch_file("m.mat", "2 2\n0 0\n0 2\n");
    let o = polyhom(&["wall", wall.to_str().unwrap(), rel.to_str().unwrap(), "--named", "c5", "--json"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["is_wall"], true);
    assert_eq!(v["triviality_witness"], 0);
}

#[test]
fn conjecture_up_to_six() {
    let o = polyhom(&["verify-conjecture", "--n", "6", "--json"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["counterexamples"], 0);
    assert_eq!(v["cases"].as_array().unwrap().len(), 6);
}
