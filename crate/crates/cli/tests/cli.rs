use std::path::{Path, PathBuf};

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use ktower::dga::random::{random_algebra, random_bimodule, random_dga, random_field};
use ktower_cli::io::{AlgebraFile, BimoduleFile, DgaFile};
use ktower_cli::{run, Outcome};

fn data(rel: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(rel).display().to_string()
}

fn ktower(args: &[&str]) -> Outcome {
    let mut argv = vec!["ktower".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    run(argv)
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ktower-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn dual_f2() -> [String; 4] {
    [
        "--algebra".into(),
        data("algebras/dual_f2.json"),
        "--bimodule".into(),
        data("bimodules/dual_f2_regular.json"),
    ]
}

#[test]
fn classify_shipped_example() {
    let p = dual_f2();
    let out = ktower(&["--format", "machine", "classify", &p[0], &p[1], &p[2], &p[3], "--n", "1"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let doc: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(doc["command"], "classify");
    assert_eq!(doc["report"]["orbit_count"], 3);
    assert_eq!(doc["report"]["hh_dim"], 2);
}

#[test]
fn malformed_triple_names_the_witness() {
    let dir = scratch("malformed");
    let path = dir.join("bad.json");
    let text = r#"{"field":{"p":2},"dim":2,"basis":["1","x"],"unit":[1,0],
        "product":[[0,0,0,1],[0,1,1,1],[1,0,1,1],[1,1,5,1]]}"#;
    std::fs::write(&path, text).unwrap();
    let out = ktower(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("#3 (1, 1, 5)"), "{}", out.stderr);

    let text = r#"{"field":{"p":2},"dim":2,"basis":["1","x"],"unit":[1,0],
        "product":[[0,0,0,1],[0,1,1,1],[1,0,1,1],[1,1,0,1]]}"#;
    std::fs::write(&path, text).unwrap();
    let out = ktower(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.code, 0, "{}", out.stderr);

    let text = r#"{"field":{"p":2},"dim":2,"basis":["1","x"],"unit":[0,1],
        "product":[[0,0,0,1],[0,1,1,1],[1,0,1,1]]}"#;
    std::fs::write(&path, text).unwrap();
    let out = ktower(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("unit"), "{}", out.stderr);

    std::fs::write(&path, "{\"field\": {\"p\": 2}, \"dim\": ").unwrap();
    let out = ktower(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("line 1"), "{}", out.stderr);
    let _ = std::fs::remove_dir_all(dir);
}

#[test]
fn oracle_cap_is_a_resource_error() {
    let p = dual_f2();
    let out = ktower(&["oracle", &p[0], &p[1], &p[2], &p[3], "--n", "1", "--cap", "10"]);
    assert_eq!(out.code, 2, "{}", out.stderr);
    assert!(out.stderr.contains("cap"));
    let out = ktower(&["oracle", &p[0], &p[1], &p[2], &p[3], "--n", "1", "--cap", "100000"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("3 extension classes"));
}

#[test]
fn argument_errors() {
    assert_eq!(ktower(&["--help"]).code, 0);
    assert_eq!(ktower(&["--version"]).code, 0);
    assert_eq!(ktower(&[]).code, 1);
    assert_eq!(ktower(&["classify", "--n", "1"]).code, 1);
    assert_eq!(ktower(&["bm-check"]).code, 1);
    let out = ktower(&["validate", "/nonexistent/file.json"]);
    assert_eq!(out.code, 1);
    assert!(out.stderr.contains("cannot read"));
}

#[test]
fn window_limits_are_resource_errors() {
    let out = ktower(&["bm-check", "--problem", &data("problems/two_free_f2.json"), "--window", "0"]);
    assert_eq!(out.code, 2, "{}", out.stderr);
}

#[test]
fn class_files_carry_their_context() {
    let dir = scratch("context");
    let p = dual_f2();
    let out = ktower(&["hh", &p[0], &p[1], &p[2], &p[3], "--degree", "3", "--emit-classes", dir.to_str().unwrap()]);
    assert_eq!(out.code, 0);
    let class = dir.join("class_0.json");
    let out = ktower(&["realize", &p[0], &p[1], &p[2], &p[3], "--n", "1", "--class", class.to_str().unwrap()]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    // the same class against another bimodule is rejected
    let out = ktower(&[
        "realize",
        "--algebra",
        &data("algebras/dual_f2.json"),
        "--bimodule",
        &data("bimodules/dual_f2_augmentation.json"),
        "--n",
        "1",
        "--class",
        class.to_str().unwrap(),
    ]);
    assert_eq!(out.code, 1, "{}", out.stderr);
    // and so is the wrong level
    let out = ktower(&["realize", &p[0], &p[1], &p[2], &p[3], "--n", "2", "--class", class.to_str().unwrap()]);
    assert_eq!(out.code, 1);
    let _ = std::fs::remove_dir_all(dir);
}

#[test]
fn realize_writes_a_valid_model() {
    let dir = scratch("model");
    let p = dual_f2();
    let model = dir.join("model.json");
    let out = ktower(&[
        "realize",
        &p[0],
        &p[1],
        &p[2],
        &p[3],
        "--n",
        "1",
        "--class",
        &data("classes/dual_f2_regular_n1/class_1.json"),
        "--out",
        model.to_str().unwrap(),
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let out = ktower(&["--format", "machine", "validate", model.to_str().unwrap()]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let doc: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(doc["report"]["files"][0]["kind"], "model");
    let _ = std::fs::remove_dir_all(dir);
}

#[test]
fn truncate_round_trips_through_files() {
    let dir = scratch("truncate");
    let out_path = dir.join("t.json");
    let out = ktower(&[
        "--format",
        "machine",
        "truncate",
        "--dga",
        &data("dgas/massey_f2.json"),
        "--n",
        "0",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let doc: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(doc["report"]["homology_after"], serde_json::json!([3, 0]));
    assert_eq!(ktower(&["validate", out_path.to_str().unwrap()]).code, 0);
    let out = ktower(&["kinv", "--dga", out_path.to_str().unwrap(), "--n", "1"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("zero"));
    let _ = std::fs::remove_dir_all(dir);
}

#[test]
fn k_invariants_of_shipped_dgas() {
    let out = ktower(&["kinv", "--dga", &data("dgas/trivial_ext_dual_f3_n2.json"), "--n", "2"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("zero"));
    let out = ktower(&["--format", "machine", "kinv", "--dga", &data("dgas/massey_f2.json"), "--n", "1"]);
    assert_eq!(out.code, 0);
    let doc: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(doc["report"]["zero"], false);
    let reversed = ktower(&["kinv", "--dga", &data("dgas/massey_f2.json"), "--n", "1", "--convention", "reversed"]);
    assert_eq!(reversed.code, 0);
    // homology outside degrees 0 and n is an input error
    let out = ktower(&["kinv", "--dga", &data("semifree/tensor_x1_f2.json"), "--n", "1"]);
    assert_eq!(out.code, 1);
}

#[test]
fn every_shipped_example_validates() {
    let out = ktower(&["--format", "machine", "validate", &data("manifest.json")]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let doc: Value = serde_json::from_str(&out.stdout).unwrap();
    let files = doc["report"]["files"].as_array().unwrap();
    assert!(files.len() >= 25);
    assert!(files.iter().all(|f| f["valid"] == true));
}

#[test]
fn random_campaign_table() {
    let out = ktower(&["--format", "machine", "bm-check", "--random", "6", "--seed", "11"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let doc: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(doc["report"]["instances"], 6);
    assert_eq!(doc["report"]["violations"], 0);
    let seeds: Vec<u64> = doc["report"]["rows"].as_array().unwrap().iter().map(|r| r["seed"].as_u64().unwrap()).collect();
    assert_eq!(seeds, (11..17).collect::<Vec<_>>());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn algebra_and_bimodule_files_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let field = random_field(&mut rng);
        let a = random_algebra(&mut rng, field);
        let m = random_bimodule(&mut rng, &a);
        let af: AlgebraFile = serde_json::from_str(&serde_json::to_string(&AlgebraFile::of(&a)).unwrap()).unwrap();
        let a2 = af.build().unwrap();
        prop_assert_eq!(a2.fingerprint(), a.fingerprint());
        let bf: BimoduleFile = serde_json::from_str(&serde_json::to_string(&BimoduleFile::of(&m)).unwrap()).unwrap();
        prop_assert_eq!(bf.build(&a2).unwrap().fingerprint(), m.fingerprint());
    }

    #[test]
    fn dga_files_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let field = random_field(&mut rng);
        let c = random_dga(&mut rng, field, 12, 5);
        let f: DgaFile = serde_json::from_str(&serde_json::to_string(&DgaFile::of(&c)).unwrap()).unwrap();
        prop_assert_eq!(f.build().unwrap().fingerprint(), c.fingerprint());
    }
}
