use super::*;

fn json_of(args: &[&str]) -> Value {
    let cli = Cli::try_parse_from(std::iter::once("foundry").chain(args.iter().copied())).unwrap();
    match execute(cli.command).unwrap().0 {
        Output::Json(v) => v,
        Output::Text(t) => panic!("unexpected text {t}"),
    }
}

fn code(args: &[&str]) -> i32 {
    run(std::iter::once("foundry").chain(args.iter().copied()))
}

#[test]
fn compute_t8() {
    let v = json_of(&["compute", "--matroid", "T8", "--identify"]);
    assert_eq!(v["identification"]["name"], "F3");
}

#[test]
fn compute_q6_by_diagram() {
    let v = json_of(&["compute", "--matroid", "Q6", "--method", "diagram", "--cross-check", "--identify"]);
    assert_eq!(v["identification"]["name"], "V");
    let checks = v["cross_checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["isomorphic"] == true));
}

#[test]
fn hom_and_aut() {
    assert_eq!(json_of(&["hom", "--from", "U", "--to", "F2"]), json!(0));
    assert_eq!(json_of(&["hom", "--from", "U", "--to", "F4"]), json!(2));
    assert_eq!(json_of(&["hom", "--from", "U", "--to", "F3", "--list"]).as_array().unwrap().len(), 1);
    let v = json_of(&["aut", "--pasture", "V"]);
    assert_eq!(v["count"], 120);
    let gens = v["generators"].as_array().unwrap().len();
    assert!((1..=6).contains(&gens));
}

#[test]
fn representable_row() {
    let v = json_of(&["representable", "--matroid", "F7minus", "--over", "F2,F3,F4"]);
    assert_eq!(v["row"], json!([false, true, false]));
}

#[test]
fn pasture_outputs_round_trip() {
    let v = json_of(&["tensor", "F2", "F3"]);
    let p = Pasture::from_json(&v).unwrap();
    assert_eq!(crate::pasture::identify(&p).unwrap().name(), Some("K"));
    let dir = std::env::temp_dir().join(format!("foundry-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let rel = dir.join("rel.json");
    std::fs::write(&rel, r#"{"add_relations":[[{"sign":1,"exps":{"x":1}},{"sign":1,"exps":{}},"0"]]}"#).unwrap();
    let q = json_of(&["quotient", "D", "--relations", rel.to_str().unwrap()]);
    assert_eq!(crate::pasture::identify(&Pasture::from_json(&q).unwrap()).unwrap().name(), Some("F3"));
    let diag = dir.join("diagram.json");
    std::fs::write(
        &diag,
        r#"{"nodes":["H","H"],"edges":[
            {"source":0,"target":1,"images":{"z":{"sign":1,"exps":{"z":1}}}},
            {"source":0,"target":1,"images":{"z":{"sign":1,"exps":{"z":-1}}}}]}"#,
    )
    .unwrap();
    let c = json_of(&["colimit", "--diagram", diag.to_str().unwrap()]);
    assert_eq!(crate::pasture::identify(&Pasture::from_json(&c).unwrap()).unwrap().name(), Some("F3"));
    let out = dir.join("out.json");
    assert_eq!(code(&["catalog", "--list", "matroids", "--out", out.to_str().unwrap()]), 0);
    let listed: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(listed["matroids"].as_array().unwrap().iter().any(|x| x == "T8"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["hom", "--from", "U"]), 1);
    assert_eq!(code(&["compute", "--matroid", "no-such-matroid"]), 1);
    assert_eq!(code(&["compute", "--matroid", "C5", "--method", "diagram3"]), 2);
    assert_eq!(code(&["aut", "--pasture", "regular"]), 0);
}
