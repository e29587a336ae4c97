use std::path::PathBuf;
use std::process::Command;

use bipara_core::exactalg::{parse_poly, Vars};
use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_str()
        .unwrap()
        .to_string()
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        assert_eq!(self.code, 0, "{}", self.stderr);
        serde_json::from_str(&self.stdout).unwrap()
    }
}

fn bipara_env(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_bipara"));
    cmd.args(args).env_remove("BIPARA_SEED");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().unwrap();
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn bipara(args: &[&str]) -> Run {
    bipara_env(args, &[])
}

fn vars_of(name: &str) -> Vars {
    let spec: Value = serde_json::from_str(&std::fs::read_to_string(fixture(name)).unwrap()).unwrap();
    match spec.get("variables") {
        Some(Value::Array(v)) => Vars::new(&v.iter().map(|s| s.as_str().unwrap()).collect::<Vec<_>>()),
        _ => Vars::empty(),
    }
}

/// Every polynomial string under `tensors` is in canonical form.
fn assert_round_trip(v: &Value, vars: &Vars) -> usize {
    match v {
        Value::String(s) => {
            let p = parse_poly(s, vars).unwrap_or_else(|e| panic!("{s}: {e}"));
            assert_eq!(&p.to_string(), s);
            1
        }
        Value::Object(map) => map
            .iter()
            .filter(|(k, _)| k.as_str() != "value")
            .map(|(_, c)| assert_round_trip(c, vars))
            .sum(),
        Value::Array(items) => items.iter().map(|c| assert_round_trip(c, vars)).sum(),
        _ => 0,
    }
}

#[test]
fn classify_heis() {
    let v = bipara(&["classify", &fixture("heis_n2.json")]).json();
    assert_eq!(v["triple_kind"], "biparacomplex-type");
    assert_eq!(v["integrable"], false);
    assert_eq!(v["flat"], false);
    assert_eq!(v["witness"], "T(X1,X2) = -Y1");
    assert_eq!(v["flatness"]["curvature"]["holds"], true);
}

#[test]
fn classify_flat_with_metric() {
    let v = bipara(&["classify", &fixture("flat_n2.json")]).json();
    assert_eq!(v["integrable"], true);
    assert_eq!(v["flat"], true);
    let class = &v["metric"]["class"];
    assert_eq!(class["eps1"], "+");
    assert_eq!(class["eps2"], "+");
    assert_eq!(class["signature"]["positive"], 4);
    assert_eq!(v["metric"]["at_seed_points"].as_array().unwrap().len(), 2);
    assert_eq!(v["metric"]["special"]["riemannian_product"]["holds"], true);
}

#[test]
fn difference_aff() {
    let v = bipara(&["difference", &fixture("aff_n2.json")]).json();
    let a = &v["tensors"]["difference"]["A(X1,X2)"];
    assert_eq!(a["value"], "-1/3*X1");
    assert_eq!(a["components"]["X1"], "-1/3");
    assert_eq!(v["verdicts"][0]["holds"], false);
    assert_eq!(v["verdicts"][1]["holds"], true);
    assert_eq!(v["verdicts"][2]["holds"], true);
}

#[test]
fn torsion_curvature_nijenhuis() {
    let heis = fixture("heis_n2.json");
    let v = bipara(&["torsion", &heis]).json();
    assert_eq!(v["tensors"]["torsion"]["T(X1,X2)"]["value"], "-Y1");
    let v = bipara(&["torsion", "--kind", "well-adapted", &fixture("aff_n2.json")]).json();
    assert_eq!(v["tensors"]["torsion"]["T'(X1,X2)"]["value"], "-1/3*X1");
    let v = bipara(&["curvature", &heis]).json();
    assert_eq!(v["verdicts"][0]["holds"], true);
    let v = bipara(&["nijenhuis", "--tensor", "F", &heis]).json();
    assert_eq!(v["tensors"]["nijenhuis"]["N_F(X1,X2)"]["value"], "4*Y1");
    let v = bipara(&["nijenhuis", "--tensor", "FP", &heis]).json();
    assert_eq!(v["tensors"]["nijenhuis"]["[F,P](X1,X2)"]["value"], "-2*X1");
}

#[test]
fn connection_tables() {
    let v = bipara(&[
        "connection",
        "--kind",
        "well-adapted",
        "--christoffels",
        &fixture("aff_n2.json"),
    ])
    .json();
    assert_eq!(v["tensors"]["connection"]["nabla_X1 X2"]["value"], "1/3*X1");
    assert_eq!(v["tensors"]["christoffels"]["Gamma^1_(1,2)"], "1/3");
    assert!(v["verdicts"].as_array().unwrap().iter().all(|x| x["holds"] == true));
}

#[test]
fn outputs_round_trip() {
    for name in ["flat_n1.json", "flat_n2.json", "heis_n2.json", "aff_n2.json"] {
        let v = bipara(&["report", &fixture(name)]).json();
        let count = assert_round_trip(&v["tensors"], &vars_of(name));
        assert!(count > 0);
        assert_round_trip(&v["spec"]["F"], &vars_of(name));
    }
}

#[test]
fn report_contents() {
    let v = bipara(&["report", &fixture("aff_n2.json")]).json();
    let failing: Vec<&str> = v["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|x| x["holds"] == false)
        .map(|x| x["name"].as_str().unwrap())
        .collect();
    assert_eq!(failing, ["integrable", "flat", "A = 0", "canonical: trace condition"]);
    assert_eq!(v["hypersymplectic"]["found"], true);
    let v = bipara(&["report", &fixture("flat_n1.json")]).json();
    assert!(v["bilagrangian"]["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .all(|x| x["holds"] == true));
}

#[test]
fn seed_from_environment() {
    let f = fixture("heis_n2.json");
    assert_eq!(bipara(&["report", &f]).json()["seed"], 0);
    assert_eq!(bipara_env(&["report", &f], &[("BIPARA_SEED", "17")]).json()["seed"], 17);
    assert_eq!(bipara(&["report", "--seed", "5", &f]).json()["seed"], 5);
}

#[test]
fn report_to_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let f = fixture("flat_n2.json");
    let r = bipara(&["report", &f, "-o", out.to_str().unwrap()]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&out).unwrap(), bipara(&["report", &f]).stdout);
}

#[test]
fn text_output() {
    let r = bipara(&["invariants", "--n", "1", "--r", "3", "--text"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("count.consistent     false\n"), "{}", r.stdout);
    assert!(r.stdout.contains("count.surface_value  4/3\n"), "{}", r.stdout);
    assert!(r.stdout.lines().any(|l| l.starts_with("warnings[0]")));
}

#[test]
fn invariants_and_prolongation() {
    let v = bipara(&["invariants", "--n", "1", "--r", "2"]).json();
    assert_eq!(v["count"]["general_value"], "0");
    assert_eq!(v["count"]["surface_value"], "0");
    assert_eq!(v["count"]["consistent"], true);
    let v = bipara(&["prolongation", "--n", "2"]).json();
    assert_eq!(v["first_prolongation_dim"], 0);
    assert_eq!(v["transpose_invariant"], true);
    assert_eq!(v["orthogonal_alternation_kernel_dim"], 0);
    assert_eq!(bipara(&["prolongation", "--n", "0"]).code, 2);
}

#[test]
fn bilagrangian_command() {
    let v = bipara(&["bilagrangian", &fixture("flat_n1.json")]).json();
    assert_eq!(v["result"]["G"], serde_json::json!([["2", "0"], ["0", "2"]]));
    assert_eq!(v["result"]["adjusted"], false);
    let r = bipara(&["bilagrangian", &fixture("heis_n2.json")]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("omega"), "{}", r.stderr);
}

#[test]
fn equivalence() {
    let dir = tempfile::tempdir().unwrap();
    let id = dir.path().join("id.json");
    std::fs::write(&id, r#"{"matrix": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}"#).unwrap();
    let heis = fixture("heis_n2.json");
    let aff = fixture("aff_n2.json");
    let v = bipara(&["equivalent", &heis, &heis, "--map", id.to_str().unwrap()]).json();
    assert_eq!(v["equivalent"], true);
    let v = bipara(&["equivalent", &heis, &aff, "--map", id.to_str().unwrap()]).json();
    assert_eq!(v["equivalent"], false);

    let shear = dir.path().join("shear.json");
    std::fs::write(
        &shear,
        r#"{"forward": ["x1", "y1 + x1^2"], "inverse": ["x1", "y1 - x1^2"]}"#,
    )
    .unwrap();
    let flat = fixture("flat_n1.json");
    let v = bipara(&["equivalent", &flat, &flat, "--map", shear.to_str().unwrap()]).json();
    assert_eq!(v["equivalent"], false);

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"forward": ["x1", "y1 + x1^2"], "inverse": ["x1", "y1"]}"#).unwrap();
    assert_eq!(
        bipara(&["equivalent", &flat, &flat, "--map", bad.to_str().unwrap()]).code,
        1
    );
    std::fs::write(&bad, r#"{"matrix": [[1]], "forward": []}"#).unwrap();
    assert_eq!(
        bipara(&["equivalent", &flat, &flat, "--map", bad.to_str().unwrap()]).code,
        2
    );
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let heis = std::fs::read_to_string(fixture("heis_n2.json")).unwrap();
    let no_frame: String = heis
        .lines()
        .filter(|l| !l.contains("adapted_frame"))
        .collect::<Vec<_>>()
        .join("\n");
    let no_frame = no_frame.replace("}],", "}]");
    let path = dir.path().join("no_frame.json");
    std::fs::write(&path, &no_frame).unwrap();
    let p = path.to_str().unwrap();
    assert_eq!(bipara(&["validate", p]).code, 0);
    let r = bipara(&["connection", "--christoffels", p]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("adapted_frame"), "{}", r.stderr);

    assert_eq!(bipara(&["validate", "/nonexistent/spec.json"]).code, 2);
    assert_eq!(bipara(&["frobnicate"]).code, 2);
    assert_eq!(
        bipara(&["nijenhuis", "--tensor", "Q", &fixture("heis_n2.json")]).code,
        2
    );
    assert_eq!(bipara(&["--help"]).code, 0);

    std::fs::write(&path, "{\n  \"backend\": \"constant_frame\",\n  \"n\": \"two\"\n}").unwrap();
    let r = bipara(&["validate", p]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("line 3") && r.stderr.contains("`n`"), "{}", r.stderr);
}
