use std::path::{Path, PathBuf};
use std::process::Command;

use cubical_cli::formats::*;
use serde_json::Value;

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .display()
        .to_string()
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn cubical(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_cubical"))
        .args(args)
        .env("CUBICAL_THREADS", "2")
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    let r = cubical(&a);
    (r.code, serde_json::from_str(&r.stdout).expect("json report"))
}

#[test]
fn torus_homology() {
    let r = cubical(&[
        "homology",
        "--set",
        &fixture("torus.json"),
        "--system",
        &fixture("const1.json"),
        "--max-dim",
        "2",
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout, "H_0 = Z; H_1 = Z^2; H_2 = Z\n");
}

#[test]
fn collapse_fiber_has_first_homology() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("fiber.json");
    let dump = dump.to_str().unwrap();
    let r = cubical(&[
        "fiber",
        "--map",
        &fixture("collapse.json"),
        "--cube",
        "v@del:1",
        "--max-dim",
        "2",
        "--output",
        dump,
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let (code, report) = json(&["homology", "--set", dump, "--max-dim", "2"]);
    assert_eq!(code, 0);
    let betti: Vec<u64> = report["groups"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| g["betti"].as_u64().unwrap())
        .collect();
    assert_eq!(betti, vec![1, 1, 1]);
}

#[test]
fn broken_set_reports_rel1() {
    let r = cubical(&["validate", "--set", &fixture("broken.json")]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("rel1"), "{}", r.stdout);
    let (code, report) = json(&["validate", "--set", &fixture("broken.json")]);
    assert_eq!(code, 1);
    assert_eq!(report["valid"], Value::Bool(false));
    assert_eq!(report["checked"][0]["violations"][0]["relation"], "rel1");
}

#[test]
fn parse_errors_exit_two() {
    let r = cubical(&["validate", "--set", &fixture("bad_token.json")]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("generators[3].faces[0][0]") && r.stderr.contains("x2,x1"), "{}", r.stderr);

    let r = cubical(&["homology", "--set", &fixture("circle.json"), "--system", &fixture("bad_shape.json")]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("faces.e.1,1"), "{}", r.stderr);

    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("cut.json");
    std::fs::write(&p, "{\n  \"type\": \"cubical_set\",\n  \"generators\": [\n    {\"name\": }\n").unwrap();
    let r = cubical(&["validate", "--set", p.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("line 4"), "{}", r.stderr);
}

#[test]
fn fiber_criterion_verdicts() {
    let (code, report) = json(&["fiber-criterion", "--map", &fixture("collapse.json"), "--max-dim", "1", "--truncation", "2"]);
    assert_eq!(code, 1);
    assert_eq!(report["verdict"], Value::Bool(false));
    let failing: Vec<&str> = report["entries"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|e| e["pass"] == Value::Bool(false))
        .map(|e| e["cube"].as_str().unwrap())
        .collect();
    assert_eq!(failing, vec!["v@del:1", "v@del:1,2"]);
    let (code, _) = json(&["fiber-criterion", "--map", &fixture("collapse.json"), "--max-dim", "0", "--truncation", "1"]);
    assert_eq!(code, 0);
}

#[test]
fn compare_contracts_agree() {
    let cases: [(&str, Vec<String>); 5] = [
        ("dirhomol", vec!["--map".into(), fixture("fold_circle.json")]),
        ("comloc", vec!["--set".into(), fixture("circle.json"), "--system".into(), fixture("monodromy.json")]),
        ("semicubecube", vec!["--set".into(), fixture("twisted_square_semi.json")]),
        ("homolcatcub", vec!["--diagram".into(), fixture("z2_sign_op.json")]),
        ("homolbwcub", vec!["--diagram".into(), fixture("arrow_natural.json")]),
    ];
    for (contract, extra) in cases {
        let mut args = vec!["compare", contract];
        args.extend(extra.iter().map(String::as_str));
        let (code, report) = json(&args);
        assert_eq!(code, 0, "{contract}: {report}");
        assert_eq!(report["equal"], Value::Bool(true));
        assert_eq!(report["lhs"]["groups"], report["rhs"]["groups"]);
    }
}

#[test]
fn category_commands() {
    let r = cubical(&["cat-homology", "--diagram", &fixture("z2_sign_op.json")]);
    assert_eq!(r.stdout, "H_0 = Z/2; H_1 = 0; H_2 = Z/2\n");
    let r = cubical(&["bw", "--diagram", &fixture("square_natural.json")]);
    assert_eq!(r.stdout, "H^0 = Z; H^1 = Z/6; H^2 = 0\n");
    let r = cubical(&["bw-oracle", "--diagram", &fixture("square_natural.json")]);
    assert_eq!(r.stdout, "H^0 = Z; H^1 = Z/6; H^2 = 0\n");
    let r = cubical(&["bw", "--diagram", &fixture("z2_sign_op.json")]);
    assert_eq!(r.code, 2);

    let dir = tempfile::tempdir().unwrap();
    let nerve = dir.path().join("nerve.json");
    let r = cubical(&[
        "nerve",
        "--category",
        &fixture("square.json"),
        "--max-dim",
        "1",
        "--output",
        nerve.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let r = cubical(&["homology", "--set", nerve.to_str().unwrap(), "--max-dim", "1"]);
    assert_eq!(r.stdout, "H_0 = Z; H_1 = 0\n");
}

#[test]
fn produced_documents_chain() {
    let dir = tempfile::tempdir().unwrap();
    let out = |n: &str| dir.path().join(n).display().to_string();

    let r = cubical(&["universal", "--set", &fixture("torus_semi.json"), "--output", &out("u.json")]);
    assert_eq!(r.code, 0);
    let r = cubical(&["homology", "--set", &out("u.json")]);
    assert_eq!(r.stdout, "H_0 = Z; H_1 = Z^2; H_2 = Z\n");

    let r = cubical(&["product", "--left", &fixture("interval.json"), "--right", &fixture("interval.json"), "--output", &out("p.json")]);
    assert_eq!(r.code, 0);
    let r = cubical(&["homology", "--set", &out("p.json")]);
    assert_eq!(r.stdout, "H_0 = Z; H_1 = Z; H_2 = Z\n");

    let r = cubical(&["direct-image", "--map", &fixture("fold_circle.json"), "--system", &fixture("const1.json"), "--output", &out("d.json")]);
    assert_eq!(r.code, 0);
    let r = cubical(&["homology", "--set", &fixture("circle.json"), "--system", &out("d.json")]);
    assert_eq!(r.stdout, "H_0 = Z^2; H_1 = Z^2; H_2 = 0\n");

    let r = cubical(&["pullback-system", "--map", &fixture("collapse.json"), "--system", &fixture("const1.json")]);
    assert_eq!(r.code, 0);
    let doc: SystemDoc = parse_doc(&r.stdout, DocType::System).unwrap();
    assert_eq!(doc.kind, SystemKind::Table);
    assert!(doc.ranks.values().all(|&r| r == 1));
}

#[test]
fn reports_are_byte_reproducible() {
    let args = ["fiber-criterion", "--map", &fixture("fold_circle.json"), "--max-dim", "1", "--format", "json"];
    let a = cubical(&args).stdout;
    let b = Command::new(env!("CARGO_BIN_EXE_cubical"))
        .args(args)
        .env("CUBICAL_THREADS", "1")
        .output()
        .unwrap()
        .stdout;
    assert_eq!(a.as_bytes(), &b[..]);
}

fn fixtures() -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = std::fs::read_dir(Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| !p.file_name().unwrap().to_str().unwrap().starts_with("bad_"))
        .collect();
    v.sort();
    v
}

fn round_trip<T>(text: &str, ty: DocType)
where
    T: serde::Serialize + serde::de::DeserializeOwned + PartialEq + std::fmt::Debug,
{
    let doc: T = parse_doc(text, ty).unwrap();
    let again = to_json(&doc);
    assert_eq!(parse_doc::<T>(&again, ty).unwrap(), doc);
    assert_eq!(to_json(&parse_doc::<T>(&again, ty).unwrap()), again);
}

#[test]
fn every_fixture_round_trips() {
    for path in fixtures() {
        let text = std::fs::read_to_string(&path).unwrap();
        let ty = doc_type(&text).unwrap();
        match ty {
            DocType::CubicalSet => {
                round_trip::<SetDoc>(&text, ty);
                let doc: SetDoc = parse_doc(&text, ty).unwrap();
                let x = doc.to_set().unwrap();
                assert_eq!(SetDoc::from_set(&x).to_set().unwrap(), x);
            }
            DocType::SemicubicalSet => {
                round_trip::<SemiDoc>(&text, ty);
                let s = parse_doc::<SemiDoc>(&text, ty).unwrap().to_semi().unwrap();
                assert_eq!(SemiDoc::from_semi(&s).to_semi().unwrap(), s);
            }
            DocType::CubesTable => round_trip::<TableDoc>(&text, ty),
            DocType::CubicalMap => {
                round_trip::<MapDoc>(&text, ty);
                let f = parse_doc::<MapDoc>(&text, ty).unwrap().to_map().unwrap();
                assert_eq!(MapDoc::from_map(&f).to_map().unwrap(), f);
            }
            DocType::System => round_trip::<SystemDoc>(&text, ty),
            DocType::SemicubicalSystem => round_trip::<SemiSystemDoc>(&text, ty),
            DocType::Category => {
                round_trip::<CategoryDoc>(&text, ty);
                let c = parse_doc::<CategoryDoc>(&text, ty).unwrap().to_category().unwrap();
                assert_eq!(CategoryDoc::from_category(&c).to_category().unwrap(), c);
            }
            DocType::Diagram => {
                round_trip::<DiagramDoc>(&text, ty);
                let doc: DiagramDoc = parse_doc(&text, ty).unwrap();
                let (c, d) = doc.to_diagram().unwrap();
                assert_eq!(DiagramDoc::from_diagram(&c, doc.over, &d).to_diagram().unwrap(), (c, d));
            }
        }
    }
}

#[test]
fn systems_round_trip_through_table_form() {
    let set = parse_doc::<SetDoc>(&std::fs::read_to_string(fixture("circle.json")).unwrap(), DocType::CubicalSet)
        .unwrap()
        .to_set()
        .unwrap();
    let base = Base::Set(set);
    for name in ["const1.json", "const1_cov.json", "monodromy.json"] {
        let doc: SystemDoc = parse_doc(&std::fs::read_to_string(fixture(name)).unwrap(), DocType::System).unwrap();
        let f = doc.to_system(&base, 3).unwrap();
        let table = SystemDoc::from_system(&f);
        assert_eq!(table.to_system(&base, 3).unwrap(), f, "{name}");
        let text = to_json(&table);
        assert_eq!(to_json(&parse_doc::<SystemDoc>(&text, DocType::System).unwrap()), text);
    }
}
