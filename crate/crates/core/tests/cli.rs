use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use surfex::extremal::are_isomorphic;
use surfex::graph::{self, graph6};

fn surfex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_surfex"))
        .args(args)
        .env_remove("SURFEX_THREADS")
        .output()
        .expect("binary runs")
}

fn ok_json(args: &[&str]) -> Value {
    let out = surfex(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
    v
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("surfex-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn construct_writes_graph6_and_trace() {
    let dir = scratch("construct");
    let d = dir.to_str().unwrap();
    let v = ok_json(&["construct", "--n", "20", "--gamma", "2", "--out", d]);
    assert_eq!(v["rows"][0]["e"], 60);
    let g = graph6::decode(std::fs::read_to_string(dir.join("ex-n20-g2.g6")).unwrap().trim()).unwrap();
    assert_eq!(g.size(), 60);
    let trace: Value = serde_json::from_str(&std::fs::read_to_string(dir.join("ex-n20-g2.json")).unwrap()).unwrap();
    assert_eq!(trace["schema_version"], 1);
    assert_eq!(trace["edges"], 60);

    ok_json(&["construct", "--n", "6", "--gamma", "1", "--out", d]);
    let k6 = graph6::decode(std::fs::read_to_string(dir.join("ex-n6-g1.g6")).unwrap().trim()).unwrap();
    assert!(are_isomorphic(&k6, &graph::complete(6)).unwrap());

    let out = surfex(&["construct", "--n", "5", "--gamma", "1", "--out", d]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn bounds_sweep_rows() {
    let v = ok_json(&["bounds", "--n", "10,20,50,100,400", "--gamma", "0,1,2"]);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 15);
    let f = |r: &Value, k: &str| r[k].as_f64().unwrap();
    for r in rows {
        assert!(f(r, "rho") < f(r, "ellingham_zha"));
        if r["gamma"] == 0 {
            let n = r["n"].as_f64().unwrap();
            assert!((f(r, "lower") - (f(r, "rho0") - 1.0 / n)).abs() < 1e-10 * f(r, "rho0"));
        }
    }
    for w in rows.windows(2).filter(|w| w[0]["gamma"] == w[1]["gamma"]) {
        assert!(f(&w[1], "rho") > f(&w[0], "rho"));
    }
}

#[test]
fn numbers_carry_twelve_significant_digits() {
    let out = surfex(&["rho", "--n", "1000", "--gamma", "1", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "schema_version,n,gamma,e,rho,residual,matvecs");
    let rho = lines.next().unwrap().split(',').nth(4).unwrap().to_string();
    let digits = rho.chars().filter(|c| c.is_ascii_digit()).count();
    assert!(digits <= 12, "{rho}");
    assert!((rho.parse::<f64>().unwrap() - 46.18153226).abs() < 1e-7);
}

#[test]
fn verify_embedding_reports_surfaces() {
    let v = ok_json(&["verify-embedding", &data("k7-torus.json")]);
    assert_eq!(v["rows"][0]["euler_genus"], 2);
    assert_eq!(v["rows"][0]["orientable"], true);
    assert_eq!(v["rows"][0]["faces"], 14);
    let v = ok_json(&["verify-embedding", &data("k6-projective.json")]);
    assert_eq!(v["rows"][0]["euler_genus"], 1);
    assert_eq!(v["rows"][0]["orientable"], false);

    let mut scheme: Value = serde_json::from_str(&std::fs::read_to_string(data("k7-torus.json")).unwrap()).unwrap();
    let rot = scheme["rotation"][2].as_array_mut().unwrap();
    rot.retain(|x| x != 5);
    let dir = scratch("corrupt");
    let path = dir.join("bad.json");
    std::fs::write(&path, scheme.to_string()).unwrap();
    let out = surfex(&["verify-embedding", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("vertex 5"), "{err}");
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn splice_then_verify() {
    let dir = scratch("splice");
    let book = dir.join("book.json");
    let scheme = surfex::embedding::planar_book_scheme(9).unwrap();
    std::fs::write(&book, scheme.to_json()).unwrap();
    let face = surfex::embedding::trace_faces(&surfex::embedding::EmbeddingScheme::k7_torus()).unwrap().faces[3].clone();
    let face = format!("{},{},{}", face[0], face[1], face[2]);
    let out = dir.join("out.json");
    let v = ok_json(&[
        "splice", "--host", &data("k7-torus.json"), "--face", &face, "--inner", book.to_str().unwrap(),
        "--outer", "0,1,2", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(v["rows"][0]["n"], 13);
    assert_eq!(v["rows"][0]["euler_genus"], 2);
    let v = ok_json(&["verify-embedding", out.to_str().unwrap()]);
    assert_eq!(v["rows"][0]["e"], 21 + 21 - 3);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn candidate_schemes_count_avoiding_faces() {
    let (_, s) = surfex::construction::build_extremal_candidates(20, 2).unwrap();
    let dir = scratch("candidate");
    let path = dir.join("c.json");
    std::fs::write(&path, s.to_json()).unwrap();
    let v = ok_json(&["verify-embedding", path.to_str().unwrap(), "--dominating", "0,1"]);
    assert_eq!(v["rows"][0]["avoiding_faces"], 4);
    assert_eq!(v["rows"][0]["counts_hold"], true);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(surfex(&["rho", "--n", "60000000", "--gamma", "1"]).status.code(), Some(3));
    assert_eq!(surfex(&["search", "--n", "40", "--gamma", "1"]).status.code(), Some(3));
    assert_eq!(surfex(&["rho", "--n", "10", "--gamma", "1", "--tol", "1e-40"]).status.code(), Some(4));
    assert_eq!(surfex(&["rho", "--graph6", "!!"]).status.code(), Some(2));
    assert_eq!(surfex(&["bounds"]).status.code(), Some(2));
    assert_eq!(surfex(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn small_commands() {
    let v = ok_json(&["zhang", "3", "7"]);
    assert!((v["rows"][0]["rho"].as_f64().unwrap() - 21f64.sqrt()).abs() < 1e-10);
    let p4 = graph6::encode(&graph::path(4).unwrap());
    let v = ok_json(&["walks", "--graph6", &p4, "--lmax", "3"]);
    let w: Vec<&str> = v["rows"].as_array().unwrap().iter().map(|r| r["walks"].as_str().unwrap()).collect();
    assert_eq!(w, ["6", "10", "16"]);
    let (k4, _) = graph::kr_pendant(4, 10).unwrap();
    let other = graph::path(10).unwrap().edit(&[(1, 3), (1, 5), (4, 6)], &[]).unwrap();
    let v = ok_json(&["compare", "--a", &graph6::encode(&k4), "--b", &graph6::encode(&other)]);
    assert_eq!(v["rows"][0]["first_length"], 2);
    assert_eq!(v["rows"][0]["sign_or_conclusive"], 1);
    let v = ok_json(&["genus", "--graph6", &graph6::encode(&graph::complete(5))]);
    assert_eq!(v["rows"][0]["euler_genus"], 1);
    assert_eq!(v["rows"][0]["exact"], true);
    let v = ok_json(&["w3max", "--degrees", "4,4,3,3,2,2,2,2,1,1"]);
    assert_eq!(v["rows"][0]["exhaustive"], true);
    assert!(v["rows"][0]["w3"].as_u64().unwrap() > 0);
}

#[test]
fn reports_are_byte_identical() {
    let args = ["report", "--n", "12,30", "--gamma", "1,2", "--threads", "1", "--format", "csv"];
    let a = surfex(&args);
    let b = surfex(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let args = ["search", "--n", "12", "--gamma", "1", "--format", "csv", "--seed", "3"];
    let one = surfex(&[&args[..], &["--threads", "1"]].concat());
    let two = surfex(&[&args[..], &["--threads", "2"]].concat());
    assert!(one.status.success());
    assert_eq!(one.stdout, two.stdout);
    assert!(String::from_utf8(one.stdout).unwrap().starts_with("schema_version,"));
}
