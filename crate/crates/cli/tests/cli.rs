//! End-to-end checks of the `vecflow` binary: output schemas, exit codes,
//! artifact round trips, determinism and the tolerance environment variable.

use std::path::{Path, PathBuf};
use std::process::Command;

use jsonschema::{Draft, JSONSchema};
use serde_json::Value;
use tempfile::TempDir;

const PETERSEN_G6: &str = "IheA@GUAo";
const K4: &str = "0 1\n1 2\n2 0\n0 3\n1 3\n2 3\n";
const K33: &str = "0 3\n0 4\n0 5\n1 3\n1 4\n1 5\n2 3\n2 4\n2 5\n";
// two triangles joined by one edge
const BRIDGED: &str = "0 1\n1 2\n2 0\n3 4\n4 5\n5 3\n0 3\n";

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout)
            .unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}\nstderr: {}", self.stdout, self.stderr))
    }
}

fn vecflow(args: &[&str], envs: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_vecflow"));
    cmd.args(args).env_remove("VECFLOW_TOL");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Run {
        code: out.status.code().expect("exited normally"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn run(args: &[&str]) -> Run {
    vecflow(args, &[])
}

fn schema_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas")
}

fn load(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn schema(name: &str) -> JSONSchema {
    let mut opts = JSONSchema::options();
    opts.with_draft(Draft::Draft7);
    for entry in std::fs::read_dir(schema_dir()).unwrap() {
        let doc = load(&entry.unwrap().path());
        let id = doc["$id"].as_str().unwrap().to_string();
        opts.with_document(id, doc);
    }
    let root = load(&schema_dir().join(format!("{name}.schema.json")));
    opts.compile(&root).unwrap_or_else(|e| panic!("schema {name}: {e}"))
}

fn assert_schema(name: &str, v: &Value) {
    let s = schema(name);
    if let Err(errors) = s.validate(v) {
        let msgs: Vec<String> = errors.map(|e| format!("{} at {}", e, e.instance_path)).collect();
        panic!("{name} schema rejected output:\n{}\n{v:#}", msgs.join("\n"));
    };
}

struct Work(TempDir);

impl Work {
    fn new() -> Self {
        Work(tempfile::tempdir().unwrap())
    }

    fn file(&self, name: &str, body: &str) -> String {
        let p = self.0.path().join(name);
        std::fs::write(&p, body).unwrap();
        p.to_str().unwrap().to_string()
    }

    fn json(&self, name: &str, v: &Value) -> String {
        self.file(name, &serde_json::to_string(v).unwrap())
    }
}

#[test]
fn every_schema_compiles() {
    let mut n = 0;
    for entry in std::fs::read_dir(schema_dir()).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_str().unwrap().trim_end_matches(".schema.json").to_string();
        schema(&name);
        n += 1;
    }
    assert!(n >= 13);
}

#[test]
fn analyze_reports_structure() {
    let w = Work::new();
    let pet = w.file("petersen.g6", PETERSEN_G6);
    let v = run(&["analyze", &pet]).json();
    assert_schema("analyze", &v);
    assert_eq!((v["n"].as_u64(), v["m"].as_u64()), (Some(10), Some(15)));
    assert_eq!(v["cubic"], true);
    assert_eq!(v["bipartite"], false);

    let bridged = w.file("bridged.txt", BRIDGED);
    let r = run(&["analyze", &bridged]);
    assert_eq!(r.code, 0);
    let v = r.json();
    assert_schema("analyze", &v);
    assert_eq!(v["bridges"], serde_json::json!([6]));
}

#[test]
fn exit_codes() {
    let w = Work::new();
    let k4 = w.file("k4.txt", K4);
    // K4 has no nowhere-zero 3-flow, hence no oriented 3-cover
    let r = run(&["cdc", "find", &k4, "-k", "3", "--oriented"]);
    assert_eq!(r.code, 1, "{}", r.stderr);
    let v = r.json();
    assert_schema("certificate", &v);
    assert_eq!(v["verdict"], "none");

    let r = run(&["cdc", "find", &k4, "-k", "3", "--oriented", "--budget", "1"]);
    assert_eq!(r.code, 2);
    assert_eq!(r.json()["verdict"], "unknown");

    let bridged = w.file("bridged.txt", BRIDGED);
    assert_eq!(run(&["cdc", "find", &bridged, "-k", "4"]).code, 1);

    let looped = w.file("loop.txt", "0 1\n1 1\n1 0\n");
    let r = run(&["analyze", &looped]);
    assert_eq!(r.code, 3);
    assert!(!r.stderr.is_empty());

    assert_eq!(run(&["analyze", &w.file("junk.txt", "not a graph")]).code, 3);
    assert_eq!(run(&["analyze", "/nonexistent/graph.txt"]).code, 3);
    assert_eq!(run(&["cdc", "find", &k4]).code, 3, "missing -k");
    assert_eq!(run(&["frobnicate"]).code, 3);
    assert_eq!(run(&["--tol", "-1", "analyze", &k4]).code, 3);
    assert_eq!(run(&["--help"]).code, 0);
}

#[test]
fn oriented_cover_artifacts_round_trip() {
    let w = Work::new();
    let k4 = w.file("k4.txt", K4);
    let r = run(&["cdc", "find", &k4, "-k", "4", "--oriented"]);
    assert_eq!(r.code, 0);
    let cert = r.json();
    assert_schema("certificate", &cert);
    assert_eq!(cert["verdict"], "found");
    assert_schema("cover", &cert["cover"]);
    // the certificate itself is accepted wherever a cover or flow is expected
    let cert_file = w.json("cert.json", &cert);

    let hd = run(&["convert", "cdc-to-flow", &k4, &cert_file]).json();
    assert_schema("flow", &hd);
    assert_eq!(hd, cert["flow"]);
    let hd_file = w.json("hd.json", &hd);
    let rep = run(&["flow", "verify", &k4, &hd_file, "--set", "hd"]);
    assert_eq!(rep.code, 0);
    assert_schema("flow_verify", &rep.json());

    let back = run(&["convert", "flow-to-cdc", &k4, &hd_file]).json();
    assert_schema("cover", &back);
    assert_eq!(back, cert["cover"]);

    let sphere = run(&["convert", "sigma-to-sphere", &k4, &hd_file]).json();
    assert_schema("flow", &sphere);
    assert_eq!(sphere["d"], 3);
    let sphere_file = w.json("sphere.json", &sphere);
    let rep = run(&["flow", "verify", &k4, &sphere_file, "--set", "unit"]);
    assert_eq!(rep.code, 0, "{}", rep.stdout);

    let sigma = run(&["convert", "sphere-to-sigma", &k4, &sphere_file]).json();
    let sigma_file = w.json("sigma.json", &sigma);
    let rep = run(&["flow", "verify", &k4, &sigma_file, "--set", "sigma"]);
    assert_eq!(rep.code, 0, "{}", rep.stdout);
    for (a, b) in sigma["values"].as_array().unwrap().iter().zip(hd["values"].as_array().unwrap()) {
        for (x, y) in a.as_array().unwrap().iter().zip(b.as_array().unwrap()) {
            assert!((x.as_f64().unwrap() - y.as_f64().unwrap()).abs() < 1e-12);
        }
    }

    // H_d sits inside T_d, not the other way round
    assert_eq!(run(&["flow", "verify", &k4, &hd_file, "--set", "td"]).code, 0);
    let td = w.json("td.json", &run(&["convert", "cdc-to-td", &k4, &cert_file]).json());
    let rep = run(&["flow", "verify", &k4, &td, "--set", "hd"]);
    assert_eq!(rep.code, 1);
    assert_eq!(rep.json()["valid"], false);
}

#[test]
fn unoriented_cover_artifacts_round_trip() {
    let w = Work::new();
    let pet = w.file("petersen.g6", PETERSEN_G6);
    let cert = run(&["cdc", "find", &pet, "-k", "5"]).json();
    assert_schema("certificate", &cert);
    assert_eq!(cert["verdict"], "found");
    let cert_file = w.json("cert.json", &cert);

    let td = run(&["convert", "cdc-to-td", &pet, &cert_file]).json();
    assert_schema("flow", &td);
    let td_file = w.json("td.json", &td);
    let rep = run(&["flow", "verify", &pet, &td_file, "--set", "td"]);
    assert_eq!(rep.code, 0);
    assert_eq!(rep.json()["valid"], true);

    let back = run(&["convert", "td-to-cdc", &pet, &td_file]).json();
    assert_schema("cover", &back);
    let edges = |c: &Value| -> Vec<Value> {
        c["members"].as_array().unwrap().iter().map(|m| m["edges"].clone()).collect()
    };
    assert_eq!(edges(&back), edges(&cert["cover"]));
}

#[test]
fn constructions_verify_and_respect_bounds() {
    let w = Work::new();
    let k4 = w.file("k4.txt", K4);
    let k33 = w.file("k33.txt", K33);
    let cases = [
        (&k4, "cover-flow", "3"),
        (&k33, "cover-flow", "4"),
        (&k4, "oriented-cover-flow", "4"),
        (&k33, "oriented-cover-flow", "4"),
    ];
    for (g, which, k) in cases {
        let r = run(&["construct", which, g, "-k", k]);
        assert_eq!(r.code, 0, "{which} -k {k}: {}", r.stderr);
        let v = r.json();
        assert_schema("construction", &v);
        assert_eq!(v["within_bound"], true);
        assert!(v["r"].as_f64().unwrap() <= v["bound"].as_f64().unwrap() + 1e-9);
        let f = w.json("built.json", &v["flow"]);
        let rep = run(&["flow", "verify", g, &f]);
        assert_eq!(rep.code, 0, "{which}: {}", rep.stdout);
        assert!((rep.json()["r"].as_f64().unwrap() - v["r"].as_f64().unwrap()).abs() < 1e-9);
    }

    // the same construction from a saved cover
    let cert = w.json("cover.json", &run(&["cdc", "find", &k4, "-k", "4", "--oriented"]).json());
    let v = run(&["construct", "oriented-cover-flow", &k4, "--cdc", &cert]).json();
    assert_schema("construction", &v);

    // an unoriented cover cannot feed the oriented construction
    let plain = w.json("plain.json", &run(&["cdc", "find", &k4, "-k", "4"]).json());
    let plain_has_dirs = load(Path::new(&plain))["cover"]["members"][0]["directions"].is_array();
    if !plain_has_dirs {
        assert_eq!(run(&["construct", "oriented-cover-flow", &k4, "--cdc", &plain]).code, 3);
    }
    assert_eq!(run(&["construct", "cover-flow", &k4, "--cdc", &plain, "-k", "3"]).code, 3);
}

#[test]
fn petersen_unit_flow_verifies() {
    let w = Work::new();
    let v = run(&["construct", "petersen-s2"]).json();
    assert_schema("petersen", &v);
    assert!(v["residual"].as_f64().unwrap() <= 1e-9);
    assert!((v["r"].as_f64().unwrap() - 2.0).abs() <= 1e-9);
    // graph6 does not keep edge order; the flow follows `edges`
    let edges: String = v["edges"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| format!("{} {}\n", e[0], e[1]))
        .collect();
    let g = w.file("p.txt", &edges);
    let from_g6 = w.file("p.g6", v["graph6"].as_str().unwrap());
    assert_eq!(run(&["analyze", &from_g6]).json()["graph_hash"], v["graph_hash"]);
    let f = w.json("f.json", &v["flow"]);
    let rep = run(&["flow", "verify", &g, &f, "--set", "unit"]);
    assert_eq!(rep.code, 0, "{}", rep.stdout);
}

#[test]
fn polytope_commands() {
    for d in 3..=6 {
        let ds = d.to_string();
        let gd = run(&["polytope", "gd", "-d", &ds]).json();
        assert_schema("polytope_graph", &gd);
        assert_eq!(gd["vertices"].as_u64(), Some((d * (d - 1)) as u64));
        assert_eq!(gd["regular_degree"].as_u64(), Some(2 * (d as u64 - 2)));

        let crown = run(&["polytope", "crown", "-d", &ds]).json();
        assert_schema("polytope_graph", &crown);
        assert_eq!(crown["edges"], gd["vertices"]);

        let r = run(&["polytope", "check-iso", "-d", &ds]);
        assert_eq!(r.code, 0);
        let iso = r.json();
        assert_schema("iso_check", &iso);
        assert_eq!(iso["holds"], true);
    }
}

#[test]
fn phi_estimate_witness_verifies() {
    let w = Work::new();
    let pet = w.file("petersen.g6", PETERSEN_G6);
    let r = run(&["phi", "estimate", &pet, "-d", "3", "--restarts", "3", "--iters", "150"]);
    assert_eq!(r.code, 0);
    let v = r.json();
    assert_schema("phi_estimate", &v);
    assert_eq!(v["verified"], true);
    // the integer 5-flow start alone gives r = 4
    assert!(v["r"].as_f64().unwrap() <= 4.0 + 1e-9);
    let f = w.json("witness.json", &v["flow"]);
    let rep = run(&["flow", "verify", &pet, &f]).json();
    assert_eq!(rep["valid"], true);
    assert!((rep["r"].as_f64().unwrap() - v["r"].as_f64().unwrap()).abs() < 1e-9);

    // a warm start is never made worse
    let warm = run(&["phi", "estimate", &pet, "-d", "3", "--restarts", "1", "--iters", "10", "--no-integer-start", "--warm-start", &f]).json();
    assert!(warm["r"].as_f64().unwrap() <= v["r"].as_f64().unwrap() + 1e-9);

    let bridged = w.file("bridged.txt", BRIDGED);
    assert_eq!(run(&["phi", "estimate", &bridged, "-d", "2"]).code, 1);
    assert_eq!(run(&["phi", "estimate", &pet, "-d", "0"]).code, 3);
}

#[test]
fn audit_is_consistent() {
    let w = Work::new();
    for (name, body, flow3) in [("k4.txt", K4, "none"), ("k33.txt", K33, "found")] {
        let g = w.file(name, body);
        let r = run(&["audit", "three-flow", &g]);
        assert_eq!(r.code, 0);
        let v = r.json();
        assert_schema("audit", &v);
        assert_eq!(v["verdict"], "consistent");
        assert_eq!(v["nowhere_zero_3_flow"], flow3);
        assert_eq!(v["oriented_3_cdc"], flow3);
        if flow3 == "found" {
            let f = w.json("h3.json", &v["h3_witness"]);
            assert_eq!(run(&["flow", "verify", &g, &f, "--set", "hd"]).code, 0);
        }
    }
}

#[test]
fn tolerance_comes_from_environment_or_flag() {
    let w = Work::new();
    let k4 = w.file("k4.txt", K4);
    let cert = w.json("c.json", &run(&["cdc", "find", &k4, "-k", "4", "--oriented"]).json());
    let mut sphere = run(&["convert", "sigma-to-sphere", &k4, &cert]).json();
    // break conservation slightly
    let x = sphere["values"][0][0].as_f64().unwrap();
    sphere["values"][0][0] = Value::from(x + 1e-6);
    let f = w.json("off.json", &sphere);

    let strict = run(&["flow", "verify", &k4, &f]);
    assert_eq!(strict.code, 1);
    assert_eq!(strict.json()["conserved"], false);

    let loose = vecflow(&["flow", "verify", &k4, &f], &[("VECFLOW_TOL", "1e-3")]);
    assert_eq!(loose.code, 0, "{}", loose.stdout);
    assert_eq!(loose.json()["tol"], 1e-3);

    // the flag wins over the environment
    let flag = vecflow(&["--tol", "1e-9", "flow", "verify", &k4, &f], &[("VECFLOW_TOL", "1e-3")]);
    assert_eq!(flag.code, 1);

    assert_eq!(vecflow(&["analyze", &k4], &[("VECFLOW_TOL", "abc")]).code, 3);
}

#[test]
fn output_is_deterministic() {
    let w = Work::new();
    let pet = w.file("petersen.g6", PETERSEN_G6);
    let args = ["phi", "estimate", pet.as_str(), "-d", "2", "--restarts", "4", "--iters", "60", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);

    let args = ["construct", "petersen-s2", "--seed", "3"];
    assert_eq!(run(&args).stdout, run(&args).stdout);

    let lines = w.file("many.g6", "C~\nEEh_\nIheA@GUAo\n");
    let args = ["batch", lines.as_str(), "--threads", "3", "cdc", "find", "-k", "4", "--oriented"];
    let a = run(&args);
    assert_eq!(a.stdout, run(&args).stdout);
    assert_eq!(a.stdout, run(&["batch", &lines, "--threads", "1", "cdc", "find", "-k", "4", "--oriented"]).stdout);
}

#[test]
fn batch_over_directory_and_graph6_file() {
    let w = Work::new();
    let dir = w.0.path().join("graphs");
    std::fs::create_dir(&dir).unwrap();
    std::fs::write(dir.join("a_k4.txt"), K4).unwrap();
    std::fs::write(dir.join("b_bridged.txt"), BRIDGED).unwrap();
    std::fs::write(dir.join("c_petersen.g6"), PETERSEN_G6).unwrap();
    std::fs::write(dir.join("d_broken.txt"), "0 0\n").unwrap();

    let r = run(&["batch", dir.to_str().unwrap(), "cdc", "find", "-k", "4", "--oriented"]);
    assert_eq!(r.code, 0);
    let lines: Vec<Value> = r.stdout.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 4);
    for v in &lines {
        assert_schema("batch_line", v);
        if v["exit"] == 0 {
            assert_schema("certificate", &v["result"]);
        }
    }
    let exits: Vec<u64> = lines.iter().map(|v| v["exit"].as_u64().unwrap()).collect();
    // Petersen has no 4-cover; the triangle pair has a bridge
    assert_eq!(exits, [0, 1, 1, 3]);
    assert!(lines[0]["source"].as_str().unwrap().ends_with("a_k4.txt"));
    assert!(lines[2]["source"].as_str().unwrap().ends_with("c_petersen.g6:1"));

    let g6 = w.file("list.g6", "C~\n\nIheA@GUAo\n@@@\n");
    let r = run(&["batch", &g6, "analyze"]);
    let lines: Vec<Value> = r.stdout.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0]["source"].as_str().unwrap().ends_with("list.g6:1"));
    assert!(lines[1]["source"].as_str().unwrap().ends_with("list.g6:3"));
    assert_eq!(lines[1]["result"]["n"], 10);
    assert_eq!(lines[2]["exit"], 3);
    for v in &lines {
        assert_schema("batch_line", v);
    }
}

#[test]
fn stdin_input() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_vecflow"))
        .args(["--compact", "analyze", "-"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    use std::io::Write;
    child.stdin.take().unwrap().write_all(K33.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["bipartite"], true);
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 1);
}
