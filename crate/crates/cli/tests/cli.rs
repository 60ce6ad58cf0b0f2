//! End-to-end CLI tests: exit codes, determinism, schema conformance,
//! and the documented example invocations.

use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_locent")
}

struct Fixtures {
    dir: PathBuf,
}

impl Fixtures {
    fn new(tag: &str) -> Fixtures {
        let dir = std::env::temp_dir().join(format!("locent-cli-{tag}-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        Fixtures { dir }
    }

    fn write(&self, name: &str, contents: &str) -> String {
        let path = self.dir.join(name);
        std::fs::write(&path, contents).unwrap();
        path.to_string_lossy().into_owned()
    }

    fn path(&self, name: &str) -> String {
        self.dir.join(name).to_string_lossy().into_owned()
    }
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let out = run(args);
    let code = out.status.code().unwrap_or(-1);
    let stdout = String::from_utf8_lossy(&out.stdout);
    let v: Value = serde_json::from_str(stdout.trim()).unwrap_or_else(|e| {
        panic!("bad JSON from {args:?}: {e}\nstdout: {stdout}\nstderr: {}",
            String::from_utf8_lossy(&out.stderr))
    });
    (code, v)
}

const GOLDEN: &str =
    r#"{"alphabet":["0","1"],"d":1,"forbidden":[{"shape":[[0],[1]],"assign":["1","1"]}]}"#;
const FULL2: &str = r#"{"alphabet":["0","1"],"d":1,"forbidden":[]}"#;
const ORBIT: &str = r#"{"alphabet":["0","1"],"d":1,"forbidden":[{"shape":[[0],[1]],"assign":["0","0"]},{"shape":[[0],[1]],"assign":["1","1"]}]}"#;
const SYMBOLS: &str = r#"[[{"shape":[[0]],"assign":["0"]}],[{"shape":[[0]],"assign":["1"]}]]"#;
const BERN_HALF: &str = r#"{"variant":"bernoulli","probs":{"0":"1/2","1":"1/2"}}"#;

// ---------------------------------------------------------------------
// Minimal JSON Schema validator covering the subset the published schema
// uses: type, enum, required, properties, additionalProperties.
// ---------------------------------------------------------------------

fn type_matches(ty: &str, v: &Value) -> bool {
    match ty {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "boolean" => v.is_boolean(),
        "integer" => v.is_i64() || v.is_u64(),
        "number" => v.is_number(),
        "null" => v.is_null(),
        _ => false,
    }
}

fn validate(schema: &Value, v: &Value, path: &str) -> Result<(), String> {
    if let Some(ty) = schema.get("type") {
        let ok = match ty {
            Value::String(t) => type_matches(t, v),
            Value::Array(ts) => ts
                .iter()
                .filter_map(Value::as_str)
                .any(|t| type_matches(t, v)),
            _ => false,
        };
        if !ok {
            return Err(format!("{path}: type mismatch, got {v}"));
        }
    }
    if let Some(options) = schema.get("enum").and_then(Value::as_array) {
        if !options.contains(v) {
            return Err(format!("{path}: {v} not in enum"));
        }
    }
    if let Some(required) = schema.get("required").and_then(Value::as_array) {
        for key in required.iter().filter_map(Value::as_str) {
            if v.get(key).is_none() {
                return Err(format!("{path}: missing required key {key}"));
            }
        }
    }
    if let Some(props) = schema.get("properties").and_then(Value::as_object) {
        if let Some(obj) = v.as_object() {
            for (key, sub) in props {
                if let Some(val) = obj.get(key) {
                    validate(sub, val, &format!("{path}.{key}"))?;
                }
            }
            if schema.get("additionalProperties") == Some(&Value::Bool(false)) {
                for key in obj.keys() {
                    if !props.contains_key(key) {
                        return Err(format!("{path}: unexpected key {key}"));
                    }
                }
            }
        }
    }
    Ok(())
}

fn assert_schema(report: &Value) {
    let schema_path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schema/report.schema.json");
    let schema: Value =
        serde_json::from_str(&std::fs::read_to_string(schema_path).unwrap()).unwrap();
    validate(&schema, report, "$").unwrap();
}

#[test]
fn entropy_top_golden_mean_matches_fibonacci_oracle() {
    let fx = Fixtures::new("top");
    let sft = fx.write("golden.json", GOLDEN);
    let cover = fx.write("symbols.json", SYMBOLS);
    let (code, report) = run_json(&[
        "entropy", "top", "--sft", &sft, "--cover", &cover, "--nmax", "16",
    ]);
    assert_eq!(code, 0);
    assert_schema(&report);
    let result = &report["result"];
    assert_eq!(result["values"].as_array().unwrap().len(), 16);
    // Fibonacci oracle: counts 2, 3, 5, …, 2584; certified upper is
    // log(2584)/16 at n = 16.
    let mut a = (2u64, 3u64);
    for _ in 3..=16 {
        a = (a.1, a.0 + a.1);
    }
    let expected = (a.1 as f64).ln() / 16.0;
    let cert = result["certified_upper"].as_f64().unwrap();
    assert!((cert - expected).abs() < 1e-9, "{cert} vs {expected}");
}

#[test]
fn reports_are_byte_deterministic() {
    let fx = Fixtures::new("det");
    let sft = fx.write("golden.json", GOLDEN);
    let cover = fx.write("symbols.json", SYMBOLS);
    let args = [
        "entropy", "top", "--sft", &sft, "--cover", &cover, "--nmax", "10", "--seed", "7",
    ];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.stdout, second.stdout);
    assert!(!first.stdout.is_empty());
}

#[test]
fn tile_exit_codes_follow_coverage() {
    let fx = Fixtures::new("tile");
    let shapes = fx.write("shapes.json", "[[[0],[1],[2],[3],[4],[5],[6],[7],[8],[9]]]");
    let target_elems: Vec<String> = (0..100).map(|i| format!("[{i}]")).collect();
    let target = fx.write("target.json", &format!("[{}]", target_elems.join(",")));
    let (code, report) = run_json(&[
        "tile", "--shapes", &shapes, "--target", &target, "--epsilon", "0.2",
    ]);
    assert_eq!(code, 0);
    assert_schema(&report);
    assert_eq!(report["result"]["coverage"], 1.0);

    // A 50-tile cannot reach 80% of a 70-point target: failure flag,
    // exit 1.
    let big = fx.write(
        "big.json",
        &format!(
            "[[{}]]",
            (0..50).map(|i| format!("[{i}]")).collect::<Vec<_>>().join(",")
        ),
    );
    let small_target = fx.write(
        "small_target.json",
        &format!(
            "[{}]",
            (0..70).map(|i| format!("[{i}]")).collect::<Vec<_>>().join(",")
        ),
    );
    let (code, report) = run_json(&[
        "tile", "--shapes", &big, "--target", &small_target, "--epsilon", "0.2",
    ]);
    assert_eq!(code, 1);
    assert_eq!(report["result"]["ok"], Value::Bool(false));
}

#[test]
fn input_errors_exit_2() {
    let fx = Fixtures::new("err");
    let missing = fx.path("nope.json");
    let out = run(&["entropy", "top", "--sft", &missing, "--cover", &missing, "--nmax", "4"]);
    assert_eq!(out.status.code(), Some(2));

    let bad = fx.write("bad.json", "{not json");
    let out = run(&["entropy", "top", "--sft", &bad, "--cover", &bad, "--nmax", "4"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("bad.json"), "stderr: {stderr}");
}

#[test]
fn entropy_measure_and_vp() {
    let fx = Fixtures::new("measure");
    let sft = fx.write("full.json", FULL2);
    let cover = fx.write("symbols.json", SYMBOLS);
    let measure = fx.write("bern.json", BERN_HALF);
    let (code, report) = run_json(&[
        "entropy", "measure", "--sft", &sft, "--cover", &cover, "--measure", &measure,
        "--nmax", "6",
    ]);
    assert_eq!(code, 0);
    assert_schema(&report);
    assert_eq!(report["result"]["exact"], Value::Bool(true));
    let cert = report["result"]["certified_upper"].as_f64().unwrap();
    assert!((cert - 2f64.ln()).abs() < 1e-9);

    let (code, report) = run_json(&[
        "entropy", "measure", "--sft", &sft, "--cover", &cover, "--measure", &measure,
        "--nmax", "6", "--minus",
    ]);
    assert_eq!(code, 0);
    let cert_minus = report["result"]["certified_upper"].as_f64().unwrap();
    assert!((cert_minus - 2f64.ln()).abs() < 1e-9);

    let measures = fx.write("measures.json", &format!("[{BERN_HALF}]"));
    let (code, report) = run_json(&[
        "entropy", "vp", "--sft", &sft, "--cover", &cover, "--measures", &measures,
        "--nmax", "6",
    ]);
    assert_eq!(code, 0);
    assert_schema(&report);
    assert_eq!(report["result"]["certificate_ok"], Value::Bool(true));
    assert!(report["result"]["gap"].as_f64().unwrap().abs() < 1e-9);
}

#[test]
fn entropy_katok_reports_weiss_checks() {
    let fx = Fixtures::new("katok");
    let sft = fx.write("full.json", FULL2);
    let cover = fx.write("symbols.json", SYMBOLS);
    let measure = fx.write("bern.json", BERN_HALF);
    let (code, report) = run_json(&[
        "entropy", "katok", "--sft", &sft, "--cover", &cover, "--measure", &measure,
        "--nmax", "8", "--epsilon", "0.1",
    ]);
    assert_eq!(code, 0);
    assert_schema(&report);
    let weiss = report["result"]["weiss"].as_array().unwrap();
    assert_eq!(weiss.len(), 8);
    assert!(weiss.iter().all(|w| w["holds"] == Value::Bool(true)));
}

#[test]
fn lang_and_group_commands() {
    let fx = Fixtures::new("lang");
    let sft = fx.write("golden.json", GOLDEN);
    let window = fx.write("window.json", "[[0],[1],[2],[3],[4]]");
    let (code, report) = run_json(&["lang", "--sft", &sft, "--window", &window]);
    assert_eq!(code, 0);
    assert_schema(&report);
    assert_eq!(report["result"]["count"], 13);
    assert_eq!(report["result"]["exact"], Value::Bool(true));

    let spec = fx.write("folner.json", r#"{"kind":"box","d":1}"#);
    let (code, report) = run_json(&["group", "folner", "--spec", &spec, "--n", "3"]);
    assert_eq!(code, 0);
    assert_schema(&report);
    assert_eq!(report["result"]["set"], serde_json::json!([[0], [1], [2]]));

    let a = fx.write("a.json", "[[0],[1],[2],[3],[4],[5],[6],[7],[8],[9]]");
    let k = fx.write("k.json", "[[0],[1]]");
    let (code, report) = run_json(&["group", "boundary", "--a", &a, "--k", &k]);
    assert_eq!(code, 0);
    assert_schema(&report);
    assert_eq!(report["result"]["boundary"], serde_json::json!([[-1], [9]]));
    assert_eq!(report["result"]["ratio"], 0.2);
}

#[test]
fn tuples_commands() {
    let fx = Fixtures::new("tuples");
    let full = fx.write("full.json", FULL2);
    let orbit = fx.write("orbit.json", ORBIT);
    let points = fx.write("points.json", r#"{"r":0,"words":[["0"],["1"]]}"#);
    let (code, report) = run_json(&[
        "tuples", "check", "--sft", &full, "--points", &points, "--rmax", "1", "--nmax", "8",
    ]);
    assert_eq!(code, 0);
    assert_schema(&report);
    assert_eq!(report["result"]["verdict"], "Positive");

    let (code, report) = run_json(&[
        "tuples", "upe", "--sft", &orbit, "--r", "0", "--nmax", "750",
    ]);
    assert_eq!(code, 0);
    assert_schema(&report);
    assert_eq!(report["result"]["verdict"]["kind"], "refuted");

    let measure = fx.write("bern.json", BERN_HALF);
    let sets = fx.write(
        "sets.json",
        r#"[[{"shape":[[0]],"assign":["0"]}],[{"shape":[[0]],"assign":["1"]}]]"#,
    );
    let (code, report) = run_json(&[
        "tuples", "lambda", "--sft", &full, "--measure", &measure, "--n", "2", "--sets", &sets,
    ]);
    assert_eq!(code, 0);
    assert_schema(&report);
    assert_eq!(report["result"]["mass"], "1/4");
    assert_eq!(report["result"]["positive"], Value::Bool(true));

    let pairs = fx.write(
        "pairs.json",
        r#"[[[["0"],["0"]],[["1"],["0"]]],[[["0"],["1"]],[["1"],["1"]]]]"#,
    );
    let (code, report) = run_json(&[
        "tuples", "product", "--sft1", &full, "--sft2", &orbit, "--pairs", &pairs,
        "--nmax2", "750",
    ]);
    assert_eq!(code, 0);
    assert_schema(&report);
    assert_eq!(report["result"]["disagreements"], 0);
    assert_eq!(report["result"]["agreements"], 2);
}

#[test]
fn plotdata_emits_monotone_certified_column() {
    let fx = Fixtures::new("plot");
    let sft = fx.write("golden.json", GOLDEN);
    let cover = fx.write("symbols.json", SYMBOLS);
    let report_path = fx.path("report.json");
    let out = run(&[
        "entropy", "top", "--sft", &sft, "--cover", &cover, "--nmax", "16", "--out", &report_path,
    ]);
    assert_eq!(out.status.code(), Some(0));
    let (code, report) = run_json(&["plotdata", "--report", &report_path]);
    assert_eq!(code, 0);
    assert_schema(&report);
    let table = report["result"]["table"].as_str().unwrap();
    let mut lines = table.lines();
    assert!(lines.next().unwrap().starts_with('#'));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split_whitespace().map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 16);
    for pair in rows.windows(2) {
        assert!(pair[1][2] <= pair[0][2] + 1e-15, "certified column not monotone");
    }
}

#[test]
fn plotdata_with_empty_sequence_emits_header_only() {
    let fx = Fixtures::new("plot-empty");
    let report = fx.write(
        "empty.json",
        r#"{"schema":"locent-report/1","command":"entropy.top","ok":true,"seed":null,
           "budgets":{"nodes":1,"incidence":1,"assignments":1},"result":{"values":[]}}"#,
    );
    let (code, out) = run_json(&["plotdata", "--report", &report]);
    assert_eq!(code, 0);
    assert_eq!(out["result"]["table"], "# n value certified_upper\n");
}

#[test]
fn budget_env_var_is_honoured() {
    let fx = Fixtures::new("budget");
    let sft = fx.write("golden.json", GOLDEN);
    let cover = fx.write("symbols.json", SYMBOLS);
    let out = Command::new(bin())
        .env("LOCENT_BUDGET", "12345")
        .args(["entropy", "top", "--sft", &sft, "--cover", &cover, "--nmax", "4"])
        .output()
        .unwrap();
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["budgets"]["nodes"], 12345);
    // An explicit flag wins over the environment.
    let out = Command::new(bin())
        .env("LOCENT_BUDGET", "12345")
        .args([
            "entropy", "top", "--sft", &sft, "--cover", &cover, "--nmax", "4", "--budget", "999",
        ])
        .output()
        .unwrap();
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["budgets"]["nodes"], 999);
}

#[test]
fn timings_flag_adds_the_only_nondeterministic_field() {
    let fx = Fixtures::new("timings");
    let sft = fx.write("golden.json", GOLDEN);
    let cover = fx.write("symbols.json", SYMBOLS);
    let (code, report) = run_json(&[
        "entropy", "top", "--sft", &sft, "--cover", &cover, "--nmax", "4", "--timings",
    ]);
    assert_eq!(code, 0);
    assert_schema(&report);
    assert!(report["timings"]["elapsed_ms"].is_u64());
}
