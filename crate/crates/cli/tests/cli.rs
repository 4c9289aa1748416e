use serde_json::Value;
use std::io::Write;
use std::process::Command;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn hhfejer(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_hhfejer")).args(args).output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn report(args: &[&str]) -> (i32, Value) {
    let r = hhfejer(args);
    let v = serde_json::from_str(r.stdout.trim()).unwrap_or_else(|e| panic!("{e}: {}{}", r.stdout, r.stderr));
    (r.code, v)
}

fn validator() -> jsonschema::Validator {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../schema/report.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).unwrap()
}

fn assert_valid(v: &Value) {
    let errors: Vec<String> = validator().iter_errors(v).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}\n{v}");
}

// A certified input that violates the derivative bound as stated
// (found by the sweep).
const FAILING_BOUND: [&str; 12] = [
    "verify",
    "--ineq",
    "bound-2.6",
    "--f",
    "0.483*x + 1.697*x^2 + 1.209*exp(x/3.182) + 0.643",
    "--h",
    "sqrt(x)",
    "--a",
    "0.3287121678444958",
    "--b",
    "2.0499753515595334",
    "--force",
];

#[test]
fn exit_codes_follow_status() {
    let (code, v) = report(&["verify", "--ineq", "hh-1.3", "--f", "x", "--a", "1", "--b", "2"]);
    assert_eq!((code, v["status"].as_str()), (0, Some("PASS")));

    let (code, v) = report(&FAILING_BOUND[..11]);
    assert_eq!((code, v["status"].as_str()), (1, Some("FAIL")));

    let (code, v) = report(&["verify", "--ineq", "identity-2.1", "--f", "ln(x - 1.5)", "--h", "x", "--a", "1", "--b", "2"]);
    assert_eq!((code, v["status"].as_str()), (3, Some("NUMERICAL-FAILURE")));

    let (code, v) = report(&["verify", "--ineq", "hh-1.3", "--f", "-x^2", "--a", "1", "--b", "2"]);
    assert_eq!((code, v["status"].as_str()), (4, Some("HYPOTHESIS-REJECTED")));
    assert!(v["sides"].is_null());
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["verify", "--ineq", "hh-1.3", "--f", "1/x", "--a", "0", "--b", "2"][..],
        &["verify", "--ineq", "hh-9.9", "--f", "x", "--a", "1", "--b", "2"],
        &["verify", "--ineq", "fejer-1.6", "--f", "x", "--a", "1", "--b", "2"],
        &["verify", "--ineq", "hh-1.3", "--f", "x +", "--a", "1", "--b", "2"],
        &["verify", "--ineq", "bound-2.23", "--f", "x", "--a", "1", "--b", "2", "--q", "1"],
        &["verify", "--ineq", "bound-2.10", "--f", "x", "--g", "1", "--a", "1", "--b", "2", "--alpha", "2"],
        &["verify", "--ineq", "lemma-1", "--f", "x", "--a", "1", "--b", "2", "--theta", "1.5"],
        &["verify", "--ineq", "hh-1.3", "--a", "1", "--b", "2"],
        &["sweep", "--count", "0"],
        &["sweep", "--count", "2", "--q-list", "0.5"],
        &["constants", "--family", "zeta", "--a", "1", "--b", "2"],
        &["classify", "--f", "x", "--a", "1", "--b", "2", "--s", "0"],
        &["bogus"],
    ] {
        let r = hhfejer(args);
        assert_eq!(r.code, 2, "{args:?}: {}", r.stderr);
        assert!(r.stdout.is_empty());
    }
}

#[test]
fn forced_rejection_keeps_status_and_adds_sides() {
    let (code, v) = report(&["verify", "--ineq", "hh-1.3", "--f", "-x^2", "--a", "1", "--b", "2", "--force"]);
    assert_eq!(code, 4);
    assert!(v["sides"]["mid"].is_number());
    assert!(!v["warnings"].as_array().unwrap().is_empty());
    assert_valid(&v);
}

#[test]
fn reports_validate_against_schema() {
    let cases: [&[&str]; 6] = [
        &["verify", "--ineq", "hh-1.3", "--f", "x", "--a", "1", "--b", "2"],
        &["verify", "--ineq", "fejer-frac-1.7", "--f", "x^2", "--g-symmetrize", "x", "--a", "1", "--b", "2", "--alpha", "0.5", "--oracle", "--oracle-n", "20000"],
        &["verify", "--ineq", "bound-2.9", "--f", "x^2", "--g-symmetrize", "x", "--a", "1", "--b", "2", "--alpha", "0.5", "--variant", "small-alpha"],
        &["verify", "--ineq", "lemma-1", "--f", "x", "--a", "1", "--b", "2", "--theta", "0.5"],
        &["verify", "--ineq", "identity-2.1", "--f", "ln(x - 1.5)", "--h", "x", "--a", "1", "--b", "2"],
        &["verify", "--ineq", "hh-1.3", "--f", "-x^2", "--a", "1", "--b", "2"],
    ];
    for args in cases {
        assert_valid(&report(args).1);
    }
    let (_, v) = report(&FAILING_BOUND);
    assert_valid(&v);
    let sweep = hhfejer(&["sweep", "--count", "2", "--seed", "1"]);
    for line in sweep.stdout.lines() {
        assert_valid(&serde_json::from_str(line).unwrap());
    }
}

#[test]
fn schema_rejects_unknown_fields() {
    let (_, mut v) = report(&["verify", "--ineq", "hh-1.3", "--f", "x", "--a", "1", "--b", "2"]);
    v["extra"] = Value::Bool(true);
    assert!(!validator().is_valid(&v));
}

#[test]
fn floats_have_seventeen_digits() {
    let r = hhfejer(&["verify", "--ineq", "hh-1.3", "--f", "x", "--a", "1", "--b", "2"]);
    assert!(r.stdout.contains("\"mid\":1.3862943611198906e0") || r.stdout.contains("\"mid\":1.3862943611198908e0"), "{}", r.stdout);
}

#[test]
fn identity_residual_small() {
    let (code, v) = report(&["verify", "--ineq", "identity-2.1", "--f", "x", "--h", "x", "--a", "1", "--b", "2"]);
    assert_eq!(code, 0);
    let res = (v["sides"]["lhs"].as_f64().unwrap() - v["sides"]["rhs"].as_f64().unwrap()).abs();
    assert!(res <= 1e-9, "{res}");
}

#[test]
fn config_file_and_flag_precedence() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "# settings\nout = csv\nabs-tol = 1e-11\ngrid = 11,11,5").unwrap();
    let p = f.path().to_str().unwrap();
    let csv = hhfejer(&["verify", "--ineq", "hh-1.3", "--f", "x", "--a", "1", "--b", "2", "--config", p]);
    assert_eq!(csv.code, 0);
    let lines: Vec<&str> = csv.stdout.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("inequality,status,lhs,mid,rhs,margin,quad_error_budget"));
    assert!(lines[1].starts_with("hh-1.3,PASS,"));

    let (_, v) = report(&["verify", "--ineq", "hh-1.3", "--f", "x", "--a", "1", "--b", "2", "--config", p, "--out", "json"]);
    assert_eq!(v["params"]["settings"]["tolerance"]["abs"].as_f64(), Some(1e-11));
    assert_eq!(v["params"]["settings"]["grid"]["nx"].as_u64(), Some(11));

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    writeln!(bad, "nonsense = 1").unwrap();
    let r = hhfejer(&["verify", "--ineq", "hh-1.3", "--f", "x", "--a", "1", "--b", "2", "--config", bad.path().to_str().unwrap()]);
    assert_eq!(r.code, 2);
}

#[test]
fn text_output_names_status() {
    let r = hhfejer(&["verify", "--ineq", "hh-1.3", "--f", "x", "--a", "1", "--b", "2", "--out", "text"]);
    assert!(r.stdout.starts_with("hh-1.3  PASS"), "{}", r.stdout);
}

#[test]
fn sweep_stream_is_ordered_and_summarized() {
    let a = hhfejer(&["sweep", "--count", "3", "--seed", "11", "--jobs", "1", "--out", "csv"]);
    let b = hhfejer(&["sweep", "--count", "3", "--seed", "11", "--jobs", "4", "--out", "csv"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.code, b.code);
    assert_eq!(a.stdout.lines().count(), 1 + 3 * 15);
    assert!(a.stderr.contains("summary reports=45"), "{}", a.stderr);
    let expect = if a.stdout.contains(",FAIL,") { 1 } else { 0 };
    assert_eq!(a.code, expect);
}

#[test]
fn constants_examples() {
    let (code, v) = report(&["constants", "--family", "zeta", "--h", "0", "--a", "1", "--b", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["engine"], serde_json::json!([0.0, 0.0, 0.0]));

    let (_, v) = report(&["constants", "--family", "c-alpha", "--alpha", "1", "--a", "1", "--b", "2", "--variant", "small-alpha", "--oracle"]);
    for g in v["rel_gap"].as_array().unwrap() {
        assert!(g.as_f64().unwrap() <= 1e-6, "{v}");
    }

    let (_, v) = report(&["constants", "--family", "c-alpha-q", "--alpha", "0.5", "--q", "2", "--a", "1", "--b", "2"]);
    assert!(v["engine"].as_array().unwrap().iter().all(|c| c.as_f64().unwrap() >= 0.0));
}

#[test]
fn classify_examples() {
    let (code, v) = report(&["classify", "--f", "x^2", "--a", "1", "--b", "2"]);
    assert_eq!(code, 0);
    assert!(v["harmonic_check"]["witness"].is_null());
    let rule1 = &v["proposition"]["rules"][0];
    assert_eq!(rule1["status"], "fires");
    assert_eq!(rule1["direct_check_agrees"], true);

    let (_, v) = report(&["classify", "--f", "-x^2", "--a", "1", "--b", "2"]);
    assert!(v["harmonic_check"]["witness"].is_array());

    let (_, v) = report(&["classify", "--f", "x", "--a", "1", "--b", "2", "--s", "0.5"]);
    assert_eq!(v["harmonic_check"]["s"].as_f64(), Some(0.5));
}
