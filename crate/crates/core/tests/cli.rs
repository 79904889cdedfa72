use std::io::Write;
use std::process::{Command, Output};

use rrloc::exactnum::int;
use rrloc::fixedpoint::catalog;
use rrloc::lefschetz::rr_invariant;
use rrloc::reduction::{rr_reduced, Verdict};
use rrloc::report::Report;

fn rrloc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rrloc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn document(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn verify_cp1_passes() {
    let o = rrloc(&["verify", "--catalog", "cp1-k", "--k", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("verdict: PASS"), "{text}");
    assert!(text.contains("invariant multiplicity = 1"), "{text}");
}

#[test]
fn verify_cp1_double_lists_the_correction() {
    let o = rrloc(&["verify", "--catalog", "cp1-double"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("correction at -1"), "{text}");
    assert!(text.contains("verdict: PASS"), "{text}");
}

#[test]
fn json_report_round_trips_exact_values() {
    for (name, k) in [("cp1-double", "1"), ("cp2-k", "3"), ("su2-cp3", "4")] {
        let o = rrloc(&["verify", "--catalog", name, "--k", k, "--json"]);
        assert_eq!(o.status.code(), Some(0));
        let report: Report = serde_json::from_str(&stdout(&o)).unwrap();
        let p = catalog(name, Some(k.parse().unwrap())).unwrap();
        assert_eq!(report.verification.lefschetz, rr_invariant(&p).unwrap());
        assert_eq!(report.verification.reduced, rr_reduced(&p).unwrap());
        assert_eq!(report.verification.verdict, Verdict::Pass);
        let again = serde_json::to_string_pretty(&report).unwrap();
        assert_eq!(serde_json::from_str::<Report>(&again).unwrap(), report);
    }
}

#[test]
fn negative_control_exits_zero_with_not_asserted() {
    let o = rrloc(&["verify", "--catalog", "su2-cp1", "--k", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("NOT-ASSERTED"));
}

#[test]
fn disagreeing_sides_exit_one() {
    // Weyl-symmetric SO(3) data with extra local extrema at |μ| = 1; the
    // character closes up, but the data cannot come from a connected manifold.
    let doc = document(
        r#"{"group": "SO3", "components": [
            {"name": "a", "moment": 2, "weights": [1]},
            {"name": "b", "moment": -2, "weights": [-1]},
            {"name": "c", "moment": 1, "weights": [-1]},
            {"name": "d", "moment": -1, "weights": [1]}
        ]}"#,
    );
    let o = rrloc(&["verify", doc.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("verdict: FAIL"));
}

#[test]
fn character_output() {
    let o = rrloc(&["character", "--catalog", "cp1-k", "--k", "2"]);
    assert_eq!(stdout(&o).trim(), "t^-1 + 1 + t");
    let o = rrloc(&["character", "--catalog", "cp1-k", "--k", "0"]);
    assert_eq!(stdout(&o).trim(), "1");
    let o = rrloc(&["character", "--catalog", "cp1-k", "--k", "2", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["character"], serde_json::json!({"-1": 1, "0": 1, "1": 1}));
}

#[test]
fn inconsistent_instance_reports_stabilization_failure() {
    let doc = document(r#"{"group": "U1", "components": [{"name": "p", "moment": 1, "weights": [1]}]}"#);
    let o = rrloc(&["character", doc.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("did not stabilize"), "{}", stderr(&o));
}

#[test]
fn malformed_documents_exit_two() {
    let syntax = document(r#"{"group": "U1", "components": [ "#);
    let o = rrloc(&["verify", syntax.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line"), "{}", stderr(&o));

    let float = document(r#"{"group": "U1", "components": [{"name": "p", "moment": 0.5, "weights": [1]}]}"#);
    let o = rrloc(&["verify", float.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("$.components[0].moment"), "{}", stderr(&o));

    let o = rrloc(&["verify", "/nonexistent/instance.json"]);
    assert_eq!(o.status.code(), Some(2));
    let o = rrloc(&["verify", "--catalog", "no-such-entry"]);
    assert_eq!(o.status.code(), Some(2));
    let o = rrloc(&["verify"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn validation_errors_exit_two() {
    let doc = document(r#"{"group": "U1", "components": [{"name": "p", "moment": 0, "weights": [1]}]}"#);
    let o = rrloc(&["verify", doc.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn degree_bound_can_only_be_raised() {
    let o = rrloc(&["character", "--catalog", "cp1-k", "--degree-bound", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = rrloc(&["character", "--catalog", "cp1-k", "--degree-bound", "40"]);
    assert_eq!(stdout(&o).trim(), "t^-1 + 1 + t");
}

#[test]
fn residue_tables() {
    let o = rrloc(&["residues", "--catalog", "cp1-double"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("res -1"), "{text}");
    assert!(text.contains("every row sums to 0"), "{text}");

    let o = rrloc(&["residues", "--catalog", "cp1xcp1", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for row in v["rows"].as_array().unwrap() {
        let poles: Vec<&str> = row["entries"].as_array().unwrap().iter().map(|e| e["pole"].as_str().unwrap()).collect();
        assert_eq!(poles, vec!["0", "∞", "1"]);
    }
}

#[test]
fn catalog_dump_feeds_back_into_verify() {
    let o = rrloc(&["catalog", "cp2-line", "--k", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let doc = document(&stdout(&o));
    let o = rrloc(&["verify", doc.path().to_str().unwrap(), "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report: Report = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report.verification.lefschetz, int(3));

    // --k on a file is a tensor power
    let o = rrloc(&["verify", doc.path().to_str().unwrap(), "--k", "2", "--json"]);
    let report: Report = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report.verification.lefschetz, int(5));
}

#[test]
fn decimal_output_is_marked_approximate() {
    let o = rrloc(&["verify", "--catalog", "cp1-double", "--decimal"]);
    let text = stdout(&o);
    assert!(text.contains("1/2 (≈ 0.500000, approximate)"), "{text}");
}
