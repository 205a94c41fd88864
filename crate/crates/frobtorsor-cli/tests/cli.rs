//! End-to-end tests of the command-line binary: exit codes, JSON shapes,
//! determinism, the matrix → homdim round trip, and the size-cap
//! environment variable.

use std::io::Write as _;
use std::process::{Command, Output};

use serde_json::Value;

use frobtorsor::algebra::{FieldSpec, PolyRing};
use frobtorsor::descent::{self, TorsorSpec};
use frobtorsor::homsolver::solve_hom;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_frobtorsor"));
    // Isolate from any ambient cap override.
    cmd.env_remove("FROBTORSOR_CAP");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

fn stderr_str(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is UTF-8")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_str(&stdout_str(out)).expect("stdout is one JSON document")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

/// The 4×4 identity over the cover of F₂[x], as a raw matrix document.
fn identity_matrix_json(size: usize) -> String {
    let zero = r#"{"p":2,"e":1,"vars":["u"],"laurent":[false],"terms":[]}"#;
    let one = r#"{"p":2,"e":1,"vars":["u"],"laurent":[false],"terms":[{"exp":[0],"coeff":1}]}"#;
    let rows: Vec<String> = (0..size)
        .map(|r| {
            let cells: Vec<&str> = (0..size).map(|c| if r == c { one } else { zero }).collect();
            format!("[{}]", cells.join(","))
        })
        .collect();
    let basis: Vec<String> = (0..size).map(|i| format!("\"b{i}\"")).collect();
    format!(
        r#"{{"format":1,"family":"custom","p":2,"e":1,"size":{size},
            "base_vars":["x"],"cover_vars":["u"],"laurent":[false],
            "row_basis":[{b}],"col_basis":[{b}],"entries":[{rows}]}}"#,
        b = basis.join(","),
        rows = rows.join(",")
    )
}

fn sl2_witness_spec_json() -> String {
    let ring = PolyRing::univar(FieldSpec::new(2, 1).expect("F2"), "x", false).expect("ring");
    let spec = TorsorSpec::Sl2Char2 {
        f11: ring.one(),
        f12: ring.from_int_terms(&[(&[1], 1)]).expect("a"),
        f21: ring.from_int_terms(&[(&[1], 1), (&[2], 1)]).expect("a+a²"),
        f22: ring
            .from_int_terms(&[(&[0], 1), (&[2], 1), (&[3], 1)])
            .expect("1+a²+a³"),
    };
    serde_json::to_string(&spec).expect("serialize")
}

#[test]
fn check_mu_p_saturated_exits_zero_with_versioned_json() {
    let out = run(&["check", "--family", "mu_p", "--p", "2", "--m", "3"]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_str(&out));
    let doc = stdout_json(&out);
    assert_eq!(doc["format"], 1);
    assert_eq!(doc["saturated"], true);
    assert_eq!(doc["method"], "both");
    assert_eq!(doc["hom_dimension"], 1);
    assert_eq!(doc["all_heights"], true);
    // Absent optional fields are omitted, not null.
    assert!(doc.get("image_note").is_none());
}

#[test]
fn check_assert_saturated_exits_one_when_unsaturated() {
    let out = run(&[
        "check",
        "--family",
        "mu_p",
        "--p",
        "2",
        "--m",
        "4",
        "--assert-saturated",
    ]);
    assert_eq!(exit_code(&out), 1);
    let doc = stdout_json(&out);
    assert_eq!(doc["saturated"], false);
    assert_eq!(doc["hom_dimension"], 2);
    // Without the assertion flag the same query succeeds.
    let plain = run(&["check", "--family", "mu_p", "--p", "2", "--m", "4"]);
    assert_eq!(exit_code(&plain), 0);
}

#[test]
fn check_text_format_is_a_human_summary() {
    let out = run(&[
        "check", "--family", "mu_p", "--p", "2", "--m", "4", "--format", "text",
    ]);
    assert_eq!(exit_code(&out), 0);
    let text = stdout_str(&out);
    assert!(text.contains("saturated: false"), "got: {text}");
    assert!(text.contains("hom dimension 2"), "got: {text}");
}

#[test]
fn homdim_identity_matrix_of_size_four_is_four() {
    let out = run(&["homdim", "--json", &identity_matrix_json(4)]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_str(&out));
    let doc = stdout_json(&out);
    assert_eq!(doc["format"], 1);
    assert_eq!(doc["dimension"], 4);
    assert!(doc.get("basis").is_none());
    // With --basis, the canonical basis has four vectors of length four.
    let with_basis = run(&["homdim", "--json", &identity_matrix_json(4), "--basis"]);
    let doc = stdout_json(&with_basis);
    let basis = doc["basis"].as_array().expect("basis array");
    assert_eq!(basis.len(), 4);
    assert!(basis.iter().all(|v| v.as_array().unwrap().len() == 4));
}

#[test]
fn matrix_output_feeds_homdim_and_matches_in_process_pipeline() {
    for (p, m) in [(2u64, 3i64), (2, 4), (3, 6), (5, 7)] {
        let matrix_out = run(&[
            "matrix",
            "--family",
            "mu_p",
            "--p",
            &p.to_string(),
            "--m",
            &m.to_string(),
        ]);
        assert_eq!(exit_code(&matrix_out), 0);
        let mut file = tempfile::NamedTempFile::new().expect("temp file");
        file.write_all(&matrix_out.stdout).expect("write");
        let path = file.path().to_str().expect("path").to_string();
        let homdim_out = run(&["homdim", "--input", &path]);
        assert_eq!(exit_code(&homdim_out), 0, "stderr: {}", stderr_str(&homdim_out));
        let cli_dim = stdout_json(&homdim_out)["dimension"].as_u64().expect("dim");

        let field = FieldSpec::new(p, 1).expect("field");
        let spec = TorsorSpec::MuP { field, m };
        let lib_dim = solve_hom(&descent::build(&spec).expect("build"))
            .expect("solve")
            .dimension as u64;
        assert_eq!(cli_dim, lib_dim, "p={p}, m={m}");
    }
}

#[test]
fn identical_invocations_are_byte_identical() {
    let witness = sl2_witness_spec_json();
    let invocations: Vec<Vec<&str>> = vec![
        vec!["check", "--family", "mu_p", "--p", "3", "--m", "6"],
        vec!["matrix", "--json", &witness],
        vec!["check", "--json", &witness, "--method", "both"],
        vec![
            "search",
            "--family",
            "alpha_powers",
            "--p",
            "2",
            "--degree-bound",
            "2",
            "--budget",
            "5",
            "--mode",
            "random",
            "--seed",
            "42",
        ],
        vec![
            "bounds",
            "h1-mu",
            "--p",
            "2",
            "--gamma",
            "1",
            "--punctures",
            "2",
            "--m",
            "2",
        ],
    ];
    for args in &invocations {
        let first = run(args);
        let second = run(args);
        assert_eq!(exit_code(&first), 0, "stderr: {}", stderr_str(&first));
        assert_eq!(
            first.stdout, second.stdout,
            "rerun of {args:?} differed in output bytes"
        );
    }
}

#[test]
fn search_exhaustive_finds_the_sl2_witness_within_degree_three() {
    let out = run(&[
        "search",
        "--family",
        "sl2_char2",
        "--p",
        "2",
        "--degree-bound",
        "3",
        "--budget",
        "400",
    ]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_str(&out));
    let doc = stdout_json(&out);
    assert_eq!(doc["format"], 1);
    assert_eq!(doc["order"], "graded coefficient-lexicographic");
    let count = doc["count"].as_u64().expect("count");
    assert!(count > 0, "no saturated specs found");
    let witness: Value = serde_json::from_str(&sl2_witness_spec_json()).expect("witness");
    let specs = doc["specs"].as_array().expect("specs");
    assert_eq!(specs.len(), count as usize);
    assert!(
        specs.iter().any(|s| *s == witness),
        "witness missing from exhaustive search results"
    );
}

#[test]
fn infeasible_exhaustive_search_is_an_input_error() {
    let out = run(&[
        "search",
        "--family",
        "sl2_char2",
        "--p",
        "2",
        "--degree-bound",
        "8",
        "--budget",
        "1",
    ]);
    assert_eq!(exit_code(&out), 2);
    assert!(
        stderr_str(&out).contains("infeasible"),
        "stderr: {}",
        stderr_str(&out)
    );
}

#[test]
fn random_search_requires_a_seed() {
    let out = run(&[
        "search",
        "--family",
        "alpha_powers",
        "--p",
        "2",
        "--degree-bound",
        "2",
        "--budget",
        "1",
        "--mode",
        "random",
    ]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn bertini_reduces_a_plane_spec_to_the_line() {
    let field = FieldSpec::new(2, 1).expect("F2");
    let ring = PolyRing::new(field, &["x1", "x2"], &[false, false]).expect("ring");
    let f = ring
        .from_int_terms(&[(&[1, 0], 1), (&[0, 1], 1)])
        .expect("x1+x2");
    let spec = TorsorSpec::AlphaPowers { f: vec![f] };
    let text = serde_json::to_string(&spec).expect("serialize");
    let out = run(&["bertini", "--json", &text]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr_str(&out));
    let doc = stdout_json(&out);
    assert_eq!(doc["format"], 1);
    assert!(doc["plan"]["M"].as_i64().expect("M") > doc["plan"]["d"].as_i64().expect("d"));
    let reduced = &doc["reduced"];
    assert_eq!(reduced["family"], "alpha_powers");
    assert_eq!(reduced["f"][0]["vars"].as_array().expect("vars").len(), 1);
    // The reduced spec is still saturated.
    let reduced_text = serde_json::to_string(reduced).expect("reduced");
    let check = run(&["check", "--json", &reduced_text, "--assert-saturated"]);
    assert_eq!(exit_code(&check), 0, "stderr: {}", stderr_str(&check));
}

#[test]
fn bounds_embedding_facts() {
    let rejected = run(&[
        "bounds",
        "embed",
        "--p",
        "2",
        "--gamma",
        "0",
        "--punctures",
        "1",
        "--orders",
        "2,2",
    ]);
    assert_eq!(exit_code(&rejected), 0);
    let doc = stdout_json(&rejected);
    assert_eq!(doc["embeds"], false);
    assert_eq!(doc["rank"], 0);
    assert_eq!(doc["factor_count"], 2);

    let trivial = run(&[
        "bounds", "embed", "--p", "5", "--gamma", "0", "--punctures", "1",
    ]);
    assert_eq!(stdout_json(&trivial)["embeds"], true);

    let cyclic = run(&[
        "bounds",
        "embed",
        "--p",
        "2",
        "--gamma",
        "0",
        "--punctures",
        "2",
        "--orders",
        "8",
    ]);
    assert_eq!(stdout_json(&cyclic)["embeds"], true);

    let h1 = run(&[
        "bounds", "h1-mu", "--p", "2", "--gamma", "0", "--punctures", "2", "--m", "3",
    ]);
    let doc = stdout_json(&h1);
    assert_eq!(doc["modulus"], 8);
    assert_eq!(doc["rank"], 1);

    let basis = run(&["bounds", "alpha-basis", "--p", "2", "--bound", "6"]);
    let doc = stdout_json(&basis);
    assert_eq!(doc["basis"].as_array().expect("basis").len(), 3);
}

#[test]
fn malformed_json_is_an_input_error_naming_the_problem() {
    let out = run(&["check", "--json", "this is not json"]);
    assert_eq!(exit_code(&out), 2);
    assert!(
        stderr_str(&out).contains("malformed torsor spec JSON"),
        "stderr: {}",
        stderr_str(&out)
    );

    let unknown = run(&[
        "check",
        "--json",
        r#"{"format":1,"family":"nope","p":2,"e":1}"#,
    ]);
    assert_eq!(exit_code(&unknown), 2);
    assert!(stderr_str(&unknown).contains("unknown torsor family"));

    // A family invariant violation names the requirement: a determinant-0
    // matrix is not an SL₂ spec.
    let ring = PolyRing::univar(FieldSpec::new(2, 1).expect("F2"), "x", false).expect("ring");
    let bad = TorsorSpec::Sl2Char2 {
        f11: ring.one(),
        f12: ring.one(),
        f21: ring.one(),
        f22: ring.one(),
    };
    let out = run(&[
        "check",
        "--json",
        &serde_json::to_string(&bad).expect("serialize"),
    ]);
    assert_eq!(exit_code(&out), 2);
    assert!(
        stderr_str(&out).contains("det"),
        "stderr: {}",
        stderr_str(&out)
    );

    let matrix_err = run(&["homdim", "--json", "{\"format\":2}"]);
    assert_eq!(exit_code(&matrix_err), 2);
    assert!(stderr_str(&matrix_err).contains("malformed descent matrix JSON"));
}

#[test]
fn missing_spec_source_is_an_input_error() {
    let out = run(&["check"]);
    assert_eq!(exit_code(&out), 2);
    assert!(stderr_str(&out).contains("no torsor spec"));
    let homdim = run(&["homdim"]);
    assert_eq!(exit_code(&homdim), 2);
    assert!(stderr_str(&homdim).contains("no matrix"));
}

#[test]
fn cap_env_var_overrides_the_matrix_size_cap() {
    // μ_p at p = 5 needs a 5×5 matrix; a cap of 4 rejects it.
    let blocked = bin()
        .env("FROBTORSOR_CAP", "4")
        .args(["check", "--family", "mu_p", "--p", "5", "--m", "2"])
        .output()
        .expect("binary runs");
    assert_eq!(exit_code(&blocked), 2);
    let err = stderr_str(&blocked);
    assert!(err.contains("exceeds cap"), "stderr: {err}");
    assert!(err.contains("FROBTORSOR_CAP"), "stderr: {err}");

    // A generous override allows it.
    let allowed = bin()
        .env("FROBTORSOR_CAP", "100")
        .args(["check", "--family", "mu_p", "--p", "5", "--m", "2"])
        .output()
        .expect("binary runs");
    assert_eq!(exit_code(&allowed), 0, "stderr: {}", stderr_str(&allowed));

    // And without the variable the default cap admits it too.
    let default_run = run(&["check", "--family", "mu_p", "--p", "5", "--m", "2"]);
    assert_eq!(exit_code(&default_run), 0);

    // A malformed cap is an input error naming the variable.
    let invalid = bin()
        .env("FROBTORSOR_CAP", "not-a-number")
        .args(["check", "--family", "mu_p", "--p", "2", "--m", "3"])
        .output()
        .expect("binary runs");
    assert_eq!(exit_code(&invalid), 2);
    assert!(
        stderr_str(&invalid).contains("FROBTORSOR_CAP"),
        "stderr: {}",
        stderr_str(&invalid)
    );
}
