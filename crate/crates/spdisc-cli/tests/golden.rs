//! Golden-file tests: every command run on checked-in fixtures must produce
//! byte-identical reports, and the documented exit codes must hold.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn golden(name: &str) -> Vec<u8> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read(&path).unwrap_or_else(|e| panic!("missing golden {}: {e}", path.display()))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spdisc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn assert_golden(args: &[&str], golden_name: &str) {
    let out = run(args);
    assert!(
        out.status.success(),
        "command failed: {:?}\nstderr: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    let expected = golden(golden_name);
    assert!(
        out.stdout == expected,
        "output of {:?} deviates from golden {golden_name}:\n--- got ---\n{}\n--- want ---\n{}",
        args,
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&expected)
    );
}

fn assert_exit(args: &[&str], code: i32) {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(code),
        "args: {:?}\nstderr: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(!out.stderr.is_empty(), "error path must name the rule");
}

fn path_arg(name: &str) -> String {
    fixture(name).display().to_string()
}

#[test]
fn golden_eval() {
    assert_golden(
        &[
            "eval",
            "--expansion",
            &path_arg("expansion_const.json"),
            "--xi",
            "0.3,0.1",
            "--eta",
            "0.5,0.0",
        ],
        "eval_const.json",
    );
    assert_golden(
        &[
            "eval",
            "--expansion",
            &path_arg("expansion_linear.json"),
            "--xi",
            "0.0,0.5",
            "--eta",
            "0.9,0.0",
        ],
        "eval_linear.json",
    );
}

#[test]
fn golden_check_spd() {
    assert_golden(
        &["check-spd", "--input", &path_arg("indexset_full.json")],
        "checkspd_full.json",
    );
    assert_golden(
        &["check-spd", "--input", &path_arg("indexset_even.json")],
        "checkspd_even.json",
    );
    // A finite expansion always fails with a concrete progression.
    assert_golden(
        &["check-spd", "--input", &path_arg("expansion_const.json")],
        "checkspd_expansion.json",
    );
}

#[test]
fn golden_witness() {
    assert_golden(
        &[
            "witness",
            "--expansion",
            &path_arg("expansion_const.json"),
            "--progression",
            "2,1,2,1",
        ],
        "witness_const.json",
    );
    assert_golden(
        &[
            "witness",
            "--expansion",
            &path_arg("expansion_shadow20.json"),
            "--progression",
            "4,1,2,1",
        ],
        "witness_shadow.json",
    );
}

#[test]
fn golden_gram() {
    assert_golden(
        &[
            "gram",
            "--expansion",
            &path_arg("expansion_const.json"),
            "--points",
            &path_arg("points_pair.json"),
        ],
        "gram_pair.json",
    );
    // Antipodal-free random configuration with a rich expansion: positive
    // smallest eigenvalue, recorded in the golden.
    assert_golden(
        &[
            "gram",
            "--expansion",
            &path_arg("expansion_rich.json"),
            "--points",
            &path_arg("points_sampled.json"),
        ],
        "gram_rich.json",
    );
    let report: serde_json::Value =
        serde_json::from_slice(&golden("gram_rich.json")).expect("golden parses");
    assert!(report["payload"]["min_eigenvalue"].as_f64().unwrap() > 0.0);

    // One point: the matrix is [coefficient sum], which is its eigenvalue.
    assert_golden(
        &[
            "gram",
            "--expansion",
            &path_arg("expansion_rich.json"),
            "--points",
            &path_arg("points_single.json"),
        ],
        "gram_single.json",
    );
    // A roots-of-unity witness configuration makes the constant kernel's
    // Gram matrix all-ones, hence singular.
    assert_golden(
        &[
            "gram",
            "--expansion",
            &path_arg("expansion_const.json"),
            "--points",
            &path_arg("points_witness.json"),
        ],
        "gram_witness.json",
    );
    let report: serde_json::Value =
        serde_json::from_slice(&golden("gram_witness.json")).expect("golden parses");
    let payload = &report["payload"];
    assert!(
        payload["min_eigenvalue"].as_f64().unwrap()
            <= 1e-9 * payload["trace"].as_f64().unwrap()
    );
}

#[test]
fn golden_translate() {
    assert_golden(
        &[
            "translate",
            "--direction",
            "cos-to-torus",
            "--input",
            &path_arg("cos_11.json"),
        ],
        "translate_cos_to_torus.json",
    );
    assert_golden(
        &[
            "translate",
            "--direction",
            "torus-to-cos",
            "--input",
            &path_arg("torus_sym.json"),
            "--round-trip",
        ],
        "translate_torus_to_cos.json",
    );
    assert_golden(
        &[
            "translate",
            "--direction",
            "circle-to-cos",
            "--input",
            &path_arg("circle_sym.json"),
        ],
        "translate_circle_to_cos.json",
    );
    assert_golden(
        &[
            "translate",
            "--direction",
            "cos-to-circle",
            "--input",
            &path_arg("cos1d.json"),
            "--round-trip",
        ],
        "translate_cos_to_circle.json",
    );
}

#[test]
fn golden_sample_and_determinism() {
    assert_golden(
        &["sample", "--dim-q", "2", "--dim-p", "3", "--count", "2", "--seed", "11"],
        "sample_11.json",
    );
    assert_golden(
        &["sample", "--dim-q", "1", "--dim-p", "1", "--count", "0", "--seed", "1"],
        "sample_empty.json",
    );
    // Identical seeds give byte-identical output across invocations.
    let a = run(&["sample", "--dim-q", "4", "--dim-p", "2", "--count", "5", "--seed", "99"]);
    let b = run(&["sample", "--dim-q", "4", "--dim-p", "2", "--count", "5", "--seed", "99"]);
    assert_eq!(a.stdout, b.stdout);
    // Every emitted coordinate vector is unit norm within 1e-12.
    let doc: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    for point in doc["points"].as_array().unwrap() {
        for slot in ["z", "w"] {
            let norm_sq: f64 = point[slot]
                .as_array()
                .unwrap()
                .iter()
                .map(|pair| {
                    let re = pair[0].as_f64().unwrap();
                    let im = pair[1].as_f64().unwrap();
                    re * re + im * im
                })
                .sum();
            assert!((norm_sq.sqrt() - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn gram_matrix_dump() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("matrix.txt");
    let out = run(&[
        "gram",
        "--expansion",
        &path_arg("expansion_const.json"),
        "--points",
        &path_arg("points_pair.json"),
        "--dump-matrix",
        dump.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&dump).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    for line in lines {
        let numbers: Vec<&str> = line.split(' ').collect();
        assert_eq!(numbers.len(), 4); // 2 entries x (re, im)
        for n in numbers {
            let _: f64 = n.parse().expect("17-digit float parses");
            assert!(n.contains('e'), "scientific notation expected: {n}");
        }
    }
}

#[test]
fn exit_codes_are_stable() {
    // 2: validation failure (circle support rule violated).
    assert_exit(
        &["check-spd", "--input", &path_arg("expansion_invalid.json")],
        2,
    );
    // 3: domain error (q = 1 requires boundary points).
    assert_exit(
        &[
            "eval",
            "--expansion",
            &path_arg("expansion_q1.json"),
            "--xi",
            "0.5,0.0",
            "--eta",
            "0.2,0.0",
        ],
        3,
    );
    // 4: capacity error (combined modulus above the cap).
    assert_exit(
        &["check-spd", "--input", &path_arg("indexset_capacity.json")],
        4,
    );
    // 5: supplied progression meets the shadow.
    assert_exit(
        &[
            "witness",
            "--expansion",
            &path_arg("expansion_linear.json"),
            "--progression",
            "1,0,1,0",
        ],
        5,
    );
    // 6: duplicate points.
    assert_exit(
        &[
            "gram",
            "--expansion",
            &path_arg("expansion_const.json"),
            "--points",
            &path_arg("points_dup.json"),
        ],
        6,
    );
    // 7: symmetry violation.
    assert_exit(
        &[
            "translate",
            "--direction",
            "torus-to-cos",
            "--input",
            &path_arg("torus_asym.json"),
        ],
        7,
    );
}

#[test]
fn malformed_json_is_a_validation_failure() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{not json").unwrap();
    let out = run(&["check-spd", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["eval", "--expansion", path.to_str().unwrap(), "--xi", "0,0", "--eta", "0,0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn empty_expansion_is_valid_and_evaluates_to_zero() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.json");
    std::fs::write(&path, r#"{"q": 2, "p": 2, "coefficients": []}"#).unwrap();
    let out = run(&["eval", "--expansion", path.to_str().unwrap(), "--xi", "0.5,0", "--eta", "0,0"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["payload"]["value"][0].as_f64(), Some(0.0));
    // The witness over an empty family is the all-zero quadratic form.
    let out = run(&["witness", "--expansion", path.to_str().unwrap()]);
    assert!(out.status.success());
}

#[test]
fn q1_expansion_evaluates_on_the_boundary() {
    let out = run(&[
        "eval",
        "--expansion",
        &path_arg("expansion_q1.json"),
        "--xi",
        "0.0,1.0",
        "--eta",
        "0.5,0.5",
    ]);
    assert!(out.status.success());
}

#[test]
fn timing_flag_adds_the_field() {
    let out = run(&[
        "check-spd",
        "--input",
        &path_arg("indexset_full.json"),
        "--timing",
    ]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["timing_ms"].as_f64().is_some());
}
