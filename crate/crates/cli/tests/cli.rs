//! Black-box tests of the command-line binary.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_autalg"))
}

fn run_with_stdin(args: &[&str], stdin: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn");
    child
        .stdin
        .as_mut()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().expect("wait")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn write_temp(name: &str, contents: &str) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(format!("autalg-test-{}-{}", std::process::id(), name));
    std::fs::write(&path, contents).unwrap();
    path
}

const ELEM_Z_XY: &str = "[comm] n=3 field=q\nx = x;\ny = y;\nz = z + x*y;";

#[test]
fn parse_canonicalizes_and_round_trips() {
    let out = run_with_stdin(&["parse", "-"], "[comm] n=3 field=q\nz = z + y*x;\ny = y;\nx = x;");
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), ELEM_Z_XY);
}

#[test]
fn parse_errors_exit_2() {
    let out = run_with_stdin(&["parse", "-"], "[comm] n=3 field=q\nx = x + w;\ny = y;\nz = z;");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn compose_and_invert() {
    let f = write_temp("f.endo", ELEM_Z_XY);
    let out = bin()
        .args(["invert", "--to", "4", f.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(
        stdout(&out).trim(),
        "[comm] n=3 field=q\nx = x;\ny = y;\nz = z - x*y;"
    );

    let g = write_temp("g.endo", stdout(&out).trim());
    let out = bin()
        .args(["compose", f.to_str().unwrap(), g.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "[comm] n=3 field=q\nx = x;\ny = y;\nz = z;");
}

#[test]
fn filtration_reports_level() {
    let f = write_temp("filt.endo", ELEM_Z_XY);
    let out = bin()
        .args(["filtration", "--cap", "6", f.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).contains("level: 2"));
}

#[test]
fn synthesized_words_parse_back_and_expand() {
    let out = bin()
        .args(["synthesize", "poly", "--expr", "x^2*y"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let word_text = stdout(&out);
    let parsed = run_with_stdin(&["parse", "--word", "-"], &word_text);
    assert!(parsed.status.success());
    assert_eq!(stdout(&parsed).trim(), word_text.trim());
    let w = autalg::text::parse_word(&word_text).unwrap();
    let expanded = w.expand().unwrap();
    let want = autalg::text::parse_endo("[comm] n=3 field=q\nx = x;\ny = y;\nz = z + x^2*y;")
        .unwrap();
    assert_eq!(expanded, want);
}

#[test]
fn torus_valuation_prints_the_exponent() {
    let f = write_temp("val.endo", "[comm] n=3 field=q\nx = x;\ny = y + x^2;\nz = z;");
    let out = bin()
        .args(["torus", "valuation", "--weights", "1,3,0", f.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "-1");
}

#[test]
fn hike_prints_a_plan() {
    let out = bin().args(["hike", "--targets", "1,2"]).output().unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).contains("weight"));
}

#[test]
fn verify_known_and_unknown_suites() {
    let out = bin().args(["verify", "inclexcl"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("15 passed, 0 failed"));

    let out = bin().args(["verify", "bogus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_mode_emits_line_delimited_records() {
    let out = bin()
        .args(["verify", "hiking", "--seed", "3", "--json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut saw_summary = false;
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).expect("valid json per line");
        assert_eq!(v["suite"], "hiking");
        assert_eq!(v["seed"], 3);
        if v.get("passed").is_some() {
            saw_summary = true;
            assert_eq!(v["failed"], 0);
        }
    }
    assert!(saw_summary);
}

#[test]
fn approximate_emits_word_and_residual() {
    let ctx = autalg::poly::PolyCtx::comm(3, autalg::coeffs::FieldSpec::Q);
    let nagata = autalg::approx::nagata(&ctx).unwrap();
    let f = write_temp("nagata.endo", &autalg::text::format_endo(&nagata));
    let out = bin()
        .args(["approximate", "--to", "4", "--seed", "5", f.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let parts: Vec<&str> = text.splitn(2, "\n---\n").collect();
    assert_eq!(parts.len(), 2);
    let word = autalg::text::parse_word(parts[0]).unwrap();
    assert!(!word.is_empty());
    let residual = autalg::text::parse_endo(parts[1].trim()).unwrap();
    assert!(residual.filtration(4).level >= 4);
}
