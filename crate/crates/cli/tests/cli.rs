use std::io::Write;
use std::process::{Command, Stdio};

use crdiam::{deserialize, run, serialize, JobSpec};

const BIN: &str = env!("CARGO_BIN_EXE_crdiam");

fn job(name: &str) -> String {
    std::fs::read_to_string(format!("{}/jobs/{name}.json", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(format!("{}/tests/golden/{name}.json", env!("CARGO_MANIFEST_DIR"))).unwrap()
}

fn crdiam(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut child = Command::new(BIN).args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

#[test]
fn golden_reports_match_byte_for_byte() {
    for name in ["residue_field_xy", "hypersurface_f3"] {
        let spec = JobSpec::from_json(&job(name)).unwrap();
        assert_eq!(serialize(&run(&spec).unwrap()), golden(name), "{name}");
    }
}

#[test]
fn golden_reports_round_trip() {
    for name in ["residue_field_xy", "hypersurface_f3"] {
        let text = golden(name);
        let r = deserialize(&text).unwrap();
        assert_eq!(serialize(&r), text);
        assert_eq!(deserialize(&serialize(&r)).unwrap(), r);
    }
}

#[test]
fn example_values() {
    let r = run(&JobSpec::from_json(&job("residue_field_xy")).unwrap()).unwrap();
    let betti = &r.resolve.as_ref().unwrap().betti;
    assert!(betti.windows(2).any(|w| w[0].1 == 1 && w[1].1 == 1));
    assert_eq!(r.crdeg.unwrap().verdict.value.finite(), Some(-1));
    assert_eq!(r.cocrdeg.unwrap().verdict.value.finite(), Some(0));
    assert!(r.cioperators.unwrap().audit_passed);
    assert!(r.verify.unwrap().iter().all(|l| l.passed));
}

#[test]
fn runs_are_deterministic() {
    let spec = JobSpec::from_json(&job("cyclic_f3")).unwrap();
    assert_eq!(serialize(&run(&spec).unwrap()), serialize(&run(&spec).unwrap()));
}

#[test]
fn path_and_stdin_agree() {
    let path = format!("{}/jobs/hypersurface_f2.json", env!("CARGO_MANIFEST_DIR"));
    let (c1, a, _) = crdiam(&["diameter", "--json", &path], "");
    let (c2, b, _) = crdiam(&["diameter", "--json"], &job("hypersurface_f2"));
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    assert!(a.contains("\"-inf\""));
}

#[test]
fn flags_override_the_job() {
    let (code, out, _) = crdiam(&["resolve", "--json", "--window", "-4", "5", "-"], &job("hypersurface_f2"));
    assert_eq!(code, 0);
    let r = deserialize(&out).unwrap();
    let p = r.provenance.unwrap();
    assert_eq!((p.window.lo, p.window.hi), (-4, 5));
    assert!(r.crdeg.is_none());
}

#[test]
fn audit_flag_dumps_lifts() {
    let (code, out, _) = crdiam(&["cioperators", "--audit", "--window", "-4", "4"], &job("hypersurface_f2"));
    assert_eq!(code, 0);
    assert!(out.contains("lift t1(0)"));
}

#[test]
fn exit_codes() {
    let (code, _, err) = crdiam(&["crdeg"], "{ not json");
    assert_eq!(code, 2, "{err}");
    let (code, _, _) = crdiam(&["crdeg"], &job("residue_field_xy").replace("\"x^2\", \"y^2\"", "\"x^2\", \"x^2\""));
    assert_eq!(code, 3);
    let (code, _, _) = crdiam(&["crdeg", "--window", "-1", "1"], &job("residue_field_xy"));
    assert_eq!(code, 4);
    let (code, _, _) = crdiam(&["crdeg"], &job("residue_field_xy").replace("\"x\", \"y\"]]", "\"x\", \"q\"]]"));
    assert_eq!(code, 2);
    let (code, _, _) = crdiam(&["crdeg", "/nonexistent/job.json"], "");
    assert_eq!(code, 2);
}
