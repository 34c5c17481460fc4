use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weaklift")).args(args).output().expect("binary runs")
}

fn envelope(out: &Output) -> Value {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(text.ends_with('\n') && text.matches('\n').count() == 1, "one line: {text:?}");
    serde_json::from_str(&text).unwrap()
}

#[test]
fn psi_coefficients() {
    let out = run(&["psi", "--p", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = envelope(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "psi");
    assert_eq!(v["result"]["coeffs"], serde_json::json!([5, 5, 1]));
}

#[test]
fn invalid_input_exits_two() {
    let out = run(&["psi", "--p", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(envelope(&out)["error"].is_string());
    assert!(!out.stderr.is_empty());
    assert_eq!(run(&["table", "--group", "{\"p\":5,\"t\":1,\"n\":3}"]).status.code(), Some(2));
    assert_eq!(run(&["table", "--group", "@/nonexistent.json"]).status.code(), Some(2));
}

#[test]
fn unknown_flags_rejected() {
    assert_eq!(run(&["psi", "--p", "5", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        &["table", "--group", "{\"p\":5,\"t\":2,\"n\":1}"][..],
        &["probe", "--p", "5"][..],
        &["search", "--group", "{\"p\":2,\"t\":2,\"n\":1}", "--ring", "{\"kind\":\"galois_ring\",\"p\":2,\"n\":2,\"s\":2}", "--perturb-degree", "2", "--K", "3"][..],
    ] {
        let (a, b) = (run(args), run(args));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), Some(0));
    }
}

#[test]
fn verify_cases_pass() {
    for (case, p) in [("cyclic-p", "5"), ("dihedral", "7"), ("s3", "3"), ("klein", "2")] {
        let out = run(&["verify", "--case", case, "--p", p]);
        assert_eq!(out.status.code(), Some(0), "{case}");
        assert_eq!(envelope(&out)["result"]["report"]["allPassed"], true);
    }
}

#[test]
fn exhausted_search_exits_one() {
    let out = run(&[
        "search",
        "--group",
        "{\"p\":2,\"t\":3,\"n\":1}",
        "--ring",
        "{\"kind\":\"galois_ring\",\"p\":2,\"n\":2,\"s\":3}",
        "--perturb-degree",
        "3",
        "--K",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v = envelope(&out);
    assert_eq!(v["result"]["status"], "exhausted");
    assert_eq!(v["result"]["witness"], Value::Null);
}

#[test]
fn hurwitz_violation() {
    let v = envelope(&run(&["hurwitz", "--p", "41"]));
    assert_eq!(v["result"]["liftableChar0"], false);
    assert_eq!(v["result"]["groupOrder"], 134480);
}

#[test]
fn identities() {
    assert_eq!(run(&["identity", "binomial", "--p", "7"]).status.code(), Some(0));
    let out = run(&["identity", "iterate", "--p", "5", "--u", "[0,1]", "--c", "[1,0]"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(envelope(&out)["result"]["holds"], true);
    assert_eq!(run(&["identity", "klein", "--u", "[0,1]", "--v", "[1,1]"]).status.code(), Some(0));
}

#[test]
fn classify_from_file() {
    let dir = std::env::temp_dir().join(format!("weaklift-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("locals.json");
    let body = r#"[{"p":5,"generators":[{"mobius":[[[1],[0]],[[1],[1]]]}]},
                   {"p":5,"generators":[{"mobius":[[[1],[0]],[[1],[1]]]},{"mobius":[[[1],[0]],[[0],[4]]]}]}]"#;
    std::fs::write(&path, body).unwrap();
    let out = run(&["classify", "--input", &format!("@{}", path.display())]);
    std::fs::remove_dir_all(&dir).ok();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = envelope(&out);
    assert_eq!(v["result"]["locals"][1]["group"], "D_5");
    assert_eq!(v["result"]["global"]["nu"], 0);
}
