use std::process::Command;

fn g2nu(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_g2nu")).args(args).output().expect("run g2nu");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn verify_clifford_passes() {
    let (code, stdout, _) = g2nu(&["verify-clifford"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("4 of 4 certificates pass"), "{stdout}");
}

#[test]
fn g2_h2_json_like() {
    let (code, stdout, _) = g2nu(&["g2", "--case", "h2", "--b", "1", "--c", "3", "--format", "json-like"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["case"], "h2");
    assert_eq!(v["params"]["a"], "4");
    assert!(v["certificates"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
}

#[test]
fn mq_currents_vanish() {
    for case in ["h1", "h2"] {
        let (code, stdout, _) = g2nu(&["mq", "--case", case]);
        assert_eq!(code, 0, "{stdout}");
    }
}

#[test]
fn nu_report_written_to_out() {
    let path = std::env::temp_dir().join(format!("g2nu-cli-test-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let (code, stdout, _) = g2nu(&["nu", "--case", "h1", "--a", "2", "--r1", "1", "--r2", "2", "--out", p]);
    assert_eq!(code, 0, "{stdout}");
    assert!(stdout.contains("≡ 0 mod 48"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_file(&path).ok();
    for key in ["case", "params", "certificates", "nu"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["nu"]["residue"], 0);
    for c in v["certificates"].as_array().unwrap() {
        for key in ["id", "statement", "paper_ref", "status", "witness"] {
            assert!(c.get(key).is_some(), "certificate missing {key}");
        }
    }
}

#[test]
fn bad_input_is_an_error() {
    assert_eq!(g2nu(&["g2", "--case", "h2", "--a", "5", "--b", "1", "--c", "2"]).0, 2);
    assert_eq!(g2nu(&["g2", "--case", "h1", "--a", "0"]).0, 2);
    assert_eq!(g2nu(&["nu", "--case", "h1", "--r1", "2", "--r2", "3"]).0, 2);
    assert_ne!(g2nu(&["g2", "--case", "h3"]).0, 0);
}
