use std::process::Command;

fn strebel() -> Command {
    Command::new(env!("CARGO_BIN_EXE_strebel"))
}

#[test]
fn certify_five_elevenths() {
    let out = strebel().args(["certify", "--r", "5/11"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("4630/4631"));
    assert!(text.contains("4631x^2 + 9260x + 4631"));
    assert!(text.contains("TRANSCENDENTAL"));
}

#[test]
fn certify_out_of_range_fails() {
    let out = strebel().args(["certify", "--r", "3/4"]).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8(out.stdout).unwrap().contains("OUT_OF_RANGE"));
}

#[test]
fn qc_rejects_r_at_parse_time() {
    let out = strebel().args(["qc", "--r", "3/4"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("not in (0, 1/2)"));
}

#[test]
fn qc_report_and_render_agree() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let direct = dir.path().join("direct.svg");
    let again = dir.path().join("again.svg");
    let status = strebel()
        .args(["qc", "--r", "5/11", "--report"])
        .arg(&report)
        .arg("--svg")
        .arg(&direct)
        .output()
        .unwrap()
        .status;
    assert!(status.success());
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    for key in ["inputs", "qc", "graph_y", "graph_c", "periods", "certificate", "validations"] {
        assert!(json.get(key).is_some(), "missing {key}");
    }
    assert_eq!(json["graph_c"]["vertices"], 5);
    assert_eq!(json["graph_c"]["edges"], 8);
    assert_eq!(json["certificate"]["verdict"], "TRANSCENDENTAL");
    assert!(json["validations"].as_array().unwrap().iter().all(|v| v["pass"] == true));
    let status = strebel().arg("render").arg("--from").arg(&report).arg("--svg").arg(&again).status().unwrap();
    assert!(status.success());
    assert_eq!(std::fs::read(&direct).unwrap(), std::fs::read(&again).unwrap());
}

#[test]
fn q1_writes_report_to_stdout() {
    let out = strebel().arg("q1").output().unwrap();
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["graph_y"]["edges"], 3);
    assert!(json["graph_c"].is_null());
}

#[test]
fn failing_stage_is_recorded() {
    // a max length below every period makes tracing fail
    let out = strebel().args(["q1", "--max-length", "0.5"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(json["stage"], "graph_y");
}
