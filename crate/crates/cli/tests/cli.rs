use std::process::{Command, Output};

use serde_json::Value;

fn klf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_klf"))
        .args(args)
        .env_remove("KLF_FIELD_D")
        .output()
        .expect("klf runs")
}

fn records(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout).lines().map(|l| serde_json::from_str(l).expect("json line")).collect()
}

#[test]
fn klf_point_emits_both_sides() {
    let out = klf(&["klf", "--point", "0.3,0.4,0.9"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let rs = records(&out);
    assert_eq!(rs.len(), 1);
    for key in ["lhs", "rhs"] {
        assert!(rs[0]["value"][key].is_number());
    }
    assert_eq!(rs[0]["status"], "pass");
}

#[test]
fn dgamma_matrix_emits_value_sd_and_square_check() {
    let out = klf(&["dgamma", "--matrix", "1,1;1,2"]);
    let rs = records(&out);
    assert_eq!(rs[0]["id"], "dgamma.u_independence");
    assert!(rs[0]["value"]["D"].is_number() && rs[0]["value"]["sd"].is_number());
    assert_eq!(rs[1]["id"], "dgamma.homomorphism");
    assert!(rs[1]["value"]["D_M2"].is_number());
}

#[test]
fn exit_status_follows_pass_fail_records() {
    for args in [&["verify-all"][..], &["zeta2"][..], &["dgamma", "--matrix", "1,1;1,2"][..]] {
        let out = klf(args);
        let rs = records(&out);
        let ids: std::collections::HashSet<_> = rs.iter().map(|r| r["id"].as_str().unwrap().to_string()).collect();
        assert_eq!(ids.len(), rs.len(), "{args:?}: duplicate ids");
        let failed = rs.iter().any(|r| r["status"] == "fail");
        assert_eq!(out.status.code(), Some(if failed { 1 } else { 0 }), "{args:?}");
    }
}

#[test]
fn report_only_records_stay_few_in_the_full_suite() {
    let rs = records(&klf(&["verify-all"]));
    let n = rs.iter().filter(|r| r["status"] == "report-only").count();
    assert!(n > 0 && n <= 10, "{n} report-only records");
}

#[test]
fn config_errors_name_the_key() {
    let out = Command::new(env!("CARGO_BIN_EXE_klf")).args(["zeta2"]).env("KLF_TRUNCATION_C_MAXX", "3").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("KLF_TRUNCATION_C_MAXX"));
    let out = klf(&["zeta2", "--field", "-19"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("field.d"));
}
