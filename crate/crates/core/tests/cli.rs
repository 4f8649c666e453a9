use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_k3-enriques"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn count_scan() {
    let o = run(&["count", "u2^5+c(-8)", "--norm", "-1/8"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "2048");
    // 15/8 is the same norm mod 2
    let o = run(&["count", "u2^5+c(-8)", "--norm", "15/8", "--order", "8"]);
    assert_eq!(stdout(&o).trim(), "2048");
}

#[test]
fn b0_type_one() {
    let o = run(&["b0", "U(2)+E8(2)+<-8>", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["b0_table"], 1024);
    assert_eq!(v["b0_counted"], 1024);
    assert_eq!(v["status"], "pass");
}

#[test]
fn info_and_disc() {
    let o = run(&["info", "U+E8+D4^2", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["rank"], 18);
    assert_eq!(v["det"], "-16");
    assert_eq!(v["signature_mod8"], v["gauss_sum_signature"]);
    let o = run(&["disc", "<-24>", "--json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["orders"], serde_json::json!([24]));
}

#[test]
fn roots() {
    assert_eq!(stdout(&run(&["roots", "E8"])).trim(), "240");
    assert_eq!(stdout(&run(&["roots", "E8(2)", "--norm", "-2"])).trim(), "0");
    assert_eq!(stdout(&run(&["roots", "D4(-1)", "--norm", "2"])).trim(), "24");
}

#[test]
fn kummer_json() {
    let o = run(&["kummer", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["patching_table"]["entries"].as_array().unwrap().len(), 15);
    assert_eq!(v["passed"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["info", "U+<-3>"]).status.code(), Some(1));
    assert_eq!(run(&["info", "E8(3/2)"]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(run(&["roots", "U"]).status.code(), Some(2));
    assert_eq!(run(&["b0", "U+E8"]).status.code(), Some(2));
    assert_eq!(run(&["count", "u2", "--norm", "1/0"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
