use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn liouville(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_liouville"))
        .args(args)
        .env_remove("LIOUVILLE_PRECISION_CAP")
        .env("SOURCE_DATE_EPOCH", "0")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn enumerate_csv() {
    let o = liouville(&["enumerate", "--m", "1", "--count", "6"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let values: Vec<String> = rdr.records().map(|r| r.unwrap()[2].to_string()).collect();
    assert_eq!(values, ["0", "1/2", "1/3", "1/4", "1/5", "2/5"]);
}

#[test]
fn enumerate_json_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("e.json");
    let o = liouville(&["enumerate", "--m", "2", "--count", "5", "--format", "json", "-o", path(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 5);
}

#[test]
fn construct_then_eval() {
    let dir = tempfile::tempdir().unwrap();
    let s = dir.path().join("s.json");
    let o = liouville(&["construct", "--m", "1", "--terms", "12", "--seed-bits", "0xAA", "-o", path(&s)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));

    let o = liouville(&["eval", "--at", "1", "--state", path(&s)]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let line = text.lines().next().unwrap();
    let (mid, rad) = line.split_once(" ± ").unwrap();
    let (mid, rad): (f64, f64) = (mid.parse().unwrap(), rad.parse().unwrap());
    assert!(mid.abs() <= rad);
    assert!(text.contains("exact: 0"));

    let o = liouville(&["eval", "--at", "1/7", "--function", "f", "--state", path(&s)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains(" ± "));

    let o = liouville(&["eval", "--at", "-1", "--state", path(&s)]);
    assert!(stdout(&o).contains("exact: 0"));

    let o = liouville(&["eval", "--minpoly", "-2,0,9", "--interval", "0.4,0.5", "--state", path(&s)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn construction_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for p in [&a, &b] {
        let o = liouville(&["construct", "--terms", "9", "--seed-bits", "0x5", "-o", path(p)]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let o = liouville(&["verify", "construction", "--state", path(&a)]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn bad_state_files() {
    let dir = tempfile::tempdir().unwrap();
    let s = dir.path().join("s.json");
    assert_eq!(liouville(&["construct", "--terms", "7", "-o", path(&s)]).status.code(), Some(0));
    let text = fs::read_to_string(&s).unwrap();

    let cut = dir.path().join("cut.json");
    fs::write(&cut, &text[..text.len() / 2]).unwrap();
    assert_eq!(liouville(&["eval", "--at", "0", "--state", path(&cut)]).status.code(), Some(2));

    let old = dir.path().join("old.json");
    fs::write(&old, text.replace("liouville-state/1", "liouville-state/0")).unwrap();
    let o = liouville(&["eval", "--at", "0", "--state", path(&old)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("version"));

    let missing = dir.path().join("none.json");
    assert_eq!(liouville(&["eval", "--at", "0", "--state", path(&missing)]).status.code(), Some(2));
}

#[test]
fn usage_errors() {
    assert_eq!(liouville(&["construct", "--terms", "12", "--seed-bits", "0x1"]).status.code(), Some(2));
    assert_eq!(liouville(&["construct", "--terms", "8", "--seed-bits", "zz"]).status.code(), Some(2));
    assert_eq!(liouville(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(liouville(&["--precision-start", "128", "--precision-cap", "64", "witness"]).status.code(), Some(2));
}

#[test]
fn precision_cap_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let s = dir.path().join("s.json");
    let o = Command::new(env!("CARGO_BIN_EXE_liouville"))
        .args(["construct", "--terms", "7", "-o", path(&s)])
        .env("LIOUVILLE_PRECISION_CAP", "2048")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&s).unwrap()).unwrap();
    assert_eq!(v["precision"]["cap"], 2048);

    // too small a cap to separate anything
    let o = Command::new(env!("CARGO_BIN_EXE_liouville"))
        .args(["--precision-start", "40", "construct", "--terms", "12"])
        .env("LIOUVILLE_PRECISION_CAP", "40")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn verify_suites() {
    let o = liouville(&["verify", "lemmas", "--m", "1", "--samples", "200"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["status"], "pass");
    assert_eq!(liouville(&["verify", "heights"]).status.code(), Some(0));
    assert_eq!(liouville(&["verify", "fuzz", "--samples", "300"]).status.code(), Some(0));
    assert_eq!(liouville(&["verify", "construction"]).status.code(), Some(2));
}

#[test]
fn liouville_certificate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let (s, w, c) = (dir.path().join("s.json"), dir.path().join("w.json"), dir.path().join("c.json"));
    assert_eq!(liouville(&["construct", "--terms", "8", "-o", path(&s)]).status.code(), Some(0));
    assert_eq!(liouville(&["witness", "--m", "1", "--count", "3", "-o", path(&w)]).status.code(), Some(0));
    let o = liouville(&["certify-liouville", "--state", path(&s), "--witness", path(&w), "-o", path(&c)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let cert: serde_json::Value = serde_json::from_str(&fs::read_to_string(&c).unwrap()).unwrap();
    assert_eq!(cert["entries"].as_array().unwrap().len(), 3);

    // weaken the first error bound
    let mut wit: serde_json::Value = serde_json::from_str(&fs::read_to_string(&w).unwrap()).unwrap();
    wit["chain"][0]["err_log"] = serde_json::json!({"int": "-1"});
    fs::write(&w, serde_json::to_string(&wit).unwrap()).unwrap();
    let o = liouville(&["certify-liouville", "--state", path(&s), "--witness", path(&w), "-o", path(&c)]);
    assert_eq!(o.status.code(), Some(1));
    let rej: serde_json::Value = serde_json::from_str(&fs::read_to_string(&c).unwrap()).unwrap();
    assert_eq!(rej["step"], "mean-value");
}
