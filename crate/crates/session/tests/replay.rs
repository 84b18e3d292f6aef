use std::fs;
use std::path::PathBuf;

use panto_propagate::SchedulerConfig;
use panto_session::Session;
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn replay(log: &str) -> (Vec<String>, String) {
    let mut s = Session::new(SchedulerConfig::default());
    let responses: Vec<String> = log.lines().map(|l| s.handle_line(l)).collect();
    let last = s.handle_line(r#"{"id": 0, "op": "getState"}"#);
    (responses, last)
}

#[test]
fn replaying_the_recorded_log_is_deterministic() {
    let log = fs::read_to_string(data("session_log.jsonl")).unwrap();
    assert_eq!(log.lines().count(), 50);
    let (first, snapshot) = replay(&log);
    let (second, again) = replay(&log);
    assert_eq!(first, second);
    assert_eq!(snapshot, again);

    let golden = data("session_log.final.json");
    if std::env::var_os("PANTO_BLESS").is_some() {
        fs::write(&golden, format!("{snapshot}\n")).unwrap();
    }
    assert_eq!(fs::read_to_string(&golden).unwrap().trim_end(), snapshot);

    let failed = first
        .iter()
        .filter(|l| serde_json::from_str::<Value>(l).unwrap()["ok"] == Value::Bool(false))
        .count();
    assert!(failed <= 5, "{failed} requests of the log failed");
}
