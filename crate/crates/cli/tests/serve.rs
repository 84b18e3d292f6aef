use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use futures::{SinkExt, StreamExt};
use panto_propagate::SchedulerConfig;
use panto_session::Session;
use tokio::io::{AsyncBufReadExt, BufReader};
use tokio_tungstenite::tungstenite::Message;

fn log() -> Vec<String> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../session/tests/data/session_log.jsonl");
    let mut lines: Vec<String> = std::fs::read_to_string(path).unwrap().lines().map(str::to_string).collect();
    lines.push(r#"{"id": 99, "op": "getState"}"#.to_string());
    lines
}

fn in_process(lines: &[String]) -> Vec<String> {
    let mut s = Session::new(SchedulerConfig::default());
    lines.iter().map(|l| s.handle_line(l)).collect()
}

#[test]
fn serve_stdio_answers_like_the_library() {
    let lines = log();
    let mut child = Command::new(env!("CARGO_BIN_EXE_panto"))
        .arg("serve-stdio")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    let mut stdin = child.stdin.take().unwrap();
    for l in &lines {
        writeln!(stdin, "{l}").unwrap();
        writeln!(stdin).unwrap();
    }
    drop(stdin);
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let got: Vec<String> = String::from_utf8(out.stdout).unwrap().lines().map(str::to_string).collect();
    assert_eq!(got, in_process(&lines));
}

#[tokio::test]
async fn serve_ws_answers_like_the_library_per_connection() {
    let mut child = tokio::process::Command::new(env!("CARGO_BIN_EXE_panto"))
        .args(["serve-ws", "--port", "0"])
        .stderr(Stdio::piped())
        .kill_on_drop(true)
        .spawn()
        .unwrap();
    let mut stderr = BufReader::new(child.stderr.take().unwrap()).lines();
    let banner = tokio::time::timeout(std::time::Duration::from_secs(30), stderr.next_line())
        .await
        .unwrap()
        .unwrap()
        .unwrap();
    let url = banner.strip_prefix("listening on ").unwrap().to_string();

    let lines = log();
    let expected = in_process(&lines);
    let (mut a, _) = tokio_tungstenite::connect_async(url.as_str()).await.unwrap();
    let (mut b, _) = tokio_tungstenite::connect_async(url.as_str()).await.unwrap();
    b.send(Message::text(r#"{"id": 1, "op": "load", "program": "(lit 5)"}"#)).await.unwrap();
    b.next().await.unwrap().unwrap();
    for (line, want) in lines.iter().zip(&expected) {
        a.send(Message::text(line.clone())).await.unwrap();
        let reply = a.next().await.unwrap().unwrap().into_text().unwrap();
        assert_eq!(reply.as_str(), want);
    }
    b.send(Message::text(r#"{"id": 2, "op": "getState"}"#)).await.unwrap();
    let other: serde_json::Value =
        serde_json::from_str(b.next().await.unwrap().unwrap().into_text().unwrap().as_str()).unwrap();
    assert_eq!(other["state"]["program"], "(lit 5)");
    a.close(None).await.unwrap();
    child.kill().await.unwrap();
}
