//! The wire format: one JSON object per line in each direction.
//!
//! A request is `{"id": <int>, "op": "<name>", ...args}`. A response is
//! `{"id": <int>, "ok": true, ...}` carrying either `state` (a snapshot),
//! `menu` (the edit menu) or `saved` (the path written), or
//! `{"id": <int>, "ok": false, "error": "<msg>"}`.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::snapshot::Snapshot;

/// A cursor movement relative to the focused node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Direction {
    Parent,
    FirstChild,
    Prev,
    Next,
}

/// A request, without its id.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(tag = "op", rename_all = "camelCase", rename_all_fields = "camelCase")]
pub enum Request {
    /// Replaces the program, from program text or from a program file.
    Load { program: Option<String>, path: Option<String> },
    /// Writes the session file to `path`.
    Save { path: String },
    /// Replaces the session with the contents of a session file.
    Restore { path: String },
    GetState,
    /// Moves the cursor to `path`, or one step in `direction`. With
    /// `inside` set the cursor sits inside the hole it addresses.
    MoveCursor { path: Option<Vec<usize>>, direction: Option<Direction>, #[serde(default)] inside: bool },
    /// Selects the one-hole context from `outer` down `middle`; a missing
    /// `outer` clears the selection.
    SetSelection { outer: Option<Vec<usize>>, #[serde(default)] middle: Vec<usize> },
    /// Computes the edit menu at the cursor.
    Query { text: String },
    /// Applies entry `index` of the last menu, or an edit-script line.
    ApplyEdit { index: Option<usize>, action: Option<String> },
    Cut,
    Copy,
    Paste,
    Undo,
    Redo,
}

impl Request {
    /// True for requests that may change the session.
    pub fn mutates(&self) -> bool {
        !matches!(self, Request::GetState | Request::Query { .. } | Request::Save { .. })
    }
}

/// One entry of an edit menu as sent to the client.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MenuEntry {
    pub index: usize,
    pub name: String,
    pub label: String,
    /// The entry as an edit-script line.
    pub action: String,
}

/// The payload of a successful response.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reply {
    State(Box<Snapshot>),
    Menu(Vec<MenuEntry>),
    Saved(String),
}

/// The response line for request `id`.
pub fn ok_line(id: &Value, reply: &Reply) -> String {
    let body = match reply {
        Reply::State(s) => json!({ "id": id, "ok": true, "state": s }),
        Reply::Menu(m) => json!({ "id": id, "ok": true, "menu": m }),
        Reply::Saved(p) => json!({ "id": id, "ok": true, "saved": p }),
    };
    body.to_string()
}

/// The error line for request `id`.
pub fn error_line(id: &Value, message: &str) -> String {
    json!({ "id": id, "ok": false, "error": message }).to_string()
}

/// Splits a request line into its id and request.
pub fn parse_request(line: &str) -> (Value, Result<Request, String>) {
    let value: Value = match serde_json::from_str(line) {
        Ok(v) => v,
        Err(e) => return (Value::Null, Err(format!("malformed JSON: {e}"))),
    };
    let id = value.get("id").cloned().unwrap_or(Value::Null);
    if !id.is_i64() && !id.is_u64() {
        return (Value::Null, Err("the request has no integer \"id\"".into()));
    }
    let request = serde_json::from_value(value).map_err(|e| format!("bad request: {e}"));
    (id, request)
}
