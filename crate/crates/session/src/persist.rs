//! The session file: the program, cursor, selection and clipboard as JSON.

use std::path::Path;

use panto_edits::{Clipboard, Cursor, FocusKind, Selection};
use panto_lang::{infer, parse, Ctx};
use serde::{Deserialize, Serialize};

use crate::{SessionError, SessionState};

const FORMAT: &str = "panto-session";
const VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct SessionFile {
    format: String,
    version: u32,
    revision: u64,
    program: String,
    cursor: Vec<usize>,
    inside: bool,
    selection: Option<(Vec<usize>, Vec<usize>)>,
    clipboard: Option<String>,
    next_type_hole_id: u64,
}

/// The session file contents for `state`. The undo and redo stacks are
/// not saved.
pub fn persist(state: &SessionState) -> String {
    let file = SessionFile {
        format: FORMAT.into(),
        version: VERSION,
        revision: state.revision,
        program: state.program.to_string(),
        cursor: state.cursor.path.clone(),
        inside: state.cursor.kind == FocusKind::InsideHole,
        selection: state.selection.as_ref().map(|s| (s.outer.clone(), s.middle.clone())),
        clipboard: state.clipboard.as_ref().map(Clipboard::print),
        next_type_hole_id: state.next_type_hole,
    };
    let mut text = serde_json::to_string_pretty(&file).expect("session files serialize");
    text.push('\n');
    text
}

fn corrupt(message: impl Into<String>) -> SessionError {
    SessionError::Restore(message.into())
}

/// The session stored in `text`.
pub fn restore(text: &str) -> Result<SessionState, SessionError> {
    let file: SessionFile = serde_json::from_str(text).map_err(|e| corrupt(e.to_string()))?;
    if file.format != FORMAT || file.version != VERSION {
        return Err(corrupt(format!("unsupported session format {} version {}", file.format, file.version)));
    }
    let program = parse(&file.program).map_err(|e| corrupt(format!("program: {e}")))?;
    if program.has_boundary() {
        return Err(corrupt("the program contains diff boundaries"));
    }
    infer(&Ctx::empty(), &program).map_err(|e| corrupt(format!("program: {e}")))?;
    let kind = if file.inside { FocusKind::InsideHole } else { FocusKind::AroundTerm };
    let cursor = Cursor { path: file.cursor, kind };
    if !cursor.is_valid(&program) {
        return Err(corrupt(format!("cursor {:?} is not in the program", cursor.path)));
    }
    let selection = file.selection.map(|(o, m)| Selection::new(o, m));
    if let Some(sel) = &selection {
        if sel.split(&program).is_none() {
            return Err(corrupt(format!("selection {:?} / {:?} is not in the program", sel.outer, sel.middle)));
        }
    }
    let clipboard = file
        .clipboard
        .map(|c| Clipboard::parse(&c).map_err(|e| corrupt(format!("clipboard: {e}"))))
        .transpose()?;
    let mut state = SessionState::new(program);
    state.revision = file.revision;
    state.cursor = cursor;
    state.selection = selection;
    state.clipboard = clipboard;
    state.next_type_hole = file.next_type_hole_id;
    Ok(state)
}

/// Writes the session file for `state` to `path`.
pub fn save_file(state: &SessionState, path: &Path) -> Result<(), SessionError> {
    std::fs::write(path, persist(state)).map_err(|e| SessionError::Io(format!("{}: {e}", path.display())))
}

/// Reads the session file at `path`.
pub fn restore_file(path: &Path) -> Result<SessionState, SessionError> {
    let text = std::fs::read_to_string(path).map_err(|e| SessionError::Io(format!("{}: {e}", path.display())))?;
    restore(&text)
}
