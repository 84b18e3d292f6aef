//! Interactive edit sessions.
//!
//! A session holds one boundary-free, well-typed program together with a
//! cursor, an optional selection, a clipboard and undo/redo history.
//! Clients drive it with [`Request`]s, usually as JSON lines through
//! [`Session::handle_line`]. Every request gets exactly one response, and
//! every request that can change the session increments its revision.

use std::path::Path;

use panto_diffs::Diff;
use panto_edits::{
    apply, enumerate_edits, next_type_hole, parse_script, print_action, Clipboard, Cursor, EditAction, EditError,
    FocusKind, Selection,
};
use panto_lang::{infer, parse, Ctx, Term};
use panto_propagate::SchedulerConfig;
use thiserror::Error;

pub mod persist;
pub mod protocol;
pub mod snapshot;

pub use persist::{persist, restore, restore_file, save_file};
pub use protocol::{Direction, MenuEntry, Reply, Request};
pub use snapshot::{snapshot, Snapshot};

/// Why a request was rejected. The session is unchanged.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SessionError {
    #[error("{0}")]
    Request(String),
    #[error(transparent)]
    Edit(#[from] EditError),
    #[error("cannot restore session: {0}")]
    Restore(String),
    #[error("i/o error: {0}")]
    Io(String),
}

/// The mutable state of one session.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SessionState {
    pub program: Term,
    pub cursor: Cursor,
    pub selection: Option<Selection>,
    pub clipboard: Option<Clipboard>,
    pub undo: Vec<(Term, Cursor)>,
    pub redo: Vec<(Term, Cursor)>,
    pub next_type_hole: u64,
    pub revision: u64,
    /// The type change reported by the last edit, if it retyped the program.
    pub final_type_change: Option<Diff>,
    /// The actions of the last edit menu.
    pub menu: Vec<EditAction>,
}

impl SessionState {
    /// A fresh session on `program`, with the cursor at the root.
    pub fn new(program: Term) -> SessionState {
        let cursor = match program {
            Term::Hole(_) => Cursor { path: Vec::new(), kind: FocusKind::InsideHole },
            _ => Cursor::default(),
        };
        SessionState {
            next_type_hole: next_type_hole(&program),
            program,
            cursor,
            selection: None,
            clipboard: None,
            undo: Vec::new(),
            redo: Vec::new(),
            revision: 0,
            final_type_change: None,
            menu: Vec::new(),
        }
    }
}

impl Default for SessionState {
    fn default() -> SessionState {
        SessionState::new(Term::Hole(panto_lang::Ty::Hole(0)))
    }
}

/// A session together with the scheduler used for its edits.
#[derive(Debug, Clone)]
pub struct Session {
    pub state: SessionState,
    pub config: SchedulerConfig,
}

fn bad(message: impl Into<String>) -> SessionError {
    SessionError::Request(message.into())
}

fn checked_program(text: &str) -> Result<Term, SessionError> {
    let program = parse(text).map_err(|e| bad(format!("cannot parse program: {e}")))?;
    if program.has_boundary() {
        return Err(bad("programs may not contain diff boundaries"));
    }
    infer(&Ctx::empty(), &program).map_err(|e| bad(format!("program does not type-check: {e}")))?;
    Ok(program)
}

/// The longest prefix of `path` that addresses a node of `program`.
fn clamp(program: &Term, path: &[usize]) -> Vec<usize> {
    let mut p = path.to_vec();
    while program.at(&p).is_none() {
        p.pop();
    }
    p
}

impl Session {
    pub fn new(config: SchedulerConfig) -> Session {
        Session { state: SessionState::default(), config }
    }

    /// Handles one JSON request line and returns the response line.
    pub fn handle_line(&mut self, line: &str) -> String {
        let (id, request) = protocol::parse_request(line);
        match request.and_then(|r| self.handle(r).map_err(|e| e.to_string())) {
            Ok(reply) => protocol::ok_line(&id, &reply),
            Err(message) => protocol::error_line(&id, &message),
        }
    }

    /// Handles one request. On error the session is left unchanged.
    pub fn handle(&mut self, request: Request) -> Result<Reply, SessionError> {
        let mutates = request.mutates();
        let mut next = self.state.clone();
        let reply = self.step(&mut next, request)?;
        if mutates {
            next.revision += 1;
        }
        self.state = next;
        Ok(reply.unwrap_or_else(|| Reply::State(Box::new(snapshot(&self.state)))))
    }

    /// Performs `request` on `s`, returning the reply unless it is the
    /// snapshot of the new state.
    fn step(&self, s: &mut SessionState, request: Request) -> Result<Option<Reply>, SessionError> {
        if request.mutates() {
            if !matches!(request, Request::ApplyEdit { .. }) {
                s.menu.clear();
            }
            s.final_type_change = None;
        }
        match request {
            Request::Load { program, path } => {
                let text = match (program, path) {
                    (Some(text), None) => text,
                    (None, Some(path)) => std::fs::read_to_string(&path).map_err(|e| SessionError::Io(format!("{path}: {e}")))?,
                    _ => return Err(bad("load takes exactly one of \"program\" and \"path\"")),
                };
                let revision = s.revision;
                *s = SessionState::new(checked_program(&text)?);
                s.revision = revision;
            }
            Request::Save { path } => {
                save_file(s, Path::new(&path))?;
                return Ok(Some(Reply::Saved(path)));
            }
            Request::Restore { path } => {
                let revision = s.revision;
                *s = restore_file(Path::new(&path))?;
                s.revision = s.revision.max(revision);
            }
            Request::GetState => {}
            Request::MoveCursor { path, direction, inside } => {
                let target = match (path, direction) {
                    (Some(p), None) => p,
                    (None, Some(d)) => moved(&s.program, &s.cursor.path, d)?,
                    _ => return Err(bad("moveCursor takes exactly one of \"path\" and \"direction\"")),
                };
                let kind = if inside { FocusKind::InsideHole } else { FocusKind::AroundTerm };
                let cursor = Cursor { path: target, kind };
                if !cursor.is_valid(&s.program) {
                    return Err(bad(format!("no {} cursor position at {:?}", if inside { "hole" } else { "term" }, cursor.path)));
                }
                s.cursor = cursor;
            }
            Request::SetSelection { outer, middle } => {
                s.selection = match outer {
                    None => None,
                    Some(outer) => {
                        let sel = Selection::new(outer, middle);
                        if sel.split(&s.program).is_none() {
                            return Err(bad(format!("no selection {:?} / {:?}", sel.outer, sel.middle)));
                        }
                        Some(sel)
                    }
                };
            }
            Request::Query { text } => {
                let items = enumerate_edits(&s.program, &s.cursor.path, &text);
                let entries = items
                    .iter()
                    .enumerate()
                    .map(|(index, item)| MenuEntry {
                        index,
                        name: item.name.clone(),
                        label: item.label.clone(),
                        action: print_action(&s.program, &item.action),
                    })
                    .collect();
                s.menu = items.into_iter().map(|i| i.action).collect();
                return Ok(Some(Reply::Menu(entries)));
            }
            Request::ApplyEdit { index, action } => {
                let action = match (index, action) {
                    (Some(i), None) => s.menu.get(i).cloned().ok_or_else(|| bad(format!("no menu entry {i}")))?,
                    (None, Some(text)) => {
                        let mut actions = parse_script(&s.program, &text)?;
                        if actions.len() != 1 {
                            return Err(bad(format!("expected one action, found {}", actions.len())));
                        }
                        actions.remove(0)
                    }
                    _ => return Err(bad("applyEdit takes exactly one of \"index\" and \"action\"")),
                };
                s.menu.clear();
                self.edit(s, &action)?;
            }
            Request::Cut | Request::Copy => {
                let sel = s.selection.clone().unwrap_or_else(|| Selection::new(s.cursor.path.clone(), Vec::new()));
                let action = if matches!(request, Request::Cut) { EditAction::Cut(sel) } else { EditAction::Copy(sel) };
                self.edit(s, &action)?;
            }
            Request::Paste => {
                let at = s.cursor.path.clone();
                self.edit(s, &EditAction::Paste { at })?;
            }
            Request::Undo => {
                let (program, cursor) = s.undo.pop().ok_or_else(|| bad("nothing to undo"))?;
                let current = (std::mem::replace(&mut s.program, program), std::mem::replace(&mut s.cursor, cursor));
                s.redo.push(current);
                s.selection = None;
            }
            Request::Redo => {
                let (program, cursor) = s.redo.pop().ok_or_else(|| bad("nothing to redo"))?;
                let current = (std::mem::replace(&mut s.program, program), std::mem::replace(&mut s.cursor, cursor));
                s.undo.push(current);
                s.selection = None;
            }
        }
        Ok(None)
    }

    fn edit(&self, s: &mut SessionState, action: &EditAction) -> Result<(), SessionError> {
        let out = apply(&s.program, action, s.clipboard.as_ref(), &self.config)?;
        s.clipboard = out.clipboard;
        if let EditAction::Copy(_) = action {
            return Ok(());
        }
        let focus = match action {
            EditAction::Cut(sel) | EditAction::DeleteSelection(sel) => sel.outer.clone(),
            _ => s.cursor.path.clone(),
        };
        let before = std::mem::replace(&mut s.program, out.program);
        s.undo.push((before, s.cursor.clone()));
        s.redo.clear();
        s.selection = None;
        let path = clamp(&s.program, &focus);
        let inside = matches!(s.program.at(&path), Some(Term::Hole(_))) && s.cursor.kind == FocusKind::InsideHole;
        s.cursor = Cursor { path, kind: if inside { FocusKind::InsideHole } else { FocusKind::AroundTerm } };
        s.next_type_hole = s.next_type_hole.max(next_type_hole(&s.program));
        s.final_type_change = out.final_type_change;
        Ok(())
    }
}

fn moved(program: &Term, from: &[usize], d: Direction) -> Result<Vec<usize>, SessionError> {
    let mut p = from.to_vec();
    match d {
        Direction::Parent => {
            p.pop().ok_or_else(|| bad("the cursor is at the root"))?;
        }
        Direction::FirstChild => {
            let node = program.at(&p).ok_or_else(|| bad("the cursor is not in the program"))?;
            if node.children().is_empty() {
                return Err(bad("the focused node has no children"));
            }
            p.push(0);
        }
        Direction::Prev | Direction::Next => {
            let i = p.pop().ok_or_else(|| bad("the root has no siblings"))?;
            let siblings = program.at(&p).map_or(0, |n| n.children().len());
            let j = if d == Direction::Prev { i.checked_sub(1) } else { Some(i + 1).filter(|&j| j < siblings) };
            p.push(j.ok_or_else(|| bad("no sibling in that direction"))?);
        }
    }
    Ok(p)
}
