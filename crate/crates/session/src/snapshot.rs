//! Rendered views of a session sent to clients.

use std::collections::BTreeMap;

use panto_lang::check::judgements;
use panto_lang::{Ctx, Term, Ty};
use serde::Serialize;

use crate::SessionState;

/// One binding of a node's context, outermost first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Binding {
    pub name: String,
    #[serde(rename = "type")]
    pub ty: String,
}

/// A rendered node with the judgement that holds at it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Node {
    pub path: Vec<usize>,
    pub form: String,
    /// Form-specific attributes: binder names, annotations, literal values.
    pub attrs: BTreeMap<String, String>,
    pub ctx: Vec<Binding>,
    #[serde(rename = "type")]
    pub ty: String,
    pub children: Vec<Node>,
}

/// A problem the user may want to fix, located at a node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub path: Vec<usize>,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CursorView {
    pub path: Vec<usize>,
    pub inside: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SelectionView {
    pub outer: Vec<usize>,
    pub middle: Vec<usize>,
}

/// The state of a session as seen by a client.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Snapshot {
    pub revision: u64,
    pub program: String,
    #[serde(rename = "type")]
    pub ty: String,
    pub tree: Node,
    pub cursor: CursorView,
    pub selection: Option<SelectionView>,
    pub clipboard: Option<String>,
    pub final_type_change: Option<String>,
    pub diagnostics: Vec<Diagnostic>,
    pub can_undo: bool,
    pub can_redo: bool,
    pub next_type_hole_id: u64,
}

fn attrs(t: &Term) -> BTreeMap<String, String> {
    let pairs: Vec<(&str, String)> = match t {
        Term::Lam { name, ann, .. } | Term::Let { name, ann, .. } => vec![("name", name.to_string()), ("ann", ann.to_string())],
        Term::Match { head, tail, .. } => vec![("head", head.to_string()), ("tail", tail.to_string())],
        Term::Var { name, .. } | Term::Free { name, .. } => vec![("name", name.to_string())],
        Term::Int(n) => vec![("value", n.to_string())],
        Term::Bool(b) => vec![("value", b.to_string())],
        Term::Nil(a) | Term::Cons(a) => vec![("elem", a.to_string())],
        Term::Err { inner, outer, .. } => vec![("inner", inner.to_string()), ("outer", outer.to_string())],
        _ => Vec::new(),
    };
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn render(t: &Term, path: &mut Vec<usize>, table: &BTreeMap<Vec<usize>, (Ctx, Ty)>) -> Node {
    let (ctx, ty) = &table[path.as_slice()];
    let children = t
        .children()
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            path.push(i);
            let n = render(c, path, table);
            path.pop();
            n
        })
        .collect();
    Node {
        path: path.clone(),
        form: t.form().map_or("boundary", |f| f.name()).to_string(),
        attrs: attrs(t),
        ctx: ctx.entries.iter().map(|(n, a)| Binding { name: n.to_string(), ty: a.to_string() }).collect(),
        ty: ty.to_string(),
        children,
    }
}

/// The error forms of `t`, in pre-order.
pub fn diagnostics(t: &Term) -> Vec<Diagnostic> {
    fn go(t: &Term, path: &mut Vec<usize>, out: &mut Vec<Diagnostic>) {
        let message = match t {
            Term::Err { inner, outer, .. } => Some(format!("type error: found {inner}, expected {outer}")),
            Term::Free { name, ty } => Some(format!("unbound variable {name} : {ty}")),
            Term::GhostApp(..) => Some("argument applied to a non-function".to_string()),
            _ => None,
        };
        if let Some(message) = message {
            out.push(Diagnostic { path: path.clone(), message });
        }
        for (i, c) in t.children().into_iter().enumerate() {
            path.push(i);
            go(c, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

/// The snapshot of `state`.
pub fn snapshot(state: &SessionState) -> Snapshot {
    let table: BTreeMap<Vec<usize>, (Ctx, Ty)> = judgements(&Ctx::empty(), &state.program)
        .expect("the session program type-checks")
        .into_iter()
        .map(|j| (j.path, (j.ctx, j.ty)))
        .collect();
    let tree = render(&state.program, &mut Vec::new(), &table);
    Snapshot {
        revision: state.revision,
        program: state.program.to_string(),
        ty: tree.ty.clone(),
        tree,
        cursor: CursorView {
            path: state.cursor.path.clone(),
            inside: state.cursor.kind == panto_edits::FocusKind::InsideHole,
        },
        selection: state.selection.as_ref().map(|s| SelectionView { outer: s.outer.clone(), middle: s.middle.clone() }),
        clipboard: state.clipboard.as_ref().map(|c| c.print()),
        final_type_change: state.final_type_change.as_ref().map(|d| d.to_string()),
        diagnostics: diagnostics(&state.program),
        can_undo: !state.undo.is_empty(),
        can_redo: !state.redo.is_empty(),
        next_type_hole_id: state.next_type_hole,
    }
}
