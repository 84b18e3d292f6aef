//! User-level edits of typed programs.
//!
//! Every edit that changes types is performed by placing diff boundaries
//! around the edited site and normalizing with the propagation engine:
//! inserting a one-hole context, deleting one, or changing a binder's type
//! annotation. Hole filling, digging, and the clipboard operations are
//! built on the same pieces. Edits are pure functions from a program to a
//! new program.

use std::fmt;

use panto_lang::{Ctx, Term, TypeError};
use panto_propagate::EngineError;
use panto_trees::sexp::SyntaxError;
use thiserror::Error;

pub mod action;
pub mod diff;
pub mod gen;
pub mod menu;
pub mod path;

pub use action::{
    annotate_lam_setup, annotate_let_setup, apply, apply_observed, delete_setup, insert_setup, parse_action,
    parse_script, print_action, run_script, Applied, Clipboard, EditAction, Selection,
};
pub use diff::{path_diff, path_judgements, tooth_diff, tooth_judgements};
pub use menu::{enumerate_edits, next_type_hole, MenuItem};
pub use path::{rebase, TermPath, TermTooth};

/// Where the cursor sits relative to the focused node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum FocusKind {
    #[default]
    AroundTerm,
    InsideHole,
}

/// A cursor: the child indices from the root to the focused node.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Cursor {
    pub path: Vec<usize>,
    pub kind: FocusKind,
}

impl Cursor {
    pub fn at(path: Vec<usize>) -> Cursor {
        Cursor { path, kind: FocusKind::AroundTerm }
    }

    /// True when the cursor addresses a node of `program`, and sits inside
    /// only when that node is a hole.
    pub fn is_valid(&self, program: &Term) -> bool {
        match program.at(&self.path) {
            None => false,
            Some(Term::Hole(_)) => true,
            Some(_) => self.kind == FocusKind::AroundTerm,
        }
    }
}

/// Why an edit was rejected.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EditError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("no term at path {0:?}")]
    BadPath(Vec<usize>),
    #[error("the node at {path:?} is not {expected}")]
    BadSite { path: Vec<usize>, expected: &'static str },
    #[error(transparent)]
    Type(TypeError),
    #[error("expected {expected}, found {actual}")]
    Mismatch { expected: String, actual: String },
    #[error("edits cannot act on programs or selections containing diff boundaries")]
    Boundary,
    #[error("the clipboard is empty")]
    EmptyClipboard,
    #[error(transparent)]
    Engine(#[from] Box<EngineError>),
}

impl From<EngineError> for EditError {
    fn from(e: EngineError) -> EditError {
        EditError::Engine(Box::new(e))
    }
}

/// Prints a judgement as `ctx |- ty` for diagnostics.
pub(crate) struct ShowJudgement<'a>(pub &'a Ctx, pub &'a panto_lang::Ty);

impl fmt::Display for ShowJudgement<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} |- {}", self.0.to_tree(), self.1)
    }
}
