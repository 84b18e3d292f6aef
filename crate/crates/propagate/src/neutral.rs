//! Neutral forms: variables and nonlinear constants applied to arguments,
//! looking through diff boundaries.

use panto_lang::{rule_for, Term};

/// True for a variable or a constant with a nonlinear conclusion, applied
/// (or ghost-applied) to any number of arguments, under any boundaries.
pub fn is_neutral(t: &Term) -> bool {
    match t {
        Term::Down(_, b) | Term::Up(_, b) => is_neutral(b),
        Term::App(f, _) | Term::GhostApp(f, _) => is_neutral(f),
        _ => t.children().is_empty() && rule_for(t).is_some_and(|r| !r.nonlinear.is_empty()),
    }
}

/// The nearest non-boundary ancestor of `path` and the child index through
/// which it is reached.
pub fn enclosing(program: &Term, path: &[usize]) -> Option<(Vec<usize>, usize)> {
    let mut p = path.to_vec();
    loop {
        let i = p.pop()?;
        if !program.at(&p)?.is_boundary() {
            return Some((p, i));
        }
    }
}

/// True when the node at `path` is the function position of an application
/// or a ghost application, ignoring intervening boundaries.
pub fn is_head(program: &Term, path: &[usize]) -> bool {
    match enclosing(program, path) {
        Some((p, 0)) => matches!(program.at(&p), Some(Term::App(..) | Term::GhostApp(..))),
        _ => false,
    }
}

/// True when the node at `path` is the immediate function position of an
/// application or a ghost application.
pub fn is_immediate_head(program: &Term, path: &[usize]) -> bool {
    match path.split_last() {
        Some((0, parent)) => matches!(program.at(parent), Some(Term::App(..) | Term::GhostApp(..))),
        _ => false,
    }
}

/// True when the node at `path` is neutral and not the head of a larger
/// neutral form.
pub fn is_maximal_neutral(program: &Term, path: &[usize]) -> bool {
    program.at(path).is_some_and(is_neutral) && !is_head(program, path)
}

/// The number of arguments applied to the term at `path`, following
/// function positions outward through boundaries, and the paths of those
/// arguments.
pub fn applied_args(program: &Term, path: &[usize]) -> Vec<Vec<usize>> {
    let mut args = Vec::new();
    let mut p = path.to_vec();
    while let Some((parent, 0)) = enclosing(program, &p) {
        if !matches!(program.at(&parent), Some(Term::App(..) | Term::GhostApp(..))) {
            break;
        }
        let mut arg = parent.clone();
        arg.push(1);
        args.push(arg);
        p = parent;
    }
    args
}

/// The number of application nodes along the function spine of `t`,
/// looking through boundaries.
pub fn spine_args(t: &Term) -> usize {
    match t {
        Term::Down(_, b) | Term::Up(_, b) => spine_args(b),
        Term::App(f, _) | Term::GhostApp(f, _) => 1 + spine_args(f),
        _ => 0,
    }
}
