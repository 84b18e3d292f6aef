//! Canonical S-expression text for diffs and judgement diffs.
//!
//! Diffs print as `(congr <label> <d>...)`, `(+ <tooth> <d>)`,
//! `(- <tooth> <d>)` and `(replace <tree> <tree>)`. Judgement diffs print as
//! `(|- <ctx-diff> <ty-diff>)`. The reader also accepts `(id <tree>)` as a
//! shorthand for the identity diff on a tree.

use std::fmt;

use panto_trees::sexp::{self, Sexp, SyntaxError};

use crate::{Diff, JudgementDiff};

impl fmt::Display for Diff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diff::Congr(l, ds) => {
                write!(f, "(congr {l}")?;
                for d in ds {
                    write!(f, " {d}")?;
                }
                f.write_str(")")
            }
            Diff::Plus(c, d) => write!(f, "(+ {c} {d})"),
            Diff::Minus(c, d) => write!(f, "(- {c} {d})"),
            Diff::Replace(a, b) => write!(f, "(replace {a} {b})"),
        }
    }
}

impl fmt::Display for JudgementDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(|- {} {})", self.ctx, self.ty)
    }
}

/// Decodes a diff from an S-expression.
pub fn diff(s: &Sexp) -> Result<Diff, SyntaxError> {
    let (head, rest) = s.form().ok_or_else(|| s.error(format!("expected diff, found {s}")))?;
    let need = |n: usize| {
        if rest.len() == n {
            Ok(())
        } else {
            Err(s.error(format!("'{head}' expects {n} arguments")))
        }
    };
    match head {
        "congr" => {
            let (l, kids) = rest
                .split_first()
                .ok_or_else(|| s.error("'congr' needs a label"))?;
            let label = sexp::label(l)?;
            let kids = kids.iter().map(diff).collect::<Result<Vec<_>, _>>()?;
            Diff::congr(label, kids).map_err(|e| s.error(e.to_string()))
        }
        "+" | "-" => {
            need(2)?;
            let c = sexp::tooth(&rest[0])?;
            let d = diff(&rest[1])?;
            Ok(if head == "+" { Diff::plus(c, d) } else { Diff::minus(c, d) })
        }
        "replace" => {
            need(2)?;
            Ok(Diff::replace(sexp::tree(&rest[0])?, sexp::tree(&rest[1])?))
        }
        "id" => {
            need(1)?;
            Ok(Diff::identity(&sexp::tree(&rest[0])?))
        }
        _ => Err(s.error(format!("unknown diff form '{head}'"))),
    }
}

/// Decodes a judgement diff `(|- <ctx-diff> <ty-diff>)`.
pub fn judgement_diff(s: &Sexp) -> Result<JudgementDiff, SyntaxError> {
    match s.form() {
        Some(("|-", [c, t])) => Ok(JudgementDiff::new(diff(c)?, diff(t)?)),
        _ => Err(s.error(format!("expected (|- <ctx-diff> <ty-diff>), found {s}"))),
    }
}

/// Parses a diff from text.
pub fn parse_diff(text: &str) -> Result<Diff, SyntaxError> {
    diff(&sexp::read_one(text)?)
}

/// Parses a judgement diff from text.
pub fn parse_judgement_diff(text: &str) -> Result<JudgementDiff, SyntaxError> {
    judgement_diff(&sexp::read_one(text)?)
}
