//! Canonical S-expression text for terms.
//!
//! Variables print as `(var x)` when `x` is the nearest binder of that name
//! and as `(var x k)` with an explicit de Bruijn index otherwise. Inside a
//! diff boundary, names resolve against the context on the body's side of
//! the boundary.

use std::fmt;

use num_bigint::BigInt;
use panto_diffs::text::judgement_diff;
use panto_diffs::JudgementDiff;
use panto_trees::sexp::{self, Sexp, SyntaxError};
use panto_trees::Name;

use crate::{Ctx, Term, Ty};

/// Parses a closed term.
pub fn parse(text: &str) -> Result<Term, SyntaxError> {
    parse_in(&Ctx::empty(), text)
}

/// Parses a term whose free variables resolve against `ctx`.
pub fn parse_in(ctx: &Ctx, text: &str) -> Result<Term, SyntaxError> {
    let mut names: Vec<Name> = ctx.entries.iter().map(|(n, _)| n.clone()).collect();
    term(&sexp::read_one(text)?, &mut names)
}

/// Parses a type.
pub fn parse_ty(text: &str) -> Result<Ty, SyntaxError> {
    ty(&sexp::read_one(text)?)
}

/// Decodes a type from an S-expression.
pub fn ty(s: &Sexp) -> Result<Ty, SyntaxError> {
    let t = sexp::tree(s)?;
    Ty::from_tree(&t).map_err(|_| s.error(format!("expected a type, found {s}")))
}

fn side_names(s: &Sexp, jd: &JudgementDiff, up: bool) -> Result<Vec<Name>, SyntaxError> {
    let tree = if up { jd.ctx.right() } else { jd.ctx.left() };
    let ctx = Ctx::from_tree(&tree).map_err(|e| s.error(e.to_string()))?;
    Ok(ctx.entries.into_iter().map(|(n, _)| n).collect())
}

/// Decodes a term, resolving variables against `names` (innermost last).
pub fn term(s: &Sexp, names: &mut Vec<Name>) -> Result<Term, SyntaxError> {
    let (head, rest) = s
        .form()
        .ok_or_else(|| s.error(format!("expected a term, found {s}")))?;
    let need = |n: usize| {
        if rest.len() == n {
            Ok(())
        } else {
            Err(s.error(format!("'{head}' expects {n} arguments, found {}", rest.len())))
        }
    };
    let under = |binders: &[Name], body: &Sexp, names: &mut Vec<Name>| {
        let mark = names.len();
        names.extend(binders.iter().cloned());
        let r = term(body, names);
        names.truncate(mark);
        r
    };
    Ok(match head {
        "lam" => {
            need(3)?;
            let x = sexp::ident(&rest[0])?;
            let ann = ty(&rest[1])?;
            let body = under(std::slice::from_ref(&x), &rest[2], names)?;
            Term::Lam { name: x, ann, body: Box::new(body) }
        }
        "app" | "ghost-app" => {
            need(2)?;
            let f = term(&rest[0], names)?;
            let a = term(&rest[1], names)?;
            if head == "app" {
                Term::app(f, a)
            } else {
                Term::ghost_app(f, a)
            }
        }
        "var" => {
            if rest.is_empty() || rest.len() > 2 {
                return Err(s.error("'var' expects a name and an optional index"));
            }
            let x = sexp::ident(&rest[0])?;
            let index = match rest.get(1) {
                Some(k) => {
                    let k = sexp::nat(k)? as usize;
                    match names.len().checked_sub(k + 1).map(|i| &names[i]) {
                        Some(n) if *n == x => k,
                        _ => return Err(s.error(format!("index {k} does not refer to a binder named {x}"))),
                    }
                }
                None => names
                    .iter()
                    .rev()
                    .position(|n| *n == x)
                    .ok_or_else(|| s.error(format!("unbound variable {x}")))?,
            };
            Term::Var { index, name: x }
        }
        "let" => {
            need(4)?;
            let x = sexp::ident(&rest[0])?;
            let ann = ty(&rest[1])?;
            let def = under(std::slice::from_ref(&x), &rest[2], names)?;
            let body = under(std::slice::from_ref(&x), &rest[3], names)?;
            Term::Let { name: x, ann, def: Box::new(def), body: Box::new(body) }
        }
        "match" => {
            need(5)?;
            let scrut = term(&rest[0], names)?;
            let nil = term(&rest[1], names)?;
            let h = sexp::ident(&rest[2])?;
            let t = sexp::ident(&rest[3])?;
            let cons = under(&[h.clone(), t.clone()], &rest[4], names)?;
            Term::Match { scrut: Box::new(scrut), nil: Box::new(nil), head: h, tail: t, cons: Box::new(cons) }
        }
        "hole" => {
            need(1)?;
            Term::Hole(ty(&rest[0])?)
        }
        "lit" => {
            need(1)?;
            let n = rest[0]
                .atom()
                .and_then(|a| a.parse::<BigInt>().ok())
                .ok_or_else(|| rest[0].error(format!("expected an integer, found {}", rest[0])))?;
            Term::Int(n)
        }
        "true" | "false" => {
            need(0)?;
            Term::Bool(head == "true")
        }
        "nil" | "cons" => {
            need(1)?;
            let t = ty(&rest[0])?;
            if head == "nil" {
                Term::Nil(t)
            } else {
                Term::Cons(t)
            }
        }
        "free" => {
            need(2)?;
            Term::Free { name: sexp::ident(&rest[0])?, ty: ty(&rest[1])? }
        }
        "err" => {
            need(3)?;
            let inner = ty(&rest[0])?;
            let outer = ty(&rest[1])?;
            Term::Err { inner, outer, body: Box::new(term(&rest[2], names)?) }
        }
        "down" | "up" => {
            need(2)?;
            let jd = judgement_diff(&rest[0])?;
            let mut inner = side_names(s, &jd, head == "up")?;
            let body = term(&rest[1], &mut inner)?;
            if head == "down" {
                Term::down(jd, body)
            } else {
                Term::up(jd, body)
            }
        }
        _ => return Err(s.error(format!("unknown term form '{head}'"))),
    })
}

struct Printer<'a> {
    names: Vec<Name>,
    out: &'a mut dyn fmt::Write,
}

impl Printer<'_> {
    fn under(&mut self, binders: &[&Name], t: &Term) -> fmt::Result {
        let mark = self.names.len();
        self.names.extend(binders.iter().map(|n| (*n).clone()));
        let r = self.term(t);
        self.names.truncate(mark);
        r
    }

    fn term(&mut self, t: &Term) -> fmt::Result {
        match t {
            Term::Lam { name, ann, body } => {
                write!(self.out, "(lam {name} {ann} ")?;
                self.under(&[name], body)?;
            }
            Term::App(f, a) | Term::GhostApp(f, a) => {
                let head = if matches!(t, Term::App(..)) { "app" } else { "ghost-app" };
                write!(self.out, "({head} ")?;
                self.term(f)?;
                self.out.write_str(" ")?;
                self.term(a)?;
            }
            Term::Var { index, name } => {
                let nearest = self.names.iter().rev().position(|n| n == name);
                if nearest == Some(*index) {
                    write!(self.out, "(var {name}")?;
                } else {
                    write!(self.out, "(var {name} {index}")?;
                }
            }
            Term::Let { name, ann, def, body } => {
                write!(self.out, "(let {name} {ann} ")?;
                self.under(&[name], def)?;
                self.out.write_str(" ")?;
                self.under(&[name], body)?;
            }
            Term::Match { scrut, nil, head, tail, cons } => {
                self.out.write_str("(match ")?;
                self.term(scrut)?;
                self.out.write_str(" ")?;
                self.term(nil)?;
                write!(self.out, " {head} {tail} ")?;
                self.under(&[head, tail], cons)?;
            }
            Term::Hole(ty) => write!(self.out, "(hole {ty}")?,
            Term::Int(n) => write!(self.out, "(lit {n}")?,
            Term::Bool(b) => write!(self.out, "({b}")?,
            Term::Nil(ty) => write!(self.out, "(nil {ty}")?,
            Term::Cons(ty) => write!(self.out, "(cons {ty}")?,
            Term::Free { name, ty } => write!(self.out, "(free {name} {ty}")?,
            Term::Err { inner, outer, body } => {
                write!(self.out, "(err {inner} {outer} ")?;
                self.term(body)?;
            }
            Term::Down(jd, body) | Term::Up(jd, body) => {
                let up = matches!(t, Term::Up(..));
                write!(self.out, "({} {jd} ", if up { "up" } else { "down" })?;
                let side = if up { jd.ctx.right() } else { jd.ctx.left() };
                let inner = match Ctx::from_tree(&side) {
                    Ok(ctx) => ctx.entries.into_iter().map(|(n, _)| n).collect(),
                    Err(_) => Vec::new(),
                };
                let saved = std::mem::replace(&mut self.names, inner);
                let r = self.term(body);
                self.names = saved;
                r?;
            }
        }
        self.out.write_str(")")
    }
}

/// Prints `t` with variables resolved against `ctx`.
pub fn print_in(ctx: &Ctx, t: &Term) -> String {
    let mut s = String::new();
    let mut p = Printer {
        names: ctx.entries.iter().map(|(n, _)| n.clone()).collect(),
        out: &mut s,
    };
    p.term(t).expect("writing to a string");
    s
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Printer { names: Vec::new(), out: f }.term(self)
    }
}
