//! A small typed core language with error forms and diff boundaries.
//!
//! Types are `Int`, `Bool`, arrows, lists and opaque type holes. Terms use
//! de Bruijn indices for variables and keep the binder name for display.
//! Besides the ordinary forms there are three error forms (a commented
//! application, a free variable and a type error boundary) and two diff
//! boundaries that carry a change through the program while it is being
//! repaired.

pub mod check;
pub mod rules;
pub mod syntax;

use std::fmt;

use num_bigint::BigInt;
use panto_diffs::JudgementDiff;
use panto_trees::{Label, Name, Tree};
use thiserror::Error;

pub use check::{infer, judgements, NodeJudgement, TypeError};
pub use rules::{rule_for, rule_table, Form, TypingRule};
pub use syntax::{parse, parse_in, parse_ty};

/// A tree that does not encode a type, context or judgement.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot decode {expected} from tree {found}")]
pub struct DecodeError {
    pub expected: &'static str,
    pub found: Tree,
}

/// A type.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ty {
    Int,
    Bool,
    Arrow(Box<Ty>, Box<Ty>),
    List(Box<Ty>),
    Hole(u64),
}

impl Ty {
    pub fn arrow(dom: Ty, cod: Ty) -> Ty {
        Ty::Arrow(Box::new(dom), Box::new(cod))
    }

    pub fn list(elem: Ty) -> Ty {
        Ty::List(Box::new(elem))
    }

    pub fn to_tree(&self) -> Tree {
        match self {
            Ty::Int => Tree::int(),
            Ty::Bool => Tree::bool(),
            Ty::Arrow(a, b) => Tree::arrow(a.to_tree(), b.to_tree()),
            Ty::List(a) => Tree::list(a.to_tree()),
            Ty::Hole(n) => Tree::ty_hole(*n),
        }
    }

    pub fn from_tree(t: &Tree) -> Result<Ty, DecodeError> {
        let kids = t.children();
        Ok(match t.label() {
            Label::Int => Ty::Int,
            Label::Bool => Ty::Bool,
            Label::Arrow => Ty::arrow(Ty::from_tree(&kids[0])?, Ty::from_tree(&kids[1])?),
            Label::List => Ty::list(Ty::from_tree(&kids[0])?),
            Label::TyHole(n) => Ty::Hole(*n),
            _ => {
                return Err(DecodeError {
                    expected: "type",
                    found: t.clone(),
                })
            }
        })
    }

    /// Number of nodes in the type.
    pub fn size(&self) -> usize {
        match self {
            Ty::Arrow(a, b) => 1 + a.size() + b.size(),
            Ty::List(a) => 1 + a.size(),
            _ => 1,
        }
    }
}

impl fmt::Display for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ty::Int => f.write_str("Int"),
            Ty::Bool => f.write_str("Bool"),
            Ty::Arrow(a, b) => write!(f, "(-> {a} {b})"),
            Ty::List(a) => write!(f, "(List {a})"),
            Ty::Hole(n) => write!(f, "(? {n})"),
        }
    }
}

impl fmt::Debug for Ty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A typing context, innermost binding last.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Ctx {
    pub entries: Vec<(Name, Ty)>,
}

impl Ctx {
    pub fn empty() -> Ctx {
        Ctx::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The context extended with one more binding.
    pub fn extend(&self, name: Name, ty: Ty) -> Ctx {
        let mut entries = self.entries.clone();
        entries.push((name, ty));
        Ctx { entries }
    }

    /// The binding at de Bruijn index `index`, counting from the innermost.
    pub fn lookup(&self, index: usize) -> Option<&(Name, Ty)> {
        self.entries.len().checked_sub(index + 1).map(|i| &self.entries[i])
    }

    /// De Bruijn index of the nearest binding named `name`.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.entries.iter().rev().position(|(n, _)| &**n == name)
    }

    pub fn to_tree(&self) -> Tree {
        self.entries.iter().fold(Tree::empty_ctx(), |acc, (n, t)| {
            Tree::ctx_extend(acc, n.clone(), t.to_tree())
        })
    }

    pub fn from_tree(t: &Tree) -> Result<Ctx, DecodeError> {
        let mut entries = Vec::new();
        let mut cur = t.clone();
        loop {
            match cur.label().clone() {
                Label::EmptyCtx => break,
                Label::CtxExtend(name) => {
                    let kids = cur.children();
                    entries.push((name, Ty::from_tree(&kids[1])?));
                    let rest = kids[0].clone();
                    cur = rest;
                }
                _ => {
                    return Err(DecodeError {
                        expected: "context",
                        found: t.clone(),
                    })
                }
            }
        }
        entries.reverse();
        Ok(Ctx { entries })
    }
}

impl fmt::Debug for Ctx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_tree())
    }
}

/// Encodes a typing judgement `ctx ⊢ ty` as a turnstile tree.
pub fn judgement_tree(ctx: &Ctx, ty: &Ty) -> Tree {
    Tree::turnstile(ctx.to_tree(), ty.to_tree())
}

/// Decodes a turnstile tree into its context and type.
pub fn judgement_from_tree(t: &Tree) -> Result<(Ctx, Ty), DecodeError> {
    match t.label() {
        Label::Turnstile => Ok((Ctx::from_tree(&t.children()[0])?, Ty::from_tree(&t.children()[1])?)),
        _ => Err(DecodeError {
            expected: "judgement",
            found: t.clone(),
        }),
    }
}

/// A term.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Lam { name: Name, ann: Ty, body: Box<Term> },
    App(Box<Term>, Box<Term>),
    Var { index: usize, name: Name },
    Let { name: Name, ann: Ty, def: Box<Term>, body: Box<Term> },
    Match { scrut: Box<Term>, nil: Box<Term>, head: Name, tail: Name, cons: Box<Term> },
    Hole(Ty),
    Int(BigInt),
    Bool(bool),
    Nil(Ty),
    Cons(Ty),
    GhostApp(Box<Term>, Box<Term>),
    Free { name: Name, ty: Ty },
    Err { inner: Ty, outer: Ty, body: Box<Term> },
    Down(JudgementDiff, Box<Term>),
    Up(JudgementDiff, Box<Term>),
}

impl Term {
    pub fn lam(name: &str, ann: Ty, body: Term) -> Term {
        Term::Lam { name: name.into(), ann, body: Box::new(body) }
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    pub fn var(index: usize, name: &str) -> Term {
        Term::Var { index, name: name.into() }
    }

    pub fn let_(name: &str, ann: Ty, def: Term, body: Term) -> Term {
        Term::Let { name: name.into(), ann, def: Box::new(def), body: Box::new(body) }
    }

    pub fn ghost_app(f: Term, a: Term) -> Term {
        Term::GhostApp(Box::new(f), Box::new(a))
    }

    pub fn down(jd: JudgementDiff, body: Term) -> Term {
        Term::Down(jd, Box::new(body))
    }

    pub fn up(jd: JudgementDiff, body: Term) -> Term {
        Term::Up(jd, Box::new(body))
    }

    pub fn int(n: i64) -> Term {
        Term::Int(BigInt::from(n))
    }

    /// The form of the node; `None` for diff boundaries.
    pub fn form(&self) -> Option<Form> {
        Some(match self {
            Term::Lam { .. } => Form::Lam,
            Term::App(..) => Form::App,
            Term::Var { .. } => Form::Var,
            Term::Let { .. } => Form::Let,
            Term::Match { .. } => Form::Match,
            Term::Hole(_) => Form::Hole,
            Term::Int(_) => Form::Int,
            Term::Bool(_) => Form::Bool,
            Term::Nil(_) => Form::Nil,
            Term::Cons(_) => Form::Cons,
            Term::GhostApp(..) => Form::GhostApp,
            Term::Free { .. } => Form::Free,
            Term::Err { .. } => Form::Err,
            Term::Down(..) | Term::Up(..) => return None,
        })
    }

    pub fn is_boundary(&self) -> bool {
        matches!(self, Term::Down(..) | Term::Up(..))
    }

    /// Child terms in order.
    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Lam { body, .. } | Term::Err { body, .. } => vec![body],
            Term::Down(_, body) | Term::Up(_, body) => vec![body],
            Term::App(f, a) | Term::GhostApp(f, a) => vec![f, a],
            Term::Let { def, body, .. } => vec![def, body],
            Term::Match { scrut, nil, cons, .. } => vec![scrut, nil, cons],
            Term::Var { .. }
            | Term::Hole(_)
            | Term::Int(_)
            | Term::Bool(_)
            | Term::Nil(_)
            | Term::Cons(_)
            | Term::Free { .. } => vec![],
        }
    }

    fn children_mut(&mut self) -> Vec<&mut Term> {
        match self {
            Term::Lam { body, .. } | Term::Err { body, .. } => vec![body],
            Term::Down(_, body) | Term::Up(_, body) => vec![body],
            Term::App(f, a) | Term::GhostApp(f, a) => vec![f, a],
            Term::Let { def, body, .. } => vec![def, body],
            Term::Match { scrut, nil, cons, .. } => vec![scrut, nil, cons],
            Term::Var { .. }
            | Term::Hole(_)
            | Term::Int(_)
            | Term::Bool(_)
            | Term::Nil(_)
            | Term::Cons(_)
            | Term::Free { .. } => vec![],
        }
    }

    /// The same node with its children replaced, in order.
    pub fn with_children(&self, children: Vec<Term>) -> Term {
        let mut t = self.clone();
        let slots = t.children_mut();
        assert_eq!(slots.len(), children.len(), "child count mismatch");
        for (slot, c) in slots.into_iter().zip(children) {
            *slot = c;
        }
        t
    }

    /// The subterm at a path of child indices, outermost first.
    pub fn at(&self, path: &[usize]) -> Option<&Term> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.children().get(i)?.at(rest),
        }
    }

    /// Replaces the subterm at `path`, returning `None` for a bad path.
    pub fn replace_at(&self, path: &[usize], new: Term) -> Option<Term> {
        match path.split_first() {
            None => Some(new),
            Some((&i, rest)) => {
                let mut kids: Vec<Term> = self.children().into_iter().cloned().collect();
                let child = kids.get(i)?.replace_at(rest, new)?;
                kids[i] = child;
                Some(self.with_children(kids))
            }
        }
    }

    /// Number of term nodes.
    pub fn size(&self) -> usize {
        1 + self.children().iter().map(|c| c.size()).sum::<usize>()
    }

    /// Number of nodes on the longest root-to-leaf path.
    pub fn depth(&self) -> usize {
        1 + self.children().iter().map(|c| c.depth()).max().unwrap_or(0)
    }

    /// True when the term contains a diff boundary.
    pub fn has_boundary(&self) -> bool {
        self.is_boundary() || self.children().iter().any(|c| c.has_boundary())
    }

    /// Paths of every diff boundary in pre-order.
    pub fn boundary_paths(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        fn go(t: &Term, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if t.is_boundary() {
                out.push(path.clone());
            }
            for (i, c) in t.children().into_iter().enumerate() {
                path.push(i);
                go(c, path, out);
                path.pop();
            }
        }
        go(self, &mut Vec::new(), &mut out);
        out
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ctx_tree_round_trip() {
        let ctx = Ctx::empty().extend("x".into(), Ty::Int).extend("f".into(), Ty::arrow(Ty::Bool, Ty::Hole(0)));
        let t = ctx.to_tree();
        assert_eq!(t.to_string(), "(ext f (ext x empty Int) (-> Bool (? 0)))");
        assert_eq!(Ctx::from_tree(&t).unwrap(), ctx);
        assert_eq!(ctx.lookup(0).unwrap().0.as_ref(), "f");
        assert_eq!(ctx.index_of("x"), Some(1));
    }

    #[test]
    fn judgement_encoding_of_let_premise() {
        let a = Ty::Hole(7);
        let ctx = Ctx::empty().extend("x".into(), a.clone());
        let t = judgement_tree(&ctx, &a);
        assert_eq!(t.to_string(), "(|- (ext x empty (? 7)) (? 7))");
        assert_eq!(judgement_from_tree(&t).unwrap(), (ctx, a));
        assert!(judgement_from_tree(&Tree::int()).is_err());
    }

    #[test]
    fn replace_at_and_at() {
        let t = Term::app(Term::lam("x", Ty::Int, Term::var(0, "x")), Term::int(3));
        let u = t.replace_at(&[0, 0], Term::Hole(Ty::Int)).unwrap();
        assert_eq!(u.at(&[0, 0]), Some(&Term::Hole(Ty::Int)));
        assert!(t.replace_at(&[2], Term::Bool(true)).is_none());
    }
}
