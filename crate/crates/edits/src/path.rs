//! One-hole contexts over terms and their text form.
//!
//! A term path is written as an ordinary term with a single `_` where the
//! hole is, for example `(lam f (-> Bool Bool) _)`.

use panto_lang::syntax::{print_in, term};
use panto_lang::{Ctx, Term, Ty};
use panto_trees::sexp::{Sexp, SyntaxError};
use panto_trees::Name;

const MARKER: &str = "__hole__";

pub(crate) fn marker() -> Term {
    Term::Free { name: MARKER.into(), ty: Ty::Int }
}

fn is_marker(t: &Term) -> bool {
    matches!(t, Term::Free { name, .. } if &**name == MARKER)
}

/// A single term node with one child position left open.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TermTooth {
    node: Term,
    hole: usize,
}

impl TermTooth {
    /// The tooth of `node` at child `hole`, or `None` when `node` has no
    /// such child.
    pub fn new(node: Term, hole: usize) -> Option<TermTooth> {
        (hole < node.children().len()).then(|| TermTooth { node: node.replace_at(&[hole], marker()).expect("child exists"), hole })
    }

    pub fn hole(&self) -> usize {
        self.hole
    }

    /// The node with a placeholder in the hole.
    pub fn node(&self) -> &Term {
        &self.node
    }

    /// Fills the hole with `t`.
    pub fn plug(&self, t: Term) -> Term {
        self.node.replace_at(&[self.hole], t).expect("hole is a child")
    }
}

/// A one-hole context over terms, stored innermost first.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct TermPath {
    pub teeth: Vec<TermTooth>,
}

impl TermPath {
    pub fn empty() -> TermPath {
        TermPath::default()
    }

    pub fn is_empty(&self) -> bool {
        self.teeth.is_empty()
    }

    pub fn len(&self) -> usize {
        self.teeth.len()
    }

    /// Fills the hole with `t`.
    pub fn plug(&self, t: Term) -> Term {
        self.teeth.iter().fold(t, |acc, tooth| tooth.plug(acc))
    }

    /// Child indices from the outermost tooth down to the hole.
    pub fn positions(&self) -> Vec<usize> {
        self.teeth.iter().rev().map(TermTooth::hole).collect()
    }

    /// Splits `t` at `positions` into the surrounding path and the subterm
    /// in the hole.
    pub fn split(t: &Term, positions: &[usize]) -> Option<(TermPath, Term)> {
        let mut teeth = Vec::with_capacity(positions.len());
        let mut node = t;
        for &i in positions {
            teeth.push(TermTooth::new(node.clone(), i)?);
            node = node.children()[i];
        }
        teeth.reverse();
        Some((TermPath { teeth }, node.clone()))
    }

    /// `outer` around `inner`.
    pub fn concat(outer: &TermPath, inner: &TermPath) -> TermPath {
        let mut teeth = inner.teeth.clone();
        teeth.extend(outer.teeth.iter().cloned());
        TermPath { teeth }
    }

    /// The path as a term whose hole is a placeholder, with the hole's
    /// position.
    fn framed(&self) -> (Term, Vec<usize>) {
        (self.plug(marker()), self.positions())
    }

    /// The path of a term that contains the hole placeholder exactly once.
    pub(crate) fn from_framed(t: &Term) -> Option<TermPath> {
        TermPath::split(t, &find_marker(t)?).map(|(p, _)| p)
    }

    /// Decodes a path whose free variables resolve against `ctx`.
    pub fn parse_sexp(ctx: &Ctx, s: &Sexp) -> Result<TermPath, SyntaxError> {
        let mut holes = 0;
        let marked = mark_hole(s, &mut holes);
        if holes != 1 {
            return Err(s.error(format!("a path needs exactly one '_', found {holes}")));
        }
        let mut names: Vec<Name> = ctx.entries.iter().map(|(n, _)| n.clone()).collect();
        let t = term(&marked, &mut names)?;
        let positions = find_marker(&t).ok_or_else(|| s.error("'_' must stand in a term position"))?;
        Ok(TermPath::split(&t, &positions).expect("marker path is valid").0)
    }

    /// Parses a path whose free variables resolve against `ctx`.
    pub fn parse_in(ctx: &Ctx, text: &str) -> Result<TermPath, SyntaxError> {
        TermPath::parse_sexp(ctx, &panto_trees::sexp::read_one(text)?)
    }

    /// Prints the path with free variables resolved against `ctx`.
    pub fn print_in(&self, ctx: &Ctx) -> String {
        if self.is_empty() {
            return "_".into();
        }
        let (t, _) = self.framed();
        print_in(ctx, &t).replacen(&format!("(free {MARKER} Int)"), "_", 1)
    }

    /// The same path with its outside variables re-resolved by name from
    /// context `from` into context `to`, or `None` when some variable is
    /// missing from `to` or bound there at a different type.
    pub fn rebase(&self, from: &Ctx, to: &Ctx) -> Option<TermPath> {
        let (t, positions) = self.framed();
        let moved = rebase(&t, from, to)?;
        Some(TermPath::split(&moved, &positions).expect("rebase keeps shape").0)
    }
}

fn mark_hole(s: &Sexp, holes: &mut usize) -> Sexp {
    match s {
        Sexp::Atom(a, pos) if a == "_" => {
            *holes += 1;
            Sexp::List(
                vec![
                    Sexp::Atom("free".into(), *pos),
                    Sexp::Atom(MARKER.into(), *pos),
                    Sexp::Atom("Int".into(), *pos),
                ],
                *pos,
            )
        }
        Sexp::Atom(..) => s.clone(),
        Sexp::List(items, pos) => {
            let keep = match items.first().and_then(Sexp::atom) {
                Some("down" | "up") => 2.min(items.len()),
                _ => 0,
            };
            let mut out: Vec<Sexp> = items[..keep].to_vec();
            out.extend(items[keep..].iter().map(|c| mark_hole(c, holes)));
            Sexp::List(out, *pos)
        }
    }
}

fn find_marker(t: &Term) -> Option<Vec<usize>> {
    if is_marker(t) {
        return Some(Vec::new());
    }
    t.children().into_iter().enumerate().find_map(|(i, c)| {
        find_marker(c).map(|mut p| {
            p.insert(0, i);
            p
        })
    })
}

/// Number of binders child `i` of `t` sits under.
fn binders(t: &Term, i: usize) -> usize {
    match t {
        Term::Lam { .. } | Term::Let { .. } => 1,
        Term::Match { .. } if i == 2 => 2,
        _ => 0,
    }
}

/// `t` with the variables it takes from context `from` re-resolved by name
/// in context `to`. A variable reaching past `r` same-named bindings in
/// `from` resolves past `r` same-named bindings in `to`. Returns `None` when a variable is missing from `to`,
/// is bound there at a different type, or when `t` contains a boundary.
pub fn rebase(t: &Term, from: &Ctx, to: &Ctx) -> Option<Term> {
    fn go(t: &Term, depth: usize, from: &Ctx, to: &Ctx) -> Option<Term> {
        match t {
            Term::Var { index, name } if *index >= depth => {
                let k = index - depth;
                let (n, ty) = from.lookup(k)?;
                let rank = (0..k).filter(|&i| from.lookup(i).map(|e| &e.0) == Some(n)).count();
                let j = (0..to.len()).filter(|&i| to.lookup(i).map(|e| &e.0) == Some(n)).nth(rank)?;
                (to.lookup(j)?.1 == *ty && n == name).then(|| Term::Var { index: j + depth, name: name.clone() })
            }
            Term::Down(..) | Term::Up(..) => None,
            _ => {
                let kids = t
                    .children()
                    .into_iter()
                    .enumerate()
                    .map(|(i, c)| go(c, depth + binders(t, i), from, to))
                    .collect::<Option<Vec<Term>>>()?;
                Some(t.with_children(kids))
            }
        }
    }
    go(t, 0, from, to)
}

#[cfg(test)]
mod tests {
    use super::*;
    use panto_lang::parse;

    #[test]
    fn parse_print_round_trip() {
        let ctx = Ctx::empty().extend("l2".into(), Ty::list(Ty::Int));
        for text in [
            "(lam f (-> Bool Bool) _)",
            "(app (app (var append) _) (var l2))",
            "(match _ (nil Int) h t (var t))",
            "(let x Int (lit 1) (app _ (var x)))",
            "_",
        ] {
            let ctx = ctx.extend("append".into(), Ty::arrow(Ty::Int, Ty::arrow(Ty::list(Ty::Int), Ty::Int)));
            let p = TermPath::parse_in(&ctx, text).unwrap();
            assert_eq!(p.print_in(&ctx), text);
        }
    }

    #[test]
    fn hole_count_and_position_are_checked() {
        assert!(TermPath::parse_in(&Ctx::empty(), "(app (lit 1) (lit 2))").is_err());
        assert!(TermPath::parse_in(&Ctx::empty(), "(app _ _)").is_err());
        assert!(TermPath::parse_in(&Ctx::empty(), "(lam _ Int (lit 1))").is_err());
    }

    #[test]
    fn split_then_plug_reconstructs() {
        let t = parse("(let f (-> Int Int) (lam n Int (var n)) (app (var f) (lit 3)))").unwrap();
        for positions in [vec![], vec![0], vec![0, 0], vec![1, 0], vec![1, 1]] {
            let (p, focus) = TermPath::split(&t, &positions).unwrap();
            assert_eq!(p.positions(), positions);
            assert_eq!(p.plug(focus), t);
        }
        assert!(TermPath::split(&t, &[2]).is_none());
    }

    #[test]
    fn rebase_by_name() {
        let from = Ctx::empty().extend("a".into(), Ty::Int).extend("b".into(), Ty::Bool);
        let to = Ctx::empty().extend("b".into(), Ty::Bool).extend("c".into(), Ty::Int).extend("a".into(), Ty::Int);
        let t = parse_in_ctx(&from, "(lam x Int (app (var a) (var b)))");
        let moved = rebase(&t, &from, &to).unwrap();
        assert_eq!(print_in(&to, &moved), "(lam x Int (app (var a) (var b)))");
        let wrong = Ctx::empty().extend("a".into(), Ty::Bool).extend("b".into(), Ty::Bool);
        assert!(rebase(&t, &from, &wrong).is_none());
    }

    fn parse_in_ctx(ctx: &Ctx, text: &str) -> Term {
        panto_lang::parse_in(ctx, text).unwrap()
    }
}
