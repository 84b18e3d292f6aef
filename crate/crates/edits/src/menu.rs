//! The catalog of edits offered at a cursor, filtered by a query string.

use num_bigint::BigInt;
use panto_lang::{Ctx, Term, Ty};
use panto_trees::{Label, Name, Tree};

use crate::action::{EditAction, Selection};
use crate::diff::path_diff;
use crate::path::TermPath;

/// One entry of the edit menu.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MenuItem {
    /// The name the query is matched against.
    pub name: String,
    /// A human-readable description of the result.
    pub label: String,
    pub action: EditAction,
}

fn max_hole_in_ty(t: &Ty) -> Option<u64> {
    match t {
        Ty::Hole(n) => Some(*n),
        Ty::Arrow(a, b) => max_hole_in_ty(a).max(max_hole_in_ty(b)),
        Ty::List(a) => max_hole_in_ty(a),
        Ty::Int | Ty::Bool => None,
    }
}

fn max_hole_in_tree(t: &Tree) -> Option<u64> {
    let own = match t.label() {
        Label::TyHole(n) => Some(*n),
        _ => None,
    };
    t.children().iter().map(max_hole_in_tree).fold(own, Option::max)
}

/// The first type-hole id not used anywhere in `program`.
pub fn next_type_hole(program: &Term) -> u64 {
    fn go(t: &Term) -> Option<u64> {
        let own = match t {
            Term::Lam { ann, .. } | Term::Let { ann, .. } => max_hole_in_ty(ann),
            Term::Hole(ty) | Term::Nil(ty) | Term::Cons(ty) | Term::Free { ty, .. } => max_hole_in_ty(ty),
            Term::Err { inner, outer, .. } => max_hole_in_ty(inner).max(max_hole_in_ty(outer)),
            Term::Down(jd, _) | Term::Up(jd, _) => max_hole_in_tree(&jd.to_diff().left()).max(max_hole_in_tree(&jd.to_diff().right())),
            _ => None,
        };
        t.children().into_iter().map(go).fold(own, Option::max)
    }
    go(program).map_or(0, |n| n + 1)
}

/// A binder name not bound in `ctx`, preferring `base`.
pub fn fresh_name(ctx: &Ctx, base: &str) -> Name {
    let taken = |n: &str| ctx.index_of(n).is_some();
    if !taken(base) {
        return base.into();
    }
    (1..).map(|i| format!("{base}{i}")).find(|n| !taken(n)).expect("unbounded").into()
}

fn path(ctx: &Ctx, text: &str) -> TermPath {
    TermPath::parse_in(ctx, text).expect("catalog paths are well formed")
}

fn applied(f: Term, mut ty: &Ty, target: &Ty) -> Option<Term> {
    let mut t = f;
    loop {
        if ty == target {
            return Some(t);
        }
        match ty {
            Ty::Arrow(a, b) => {
                t = Term::app(t, Term::Hole((**a).clone()));
                ty = b;
            }
            _ => return None,
        }
    }
}

/// The applicable edits at `at` whose name starts with `query`. A query
/// that parses as an integer offers that literal for an `Int` hole.
pub fn enumerate_edits(program: &Term, at: &[usize], query: &str) -> Vec<MenuItem> {
    let Some(t) = program.at(at) else { return Vec::new() };
    let Some(ctx) = panto_lang::check::ctx_at(&Ctx::empty(), program, at) else { return Vec::new() };
    let Ok(ty) = panto_lang::infer(&ctx, t) else { return Vec::new() };
    if program.has_boundary() {
        return Vec::new();
    }
    let fresh = Ty::Hole(next_type_hole(program));
    let x = fresh_name(&ctx, "x");
    let (h, tl) = (fresh_name(&ctx, "h"), fresh_name(&ctx, "t"));
    let mut items: Vec<MenuItem> = Vec::new();
    let mut wrap = |name: &str, text: String| {
        let p = path(&ctx, &text);
        if path_diff(&p, &ctx, &ty).is_ok() {
            items.push(MenuItem {
                name: name.into(),
                label: format!("wrap in {}", p.print_in(&ctx)),
                action: EditAction::InsertPath { at: at.to_vec(), path: p },
            });
        }
    };
    wrap("lam", format!("(lam {x} {fresh} _)"));
    wrap("let", format!("(let {x} {fresh} (hole {fresh}) _)"));
    if let Ty::Arrow(a, _) = &ty {
        wrap("app", format!("(app _ (hole {a}))"));
    }
    wrap("app", format!("(app (hole (-> {ty} {fresh})) _)"));
    if let Ty::List(_) = &ty {
        wrap("match", format!("(match _ (hole {fresh}) {h} {tl} (hole {fresh}))"));
    }
    if let Term::Hole(_) = t {
        let mut fills: Vec<(String, Term)> = Vec::new();
        if let Ok(n) = query.parse::<BigInt>() {
            if ty == Ty::Int {
                fills.push((query.into(), Term::Int(n)));
            }
        }
        match &ty {
            Ty::Bool => fills.extend([("true".into(), Term::Bool(true)), ("false".into(), Term::Bool(false))]),
            Ty::List(a) => {
                fills.push(("nil".into(), Term::Nil((**a).clone())));
                let cons = Term::app(
                    Term::app(Term::Cons((**a).clone()), Term::Hole((**a).clone())),
                    Term::Hole(ty.clone()),
                );
                fills.push(("cons".into(), cons));
            }
            Ty::Arrow(a, b) => {
                let body = Term::Hole((**b).clone());
                fills.push(("lam".into(), Term::Lam { name: x.clone(), ann: (**a).clone(), body: Box::new(body) }));
            }
            _ => {}
        }
        let mut seen: Vec<&Name> = Vec::new();
        for (index, (name, vty)) in ctx.entries.iter().rev().enumerate() {
            if seen.contains(&name) {
                continue;
            }
            seen.push(name);
            if let Some(term) = applied(Term::Var { index, name: name.clone() }, vty, &ty) {
                fills.push((name.to_string(), term));
            }
        }
        let hole = |t: &Ty| Box::new(Term::Hole(t.clone()));
        fills.push((
            "let".into(),
            Term::Let { name: x.clone(), ann: fresh.clone(), def: hole(&fresh), body: hole(&ty) },
        ));
        fills.push(("app".into(), Term::App(hole(&Ty::arrow(fresh.clone(), ty.clone())), hole(&fresh))));
        fills.push((
            "match".into(),
            Term::Match { scrut: hole(&Ty::list(fresh.clone())), nil: hole(&ty), head: h, tail: tl, cons: hole(&ty) },
        ));
        for (name, term) in fills {
            if panto_lang::infer(&ctx, &term).as_ref() == Ok(&ty) {
                items.push(MenuItem {
                    label: format!("fill with {}", panto_lang::syntax::print_in(&ctx, &term)),
                    name,
                    action: EditAction::FillHole { at: at.to_vec(), term },
                });
            }
        }
    } else {
        items.push(MenuItem { name: "dig".into(), label: "replace with a hole".into(), action: EditAction::Dig { at: at.to_vec() } });
        items.push(MenuItem {
            name: "delete".into(),
            label: "cut to the clipboard".into(),
            action: EditAction::Cut(Selection::new(at.to_vec(), Vec::new())),
        });
    }
    let numeric = query.parse::<BigInt>().is_ok();
    items.retain(|i| if numeric { i.name == query } else { i.name.starts_with(query) });
    items
}

#[cfg(test)]
mod tests {
    use super::*;
    use panto_lang::parse;

    #[test]
    fn lam_query_wraps_with_fresh_type_hole() {
        let p = parse("(lit 10)").unwrap();
        let items = enumerate_edits(&p, &[], "lam");
        assert_eq!(items.len(), 1);
        let EditAction::InsertPath { path, .. } = &items[0].action else { panic!("expected an insert") };
        assert_eq!(path.print_in(&Ctx::empty()), "(lam x (? 0) _)");
    }

    #[test]
    fn int_hole_offers_literals_and_variables() {
        let p = parse("(lam n Int (lam b Bool (hole Int)))").unwrap();
        let items = enumerate_edits(&p, &[0, 0], "");
        let fills: Vec<Term> = items
            .iter()
            .filter_map(|i| match &i.action {
                EditAction::FillHole { term, .. } => Some(term.clone()),
                _ => None,
            })
            .collect();
        assert!(fills.contains(&Term::var(1, "n")));
        assert!(!fills.contains(&Term::var(0, "b")));
        let lit = enumerate_edits(&p, &[0, 0], "42");
        assert_eq!(lit.len(), 1);
        assert_eq!(lit[0].action, EditAction::FillHole { at: vec![0, 0], term: Term::int(42) });
    }

    #[test]
    fn let_query_anywhere() {
        let p = parse("(lam n Int (app (lam m Int (var m)) (var n)))").unwrap();
        for at in [vec![], vec![0], vec![0, 0], vec![0, 1]] {
            let items = enumerate_edits(&p, &at, "let");
            assert!(items.iter().any(|i| matches!(i.action, EditAction::InsertPath { .. })), "{at:?}");
        }
    }

    #[test]
    fn fresh_hole_counter() {
        assert_eq!(next_type_hole(&parse("(lit 1)").unwrap()), 0);
        assert_eq!(next_type_hole(&parse("(lam x (? 3) (hole (-> (? 7) Int)))").unwrap()), 8);
    }
}
