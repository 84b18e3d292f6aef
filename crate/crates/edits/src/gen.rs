//! Random one-hole contexts, selections and edit actions for fuzzing.

use panto_lang::check::ctx_at;
use panto_lang::{infer, Ctx, Term, Ty};
use panto_testkit::{term, ty, ty_diff_from, TermConfig, NAMES};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::action::{EditAction, Selection};
use crate::path::{marker, TermPath};

/// `t` with every variable that reaches at least `cutoff` binders out
/// shifted outward by `by`.
pub fn shift(t: &Term, by: usize, cutoff: usize) -> Term {
    match t {
        Term::Var { index, name } if *index >= cutoff => Term::Var { index: index + by, name: name.clone() },
        _ => {
            let kids = t
                .children()
                .into_iter()
                .enumerate()
                .map(|(i, c)| {
                    let under = match t {
                        Term::Lam { .. } | Term::Let { .. } => 1,
                        Term::Match { .. } if i == 2 => 2,
                        _ => 0,
                    };
                    shift(c, by, cutoff + under)
                })
                .collect();
            t.with_children(kids)
        }
    }
}

fn name<R: Rng>(rng: &mut R) -> panto_trees::Name {
    (*NAMES.choose(rng).expect("non-empty")).into()
}

/// A random one-hole context of up to `max_teeth` teeth that sits in
/// `ctx` and accepts a term of type `inner`.
pub fn random_path<R: Rng>(rng: &mut R, ctx: &Ctx, inner: &Ty, max_teeth: usize) -> TermPath {
    let cfg = TermConfig { max_depth: 3, error_forms: true, boundaries: false };
    let mut frame = marker();
    let mut cur = inner.clone();
    for _ in 0..rng.gen_range(1..=max_teeth.max(1)) {
        let pick = rng.gen_range(0..11);
        let (node, out) = match (pick, &cur) {
            (0, _) => {
                let a = ty(rng, 1);
                let x = name(rng);
                (Term::Lam { name: x, ann: a.clone(), body: Box::new(shift(&frame, 1, 0)) }, Ty::arrow(a, cur.clone()))
            }
            (1, Ty::Arrow(a, b)) => (Term::app(frame, term(rng, &cfg, ctx, a)), (**b).clone()),
            (2, _) => {
                let b = ty(rng, 1);
                (Term::app(term(rng, &cfg, ctx, &Ty::arrow(cur.clone(), b.clone())), frame), b)
            }
            (3, _) => {
                let (x, a) = (name(rng), ty(rng, 1));
                let def = term(rng, &cfg, &ctx.extend(x.clone(), a.clone()), &a);
                (Term::Let { name: x, ann: a, def: Box::new(def), body: Box::new(shift(&frame, 1, 0)) }, cur.clone())
            }
            (4, _) => {
                let (x, b) = (name(rng), ty(rng, 1));
                let body = term(rng, &cfg, &ctx.extend(x.clone(), cur.clone()), &b);
                (Term::Let { name: x, ann: cur.clone(), def: Box::new(shift(&frame, 1, 0)), body: Box::new(body) }, b)
            }
            (5, Ty::List(a)) => {
                let (h, t, b) = (name(rng), name(rng), ty(rng, 1));
                let inside = ctx.extend(h.clone(), (**a).clone()).extend(t.clone(), cur.clone());
                let nil = term(rng, &cfg, ctx, &b);
                let cons = term(rng, &cfg, &inside, &b);
                (Term::Match { scrut: Box::new(frame), nil: Box::new(nil), head: h, tail: t, cons: Box::new(cons) }, b)
            }
            (6 | 7, _) => {
                let (h, t, a) = (name(rng), name(rng), ty(rng, 1));
                let scrut = term(rng, &cfg, ctx, &Ty::list(a.clone()));
                let inside = ctx.extend(h.clone(), a.clone()).extend(t.clone(), Ty::list(a));
                let node = if pick == 6 {
                    let cons = term(rng, &cfg, &inside, &cur);
                    Term::Match { scrut: Box::new(scrut), nil: Box::new(frame), head: h, tail: t, cons: Box::new(cons) }
                } else {
                    let nil = term(rng, &cfg, ctx, &cur);
                    let cons = Box::new(shift(&frame, 2, 0));
                    Term::Match { scrut: Box::new(scrut), nil: Box::new(nil), head: h, tail: t, cons }
                };
                (node, cur.clone())
            }
            (8, _) => {
                let b = ty(rng, 1);
                (Term::ghost_app(frame, term(rng, &cfg, ctx, &b)), cur.clone())
            }
            (9, _) => {
                let b = ty(rng, 1);
                (Term::ghost_app(term(rng, &cfg, ctx, &b), frame), b)
            }
            _ => {
                let b = ty(rng, 1);
                (Term::Err { inner: cur.clone(), outer: b.clone(), body: Box::new(frame) }, b)
            }
        };
        frame = node;
        cur = out;
    }
    TermPath::from_framed(&frame).expect("frame holds the placeholder")
}

/// Every node position of `t` in pre-order.
pub fn positions(t: &Term) -> Vec<Vec<usize>> {
    fn go(t: &Term, p: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(p.clone());
        for (i, c) in t.children().into_iter().enumerate() {
            p.push(i);
            go(c, p, out);
            p.pop();
        }
    }
    let mut out = Vec::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

/// A random selection of at most `max_middle` teeth.
pub fn random_selection<R: Rng>(rng: &mut R, program: &Term, max_middle: usize) -> Selection {
    let outer = positions(program).choose(rng).expect("non-empty").clone();
    let mut middle = Vec::new();
    let mut node = program.at(&outer).expect("valid");
    for _ in 0..rng.gen_range(0..=max_middle) {
        let kids = node.children();
        if kids.is_empty() {
            break;
        }
        let i = rng.gen_range(0..kids.len());
        middle.push(i);
        node = kids[i];
    }
    Selection::new(outer, middle)
}

fn binders_of(program: &Term, want_lam: bool) -> Vec<(Vec<usize>, &Ty)> {
    positions(program)
        .into_iter()
        .filter_map(|p| match program.at(&p)? {
            Term::Lam { ann, .. } if want_lam => Some((p, ann)),
            Term::Let { ann, .. } if !want_lam => Some((p, ann)),
            _ => None,
        })
        .map(|(p, a)| (p.clone(), a))
        .collect()
}

/// A random edit of `program`. The clipboard operations are left out
/// except for cut.
pub fn random_action<R: Rng>(rng: &mut R, program: &Term) -> EditAction {
    let all = positions(program);
    loop {
        let at = all.choose(rng).expect("non-empty").clone();
        match rng.gen_range(0..10) {
            0..=3 => {
                let ctx = ctx_at(&Ctx::empty(), program, &at).expect("boundary-free");
                let here = infer(&ctx, program.at(&at).expect("valid")).expect("well typed");
                return EditAction::InsertPath { path: random_path(rng, &ctx, &here, 3), at };
            }
            4..=5 => return EditAction::DeleteSelection(random_selection(rng, program, 3)),
            6 => {
                let lams = binders_of(program, true);
                if let Some((at, ann)) = lams.choose(rng) {
                    return EditAction::AnnotateLam { at: at.clone(), delta: ty_diff_from(rng, ann, 3) };
                }
            }
            7 => {
                let lets = binders_of(program, false);
                if let Some((at, ann)) = lets.choose(rng) {
                    return EditAction::AnnotateLet { at: at.clone(), delta: ty_diff_from(rng, ann, 3) };
                }
            }
            8 => {
                let holes: Vec<&Vec<usize>> = all.iter().filter(|p| matches!(program.at(p), Some(Term::Hole(_)))).collect();
                if let Some(&at) = holes.choose(rng) {
                    let ctx = ctx_at(&Ctx::empty(), program, at).expect("boundary-free");
                    let Some(Term::Hole(hty)) = program.at(at) else { unreachable!() };
                    let cfg = TermConfig { max_depth: 3, error_forms: true, boundaries: false };
                    return EditAction::FillHole { at: at.clone(), term: term(rng, &cfg, &ctx, hty) };
                }
            }
            _ => return EditAction::Cut(random_selection(rng, program, 2)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diff::path_diff;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_paths_fit_their_hole() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let ctx = panto_testkit::ctx(&mut rng, 3);
            let inner = ty(&mut rng, 2);
            let p = random_path(&mut rng, &ctx, &inner, 4);
            let whole = p.plug(Term::Hole(inner.clone()));
            assert!(infer(&ctx, &whole).is_ok(), "{}", p.print_in(&ctx));
            assert!(path_diff(&p, &ctx, &inner).is_ok());
        }
    }
}
