//! Random generators for types, type diffs and well-typed terms.
//!
//! Every generator takes an explicit random source so that tests are
//! reproducible from a seed.

use num_bigint::BigInt;
use panto_diffs::{Diff, JudgementDiff};
use panto_lang::{Ctx, Term, Ty};
use panto_trees::{Label, Name, Tooth, Tree};
use rand::seq::SliceRandom;
use rand::Rng;

fn small_int<R: Rng>(rng: &mut R) -> BigInt {
    if rng.gen_bool(0.05) {
        BigInt::from(rng.gen::<i64>()) * BigInt::from(rng.gen::<i64>())
    } else {
        BigInt::from(rng.gen_range(-20..100))
    }
}

pub const NAMES: [&str; 8] = ["x", "y", "z", "f", "g", "n", "b", "k"];

fn name<R: Rng>(rng: &mut R) -> Name {
    (*NAMES.choose(rng).expect("non-empty")).into()
}

/// A random type with at most `depth` levels of nesting.
pub fn ty<R: Rng>(rng: &mut R, depth: usize) -> Ty {
    let leaf = depth == 0 || rng.gen_bool(0.45);
    if leaf {
        return match rng.gen_range(0..6) {
            0..=1 => Ty::Int,
            2..=3 => Ty::Bool,
            _ => Ty::Hole(rng.gen_range(0..3)),
        };
    }
    if rng.gen_bool(0.6) {
        Ty::arrow(ty(rng, depth - 1), ty(rng, depth - 1))
    } else {
        Ty::list(ty(rng, depth - 1))
    }
}

/// A random context of up to `max_len` bindings.
pub fn ctx<R: Rng>(rng: &mut R, max_len: usize) -> Ctx {
    let n = rng.gen_range(0..=max_len);
    let mut c = Ctx::empty();
    for _ in 0..n {
        c = c.extend(name(rng), ty(rng, 2));
    }
    c
}

/// A random diff over type trees whose left endpoint is `from`.
pub fn ty_diff_from<R: Rng>(rng: &mut R, from: &Ty, budget: usize) -> Diff {
    let t = from.to_tree();
    if budget == 0 {
        return Diff::identity(&t);
    }
    match rng.gen_range(0..10) {
        0..=1 => Diff::identity(&t),
        2..=3 => match from {
            Ty::Arrow(a, b) => Diff::arrow(ty_diff_from(rng, a, budget - 1), ty_diff_from(rng, b, budget - 1)),
            Ty::List(a) => Diff::list(ty_diff_from(rng, a, budget - 1)),
            _ => Diff::identity(&t),
        },
        4..=5 => {
            let tooth = if rng.gen_bool(0.75) {
                Tooth::arrow_cod(ty(rng, 1).to_tree())
            } else {
                Tooth::new(Label::List, 0, vec![]).expect("list tooth")
            };
            Diff::plus(tooth, ty_diff_from(rng, from, budget - 1))
        }
        6..=7 => match from {
            Ty::Arrow(a, b) => {
                let tooth = Tooth::arrow_cod(a.to_tree());
                Diff::minus(tooth, ty_diff_from(rng, b, budget - 1))
            }
            Ty::List(a) => {
                let tooth = Tooth::new(Label::List, 0, vec![]).expect("list tooth");
                Diff::minus(tooth, ty_diff_from(rng, a, budget - 1))
            }
            _ => Diff::identity(&t),
        },
        _ => Diff::replace(t, ty(rng, 2).to_tree()),
    }
}

/// A random type diff whose right endpoint is `to`.
pub fn ty_diff_to<R: Rng>(rng: &mut R, to: &Ty, budget: usize) -> Diff {
    ty_diff_from(rng, to, budget).flip()
}

/// Settings for the well-typed term generator.
#[derive(Debug, Clone)]
pub struct TermConfig {
    pub max_depth: usize,
    pub error_forms: bool,
    pub boundaries: bool,
}

impl Default for TermConfig {
    fn default() -> TermConfig {
        TermConfig { max_depth: 6, error_forms: true, boundaries: false }
    }
}

/// A random term of type `target` in `ctx`.
pub fn term<R: Rng>(rng: &mut R, cfg: &TermConfig, ctx: &Ctx, target: &Ty) -> Term {
    gen_term(rng, cfg, ctx, target, cfg.max_depth)
}

/// A random closed term of a random type.
pub fn closed_term<R: Rng>(rng: &mut R, cfg: &TermConfig) -> (Term, Ty) {
    let t = ty(rng, 2);
    (term(rng, cfg, &Ctx::empty(), &t), t)
}

fn leaf<R: Rng>(rng: &mut R, cfg: &TermConfig, ctx: &Ctx, target: &Ty) -> Term {
    let vars: Vec<usize> = (0..ctx.len())
        .filter(|&i| ctx.lookup(i).map(|(_, t)| t) == Some(target))
        .collect();
    let mut options: Vec<u8> = vec![0];
    if !vars.is_empty() {
        options.extend([1, 1, 1]);
    }
    match target {
        Ty::Int | Ty::Bool => options.extend([2, 2]),
        Ty::List(_) => options.push(3),
        _ => {}
    }
    if cfg.error_forms {
        options.push(4);
    }
    match *options.choose(rng).expect("non-empty") {
        1 => {
            let i = *vars.choose(rng).expect("non-empty");
            let name = ctx.lookup(i).expect("in scope").0.clone();
            Term::Var { index: i, name }
        }
        2 => match target {
            Ty::Int => Term::Int(small_int(rng)),
            _ => Term::Bool(rng.gen()),
        },
        3 => match target {
            Ty::List(a) => Term::Nil((**a).clone()),
            _ => unreachable!(),
        },
        4 => Term::Free { name: name(rng), ty: target.clone() },
        _ => Term::Hole(target.clone()),
    }
}

fn gen_term<R: Rng>(rng: &mut R, cfg: &TermConfig, ctx: &Ctx, target: &Ty, depth: usize) -> Term {
    if depth <= 1 || rng.gen_bool(0.2) {
        return leaf(rng, cfg, ctx, target);
    }
    let d = depth - 1;
    let roll = rng.gen_range(0..100);
    match (roll, target) {
        (0..=24, Ty::Arrow(a, b)) => {
            let x = name(rng);
            let body = gen_term(rng, cfg, &ctx.extend(x.clone(), (**a).clone()), b, d);
            Term::Lam { name: x, ann: (**a).clone(), body: Box::new(body) }
        }
        (0..=14, Ty::List(a)) => {
            let a = (**a).clone();
            let cons = Term::Cons(a.clone());
            let h = gen_term(rng, cfg, ctx, &a, d);
            let t = gen_term(rng, cfg, ctx, &Ty::list(a), d);
            Term::app(Term::app(cons, h), t)
        }
        (0..=44, _) => {
            let a = ty(rng, 1);
            let f = gen_term(rng, cfg, ctx, &Ty::arrow(a.clone(), target.clone()), d);
            let x = gen_term(rng, cfg, ctx, &a, d);
            Term::app(f, x)
        }
        (45..=57, _) => {
            let x = name(rng);
            let a = ty(rng, 2);
            let inner = ctx.extend(x.clone(), a.clone());
            let def = gen_term(rng, cfg, &inner, &a, d);
            let body = gen_term(rng, cfg, &inner, target, d);
            Term::Let { name: x, ann: a, def: Box::new(def), body: Box::new(body) }
        }
        (58..=67, _) => {
            let a = ty(rng, 1);
            let (h, t) = (name(rng), name(rng));
            let scrut = gen_term(rng, cfg, ctx, &Ty::list(a.clone()), d);
            let nil = gen_term(rng, cfg, ctx, target, d);
            let inner = ctx.extend(h.clone(), a.clone()).extend(t.clone(), Ty::list(a));
            let cons = gen_term(rng, cfg, &inner, target, d);
            Term::Match { scrut: Box::new(scrut), nil: Box::new(nil), head: h, tail: t, cons: Box::new(cons) }
        }
        (68..=75, _) if cfg.error_forms => {
            let f = gen_term(rng, cfg, ctx, target, d);
            let b = ty(rng, 1);
            let a = gen_term(rng, cfg, ctx, &b, d);
            Term::ghost_app(f, a)
        }
        (76..=81, _) if cfg.error_forms => {
            let inner = ty(rng, 2);
            let body = gen_term(rng, cfg, ctx, &inner, d);
            Term::Err { inner, outer: target.clone(), body: Box::new(body) }
        }
        (82..=91, _) if cfg.boundaries => boundary(rng, cfg, ctx, target, d),
        _ => leaf(rng, cfg, ctx, target),
    }
}

fn boundary<R: Rng>(rng: &mut R, cfg: &TermConfig, ctx: &Ctx, target: &Ty, d: usize) -> Term {
    let ctx_tree = ctx.to_tree();
    let (ctx_diff, inner_ctx) = match rng.gen_range(0..3) {
        0 if !ctx.is_empty() => {
            let (x, a) = ctx.lookup(0).expect("non-empty").clone();
            let rest = Ctx { entries: ctx.entries[..ctx.len() - 1].to_vec() };
            let tooth = Tooth::ctx_extend(x, a.to_tree());
            (Diff::plus(tooth, Diff::identity(&rest.to_tree())), rest)
        }
        1 => {
            let x = name(rng);
            let a = ty(rng, 1);
            let tooth = Tooth::ctx_extend(x.clone(), a.to_tree());
            (Diff::minus(tooth, Diff::identity(&ctx_tree)), ctx.extend(x, a))
        }
        _ => (Diff::identity(&ctx_tree), ctx.clone()),
    };
    if rng.gen_bool(0.5) {
        let tyd = ty_diff_to(rng, target, 3);
        let inner_ty = Ty::from_tree(&tyd.left()).expect("type diff");
        let body = gen_term(rng, cfg, &inner_ctx, &inner_ty, d);
        Term::down(JudgementDiff::new(ctx_diff, tyd), body)
    } else {
        let tyd = ty_diff_from(rng, target, 3);
        let inner_ty = Ty::from_tree(&tyd.right()).expect("type diff");
        let body = gen_term(rng, cfg, &inner_ctx, &inner_ty, d);
        Term::up(JudgementDiff::new(ctx_diff.flip(), tyd), body)
    }
}

/// A random tree built only from type labels.
pub fn ty_tree<R: Rng>(rng: &mut R, depth: usize) -> Tree {
    ty(rng, depth).to_tree()
}
