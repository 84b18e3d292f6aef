//! Random generation of trees and diffs for property tests.
//!
//! Diffs are generated from a chosen left endpoint, so chains of composable
//! diffs come from repeatedly generating from the previous right endpoint.

use panto_trees::{Label, Tooth, Tree};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::Diff;

const NAMES: [&str; 3] = ["x", "y", "z"];

fn random_label<R: Rng>(rng: &mut R, allow_inner: bool) -> Label {
    let leaves = [Label::Int, Label::Bool, Label::EmptyCtx, Label::TyHole(0), Label::TyHole(1)];
    if !allow_inner || rng.gen_bool(0.35) {
        return leaves.choose(rng).expect("non-empty").clone();
    }
    match rng.gen_range(0..4) {
        0 => Label::Arrow,
        1 => Label::List,
        2 => Label::CtxExtend((*NAMES.choose(rng).expect("non-empty")).into()),
        _ => Label::Turnstile,
    }
}

/// A random concrete tree of depth at most `max_depth` (at least 1).
pub fn tree<R: Rng>(rng: &mut R, max_depth: usize) -> Tree {
    let label = random_label(rng, max_depth > 1);
    let children = (0..label.arity()).map(|_| tree(rng, max_depth - 1)).collect();
    Tree::node(label, children)
}

/// A random tooth whose sibling trees have depth at most `max_depth`.
pub fn tooth<R: Rng>(rng: &mut R, max_depth: usize) -> Tooth {
    let label = loop {
        let l = random_label(rng, true);
        if l.arity() > 0 {
            break l;
        }
    };
    let hole = rng.gen_range(0..label.arity());
    let others = (1..label.arity()).map(|_| tree(rng, max_depth)).collect();
    Tooth::new(label, hole, others).expect("valid tooth")
}

/// A random diff whose left endpoint is `from`.
///
/// `budget` bounds the nesting of `Plus` and `Minus` constructors and the
/// depth of any tree the generator introduces.
pub fn diff_from<R: Rng>(rng: &mut R, from: &Tree, budget: usize) -> Diff {
    let arity = from.children().len();
    let roll = rng.gen_range(0..100);
    if budget == 0 || roll < 15 {
        return if rng.gen_bool(0.8) {
            Diff::identity(from)
        } else {
            Diff::replace(from.clone(), tree(rng, 3))
        };
    }
    if roll < 45 && arity > 0 {
        let label = from.label().clone();
        let kids = from
            .children()
            .iter()
            .map(|c| diff_from(rng, c, budget - 1))
            .collect();
        return Diff::Congr(label, kids);
    }
    if roll < 65 {
        return Diff::plus(tooth(rng, 2), diff_from(rng, from, budget - 1));
    }
    if roll < 85 && arity > 0 {
        let i = rng.gen_range(0..arity);
        let (c, child) = from.unplug(i).expect("index in range");
        return Diff::minus(c, diff_from(rng, &child, budget - 1));
    }
    if roll < 92 {
        Diff::replace(from.clone(), tree(rng, 3))
    } else {
        Diff::identity(from)
    }
}

/// A random diff starting from a random tree of depth at most `max_depth`.
pub fn diff<R: Rng>(rng: &mut R, max_depth: usize) -> Diff {
    let t = tree(rng, max_depth);
    diff_from(rng, &t, 4)
}

/// A chain of `n` composable diffs starting at a random tree.
pub fn chain<R: Rng>(rng: &mut R, max_depth: usize, n: usize) -> Vec<Diff> {
    let mut out = Vec::with_capacity(n);
    let mut cur = tree(rng, max_depth);
    for _ in 0..n {
        let d = diff_from(rng, &cur, 4);
        cur = d.right();
        out.push(d);
    }
    out
}
