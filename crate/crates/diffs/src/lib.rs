//! Diffs between trees and their category structure.
//!
//! A [`Diff`] describes how one tree changes into another. Congruence keeps
//! a label and changes every child, `Plus` wraps the result in a new tooth,
//! `Minus` strips a tooth, and `Replace` swaps one tree for another. Every
//! diff has two endpoints, identity diffs exist on every tree, and diffs
//! compose whenever the right endpoint of the first equals the left endpoint
//! of the second.

pub mod gen;
pub mod text;

use std::collections::BTreeMap;
use std::fmt;

use panto_trees::{Label, MetaSubst, Tooth, Tree};
use thiserror::Error;

/// Errors raised by diff operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiffError {
    #[error("cannot compose: right endpoint {right} differs from left endpoint {left}")]
    EndpointMismatch { right: Tree, left: Tree },
    #[error("metavariable ?m{0} has neither a diff nor an instance tree")]
    UnboundMeta(u32),
    #[error("congruence on {label} expects {expected} children, got {actual}")]
    Arity {
        label: Label,
        expected: usize,
        actual: usize,
    },
}

/// A diff between two trees.
///
/// `Replace(s, s)` never occurs: [`Diff::replace`] rewrites it to the
/// identity on `s`, and every operation in this crate builds replacements
/// through that constructor.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Diff {
    Congr(Label, Vec<Diff>),
    Plus(Tooth, Box<Diff>),
    Minus(Tooth, Box<Diff>),
    Replace(Tree, Tree),
}

impl Diff {
    /// The identity diff on `s`, a congruence at every node.
    pub fn identity(s: &Tree) -> Diff {
        Diff::Congr(
            s.label().clone(),
            s.children().iter().map(Diff::identity).collect(),
        )
    }

    /// Builds a congruence, checking the child count.
    pub fn congr(label: Label, children: Vec<Diff>) -> Result<Diff, DiffError> {
        if children.len() != label.arity() {
            return Err(DiffError::Arity {
                expected: label.arity(),
                actual: children.len(),
                label,
            });
        }
        Ok(Diff::Congr(label, children))
    }

    pub fn plus(tooth: Tooth, inner: Diff) -> Diff {
        Diff::Plus(tooth, Box::new(inner))
    }

    pub fn minus(tooth: Tooth, inner: Diff) -> Diff {
        Diff::Minus(tooth, Box::new(inner))
    }

    /// A replacement, normalized to the identity when both trees are equal.
    pub fn replace(from: Tree, to: Tree) -> Diff {
        if from == to {
            Diff::identity(&from)
        } else {
            Diff::Replace(from, to)
        }
    }

    /// Congruence on the arrow label.
    pub fn arrow(dom: Diff, cod: Diff) -> Diff {
        Diff::Congr(Label::Arrow, vec![dom, cod])
    }

    /// Congruence on the list label.
    pub fn list(elem: Diff) -> Diff {
        Diff::Congr(Label::List, vec![elem])
    }

    /// Congruence on a context extension `rest, x : ty`.
    pub fn ctx_extend(rest: Diff, name: panto_trees::Name, ty: Diff) -> Diff {
        Diff::Congr(Label::CtxExtend(name), vec![rest, ty])
    }

    /// The left endpoint `d.1`.
    pub fn left(&self) -> Tree {
        match self {
            Diff::Congr(l, ds) => Tree::node(l.clone(), ds.iter().map(Diff::left).collect()),
            Diff::Plus(_, d) => d.left(),
            Diff::Minus(c, d) => c.plug(d.left()),
            Diff::Replace(a, _) => a.clone(),
        }
    }

    /// The right endpoint `d.2`.
    pub fn right(&self) -> Tree {
        match self {
            Diff::Congr(l, ds) => Tree::node(l.clone(), ds.iter().map(Diff::right).collect()),
            Diff::Plus(c, d) => c.plug(d.right()),
            Diff::Minus(_, d) => d.right(),
            Diff::Replace(_, b) => b.clone(),
        }
    }

    /// Both endpoints `(d.1, d.2)`.
    pub fn endpoints(&self) -> (Tree, Tree) {
        (self.left(), self.right())
    }

    /// True when the diff contains no `Plus`, `Minus` or `Replace`.
    pub fn is_identity(&self) -> bool {
        match self {
            Diff::Congr(_, ds) => ds.iter().all(Diff::is_identity),
            _ => false,
        }
    }

    /// Reverses the diff, swapping its endpoints.
    pub fn flip(&self) -> Diff {
        match self {
            Diff::Congr(l, ds) => Diff::Congr(l.clone(), ds.iter().map(Diff::flip).collect()),
            Diff::Plus(c, d) => Diff::minus(c.clone(), d.flip()),
            Diff::Minus(c, d) => Diff::plus(c.clone(), d.flip()),
            Diff::Replace(a, b) => Diff::Replace(b.clone(), a.clone()),
        }
    }

    /// Number of `Plus` or `Minus` nodes whose tooth is `A -> _`.
    pub fn arrow_alteration_count(&self) -> usize {
        match self {
            Diff::Congr(_, ds) => ds.iter().map(Diff::arrow_alteration_count).sum(),
            Diff::Plus(c, d) | Diff::Minus(c, d) => {
                let here = usize::from(*c.label() == Label::Arrow && c.hole() == 1);
                here + d.arrow_alteration_count()
            }
            Diff::Replace(..) => 0,
        }
    }

    /// True when some subterm is a `Replace`.
    pub fn has_replace(&self) -> bool {
        match self {
            Diff::Congr(_, ds) => ds.iter().any(Diff::has_replace),
            Diff::Plus(_, d) | Diff::Minus(_, d) => d.has_replace(),
            Diff::Replace(..) => true,
        }
    }

    /// Total number of diff constructors.
    pub fn size(&self) -> usize {
        match self {
            Diff::Congr(_, ds) => 1 + ds.iter().map(Diff::size).sum::<usize>(),
            Diff::Plus(_, d) | Diff::Minus(_, d) => 1 + d.size(),
            Diff::Replace(..) => 1,
        }
    }
}

impl fmt::Debug for Diff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Composes `d1` then `d2`, failing unless `d1.2 == d2.1`.
pub fn compose(d1: &Diff, d2: &Diff) -> Result<Diff, DiffError> {
    let (right, left) = (d1.right(), d2.left());
    if right != left {
        return Err(DiffError::EndpointMismatch { right, left });
    }
    Ok(compose_matched(d1, d2))
}

/// Composition on diffs already known to share the middle endpoint.
fn compose_matched(d1: &Diff, d2: &Diff) -> Diff {
    match (d1, d2) {
        (Diff::Congr(l1, a), Diff::Congr(l2, b)) if l1 == l2 => Diff::Congr(
            l1.clone(),
            a.iter().zip(b).map(|(x, y)| compose_matched(x, y)).collect(),
        ),
        (Diff::Plus(c1, d), Diff::Minus(c2, e)) if c1 == c2 => compose_matched(d, e),
        (_, Diff::Plus(c, e)) => Diff::plus(c.clone(), compose_matched(d1, e)),
        (Diff::Minus(c, d), _) => Diff::minus(c.clone(), compose_matched(d, d2)),
        (Diff::Plus(c, d), Diff::Congr(l, ds)) if c.label() == l => {
            let (mid, others) = split_at_hole(ds, c.hole());
            let tooth = c.with_others(others.iter().map(|o| o.right()).collect());
            Diff::plus(tooth, compose_matched(d, mid))
        }
        (Diff::Congr(l, ds), Diff::Minus(c, e)) if c.label() == l => {
            let (mid, others) = split_at_hole(ds, c.hole());
            let tooth = c.with_others(others.iter().map(|o| o.left()).collect());
            Diff::minus(tooth, compose_matched(mid, e))
        }
        _ => Diff::replace(d1.left(), d2.right()),
    }
}

fn split_at_hole(ds: &[Diff], hole: usize) -> (&Diff, Vec<&Diff>) {
    let others = ds
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != hole)
        .map(|(_, d)| d)
        .collect();
    (&ds[hole], others)
}

/// Composes a non-empty sequence left to right.
pub fn compose_all<'a>(ds: impl IntoIterator<Item = &'a Diff>) -> Result<Option<Diff>, DiffError> {
    let mut acc: Option<Diff> = None;
    for d in ds {
        acc = Some(match acc {
            None => d.clone(),
            Some(a) => compose(&a, d)?,
        });
    }
    Ok(acc)
}

/// A change to a whole typing judgement: a context diff and a type diff.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JudgementDiff {
    pub ctx: Diff,
    pub ty: Diff,
}

impl JudgementDiff {
    pub fn new(ctx: Diff, ty: Diff) -> JudgementDiff {
        JudgementDiff { ctx, ty }
    }

    /// The identity judgement diff on a context tree and a type tree.
    pub fn identity(ctx: &Tree, ty: &Tree) -> JudgementDiff {
        JudgementDiff {
            ctx: Diff::identity(ctx),
            ty: Diff::identity(ty),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.ctx.is_identity() && self.ty.is_identity()
    }

    /// Left endpoints as a (context, type) pair.
    pub fn left(&self) -> (Tree, Tree) {
        (self.ctx.left(), self.ty.left())
    }

    /// Right endpoints as a (context, type) pair.
    pub fn right(&self) -> (Tree, Tree) {
        (self.ctx.right(), self.ty.right())
    }

    pub fn flip(&self) -> JudgementDiff {
        JudgementDiff {
            ctx: self.ctx.flip(),
            ty: self.ty.flip(),
        }
    }

    /// Encodes the pair as a single congruence on the turnstile label.
    pub fn to_diff(&self) -> Diff {
        Diff::Congr(Label::Turnstile, vec![self.ctx.clone(), self.ty.clone()])
    }

    /// Decodes a congruence on the turnstile label.
    pub fn from_diff(d: &Diff) -> Option<JudgementDiff> {
        match d {
            Diff::Congr(Label::Turnstile, ds) => Some(JudgementDiff {
                ctx: ds[0].clone(),
                ty: ds[1].clone(),
            }),
            _ => None,
        }
    }

    pub fn count(&self) -> usize {
        self.ctx.arrow_alteration_count() + self.ty.arrow_alteration_count()
    }
}

impl fmt::Debug for JudgementDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Composes two judgement diffs componentwise.
pub fn compose_judgement(a: &JudgementDiff, b: &JudgementDiff) -> Result<JudgementDiff, DiffError> {
    Ok(JudgementDiff {
        ctx: compose(&a.ctx, &b.ctx)?,
        ty: compose(&a.ty, &b.ty)?,
    })
}

/// Bindings from typing-rule metavariables to diffs.
#[derive(Clone, Default, PartialEq, Eq, Debug)]
pub struct DiffSubst {
    pub bindings: BTreeMap<u32, Diff>,
}

impl DiffSubst {
    pub fn new() -> DiffSubst {
        DiffSubst::default()
    }

    pub fn get(&self, meta: u32) -> Option<&Diff> {
        self.bindings.get(&meta)
    }

    pub fn insert(&mut self, meta: u32, d: Diff) -> Option<Diff> {
        self.bindings.insert(meta, d)
    }

    pub fn with(mut self, meta: u32, d: Diff) -> DiffSubst {
        self.bindings.insert(meta, d);
        self
    }

    /// The left projection `σ.1`.
    pub fn left(&self) -> MetaSubst {
        self.bindings.iter().map(|(m, d)| (*m, d.left())).collect()
    }

    /// The right projection `σ.2`.
    pub fn right(&self) -> MetaSubst {
        self.bindings.iter().map(|(m, d)| (*m, d.right())).collect()
    }

    /// Overrides `instance` with the right endpoint of every bound diff.
    pub fn advance(&self, instance: &MetaSubst) -> MetaSubst {
        let mut out = instance.clone();
        for (m, d) in &self.bindings {
            out.insert(*m, d.right());
        }
        out
    }
}

/// Instantiates `pattern` as a diff: metavariables bound in `sigma` become
/// their diffs, the rest become identities on their `instance` trees.
pub fn apply_diff_subst(sigma: &DiffSubst, pattern: &Tree, instance: &MetaSubst) -> Result<Diff, DiffError> {
    if let Label::Meta(m) = pattern.label() {
        if let Some(d) = sigma.get(*m) {
            return Ok(d.clone());
        }
        return instance
            .get(*m)
            .map(Diff::identity)
            .ok_or(DiffError::UnboundMeta(*m));
    }
    let children = pattern
        .children()
        .iter()
        .map(|c| apply_diff_subst(sigma, c, instance))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Diff::Congr(pattern.label().clone(), children))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(t: Tree) -> Diff {
        Diff::identity(&t)
    }

    fn bb() -> Tree {
        Tree::arrow(Tree::bool(), Tree::bool())
    }

    fn lb() -> Tree {
        Tree::list(Tree::bool())
    }

    #[test]
    fn endpoints_of_map_parameter_diff() {
        let d = Diff::plus(Tooth::arrow_cod(bb()), id(Tree::arrow(lb(), lb())));
        let (a, b) = d.endpoints();
        assert_eq!(a, Tree::arrow(lb(), lb()));
        assert_eq!(b, Tree::arrow(bb(), Tree::arrow(lb(), lb())));
        assert_eq!(id(Tree::int()).endpoints(), (Tree::int(), Tree::int()));
        assert_eq!(
            Diff::replace(Tree::bool(), Tree::int()).endpoints(),
            (Tree::bool(), Tree::int())
        );
    }

    #[test]
    fn identity_shape() {
        assert_eq!(id(Tree::int()), Diff::Congr(Label::Int, vec![]));
        assert_eq!(
            id(Tree::arrow(Tree::int(), Tree::bool())),
            Diff::arrow(id(Tree::int()), id(Tree::bool()))
        );
        assert_eq!(Diff::replace(Tree::int(), Tree::int()), id(Tree::int()));
    }

    #[test]
    fn compose_examples() {
        let i = id(Tree::int());
        assert_eq!(compose(&i, &i).unwrap(), i);
        let plus = Diff::plus(Tooth::arrow_cod(Tree::int()), id(Tree::bool()));
        let minus = Diff::minus(Tooth::arrow_cod(Tree::int()), id(Tree::bool()));
        assert_eq!(compose(&plus, &minus).unwrap(), id(Tree::bool()));
        let congr = Diff::arrow(id(Tree::int()), Diff::replace(Tree::bool(), Tree::int()));
        let got = compose(&plus, &congr).unwrap();
        assert_eq!(
            got,
            Diff::plus(Tooth::arrow_cod(Tree::int()), Diff::replace(Tree::bool(), Tree::int()))
        );
        assert_eq!(got.endpoints(), (Tree::bool(), Tree::arrow(Tree::int(), Tree::int())));
        assert!(matches!(
            compose(&plus, &i),
            Err(DiffError::EndpointMismatch { .. })
        ));
    }

    #[test]
    fn flip_examples() {
        assert_eq!(id(Tree::int()).flip(), id(Tree::int()));
        let plus = Diff::plus(Tooth::arrow_cod(Tree::int()), id(Tree::bool()));
        assert_eq!(plus.flip(), Diff::minus(Tooth::arrow_cod(Tree::int()), id(Tree::bool())));
        assert_eq!(
            Diff::replace(Tree::bool(), Tree::int()).flip(),
            Diff::replace(Tree::int(), Tree::bool())
        );
    }

    #[test]
    fn is_identity_examples() {
        assert!(id(lb()).is_identity());
        assert!(!Diff::plus(Tooth::arrow_cod(Tree::int()), id(Tree::int())).is_identity());
        assert!(!Diff::arrow(id(Tree::int()), Diff::replace(Tree::bool(), Tree::int())).is_identity());
    }

    #[test]
    fn apply_diff_subst_examples() {
        let p = Diff::plus(Tooth::arrow_cod(Tree::bool()), id(Tree::int()));
        let sigma = DiffSubst::new().with(0, p.clone());
        assert_eq!(apply_diff_subst(&sigma, &Tree::meta(0), &MetaSubst::new()).unwrap(), p);
        let inst = MetaSubst::new().with(1, Tree::int());
        assert_eq!(
            apply_diff_subst(&sigma, &Tree::arrow(Tree::meta(0), Tree::meta(1)), &inst).unwrap(),
            Diff::arrow(p, id(Tree::int()))
        );
        assert_eq!(
            apply_diff_subst(&DiffSubst::new(), &Tree::int(), &MetaSubst::new()).unwrap(),
            id(Tree::int())
        );
        assert_eq!(
            apply_diff_subst(&DiffSubst::new(), &Tree::meta(4), &MetaSubst::new()),
            Err(DiffError::UnboundMeta(4))
        );
    }
}
