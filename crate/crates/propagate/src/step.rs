//! The step rules and their precedence at a single boundary site.

use panto_diffs::{apply_diff_subst, Diff, JudgementDiff};
use panto_lang::check::ctx_at;
use panto_lang::rules::{instance, rebuild};
use panto_lang::{rule_for, Ctx, Term, Ty};
use panto_trees::{Label, Name, Tooth, Tree};

use crate::neutral::{is_immediate_head, is_neutral};
use crate::unify::{focus_diff, unify_diff};
use crate::RuleId;

/// One rule application: the subterm at `at` is replaced by `replacement`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rewrite {
    pub rule: RuleId,
    pub at: Vec<usize>,
    pub replacement: Term,
}

impl Rewrite {
    /// The whole program after the rewrite.
    pub fn apply(&self, program: &Term) -> Term {
        program
            .replace_at(&self.at, self.replacement.clone())
            .expect("rewrite path addresses the program")
    }
}

/// The highest-precedence rule applicable to the boundary at `site`.
pub fn applicable_rule(program: &Term, site: &[usize]) -> Option<RuleId> {
    rewrite_at(program, site).map(|r| r.rule)
}

/// The rewrite chosen by the highest-precedence applicable rule for the
/// boundary at `site`, or `None` for a top-level up boundary, a non-boundary
/// site, or a boundary no rule applies to.
pub fn rewrite_at(program: &Term, site: &[usize]) -> Option<Rewrite> {
    let node = program.at(site)?;
    if waits_for_identity(program, site, node) {
        return None;
    }
    let (rule, at, replacement) = match node {
        Term::Down(jd, body) => {
            let (rule, t) = down_rule(program, site, jd, body)?;
            (rule, site.to_vec(), t)
        }
        Term::Up(jd, body) => up_rule(program, site, jd, body)?,
        _ => return None,
    };
    Some(Rewrite { rule, at, replacement })
}

fn is_identity_boundary(t: &Term) -> bool {
    matches!(t, Term::Down(jd, _) | Term::Up(jd, _) if jd.is_identity())
}

/// A non-identity boundary next to an identity boundary (its body, or its
/// parent unless that is the top-level up) takes no step until the identity
/// boundary is gone. An up boundary whose parent down boundary can
/// interchange with it, and has no alteration rule to apply, waits for
/// the interchange.
fn waits_for_identity(program: &Term, site: &[usize], node: &Term) -> bool {
    if is_identity_boundary(node) {
        return false;
    }
    if node.children().first().is_some_and(|b| is_identity_boundary(b)) {
        return true;
    }
    match site.split_last() {
        Some((_, parent_path)) => {
            let parent = program.at(parent_path).expect("prefix of a valid path");
            let top_up = parent_path.is_empty() && matches!(parent, Term::Up(..));
            let crossing = match parent {
                Term::Down(jd, body) => down_alteration(jd, body).is_none() && interchange(jd, body).is_some(),
                _ => false,
            };
            (is_identity_boundary(parent) && !top_up) || crossing
        }
        None => false,
    }
}

fn id(t: &Tree) -> Diff {
    Diff::identity(t)
}

/// A down boundary, omitted when its diff is the identity.
pub fn down(jd: JudgementDiff, body: Term) -> Term {
    if jd.is_identity() {
        body
    } else {
        Term::down(jd, body)
    }
}

/// An up boundary, omitted when its diff is the identity.
pub fn up(jd: JudgementDiff, body: Term) -> Term {
    if jd.is_identity() {
        body
    } else {
        Term::up(jd, body)
    }
}

fn ty(t: &Tree) -> Option<Ty> {
    Ty::from_tree(t).ok()
}

fn arrow_tooth(d: &Diff) -> Option<(&Tooth, &Diff, bool)> {
    match d {
        Diff::Plus(c, inner) if *c.label() == Label::Arrow && c.hole() == 1 => Some((c, inner, true)),
        Diff::Minus(c, inner) if *c.label() == Label::Arrow && c.hole() == 1 => Some((c, inner, false)),
        _ => None,
    }
}

fn down_rule(program: &Term, site: &[usize], jd: &JudgementDiff, body: &Term) -> Option<(RuleId, Term)> {
    if jd.is_identity() {
        return Some((RuleId::IdentityDown, body.clone()));
    }
    if let Some(r) = down_alteration(jd, body) {
        return Some(r);
    }
    if let Some(r) = interchange(jd, body) {
        return Some(r);
    }
    if matches!(body, Term::Down(..)) {
        return None;
    }
    let delta = &jd.ty;
    let type_change = !delta.is_identity();
    if type_change && is_neutral(body) && !is_immediate_head(program, site) {
        return Some((RuleId::NeutralErrorDown, error_down(jd, body)?));
    }
    let propagated = match body {
        Term::Var { index, name } => propagate_var(jd, *index, name),
        _ if body.is_boundary() => None,
        _ => propagate_down(jd, body).map(|t| (RuleId::PropagateDown, t)),
    };
    if propagated.is_some() {
        return propagated;
    }
    if type_change {
        return Some((RuleId::FallthroughErrorDown, error_down(jd, body)?));
    }
    None
}

fn error_down(jd: &JudgementDiff, body: &Term) -> Option<Term> {
    let (from, to) = jd.ty.endpoints();
    let inner = down(JudgementDiff::new(jd.ctx.clone(), id(&from)), body.clone());
    Some(Term::Err { inner: ty(&from)?, outer: ty(&to)?, body: Box::new(inner) })
}

fn down_alteration(jd: &JudgementDiff, body: &Term) -> Option<(RuleId, Term)> {
    if let Some((tooth, inner, plus)) = arrow_tooth(&jd.ty) {
        let a = &tooth.others()[0];
        if plus {
            if let Term::App(t1, arg) = body {
                if matches!(&**arg, Term::Hole(h) if h.to_tree() == *a) {
                    let jd2 = JudgementDiff::new(jd.ctx.clone(), Diff::arrow(id(a), inner.clone()));
                    return Some((RuleId::DeleteAppDown, Term::down(jd2, (**t1).clone())));
                }
            }
            let x = fresh_name(jd);
            let ctxd = Diff::plus(Tooth::ctx_extend(x.clone(), a.clone()), jd.ctx.clone());
            let inside = Term::down(JudgementDiff::new(ctxd, inner.clone()), body.clone());
            let lam = Term::Lam { name: x, ann: ty(a)?, body: Box::new(inside) };
            return Some((RuleId::InsertAbsDown, lam));
        }
        if let Term::Lam { name, ann, body: b } = body {
            if ann.to_tree() == *a {
                let ctxd = Diff::minus(Tooth::ctx_extend(name.clone(), a.clone()), jd.ctx.clone());
                return Some((RuleId::DeleteAbsDown, Term::down(JudgementDiff::new(ctxd, inner.clone()), (**b).clone())));
            }
        }
    }
    if !jd.ty.is_identity() {
        return None;
    }
    match body {
        Term::Var { index, name } => match locate(&jd.ctx, *index) {
            Binding::Removed(t) | Binding::Opaque(t) => {
                Some((RuleId::LocalToFree, Term::Free { name: name.clone(), ty: ty(&t)? }))
            }
            Binding::Shared { .. } | Binding::Unbound => None,
        },
        Term::Free { name, ty: t } => {
            let index = find_added(&jd.ctx, name, &t.to_tree())?;
            Some((RuleId::FreeToLocal, Term::Var { index, name: name.clone() }))
        }
        _ => None,
    }
}

fn fresh_name(jd: &JudgementDiff) -> Name {
    let mut taken: Vec<Name> = Vec::new();
    for side in [jd.ctx.left(), jd.ctx.right()] {
        if let Ok(c) = Ctx::from_tree(&side) {
            taken.extend(c.entries.into_iter().map(|(n, _)| n));
        }
    }
    let base = ["x", "y", "z", "w", "v", "u"];
    base.iter()
        .map(|s| Name::from(*s))
        .chain((1..).map(|i| Name::from(format!("x{i}").as_str())))
        .find(|n| !taken.contains(n))
        .expect("an unused name exists")
}

/// Where a variable's binding sits in a context diff.
enum Binding {
    /// Present on both sides, with its type diff and its index on the right.
    Shared { tyd: Diff, index: usize },
    /// Removed by the diff, with its type.
    Removed(Tree),
    /// Inside a replacement, with its type on the left.
    Opaque(Tree),
    /// Not bound by the context diff at all.
    Unbound,
}

fn locate(ctxd: &Diff, index: usize) -> Binding {
    let (mut d, mut k, mut right) = (ctxd, index, 0);
    loop {
        match d {
            Diff::Congr(Label::CtxExtend(_), ds) => {
                if k == 0 {
                    return Binding::Shared { tyd: ds[1].clone(), index: right };
                }
                k -= 1;
                right += 1;
                d = &ds[0];
            }
            Diff::Plus(c, rest) if matches!(c.label(), Label::CtxExtend(_)) => {
                right += 1;
                d = rest;
            }
            Diff::Minus(c, rest) if matches!(c.label(), Label::CtxExtend(_)) => {
                if k == 0 {
                    return Binding::Removed(c.others()[0].clone());
                }
                k -= 1;
                d = rest;
            }
            _ => {
                let left = Ctx::from_tree(&d.left()).ok();
                return match left.as_ref().and_then(|c| c.lookup(k)) {
                    Some((_, t)) => Binding::Opaque(t.to_tree()),
                    None => Binding::Unbound,
                };
            }
        }
    }
}

fn find_added(ctxd: &Diff, name: &Name, t: &Tree) -> Option<usize> {
    let (mut d, mut right) = (ctxd, 0);
    loop {
        match d {
            Diff::Congr(Label::CtxExtend(y), ds) => {
                if y == name {
                    return None;
                }
                right += 1;
                d = &ds[0];
            }
            Diff::Plus(c, rest) => match c.label() {
                Label::CtxExtend(y) if y == name => {
                    return (c.others()[0] == *t).then_some(right);
                }
                Label::CtxExtend(_) => {
                    right += 1;
                    d = rest;
                }
                _ => return None,
            },
            Diff::Minus(c, rest) if matches!(c.label(), Label::CtxExtend(_)) => d = rest,
            _ => return None,
        }
    }
}

/// The identity on `ctx` except that binding `index` changes by `tyd`.
fn retype_binding(ctx: &Ctx, index: usize, tyd: &Diff) -> Diff {
    let n = ctx.len();
    let mut d = Diff::identity(&Tree::empty_ctx());
    for (i, (name, t)) in ctx.entries.iter().enumerate() {
        let bd = if n - 1 - i == index { tyd.clone() } else { id(&t.to_tree()) };
        d = Diff::ctx_extend(d, name.clone(), bd);
    }
    d
}

fn propagate_var(jd: &JudgementDiff, index: usize, name: &Name) -> Option<(RuleId, Term)> {
    let Binding::Shared { tyd, index: k } = locate(&jd.ctx, index) else {
        return None;
    };
    let var = Term::Var { index: k, name: name.clone() };
    let right_ctx = jd.ctx.right();
    match (tyd.is_identity(), jd.ty.is_identity()) {
        (false, true) => {
            let jd2 = JudgementDiff::new(id(&right_ctx), tyd);
            Some((RuleId::PropagateVarDown1, up(jd2, var)))
        }
        (true, false) => {
            let ctx2 = Ctx::from_tree(&right_ctx).ok()?;
            let jd2 = JudgementDiff::new(retype_binding(&ctx2, k, &jd.ty), id(&jd.ty.right()));
            Some((RuleId::PropagateVarDown2, up(jd2, var)))
        }
        (true, true) => Some((RuleId::PropagateVarDown1, var)),
        (false, false) => None,
    }
}

fn interchange(jd: &JudgementDiff, body: &Term) -> Option<(RuleId, Term)> {
    let Term::Up(inner, t) = body else {
        return None;
    };
    if jd.ty.is_identity() && inner.ctx.is_identity() {
        let lower = JudgementDiff::new(jd.ctx.clone(), id(&inner.ty.right()));
        let upper = JudgementDiff::new(id(&jd.ctx.right()), inner.ty.clone());
        return Some((RuleId::Interchange1, up(upper, down(lower, (**t).clone()))));
    }
    if jd.ctx.is_identity() && jd.ty == inner.ty {
        let lower = JudgementDiff::new(id(&inner.ctx.right()), id(&jd.ty.right()));
        let upper = JudgementDiff::new(inner.ctx.clone(), id(&jd.ty.right()));
        return Some((RuleId::Interchange2, up(upper, down(lower, (**t).clone()))));
    }
    if jd.ctx.is_identity() && inner.ty.is_identity() {
        let lower = JudgementDiff::new(id(&inner.ctx.right()), jd.ty.clone());
        let upper = JudgementDiff::new(inner.ctx.clone(), id(&jd.ty.right()));
        return Some((RuleId::Interchange2, up(upper, down(lower, (**t).clone()))));
    }
    None
}

fn propagate_down(jd: &JudgementDiff, body: &Term) -> Option<Term> {
    let rule = rule_for(body)?;
    let inside = Ctx::from_tree(&jd.ctx.left()).ok()?;
    let iota = instance(&inside, body).ok()?;
    let u = unify_diff(&rule.conclusion, &jd.to_diff(), &iota)?;
    let after = u.sigma.advance(&iota);
    let outer = JudgementDiff::from_diff(&focus_diff(&rule.conclusion, &u, &iota, &after)?)?;
    let children = rule
        .premises
        .iter()
        .zip(body.children())
        .map(|(p, c)| {
            let d = JudgementDiff::from_diff(&apply_diff_subst(&u.sigma, p, &iota).ok()?)?;
            Some(down(d, c.clone()))
        })
        .collect::<Option<Vec<_>>>()?;
    Some(up(outer, rebuild(body, &after, children)))
}

fn up_rule(program: &Term, site: &[usize], jd: &JudgementDiff, body: &Term) -> Option<(RuleId, Vec<usize>, Term)> {
    let (&i, parent_path) = site.split_last()?;
    let here = site.to_vec();
    if jd.is_identity() {
        return Some((RuleId::IdentityUp, here, body.clone()));
    }
    let parent = program.at(parent_path)?;
    if let Some((rule, t)) = up_alteration(parent, i, jd, body, true) {
        let at = if rule == RuleId::InsertAppUp { here } else { parent_path.to_vec() };
        return Some((rule, at, t));
    }
    let type_change = !jd.ty.is_identity();
    if type_change && is_neutral(body) && !is_immediate_head(program, site) {
        return Some((RuleId::NeutralErrorUp, here, error_up(jd, body)?));
    }
    if !parent.is_boundary() {
        let pctx = ctx_at(&Ctx::empty(), program, parent_path)?;
        if let Some(t) = propagate_up(&pctx, parent, i, jd) {
            return Some((RuleId::PropagateUp, parent_path.to_vec(), t));
        }
    }
    if let Some((rule, t)) = up_alteration(parent, i, jd, body, false) {
        return Some((rule, here, t));
    }
    if type_change {
        return Some((RuleId::FallthroughErrorUp, here, error_up(jd, body)?));
    }
    None
}

fn error_up(jd: &JudgementDiff, body: &Term) -> Option<Term> {
    let (from, to) = jd.ty.endpoints();
    let err = Term::Err { inner: ty(&to)?, outer: ty(&from)?, body: Box::new(body.clone()) };
    Some(up(JudgementDiff::new(jd.ctx.clone(), id(&from)), err))
}

/// Alteration rules at an up boundary, producing boundaries verbatim. With `priority` set, Insert-App only
/// fires around a neutral body; without it, only Insert-App is tried.
fn up_alteration(parent: &Term, i: usize, jd: &JudgementDiff, body: &Term, priority: bool) -> Option<(RuleId, Term)> {
    let (tooth, inner, plus) = arrow_tooth(&jd.ty)?;
    let a = &tooth.others()[0];
    if priority && plus {
        if let Term::Lam { name, ann, .. } = parent {
            if let Diff::Congr(Label::CtxExtend(x), ds) = &jd.ctx {
                if x == name && ds[1].is_identity() && ds[1].left() == *a && ann.to_tree() == *a {
                    let upper = JudgementDiff::new(ds[0].clone(), Diff::arrow(id(a), inner.clone()));
                    let ctxd = Diff::minus(Tooth::ctx_extend(name.clone(), a.clone()), id(&ds[0].right()));
                    let lower = JudgementDiff::new(ctxd, id(&jd.ty.right()));
                    return Some((RuleId::DeleteAbsUp, Term::up(upper, Term::down(lower, body.clone()))));
                }
            }
        }
    }
    if priority && !plus && i == 0 {
        if let Term::App(_, t2) = parent {
            let arg = Term::down(JudgementDiff::new(jd.ctx.clone(), id(a)), (**t2).clone());
            let ghost = Term::ghost_app(body.clone(), arg);
            return Some((RuleId::DisplaceAppUp, Term::up(JudgementDiff::new(jd.ctx.clone(), inner.clone()), ghost)));
        }
    }
    if plus && (is_neutral(body) == priority) {
        let app = Term::app(body.clone(), Term::Hole(ty(a)?));
        return Some((RuleId::InsertAppUp, Term::up(JudgementDiff::new(jd.ctx.clone(), inner.clone()), app)));
    }
    None
}

fn propagate_up(ctx: &Ctx, parent: &Term, i: usize, jd: &JudgementDiff) -> Option<Term> {
    let rule = rule_for(parent)?;
    let iota = instance(ctx, parent).ok()?;
    let premise = rule.premises.get(i)?;
    let u = unify_diff(premise, &jd.to_diff(), &iota)?;
    let after = u.sigma.advance(&iota);
    let children = rule
        .premises
        .iter()
        .zip(parent.children())
        .enumerate()
        .map(|(j, (p, c))| {
            let d = if j == i {
                focus_diff(p, &u, &iota, &after)?
            } else {
                apply_diff_subst(&u.sigma, p, &iota).ok()?
            };
            let body = if j == i {
                match c {
                    Term::Up(_, b) => (**b).clone(),
                    _ => return None,
                }
            } else {
                c.clone()
            };
            Some(down(JudgementDiff::from_diff(&d)?, body))
        })
        .collect::<Option<Vec<_>>>()?;
    let outer = JudgementDiff::from_diff(&apply_diff_subst(&u.sigma, &rule.conclusion, &iota).ok()?)?;
    Some(up(outer, rebuild(parent, &after, children)))
}
