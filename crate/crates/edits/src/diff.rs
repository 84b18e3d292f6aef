//! Judgement diffs of one-hole term contexts, read from the inside out.

use panto_diffs::{compose_judgement, Diff, JudgementDiff};
use panto_lang::check::child_ctx;
use panto_lang::{infer, Ctx, Term, Ty};
use panto_trees::Tooth;

use crate::path::{TermPath, TermTooth};
use crate::EditError;

fn placeholder(ty: &Ty) -> Term {
    Term::Hole(ty.clone())
}

fn dropped(ctx: &Ctx, inner: &Ctx) -> Diff {
    inner.entries[ctx.len()..].iter().fold(Diff::identity(&ctx.to_tree()), |acc, (x, a)| {
        Diff::minus(Tooth::ctx_extend(x.clone(), a.to_tree()), acc)
    })
}

/// The context and type at the hole of `tooth` and the type of the whole
/// node, when the tooth sits in `ctx` and its hole holds a term of type
/// `inner`.
pub fn tooth_judgements(tooth: &TermTooth, ctx: &Ctx, inner: &Ty) -> Result<(Ctx, Ty), EditError> {
    let plugged = tooth.plug(placeholder(inner));
    if plugged.is_boundary() {
        return Err(EditError::Boundary);
    }
    let outer = infer(ctx, &plugged).map_err(EditError::Type)?;
    let inside = child_ctx(ctx, &plugged, tooth.hole()).ok_or(EditError::Boundary)?;
    Ok((inside, outer))
}

/// The diff from the judgement at the hole of `tooth` to the judgement of
/// the whole node, when the tooth sits in `ctx` around a term of type
/// `inner`.
pub fn tooth_diff(tooth: &TermTooth, ctx: &Ctx, inner: &Ty) -> Result<JudgementDiff, EditError> {
    let (inside, outer) = tooth_judgements(tooth, ctx, inner)?;
    let ctx_diff = dropped(ctx, &inside);
    let ty_diff = match (tooth.node(), tooth.hole()) {
        (Term::Lam { ann, .. }, 0) => Diff::plus(Tooth::arrow_cod(ann.to_tree()), Diff::identity(&inner.to_tree())),
        (Term::App(..), 0) => match inner {
            Ty::Arrow(dom, _) => Diff::minus(Tooth::arrow_cod(dom.to_tree()), Diff::identity(&outer.to_tree())),
            _ => unreachable!("a well-typed application head has an arrow type"),
        },
        _ => Diff::replace(inner.to_tree(), outer.to_tree()),
    };
    Ok(JudgementDiff::new(ctx_diff, ty_diff))
}

/// The context at the hole of `path` and the type of the whole, when the
/// path sits in `ctx` around a term of type `inner`.
pub fn path_judgements(path: &TermPath, ctx: &Ctx, inner: &Ty) -> Result<(Ctx, Ty), EditError> {
    let d = path_diff(path, ctx, inner)?;
    let inside = Ctx::from_tree(&d.ctx.left()).expect("context diff");
    let outer = Ty::from_tree(&d.ty.right()).expect("type diff");
    Ok((inside, outer))
}

/// The context outside each tooth, innermost first.
fn tooth_contexts(path: &TermPath, ctx: &Ctx) -> Result<Vec<Ctx>, EditError> {
    let mut out = Vec::with_capacity(path.len());
    let mut cur = ctx.clone();
    for tooth in path.teeth.iter().rev() {
        out.push(cur.clone());
        let node = tooth.plug(placeholder(&Ty::Int));
        cur = child_ctx(&cur, &node, tooth.hole()).ok_or(EditError::Boundary)?;
    }
    out.reverse();
    Ok(out)
}

/// The composite of the tooth diffs of `path`, innermost first, when the
/// path sits in `ctx` around a term of type `inner`.
pub fn path_diff(path: &TermPath, ctx: &Ctx, inner: &Ty) -> Result<JudgementDiff, EditError> {
    let ctxs = tooth_contexts(path, ctx)?;
    let inside = match path.teeth.first() {
        None => ctx.clone(),
        Some(t) => child_ctx(&ctxs[0], &t.plug(placeholder(inner)), t.hole()).ok_or(EditError::Boundary)?,
    };
    let mut acc = JudgementDiff::identity(&inside.to_tree(), &inner.to_tree());
    let mut ty = inner.clone();
    for (tooth, c) in path.teeth.iter().zip(&ctxs) {
        let d = tooth_diff(tooth, c, &ty)?;
        ty = Ty::from_tree(&d.ty.right()).expect("type diff");
        acc = compose_judgement(&acc, &d).expect("adjacent tooth diffs compose");
    }
    Ok(acc)
}
