//! Edit actions, their boundary setups, and the edit-script format.
//!
//! Script lines are S-expressions, one action per line:
//!
//! ```text
//! (insert (1 0) (lam f (-> Bool Bool) _))
//! (delete (1 0) (0))
//! (annotate-lam (0) (replace Bool Int))
//! (annotate-let () (id Int))
//! (fill (0 1) (var x))
//! (dig (0 1))
//! (cut (0) (1))
//! (copy (0) ())
//! (paste (0))
//! ```
//!
//! Positions are lists of child indices from the root. Terms and paths are
//! read in the context of the position they apply to.

use panto_diffs::text::diff as read_diff;
use panto_diffs::{compose, Diff, JudgementDiff};
use panto_lang::check::ctx_at;
use panto_lang::syntax::{print_in, term as read_term};
use panto_lang::{infer, Ctx, Term, Ty};
use panto_propagate::step::{down, up};
use panto_propagate::{normalize_observed, SchedulerConfig, StepTrace, TraceEntry};
use panto_trees::sexp::{self, Sexp, SyntaxError};
use panto_trees::Name;

use crate::diff::path_diff;
use crate::path::{rebase, TermPath};
use crate::{EditError, ShowJudgement};

/// A selection: the node at `outer`, minus the subterm `middle` below it.
/// The one-hole context between the two is what the selection covers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Selection {
    pub outer: Vec<usize>,
    pub middle: Vec<usize>,
}

impl Selection {
    pub fn new(outer: Vec<usize>, middle: Vec<usize>) -> Selection {
        Selection { outer, middle }
    }

    /// The path from the root to the selection, the selected path, and the
    /// focused term below it.
    pub fn split(&self, program: &Term) -> Option<(TermPath, TermPath, Term)> {
        let (outer, rest) = TermPath::split(program, &self.outer)?;
        let (middle, focus) = TermPath::split(&rest, &self.middle)?;
        Some((outer, middle, focus))
    }

    /// Position of the focused term.
    pub fn focus(&self) -> Vec<usize> {
        let mut p = self.outer.clone();
        p.extend(&self.middle);
        p
    }
}

/// Cut or copied material.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Clipboard {
    /// A term together with the judgement it had where it was taken.
    Term { term: Term, ctx: Ctx, ty: Ty },
    /// A one-hole context together with its path diff where it was taken.
    Path { path: TermPath, jd: JudgementDiff },
}

impl Clipboard {
    /// The clipboard as an S-expression.
    pub fn print(&self) -> String {
        match self {
            Clipboard::Term { term, ctx, ty } => format!("(term-clip {} {} {})", ctx.to_tree(), ty, print_in(ctx, term)),
            Clipboard::Path { path, jd } => {
                let ctx = Ctx::from_tree(&jd.ctx.right()).expect("context diff");
                format!("(path-clip {} {})", jd, path.print_in(&ctx))
            }
        }
    }

    /// Reads the form written by [`Clipboard::print`].
    pub fn parse(text: &str) -> Result<Clipboard, EditError> {
        let s = sexp::read_one(text)?;
        let bad = |m: &str| EditError::Syntax(s.error(m.to_string()));
        match s.form() {
            Some(("term-clip", [c, t, body])) => {
                let ctx = Ctx::from_tree(&sexp::tree(c)?).map_err(|e| bad(&e.to_string()))?;
                let ty = panto_lang::syntax::ty(t)?;
                let mut names: Vec<Name> = ctx.entries.iter().map(|(n, _)| n.clone()).collect();
                let term = read_term(body, &mut names)?;
                Ok(Clipboard::Term { term, ctx, ty })
            }
            Some(("path-clip", [j, p])) => {
                let jd = panto_diffs::text::judgement_diff(j)?;
                let ctx = Ctx::from_tree(&jd.ctx.right()).map_err(|e| bad(&e.to_string()))?;
                let path = TermPath::parse_sexp(&ctx, p)?;
                Ok(Clipboard::Path { path, jd })
            }
            _ => Err(bad("expected (term-clip ctx ty term) or (path-clip jd path)")),
        }
    }
}

/// A user-level edit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EditAction {
    InsertPath { at: Vec<usize>, path: TermPath },
    DeleteSelection(Selection),
    AnnotateLam { at: Vec<usize>, delta: Diff },
    AnnotateLet { at: Vec<usize>, delta: Diff },
    FillHole { at: Vec<usize>, term: Term },
    Dig { at: Vec<usize> },
    Cut(Selection),
    Copy(Selection),
    Paste { at: Vec<usize> },
}

impl EditAction {
    /// The script keyword of the action.
    pub fn name(&self) -> &'static str {
        match self {
            EditAction::InsertPath { .. } => "insert",
            EditAction::DeleteSelection(_) => "delete",
            EditAction::AnnotateLam { .. } => "annotate-lam",
            EditAction::AnnotateLet { .. } => "annotate-let",
            EditAction::FillHole { .. } => "fill",
            EditAction::Dig { .. } => "dig",
            EditAction::Cut(_) => "cut",
            EditAction::Copy(_) => "copy",
            EditAction::Paste { .. } => "paste",
        }
    }
}

/// The result of an edit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Applied {
    pub program: Term,
    /// The change to the program's type, when the edit retyped it.
    pub final_type_change: Option<Diff>,
    pub trace: StepTrace,
    pub clipboard: Option<Clipboard>,
}

/// The context, subterm and type at `at`.
fn site<'a>(program: &'a Term, at: &[usize]) -> Result<(Ctx, &'a Term, Ty), EditError> {
    let t = program.at(at).ok_or_else(|| EditError::BadPath(at.to_vec()))?;
    let ctx = ctx_at(&Ctx::empty(), program, at).ok_or(EditError::Boundary)?;
    let ty = infer(&ctx, t).map_err(EditError::Type)?;
    Ok((ctx, t, ty))
}

fn replace(program: &Term, at: &[usize], new: Term) -> Term {
    program.replace_at(at, new).expect("site was located")
}

/// `C[up{id ⊢ δ}(C'[down{flip Δ ⊢ id} t])]` for the path `C'` with path
/// diff `Δ ⊢ δ`, inserted around the term `t` at `at`.
pub fn insert_setup(program: &Term, at: &[usize], path: &TermPath) -> Result<Term, EditError> {
    let (ctx, t, ty) = site(program, at)?;
    let jd = path_diff(path, &ctx, &ty)?;
    let inner = down(JudgementDiff::new(jd.ctx.flip(), Diff::identity(&ty.to_tree())), t.clone());
    let outer = up(JudgementDiff::new(Diff::identity(&ctx.to_tree()), jd.ty), path.plug(inner));
    Ok(replace(program, at, outer))
}

/// `C1[up{id ⊢ flip δ}(down{Δ ⊢ id} t)]` for the selected path with path
/// diff `Δ ⊢ δ` around the term `t`.
pub fn delete_setup(program: &Term, sel: &Selection) -> Result<Term, EditError> {
    let (ctx, sub, _) = site(program, &sel.outer)?;
    if sub.has_boundary() {
        return Err(EditError::Boundary);
    }
    let (path, focus) = TermPath::split(sub, &sel.middle).ok_or_else(|| EditError::BadPath(sel.focus()))?;
    let (_, _, focus_ty) = site(program, &sel.focus())?;
    let jd = path_diff(&path, &ctx, &focus_ty)?;
    let inner = down(JudgementDiff::new(jd.ctx, Diff::identity(&focus_ty.to_tree())), focus);
    Ok(replace(program, &sel.outer, up(JudgementDiff::new(Diff::identity(&ctx.to_tree()), jd.ty.flip()), inner)))
}

fn annotation_target(ann: &Ty, delta: &Diff) -> Result<Ty, EditError> {
    if delta.left() != ann.to_tree() {
        return Err(EditError::Mismatch { expected: ann.to_string(), actual: delta.left().to_string() });
    }
    Ty::from_tree(&delta.right())
        .map_err(|e| EditError::Mismatch { expected: "a diff between types".into(), actual: e.found.to_string() })
}

/// `up{id ⊢ δ→id}(λx:δ.2. down{id, x:δ ⊢ id} t)` for the abstraction at `at`.
pub fn annotate_lam_setup(program: &Term, at: &[usize], delta: &Diff) -> Result<Term, EditError> {
    let (ctx, t, _) = site(program, at)?;
    let Term::Lam { name, ann, body } = t else {
        return Err(EditError::BadSite { path: at.to_vec(), expected: "an abstraction" });
    };
    let new_ann = annotation_target(ann, delta)?;
    let b = infer(&ctx.extend(name.clone(), ann.clone()), body).map_err(EditError::Type)?;
    let id_b = Diff::identity(&b.to_tree());
    let ctxd = Diff::ctx_extend(Diff::identity(&ctx.to_tree()), name.clone(), delta.clone());
    let lam = Term::Lam {
        name: name.clone(),
        ann: new_ann,
        body: Box::new(down(JudgementDiff::new(ctxd, id_b.clone()), (**body).clone())),
    };
    let outer = up(JudgementDiff::new(Diff::identity(&ctx.to_tree()), Diff::arrow(delta.clone(), id_b)), lam);
    Ok(replace(program, at, outer))
}

/// `let x:δ.2 = down{id, x:δ ⊢ δ} t1 in down{id, x:δ ⊢ id} t2` for the let
/// at `at`.
pub fn annotate_let_setup(program: &Term, at: &[usize], delta: &Diff) -> Result<Term, EditError> {
    let (ctx, t, ty) = site(program, at)?;
    let Term::Let { name, ann, def, body } = t else {
        return Err(EditError::BadSite { path: at.to_vec(), expected: "a let" });
    };
    let new_ann = annotation_target(ann, delta)?;
    let ctxd = Diff::ctx_extend(Diff::identity(&ctx.to_tree()), name.clone(), delta.clone());
    let new = Term::Let {
        name: name.clone(),
        ann: new_ann,
        def: Box::new(down(JudgementDiff::new(ctxd.clone(), delta.clone()), (**def).clone())),
        body: Box::new(down(JudgementDiff::new(ctxd, Diff::identity(&ty.to_tree())), (**body).clone())),
    };
    Ok(replace(program, at, new))
}

fn unchanged(program: Term, clipboard: Option<Clipboard>) -> Applied {
    Applied { program, final_type_change: None, trace: StepTrace::default(), clipboard }
}

/// Applies `action` and normalizes the result.
pub fn apply(
    program: &Term,
    action: &EditAction,
    clipboard: Option<&Clipboard>,
    cfg: &SchedulerConfig,
) -> Result<Applied, EditError> {
    apply_observed(program, action, clipboard, cfg, |_, _, _| {})
}

/// [`apply`], calling `observe(before, after, entry)` after every
/// propagation step.
pub fn apply_observed(
    program: &Term,
    action: &EditAction,
    clipboard: Option<&Clipboard>,
    cfg: &SchedulerConfig,
    observe: impl FnMut(&Term, &Term, &TraceEntry),
) -> Result<Applied, EditError> {
    if program.has_boundary() {
        return Err(EditError::Boundary);
    }
    let keep = clipboard.cloned();
    let setup = match action {
        EditAction::InsertPath { at, path } => insert_setup(program, at, path)?,
        EditAction::DeleteSelection(sel) => delete_setup(program, sel)?,
        EditAction::AnnotateLam { at, delta } => annotate_lam_setup(program, at, delta)?,
        EditAction::AnnotateLet { at, delta } => annotate_let_setup(program, at, delta)?,
        EditAction::FillHole { at, term } => return fill(program, at, term).map(|p| unchanged(p, keep)),
        EditAction::Dig { at } => return dig(program, at).map(|p| unchanged(p, keep)),
        EditAction::Copy(sel) => return Ok(unchanged(program.clone(), Some(copy(program, sel)?))),
        EditAction::Cut(sel) => {
            let clip = copy(program, sel)?;
            if sel.middle.is_empty() {
                return dig(program, &sel.outer).map(|p| unchanged(p, Some(clip)));
            }
            let mut out = finish(&delete_setup(program, sel)?, cfg, observe)?;
            out.clipboard = Some(clip);
            return Ok(out);
        }
        EditAction::Paste { at } => match clipboard {
            None => return Err(EditError::EmptyClipboard),
            Some(Clipboard::Term { term, ctx, ty }) => {
                let (here, _, _) = site(program, at)?;
                let moved = rebase(term, ctx, &here).ok_or_else(|| EditError::Mismatch {
                    expected: ShowJudgement(ctx, ty).to_string(),
                    actual: format!("context {}", here.to_tree()),
                })?;
                return fill(program, at, &moved).map(|p| unchanged(p, keep));
            }
            Some(Clipboard::Path { path, jd }) => {
                let (here, _, ty) = site(program, at)?;
                let from = Ctx::from_tree(&jd.ctx.right()).expect("context diff");
                let inner = Ty::from_tree(&jd.ty.left()).expect("type diff");
                let moved = path.rebase(&from, &here).filter(|_| inner == ty).ok_or_else(|| EditError::Mismatch {
                    expected: ShowJudgement(&from, &inner).to_string(),
                    actual: ShowJudgement(&here, &ty).to_string(),
                })?;
                insert_setup(program, at, &moved)?
            }
        },
    };
    let mut out = finish(&setup, cfg, observe)?;
    out.clipboard = keep;
    Ok(out)
}

fn finish(
    setup: &Term,
    cfg: &SchedulerConfig,
    observe: impl FnMut(&Term, &Term, &TraceEntry),
) -> Result<Applied, EditError> {
    let n = normalize_observed(setup, cfg, observe)?;
    Ok(Applied { program: n.program, final_type_change: n.final_type_change, trace: n.trace, clipboard: None })
}

fn fill(program: &Term, at: &[usize], t: &Term) -> Result<Term, EditError> {
    let (ctx, target, _) = site(program, at)?;
    let Term::Hole(ty) = target else {
        return Err(EditError::BadSite { path: at.to_vec(), expected: "a hole" });
    };
    if t.has_boundary() {
        return Err(EditError::Boundary);
    }
    let actual = infer(&ctx, t).map_err(EditError::Type)?;
    if actual != *ty {
        return Err(EditError::Mismatch { expected: ty.to_string(), actual: actual.to_string() });
    }
    Ok(replace(program, at, t.clone()))
}

fn dig(program: &Term, at: &[usize]) -> Result<Term, EditError> {
    let (_, _, ty) = site(program, at)?;
    Ok(replace(program, at, Term::Hole(ty)))
}

fn copy(program: &Term, sel: &Selection) -> Result<Clipboard, EditError> {
    let (ctx, sub, _) = site(program, &sel.outer)?;
    let (path, focus) = TermPath::split(sub, &sel.middle).ok_or_else(|| EditError::BadPath(sel.focus()))?;
    if sub.has_boundary() {
        return Err(EditError::Boundary);
    }
    let (focus_ctx, _, focus_ty) = site(program, &sel.focus())?;
    if path.is_empty() {
        return Ok(Clipboard::Term { term: focus, ctx: focus_ctx, ty: focus_ty });
    }
    let jd = path_diff(&path, &ctx, &focus_ty)?;
    Ok(Clipboard::Path { path, jd })
}

/// Applies the actions of an edit script in order, threading the
/// clipboard. The reported type change composes the changes of every
/// action.
pub fn run_script(program: &Term, script: &str, cfg: &SchedulerConfig) -> Result<Applied, EditError> {
    let mut state = unchanged(program.clone(), None);
    for line in sexp::read_all(script)? {
        let action = parse_action(&state.program, &line)?;
        let next = apply(&state.program, &action, state.clipboard.as_ref(), cfg)?;
        state.final_type_change = match (state.final_type_change, next.final_type_change) {
            (Some(a), Some(b)) => Some(compose(&a, &b).expect("consecutive type changes compose")),
            (a, b) => b.or(a),
        };
        state.trace.entries.extend(next.trace.entries);
        state.program = next.program;
        state.clipboard = next.clipboard;
    }
    Ok(state)
}

/// Reads every action of a script against an unchanging program.
pub fn parse_script(program: &Term, script: &str) -> Result<Vec<EditAction>, EditError> {
    sexp::read_all(script)?.iter().map(|s| parse_action(program, s)).collect()
}

fn positions(s: &Sexp) -> Result<Vec<usize>, SyntaxError> {
    s.list()
        .ok_or_else(|| s.error(format!("expected a list of child indices, found {s}")))?
        .iter()
        .map(|i| sexp::nat(i).map(|n| n as usize))
        .collect()
}

fn show_positions(p: &[usize]) -> String {
    let items: Vec<String> = p.iter().map(usize::to_string).collect();
    format!("({})", items.join(" "))
}

fn ctx_for(program: &Term, at: &[usize]) -> Result<Ctx, EditError> {
    program.at(at).ok_or_else(|| EditError::BadPath(at.to_vec()))?;
    ctx_at(&Ctx::empty(), program, at).ok_or(EditError::Boundary)
}

/// Reads one script action, resolving its terms against `program`.
pub fn parse_action(program: &Term, s: &Sexp) -> Result<EditAction, EditError> {
    let (head, rest) = s.form().ok_or_else(|| s.error(format!("expected an edit action, found {s}")))?;
    let arity = |n: usize| -> Result<(), EditError> {
        if rest.len() == n {
            Ok(())
        } else {
            Err(s.error(format!("'{head}' expects {n} arguments, found {}", rest.len())).into())
        }
    };
    Ok(match head {
        "insert" => {
            arity(2)?;
            let at = positions(&rest[0])?;
            let path = TermPath::parse_sexp(&ctx_for(program, &at)?, &rest[1])?;
            EditAction::InsertPath { at, path }
        }
        "delete" | "cut" | "copy" => {
            arity(2)?;
            let sel = Selection::new(positions(&rest[0])?, positions(&rest[1])?);
            match head {
                "delete" => EditAction::DeleteSelection(sel),
                "cut" => EditAction::Cut(sel),
                _ => EditAction::Copy(sel),
            }
        }
        "annotate-lam" | "annotate-let" => {
            arity(2)?;
            let at = positions(&rest[0])?;
            let delta = read_diff(&rest[1])?;
            if head == "annotate-lam" {
                EditAction::AnnotateLam { at, delta }
            } else {
                EditAction::AnnotateLet { at, delta }
            }
        }
        "fill" => {
            arity(2)?;
            let at = positions(&rest[0])?;
            let ctx = ctx_for(program, &at)?;
            let mut names: Vec<Name> = ctx.entries.iter().map(|(n, _)| n.clone()).collect();
            let term = read_term(&rest[1], &mut names)?;
            EditAction::FillHole { at, term }
        }
        "dig" | "paste" => {
            arity(1)?;
            let at = positions(&rest[0])?;
            if head == "dig" {
                EditAction::Dig { at }
            } else {
                EditAction::Paste { at }
            }
        }
        other => return Err(s.error(format!("unknown edit action '{other}'")).into()),
    })
}

/// The script line for `action`, printing its terms in `program`'s scopes.
pub fn print_action(program: &Term, action: &EditAction) -> String {
    let ctx = |at: &[usize]| ctx_at(&Ctx::empty(), program, at).unwrap_or_default();
    let name = action.name();
    match action {
        EditAction::InsertPath { at, path } => format!("({name} {} {})", show_positions(at), path.print_in(&ctx(at))),
        EditAction::DeleteSelection(sel) | EditAction::Cut(sel) | EditAction::Copy(sel) => {
            format!("({name} {} {})", show_positions(&sel.outer), show_positions(&sel.middle))
        }
        EditAction::AnnotateLam { at, delta } | EditAction::AnnotateLet { at, delta } => {
            format!("({name} {} {delta})", show_positions(at))
        }
        EditAction::FillHole { at, term } => format!("({name} {} {})", show_positions(at), print_in(&ctx(at), term)),
        EditAction::Dig { at } | EditAction::Paste { at } => format!("({name} {})", show_positions(at)),
    }
}
