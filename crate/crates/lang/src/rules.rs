//! Typing rules in intrinsic style over judgement trees.
//!
//! Each rule is a list of premise patterns, one per child term, and a
//! conclusion pattern. Patterns are turnstile trees whose leaves may be
//! metavariables: [`GAMMA`] for the context and [`A`], [`B`] for types.
//! Forms with one type parameter (holes, `nil`, `cons`, free variables and
//! variables) use [`A`] for it.

use std::collections::BTreeSet;
use std::fmt;

use panto_trees::{MetaSubst, Name, Tree};

use crate::check::{child_ctx, TypeError};
use crate::{infer, Ctx, Term, Ty};

pub const GAMMA: u32 = 0;
pub const A: u32 = 1;
pub const B: u32 = 2;

/// The syntactic form of a non-boundary term node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Form {
    Lam,
    App,
    Var,
    Let,
    Match,
    Hole,
    Int,
    Bool,
    Nil,
    Cons,
    GhostApp,
    Free,
    Err,
}

impl Form {
    pub const ALL: [Form; 13] = [
        Form::Lam,
        Form::App,
        Form::Var,
        Form::Let,
        Form::Match,
        Form::Hole,
        Form::Int,
        Form::Bool,
        Form::Nil,
        Form::Cons,
        Form::GhostApp,
        Form::Free,
        Form::Err,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Form::Lam => "lam",
            Form::App => "app",
            Form::Var => "var",
            Form::Let => "let",
            Form::Match => "match",
            Form::Hole => "hole",
            Form::Int => "int",
            Form::Bool => "bool",
            Form::Nil => "nil",
            Form::Cons => "cons",
            Form::GhostApp => "ghost-app",
            Form::Free => "free-var",
            Form::Err => "error-boundary",
        }
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A typing rule: premises for the children in order, and a conclusion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypingRule {
    pub form: Form,
    pub premises: Vec<Tree>,
    pub conclusion: Tree,
    /// Names bound by each premise, outermost first.
    pub binders: Vec<Vec<Name>>,
    /// Metavariables occurring more than once in a single pattern.
    pub nonlinear: BTreeSet<u32>,
}

fn g() -> Tree {
    Tree::meta(GAMMA)
}

fn a() -> Tree {
    Tree::meta(A)
}

fn b() -> Tree {
    Tree::meta(B)
}

fn j(ctx: Tree, ty: Tree) -> Tree {
    Tree::turnstile(ctx, ty)
}

fn ext(ctx: Tree, name: &Name, ty: Tree) -> Tree {
    Tree::ctx_extend(ctx, name.clone(), ty)
}

fn count_metas(t: &Tree, counts: &mut std::collections::BTreeMap<u32, usize>) {
    if let panto_trees::Label::Meta(m) = t.label() {
        *counts.entry(*m).or_default() += 1;
    }
    for c in t.children() {
        count_metas(c, counts);
    }
}

fn rule(form: Form, premises: Vec<Tree>, conclusion: Tree, binders: Vec<Vec<Name>>) -> TypingRule {
    let mut nonlinear = BTreeSet::new();
    for p in premises.iter().chain(std::iter::once(&conclusion)) {
        let mut counts = Default::default();
        count_metas(p, &mut counts);
        nonlinear.extend(counts.into_iter().filter(|&(_, n)| n > 1).map(|(m, _)| m));
    }
    TypingRule { form, premises, conclusion, binders, nonlinear }
}

/// The rule for `form` with the given binder names.
///
/// `names` supplies the bound name for `lam`, `let` and `var`, and the head
/// and tail names for `match`; other forms ignore it.
pub fn rule_with_names(form: Form, names: &[Name]) -> TypingRule {
    let x = || names.first().cloned().unwrap_or_else(|| "x".into());
    match form {
        Form::Lam => {
            let x = x();
            rule(form, vec![j(ext(g(), &x, a()), b())], j(g(), Tree::arrow(a(), b())), vec![vec![x]])
        }
        Form::App => rule(
            form,
            vec![j(g(), Tree::arrow(a(), b())), j(g(), a())],
            j(g(), b()),
            vec![vec![], vec![]],
        ),
        Form::Var => {
            let x = x();
            rule(form, vec![], j(ext(g(), &x, a()), a()), vec![])
        }
        Form::Let => {
            let x = x();
            let inner = ext(g(), &x, a());
            rule(
                form,
                vec![j(inner.clone(), a()), j(inner, b())],
                j(g(), b()),
                vec![vec![x.clone()], vec![x]],
            )
        }
        Form::Match => {
            let h = names.first().cloned().unwrap_or_else(|| "h".into());
            let t = names.get(1).cloned().unwrap_or_else(|| "t".into());
            let inner = ext(ext(g(), &h, a()), &t, Tree::list(a()));
            rule(
                form,
                vec![j(g(), Tree::list(a())), j(g(), b()), j(inner, b())],
                j(g(), b()),
                vec![vec![], vec![], vec![h, t]],
            )
        }
        Form::Hole | Form::Free => rule(form, vec![], j(g(), a()), vec![]),
        Form::Int => rule(form, vec![], j(g(), Tree::int()), vec![]),
        Form::Bool => rule(form, vec![], j(g(), Tree::bool()), vec![]),
        Form::Nil => rule(form, vec![], j(g(), Tree::list(a())), vec![]),
        Form::Cons => rule(
            form,
            vec![],
            j(g(), Tree::arrow(a(), Tree::arrow(Tree::list(a()), Tree::list(a())))),
            vec![],
        ),
        Form::GhostApp => rule(form, vec![j(g(), a()), j(g(), b())], j(g(), a()), vec![vec![], vec![]]),
        Form::Err => rule(form, vec![j(g(), a())], j(g(), b()), vec![vec![]]),
    }
}

/// One rule per form, with placeholder binder names.
pub fn rule_table() -> Vec<TypingRule> {
    Form::ALL.iter().map(|&f| rule_with_names(f, &[])).collect()
}

/// The rule for the node `t`, using its actual binder names.
pub fn rule_for(t: &Term) -> Option<TypingRule> {
    let names: Vec<Name> = match t {
        Term::Lam { name, .. } | Term::Let { name, .. } | Term::Var { name, .. } => vec![name.clone()],
        Term::Match { head, tail, .. } => vec![head.clone(), tail.clone()],
        _ => vec![],
    };
    Some(rule_with_names(t.form()?, &names))
}

/// The metavariable instance for the node `t` in context `ctx`.
///
/// For a variable, `Γ` is the part of the context outside its binding.
pub fn instance(ctx: &Ctx, t: &Term) -> Result<MetaSubst, TypeError> {
    let child_ty = |i: usize| -> Result<Ty, TypeError> {
        let cctx = child_ctx(ctx, t, i).ok_or_else(|| TypeError {
            path: vec![],
            message: "child context is undefined".into(),
        })?;
        infer(&cctx, t.children()[i]).map_err(|mut e| {
            e.path.insert(0, i);
            e
        })
    };
    let bad = |m: String| TypeError { path: vec![], message: m };
    let mut iota = MetaSubst::new().with(GAMMA, ctx.to_tree());
    let mut set = |m: u32, ty: &Ty| {
        iota.insert(m, ty.to_tree());
    };
    match t {
        Term::Lam { ann, .. } => {
            set(A, ann);
            set(B, &child_ty(0)?);
        }
        Term::App(..) => match child_ty(0)? {
            Ty::Arrow(dom, cod) => {
                set(A, &dom);
                set(B, &cod);
            }
            other => return Err(bad(format!("applying a non-function of type {other}"))),
        },
        Term::Var { index, .. } => {
            let (_, ty) = ctx.lookup(*index).ok_or_else(|| bad("variable out of scope".into()))?;
            set(A, ty);
            let outer = Ctx { entries: ctx.entries[..ctx.len() - index - 1].to_vec() };
            iota.insert(GAMMA, outer.to_tree());
        }
        Term::Let { ann, .. } => {
            set(A, ann);
            set(B, &child_ty(1)?);
        }
        Term::Match { .. } => {
            match child_ty(0)? {
                Ty::List(elem) => set(A, &elem),
                other => return Err(bad(format!("matching on non-list type {other}"))),
            }
            set(B, &child_ty(1)?);
        }
        Term::Hole(ty) | Term::Nil(ty) | Term::Cons(ty) | Term::Free { ty, .. } => set(A, ty),
        Term::Int(_) | Term::Bool(_) => {}
        Term::GhostApp(..) => {
            set(A, &child_ty(0)?);
            set(B, &child_ty(1)?);
        }
        Term::Err { inner, outer, .. } => {
            set(A, inner);
            set(B, outer);
        }
        Term::Down(..) | Term::Up(..) => return Err(bad("boundaries have no typing rule instance".into())),
    }
    Ok(iota)
}

/// Rebuilds the node `t` with new children, taking its type annotations from
/// the instance `iota`.
pub fn rebuild(t: &Term, iota: &MetaSubst, children: Vec<Term>) -> Term {
    let ty = |m: u32, old: &Ty| match iota.get(m) {
        Some(tree) => Ty::from_tree(tree).unwrap_or_else(|_| old.clone()),
        None => old.clone(),
    };
    let node = match t {
        Term::Lam { name, ann, body } => Term::Lam { name: name.clone(), ann: ty(A, ann), body: body.clone() },
        Term::Let { name, ann, def, body } => Term::Let {
            name: name.clone(),
            ann: ty(A, ann),
            def: def.clone(),
            body: body.clone(),
        },
        Term::Hole(a) => Term::Hole(ty(A, a)),
        Term::Nil(a) => Term::Nil(ty(A, a)),
        Term::Cons(a) => Term::Cons(ty(A, a)),
        Term::Free { name, ty: a } => Term::Free { name: name.clone(), ty: ty(A, a) },
        Term::Err { inner, outer, body } => Term::Err {
            inner: ty(A, inner),
            outer: ty(B, outer),
            body: body.clone(),
        },
        other => other.clone(),
    };
    node.with_children(children)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse;

    #[test]
    fn table_shapes() {
        let table = rule_table();
        assert_eq!(table.len(), 13);
        let app = &table[1];
        assert_eq!(app.premises[0].to_string(), "(|- (meta 0) (-> (meta 1) (meta 2)))");
        assert_eq!(app.premises[1].to_string(), "(|- (meta 0) (meta 1))");
        assert_eq!(app.conclusion.to_string(), "(|- (meta 0) (meta 2))");
        let let_ = &table[3];
        assert_eq!(let_.premises[0].to_string(), "(|- (ext x (meta 0) (meta 1)) (meta 1))");
        assert_eq!(let_.premises[1].to_string(), "(|- (ext x (meta 0) (meta 1)) (meta 2))");
        assert!(let_.nonlinear.contains(&A));
        let var = &table[2];
        assert_eq!(var.conclusion.to_string(), "(|- (ext x (meta 0) (meta 1)) (meta 1))");
        assert!(var.nonlinear.contains(&A));
        assert!(table[9].nonlinear.contains(&A));
        assert!(table[1].nonlinear.is_empty());
    }

    #[test]
    fn premises_match_children() {
        for r in rule_table() {
            assert_eq!(r.premises.len(), r.binders.len());
        }
    }

    #[test]
    fn instances_reproduce_judgements() {
        let t = parse("(app (lam x (-> Bool Int) (lit 1)) (lam y Bool (lit 10)))").unwrap();
        let iota = instance(&Ctx::empty(), &t).unwrap();
        let r = rule_for(&t).unwrap();
        let conclusion = panto_trees::subst_meta(&r.conclusion, &iota).unwrap();
        assert_eq!(conclusion.to_string(), "(|- empty Int)");
        let p0 = panto_trees::subst_meta(&r.premises[0], &iota).unwrap();
        assert_eq!(p0.to_string(), "(|- empty (-> (-> Bool Int) Int))");
    }

    #[test]
    fn rebuild_takes_annotations_from_instance() {
        let t = parse("(lam x Int (hole Int))").unwrap();
        let iota = MetaSubst::new().with(A, Tree::bool());
        let body = t.children()[0].clone();
        let r = rebuild(&t, &iota, vec![body]);
        assert_eq!(r.to_string(), "(lam x Bool (hole Int))");
    }
}
