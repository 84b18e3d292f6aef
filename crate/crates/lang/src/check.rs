//! Type synthesis for terms with error forms and diff boundaries.
//!
//! Every form synthesizes a unique type. A down boundary `down{Δ ⊢ δ} t`
//! sits in context `Δ.2` at type `δ.2` while its body is checked at `Δ.1`
//! and `δ.1`; an up boundary is the mirror image.

use std::fmt;

use panto_diffs::JudgementDiff;
use thiserror::Error;

use crate::{Ctx, DecodeError, Term, Ty};

/// A type error at the node addressed by `path`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct TypeError {
    pub path: Vec<usize>,
    pub message: String,
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "type error at {:?}: {}", self.path, self.message)
    }
}

/// The typing judgement that holds at one node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeJudgement {
    pub path: Vec<usize>,
    pub ctx: Ctx,
    pub ty: Ty,
}

/// The type synthesized for `t` in `ctx`.
pub fn infer(ctx: &Ctx, t: &Term) -> Result<Ty, TypeError> {
    Checker { path: Vec::new(), out: None }.infer(ctx, t)
}

/// The judgement at every node of `t`, in pre-order.
pub fn judgements(ctx: &Ctx, t: &Term) -> Result<Vec<NodeJudgement>, TypeError> {
    let mut c = Checker { path: Vec::new(), out: Some(Vec::new()) };
    c.infer(ctx, t)?;
    let mut out = c.out.expect("collecting");
    out.sort_by(|a, b| a.path.cmp(&b.path));
    Ok(out)
}

/// The context of child `i` of `t` when `t` sits in `ctx`, or `None` when
/// a boundary diff is malformed or a match scrutinee is not a list.
pub fn child_ctx(ctx: &Ctx, t: &Term, i: usize) -> Option<Ctx> {
    Some(match t {
        Term::Lam { name, ann, .. } => ctx.extend(name.clone(), ann.clone()),
        Term::Let { name, ann, .. } => ctx.extend(name.clone(), ann.clone()),
        Term::Match { head, tail, .. } if i == 2 => {
            let elem = match_elem(ctx, t)?;
            ctx.extend(head.clone(), elem.clone()).extend(tail.clone(), Ty::list(elem))
        }
        Term::Down(jd, _) => Ctx::from_tree(&jd.ctx.left()).ok()?,
        Term::Up(jd, _) => Ctx::from_tree(&jd.ctx.right()).ok()?,
        _ => ctx.clone(),
    })
}

/// The context at `path` inside `t`, where `t` sits in `ctx`.
pub fn ctx_at(ctx: &Ctx, t: &Term, path: &[usize]) -> Option<Ctx> {
    let mut cur = ctx.clone();
    let mut node = t;
    for &i in path {
        cur = child_ctx(&cur, node, i)?;
        node = node.children().get(i).copied()?;
    }
    Some(cur)
}

fn match_elem(ctx: &Ctx, t: &Term) -> Option<Ty> {
    match t {
        Term::Match { scrut, .. } => match infer(ctx, scrut).ok()? {
            Ty::List(a) => Some(*a),
            _ => None,
        },
        _ => None,
    }
}

/// A context together with a type.
pub type Judgement = (Ctx, Ty);

/// Decodes the two sides of a judgement diff.
pub fn boundary_sides(jd: &JudgementDiff) -> Result<(Judgement, Judgement), DecodeError> {
    let (c1, t1) = jd.left();
    let (c2, t2) = jd.right();
    Ok((
        (Ctx::from_tree(&c1)?, Ty::from_tree(&t1)?),
        (Ctx::from_tree(&c2)?, Ty::from_tree(&t2)?),
    ))
}

struct Checker {
    path: Vec<usize>,
    out: Option<Vec<NodeJudgement>>,
}

impl Checker {
    fn fail<T>(&self, message: String) -> Result<T, TypeError> {
        Err(TypeError { path: self.path.clone(), message })
    }

    fn child(&mut self, i: usize, ctx: &Ctx, t: &Term) -> Result<Ty, TypeError> {
        self.path.push(i);
        let r = self.infer(ctx, t);
        self.path.pop();
        r
    }

    fn expect(&self, what: &str, expected: &Ty, actual: &Ty) -> Result<(), TypeError> {
        if expected == actual {
            Ok(())
        } else {
            self.fail(format!("{what}: expected {expected}, found {actual}"))
        }
    }

    fn infer(&mut self, ctx: &Ctx, t: &Term) -> Result<Ty, TypeError> {
        let ty = self.synth(ctx, t)?;
        if let Some(out) = &mut self.out {
            out.push(NodeJudgement { path: self.path.clone(), ctx: ctx.clone(), ty: ty.clone() });
        }
        Ok(ty)
    }

    fn synth(&mut self, ctx: &Ctx, t: &Term) -> Result<Ty, TypeError> {
        match t {
            Term::Lam { name, ann, body } => {
                let b = self.child(0, &ctx.extend(name.clone(), ann.clone()), body)?;
                Ok(Ty::arrow(ann.clone(), b))
            }
            Term::App(f, a) => {
                let tf = self.child(0, ctx, f)?;
                let ta = self.child(1, ctx, a)?;
                match tf {
                    Ty::Arrow(dom, cod) => {
                        self.expect("argument", &dom, &ta)?;
                        Ok(*cod)
                    }
                    other => self.fail(format!("applying a non-function of type {other}")),
                }
            }
            Term::Var { index, name } => match ctx.lookup(*index) {
                Some((n, ty)) if n == name => Ok(ty.clone()),
                Some((n, _)) => self.fail(format!("variable {name} at index {index} refers to binding {n}")),
                None => self.fail(format!("variable {name} at index {index} is out of scope")),
            },
            Term::Let { name, ann, def, body } => {
                let inner = ctx.extend(name.clone(), ann.clone());
                let td = self.child(0, &inner, def)?;
                self.expect("let definition", ann, &td)?;
                self.child(1, &inner, body)
            }
            Term::Match { scrut, nil, head, tail, cons } => {
                let ts = self.child(0, ctx, scrut)?;
                let elem = match ts {
                    Ty::List(a) => *a,
                    other => return self.fail(format!("matching on non-list type {other}")),
                };
                let tn = self.child(1, ctx, nil)?;
                let inner = ctx.extend(head.clone(), elem.clone()).extend(tail.clone(), Ty::list(elem));
                let tc = self.child(2, &inner, cons)?;
                self.expect("cons branch", &tn, &tc)?;
                Ok(tn)
            }
            Term::Hole(ty) => Ok(ty.clone()),
            Term::Int(_) => Ok(Ty::Int),
            Term::Bool(_) => Ok(Ty::Bool),
            Term::Nil(ty) => Ok(Ty::list(ty.clone())),
            Term::Cons(ty) => Ok(Ty::arrow(ty.clone(), Ty::arrow(Ty::list(ty.clone()), Ty::list(ty.clone())))),
            Term::GhostApp(f, a) => {
                let tf = self.child(0, ctx, f)?;
                self.child(1, ctx, a)?;
                Ok(tf)
            }
            Term::Free { ty, .. } => Ok(ty.clone()),
            Term::Err { inner, outer, body } => {
                let tb = self.child(0, ctx, body)?;
                self.expect("error boundary body", inner, &tb)?;
                Ok(outer.clone())
            }
            Term::Down(jd, body) => self.boundary(ctx, jd, body, false),
            Term::Up(jd, body) => self.boundary(ctx, jd, body, true),
        }
    }

    fn boundary(&mut self, ctx: &Ctx, jd: &JudgementDiff, body: &Term, up: bool) -> Result<Ty, TypeError> {
        let (left, right) = match boundary_sides(jd) {
            Ok(sides) => sides,
            Err(e) => return self.fail(format!("malformed boundary diff: {e}")),
        };
        let (outside, inside) = if up { (left, right) } else { (right, left) };
        if outside.0 != *ctx {
            return self.fail(format!(
                "boundary context {} does not match the surrounding context {}",
                outside.0.to_tree(),
                ctx.to_tree()
            ));
        }
        let tb = self.child(0, &inside.0, body)?;
        self.expect("boundary body", &inside.1, &tb)?;
        Ok(outside.1)
    }
}
