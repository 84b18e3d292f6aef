//! Runtime checks of the structural invariants that reachable states obey.

use std::fmt;

use panto_diffs::Diff;
use panto_lang::Term;
use panto_trees::Label;

use crate::metric::boundary_metric;
use crate::neutral::enclosing;

/// The invariant a violation breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Property {
    /// Every up boundary changes only the type, or only one variable's type.
    UpShape,
    /// At most one boundary is up-like.
    OneUpLike,
    /// No boundary sits around the up-like boundary.
    NoAround,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub property: Property,
    pub path: Vec<usize>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} at {:?}: {}", self.property, self.path, self.detail)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub violations: Vec<Violation>,
}

impl Report {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// True when `d` is a chain of context extensions changing exactly one
/// binding's type and nothing else.
fn single_binding_change(d: &Diff) -> bool {
    let mut changed = 0;
    let mut cur = d;
    loop {
        match cur {
            Diff::Congr(Label::CtxExtend(_), ds) => {
                if !ds[1].is_identity() {
                    changed += 1;
                }
                cur = &ds[0];
            }
            Diff::Congr(Label::EmptyCtx, _) => return changed == 1,
            _ => return false,
        }
    }
}

/// Checks the up-boundary shape, the one-up-like property and the
/// no-boundary-around property.
pub fn monitor_invariants(program: &Term) -> Report {
    let mut violations = Vec::new();
    let sites = program.boundary_paths();
    let mut up_like = Vec::new();
    for p in &sites {
        let node = program.at(p).expect("boundary path");
        if let Term::Up(jd, _) = node {
            let ok = jd.ctx.is_identity() || (jd.ty.is_identity() && single_binding_change(&jd.ctx));
            if !ok {
                violations.push(Violation {
                    property: Property::UpShape,
                    path: p.clone(),
                    detail: format!("up boundary {jd} changes more than the type or one variable"),
                });
            }
        }
        if boundary_metric(program, p).is_some_and(|m| m.up_like) {
            up_like.push(p.clone());
        }
    }
    if up_like.len() > 1 {
        violations.push(Violation {
            property: Property::OneUpLike,
            path: up_like[1].clone(),
            detail: format!("{} up-like boundaries at {:?}", up_like.len(), up_like),
        });
    }
    if let [p] = up_like.as_slice() {
        let region = match program.at(p) {
            Some(Term::Down(..)) => neutral_root(program, p),
            _ => p.clone(),
        };
        for q in &sites {
            let above = q.len() < p.len() && p.starts_with(q);
            let inside_form = q != p && q.starts_with(&region) && !(q.len() > p.len() && q.starts_with(p));
            if above || inside_form {
                violations.push(Violation {
                    property: Property::NoAround,
                    path: q.clone(),
                    detail: format!("boundary near the up-like boundary at {p:?}"),
                });
            }
        }
    }
    Report { violations }
}

/// The root of the maximal neutral form whose spine contains `path`.
fn neutral_root(program: &Term, path: &[usize]) -> Vec<usize> {
    let mut p = path.to_vec();
    while let Some((parent, 0)) = enclosing(program, &p) {
        if !matches!(program.at(&parent), Some(Term::App(..) | Term::GhostApp(..))) {
            break;
        }
        p = parent;
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use panto_lang::parse;

    #[test]
    fn boundary_free_program_passes() {
        assert!(monitor_invariants(&parse("(lam x Int (var x))").unwrap()).is_ok());
    }

    #[test]
    fn insert_setup_passes() {
        let t = parse(
            "(app (lam x (-> Int Int) (var x)) (up (|- (congr empty) (+ (-> Bool _) (congr -> (congr Int) (congr Int)))) (lam y Int (lit 10))))",
        )
        .unwrap();
        assert!(monitor_invariants(&t).is_ok());
    }

    #[test]
    fn crossed_boundaries_are_flagged() {
        let t = parse(
            "(down (|- (congr empty) (replace Int Bool)) (app (up (|- (congr empty) (congr -> (congr Int) (replace Int Bool))) (lam y Int (true))) (lit 1)))",
        )
        .unwrap();
        let report = monitor_invariants(&t);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].property, Property::NoAround);
        assert_eq!(report.violations[0].path, Vec::<usize>::new());
    }

    #[test]
    fn up_boundary_changing_two_bindings_is_flagged() {
        let t = parse(
            "(lam a Int (lam b Int (up (|- (congr (ext b) (congr (ext a) (congr empty) (replace Int Bool)) (replace Int Bool)) (congr Int)) (lit 0))))",
        )
        .unwrap();
        let report = monitor_invariants(&t);
        assert!(report.violations.iter().any(|v| v.property == Property::UpShape));
    }
}
