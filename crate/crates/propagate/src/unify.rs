//! Diff-substitution unification of a typing-rule pattern against an
//! incoming judgement diff.

use panto_diffs::{apply_diff_subst, Diff, DiffSubst};
use panto_trees::{subst_meta, Label, MetaSubst, Tree};

/// The result of unification: the position of the focus `s'` inside the
/// pattern and the diff substitution solving `σ s' = focused incoming diff`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Unifier {
    pub focus: Vec<usize>,
    pub sigma: DiffSubst,
}

/// Decomposes `pattern = C[s']` so that `incoming` is the identity outside
/// the focus, then solves for the metavariables of `s'`.
///
/// Returns `None` when `incoming` does not start at the instance of the
/// pattern or when no substitution matches the focused diff.
pub fn unify_diff(pattern: &Tree, incoming: &Diff, instance: &MetaSubst) -> Option<Unifier> {
    if subst_meta(pattern, instance).ok()? != incoming.left() {
        return None;
    }
    if incoming.is_identity() {
        return Some(Unifier { focus: Vec::new(), sigma: DiffSubst::new() });
    }
    let mut focus = Vec::new();
    let (mut p, mut d) = (pattern, incoming);
    while let (false, Diff::Congr(label, ds)) = (matches!(p.label(), Label::Meta(_)), d) {
        if label != p.label() {
            break;
        }
        let mut live = ds.iter().enumerate().filter(|(_, c)| !c.is_identity());
        let (Some((i, c)), None) = (live.next(), live.next()) else {
            break;
        };
        focus.push(i);
        p = &p.children()[i];
        d = c;
    }
    let mut sigma = DiffSubst::new();
    solve(p, d, &mut sigma).then_some(Unifier { focus, sigma })
}

fn solve(p: &Tree, d: &Diff, sigma: &mut DiffSubst) -> bool {
    if let Label::Meta(m) = p.label() {
        return match sigma.get(*m) {
            Some(prev) => prev == d,
            None => {
                sigma.insert(*m, d.clone());
                true
            }
        };
    }
    match d {
        Diff::Congr(label, ds) if label == p.label() => {
            p.children().iter().zip(ds).all(|(pc, dc)| solve(pc, dc, sigma))
        }
        _ => false,
    }
}

/// Builds `(σ C)[id ι'(s')]`: the pattern with `σ` applied outside the
/// focus and the identity on the new instance of `s'` at the focus.
pub fn focus_diff(pattern: &Tree, u: &Unifier, before: &MetaSubst, after: &MetaSubst) -> Option<Diff> {
    fn go(p: &Tree, path: &[usize], u: &Unifier, before: &MetaSubst, after: &MetaSubst) -> Option<Diff> {
        match path.split_first() {
            None => Some(Diff::identity(&subst_meta(p, after).ok()?)),
            Some((&i, rest)) => {
                let children = p
                    .children()
                    .iter()
                    .enumerate()
                    .map(|(j, c)| {
                        if j == i {
                            go(c, rest, u, before, after)
                        } else {
                            apply_diff_subst(&u.sigma, c, before).ok()
                        }
                    })
                    .collect::<Option<Vec<_>>>()?;
                Some(Diff::Congr(p.label().clone(), children))
            }
        }
    }
    go(pattern, &u.focus, u, before, after)
}

#[cfg(test)]
mod tests {
    use super::*;
    use panto_diffs::text::parse_diff;
    use panto_trees::sexp::{read_one, tree};

    fn t(s: &str) -> Tree {
        tree(&read_one(s).unwrap()).unwrap()
    }

    fn d(s: &str) -> Diff {
        parse_diff(s).unwrap()
    }

    const A: u32 = 1;
    const B: u32 = 2;

    #[test]
    fn single_metavariable() {
        let incoming = d("(+ (-> Bool _) (congr Int))");
        let inst = MetaSubst::new().with(A, Tree::int());
        let u = unify_diff(&Tree::meta(A), &incoming, &inst).unwrap();
        assert!(u.focus.is_empty());
        assert_eq!(u.sigma.get(A), Some(&incoming));
    }

    #[test]
    fn let_premise_focuses_on_the_type() {
        let pattern = t("(|- (ext x (meta 0) (meta 1)) (meta 1))");
        let incoming = d("(congr |- (congr (ext x) (congr empty) (congr Int)) (+ (-> Bool _) (congr Int)))");
        let inst = MetaSubst::new().with(0, Tree::empty_ctx()).with(A, Tree::int());
        let u = unify_diff(&pattern, &incoming, &inst).unwrap();
        assert_eq!(u.focus, vec![1]);
        assert_eq!(u.sigma.bindings.len(), 1);
        assert_eq!(u.sigma.get(A), Some(&d("(+ (-> Bool _) (congr Int))")));
    }

    #[test]
    fn label_clash_fails() {
        let pattern = t("(|- (meta 0) Int)");
        let incoming = d("(congr |- (congr empty) (replace Int Bool))");
        let inst = MetaSubst::new().with(0, Tree::empty_ctx());
        assert_eq!(unify_diff(&pattern, &incoming, &inst), None);
    }

    #[test]
    fn nonlinear_conflict_fails() {
        let pattern = t("(-> (meta 1) (meta 1))");
        let incoming = d("(congr -> (replace Int Bool) (replace Int (List Int)))");
        let inst = MetaSubst::new().with(A, Tree::int());
        assert_eq!(unify_diff(&pattern, &incoming, &inst), None);
        let agree = d("(congr -> (replace Int Bool) (replace Int Bool))");
        let u = unify_diff(&pattern, &agree, &inst).unwrap();
        assert!(u.focus.is_empty());
    }

    #[test]
    fn identity_has_empty_focus_and_substitution() {
        let pattern = t("(-> (meta 1) (meta 2))");
        let incoming = d("(congr -> (congr Int) (congr Bool))");
        let inst = MetaSubst::new().with(A, Tree::int()).with(B, Tree::bool());
        let u = unify_diff(&pattern, &incoming, &inst).unwrap();
        assert_eq!(u, Unifier { focus: vec![], sigma: DiffSubst::new() });
    }

    #[test]
    fn wrong_left_endpoint_fails() {
        let inst = MetaSubst::new().with(A, Tree::int());
        assert_eq!(unify_diff(&Tree::meta(A), &d("(replace Bool Int)"), &inst), None);
    }

    #[test]
    fn focus_diff_rebuilds_the_context() {
        let pattern = t("(-> (meta 1) (meta 2))");
        let incoming = d("(congr -> (congr Int) (+ (-> Bool _) (congr Int)))");
        let before = MetaSubst::new().with(A, Tree::int()).with(B, Tree::int());
        let u = unify_diff(&pattern, &incoming, &before).unwrap();
        assert_eq!(u.focus, vec![1]);
        let after = u.sigma.advance(&before);
        let out = focus_diff(&pattern, &u, &before, &after).unwrap();
        assert_eq!(out, d("(congr -> (congr Int) (congr -> (congr Bool) (congr Int)))"));
        assert_eq!(out.left(), incoming.right());
    }
}
