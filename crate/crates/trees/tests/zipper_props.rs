//! Property tests for plugging, path concatenation and metavariable substitution.

use panto_trees::{path_concat, plug, subst_meta, subst_meta_path, Label, MetaSubst, Path, Tooth, Tree};
use proptest::prelude::*;

fn leaf_label() -> impl Strategy<Value = Label> {
    prop_oneof![
        Just(Label::Int),
        Just(Label::Bool),
        (0u64..3).prop_map(Label::TyHole),
        Just(Label::EmptyCtx),
        (0u32..3).prop_map(Label::Meta),
    ]
}

fn tree(depth: u32) -> BoxedStrategy<Tree> {
    let leaf = leaf_label().prop_map(Tree::leaf).boxed();
    if depth == 0 {
        return leaf;
    }
    let sub = tree(depth - 1);
    prop_oneof![
        2 => leaf,
        1 => (sub.clone(), sub.clone()).prop_map(|(a, b)| Tree::arrow(a, b)),
        1 => sub.clone().prop_map(Tree::list),
        1 => (sub.clone(), prop_oneof![Just("x"), Just("y")], sub)
            .prop_map(|(a, n, b)| Tree::ctx_extend(a, n.into(), b)),
    ]
    .boxed()
}

fn concrete_tree(depth: u32) -> BoxedStrategy<Tree> {
    tree(depth).prop_filter("concrete", Tree::is_concrete).boxed()
}

fn tooth(t: BoxedStrategy<Tree>) -> impl Strategy<Value = Tooth> {
    prop_oneof![
        t.clone().prop_map(Tooth::arrow_cod),
        t.clone().prop_map(|a| Tooth::new(Label::Arrow, 0, vec![a]).unwrap()),
        Just(Tooth::new(Label::List, 0, vec![]).unwrap()),
        t.prop_map(|a| Tooth::ctx_extend("z".into(), a)),
    ]
}

fn path(max_len: usize, t: BoxedStrategy<Tree>) -> impl Strategy<Value = Path> {
    prop::collection::vec(tooth(t), 0..=max_len).prop_map(Path::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn plug_adds_sizes(p in path(8, tree(2)), t in tree(3)) {
        let plugged = plug(&p, t.clone());
        let tooth_sizes: usize = p.teeth.iter().map(|c| 1 + c.others().iter().map(Tree::size).sum::<usize>()).sum();
        prop_assert_eq!(plugged.size(), tooth_sizes + t.size());
        prop_assert!(plugged.depth() >= p.len() + t.depth());
    }

    #[test]
    fn concat_is_a_monoid(a in path(8, tree(1)), b in path(8, tree(1)), c in path(8, tree(1)), t in tree(2)) {
        let left = path_concat(&path_concat(&a, &b), &c);
        let right = path_concat(&a, &path_concat(&b, &c));
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(path_concat(&Path::empty(), &a), a.clone());
        prop_assert_eq!(path_concat(&a, &Path::empty()), a.clone());
        prop_assert_eq!(plug(&path_concat(&a, &b), t.clone()), plug(&a, plug(&b, t)));
    }

    #[test]
    fn subst_distributes_over_plug(p in path(6, tree(2)), t in tree(3),
                                   b0 in concrete_tree(2), b1 in concrete_tree(2), b2 in concrete_tree(2)) {
        let sigma = MetaSubst::new().with(0, b0).with(1, b1).with(2, b2);
        let lhs = subst_meta(&plug(&p, t.clone()), &sigma).unwrap();
        let rhs = plug(&subst_meta_path(&p, &sigma).unwrap(), subst_meta(&t, &sigma).unwrap());
        prop_assert!(lhs.is_concrete());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn unplug_then_plug(t in concrete_tree(3)) {
        for i in 0..t.children().len() {
            let (tooth, child) = t.unplug(i).unwrap();
            prop_assert_eq!(tooth.plug(child), t.clone());
        }
    }
}
