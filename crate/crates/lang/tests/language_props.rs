//! Properties of the checker, the text syntax and the judgement encoding on
//! random terms.

use panto_lang::check::child_ctx;
use panto_lang::{infer, judgement_from_tree, judgement_tree, judgements, parse, Ctx};
use panto_testkit::{self as kit, TermConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn random_terms_are_well_typed_at_their_target() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let cfg = TermConfig { max_depth: 10, error_forms: true, boundaries: true };
    for _ in 0..2000 {
        let (t, ty) = kit::closed_term(&mut rng, &cfg);
        assert_eq!(infer(&Ctx::empty(), &t), Ok(ty.clone()), "{t}");
        assert_eq!(infer(&Ctx::empty(), &t), infer(&Ctx::empty(), &t));
    }
}

#[test]
fn print_parse_round_trip_on_random_terms() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let cfg = TermConfig { max_depth: 10, error_forms: true, boundaries: true };
    for _ in 0..2000 {
        let (t, _) = kit::closed_term(&mut rng, &cfg);
        let text = t.to_string();
        let back = parse(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
        assert_eq!(back, t, "{text}");
        assert_eq!(back.to_string(), text);
    }
}

#[test]
fn node_judgements_agree_with_infer() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cfg = TermConfig { max_depth: 7, error_forms: true, boundaries: true };
    for _ in 0..500 {
        let (t, _) = kit::closed_term(&mut rng, &cfg);
        let js = judgements(&Ctx::empty(), &t).unwrap();
        assert_eq!(js.len(), t.size());
        for j in &js {
            let node = t.at(&j.path).unwrap();
            assert_eq!(infer(&j.ctx, node).as_ref(), Ok(&j.ty));
            let tree = judgement_tree(&j.ctx, &j.ty);
            assert_eq!(judgement_from_tree(&tree).unwrap(), (j.ctx.clone(), j.ty.clone()));
            if let Some((&last, parent_path)) = j.path.split_last() {
                let parent = js.iter().find(|p| p.path == parent_path).unwrap();
                let pnode = t.at(parent_path).unwrap();
                assert_eq!(child_ctx(&parent.ctx, pnode, last).as_ref(), Some(&j.ctx));
            }
        }
    }
}

#[test]
fn judgement_encoding_is_a_bijection() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..1000 {
        let c = kit::ctx(&mut rng, 5);
        let ty = kit::ty(&mut rng, 3);
        let tree = judgement_tree(&c, &ty);
        assert_eq!(judgement_from_tree(&tree).unwrap(), (c, ty));
    }
}
