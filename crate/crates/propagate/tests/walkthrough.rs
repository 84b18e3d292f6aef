use panto_lang::{infer, parse, Ctx};
use panto_propagate::{normalize, RuleId, SchedulerConfig};

const START: &str = "(app (lam x Int (var x)) (up (|- (congr empty) (+ (-> Bool _) (congr Int))) (lam y Bool (lit 10))))";

fn render(start: &str) -> String {
    let program = parse(start).unwrap();
    let mut out = format!("start {program}\n");
    let cfg = SchedulerConfig::default();
    let result = panto_propagate::normalize_observed(&program, &cfg, |_, after, e| {
        out.push_str(&format!("{} {:?} {}\n", e.rule, e.path, after));
    })
    .unwrap();
    out.push_str(&format!("final {}\n", result.program));
    out
}

#[test]
fn walkthrough_matches_golden_trace() {
    let golden = include_str!("golden/walkthrough.trace");
    assert_eq!(render(START), golden);
}

#[test]
fn walkthrough_rules_and_result() {
    let program = parse(START).unwrap();
    let n = normalize(&program, &SchedulerConfig::default()).unwrap();
    assert_eq!(
        n.trace.rules(),
        vec![
            RuleId::PropagateUp,
            RuleId::PropagateDown,
            RuleId::PropagateVarDown1,
            RuleId::InsertAppUp,
            RuleId::IdentityUp
        ]
    );
    assert_eq!(n.program.to_string(), "(app (lam x (-> Bool Int) (app (var x) (hole Bool))) (lam y Bool (lit 10)))");
    assert_eq!(n.final_type_change, None);
    assert_eq!(infer(&Ctx::empty(), &n.program), infer(&Ctx::empty(), &program));
    for w in n.trace.entries.windows(2) {
        assert_ne!(w[0].hash, w[1].hash);
    }
}

#[test]
fn nondeterminism_example_reaches_f_under_every_order() {
    let text = "(lam f (-> Int (-> Bool Bool)) (down (|- (id (ext f empty (-> Int (-> Bool Bool)))) (+ (-> Int _) (congr -> (congr Bool) (congr Bool)))) (up (|- (id (ext f empty (-> Int (-> Bool Bool)))) (+ (-> Int _) (congr -> (congr Bool) (congr Bool)))) (var f))))";
    let program = parse(text).unwrap();
    let expected = parse("(lam f (-> Int (-> Bool Bool)) (var f))").unwrap();
    let det = normalize(&program, &SchedulerConfig::default()).unwrap();
    assert_eq!(det.program, expected, "{:?}", det.trace.rules());
    assert_eq!(det.trace.rules()[0], RuleId::InsertAbsDown);
    let mut first_rules = std::collections::BTreeSet::new();
    for seed in 0..40 {
        let n = normalize(&program, &SchedulerConfig::seeded(seed)).unwrap();
        assert_eq!(n.program, expected, "seed {seed}: {:?}", n.trace.rules());
        first_rules.insert(n.trace.rules()[0]);
    }
    assert!(first_rules.contains(&RuleId::InsertAppUp));
    assert!(first_rules.contains(&RuleId::InsertAbsDown));
}
