//! The termination metric: a lexicographic measure per boundary, compared
//! across programs with the Dershowitz–Manna multiset order.

use std::collections::BTreeMap;

use panto_lang::Term;

use crate::neutral::{applied_args, is_head, is_neutral, spine_args};

/// The measure of one boundary, ordered lexicographically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BoundaryMetric {
    pub up_like: bool,
    pub distance: usize,
    pub count: usize,
}

/// The multiset of boundary measures of a program, sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Metric {
    pub boundaries: Vec<BoundaryMetric>,
}

/// The measure of every boundary in `program`.
pub fn metric(program: &Term) -> Metric {
    let mut boundaries: Vec<BoundaryMetric> =
        program.boundary_paths().iter().filter_map(|p| boundary_metric(program, p)).collect();
    boundaries.sort();
    Metric { boundaries }
}

/// The measure of the boundary at `path`.
pub fn boundary_metric(program: &Term, path: &[usize]) -> Option<BoundaryMetric> {
    let (jd, body, is_up) = match program.at(path)? {
        Term::Down(jd, b) => (jd, &**b, false),
        Term::Up(jd, b) => (jd, &**b, true),
        _ => return None,
    };
    let type_only = jd.ctx.is_identity() && !jd.ty.is_identity();
    let in_neutral = type_only && is_neutral(body) && (is_up || is_head(program, path));
    let up_like = if in_neutral { !is_up } else { is_up };
    let distance = match (is_up, in_neutral) {
        (false, false) => body.depth(),
        (true, false) => length(program, path),
        (false, true) => 2 * spine_args(body) + length(program, path),
        (true, true) => {
            let args = applied_args(program, path);
            let deepest = args.iter().filter_map(|a| program.at(a)).map(Term::depth).max().unwrap_or(0);
            args.len() + deepest
        }
    };
    Some(BoundaryMetric { up_like, distance, count: jd.count() })
}

/// The length of the context around `path`. An argument position whose
/// function is a neutral spine with `n` arguments counts `2n`; every other
/// step counts one.
pub fn length(program: &Term, path: &[usize]) -> usize {
    let mut total = 0;
    let mut p = path.to_vec();
    while let Some(i) = p.pop() {
        let parent = program.at(&p).expect("prefix of a valid path");
        total += match parent {
            Term::App(f, _) | Term::GhostApp(f, _) if i == 1 && is_neutral(f) => 2 * spine_args(f),
            _ => 1,
        };
    }
    total
}

/// True when `after` is strictly smaller than `before` in the
/// Dershowitz–Manna extension of the boundary order.
pub fn metric_decreases(before: &Metric, after: &Metric) -> bool {
    let mut counts: BTreeMap<BoundaryMetric, isize> = BTreeMap::new();
    for b in &before.boundaries {
        *counts.entry(*b).or_default() += 1;
    }
    for b in &after.boundaries {
        *counts.entry(*b).or_default() -= 1;
    }
    let removed: Vec<BoundaryMetric> = counts.iter().filter(|(_, &n)| n > 0).map(|(b, _)| *b).collect();
    let added: Vec<BoundaryMetric> = counts.iter().filter(|(_, &n)| n < 0).map(|(b, _)| *b).collect();
    !removed.is_empty() && added.iter().all(|y| removed.iter().any(|x| x > y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use panto_lang::parse;

    #[test]
    fn boundary_free_program_has_empty_metric() {
        let t = parse("(app (lam x Int (var x)) (lit 10))").unwrap();
        assert_eq!(metric(&t), Metric::default());
    }

    #[test]
    fn multiset_order() {
        let m = |v: &[(bool, usize, usize)]| Metric {
            boundaries: v.iter().map(|&(u, d, c)| BoundaryMetric { up_like: u, distance: d, count: c }).collect(),
        };
        assert!(metric_decreases(&m(&[(true, 3, 0)]), &m(&[(false, 9, 9), (true, 2, 5)])));
        assert!(metric_decreases(&m(&[(false, 2, 0)]), &m(&[])));
        assert!(!metric_decreases(&m(&[(false, 2, 0)]), &m(&[(false, 2, 0)])));
        assert!(!metric_decreases(&m(&[(false, 2, 0)]), &m(&[(true, 0, 0)])));
        assert!(metric_decreases(&m(&[(false, 2, 1), (false, 1, 0)]), &m(&[(false, 2, 0), (false, 1, 0)])));
    }
}
