//! Combinatorial checks that a wrapping rule presents a pre-solenoid.
//!
//! The expansion axiom is metric; it is replaced here by a surrogate that is
//! necessary for it on a wedge of circles: the transition matrix is primitive
//! and some power subdivides every edge at least twice. Markov holds by
//! construction since every word starts and ends at the single vertex.

use serde::Serialize;

use crate::germ::{end_germ, germ_map, start_germ, GermMap};
use crate::matrix::Matrix;
use crate::rule::WrappingRule;
use crate::scalar::Int;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum MixingOutcome {
    Pass { witness: u32 },
    Fail { reason: String },
}

/// A fold at the subdivision point between letters `position` and
/// `position + 1` (1-based) of the word of `edge`, first visible after
/// `depth` further applications of the germ map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FoldViolation {
    pub edge: usize,
    pub edge_name: String,
    pub position: usize,
    pub depth: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum NonfoldingOutcome {
    Pass,
    Fail { violations: Vec<FoldViolation> },
    Skipped { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum FlatteningOutcome {
    Pass { d: usize },
    Fail { stabilized_image_size: usize },
    Skipped { reason: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum SimpleOutcome {
    Pass,
    Fail { reason: String },
}

impl SimpleOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, SimpleOutcome::Pass)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub nonempty_words: SimpleOutcome,
    pub mixing: MixingOutcome,
    pub nonfolding: NonfoldingOutcome,
    pub flattening: FlatteningOutcome,
    pub expansion_surrogate: SimpleOutcome,
    pub markov: SimpleOutcome,
}

impl ValidationReport {
    pub fn is_pre_solenoid(&self) -> bool {
        self.nonempty_words.passed()
            && matches!(self.mixing, MixingOutcome::Pass { .. })
            && matches!(self.nonfolding, NonfoldingOutcome::Pass)
            && matches!(self.flattening, FlatteningOutcome::Pass { .. })
            && self.expansion_surrogate.passed()
            && self.markov.passed()
    }

    /// Names of the failing checks, in report order.
    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if !self.nonempty_words.passed() {
            out.push("nonempty_words");
        }
        if !matches!(self.mixing, MixingOutcome::Pass { .. }) {
            out.push("mixing");
        }
        if !matches!(self.nonfolding, NonfoldingOutcome::Pass) {
            out.push("nonfolding");
        }
        if !matches!(self.flattening, FlatteningOutcome::Pass { .. }) {
            out.push("flattening");
        }
        if !self.expansion_surrogate.passed() {
            out.push("expansion_surrogate");
        }
        if !self.markov.passed() {
            out.push("markov");
        }
        out
    }
}

fn wielandt_bound(m: usize) -> u32 {
    let k = m.saturating_sub(1);
    (k * k + 1) as u32
}

fn support(m: &Matrix<impl Int>) -> Vec<Vec<bool>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|x| !x.is_zero()).collect())
        .collect()
}

fn bool_mul(a: &[Vec<bool>], b: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).any(|k| a[i][k] && b[k][j]))
                .collect()
        })
        .collect()
}

/// Primitivity of a nonnegative square matrix. The witness is the least
/// exponent with a strictly positive power; the search stops at the
/// Wielandt bound `(m-1)^2 + 1`.
pub fn check_mixing<T: Int>(m: &Matrix<T>) -> MixingOutcome {
    assert!(m.is_square(), "mixing check needs a square matrix");
    if m.entries().any(|x| x.is_negative()) {
        return MixingOutcome::Fail {
            reason: "matrix has negative entries".into(),
        };
    }
    let base = support(m);
    let mut acc = base.clone();
    for k in 1..=wielandt_bound(m.rows()) {
        if acc.iter().all(|r| r.iter().all(|&x| x)) {
            return MixingOutcome::Pass { witness: k };
        }
        acc = bool_mul(&acc, &base);
    }
    MixingOutcome::Fail {
        reason: format!("no strictly positive power up to {}", wielandt_bound(m.rows())),
    }
}

/// Local injectivity of every iterate on every edge. At the subdivision point
/// between two consecutive letters the two sides land on germs `g1`, `g2`
/// at the vertex; the iterates fold there iff the germ orbits of `g1` and
/// `g2` ever meet. Orbit pairs live in a set of size `(2m)^2`, so any merge
/// happens by that depth.
pub fn check_nonfolding(rule: &WrappingRule) -> NonfoldingOutcome {
    let Some(gm) = germ_map(rule) else {
        return NonfoldingOutcome::Skipped {
            reason: "rule has an empty word".into(),
        };
    };
    let bound = (2 * rule.edge_count()).pow(2);
    let mut violations = Vec::new();
    for e in rule.edges() {
        let letters = rule.word(e).letters();
        for (j, pair) in letters.windows(2).enumerate() {
            let mut g1 = end_germ(pair[0]);
            let mut g2 = start_germ(pair[1]);
            for depth in 0..=bound {
                if g1 == g2 {
                    violations.push(FoldViolation {
                        edge: e.index(),
                        edge_name: rule.name(e).to_string(),
                        position: j + 1,
                        depth,
                    });
                    break;
                }
                g1 = gm.apply(g1);
                g2 = gm.apply(g2);
            }
        }
    }
    if violations.is_empty() {
        NonfoldingOutcome::Pass
    } else {
        NonfoldingOutcome::Fail { violations }
    }
}

/// Least `d >= 1` for which the star at the vertex is mapped onto exactly two
/// germs by the `d`-th iterate.
pub fn flattening_number(rule: &WrappingRule) -> FlatteningOutcome {
    let Some(gm) = germ_map(rule) else {
        return FlatteningOutcome::Skipped {
            reason: "rule has an empty word".into(),
        };
    };
    flattening_of_germ_map(&gm)
}

pub(crate) fn flattening_of_germ_map(gm: &GermMap) -> FlatteningOutcome {
    // image sizes are non-increasing and constant from step 2m on
    let mut power = gm.clone();
    let mut last = usize::MAX;
    for d in 1..=gm.len() + 1 {
        let size = power.image().len();
        if size == 2 {
            return FlatteningOutcome::Pass { d };
        }
        last = size;
        power = gm.compose(&power);
    }
    FlatteningOutcome::Fail {
        stabilized_image_size: last,
    }
}

/// Expansion surrogate: primitive transition matrix and some power up to the
/// Wielandt bound with every row sum at least 2.
pub fn check_expansion_surrogate(rule: &WrappingRule) -> SimpleOutcome {
    let m = rule.unsigned_matrix();
    if !matches!(check_mixing(&m), MixingOutcome::Pass { .. }) {
        return SimpleOutcome::Fail {
            reason: "transition matrix is not primitive".into(),
        };
    }
    let two = num_bigint::BigInt::from(2);
    let mut p = m.clone();
    for _ in 0..wielandt_bound(m.rows()) {
        let subdivides = (0..p.rows()).all(|i| {
            p.row(i)
                .iter()
                .fold(num_bigint::BigInt::from(0), |acc, x| acc + x)
                >= two
        });
        if subdivides {
            return SimpleOutcome::Pass;
        }
        p = &p * &m;
    }
    SimpleOutcome::Fail {
        reason: "some edge is never subdivided".into(),
    }
}

pub fn check_nonempty(rule: &WrappingRule) -> SimpleOutcome {
    let empty: Vec<&str> = rule
        .edges()
        .filter(|&e| rule.word(e).is_empty())
        .map(|e| rule.name(e))
        .collect();
    if empty.is_empty() {
        SimpleOutcome::Pass
    } else {
        SimpleOutcome::Fail {
            reason: format!("empty word for edge(s) {}", empty.join(", ")),
        }
    }
}

pub fn validate(rule: &WrappingRule) -> ValidationReport {
    ValidationReport {
        nonempty_words: check_nonempty(rule),
        mixing: check_mixing(&rule.unsigned_matrix()),
        nonfolding: check_nonfolding(rule),
        flattening: flattening_number(rule),
        expansion_surrogate: check_expansion_surrogate(rule),
        markov: SimpleOutcome::Pass,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn m(rows: &[&[i64]]) -> Matrix<i64> {
        Matrix::from_i64_rows(rows)
    }

    #[test]
    fn mixing_examples() {
        assert_eq!(check_mixing(&m(&[&[2, 1], &[1, 2]])), MixingOutcome::Pass { witness: 1 });
        assert!(matches!(check_mixing(&m(&[&[1, 0], &[0, 1]])), MixingOutcome::Fail { .. }));
        assert!(matches!(check_mixing(&m(&[&[0, 1], &[1, 0]])), MixingOutcome::Fail { .. }));
        assert_eq!(check_mixing(&m(&[&[1, 1], &[1, 0]])), MixingOutcome::Pass { witness: 2 });
    }

    #[test]
    fn mixing_reaches_the_wielandt_bound() {
        // Wielandt's matrix attains (m-1)^2 + 1
        let w = m(&[&[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1], &[1, 1, 0, 0]]);
        assert_eq!(check_mixing(&w), MixingOutcome::Pass { witness: 10 });
    }

    #[test]
    fn nonfolding_examples() {
        let fold = WrappingRule::from_strs(&["a", "b"], &["a a^-1 b", "a b b"]).unwrap();
        assert_eq!(
            check_nonfolding(&fold),
            NonfoldingOutcome::Fail {
                violations: vec![
                    FoldViolation {
                        edge: 0,
                        edge_name: "a".into(),
                        position: 1,
                        depth: 0
                    },
                    // Init a and Init b both go to Init a
                    FoldViolation {
                        edge: 0,
                        edge_name: "a".into(),
                        position: 2,
                        depth: 1
                    }
                ]
            }
        );
        assert_eq!(check_nonfolding(&fixtures::f()), NonfoldingOutcome::Pass);
        assert_eq!(check_nonfolding(&fixtures::h()), NonfoldingOutcome::Pass);
    }

    #[test]
    fn delayed_fold_is_detected() {
        let r = WrappingRule::from_strs(&["a", "b"], &["a b^-1 b", "a b b"]).unwrap();
        // (a, b^-1): Term a vs Term b, both sent to Term b;
        // (b^-1, b): Init b on both sides
        let NonfoldingOutcome::Fail { violations } = check_nonfolding(&r) else {
            panic!("expected a fold");
        };
        assert_eq!(
            violations,
            vec![
                FoldViolation { edge: 0, edge_name: "a".into(), position: 1, depth: 1 },
                FoldViolation { edge: 0, edge_name: "a".into(), position: 2, depth: 0 },
            ]
        );
        let r = WrappingRule::from_strs(&["a", "b"], &["a a^-1 b", "b a b"]).unwrap();
        // pair (a, a^-1): Term a vs Term a, immediate
        assert!(matches!(check_nonfolding(&r), NonfoldingOutcome::Fail { .. }));
        let r = WrappingRule::from_strs(&["a", "b"], &["a b b", "a b^-1 a"]).unwrap();
        // pair (a, b^-1) in b: Term a vs Term b; gamma(Term a) = Term b,
        // gamma(Term b) = Term a: never merge. pair (b^-1, a): Init b vs Init a;
        // gamma: Init a -> Init a, Init b -> Init a: merge at depth 1
        let NonfoldingOutcome::Fail { violations } = check_nonfolding(&r) else {
            panic!("expected a fold");
        };
        assert_eq!(
            violations,
            vec![FoldViolation {
                edge: 1,
                edge_name: "b".into(),
                position: 2,
                depth: 1
            }]
        );
    }

    #[test]
    fn flattening_examples() {
        assert_eq!(flattening_number(&fixtures::f()), FlatteningOutcome::Pass { d: 1 });
        assert_eq!(flattening_number(&fixtures::h()), FlatteningOutcome::Pass { d: 1 });
        let split = WrappingRule::from_strs(&["a", "b"], &["a a", "b b"]).unwrap();
        assert_eq!(
            flattening_number(&split),
            FlatteningOutcome::Fail {
                stabilized_image_size: 4
            }
        );
    }

    #[test]
    fn flattening_can_take_several_steps() {
        // first step hits {Init b, Init c, Term c}; second step only Init c, Term c
        let r = WrappingRule::from_strs(&["a", "b", "c"], &["b a c", "c b c", "c a c"]).unwrap();
        let gm = germ_map(&r).unwrap();
        assert_eq!(gm.image().len(), 3);
        assert_eq!(flattening_number(&r), FlatteningOutcome::Pass { d: 2 });
    }

    #[test]
    fn expansion_surrogate_examples() {
        assert!(check_expansion_surrogate(&fixtures::f()).passed());
        assert!(check_expansion_surrogate(&fixtures::k()).passed());
        let rot = WrappingRule::from_strs(&["a"], &["a"]).unwrap();
        assert!(!check_expansion_surrogate(&rot).passed());
    }

    #[test]
    fn fixtures_are_pre_solenoids() {
        for (name, r) in fixtures::all() {
            let report = validate(&r);
            assert!(report.is_pre_solenoid(), "{name}: {report:?}");
        }
    }

    #[test]
    fn empty_words_are_reported_not_parsed_away() {
        let r = WrappingRule::from_strs(&["a", "b"], &["a b", ""]).unwrap();
        let report = validate(&r);
        assert!(!report.is_pre_solenoid());
        assert!(report.failures().contains(&"nonempty_words"));
        assert!(matches!(report.nonfolding, NonfoldingOutcome::Skipped { .. }));
    }
}
