//! Normalization of a pre-solenoid to a power with flattening number one and
//! two fixed germs, the resulting edge classification, the orientability
//! obstruction vector, and two independent orientability deciders.
//!
//! After normalization the two germs in the image of the germ map are
//! `germ_a = Init a` and `germ_b = Term b` (possibly `a = b`). An edge whose
//! two ends both land on `germ_a` is in `Ea`, both on `germ_b` in `Eb`, and
//! otherwise in `E0`, where it is oriented so that its initial end lands on
//! `germ_a`.

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::Error;
use crate::germ::{germ_map, End, Germ, GermMap};
use crate::matrix::Matrix;
use crate::rule::{EdgeId, WrappingRule};
use crate::scalar::{gcd_all, Int};
use crate::validate::validate;

/// Largest power tried by [`normalize`].
pub const POWER_CAP: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum EdgeClass {
    Ea,
    Eb,
    E0,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedRule {
    /// The input rule with the edges in `flips` reversed.
    pub base: WrappingRule,
    /// `base` raised to `power_used`.
    pub rule: WrappingRule,
    pub power_used: u32,
    /// Sorted, relative to the input orientation.
    pub flips: Vec<EdgeId>,
    pub a_edge: EdgeId,
    pub b_edge: EdgeId,
    pub germ_map: GermMap,
    pub classification: Vec<EdgeClass>,
}

impl NormalizedRule {
    pub fn germ_a(&self) -> Germ {
        Germ {
            edge: self.a_edge,
            end: End::Init,
        }
    }

    pub fn germ_b(&self) -> Germ {
        Germ {
            edge: self.b_edge,
            end: End::Term,
        }
    }

    pub fn edges_in(&self, class: EdgeClass) -> Vec<EdgeId> {
        self.classification
            .iter()
            .enumerate()
            .filter(|(_, c)| **c == class)
            .map(|(i, _)| EdgeId(i))
            .collect()
    }

    pub fn flip_names(&self) -> Vec<String> {
        self.flips.iter().map(|&e| self.base.name(e).to_string()).collect()
    }
}

/// The least admissible power of `rule`: flattening number one, both image
/// germs fixed, every word of length at least 3.
pub fn admissible_power(rule: &WrappingRule) -> Result<u32, Error> {
    let gm = germ_map(rule).ok_or_else(|| Error::NotPreSolenoid("rule has an empty word".into()))?;
    let m = rule.unsigned_matrix();
    let three = BigInt::from(3);
    let mut gm_n = gm.clone();
    let mut m_n = m.clone();
    for n in 1..=POWER_CAP {
        let image = gm_n.image();
        let fixed = image.iter().all(|&g| gm_n.apply(g) == g);
        let long = (0..m_n.rows()).all(|i| m_n.row(i).iter().sum::<BigInt>() >= three);
        if image.len() == 2 && fixed && long {
            return Ok(n);
        }
        gm_n = gm.compose(&gm_n);
        m_n = &m_n * &m;
    }
    Err(Error::NormalizationCapExceeded(POWER_CAP))
}

fn flip_germ(g: Germ, flips: &[EdgeId]) -> Germ {
    if flips.contains(&g.edge) {
        g.reoriented()
    } else {
        g
    }
}

/// Completes a choice of flips for the two fixed germs with the flips that
/// orient every `E0` edge from `germ_a`. `None` if the fixed germs are not
/// one initial and one terminal end after `seed`.
fn complete_flips(gm: &GermMap, fixed: [Germ; 2], seed: Vec<EdgeId>) -> Option<(Vec<EdgeId>, Germ, Germ)> {
    let [x, y] = fixed.map(|g| flip_germ(g, &seed));
    let (ga, gb) = match (x.end, y.end) {
        (End::Init, End::Term) => (x, y),
        (End::Term, End::Init) => (y, x),
        _ => return None,
    };
    let conj = gm.conjugate_by_flips(&seed);
    let mut flips = seed;
    for i in 0..gm.len() / 2 {
        let (init, term) = (conj.apply(Germ::init(i)), conj.apply(Germ::term(i)));
        if init == gb && term == ga {
            // the germ edges never need this: their fixed end already lands on itself
            debug_assert!(EdgeId(i) != ga.edge && EdgeId(i) != gb.edge);
            flips.push(EdgeId(i));
        }
    }
    flips.sort();
    Some((flips, ga, gb))
}

/// Normal form of a validated rule: least admissible power, then the
/// smallest set of edge reversals (ties broken lexicographically) putting the
/// fixed germs at `Init a`, `Term b` and orienting `E0` edges from `germ_a`.
pub fn normalize(rule: &WrappingRule) -> Result<NormalizedRule, Error> {
    let report = validate(rule);
    if !report.is_pre_solenoid() {
        return Err(Error::NotPreSolenoid(report.failures().join(", ")));
    }
    let n = admissible_power(rule)?;
    let gm_n = germ_map(rule).expect("validated").pow(n as usize);
    let image: Vec<Germ> = gm_n.image().into_iter().collect();
    let fixed = [image[0], image[1]];
    let (p, q) = (fixed[0].edge, fixed[1].edge);
    let seeds: Vec<Vec<EdgeId>> = if p == q {
        vec![vec![], vec![p]]
    } else {
        vec![vec![], vec![p], vec![q], vec![p, q]]
    };
    let (flips, ga, gb) = seeds
        .into_iter()
        .filter_map(|s| complete_flips(&gm_n, fixed, s))
        .min_by(|x, y| (x.0.len(), &x.0).cmp(&(y.0.len(), &y.0)))
        .ok_or_else(|| Error::Inconsistent("no orientation separates the fixed germs".into()))?;

    let base = rule.reverse_edges(&flips);
    let normalized = base.power(n);
    let gm = germ_map(&normalized).expect("validated");
    if gm != gm_n.conjugate_by_flips(&flips) {
        return Err(Error::Inconsistent("germ map does not commute with reversal".into()));
    }
    let mut norm = NormalizedRule {
        base,
        rule: normalized,
        power_used: n,
        flips,
        a_edge: ga.edge,
        b_edge: gb.edge,
        germ_map: gm,
        classification: Vec::new(),
    };
    norm.classification = classify_edges(&norm);
    check_normal_invariants(&norm)?;
    Ok(norm)
}

fn check_normal_invariants(norm: &NormalizedRule) -> Result<(), Error> {
    let gm = &norm.germ_map;
    let expected: BTreeSet<Germ> = [norm.germ_a(), norm.germ_b()].into();
    if gm.image() != expected {
        return Err(Error::Inconsistent("image of the germ map is not {germ_a, germ_b}".into()));
    }
    if gm.apply(norm.germ_a()) != norm.germ_a() || gm.apply(norm.germ_b()) != norm.germ_b() {
        return Err(Error::Inconsistent("normalized germs are not fixed".into()));
    }
    if norm.rule.word_lengths().iter().any(|&l| l < 3) {
        return Err(Error::Inconsistent("normalized word shorter than 3".into()));
    }
    for (i, c) in norm.classification.iter().enumerate() {
        if *c == EdgeClass::E0 && gm.apply(Germ::init(i)) != norm.germ_a() {
            return Err(Error::Inconsistent("E0 edge not oriented from germ_a".into()));
        }
    }
    Ok(())
}

/// Reads the classes off one application of the normalized germ map.
pub fn classify_edges(norm: &NormalizedRule) -> Vec<EdgeClass> {
    let (ga, gb) = (norm.germ_a(), norm.germ_b());
    (0..norm.rule.edge_count())
        .map(|i| {
            let ends = (norm.germ_map.apply(Germ::init(i)), norm.germ_map.apply(Germ::term(i)));
            if ends == (ga, ga) {
                EdgeClass::Ea
            } else if ends == (gb, gb) {
                EdgeClass::Eb
            } else {
                EdgeClass::E0
            }
        })
        .collect()
}

/// `w = Sum(Ea) - Sum(Eb)` in the normalized basis, and the same entries
/// read as a functional.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObstructionData {
    pub w: Vec<i64>,
    pub w_star: Vec<i64>,
    /// `+1` if the base transition matrix fixes `w`, `-1` if it negates it.
    pub base_sign: i64,
}

impl ObstructionData {
    pub fn is_zero(&self) -> bool {
        self.w.iter().all(|&x| x == 0)
    }

    pub fn w_in<T: Int>(&self) -> Vec<T> {
        self.w.iter().map(|&x| T::from_i64_exact(x)).collect()
    }

    pub fn w_star_in<T: Int>(&self) -> Vec<T> {
        self.w_star.iter().map(|&x| T::from_i64_exact(x)).collect()
    }
}

pub fn obstruction_vector(classification: &[EdgeClass]) -> Vec<i64> {
    classification
        .iter()
        .map(|c| match c {
            EdgeClass::Ea => 1,
            EdgeClass::Eb => -1,
            EdgeClass::E0 => 0,
        })
        .collect()
}

/// Checks `gamma_s w = w` and `w* gamma_u = w*` on the normalized
/// transition matrix, with `gamma_s = M`, `gamma_u = M^T`.
pub fn check_obstruction_identities<T: Int>(m: &Matrix<T>, w: &[T], w_star: &[T]) -> Result<(), Error> {
    if m.mul_vec(w) != w {
        return Err(Error::Inconsistent("gamma_s(w) != w".into()));
    }
    if m.transpose().vec_mul(w_star) != w_star {
        return Err(Error::Inconsistent("w* . gamma_u != w*".into()));
    }
    let g = gcd_all(w);
    if !(g.is_zero() || g.is_one()) {
        return Err(Error::Inconsistent("w is neither zero nor primitive".into()));
    }
    Ok(())
}

pub fn obstruction(norm: &NormalizedRule) -> Result<ObstructionData, Error> {
    let w = obstruction_vector(&norm.classification);
    let w_star = w.clone();
    let wb: Vec<BigInt> = w.iter().map(|&x| BigInt::from(x)).collect();
    check_obstruction_identities(&norm.rule.unsigned_matrix(), &wb, &wb)?;
    let base_sign = match crate::abelian::invariance_sign(&norm.base.unsigned_matrix(), &wb) {
        Some(s) => i64::from(s),
        None => return Err(Error::Inconsistent("w is not invariant under the base matrix".into())),
    };
    Ok(ObstructionData { w, w_star, base_sign })
}

pub fn orientability_by_germs(norm: &NormalizedRule) -> bool {
    norm.classification.iter().all(|c| *c == EdgeClass::E0)
}

/// Satisfying edge reversals for each orientation, if any.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct OrientationSolution {
    pub positive: Option<Vec<EdgeId>>,
    pub negative: Option<Vec<EdgeId>>,
}

impl OrientationSolution {
    pub fn is_orientable(&self) -> bool {
        self.positive.is_some() || self.negative.is_some()
    }

    /// `"positive"`, `"negative"` or `"none"`, preferring positive.
    pub fn kind(&self) -> &'static str {
        if self.positive.is_some() {
            "positive"
        } else if self.negative.is_some() {
            "negative"
        } else {
            "none"
        }
    }

    pub fn flips(&self) -> Option<&[EdgeId]> {
        self.positive.as_deref().or(self.negative.as_deref())
    }
}

/// Each letter `(k, s)` in the word of `i` demands `s x_i x_k = target`
/// over `x in {±1}^m`; solved by 2-colouring each component from an
/// unflipped root.
fn solve_signs(rule: &WrappingRule, target: i64) -> Option<Vec<EdgeId>> {
    let m = rule.edge_count();
    let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); m];
    for e in rule.edges() {
        for l in rule.word(e).letters() {
            let parity = l.sign.as_i64() * target;
            adj[e.0].push((l.edge.0, parity));
            adj[l.edge.0].push((e.0, parity));
        }
    }
    let mut x = vec![0i64; m];
    for root in 0..m {
        if x[root] != 0 {
            continue;
        }
        x[root] = 1;
        let mut queue = VecDeque::from([root]);
        while let Some(i) = queue.pop_front() {
            for &(k, parity) in &adj[i] {
                let want = x[i] * parity;
                if x[k] == 0 {
                    x[k] = want;
                    queue.push_back(k);
                } else if x[k] != want {
                    return None;
                }
            }
        }
    }
    Some((0..m).filter(|&i| x[i] == -1).map(EdgeId).collect())
}

pub fn orientability_by_solver(rule: &WrappingRule) -> OrientationSolution {
    OrientationSolution {
        positive: solve_signs(rule, 1),
        negative: solve_signs(rule, -1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn ids(v: &[usize]) -> Vec<EdgeId> {
        v.iter().map(|&i| EdgeId(i)).collect()
    }

    #[test]
    fn normalize_examples() {
        let f = normalize(&fixtures::f()).unwrap();
        assert_eq!((f.power_used, f.flips.clone(), f.a_edge, f.b_edge), (1, vec![], EdgeId(0), EdgeId(1)));
        assert_eq!(f.classification, vec![EdgeClass::E0, EdgeClass::E0]);

        let h = normalize(&fixtures::h()).unwrap();
        assert_eq!((h.power_used, h.flips.clone(), h.a_edge, h.b_edge), (1, ids(&[0]), EdgeId(0), EdgeId(1)));
        assert_eq!(h.classification, vec![EdgeClass::Ea, EdgeClass::Eb]);

        // both single reversals work for k; the lexicographically first is kept
        let k = normalize(&fixtures::k()).unwrap();
        assert_eq!((k.power_used, k.flips.clone()), (1, ids(&[0])));
        assert_eq!(k.classification, vec![EdgeClass::E0, EdgeClass::E0]);
        assert!(k.rule.words().iter().all(|w| w.all_positive()));
        assert_eq!(k.rule.to_string(), "a -> a a b; b -> a b b");
    }

    #[test]
    fn g_needs_the_square() {
        // the germ map swaps Term a and Init b
        let g = normalize(&fixtures::g()).unwrap();
        assert_eq!(g.power_used, 2);
        assert_eq!(g.classification, vec![EdgeClass::E0, EdgeClass::E0]);
        assert!(g.rule.words().iter().all(|w| w.all_positive()));
    }

    #[test]
    fn same_edge_fixed_germs() {
        // a -> a b a, b -> a b b a: Init a and Term a are the fixed germs
        let r = WrappingRule::from_strs(&["a", "b"], &["a b a", "a b b a"]).unwrap();
        let n = normalize(&r).unwrap();
        assert_eq!((n.a_edge, n.b_edge, n.flips.clone()), (EdgeId(0), EdgeId(0), vec![]));
    }

    #[test]
    fn obstruction_examples() {
        let f = normalize(&fixtures::f()).unwrap();
        assert_eq!(obstruction(&f).unwrap().w, vec![0, 0]);
        let h = normalize(&fixtures::h()).unwrap();
        let o = obstruction(&h).unwrap();
        assert_eq!((o.w.clone(), o.w_star.clone(), o.base_sign), (vec![1, -1], vec![1, -1], 1));
        let g = normalize(&fixtures::g()).unwrap();
        assert!(obstruction(&g).unwrap().is_zero());
    }

    #[test]
    fn identity_checks_catch_a_wrong_vector() {
        let m = Matrix::<i64>::from_i64_rows(&[&[2, 1], &[1, 2]]);
        assert!(check_obstruction_identities(&m, &[1, -1], &[1, -1]).is_ok());
        assert!(matches!(
            check_obstruction_identities(&m, &[1, 1], &[1, 1]),
            Err(Error::Inconsistent(_))
        ));
    }

    #[test]
    fn solver_examples() {
        let f = orientability_by_solver(&fixtures::f());
        assert_eq!((f.positive, f.negative), (Some(vec![]), None));
        let g = orientability_by_solver(&fixtures::g());
        assert_eq!((g.positive, g.negative), (None, Some(vec![])));
        let k = orientability_by_solver(&fixtures::k());
        assert_eq!((k.positive, k.negative), (Some(ids(&[1])), None));
        assert!(!orientability_by_solver(&fixtures::h()).is_orientable());
    }

    #[test]
    fn deciders_agree_on_fixtures() {
        for (name, r) in fixtures::all() {
            let by_germs = orientability_by_germs(&normalize(&r).unwrap());
            assert_eq!(by_germs, orientability_by_solver(&r).is_orientable(), "{name}");
        }
    }

    #[test]
    fn square_of_oriented_is_positive() {
        for (_, r) in fixtures::all() {
            let s = orientability_by_solver(&r);
            if s.negative.is_some() {
                assert!(orientability_by_solver(&r.power(2)).positive.is_some());
            }
        }
    }

    #[test]
    fn classification_is_stable_under_powering() {
        for (name, r) in fixtures::all() {
            let n1 = normalize(&r).unwrap();
            for k in 1..=2 {
                let nk = normalize(&r.power(k * n1.power_used)).unwrap();
                assert_eq!(nk.power_used, 1, "{name}");
                // flipping every edge of a rule swaps Ea and Eb
                if nk.flips == n1.flips {
                    assert_eq!(nk.classification, n1.classification, "{name}");
                } else {
                    let swapped: Vec<EdgeClass> = n1
                        .classification
                        .iter()
                        .map(|c| match c {
                            EdgeClass::Ea => EdgeClass::Eb,
                            EdgeClass::Eb => EdgeClass::Ea,
                            EdgeClass::E0 => EdgeClass::E0,
                        })
                        .collect();
                    assert_eq!(nk.classification, swapped, "{name}");
                }
            }
        }
    }

    #[test]
    fn unvalidated_rules_are_rejected() {
        let fold = WrappingRule::from_strs(&["a", "b"], &["a a^-1 b", "a b b"]).unwrap();
        assert!(matches!(normalize(&fold), Err(Error::NotPreSolenoid(_))));
    }
}
