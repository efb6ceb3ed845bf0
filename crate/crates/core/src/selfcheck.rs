//! Property suite run against a single rule: the algebraic identities every
//! valid input must satisfy, reported one line per property.

use num_bigint::BigInt;
use serde::Serialize;

use crate::abelian::{
    kernel_of_invariant_functional, limits_agree_on_samples, quotient_by_invariant_vector, smith_normal_form,
    solve_rational, standard_samples, GroupDescription, StationaryLimit,
};
use crate::error::Error;
use crate::homology::{analyze, sft_of_rule, HomologyResult, SftPresentation};
use crate::matrix::Matrix;
use crate::normal::{
    check_obstruction_identities, normalize, obstruction, orientability_by_germs, orientability_by_solver,
};
use crate::rule::{format_rule, parse_rule, WrappingRule};
use crate::validate::{check_nonfolding, flattening_number, validate, FlatteningOutcome, NonfoldingOutcome};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyCheck {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SelfCheckReport {
    pub checks: Vec<PropertyCheck>,
}

impl SelfCheckReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&PropertyCheck> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    fn record(&mut self, name: &str, outcome: Result<bool, Error>) {
        let (passed, detail) = match outcome {
            Ok(p) => (p, None),
            Err(e) => (false, Some(e.to_string())),
        };
        self.checks.push(PropertyCheck {
            name: name.to_string(),
            passed,
            detail,
        });
    }
}

type B = BigInt;

fn rule_core_checks(rule: &WrappingRule, out: &mut SelfCheckReport) {
    out.record("format/parse round trip", Ok(parse_rule(&format_rule(rule)).as_ref() == Ok(rule)));
    let (m, s) = (rule.unsigned_matrix(), rule.signed_matrix());
    out.record(
        "matrices of powers are powers of matrices",
        Ok((1..=3).all(|n| rule.power(n).unsigned_matrix() == m.pow(n) && rule.power(n).signed_matrix() == s.pow(n))),
    );
    out.record(
        "inversion and reversal are involutions",
        Ok(rule.words().iter().all(|w| w.inverse().inverse() == *w)
            && rule.edges().all(|e| rule.reverse_edge(e).reverse_edge(e) == *rule)),
    );
    out.record(
        "unsigned matrix is invariant under reversal",
        Ok(rule.edges().all(|e| rule.reverse_edge(e).unsigned_matrix() == m)),
    );
    let words = rule.words();
    out.record(
        "substitution distributes over concatenation",
        Ok(words.iter().zip(words.iter().skip(1).chain(words.first())).all(|(u, v)| {
            rule.substitute(&u.concat(v)) == rule.substitute(u).concat(&rule.substitute(v))
        })),
    );
}

fn validator_checks(rule: &WrappingRule, out: &mut SelfCheckReport) {
    out.record(
        "powers 2 and 3 are pre-solenoids",
        Ok((2..=3).all(|n| validate(&rule.power(n)).is_pre_solenoid())),
    );
    out.record(
        "non-folding is invariant under reversal",
        Ok(rule
            .edges()
            .all(|e| matches!(check_nonfolding(&rule.reverse_edge(e)), NonfoldingOutcome::Pass))),
    );
    let flat = match flattening_number(rule) {
        FlatteningOutcome::Pass { d } => Ok(flattening_number(&rule.power(d as u32)) == FlatteningOutcome::Pass { d: 1 }),
        other => Err(Error::Inconsistent(format!("flattening: {other:?}"))),
    };
    out.record("the flattening power flattens in one step", flat);
}

fn normalform_checks(rule: &WrappingRule, out: &mut SelfCheckReport) -> Result<(), Error> {
    let norm = normalize(rule)?;
    let solver = orientability_by_solver(rule);
    out.record(
        "germ and solver orientability agree",
        Ok(orientability_by_germs(&norm) == solver.is_orientable()),
    );
    out.record("obstruction identities", obstruction(&norm).map(|_| true));
    out.record(
        "classification is stable under powering",
        (1..=2)
            .map(|k| normalize(&rule.power(k * norm.power_used)).map(|n| n.flips == norm.flips && n.classification == norm.classification))
            .try_fold(true, |acc, r| r.map(|b| acc && b)),
    );
    out.record(
        "the square of an oriented rule is positively oriented",
        Ok(solver.negative.is_none() || orientability_by_solver(&rule.power(2)).positive.is_some()),
    );
    Ok(())
}

fn abelian_checks(sft: &SftPresentation<B>, w: &[B], out: &mut SelfCheckReport) -> Result<(), Error> {
    let a = &sft.gamma_s;
    let s = smith_normal_form(a);
    out.record("Smith form reconstructs", Ok(&(&s.u * &s.d) * &s.v == *a));
    let m = a.rows() as u32;
    out.record("rank stabilizes by the m-th power", Ok(a.pow(m).rank() == a.pow(m + 1).rank()));
    let g = StationaryLimit::new(a)?;
    let shift_ok = standard_samples::<B>(g.rank()).iter().all(|v| {
        let back = solve_rational(g.reduced(), v);
        g.contains(&back) == g.contains(v)
    });
    out.record("membership is invariant under the automorphism", Ok(shift_ok));
    if w.iter().any(|x| !num_traits::Zero::is_zero(x)) {
        let two = B::from(2);
        out.record(
            "quotient torsion is exactly Z_2",
            quotient_by_invariant_vector(a, w, &two).map(|q| q.torsion() == vec![two.clone()]),
        );
        let functorial = (2..=3).try_fold(true, |acc, n| -> Result<bool, Error> {
            let k1 = kernel_of_invariant_functional(&sft.gamma_u, w)?;
            let kn = kernel_of_invariant_functional(&sft.gamma_u.pow(n), w)?;
            Ok(acc
                && match (k1.limit(), kn.limit()) {
                    (Some(x), Some(y)) => y.reduced() == &x.reduced().pow(n),
                    (None, None) => true,
                    _ => false,
                })
        });
        out.record("kernel restriction commutes with powers", functorial);
    }
    Ok(())
}

fn support(h: &HomologyResult<B>) -> Vec<bool> {
    (0..4).flat_map(|n| [!h.h_s(n).is_zero(), !h.h_u(n).is_zero()]).collect()
}

fn groups(h: &HomologyResult<B>) -> Vec<GroupDescription<B>> {
    vec![h.h_s[0].clone(), h.h_s[1].clone(), h.h_u[0].clone(), h.h_u[1].clone(), h.cech.h1.clone()]
}

/// Degree support, ranks and torsion of `(X, f^n)` match `(X, f)`; every
/// `|det|` is raised to the `n`-th power; membership agrees on samples.
pub fn powering_invariance(h1: &HomologyResult<B>, hn: &HomologyResult<B>, n: u32) -> Result<bool, Error> {
    let mut ok = support(h1) == support(hn);
    for (x, y) in groups(h1).iter().zip(groups(hn).iter()) {
        ok &= x.rank() == y.rank() && x.torsion() == y.torsion() && y.abs_det() == num_traits::pow(x.abs_det(), n as usize);
        if let (Some(gx), Some(gy)) = (x.limit(), y.limit()) {
            if gx.basis() == gy.basis() {
                ok &= limits_agree_on_samples(gx, gy, &standard_samples(gx.rank()))?;
            }
        }
    }
    Ok(ok)
}

fn homology_checks(rule: &WrappingRule, out: &mut SelfCheckReport) -> Result<HomologyResult<B>, Error> {
    let h = analyze::<B>(rule)?;
    out.record(
        "homology vanishes outside degrees 0 and 1",
        Ok((2..6).chain(-3..0).all(|n| h.h_s(n).is_zero() && h.h_u(n).is_zero())),
    );
    let z2 = GroupDescription::FiniteCyclic(B::from(2));
    let trichotomy = if h.orientable {
        h.h_s(1) == GroupDescription::FreeCyclic && h.h_u(1) == GroupDescription::FreeCyclic
    } else {
        h.h_s(1).is_zero() && h.h_u(1) == z2
    };
    out.record("orientability trichotomy in degree 1", Ok(trichotomy));
    out.record(
        "torsion dichotomy",
        Ok(if h.orientable {
            h.torsion.torsion_free
        } else {
            h.h_s(0).torsion() == vec![B::from(2)] && h.h_u(1).torsion() == vec![B::from(2)] && h.torsion.entries.len() == 2
        }),
    );
    out.record(
        "gamma_s and gamma_u are transposes of the transition matrix",
        Ok(h.sft.gamma_s == rule.unsigned_matrix() && h.sft.gamma_u == h.sft.gamma_s.transpose()),
    );
    for n in 2..=3 {
        let hn = analyze::<B>(&rule.power(n));
        out.record(
            &format!("powering invariance n={n}"),
            hn.and_then(|hn| powering_invariance(&h, &hn, n)),
        );
    }
    Ok(h)
}

/// Runs every property against `rule`. Errors only if the rule is not a
/// pre-solenoid; failing properties are reported, not raised.
pub fn selfcheck(rule: &WrappingRule) -> Result<SelfCheckReport, Error> {
    let report = validate(rule);
    if !report.is_pre_solenoid() {
        return Err(Error::NotPreSolenoid(report.failures().join(", ")));
    }
    let mut out = SelfCheckReport::default();
    rule_core_checks(rule, &mut out);
    validator_checks(rule, &mut out);
    if let Err(e) = normalform_checks(rule, &mut out) {
        out.record("normalization", Err(e));
    }
    match homology_checks(rule, &mut out) {
        Ok(h) => {
            let sft = sft_of_rule::<B>(&normalize(rule)?.base);
            let w: Vec<B> = h.w.iter().map(|&x| B::from(x)).collect();
            if let Err(e) = abelian_checks(&sft, &w, &mut out) {
                out.record("abelian engine", Err(e));
            }
        }
        Err(e) => out.record("homology", Err(e)),
    }
    Ok(out)
}

/// Replays a recorded obstruction vector against the normalized transition
/// matrix of `rule`.
pub fn replay_obstruction(rule: &WrappingRule, w: &[i64]) -> Result<PropertyCheck, Error> {
    let norm = normalize(rule)?;
    if w.len() != rule.edge_count() {
        return Err(Error::Dimension(format!("w has {} entries for {} edges", w.len(), rule.edge_count())));
    }
    let wb: Vec<B> = w.iter().map(|&x| B::from(x)).collect();
    let m: Matrix<B> = norm.rule.unsigned_matrix();
    let outcome = check_obstruction_identities(&m, &wb, &wb);
    Ok(PropertyCheck {
        name: "gamma_s(w) = w for the recorded w".into(),
        passed: outcome.is_ok(),
        detail: outcome.err().map(|e| e.to_string()),
    })
}
