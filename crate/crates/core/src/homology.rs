//! Dimension groups of the covering shift, stable and unstable homology of
//! the solenoid, its torsion, and Čech cohomology.
//!
//! Vectors are columns indexed by the edges. With `M` the unsigned transition
//! matrix (`M[i][k]` = occurrences of `k` in the word of `i`), the covering
//! graph has an edge `i -> k` for every such occurrence and
//! `gamma_s = i ∘ t^* = M`, `gamma_u = t ∘ i^* = M^T`.
//!
//! Groups are presented with the matrices of the input rule, in the
//! orientation chosen by normalization. A power of the rule presents the same
//! groups, so this only fixes which automorphism is reported.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::abelian::{
    kernel_of_invariant_functional, quotient_by_invariant_vector, GroupDescription, StationaryLimit,
};
use crate::error::Error;
use crate::matrix::Matrix;
use crate::normal::{
    normalize, obstruction, orientability_by_germs, orientability_by_solver, EdgeClass, NormalizedRule,
    ObstructionData, OrientationSolution,
};
use crate::rule::WrappingRule;
use crate::scalar::Int;

/// The shift of finite type covering the solenoid: one vertex per edge of the
/// wedge and one edge per letter occurrence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct SftPresentation<T: Int> {
    pub vertices: usize,
    /// `(source, target)` for the `j`-th letter of each word, in word order.
    pub edges: Vec<(usize, usize)>,
    pub gamma_s: Matrix<T>,
    pub gamma_u: Matrix<T>,
}

pub fn sft_of_rule<T: Int>(rule: &WrappingRule) -> SftPresentation<T> {
    let m = rule.edge_count();
    let edges: Vec<(usize, usize)> = rule
        .edges()
        .flat_map(|e| rule.word(e).letters().iter().map(move |l| (e.0, l.edge.0)))
        .collect();
    let mut gamma_s: Matrix<T> = Matrix::zeros(m, m);
    let mut gamma_u: Matrix<T> = Matrix::zeros(m, m);
    for &(src, dst) in &edges {
        // gamma_s(e_dst) gains e_src; gamma_u(e_src) gains e_dst
        gamma_s[(src, dst)] = gamma_s[(src, dst)].clone() + T::one();
        gamma_u[(dst, src)] = gamma_u[(dst, src)].clone() + T::one();
    }
    SftPresentation {
        vertices: m,
        edges,
        gamma_s,
        gamma_u,
    }
}

/// Covering shift of the normalized presentation, built from the input rule
/// in its normalized orientation.
pub fn build_sft<T: Int>(norm: &NormalizedRule) -> SftPresentation<T> {
    sft_of_rule(&norm.base)
}

pub fn dimension_groups<T: Int>(
    sft: &SftPresentation<T>,
) -> Result<(GroupDescription<T>, GroupDescription<T>), Error> {
    Ok((
        GroupDescription::limit_of(&sft.gamma_s)?,
        GroupDescription::limit_of(&sft.gamma_u)?,
    ))
}

/// `H^s_0`, `H^s_1`; all other degrees vanish.
pub fn homology_s<T: Int>(
    orientable: bool,
    sft: &SftPresentation<T>,
    obs: &ObstructionData,
) -> Result<[GroupDescription<T>; 2], Error> {
    if orientable {
        return Ok([GroupDescription::limit_of(&sft.gamma_s)?, GroupDescription::FreeCyclic]);
    }
    let two = T::one() + T::one();
    Ok([
        quotient_by_invariant_vector(&sft.gamma_s, &obs.w_in(), &two)?,
        GroupDescription::Zero,
    ])
}

/// `H^u_0`, `H^u_1`; all other degrees vanish.
pub fn homology_u<T: Int>(
    orientable: bool,
    sft: &SftPresentation<T>,
    obs: &ObstructionData,
) -> Result<[GroupDescription<T>; 2], Error> {
    if orientable {
        return Ok([GroupDescription::limit_of(&sft.gamma_u)?, GroupDescription::FreeCyclic]);
    }
    let two = T::one() + T::one();
    Ok([
        kernel_of_invariant_functional(&sft.gamma_u, &obs.w_star_in())?,
        GroupDescription::FiniteCyclic(two),
    ])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct TorsionEntry<T: Int> {
    pub group: String,
    #[serde(serialize_with = "crate::ser::ints")]
    pub torsion: Vec<T>,
}

/// Torsion subgroups found in the computed groups, with the verdict that
/// they match the expected dichotomy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct TorsionReport<T: Int> {
    pub torsion_free: bool,
    /// Only the groups with nontrivial torsion.
    pub entries: Vec<TorsionEntry<T>>,
}

/// Collects torsion from the computed groups and checks it against the
/// dichotomy: nothing if orientable, exactly `Z_2` in `H^s_0` and `H^u_1`
/// otherwise.
pub fn torsion_report<T: Int>(
    orientable: bool,
    h_s: &[GroupDescription<T>; 2],
    h_u: &[GroupDescription<T>; 2],
) -> Result<TorsionReport<T>, Error> {
    let named = [("H^s_0", &h_s[0]), ("H^s_1", &h_s[1]), ("H^u_0", &h_u[0]), ("H^u_1", &h_u[1])];
    let entries: Vec<TorsionEntry<T>> = named
        .iter()
        .filter(|(_, g)| !g.is_torsion_free())
        .map(|(n, g)| TorsionEntry {
            group: n.to_string(),
            torsion: g.torsion(),
        })
        .collect();
    let two = T::one() + T::one();
    let expected: Vec<(&str, Vec<T>)> = if orientable {
        vec![]
    } else {
        vec![("H^s_0", vec![two.clone()]), ("H^u_1", vec![two])]
    };
    let found: Vec<(&str, Vec<T>)> = entries.iter().map(|e| (e.group.as_str(), e.torsion.clone())).collect();
    if found != expected {
        return Err(Error::Inconsistent(format!("unexpected torsion pattern {found:?}")));
    }
    Ok(TorsionReport {
        torsion_free: entries.is_empty(),
        entries,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct Invariants<T: Int> {
    pub rank: usize,
    #[serde(serialize_with = "crate::ser::ints")]
    pub charpoly: Vec<T>,
    #[serde(serialize_with = "crate::ser::int")]
    pub abs_det: T,
    #[serde(serialize_with = "crate::ser::ints")]
    pub torsion: Vec<T>,
}

impl<T: Int> Invariants<T> {
    pub fn of(g: &GroupDescription<T>) -> Self {
        Invariants {
            rank: g.rank(),
            charpoly: g.charpoly(),
            abs_det: g.abs_det(),
            torsion: g.torsion(),
        }
    }
}

/// Relation between `Ȟ^1` and `H^u_0`. Both sides are compared literally at
/// the normalized power, where an orientable rule has all letters positive.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct CechComparison<T: Int> {
    pub compared_at_power: u32,
    /// Orientable only: signed and unsigned matrices coincide after flips.
    pub signed_equals_unsigned: Option<bool>,
    /// Orientable only: the two stationary limits are literally equal.
    pub stationary_data_equal: Option<bool>,
    pub cech_h1: Invariants<T>,
    pub h_u0: Invariants<T>,
    pub invariants_equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct CechResult<T: Int> {
    pub h0: GroupDescription<T>,
    pub h1: GroupDescription<T>,
    pub comparison: Option<CechComparison<T>>,
}

/// `Ȟ^0 = Z` and `Ȟ^1 = lim(Z^m, S^T)` for the signed matrix `S`.
pub fn cech_groups<T: Int>(rule: &WrappingRule) -> Result<CechResult<T>, Error> {
    Ok(CechResult {
        h0: GroupDescription::FreeCyclic,
        h1: GroupDescription::limit_of(&rule.signed_matrix_in::<T>().transpose())?,
        comparison: None,
    })
}

/// Čech cohomology of `rule` together with its comparison against `H^u_0`.
/// An orientable rule that fails the literal comparison is an internal
/// inconsistency.
pub fn cech<T: Int>(
    rule: &WrappingRule,
    norm: &NormalizedRule,
    orientable: bool,
    h_u0: &GroupDescription<T>,
) -> Result<CechResult<T>, Error> {
    let mut out = cech_groups::<T>(rule)?;
    let (signed_equals_unsigned, stationary_data_equal) = if orientable {
        let s: Matrix<T> = norm.rule.signed_matrix_in();
        let m: Matrix<T> = norm.rule.unsigned_matrix_in();
        let same_matrix = s == m;
        let same_limit = StationaryLimit::new(&s.transpose())? == StationaryLimit::new(&m.transpose())?;
        if !(same_matrix && same_limit) {
            return Err(Error::Inconsistent("orientable rule with signed != unsigned after flips".into()));
        }
        (Some(same_matrix), Some(same_limit))
    } else {
        (None, None)
    };
    let cech_h1 = Invariants::of(&out.h1);
    let h_u0 = Invariants::of(h_u0);
    out.comparison = Some(CechComparison {
        compared_at_power: norm.power_used,
        signed_equals_unsigned,
        stationary_data_equal,
        invariants_equal: cech_h1 == h_u0,
        cech_h1,
        h_u0,
    });
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Orientation {
    /// `"positive"`, `"negative"` or `"none"`.
    pub kind: String,
    /// Edge names reversed to realise `kind`.
    pub flips: Option<Vec<String>>,
    pub positive: Option<Vec<String>>,
    pub negative: Option<Vec<String>>,
}

impl Orientation {
    fn of(rule: &WrappingRule, s: &OrientationSolution) -> Self {
        let names = |v: &Option<Vec<crate::rule::EdgeId>>| {
            v.as_ref().map(|v| v.iter().map(|&e| rule.name(e).to_string()).collect())
        };
        let flips = if s.positive.is_some() {
            names(&s.positive)
        } else {
            names(&s.negative)
        };
        Orientation {
            kind: s.kind().to_string(),
            flips,
            positive: names(&s.positive),
            negative: names(&s.negative),
        }
    }
}

/// Which convention the reported matrices follow.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Conventions {
    pub vectors: &'static str,
    pub gamma_s: &'static str,
    pub gamma_u: &'static str,
    pub cech_h1: &'static str,
    pub presentation: &'static str,
    pub w: &'static str,
    pub degrees: &'static str,
}

pub const CONVENTIONS: Conventions = Conventions {
    vectors: "columns indexed by edges in declaration order",
    gamma_s: "M, where M[i][k] counts edge k in the word of edge i",
    gamma_u: "transpose of M",
    cech_h1: "limit of the transpose of the signed matrix of the input rule",
    presentation: "matrices of the input rule with the normalization flips applied",
    w: "in the flipped basis; Ea edges +1, Eb edges -1",
    degrees: "h_s and h_u list degrees 0 and 1; every other degree is 0",
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct HomologyResult<T: Int> {
    pub edges: Vec<String>,
    pub orientable: bool,
    pub orientation: Orientation,
    pub power_used: u32,
    pub flips: Vec<String>,
    pub a_edge: String,
    pub b_edge: String,
    pub classification: BTreeMap<String, EdgeClass>,
    pub w: Vec<i64>,
    pub w_star: Vec<i64>,
    pub sft: SftSummary<T>,
    pub dim_s: GroupDescription<T>,
    pub dim_u: GroupDescription<T>,
    #[serde(serialize_with = "degrees")]
    pub h_s: [GroupDescription<T>; 2],
    #[serde(serialize_with = "degrees")]
    pub h_u: [GroupDescription<T>; 2],
    pub torsion: TorsionReport<T>,
    pub cech: CechResult<T>,
    pub conventions: Conventions,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(bound(serialize = ""))]
pub struct SftSummary<T: Int> {
    pub vertices: usize,
    pub edges: usize,
    pub gamma_s: Matrix<T>,
    pub gamma_u: Matrix<T>,
}

fn degrees<T: Int, S: serde::Serializer>(g: &[GroupDescription<T>; 2], s: S) -> Result<S::Ok, S::Error> {
    let map: BTreeMap<&str, &GroupDescription<T>> = [("0", &g[0]), ("1", &g[1])].into();
    map.serialize(s)
}

impl<T: Int> HomologyResult<T> {
    /// `H^s_n`, zero outside degrees 0 and 1.
    pub fn h_s(&self, n: i64) -> GroupDescription<T> {
        degree(&self.h_s, n)
    }

    pub fn h_u(&self, n: i64) -> GroupDescription<T> {
        degree(&self.h_u, n)
    }
}

fn degree<T: Int>(g: &[GroupDescription<T>; 2], n: i64) -> GroupDescription<T> {
    match n {
        0 => g[0].clone(),
        1 => g[1].clone(),
        _ => GroupDescription::Zero,
    }
}

/// Validate, normalize, classify, and assemble every invariant.
pub fn analyze<T: Int>(rule: &WrappingRule) -> Result<HomologyResult<T>, Error> {
    let norm = normalize(rule)?;
    let obs = obstruction(&norm)?;
    let orientable = orientability_by_germs(&norm);
    let solver = orientability_by_solver(rule);
    if solver.is_orientable() != orientable {
        return Err(Error::Inconsistent("orientability deciders disagree".into()));
    }
    let sft: SftPresentation<T> = build_sft(&norm);
    let (dim_s, dim_u) = dimension_groups(&sft)?;
    let h_s = homology_s(orientable, &sft, &obs)?;
    let h_u = homology_u(orientable, &sft, &obs)?;
    let torsion = torsion_report(orientable, &h_s, &h_u)?;
    let cech = cech(rule, &norm, orientable, &h_u[0])?;
    let name = |e| rule.name(e).to_string();
    Ok(HomologyResult {
        edges: rule.names().to_vec(),
        orientable,
        orientation: Orientation::of(rule, &solver),
        power_used: norm.power_used,
        flips: norm.flip_names(),
        a_edge: name(norm.a_edge),
        b_edge: name(norm.b_edge),
        classification: rule
            .edges()
            .map(|e| (name(e), norm.classification[e.0]))
            .collect(),
        w: obs.w.clone(),
        w_star: obs.w_star.clone(),
        sft: SftSummary {
            vertices: sft.vertices,
            edges: sft.edges.len(),
            gamma_s: sft.gamma_s.clone(),
            gamma_u: sft.gamma_u.clone(),
        },
        dim_s,
        dim_u,
        h_s,
        h_u,
        torsion,
        cech,
        conventions: CONVENTIONS,
    })
}

impl<T: Int> std::fmt::Display for HomologyResult<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let list = |v: &[String]| if v.is_empty() { "none".to_string() } else { v.join(", ") };
        writeln!(f, "orientable: {}", self.orientable)?;
        match &self.orientation.flips {
            Some(flips) => writeln!(f, "orientation: {} with flips {{{}}}", self.orientation.kind, flips.join(", "))?,
            None => writeln!(f, "orientation: none")?,
        }
        writeln!(f, "normalized: power {}, flips {{{}}}, a = {}, b = {}", self.power_used, self.flips.join(", "), self.a_edge, self.b_edge)?;
        let classes: Vec<String> = self.classification.iter().map(|(e, c)| format!("{e}: {c:?}")).collect();
        writeln!(f, "classes: {}", classes.join(", "))?;
        writeln!(f, "w: {:?}", self.w)?;
        writeln!(f, "covering shift: {} vertices, {} edges", self.sft.vertices, self.sft.edges)?;
        writeln!(f, "D^s: {}", self.dim_s)?;
        writeln!(f, "D^u: {}", self.dim_u)?;
        for n in 0..2 {
            writeln!(f, "H^s_{n}: {}", self.h_s[n])?;
        }
        for n in 0..2 {
            writeln!(f, "H^u_{n}: {}", self.h_u[n])?;
        }
        writeln!(f, "H^s_N = H^u_N = 0 for N outside {{0, 1}}")?;
        let tor: Vec<String> = self
            .torsion
            .entries
            .iter()
            .map(|e| {
                let parts: Vec<String> = e.torsion.iter().map(|q| format!("Z_{q}")).collect();
                format!("{} has torsion {}", e.group, parts.join(" + "))
            })
            .collect();
        writeln!(f, "torsion: {}", list(&tor))?;
        writeln!(f, "Čech H^0: {}", self.cech.h0)?;
        write!(f, "Čech H^1: {}", self.cech.h1)?;
        if let Some(c) = &self.cech.comparison {
            let verdict = if c.invariants_equal { "same invariants as" } else { "invariants differ from" };
            write!(f, "\nČech H^1 {verdict} H^u_0")?;
        }
        Ok(())
    }
}
