//! Edge-end germs at the vertex and the dynamics the rule induces on them.
//!
//! Each edge has two ends at the single vertex `p`: the initial end and the
//! terminal end. The map sends a small one-sided neighbourhood of an end
//! into the end of whichever edge the first (or last) letter of the wrapping
//! word traverses.

use std::collections::BTreeSet;
use std::fmt;

use crate::rule::{EdgeId, Letter, Sign, WrappingRule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum End {
    Init,
    Term,
}

impl End {
    pub fn opposite(self) -> End {
        match self {
            End::Init => End::Term,
            End::Term => End::Init,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Germ {
    pub edge: EdgeId,
    pub end: End,
}

impl Germ {
    pub fn init(edge: usize) -> Self {
        Germ {
            edge: EdgeId(edge),
            end: End::Init,
        }
    }

    pub fn term(edge: usize) -> Self {
        Germ {
            edge: EdgeId(edge),
            end: End::Term,
        }
    }

    /// Dense index in `0..2m`.
    pub fn index(self) -> usize {
        2 * self.edge.0 + usize::from(self.end == End::Term)
    }

    pub fn from_index(i: usize) -> Self {
        Germ {
            edge: EdgeId(i / 2),
            end: if i % 2 == 0 { End::Init } else { End::Term },
        }
    }

    /// The same germ seen after the orientation of its edge is reversed.
    pub fn reoriented(self) -> Self {
        Germ {
            edge: self.edge,
            end: self.end.opposite(),
        }
    }

    pub fn label(self, rule: &WrappingRule) -> String {
        let suffix = match self.end {
            End::Init => "+",
            End::Term => "-",
        };
        format!("{}{}", rule.name(self.edge), suffix)
    }
}

impl fmt::Display for Germ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.end {
            End::Init => write!(f, "Init e{}", self.edge.0),
            End::Term => write!(f, "Term e{}", self.edge.0),
        }
    }
}

/// Germ at which a letter starts: `(k,+)` leaves through the initial end of
/// `k`, `(k,-)` through its terminal end.
pub fn start_germ(l: Letter) -> Germ {
    Germ {
        edge: l.edge,
        end: match l.sign {
            Sign::Pos => End::Init,
            Sign::Neg => End::Term,
        },
    }
}

/// Germ at which a letter arrives.
pub fn end_germ(l: Letter) -> Germ {
    start_germ(l.inverse())
}

/// A total function on the `2m` germs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GermMap {
    image: Vec<Germ>,
}

impl GermMap {
    /// Germ map of a rule whose words are all nonempty.
    pub fn of_rule(rule: &WrappingRule) -> Option<GermMap> {
        let mut image = Vec::with_capacity(2 * rule.edge_count());
        for w in rule.words() {
            image.push(start_germ(w.first()?));
            image.push(end_germ(w.last()?));
        }
        Some(GermMap { image })
    }

    pub fn identity(m: usize) -> GermMap {
        GermMap {
            image: (0..2 * m).map(Germ::from_index).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn apply(&self, g: Germ) -> Germ {
        self.image[g.index()]
    }

    pub fn apply_n(&self, mut g: Germ, n: usize) -> Germ {
        for _ in 0..n {
            g = self.apply(g);
        }
        g
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &GermMap) -> GermMap {
        GermMap {
            image: other.image.iter().map(|&g| self.apply(g)).collect(),
        }
    }

    pub fn pow(&self, n: usize) -> GermMap {
        let mut acc = GermMap::identity(self.len() / 2);
        for _ in 0..n {
            acc = self.compose(&acc);
        }
        acc
    }

    pub fn image(&self) -> BTreeSet<Germ> {
        self.image.iter().copied().collect()
    }

    /// The germ map of the same rule after reversing the edges in `flips`.
    pub fn conjugate_by_flips(&self, flips: &[EdgeId]) -> GermMap {
        let flipped = |g: Germ| {
            if flips.contains(&g.edge) {
                g.reoriented()
            } else {
                g
            }
        };
        GermMap {
            image: (0..self.len())
                .map(|i| flipped(self.apply(flipped(Germ::from_index(i)))))
                .collect(),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (Germ, Germ)> + '_ {
        self.image
            .iter()
            .enumerate()
            .map(|(i, &g)| (Germ::from_index(i), g))
    }
}

/// Germ map of a rule; `None` if some word is empty.
pub fn germ_map(rule: &WrappingRule) -> Option<GermMap> {
    GermMap::of_rule(rule)
}
