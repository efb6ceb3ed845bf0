//! The four wrapping rules on a wedge of two circles used throughout the
//! test-suite and documentation.

use crate::rule::{parse_rule, WrappingRule};

pub const F: &str = "edges: a b\na -> a a b\nb -> a b b\n";
pub const G: &str = "edges: a b\na -> a^-1 a^-1 b^-1\nb -> a^-1 b^-1 b^-1\n";
pub const H: &str = "edges: a b\na -> a^-1 b a\nb -> b^-1 a b\n";
pub const K: &str = "edges: a b\na -> b^-1 a a\nb -> a^-1 b b\n";

/// Positively oriented: `a -> aab, b -> abb`.
pub fn f() -> WrappingRule {
    parse_rule(F).expect("fixture")
}

/// Negatively oriented.
pub fn g() -> WrappingRule {
    parse_rule(G).expect("fixture")
}

/// Not orientable.
pub fn h() -> WrappingRule {
    parse_rule(H).expect("fixture")
}

/// Positively oriented once `b` is reversed.
pub fn k() -> WrappingRule {
    parse_rule(K).expect("fixture")
}

pub fn all() -> [(&'static str, WrappingRule); 4] {
    [("f", f()), ("g", g()), ("h", h()), ("k", k())]
}
