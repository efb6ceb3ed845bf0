//! Signed words and wrapping rules on a wedge of circles.
//!
//! A wrapping rule assigns to every oriented edge a word in the edges and
//! their inverses, describing how the self-map wraps that edge around the
//! wedge. Words are combinatorial itineraries and are never free-reduced.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;

use crate::error::{ParseError, ParseErrorKind};
use crate::matrix::Matrix;
use crate::scalar::Int;

/// Dense index of an edge, `0..m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
#[serde(transparent)]
pub struct EdgeId(pub usize);

impl EdgeId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Pos => 1,
            Sign::Neg => -1,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Pos
        } else {
            Sign::Neg
        }
    }
}

/// One symbol `e` or `e^-1` of a wrapping word.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub edge: EdgeId,
    pub sign: Sign,
}

impl Letter {
    pub fn pos(edge: usize) -> Self {
        Self {
            edge: EdgeId(edge),
            sign: Sign::Pos,
        }
    }

    pub fn neg(edge: usize) -> Self {
        Self {
            edge: EdgeId(edge),
            sign: Sign::Neg,
        }
    }

    pub fn inverse(self) -> Self {
        Self {
            edge: self.edge,
            sign: self.sign.flip(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SignedWord {
    letters: Vec<Letter>,
}

impl SignedWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        Self { letters }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    /// Formal inverse: reverse the letters and flip every sign.
    pub fn inverse(&self) -> SignedWord {
        SignedWord {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn concat(&self, other: &SignedWord) -> SignedWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        SignedWord { letters }
    }

    pub fn all_positive(&self) -> bool {
        self.letters.iter().all(|l| l.sign == Sign::Pos)
    }
}

impl FromIterator<Letter> for SignedWord {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        SignedWord {
            letters: iter.into_iter().collect(),
        }
    }
}

/// Formal inverse of a word.
pub fn invert_word(w: &SignedWord) -> SignedWord {
    w.inverse()
}

/// The map `f~ : E -> E*` together with the edge names.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WrappingRule {
    names: Vec<String>,
    words: Vec<SignedWord>,
}

fn valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl WrappingRule {
    /// Builds a rule, checking names and that every letter refers to a
    /// declared edge.
    pub fn new(names: Vec<String>, words: Vec<SignedWord>) -> Result<Self, crate::Error> {
        if names.is_empty() {
            return Err(crate::Error::InvalidRule("empty edge list".into()));
        }
        if names.len() != words.len() {
            return Err(crate::Error::InvalidRule(format!(
                "{} edges but {} words",
                names.len(),
                words.len()
            )));
        }
        for (i, n) in names.iter().enumerate() {
            if !valid_name(n) || n == "edges" {
                return Err(crate::Error::InvalidRule(format!("invalid edge name `{n}`")));
            }
            if names[..i].contains(n) {
                return Err(crate::Error::InvalidRule(format!("duplicate edge `{n}`")));
            }
        }
        let m = names.len();
        if words.iter().flat_map(|w| w.letters()).any(|l| l.edge.0 >= m) {
            return Err(crate::Error::InvalidRule("letter refers to an unknown edge".into()));
        }
        Ok(Self { names, words })
    }

    /// Convenience constructor for tests and examples: `words[i]` is a
    /// space-separated list of letters such as `"a^-1 b a"`.
    pub fn from_strs(names: &[&str], words: &[&str]) -> Result<Self, crate::Error> {
        let mut text = format!("edges: {}\n", names.join(" "));
        for (n, w) in names.iter().zip(words) {
            text.push_str(&format!("{n} -> {w}\n"));
        }
        Ok(parse_rule(&text)?)
    }

    pub fn edge_count(&self) -> usize {
        self.names.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.names.len()).map(EdgeId)
    }

    pub fn name(&self, e: EdgeId) -> &str {
        &self.names[e.0]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        self.names.iter().position(|n| n == name).map(EdgeId)
    }

    pub fn word(&self, e: EdgeId) -> &SignedWord {
        &self.words[e.0]
    }

    pub fn words(&self) -> &[SignedWord] {
        &self.words
    }

    pub fn word_lengths(&self) -> Vec<usize> {
        self.words.iter().map(SignedWord::len).collect()
    }

    /// Image of a word under the rule: positive letters contribute their
    /// edge's word, negative letters its inverse.
    pub fn substitute(&self, w: &SignedWord) -> SignedWord {
        let mut out = Vec::new();
        for l in w.letters() {
            let image = &self.words[l.edge.0];
            match l.sign {
                Sign::Pos => out.extend_from_slice(image.letters()),
                Sign::Neg => out.extend(image.letters().iter().rev().map(|x| x.inverse())),
            }
        }
        SignedWord::new(out)
    }

    /// Rule of `other ∘ self`: each word of `self` pushed through `other`.
    pub fn then(&self, other: &WrappingRule) -> WrappingRule {
        assert_eq!(self.edge_count(), other.edge_count());
        WrappingRule {
            names: self.names.clone(),
            words: self.words.iter().map(|w| other.substitute(w)).collect(),
        }
    }

    /// The rule of `f^n`.
    pub fn power(&self, n: u32) -> WrappingRule {
        assert!(n >= 1, "rule power must be positive");
        let mut acc = self.clone();
        for _ in 1..n {
            acc = acc.then(self);
        }
        acc
    }

    /// Replaces the oriented edge `e` by its reversal, keeping its name and
    /// index.
    pub fn reverse_edge(&self, e: EdgeId) -> WrappingRule {
        self.reverse_edges(&[e])
    }

    /// Reverses every edge in `flips` at once.
    pub fn reverse_edges(&self, flips: &[EdgeId]) -> WrappingRule {
        let mut flipped = vec![false; self.edge_count()];
        for e in flips {
            flipped[e.0] = !flipped[e.0];
        }
        let relabel = |l: &Letter| Letter {
            edge: l.edge,
            sign: if flipped[l.edge.0] { l.sign.flip() } else { l.sign },
        };
        let words = self
            .words
            .iter()
            .enumerate()
            .map(|(i, w)| {
                let w: SignedWord = w.letters().iter().map(relabel).collect();
                if flipped[i] {
                    w.inverse()
                } else {
                    w
                }
            })
            .collect();
        WrappingRule {
            names: self.names.clone(),
            words,
        }
    }

    /// `M[i][k]` = number of occurrences of edge `k` (either sign) in the
    /// word of edge `i`.
    pub fn unsigned_matrix_in<T: Int>(&self) -> Matrix<T> {
        self.count_matrix(|_| T::one())
    }

    /// `S[i][k]` = signed number of occurrences of edge `k` in the word of
    /// edge `i`.
    pub fn signed_matrix_in<T: Int>(&self) -> Matrix<T> {
        self.count_matrix(|s| T::from_i64_exact(s.as_i64()))
    }

    pub fn unsigned_matrix(&self) -> Matrix<BigInt> {
        self.unsigned_matrix_in()
    }

    pub fn signed_matrix(&self) -> Matrix<BigInt> {
        self.signed_matrix_in()
    }

    fn count_matrix<T: Int>(&self, weight: impl Fn(Sign) -> T) -> Matrix<T> {
        let m = self.edge_count();
        let mut out: Matrix<T> = Matrix::zeros(m, m);
        for (i, w) in self.words.iter().enumerate() {
            for l in w.letters() {
                out[(i, l.edge.0)] = out[(i, l.edge.0)].clone() + weight(l.sign);
            }
        }
        out
    }

    pub fn format_word(&self, w: &SignedWord) -> String {
        w.letters()
            .iter()
            .map(|l| match l.sign {
                Sign::Pos => self.names[l.edge.0].clone(),
                Sign::Neg => format!("{}^-1", self.names[l.edge.0]),
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Renders a rule in the DSL accepted by [`parse_rule`].
pub fn format_rule(rule: &WrappingRule) -> String {
    let mut out = format!("edges: {}\n", rule.names.join(" "));
    for e in rule.edges() {
        let w = rule.format_word(rule.word(e));
        if w.is_empty() {
            out.push_str(&format!("{} ->\n", rule.name(e)));
        } else {
            out.push_str(&format!("{} -> {}\n", rule.name(e), w));
        }
    }
    out
}

impl fmt::Display for WrappingRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, e) in self.edges().enumerate() {
            if k > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{} -> {}", self.name(e), self.format_word(self.word(e)))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Name(String),
    Arrow,
    Inverse,
    Semi,
    Newline,
    EdgesKw,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn tokenize(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let content = raw.split('#').next().unwrap_or("");
        let chars: Vec<char> = content.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let column = i + 1;
            let err = |kind| ParseError { line, column, kind };
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_alphabetic() {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let name: String = chars[start..i].iter().collect();
                if name == "edges" && i < chars.len() && chars[i] == ':' {
                    i += 1;
                    out.push(Spanned { tok: Tok::EdgesKw, line, column });
                } else {
                    out.push(Spanned { tok: Tok::Name(name), line, column });
                }
            } else if c == '-' {
                if chars.get(i + 1) == Some(&'>') {
                    out.push(Spanned { tok: Tok::Arrow, line, column });
                    i += 2;
                } else {
                    return Err(err(ParseErrorKind::UnexpectedChar('-')));
                }
            } else if c == '^' {
                let rest: String = chars[i + 1..].iter().take(2).collect();
                let followed_by_digit = chars.get(i + 3).is_some_and(|d| d.is_ascii_digit());
                if rest == "-1" && !followed_by_digit {
                    out.push(Spanned { tok: Tok::Inverse, line, column });
                    i += 3;
                } else {
                    return Err(err(ParseErrorKind::MalformedExponent));
                }
            } else if c == ';' {
                out.push(Spanned { tok: Tok::Semi, line, column });
                i += 1;
            } else {
                return Err(err(ParseErrorKind::UnexpectedChar(c)));
            }
        }
        out.push(Spanned {
            tok: Tok::Newline,
            line,
            column: chars.len() + 1,
        });
    }
    Ok(out)
}

/// Parses the wrapping-rule DSL:
///
/// ```text
/// edges: a b
/// a -> a a b
/// b -> a b b      # comments run to end of line
/// ```
///
/// Inverses are written `x^-1`; a rule line may also end with `;`.
pub fn parse_rule(text: &str) -> Result<WrappingRule, ParseError> {
    let toks = tokenize(text)?;
    let mut pos = 0;
    let eof_pos = toks.last().map_or((1, 1), |t| (t.line, t.column));
    let at = |pos: usize| toks.get(pos);
    let err_at = |pos: usize, kind| {
        let (line, column) = toks.get(pos).map_or(eof_pos, |t| (t.line, t.column));
        ParseError { line, column, kind }
    };

    while at(pos).is_some_and(|t| t.tok == Tok::Newline) {
        pos += 1;
    }
    match at(pos) {
        Some(Spanned { tok: Tok::EdgesKw, .. }) => pos += 1,
        _ => return Err(err_at(pos, ParseErrorKind::MissingHeader)),
    }
    let header = pos;
    let mut names: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    while let Some(t) = at(pos) {
        match &t.tok {
            Tok::Name(n) => {
                if index.contains_key(n) {
                    return Err(err_at(pos, ParseErrorKind::DuplicateEdge(n.clone())));
                }
                index.insert(n.clone(), names.len());
                names.push(n.clone());
                pos += 1;
            }
            Tok::Newline => break,
            _ => return Err(err_at(pos, ParseErrorKind::UnexpectedToken)),
        }
    }
    if names.is_empty() {
        return Err(err_at(header, ParseErrorKind::EmptyEdgeList));
    }

    let mut words: Vec<Option<SignedWord>> = vec![None; names.len()];
    loop {
        while at(pos).is_some_and(|t| matches!(t.tok, Tok::Newline | Tok::Semi)) {
            pos += 1;
        }
        let Some(t) = at(pos) else { break };
        let head = match &t.tok {
            Tok::Name(n) => n.clone(),
            _ => return Err(err_at(pos, ParseErrorKind::UnexpectedToken)),
        };
        let Some(&edge) = index.get(&head) else {
            return Err(err_at(pos, ParseErrorKind::UnknownEdge(head)));
        };
        if words[edge].is_some() {
            return Err(err_at(pos, ParseErrorKind::DuplicateRule(head)));
        }
        pos += 1;
        match at(pos) {
            Some(Spanned { tok: Tok::Arrow, .. }) => pos += 1,
            _ => return Err(err_at(pos, ParseErrorKind::ExpectedArrow)),
        }
        let mut letters = Vec::new();
        while let Some(t) = at(pos) {
            match &t.tok {
                Tok::Name(n) => {
                    let Some(&k) = index.get(n) else {
                        return Err(err_at(pos, ParseErrorKind::UnknownEdge(n.clone())));
                    };
                    pos += 1;
                    let sign = if at(pos).is_some_and(|t| t.tok == Tok::Inverse) {
                        pos += 1;
                        Sign::Neg
                    } else {
                        Sign::Pos
                    };
                    letters.push(Letter { edge: EdgeId(k), sign });
                }
                Tok::Newline | Tok::Semi => break,
                Tok::Inverse => return Err(err_at(pos, ParseErrorKind::MalformedExponent)),
                _ => return Err(err_at(pos, ParseErrorKind::UnexpectedToken)),
            }
        }
        words[edge] = Some(SignedWord::new(letters));
    }

    let mut out = Vec::with_capacity(names.len());
    for (n, w) in names.iter().zip(words) {
        match w {
            Some(w) => out.push(w),
            None => {
                let (line, column) = eof_pos;
                return Err(ParseError {
                    line,
                    column,
                    kind: ParseErrorKind::MissingRule(n.clone()),
                });
            }
        }
    }
    Ok(WrappingRule { names, words: out })
}
