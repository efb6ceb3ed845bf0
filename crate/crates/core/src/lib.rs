//! Homology of one-dimensional generalized solenoids presented by signed
//! wrapping rules on a wedge of circles.
//!
//! Every algebraic routine is generic over an exact integer type (see
//! [`Int`]); the aliases below fix it to [`BigInt`], which is what the
//! analysis pipeline uses since matrix powers grow exponentially.

pub mod abelian;
pub mod error;
pub mod fixtures;
pub mod germ;
pub mod homology;
pub mod matrix;
pub mod normal;
pub mod rule;
pub mod scalar;
pub mod selfcheck;
mod ser;
pub mod validate;

pub use num_bigint::BigInt;

pub use error::{Error, ParseError, ParseErrorKind};
pub use germ::{germ_map, End, Germ, GermMap};
pub use homology::{analyze, HomologyResult};
pub use matrix::Matrix;
pub use rule::{format_rule, invert_word, parse_rule, EdgeId, Letter, Sign, SignedWord, WrappingRule};
pub use scalar::Int;
pub use normal::{normalize, EdgeClass, NormalizedRule, ObstructionData, OrientationSolution};
pub use validate::{validate, ValidationReport};

pub type IntMatrix = Matrix<BigInt>;
pub type StationaryLimitGroup = abelian::StationaryLimit<BigInt>;
pub type GroupDescription = abelian::GroupDescription<BigInt>;
