//! Positive definiteness and semidefiniteness of 4th-order symmetric tensors.
//!
//! Exact decisions use rational arithmetic throughout: binary quartics are
//! settled by a closed-form discriminant criterion, cyclic symmetric ternary
//! tensors by interval rules on their off-diagonal parameters. Everything else
//! goes to a floating-point sphere minimizer whose negative certificates are
//! re-checked exactly.

pub mod binary;
pub mod cyclic;
pub mod error;
pub mod exec;
pub mod inequality;
pub mod oracle;
pub mod scalar;
pub mod tensor;
pub mod verdict;

pub use binary::BinaryQuartic;
pub use cyclic::{CyclicTernary, RelaxedCyclicTernary};
pub use error::{Error, Result};
pub use inequality::{InequalityReport, WeightedInequality};
pub use oracle::{OracleConfig, OracleResult};
pub use scalar::Rational;
pub use tensor::{CanonicalIndex, ExactTensor, RankOneTensor4, SymmetricTensor4};
pub use verdict::{Class, Prefilter, Rule, Verdict, Witness};
