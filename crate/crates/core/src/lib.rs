//! Tangent-space dimensions of equivariant deformations of curves with a
//! p-group action, computed from ramification data, together with the
//! brute-force oracles used to validate them: explicit chain complexes for
//! group homology, truncated Laurent series for Artin-Schreier extensions and
//! their towers, and explicit Artin-Schreier curves with their Riemann-Roch
//! spaces.

pub mod ascurve;
pub mod cover;
pub mod divisors;
pub mod error;
pub mod formulas;
pub mod gf;
pub mod homology;
pub mod localfield;
pub mod ramification;

pub use ascurve::{ASCurve, CrossCheck, JordanDecomposition, OracleReport};
pub use cover::{BranchOrbit, CoverData, CoverJson};
pub use divisors::{DivisorJson, ModuleDecomposition, OrbitDivisor, OrbitLabel, QuotientDivisor};
pub use error::{Error, Result};
pub use formulas::{DimensionReport, HomologyValue};
pub use homology::{AlphaBeta, BetaChoice};
pub use gf::{make_field, FFElem, FiniteField, Matrix};
pub use localfield::LaurentSeries;
pub use ramification::{FiltrationJson, JumpData, RamificationFiltration};
