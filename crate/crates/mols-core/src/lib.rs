//! Mutually orthogonal Latin squares from linear maps on small finite fields,
//! together with the transformation algebra that permutes them and the
//! Pauli-monomial / mutually-unbiased-bases view of the same data.
//!
//! The crate is organized bottom-up:
//! - [`matrix`]: exact linear algebra over Z_p,
//! - [`field`]: GF(p^n) with exponent labels, traces, and self-dual bases,
//! - [`curves`]: linear maps as adjacency matrices over the self-dual frame,
//! - [`latin`]: Latin squares, orthogonality, permutation actions, minisquares,
//! - [`transforms`]: CNOT and single-qudit operations acting on curves and squares,
//! - [`monomials`]: Pauli monomials, commuting sets, and numeric unbiasedness checks.

pub mod curves;
pub mod field;
pub mod fixtures;
pub mod latin;
pub mod matrix;
pub mod monomials;
pub mod numeric;
pub mod transforms;

pub use field::{Field, FieldDescription, FieldElement, FieldError, FieldSpec, SVector, SelfDualBasis};
pub use matrix::Mat;
