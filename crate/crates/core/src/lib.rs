//! Exact symbolic machinery for radical formulas of the general polynomial
//! equation: cyclotomic scalars, multivariate polynomials with symmetric
//! function tools, permutation characters, radical towers, and the
//! transformations and obstructions built on them.

pub mod cyclotomic;
pub mod formula;
pub mod multipoly;
pub mod obstruction;
pub mod permchar;
pub mod resolvent;
pub mod tower;

pub use cyclotomic::{CycError, CycScalar};
pub use multipoly::{elem_sym, KthRoot, MPoly, Monomial, PolyError};
pub use permchar::{Character, Parity, Perm, PermError};
pub use tower::{Attestation, NonPower, RatFunc, TowerElem, TowerError, TowerSpec};
