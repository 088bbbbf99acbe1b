//! Exact computation of Zariski closures of finitely generated matrix
//! semigroups over the rationals, and of the strongest polynomial
//! invariants of affine programs.
//!
//! Everything is computed with exact rational arithmetic; results come
//! with checkable certificates (generator containment plus product
//! stability) whenever they are reported as exact.
//!
//! All public values are immutable after construction and all
//! operations are deterministic, so values can be shared across threads
//! freely; cached Groebner bases are canonical, making concurrent
//! recomputation benign.

pub mod affine;
pub mod bounds;
pub mod components;
pub mod constructible;
pub mod error;
pub mod groebner;
pub mod group;
pub mod ideal;
pub mod lattice;
pub mod linalg;
pub mod matideal;
pub mod matrix;
pub mod monomial;
pub mod pieces;
pub mod poly;
pub mod profiling;
pub mod rat;
pub mod semigroup;
pub mod unipoly;
pub mod vars;

pub use affine::{AffineMap, AffineProgram, InvariantReport};
pub use bounds::{Bounds, Status};
pub use constructible::{BoolOp, Cell, ConstructibleSet, PolyMap, WitnessConfig};
pub use error::{Error, Result};
pub use group::{ClosureResult, GLVariety, RelationLattice};
pub use ideal::{CombineMode, Ideal, QuotientBasis};
pub use matrix::{QMatrix, Subspace, WedgeVector};
pub use monomial::{Monomial, MonomialOrder};
pub use poly::Polynomial;
pub use rat::Rat;
pub use semigroup::{Finiteness, GenGraph, Generators, Scc, SemiClosure};
pub use vars::VarSpace;
