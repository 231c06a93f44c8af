//! Exact construction of Chevalley polytopes for homogeneous spaces `G/P`
//! together with the verification machinery around them: degree formulas,
//! Newton-Okounkov volume tests, integer decomposition checks and Minkowski
//! decompositions.

pub mod error;
pub mod heap;
pub mod linalg;
pub mod polytope;
pub mod repmod;
pub mod rootdata;
pub mod valuation;
pub mod verify;

pub use error::{Error, Result};
pub use heap::{Filter, Heap, WeightedHeap};
pub use polytope::{HRep, LatticePolytope};
pub use repmod::{FWord, ModuleVector, WeightModule};
pub use rootdata::{CartanType, Family, RootDatum, Weight, WeylWord};
pub use valuation::{TermOrder, TorusPolynomial};
