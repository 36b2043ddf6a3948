//! Exact arithmetic for the divided-power superalgebra O(n,n;t), the Witt
//! superalgebra W(n,n;t) and the even part of the odd Hamiltonian
//! superalgebra HO(n,n;t) over GF(p), together with graded derivation spaces.
#![no_std]

extern crate alloc;

pub mod derivations;
pub mod error;
pub mod field;
pub mod ho;
pub mod lie;
pub mod linalg;
pub mod subspace;
pub mod superalgebra;
pub mod witt;

pub use error::{AlgebraError, Result};
pub use field::{Fp, PrimeField};
pub use lie::{Coords, DegreeLayout, GradedLieAlgebra, GradedModule, StructureConstants};
pub use subspace::GradedSubspace;
pub use superalgebra::{AlgebraParams, Monomial, Parity, SuperPoly};
pub use witt::{FieldTerm, VectorField};
