//! Exact linear algebra over GF(p): sparse and dense elimination, kernels,
//! rank, and span membership.

mod dense;
mod span;
mod sparse;

pub use dense::{DenseEchelon, DenseMatrix};
pub use span::{KeyedVec, SpanSolver};
pub use sparse::{in_span, EliminationOptions, SparseMatrix};

pub(crate) use dense::{axpy, neg_raw};
