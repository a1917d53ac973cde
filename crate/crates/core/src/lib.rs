//! Weighted blowups of affine schemes, checked by exact graded linear algebra
//! over the rationals.
//!
//! The crate builds extended Rees algebras for weighted centres, computes
//! sheaf cohomology of twists on weighted projective stacks and on weighted
//! blowups by two independent routes (Čech complexes and Koszul rows), and
//! verifies the Hom-vanishing and generation statements behind the
//! semi-orthogonal decomposition of the blowup.

pub mod cohomology;
pub mod complex;
pub mod engine;
pub mod error;
pub mod homology;
pub mod job;
pub mod linalg;
pub mod parse;
pub mod piece;
pub mod poly;
pub mod rees;
pub mod sod;
pub mod ring;
pub mod truncation;

pub use error::{Error, Result};
pub use linalg::{rank_kernel_cokernel, LinearMap, SparseVec};
pub use parse::parse_polynomial;
pub use piece::{graded_piece, ideal_equal_up_to_degree, GradedPieceBasis, PieceDegree};
pub use poly::{Monomial, Polynomial, Rational};
pub use ring::{Degree, GradedRing, Variable};
pub use truncation::{StabilizedDims, Truncation, Verdict};

/// Map over independent work items, in parallel when the `parallel` feature
/// is on. Output order always follows input order.
pub(crate) fn par_map<T, R, F>(items: Vec<T>, f: F) -> Vec<R>
where
    T: Send,
    R: Send,
    F: Fn(T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.into_iter().map(f).collect()
    }
}
