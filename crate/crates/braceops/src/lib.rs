//! Exact computations in the braces operad `Br`.
//!
//! Trees, the signed differential and its transpose, operadic insertion,
//! the Gerstenhaber comparison map, the shuffle model of the dual complex,
//! sparse rational linear algebra, and the verification suites built on them.
//!
//! ```
//! use braceops::{BraceTree, sign::delta};
//!
//! let t: BraceTree = "(r (1 (2)))".parse().unwrap();
//! let d = delta(&t);
//! assert_eq!(d.len(), 2);
//! ```

mod arena;
pub mod calibration;
pub mod cohomology;
pub mod expr;
pub mod fixtures;
pub mod linalg;
pub mod operad;
pub mod report;
pub mod shuffle;
pub mod sign;
pub mod tree;
pub mod vector;

pub use linalg::{Echelon, SparseMatrix, SparseVec};
pub use operad::{GerMonomial, Permutation};
pub use sign::SignConvention;
pub use tree::{BraceTree, Sector};
pub use vector::{TreeVector, Q};
