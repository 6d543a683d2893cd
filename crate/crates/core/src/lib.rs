//! Maximum subspaces of `F_2^n` avoiding Hamming-weight annuli, and the
//! linear classifiers they induce.
//!
//! * [`gf2`]: packed vectors, matrices and canonical echelon bases.
//! * [`sets`]: weight sets, annuli, symmetric classes and sumsets.
//! * [`solver`]: exact `k(a,b,n)` / `m*(a,b,n)` search, tables and relation checks.
//! * [`constructions`]: greedy, zero-padding, parity and block constructions.
//! * [`bounds`]: counting bounds and entropy rates.
//! * [`classify`]: building and running linear classifiers.
//! * [`io`]: the plain-text matrix format.

pub mod bounds;
pub mod classify;
pub mod constructions;
pub mod error;
pub mod gf2;
pub mod io;
pub mod sets;
pub mod solver;

pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitVector, EchelonBasis, DEFAULT_ENUMERATION_CAP};
pub use sets::{Annulus, ClassPair, SymmetricClass, WeightSet};
pub use solver::{m_star, max_avoiding_subspace, verify_avoiding, SearchConfig, SearchResult, SearchStatus, Solver};
