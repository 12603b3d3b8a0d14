//! Exact computations with modules over the rational Weyl algebra.
//!
//! Operators are finite sums `c * x^a * dx^b` kept in normal order (all `x`
//! to the left of all `dx`).  Matrices act on row vectors from the right, so a
//! presentation `D^r / D*{L_1..L_k}` is a list of row vectors and a module map
//! is the matrix `A` with `v -> v*A`.
//!
//! ```
//! use dmod::weyl::{Ctx, Weyl};
//! let ctx = Ctx::std(1);
//! let x = Weyl::x(&ctx, 0);
//! let d = Weyl::d(&ctx, 0);
//! assert_eq!((&d * &x).to_string(), "x1*dx1 + 1");
//! ```
#![no_std]

extern crate alloc;

pub mod bfun;
pub mod error;
pub mod groebner;
pub mod homology;
pub mod isomorphism;
pub mod qlinalg;
pub mod restriction;
pub mod solutions;
pub mod text;
pub mod weyl;

pub use error::{Error, Result};
pub use num_bigint::BigInt;
pub use num_rational::BigRational as Q;

pub(crate) mod util;
