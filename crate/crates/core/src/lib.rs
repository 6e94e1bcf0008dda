//! Numerical ingredients of the asymmetric two-ball problem for the
//! clamped plate.
//!
//! The crate is `no_std` (with `alloc`) and purely computational:
//!
//! - [`special`]: `J_ν`, `I_ν`, their order ratios and the radial functions
//!   `f_ν`, `g_ν`, `S_ν` built from them.
//! - [`roots`]: Bessel zeros, `k_ν`, the thresholds `a_I`, `a_S`, the
//!   eigenvalue branch `k(a)` and `μ(a)`, all as [`DirectedValue`]
//!   enclosures.
//! - [`two_ball`]: constraint geometry `(a, b, K)`, the secular function
//!   `F_ν(k, a)` and the split of `∂_a F_ν`.
//! - [`certify`]: the four directed inequalities, the zigzag search and the
//!   table reproductions.
//! - [`rearrange`]: signed Schwarz/Talenti rearrangement of step functions
//!   and the radial comparison check `κ²v ≥ u*` on annuli.
//!
//! File formats and the command line live in the `platecert` companion
//! crate.
#![no_std]
#![deny(unsafe_code)]
// `!(x > 0.0)` is how NaN gets rejected along with the other bad values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod certify;
mod directed;
mod error;
pub mod rearrange;
pub mod roots;
pub mod special;
pub mod two_ball;

pub use directed::DirectedValue;
pub use error::{Error, Result};
pub use special::{DimensionParams, ExtendedReal};
