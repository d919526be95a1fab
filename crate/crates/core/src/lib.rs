//! p-adic harmonic analysis on finite quotient grids, with solvers for the
//! 1D and 2D p-adic Jackiw-Rebbi model.
//!
//! The crate is layered bottom-up:
//!
//! - [`padic`]: exact p-adic scalars, the additive character as an exact
//!   root of unity, Legendre symbol and the quadratic sign character;
//! - [`grid`]: the finite quotient p^{-N}Z_p / p^M Z_p, ball indicators,
//!   Haar integration, and the ball-supported character waves Θ_{r,n,j};
//! - [`fourier`]: the transform as an exact size-p^{N+M} DFT, naive and
//!   radix-p fast paths;
//! - [`operators`]: the twisted Taibleson-Vladimirov operator in spectral
//!   and kernel form, with the kernel form as ground-truth oracle;
//! - [`jackiw_rebbi`]: mass profiles, interface zero modes, bulk states and
//!   the 2D chiral edge construction;
//! - [`export`]: deterministic CSV/JSON output.

pub mod error;
pub mod export;
pub mod fourier;
pub mod grid;
pub mod jackiw_rebbi;
pub mod operators;
pub mod padic;

pub use error::{Error, Result};
pub use grid::{Ball, GridFunction, GridSpec, WaveletIndex};
pub use jackiw_rebbi::{
    BoundState, EdgeState2D, MassProfile, PhysicalParams, SpinorField, SpinorField2D,
};
pub use operators::OpMode;
pub use padic::{PAdicScalar, Phase, PrimeContext, Sign};
