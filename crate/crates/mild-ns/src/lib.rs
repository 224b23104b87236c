//! Numerical laboratory for mild solutions of the Navier-Stokes integral
//! equation `u = S[f] - B[u,u]` in subcritical Lorentz spaces, on a periodic
//! box standing in for R^n.
//!
//! The crate provides, layer by layer:
//!
//! - [`grid`], [`spectral`], [`initial`]: sampled fields, FFTs, the Leray
//!   projection and divergence-free initial data;
//! - [`lorentz`]: distribution function, decreasing rearrangement, maximal
//!   function, Lorentz quasinorms/norms and interpolation checks, exact on
//!   step functions;
//! - [`kernels`]: heat and Oseen kernels evaluated from their Fourier
//!   multipliers, with pointwise-decay, L^{p,1} and semigroup certification;
//! - [`duhamel`]: the heat map S, the time integral A, the bilinear map
//!   `B[u,v] = A[u (x) v]` with exact exponential time integration, and the
//!   J/K/L path-space norms;
//! - [`constants`]: the explicit admissible constants (beta, gamma, alpha,
//!   delta, eta) entering the existence criterion;
//! - [`solver`]: existence horizon, Picard iteration with measured
//!   contraction, semigroup continuation and the blowup-rate monitor;
//! - [`regularity`]: Hoelder quotients and continuity moduli of computed
//!   trajectories;
//! - [`cli`]: batch subcommands emitting deterministic CSV/JSON/SVG artifacts.
//!
//! See the `examples/` directory for one runnable example per capability;
//! `examples/taylor_green.rs` is the natural starting point.

// Guards like `!(t > 0.0)` are deliberate: they reject NaN along with the
// out-of-domain values. Indexed loops over small per-axis arrays are the
// house style for the mode arithmetic.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod constants;
pub mod duhamel;
pub mod error;
pub mod estimates;
pub mod grid;
pub mod initial;
pub mod kernels;
pub mod lorentz;
pub mod quadrature;
pub mod regularity;
pub mod solver;
pub mod spectral;

pub use error::{Error, Result};
pub use grid::{Field, Grid};
pub use initial::InitialData;
pub use lorentz::{LorentzIndex, Rearrangement};
pub use spectral::SpectralField;
