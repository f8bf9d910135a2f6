//! Oscillator-like Hamiltonians built from affine deformations of the harmonic
//! ladder pair, with closed-form eigenfunctions and squeezing/coherence
//! analysis of the resulting states.
//!
//! The deformation replaces the usual pair (a, a†) by
//!
//! ```text
//! b  = (1 + c1)·a + c2·a† + c3
//! b⁺ = c4·a + (1 + c5)·a† + c6
//! ```
//!
//! subject to the canonical constraint c1 + c5 + c1·c5 − c2·c4 = 0, which keeps
//! [b, b⁺] = 1. The symmetrized product H = ½{b, b⁺} is then a second-order
//! differential operator whose bound states are Gaussian × Hermite waveforms
//! with the unshifted spectrum E_n = n + ½, even when H is not self-adjoint.
//!
//! Module map:
//! - [`operator_algebra`]: parameter sets, ladder operators, the coefficient
//!   map to (A..F), named families of exactly solvable deformations.
//! - [`special_functions`]: Hermite and generalized Laguerre evaluation plus
//!   the parity-split normalization series used by the mixed family.
//! - [`quadrature`]: Gauss–Hermite rules and Gaussian-envelope integrals; the
//!   numerical oracle everything else is checked against.
//! - [`eigensystem`]: admissibility, the (p, q) change of variable, normalized
//!   eigenfunctions, and ladder-operator application with least-squares fits.
//! - [`moments`]: position/momentum moments by quadrature and by closed form,
//!   squeezing and coherence flags, threshold predictions.
//! - [`validator`]: Hamiltonian residuals, Gram matrices, and the seeded
//!   randomized property suite.

pub mod eigensystem;
mod error;
pub mod moments;
pub mod operator_algebra;
pub mod quadrature;
pub mod special_functions;
pub mod validator;

pub use error::{Error, Result};
pub use operator_algebra::{DeformationParams, Family, HamiltonianCoeffs, LadderOperator};
