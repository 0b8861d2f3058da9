//! Classical and quantum solvers for the position-dependent-mass oscillator
//! `ẍ − ẋ²/2x + 2ω²x − 1/8x = 0`, with mass `m(x) = a/x`.
//!
//! - [`model`]: parameters, mass and potential profiles, the Hamiltonian.
//! - [`classical`]: trajectories, the closed-form orbit, periods, fixed
//!   points and the linearizing transformation.
//! - [`specfun`]: terminating Kummer series, Laguerre polynomials and
//!   Gauss–Legendre quadrature.
//! - [`quantum`]: the exact spectrum and eigenfunctions.
//! - [`eigensolve`]: finite-difference eigensolvers used to check them.

pub mod classical;
pub mod eigensolve;
pub mod model;
pub mod ode;
pub mod quantum;
pub mod specfun;

pub use classical::{ClassicalError, OrbitSolution, Trajectory};
pub use eigensolve::{EigenError, EigenGrid, EigenResult};
pub use model::{AmbiguityTriple, Branch, ClassicalState, ModelError, ModelParams};
pub use quantum::{QuantumConfig, QuantumError, SpectrumMethod, SpectrumTable, Wavefunction};
pub use specfun::SpecfunError;
