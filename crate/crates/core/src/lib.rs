//! Numerical engine for quantum dynamics driven by stochastic non-Hermitian
//! Hamiltonians.
//!
//! The crate covers the noise-averaged "anti-dephasing" master equation, its
//! nonlinear trace-preserving form, Liouvillian spectral analysis, three
//! propagation back-ends (Itô trajectories, RK4 and exponential propagation)
//! and a complete treatment of the stochastic dissipative qubit.

pub mod dynamics;
pub mod error;
pub mod liouvillian;
pub mod model;
pub mod observables;
pub mod operator;
pub mod sdq;
pub mod state;
pub mod tol;

pub use error::{Error, Result};
pub use liouvillian::{SpectralDecomposition, Superoperator};
pub use model::StochNhModel;
pub use operator::{ComplexMatrix, VectorizedOperator, C64};
pub use sdq::SdqParams;
pub use state::DensityMatrix;
