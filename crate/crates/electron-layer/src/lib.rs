//! Spectral laboratory for the one-dimensional Vlasov-Poisson electron layer.
//!
//! An electron layer is a phase-space patch bounded by two graphs
//! `v = -a + eps*r_-(t,x)` and `v = a + eps*r_+(t,x)` over the circle. The
//! boundary deformations `r = (r_+, r_-)` obey a quasilinear transport system
//! with a nonlocal electrostatic coupling; this crate provides
//!
//! * spectral grids and derivative calculus on `T` and `T^d x T` ([`spectral`]),
//! * the exact linear theory at the flat strip: frequencies `Omega_j(a)`,
//!   transfer matrices, symbol expansions, closed-form linear waves
//!   ([`dispersion`]),
//! * the nonlinear vector field, its Hamiltonian, and the bridge to the
//!   electronic Euler-Poisson system with cubic pressure ([`dynamics`]),
//! * exponential (Lawson) time integration with conservation diagnostics
//!   ([`simulator`]),
//! * divisor audits: Diophantine, transport and Melnikov conditions,
//!   transversality estimates and Cantor-set measure scans ([`resonance`]),
//! * Newton-Galerkin continuation of periodic and quasi-periodic traveling
//!   waves ([`wavesolver`]),
//! * a truncated-operator laboratory: Floquet spectra, transport constants,
//!   block decoupling, and eigenvalue-asymptotics audits ([`operlab`]).
//!
//! The `elab` binary exposes every pipeline as a batch subcommand; the
//! `examples/` directory holds one runnable example per capability.

pub mod cli;
pub mod dispersion;
pub mod dynamics;
pub mod error;
pub mod operlab;
pub mod resonance;
pub mod simulator;
pub mod spectral;
pub mod wavesolver;

pub use dispersion::ModelParams;
pub use error::{Error, Result};
pub use spectral::{GridSpec, PairField, RealField1D};
