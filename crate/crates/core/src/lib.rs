//! Quantum teleportation through two independent non-Markovian
//! amplitude-damping channels.
//!
//! The crate is `no_std` (it needs `alloc`) and carries only the numerics:
//!
//! - [`qmat`]: dense complex matrices of dimension 2, 4 and 8, partial traces
//!   and a Jacobi Hermitian eigen-solver.
//! - [`channels`]: the Lorentzian-bath memory kernel μ(t), amplitude-damping
//!   Kraus pairs, weak measurement, measurement reversal and
//!   environment-assisted post-selection.
//! - [`teleport`]: closed-form teleported states for the bare, WM+QMR and
//!   EAM+QMR protocols, the fidelity, and a brute-force three-qubit circuit
//!   oracle used to check them.
//! - [`metrics`]: trace and Hilbert–Schmidt distances, the statistical speed
//!   family, the Hilbert–Schmidt speed (HSS), the witness χ(t) and the
//!   cumulative non-Markovianity.
//! - [`scenarios`]: time series and parameter sweeps.
//!
//! File formats and the command line live in the `nmteleport` crate.
#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![warn(missing_debug_implementations)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod channels;
mod error;
pub mod metrics;
pub mod qmat;
pub mod scenarios;
pub mod teleport;

pub use error::{Error, Result};
