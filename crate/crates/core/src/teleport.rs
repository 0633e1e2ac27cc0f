//! Teleported output states and fidelity.
//!
//! Every resource state met here is an X-state: populations on the four
//! computational basis states plus a real `|00⟩⟨11|` coherence. Standard
//! teleportation through such a resource sends the `|0⟩⟨0|` weight of the
//! input to the "even" block {00, 11} and the off-diagonal to
//! `coherence · sinθ · e^{−iφ}`, which is what the closed forms below use.
//! [`teleport_oracle`] runs the full three-qubit circuit instead.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use crate::channels::{
    amplitude_damping_kraus, apply_two_qubit_channel, bell_state, postselect_local, qmr_kraus,
    weak_measurement_kraus, DampedBell, EamBranch, WeakMeasuredDamped,
};
use crate::error::check_range;
use crate::qmat::{
    gates, kron, matmul, partial_trace_matrix, Complex, ComplexMatrix, DensityMatrix, NORM_FLOOR,
    ZERO,
};
use crate::{Error, Result};
// Provides the float methods on targets without them in `core`.
#[allow(unused_imports)]
use num_traits::Float;

/// `cos(θ/2)|0⟩ + sin(θ/2) e^{iφ}|1⟩` with θ ∈ [0, π], φ ∈ [0, 2π).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputState {
    theta: f64,
    phi: f64,
}

impl InputState {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        let theta = check_range("theta", theta, 0.0, PI)?;
        if !(phi.is_finite() && (0.0..TAU).contains(&phi)) {
            return Err(Error::OutOfRange {
                name: "phi",
                value: phi,
                min: 0.0,
                max: TAU,
            });
        }
        Ok(Self { theta, phi })
    }

    /// Same as [`InputState::new`] but reduces φ modulo 2π first.
    pub fn wrapped(theta: f64, phi: f64) -> Result<Self> {
        let mut phi = phi - TAU * (phi / TAU).floor();
        if phi >= TAU {
            phi = 0.0;
        }
        Self::new(theta, phi)
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn ket(&self) -> [Complex; 2] {
        let (s, c) = (0.5 * self.theta).sin_cos();
        [Complex::new(c, 0.0), Complex::from_polar(s, self.phi)]
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::pure(&self.ket()).expect("normalized ket")
    }
}

/// Teleported state together with the success weight of any post-selection
/// that produced its resource (1 for the bare protocol).
#[derive(Debug, Clone, PartialEq)]
pub struct OutputState {
    pub rho: DensityMatrix,
    pub norm: f64,
}

impl OutputState {
    /// The `|0⟩⟨1|` element; its modulus is the Hilbert–Schmidt speed of
    /// the φ-family.
    pub fn coherence(&self) -> Complex {
        self.rho[(0, 1)]
    }
}

/// Which protocol prepares the resource pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Protocol {
    /// Bell pair sent straight through the two damping channels.
    Bare,
    /// Weak measurement before the channels, reversal after.
    WmQmr { p: f64, q: f64 },
    /// No-excitation post-selection on the environments, then reversal.
    EamQmr { q_prime: f64 },
}

/// Normalized X-state summary: weight in {00, 11}, weight in {01, 10},
/// real coherence, and the success weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct ResourceSummary {
    pub even: f64,
    pub odd: f64,
    pub coherence: f64,
    pub norm: f64,
}

impl Protocol {
    pub(crate) fn summary(&self, mu_val: f64) -> Result<ResourceSummary> {
        match *self {
            Protocol::Bare => {
                let f = DampedBell::new(mu_val)?;
                Ok(ResourceSummary {
                    even: f.f11 + f.f44,
                    odd: f.f22 + f.f33,
                    coherence: f.f14,
                    norm: 1.0,
                })
            }
            Protocol::WmQmr { p, q } => {
                let z = WeakMeasuredDamped::new(mu_val, p)?;
                let qb = 1.0 - check_range("q", q, 0.0, 1.0)?;
                let v = qb * qb * z.zeta11 + qb * z.zeta22 + qb * z.zeta33 + z.zeta44;
                if !(v > NORM_FLOOR) {
                    return Err(Error::DegeneratePostSelection(v));
                }
                Ok(ResourceSummary {
                    even: (qb * qb * z.zeta11 + z.zeta44) / v,
                    odd: (qb * z.zeta22 + qb * z.zeta33) / v,
                    coherence: qb * z.zeta14 / v,
                    norm: v,
                })
            }
            Protocol::EamQmr { q_prime } => {
                let e = EamBranch::new(mu_val)?;
                let qb = 1.0 - check_range("q_prime", q_prime, 0.0, 1.0)?;
                let n = qb * qb * e.eta11 + e.eta44;
                if !(n > NORM_FLOOR) {
                    return Err(Error::DegeneratePostSelection(n));
                }
                Ok(ResourceSummary {
                    even: (qb * qb * e.eta11 + e.eta44) / n,
                    odd: 0.0,
                    coherence: qb * e.eta14 / n,
                    norm: n,
                })
            }
        }
    }

    /// Closed-form teleported state.
    pub fn output(&self, input: &InputState, mu_val: f64) -> Result<OutputState> {
        let r = self.summary(mu_val)?;
        let (s, c) = (0.5 * input.theta).sin_cos();
        let (c2, s2) = (c * c, s * s);
        let off = Complex::from_polar(r.coherence * input.theta.sin(), -input.phi);
        let data = alloc::vec![
            Complex::new(r.even * c2 + r.odd * s2, 0.0),
            off,
            off.conj(),
            Complex::new(r.odd * c2 + r.even * s2, 0.0),
        ];
        Ok(OutputState {
            rho: DensityMatrix::new(ComplexMatrix::new(2, data)?)?,
            norm: r.norm,
        })
    }
}

pub fn output_bare(input: &InputState, mu_val: f64) -> Result<OutputState> {
    Protocol::Bare.output(input, mu_val)
}

pub fn output_wm_qmr(input: &InputState, mu_val: f64, p: f64, q: f64) -> Result<OutputState> {
    Protocol::WmQmr { p, q }.output(input, mu_val)
}

pub fn output_eam_qmr(input: &InputState, mu_val: f64, q_prime: f64) -> Result<OutputState> {
    Protocol::EamQmr { q_prime }.output(input, mu_val)
}

/// `⟨ψ|ρ|ψ⟩`, clamped to [0, 1] against rounding.
pub fn fidelity(input: &InputState, out: &OutputState) -> f64 {
    overlap(input, &out.rho)
}

pub(crate) fn overlap(input: &InputState, rho: &DensityMatrix) -> f64 {
    let [c, s] = input.ket();
    let v = c.norm_sqr() * rho[(0, 0)].re
        + s.norm_sqr() * rho[(1, 1)].re
        + 2.0 * (c.conj() * rho[(0, 1)] * s).re;
    v.clamp(0.0, 1.0)
}

/// Output density matrix as a function of φ at fixed θ and μ; φ is taken
/// modulo 2π so the family can be differentiated anywhere.
pub fn output_family(
    protocol: Protocol,
    theta: f64,
    mu_val: f64,
) -> impl Fn(f64) -> Result<DensityMatrix> {
    move |phi| {
        Ok(protocol
            .output(&InputState::wrapped(theta, phi)?, mu_val)?
            .rho)
    }
}

/// Bell basis on qubits (1, 2) paired with Bob's correction on qubit 3,
/// ordered Φ⁺ → I, Ψ⁺ → X, Φ⁻ → Z, Ψ⁻ → XZ.
fn bell_outcomes() -> [([Complex; 4], ComplexMatrix); 4] {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    let (p, m) = (Complex::new(h, 0.0), Complex::new(-h, 0.0));
    let x = gates::pauli_x();
    let z = gates::pauli_z();
    let xz = matmul(&x, &z).expect("dim 2");
    [
        ([p, ZERO, ZERO, p], gates::identity2()),
        ([ZERO, p, p, ZERO], x),
        ([p, ZERO, ZERO, m], z),
        ([ZERO, p, m, ZERO], xz),
    ]
}

/// Brute-force teleportation: Bell measurement on qubits (1, 2) of
/// `|ψ⟩⟨ψ| ⊗ resource`, Pauli correction on qubit 3, branches summed, and
/// qubits (1, 2) traced out.
pub fn teleport_oracle(input: &InputState, resource: &DensityMatrix) -> Result<DensityMatrix> {
    if resource.dim() != 4 {
        return Err(Error::DimensionMismatch {
            left: 4,
            right: resource.dim(),
        });
    }
    let state = kron(input.density().matrix(), resource.matrix())?;
    let id2 = gates::identity2();
    let mut acc = ComplexMatrix::zeros(8)?;
    for (ket, correction) in bell_outcomes() {
        let projector = kron(&ComplexMatrix::outer(&ket)?, &id2)?;
        let fix = kron(&ComplexMatrix::identity(4)?, &correction)?;
        let op = matmul(&fix, &projector)?;
        acc = acc.plus(&state.conjugated_by(&op)?)?;
    }
    DensityMatrix::new(partial_trace_matrix(&acc, &[2], &[2, 2, 2])?)
}

/// Resource builders that only use explicit operator actions, for feeding
/// [`teleport_oracle`]. Each returns the normalized pair and the product of
/// the success weights of the post-selections applied along the way.
pub mod oracle {
    use super::*;

    pub fn bare_resource(mu_val: f64) -> Result<(DensityMatrix, f64)> {
        let rho = apply_two_qubit_channel(&bell_state(), &amplitude_damping_kraus(mu_val)?)?;
        Ok((rho, 1.0))
    }

    pub fn wm_qmr_resource(mu_val: f64, p: f64, q: f64) -> Result<(DensityMatrix, f64)> {
        let (measured, w) = postselect_local(&bell_state(), &weak_measurement_kraus(p)?)?;
        let damped = apply_two_qubit_channel(&measured, &amplitude_damping_kraus(mu_val)?)?;
        let (reversed, v) = postselect_local(&damped, &qmr_kraus(q)?)?;
        Ok((reversed, w * v))
    }

    pub fn eam_qmr_resource(mu_val: f64, q_prime: f64) -> Result<(DensityMatrix, f64)> {
        let no_excitation = amplitude_damping_kraus(mu_val)?.operators()[0].clone();
        let (branch, m) = postselect_local(&bell_state(), &no_excitation)?;
        let (reversed, n) = postselect_local(&branch, &qmr_kraus(q_prime)?)?;
        Ok((reversed, m * n))
    }

    pub fn resource(protocol: Protocol, mu_val: f64) -> Result<(DensityMatrix, f64)> {
        match protocol {
            Protocol::Bare => bare_resource(mu_val),
            Protocol::WmQmr { p, q } => wm_qmr_resource(mu_val, p, q),
            Protocol::EamQmr { q_prime } => eam_qmr_resource(mu_val, q_prime),
        }
    }

    /// Full brute-force route: operator-built resource, then the circuit.
    pub fn teleported(protocol: Protocol, input: &InputState, mu_val: f64) -> Result<OutputState> {
        let (res, norm) = resource(protocol, mu_val)?;
        Ok(OutputState {
            rho: teleport_oracle(input, &res)?,
            norm,
        })
    }
}

/// Grid helper: `n` evenly spaced points on `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => alloc::vec![lo],
        _ => (0..n)
            .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
            .collect(),
    }
}
