//! Memory kernel of a resonant Lorentzian bath and the operator sets acting
//! on the shared Bell pair: amplitude damping, weak measurement (WM),
//! quantum measurement reversal (QMR) and environment-assisted
//! post-selection (EAM).

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::check_range;
use crate::qmat::{
    gates::real, hermitian_eigenvalues, kron, matmul, Complex, ComplexMatrix, DensityMatrix,
    HERM_TOL, PSD_TOL, ZERO,
};
use crate::{Error, Result};
// Provides the float methods on targets without them in `core`.
#[allow(unused_imports)]
use num_traits::Float;

/// Bath parameters. Only the ratio γ₀/λ shapes μ as a function of λt.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathParams {
    gamma0_over_lambda: f64,
    lambda: f64,
}

impl BathParams {
    pub fn new(gamma0_over_lambda: f64, lambda: f64) -> Result<Self> {
        for (name, value) in [
            ("gamma0_over_lambda", gamma0_over_lambda),
            ("lambda", lambda),
        ] {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::NotPositiveParam { name, value });
            }
        }
        Ok(Self {
            gamma0_over_lambda,
            lambda,
        })
    }

    /// Bath with λ = 1, so times are measured in units of 1/λ.
    pub fn with_ratio(gamma0_over_lambda: f64) -> Result<Self> {
        Self::new(gamma0_over_lambda, 1.0)
    }

    pub fn gamma0_over_lambda(&self) -> f64 {
        self.gamma0_over_lambda
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// True when 2γ₀ > λ, i.e. μ oscillates and revives.
    pub fn is_non_markovian(&self) -> bool {
        2.0 * self.gamma0_over_lambda > 1.0
    }
}

/// Excited-state survival factor μ(t) ∈ [0, 1].
///
/// With `x = λt` and `d/λ = √(2γ₀/λ − 1)` this is
/// `e^{−x} [cos(d x / 2λ) + (λ/d) sin(d x / 2λ)]²`. Below the threshold
/// 2γ₀ < λ the frequency is imaginary and the bracket turns into
/// `cosh + sinh`; at 2γ₀ = λ it becomes `1 + x/2`.
pub fn mu(t: f64, bath: &BathParams) -> Result<f64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(Error::NegativeTime(t));
    }
    let x = bath.lambda * t;
    let disc = 2.0 * bath.gamma0_over_lambda - 1.0;
    let decay = (-0.5 * x).exp();
    let amplitude = if disc > 0.0 {
        let d = disc.sqrt();
        let y = 0.5 * d * x;
        decay * (y.cos() + y.sin() / d)
    } else if disc < 0.0 {
        let d = (-disc).sqrt();
        let y = 0.5 * d * x;
        if y < 20.0 {
            decay * (y.cosh() + y.sinh() / d)
        } else {
            // e^{-2y} relative correction is below double precision here.
            0.5 * (y - 0.5 * x).exp() * (1.0 + 1.0 / d)
        }
    } else {
        decay * (1.0 + 0.5 * x)
    };
    Ok((amplitude * amplitude).min(1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelKind {
    /// `Σ K†K = I`.
    TracePreserving,
    /// `Σ K†K ≤ I`; a conditional branch of a measurement.
    PostSelecting,
}

/// Ordered Kraus operators acting on a single qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    operators: Vec<ComplexMatrix>,
    label: String,
    kind: ChannelKind,
}

impl KrausChannel {
    pub fn new(
        operators: Vec<ComplexMatrix>,
        label: impl Into<String>,
        kind: ChannelKind,
    ) -> Result<Self> {
        let first = operators.first().ok_or(Error::Incomplete(1.0))?;
        let dim = first.dim();
        let mut sum = ComplexMatrix::zeros(dim)?;
        for k in &operators {
            if k.dim() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: k.dim(),
                });
            }
            sum = sum.plus(&matmul(&k.adjoint(), k)?)?;
        }
        let id = ComplexMatrix::identity(dim)?;
        match kind {
            ChannelKind::TracePreserving => {
                let dev = sum.max_abs_diff(&id)?;
                if dev > HERM_TOL {
                    return Err(Error::Incomplete(dev));
                }
            }
            ChannelKind::PostSelecting => {
                let lowest = hermitian_eigenvalues(&id.minus(&sum)?)?[0];
                if lowest < -PSD_TOL {
                    return Err(Error::Incomplete(-lowest));
                }
            }
        }
        Ok(Self {
            operators,
            label: label.into(),
            kind,
        })
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }
}

/// Weak measurement and reversal strengths, symmetric on both qubits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementStrengths {
    pub p: f64,
    pub q: f64,
    pub q_prime: f64,
}

impl MeasurementStrengths {
    pub fn new(p: f64, q: f64, q_prime: f64) -> Result<Self> {
        Ok(Self {
            p: check_range("p", p, 0.0, 1.0)?,
            q: check_range("q", q, 0.0, 1.0)?,
            q_prime: check_range("q_prime", q_prime, 0.0, 1.0)?,
        })
    }

    pub fn none() -> Self {
        Self {
            p: 0.0,
            q: 0.0,
            q_prime: 0.0,
        }
    }
}

/// `K₀ = diag(1, √μ)`, `K₁ = √(1−μ) |0⟩⟨1|`.
pub fn amplitude_damping_kraus(mu_val: f64) -> Result<KrausChannel> {
    let mu_val = check_range("mu", mu_val, 0.0, 1.0)?;
    let k0 = ComplexMatrix::from_real(2, &[1.0, 0.0, 0.0, mu_val.sqrt()])?;
    let k1 = ComplexMatrix::from_real(2, &[0.0, (1.0 - mu_val).sqrt(), 0.0, 0.0])?;
    KrausChannel::new(
        alloc::vec![k0, k1],
        "amplitude-damping",
        ChannelKind::TracePreserving,
    )
}

/// Weak measurement element `|0⟩ → |0⟩, |1⟩ → √(1−p)|1⟩`.
pub fn weak_measurement_kraus(p: f64) -> Result<ComplexMatrix> {
    let p = check_range("p", p, 0.0, 1.0)?;
    ComplexMatrix::from_real(2, &[1.0, 0.0, 0.0, (1.0 - p).sqrt()])
}

/// Measurement reversal element `|0⟩ → √(1−q)|0⟩, |1⟩ → |1⟩`.
pub fn qmr_kraus(q: f64) -> Result<ComplexMatrix> {
    let q = check_range("q", q, 0.0, 1.0)?;
    ComplexMatrix::from_real(2, &[(1.0 - q).sqrt(), 0.0, 0.0, 1.0])
}

fn check_two_qubit(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() == 4 {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            left: 4,
            right: rho.dim(),
        })
    }
}

/// `Σᵢⱼ (Kᵢ⊗Kⱼ) ρ (Kᵢ⊗Kⱼ)†` with the same channel on both qubits.
///
/// For a post-selecting channel the result is renormalized.
pub fn apply_two_qubit_channel(rho: &DensityMatrix, ch: &KrausChannel) -> Result<DensityMatrix> {
    check_two_qubit(rho)?;
    if let Some(k) = ch.operators.iter().find(|k| k.dim() != 2) {
        return Err(Error::DimensionMismatch {
            left: 2,
            right: k.dim(),
        });
    }
    let mut out = ComplexMatrix::zeros(4)?;
    for ki in &ch.operators {
        for kj in &ch.operators {
            let op = kron(ki, kj)?;
            out = out.plus(&rho.matrix().conjugated_by(&op)?)?;
        }
    }
    match ch.kind {
        ChannelKind::TracePreserving => DensityMatrix::new(out),
        ChannelKind::PostSelecting => Ok(DensityMatrix::from_unnormalized(out)?.0),
    }
}

/// Applies the same local filter `op ⊗ op` and renormalizes.
///
/// Returns the conditional state and its success weight (trace before
/// normalization).
pub fn postselect_local(rho: &DensityMatrix, op: &ComplexMatrix) -> Result<(DensityMatrix, f64)> {
    check_two_qubit(rho)?;
    let pair = kron(op, op)?;
    DensityMatrix::from_unnormalized(rho.matrix().conjugated_by(&pair)?)
}

/// `(|00⟩ + |11⟩)/√2`.
pub fn bell_state() -> DensityMatrix {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    DensityMatrix::pure(&[real(h), ZERO, ZERO, real(h)]).expect("Bell state is valid")
}

/// Normalized two-qubit X-state from populations of |00⟩, |01⟩, |10⟩, |11⟩
/// and a real `|00⟩⟨11|` coherence, all divided by `norm`.
fn x_state(populations: [f64; 4], coherence: f64, norm: f64) -> Result<DensityMatrix> {
    let mut data = alloc::vec![ZERO; 16];
    for (i, p) in populations.iter().enumerate() {
        data[i * 4 + i] = real(p / norm);
    }
    data[3] = real(coherence / norm);
    data[12] = real(coherence / norm);
    DensityMatrix::new(ComplexMatrix::new(4, data)?)
}

/// Closed-form coefficients of the damped Bell pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DampedBell {
    pub f11: f64,
    pub f14: f64,
    pub f22: f64,
    pub f33: f64,
    pub f44: f64,
}

impl DampedBell {
    pub fn new(mu_val: f64) -> Result<Self> {
        let m = check_range("mu", mu_val, 0.0, 1.0)?;
        Ok(Self {
            f11: (m * m - 2.0 * m + 2.0) / 2.0,
            f14: m / 2.0,
            f22: (m - m * m) / 2.0,
            f33: (m - m * m) / 2.0,
            f44: m * m / 2.0,
        })
    }

    pub fn state(&self) -> Result<DensityMatrix> {
        x_state([self.f11, self.f22, self.f33, self.f44], self.f14, 1.0)
    }
}

/// Closed-form coefficients of the weakly measured pair after damping.
/// `w` is the weak-measurement success weight; the state is `ζ / w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakMeasuredDamped {
    pub zeta11: f64,
    pub zeta14: f64,
    pub zeta22: f64,
    pub zeta33: f64,
    pub zeta44: f64,
    pub w: f64,
}

impl WeakMeasuredDamped {
    pub fn new(mu_val: f64, p: f64) -> Result<Self> {
        let m = check_range("mu", mu_val, 0.0, 1.0)?;
        let pb = 1.0 - check_range("p", p, 0.0, 1.0)?;
        let pb2 = pb * pb;
        Ok(Self {
            zeta11: 0.5 + 0.5 * pb2 * (1.0 - m) * (1.0 - m),
            zeta14: 0.5 * pb * m,
            zeta22: 0.5 * pb2 * (m - m * m),
            zeta33: 0.5 * pb2 * (m - m * m),
            zeta44: 0.5 * pb2 * m * m,
            w: 0.5 * (1.0 + pb2),
        })
    }

    pub fn state(&self) -> Result<DensityMatrix> {
        x_state(
            [self.zeta11, self.zeta22, self.zeta33, self.zeta44],
            self.zeta14,
            self.w,
        )
    }
}

/// Closed-form coefficients of the no-excitation (E₀₀) trajectory.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EamBranch {
    pub eta11: f64,
    pub eta14: f64,
    pub eta44: f64,
    pub m: f64,
}

impl EamBranch {
    pub fn new(mu_val: f64) -> Result<Self> {
        let mu_val = check_range("mu", mu_val, 0.0, 1.0)?;
        let eta11 = 0.5;
        let eta44 = 0.5 * mu_val * mu_val;
        Ok(Self {
            eta11,
            eta14: 0.5 * mu_val,
            eta44,
            m: eta11 + eta44,
        })
    }

    pub fn state(&self) -> Result<DensityMatrix> {
        x_state([self.eta11, 0.0, 0.0, self.eta44], self.eta14, self.m)
    }
}

/// Bell pair after symmetric weak measurement: `(|00⟩ + p̄|11⟩)/√(2W)`,
/// returned with `W = (1 + p̄²)/2`.
pub fn weak_measure_state(p: f64) -> Result<(DensityMatrix, f64)> {
    let pb = 1.0 - check_range("p", p, 0.0, 1.0)?;
    let w = 0.5 * (1.0 + pb * pb);
    let s = 1.0 / (2.0 * w).sqrt();
    let rho = DensityMatrix::pure(&[real(s), ZERO, ZERO, Complex::new(pb * s, 0.0)])?;
    Ok((rho, w))
}

/// Normalized E₀₀ branch of the damped Bell pair and its weight `M`.
pub fn eam_postselect_state(mu_val: f64) -> Result<(DensityMatrix, f64)> {
    let branch = EamBranch::new(mu_val)?;
    Ok((branch.state()?, branch.m))
}
