//! Dense complex matrices for one to three qubits.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Index;

use crate::{Error, Result};
// Provides the float methods on targets without them in `core`.
#[allow(unused_imports)]
use num_traits::Float;

pub use num_complex::Complex64 as Complex;

/// Hermiticity tolerance for density matrices (entrywise max-norm).
pub const HERM_TOL: f64 = 1e-12;
/// Trace tolerance for density matrices.
pub const TRACE_TOL: f64 = 1e-12;
/// Smallest admitted eigenvalue of a density matrix.
pub const PSD_TOL: f64 = 1e-10;
/// Off-diagonal Frobenius norm at which the Jacobi sweeps stop.
pub const EIG_TOL: f64 = 1e-13;
/// Hermiticity tolerance accepted by [`hermitian_eigenvalues`].
pub const EIG_HERM_TOL: f64 = 1e-10;
/// Normalizations at or below this are treated as a failed post-selection.
pub const NORM_FLOOR: f64 = 1e-14;

const MAX_SWEEPS: usize = 100;

pub(crate) const ZERO: Complex = Complex::new(0.0, 0.0);
pub(crate) const ONE: Complex = Complex::new(1.0, 0.0);

fn supported(dim: usize) -> Result<usize> {
    match dim {
        2 | 4 | 8 => Ok(dim),
        _ => Err(Error::UnsupportedDimension(dim)),
    }
}

/// Square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex>,
}

impl ComplexMatrix {
    pub fn new(dim: usize, data: Vec<Complex>) -> Result<Self> {
        supported(dim)?;
        if data.len() != dim * dim {
            return Err(Error::EntryCount {
                expected: dim * dim,
                got: data.len(),
            });
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { dim, data })
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        Self::new(dim, entries.iter().map(|&x| Complex::new(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        supported(dim)?;
        Ok(Self {
            dim,
            data: vec![ZERO; dim * dim],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        Ok(m)
    }

    pub fn from_diagonal(diag: &[Complex]) -> Result<Self> {
        let mut m = Self::zeros(diag.len())?;
        for (i, &z) in diag.iter().enumerate() {
            m.data[i * m.dim + i] = z;
        }
        Self::new(m.dim, m.data)
    }

    /// `|v⟩⟨v|` for an arbitrary (not necessarily normalized) ket.
    pub fn outer(ket: &[Complex]) -> Result<Self> {
        let dim = ket.len();
        let mut data = Vec::with_capacity(dim * dim);
        for a in ket {
            for b in ket {
                data.push(a * b.conj());
            }
        }
        Self::new(dim, data)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Complex] {
        &self.data
    }

    pub(crate) fn entry_mut(&mut self, row: usize, col: usize) -> &mut Complex {
        &mut self.data[row * self.dim + col]
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut data = vec![ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        Self { dim: n, data }
    }

    pub fn trace(&self) -> Complex {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    pub fn scaled(&self, factor: Complex) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn minus(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex, Complex) -> Complex) -> Result<Self> {
        same_dim(self, other)?;
        Ok(Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        same_dim(self, other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// `‖M − M†‖` in the entrywise max-norm.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in i..n {
                let d = (self.data[i * n + j] - self.data[j * n + i].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// `op · self · op†`.
    pub fn conjugated_by(&self, op: &Self) -> Result<Self> {
        matmul(&matmul(op, self)?, &op.adjoint())
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex;

    fn index(&self, (row, col): (usize, usize)) -> &Complex {
        assert!(row < self.dim && col < self.dim, "index out of bounds");
        &self.data[row * self.dim + col]
    }
}

fn same_dim(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<()> {
    if a.dim == b.dim {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            left: a.dim,
            right: b.dim,
        })
    }
}

pub fn matmul(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    same_dim(a, b)?;
    let n = a.dim;
    let mut data = vec![ZERO; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a.data[i * n + k];
            if aik == ZERO {
                continue;
            }
            for j in 0..n {
                data[i * n + j] += aik * b.data[k * n + j];
            }
        }
    }
    Ok(ComplexMatrix { dim: n, data })
}

/// Kronecker product, `a`'s indices major.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.dim * b.dim;
    if n > 8 {
        return Err(Error::UnsupportedDimension(n));
    }
    let (na, nb) = (a.dim, b.dim);
    let mut data = vec![ZERO; n * n];
    for i in 0..na {
        for j in 0..na {
            let aij = a.data[i * na + j];
            for k in 0..nb {
                for l in 0..nb {
                    data[(i * nb + k) * n + j * nb + l] = aij * b.data[k * nb + l];
                }
            }
        }
    }
    Ok(ComplexMatrix { dim: n, data })
}

/// Quantum state: Hermitian, unit-trace, positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(mat: ComplexMatrix) -> Result<Self> {
        let dev = mat.hermitian_deviation();
        if dev > HERM_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let tr = mat.trace();
        if (tr - ONE).norm() > TRACE_TOL {
            return Err(Error::NotUnitTrace(tr.re));
        }
        let lowest = hermitian_eigenvalues(&mat)?[0];
        if lowest < -PSD_TOL {
            return Err(Error::NotPositive(lowest));
        }
        Ok(Self { mat })
    }

    /// Normalizes a positive operator by its trace, returning the trace too.
    ///
    /// A trace at or below [`NORM_FLOOR`] means the branch has zero weight.
    pub fn from_unnormalized(mat: ComplexMatrix) -> Result<(Self, f64)> {
        let weight = mat.trace().re;
        if !(weight > NORM_FLOOR) {
            return Err(Error::DegeneratePostSelection(weight));
        }
        let rho = Self::new(mat.scaled(Complex::new(1.0 / weight, 0.0)))?;
        Ok((rho, weight))
    }

    pub fn pure(ket: &[Complex]) -> Result<Self> {
        Self::new(ComplexMatrix::outer(ket)?)
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        let id = ComplexMatrix::identity(dim)?;
        Ok(Self {
            mat: id.scaled(Complex::new(1.0 / dim as f64, 0.0)),
        })
    }

    pub fn dim(&self) -> usize {
        self.mat.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.mat
    }

    pub fn get(&self, row: usize, col: usize) -> Complex {
        self.mat[(row, col)]
    }
}

impl Index<(usize, usize)> for DensityMatrix {
    type Output = Complex;

    fn index(&self, idx: (usize, usize)) -> &Complex {
        &self.mat[idx]
    }
}

/// Partial trace of an arbitrary operator; `keep` lists the retained
/// subsystems in ascending order, `dims` the local dimensions.
pub fn partial_trace_matrix(
    m: &ComplexMatrix,
    keep: &[usize],
    dims: &[usize],
) -> Result<ComplexMatrix> {
    if dims.iter().product::<usize>() != m.dim || dims.contains(&0) {
        return Err(Error::Subsystems(
            "product of dims differs from matrix dimension",
        ));
    }
    if keep.is_empty() {
        return Err(Error::Subsystems("nothing to keep"));
    }
    if keep.windows(2).any(|w| w[0] >= w[1]) || keep.iter().any(|&k| k >= dims.len()) {
        return Err(Error::Subsystems(
            "keep must be ascending, unique and in range",
        ));
    }
    let kept_dim: usize = keep.iter().map(|&k| dims[k]).product();
    let mut out = ComplexMatrix::zeros(kept_dim)?;

    // Splits a flat index into (kept index, traced index).
    let split = |mut idx: usize| {
        let (mut kept, mut kept_stride) = (0usize, 1usize);
        let (mut traced, mut traced_stride) = (0usize, 1usize);
        for (s, &d) in dims.iter().enumerate().rev() {
            let digit = idx % d;
            idx /= d;
            if keep.contains(&s) {
                kept += digit * kept_stride;
                kept_stride *= d;
            } else {
                traced += digit * traced_stride;
                traced_stride *= d;
            }
        }
        (kept, traced)
    };

    let n = m.dim;
    for i in 0..n {
        let (ki, ti) = split(i);
        for j in 0..n {
            let (kj, tj) = split(j);
            if ti == tj {
                *out.entry_mut(ki, kj) += m.data[i * n + j];
            }
        }
    }
    Ok(out)
}

pub fn partial_trace(rho: &DensityMatrix, keep: &[usize], dims: &[usize]) -> Result<DensityMatrix> {
    DensityMatrix::new(partial_trace_matrix(&rho.mat, keep, dims)?)
}

/// Real eigenvalues of a Hermitian matrix, ascending.
///
/// Dimension 2 uses the closed form; larger matrices use cyclic complex
/// Jacobi rotations until the off-diagonal Frobenius norm drops below
/// [`EIG_TOL`].
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let dev = m.hermitian_deviation();
    if dev > EIG_HERM_TOL {
        return Err(Error::NotHermitian(dev));
    }
    let mut values = if m.dim == 2 {
        let a = m[(0, 0)].re;
        let d = m[(1, 1)].re;
        let b = (m[(0, 1)] + m[(1, 0)].conj()).scale(0.5).norm();
        let mean = 0.5 * (a + d);
        let radius = (0.5 * (a - d)).hypot(b);
        vec![mean - radius, mean + radius]
    } else {
        jacobi(m)?
    };
    values.sort_by(f64::total_cmp);
    Ok(values)
}

fn off_diagonal_norm(a: &[Complex], n: usize) -> f64 {
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[i * n + j].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

fn jacobi(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let n = m.dim;
    let herm = m.plus(&m.adjoint())?.scaled(Complex::new(0.5, 0.0));
    let mut a = herm.data;

    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a, n) < EIG_TOL {
            return Ok((0..n).map(|i| a[i * n + i].re).collect());
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let g = a[p * n + q];
                let g_abs = g.norm();
                if g_abs == 0.0 {
                    continue;
                }
                let phase = g / g_abs;
                let tau = (a[q * n + q].re - a[p * n + p].re) / (2.0 * g_abs);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Columns of the unitary restricted to the (p, q) plane.
                let u_pp = Complex::new(c, 0.0);
                let u_pq = Complex::new(s, 0.0);
                let u_qp = phase.conj().scale(-s);
                let u_qq = phase.conj().scale(c);

                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * u_pp + akq * u_qp;
                    a[k * n + q] = akp * u_pq + akq * u_qq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = u_pp.conj() * apk + u_qp.conj() * aqk;
                    a[q * n + k] = u_pq.conj() * apk + u_qq.conj() * aqk;
                }
                a[p * n + q] = ZERO;
                a[q * n + p] = ZERO;
            }
        }
    }
    if off_diagonal_norm(&a, n) < EIG_TOL {
        Ok((0..n).map(|i| a[i * n + i].re).collect())
    } else {
        Err(Error::NoConvergence)
    }
}

/// Pauli and basis matrices used throughout the crate.
pub mod gates {
    use super::{Complex, ComplexMatrix, ONE, ZERO};

    pub fn identity2() -> ComplexMatrix {
        ComplexMatrix::identity(2).expect("dim 2")
    }

    pub fn pauli_x() -> ComplexMatrix {
        ComplexMatrix::new(2, alloc::vec![ZERO, ONE, ONE, ZERO]).expect("dim 2")
    }

    pub fn pauli_z() -> ComplexMatrix {
        ComplexMatrix::new(2, alloc::vec![ONE, ZERO, ZERO, -ONE]).expect("dim 2")
    }

    /// `|k⟩⟨k|` on one qubit.
    pub fn projector(k: usize) -> ComplexMatrix {
        let mut diag = [ZERO; 2];
        diag[k] = ONE;
        ComplexMatrix::from_diagonal(&diag).expect("dim 2")
    }

    pub fn real(x: f64) -> Complex {
        Complex::new(x, 0.0)
    }
}
