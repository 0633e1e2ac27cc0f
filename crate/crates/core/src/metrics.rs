//! Distances, statistical speeds and the speed-based memory witness.

use alloc::vec::Vec;

use crate::qmat::{hermitian_eigenvalues, Complex, DensityMatrix};
use crate::teleport::{InputState, Protocol};
use crate::{Error, Result};
// Provides the float methods on targets without them in `core`.
#[allow(unused_imports)]
use num_traits::Float;

/// Default φ step for central-difference derivatives of state families.
pub const PHI_STEP: f64 = 1e-5;

/// Relative spacing deviation tolerated before a time grid counts as non-uniform.
const GRID_TOL: f64 = 1e-6;

fn same_dim(a: &DensityMatrix, b: &DensityMatrix) -> Result<()> {
    if a.dim() == b.dim() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        })
    }
}

/// `√(½ Tr[(ρ − σ)²])`.
pub fn hs_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    same_dim(a, b)?;
    let diff = a.matrix().minus(b.matrix())?;
    // Tr[H²] = Σ|hᵢⱼ|² for Hermitian H.
    let sq: f64 = diff.entries().iter().map(|z| z.norm_sqr()).sum();
    Ok((0.5 * sq).sqrt())
}

/// `½ Tr|ρ − σ|`.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    same_dim(a, b)?;
    let diff = a.matrix().minus(b.matrix())?;
    let ev = hermitian_eigenvalues(&diff)?;
    Ok(0.5 * ev.iter().map(|x| x.abs()).sum::<f64>())
}

/// `(½ Tr|dρ/dφ|^α)^{1/α}` with the derivative taken by central difference.
pub fn statistical_speed<F>(family: F, phi0: f64, alpha: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<DensityMatrix>,
{
    statistical_speed_with_step(family, phi0, alpha, PHI_STEP)
}

pub fn statistical_speed_with_step<F>(family: F, phi0: f64, alpha: f64, step: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<DensityMatrix>,
{
    if !(alpha.is_finite() && alpha >= 1.0) {
        return Err(Error::Alpha(alpha));
    }
    let plus = family(phi0 + step)?;
    let minus = family(phi0 - step)?;
    same_dim(&plus, &minus)?;
    let derivative = plus
        .matrix()
        .minus(minus.matrix())?
        .scaled(Complex::new(0.5 / step, 0.0));
    let ev = hermitian_eigenvalues(&derivative)?;
    let sum: f64 = ev.iter().map(|x| x.abs().powf(alpha)).sum();
    Ok((0.5 * sum).powf(1.0 / alpha))
}

/// Hilbert–Schmidt speed of the φ-family of teleported states.
///
/// The output's off-diagonal is `A e^{−iφ}` with real `A ≥ 0`, so the speed
/// is exactly `A`.
pub fn hss_analytic(protocol: Protocol, input: &InputState, mu_val: f64) -> Result<f64> {
    let r = protocol.summary(mu_val)?;
    Ok(r.coherence * input.theta().sin())
}

fn grid_step(times: &[f64]) -> Result<f64> {
    if times.len() < 3 {
        return Err(Error::TooFewPoints(times.len()));
    }
    let h = (times[times.len() - 1] - times[0]) / (times.len() - 1) as f64;
    if !(h > 0.0) {
        return Err(Error::NonUniformGrid);
    }
    for w in times.windows(2) {
        if ((w[1] - w[0]) - h).abs() > GRID_TOL * h {
            return Err(Error::NonUniformGrid);
        }
    }
    Ok(h)
}

/// χ(t) = d HSS/dt: second-order central differences inside, second-order
/// one-sided stencils at both ends.
pub fn witness_chi(hss_series: &[(f64, f64)]) -> Result<Vec<(f64, f64)>> {
    let times: Vec<f64> = hss_series.iter().map(|s| s.0).collect();
    let h = grid_step(&times)?;
    let v: Vec<f64> = hss_series.iter().map(|s| s.1).collect();
    let n = v.len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let d = if i == 0 {
            (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h)
        } else if i == n - 1 {
            (3.0 * v[n - 1] - 4.0 * v[n - 2] + v[n - 3]) / (2.0 * h)
        } else {
            (v[i + 1] - v[i - 1]) / (2.0 * h)
        };
        out.push((times[i], d));
    }
    Ok(out)
}

/// Running `∫_{χ>0} χ dt` by the trapezoidal rule on `max(χ, 0)`.
///
/// Returns `(t, 𝒩(t))` for every sample; the last entry is the total.
pub fn non_markovianity(chi_series: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut acc = 0.0;
    let mut out = Vec::with_capacity(chi_series.len());
    let mut prev: Option<(f64, f64)> = None;
    for &(t, chi) in chi_series {
        let clipped = chi.max(0.0);
        if let Some((t0, c0)) = prev {
            acc += 0.5 * (c0 + clipped) * (t - t0);
        }
        out.push((t, acc));
        prev = Some((t, clipped));
    }
    out
}

/// Final value of [`non_markovianity`].
pub fn non_markovianity_total(chi_series: &[(f64, f64)]) -> f64 {
    non_markovianity(chi_series).last().map_or(0.0, |s| s.1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{mu, BathParams};
    use crate::qmat::{gates, ComplexMatrix};
    use crate::teleport::{linspace, output_family, overlap};
    use core::f64::consts::{FRAC_PI_2, PI};
    use proptest::prelude::*;

    fn basis(k: usize) -> DensityMatrix {
        DensityMatrix::new(gates::projector(k)).unwrap()
    }

    #[test]
    fn distance_examples() {
        let half = DensityMatrix::maximally_mixed(2).unwrap();
        assert_eq!(hs_distance(&half, &half).unwrap(), 0.0);
        assert_eq!(trace_distance(&half, &half).unwrap(), 0.0);
        assert!((hs_distance(&basis(0), &basis(1)).unwrap() - 1.0).abs() < 1e-15);
        assert!((trace_distance(&basis(0), &basis(1)).unwrap() - 1.0).abs() < 1e-15);
        assert!((hs_distance(&half, &basis(0)).unwrap() - 0.5).abs() < 1e-15);
        assert!((trace_distance(&half, &basis(0)).unwrap() - 0.5).abs() < 1e-15);
        let four = DensityMatrix::maximally_mixed(4).unwrap();
        assert!(hs_distance(&half, &four).is_err());
        assert!(trace_distance(&half, &four).is_err());
    }

    #[test]
    fn speed_of_constant_family_vanishes() {
        let s = statistical_speed(|_| DensityMatrix::maximally_mixed(2), 0.3, 2.0).unwrap();
        assert_eq!(s, 0.0);
        assert!(matches!(
            statistical_speed(|_| DensityMatrix::maximally_mixed(2), 0.3, 0.5),
            Err(Error::Alpha(_))
        ));
    }

    #[test]
    fn bare_family_speeds() {
        // dρ/dφ has eigenvalues ±μ sinθ / 2, so every α gives μ sinθ / 2.
        for &m in &[0.2, 0.6, 1.0] {
            for &th in &[0.7, FRAC_PI_2] {
                let fam = output_family(Protocol::Bare, th, m);
                let want = 0.5 * m * th.sin();
                for alpha in [1.0, 2.0, 3.5] {
                    let s = statistical_speed(&fam, 0.785, alpha).unwrap();
                    assert!((s - want).abs() < 1e-6, "α={alpha} {s} vs {want}");
                }
            }
        }
    }

    #[test]
    fn hss_closed_form_examples() {
        let eq = InputState::new(FRAC_PI_2, 0.0).unwrap();
        assert!((hss_analytic(Protocol::Bare, &eq, 1.0).unwrap() - 0.5).abs() < 1e-15);
        assert!(
            (hss_analytic(Protocol::EamQmr { q_prime: 0.0 }, &eq, 1.0).unwrap() - 0.5).abs()
                < 1e-15
        );
        for m in linspace(0.0, 1.0, 11) {
            let a = hss_analytic(Protocol::Bare, &eq, m).unwrap();
            let b = hss_analytic(Protocol::WmQmr { p: 0.0, q: 0.0 }, &eq, m).unwrap();
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn hss_matches_finite_difference_speed() {
        for proto in [
            Protocol::Bare,
            Protocol::WmQmr { p: 0.6, q: 0.5 },
            Protocol::EamQmr { q_prime: 0.3 },
        ] {
            for m in linspace(0.05, 1.0, 6) {
                for th in linspace(0.0, PI, 5) {
                    let inp = InputState::new(th, 1.0).unwrap();
                    let a = hss_analytic(proto, &inp, m).unwrap();
                    let s = statistical_speed(output_family(proto, th, m), 1.0, 2.0).unwrap();
                    assert!((a - s).abs() < 1e-6, "{proto:?} μ={m} θ={th}");
                }
            }
        }
    }

    fn series(f: impl Fn(f64) -> f64, dt: f64, n: usize) -> Vec<(f64, f64)> {
        (0..n).map(|k| (k as f64 * dt, f(k as f64 * dt))).collect()
    }

    #[test]
    fn chi_of_constant_and_sine() {
        let chi = witness_chi(&series(|_| 0.3, 0.1, 10)).unwrap();
        assert!(chi.iter().all(|c| c.1.abs() < 1e-14));
        // truncation error ≤ h²/3 · max|f'''| at the ends
        let chi = witness_chi(&series(f64::sin, 1e-3, 3001)).unwrap();
        for (t, c) in chi {
            assert!((c - t.cos()).abs() < 1e-5, "t={t}");
        }
    }

    #[test]
    fn chi_rejects_bad_grids() {
        assert_eq!(
            witness_chi(&[(0.0, 1.0), (1.0, 1.0)]).unwrap_err(),
            Error::TooFewPoints(2)
        );
        let bad = [(0.0, 1.0), (1.0, 1.0), (3.0, 1.0)];
        assert_eq!(witness_chi(&bad).unwrap_err(), Error::NonUniformGrid);
    }

    #[test]
    fn chi_sign_tracks_mu_derivative() {
        let b = BathParams::with_ratio(20.0).unwrap();
        let dt = 1e-3;
        let hss = series(|t| 0.5 * mu(t, &b).unwrap(), dt, 3001);
        let chi = witness_chi(&hss).unwrap();
        // Oracle: sign of μ′ from a much finer symmetric difference.
        let eps = 1e-6;
        let mut checked = 0;
        for &(t, c) in &chi[1..chi.len() - 1] {
            let slope = (mu(t + eps, &b).unwrap() - mu(t - eps, &b).unwrap()) / (2.0 * eps);
            if slope.abs() > 1e-2 {
                assert_eq!(c > 0.0, slope > 0.0, "t={t}");
                checked += 1;
            }
        }
        assert!(checked > 2500);
    }

    #[test]
    fn cumulative_examples() {
        let neg = series(|t| -1.0 - t, 0.1, 20);
        assert!(non_markovianity(&neg).iter().all(|s| s.1 == 0.0));
        // triangle of height 0.6 over [1, 2]: area 0.3
        let tri = series(
            |t| {
                if (1.0..=2.0).contains(&t) {
                    0.6 * (1.0 - (2.0 * t - 3.0).abs())
                } else {
                    -0.2
                }
            },
            0.01,
            301,
        );
        assert!((non_markovianity_total(&tri) - 0.3).abs() < 1e-3);
        assert_eq!(non_markovianity_total(&[]), 0.0);
    }

    #[test]
    fn bare_measure_equals_positive_variation() {
        let b = BathParams::with_ratio(20.0).unwrap();
        let dt = 1e-3;
        let hss = series(|t| 0.5 * mu(t, &b).unwrap(), dt, 3001);
        let total = non_markovianity_total(&witness_chi(&hss).unwrap());
        // Oracle: Σ (peak − preceding valley) from extrema of a 10× finer sampling.
        let fine: Vec<f64> = (0..=30000)
            .map(|k| 0.5 * mu(k as f64 * 1e-4, &b).unwrap())
            .collect();
        let mut rises = 0.0;
        let mut valley = fine[0];
        for i in 1..fine.len() - 1 {
            if fine[i] <= fine[i - 1] && fine[i] <= fine[i + 1] {
                valley = fine[i];
            }
            if fine[i] >= fine[i - 1] && fine[i] >= fine[i + 1] && i > 0 {
                rises += fine[i] - valley;
                valley = fine[i];
            }
        }
        let last = *fine.last().unwrap();
        if last > valley {
            rises += last - valley;
        }
        assert!((total - rises).abs() < 1e-4, "{total} vs {rises}");
    }

    #[test]
    fn overlap_consistency() {
        let inp = InputState::new(1.0, 2.0).unwrap();
        assert!((overlap(&inp, &inp.density()) - 1.0).abs() < 1e-15);
    }

    fn arb_qubit() -> impl Strategy<Value = DensityMatrix> {
        // Points in the Bloch ball.
        (0.0f64..=1.0, 0.0f64..PI, 0.0f64..(2.0 * PI)).prop_map(|(r, th, ph)| {
            let (x, y, z) = (
                r * th.sin() * ph.cos(),
                r * th.sin() * ph.sin(),
                r * th.cos(),
            );
            let data = alloc::vec![
                Complex::new(0.5 * (1.0 + z), 0.0),
                Complex::new(0.5 * x, -0.5 * y),
                Complex::new(0.5 * x, 0.5 * y),
                Complex::new(0.5 * (1.0 - z), 0.0),
            ];
            DensityMatrix::new(ComplexMatrix::new(2, data).unwrap()).unwrap()
        })
    }

    proptest! {
        #[test]
        fn distance_axioms(a in arb_qubit(), b in arb_qubit(), c in arb_qubit()) {
            for d in [hs_distance, trace_distance] {
                let ab = d(&a, &b).unwrap();
                prop_assert!((ab - d(&b, &a).unwrap()).abs() <= 1e-12);
                prop_assert!(d(&a, &a).unwrap() <= 1e-10);
                prop_assert!(ab <= d(&a, &c).unwrap() + d(&c, &b).unwrap() + 1e-12);
            }
            prop_assert!(trace_distance(&a, &b).unwrap() + 1e-12 >= hs_distance(&a, &b).unwrap());
        }
    }
}
