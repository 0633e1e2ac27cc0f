//! Time series of fidelity, Hilbert–Schmidt speed and non-Markovianity for
//! the three protocols, and one-parameter sweeps over them.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::channels::{mu, BathParams, MeasurementStrengths};
use crate::metrics::{hss_analytic, witness_chi};
use crate::teleport::{fidelity, InputState, Protocol};
use crate::{Error, Result};
// Provides the float methods on targets without them in `core`.
#[allow(unused_imports)]
use num_traits::Float;

/// Largest number of grid steps a single series may have.
pub const MAX_STEPS: f64 = 1e7;
pub const DEFAULT_T_MAX: f64 = 3.0;
pub const DEFAULT_DT: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    Bare,
    WmQmr,
    EamQmr,
}

impl Scenario {
    pub const ALL: [Scenario; 3] = [Scenario::Bare, Scenario::WmQmr, Scenario::EamQmr];

    pub fn as_str(&self) -> &'static str {
        match self {
            Scenario::Bare => "bare",
            Scenario::WmQmr => "wm_qmr",
            Scenario::EamQmr => "eam_qmr",
        }
    }

    pub fn protocol(&self, s: &MeasurementStrengths) -> Protocol {
        match self {
            Scenario::Bare => Protocol::Bare,
            Scenario::WmQmr => Protocol::WmQmr { p: s.p, q: s.q },
            Scenario::EamQmr => Protocol::EamQmr { q_prime: s.q_prime },
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownName(pub String);

impl fmt::Display for UnknownName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown name `{}`", self.0)
    }
}

impl FromStr for Scenario {
    type Err = UnknownName;

    fn from_str(s: &str) -> Result<Self, UnknownName> {
        Scenario::ALL
            .into_iter()
            .find(|sc| sc.as_str() == s)
            .ok_or_else(|| UnknownName(s.into()))
    }
}

/// Everything needed to produce one time series. Times are in units of 1/λ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolParams {
    pub bath: BathParams,
    pub input: InputState,
    pub strengths: MeasurementStrengths,
    pub t_max: f64,
    pub dt: f64,
    pub scenario: Scenario,
}

impl ProtocolParams {
    pub fn new(
        scenario: Scenario,
        bath: BathParams,
        input: InputState,
        strengths: MeasurementStrengths,
        t_max: f64,
        dt: f64,
    ) -> Result<Self> {
        let params = Self {
            bath,
            input,
            strengths,
            t_max,
            dt,
            scenario,
        };
        params.validate()?;
        Ok(params)
    }

    /// Default grid (λt ∈ [0, 3], Δ(λt) = 10⁻³) for the given physics.
    pub fn with_default_grid(
        scenario: Scenario,
        bath: BathParams,
        input: InputState,
        strengths: MeasurementStrengths,
    ) -> Result<Self> {
        Self::new(scenario, bath, input, strengths, DEFAULT_T_MAX, DEFAULT_DT)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::Grid("dt must be positive"));
        }
        if !(self.t_max.is_finite() && self.t_max >= self.dt) {
            return Err(Error::Grid("t_max must be at least dt"));
        }
        if self.t_max / self.dt > MAX_STEPS {
            return Err(Error::Grid("more than 1e7 steps"));
        }
        Ok(())
    }

    pub fn protocol(&self) -> Protocol {
        self.scenario.protocol(&self.strengths)
    }

    /// Grid abscissae `k·dt`, `k = 0..=⌊t_max/dt⌋`.
    pub fn grid(&self) -> Vec<f64> {
        let steps = (self.t_max / self.dt + 1e-9).floor() as usize;
        (0..=steps).map(|k| k as f64 * self.dt).collect()
    }
}

/// One row of a series. `None` marks a grid point where the protocol's
/// post-selection succeeds with zero weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeSeriesRecord {
    pub t_lambda: f64,
    pub mu: f64,
    pub fidelity: Option<f64>,
    pub hss: Option<f64>,
    pub chi: Option<f64>,
    pub n_cumulative: f64,
    pub norm: Option<f64>,
}

impl TimeSeriesRecord {
    pub fn is_degenerate(&self) -> bool {
        self.fidelity.is_none()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSeries {
    pub label: String,
    pub records: Vec<TimeSeriesRecord>,
}

impl LabeledSeries {
    pub fn final_non_markovianity(&self) -> f64 {
        self.records.last().map_or(0.0, |r| r.n_cumulative)
    }
}

pub fn run_scenario(params: &ProtocolParams) -> Result<Vec<TimeSeriesRecord>> {
    params.validate()?;
    let protocol = params.protocol();
    let mut records = Vec::new();
    for t_lambda in params.grid() {
        let mu_val = mu(t_lambda / params.bath.lambda(), &params.bath)?;
        let (fid, hss, norm) = match protocol.output(&params.input, mu_val) {
            Ok(out) => (
                Some(fidelity(&params.input, &out)),
                Some(hss_analytic(protocol, &params.input, mu_val)?),
                Some(out.norm),
            ),
            Err(Error::DegeneratePostSelection(_)) => (None, None, None),
            Err(e) => return Err(e),
        };
        records.push(TimeSeriesRecord {
            t_lambda,
            mu: mu_val,
            fidelity: fid,
            hss,
            chi: None,
            n_cumulative: 0.0,
            norm,
        });
    }
    fill_witness(&mut records)?;
    Ok(records)
}

/// χ on each contiguous run of non-degenerate rows, then the running
/// integral of its positive part across consecutive defined pairs.
fn fill_witness(records: &mut [TimeSeriesRecord]) -> Result<()> {
    let mut start = 0;
    while start < records.len() {
        if records[start].hss.is_none() {
            start += 1;
            continue;
        }
        let mut end = start;
        while end < records.len() && records[end].hss.is_some() {
            end += 1;
        }
        if end - start >= 3 {
            let run: Vec<(f64, f64)> = records[start..end]
                .iter()
                .map(|r| (r.t_lambda, r.hss.unwrap_or_default()))
                .collect();
            for (rec, (_, chi)) in records[start..end].iter_mut().zip(witness_chi(&run)?) {
                rec.chi = Some(chi);
            }
        }
        start = end;
    }

    let mut acc = 0.0;
    for i in 0..records.len() {
        if i > 0 {
            if let (Some(a), Some(b)) = (records[i - 1].chi, records[i].chi) {
                let h = records[i].t_lambda - records[i - 1].t_lambda;
                acc += 0.5 * (a.max(0.0) + b.max(0.0)) * h;
            }
        }
        records[i].n_cumulative = acc;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepAxis {
    Gamma0OverLambda,
    P,
    Q,
    QPrime,
    Theta,
    Phi,
}

impl SweepAxis {
    pub const ALL: [SweepAxis; 6] = [
        SweepAxis::Gamma0OverLambda,
        SweepAxis::P,
        SweepAxis::Q,
        SweepAxis::QPrime,
        SweepAxis::Theta,
        SweepAxis::Phi,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            SweepAxis::Gamma0OverLambda => "gamma0_over_lambda",
            SweepAxis::P => "p",
            SweepAxis::Q => "q",
            SweepAxis::QPrime => "q_prime",
            SweepAxis::Theta => "theta",
            SweepAxis::Phi => "phi",
        }
    }

    /// Copy of `base` with this axis set to `value`.
    pub fn apply(&self, base: &ProtocolParams, value: f64) -> Result<ProtocolParams> {
        let mut p = *base;
        let s = base.strengths;
        match self {
            SweepAxis::Gamma0OverLambda => p.bath = BathParams::new(value, base.bath.lambda())?,
            SweepAxis::P => p.strengths = MeasurementStrengths::new(value, s.q, s.q_prime)?,
            SweepAxis::Q => p.strengths = MeasurementStrengths::new(s.p, value, s.q_prime)?,
            SweepAxis::QPrime => p.strengths = MeasurementStrengths::new(s.p, s.q, value)?,
            SweepAxis::Theta => p.input = InputState::new(value, base.input.phi())?,
            SweepAxis::Phi => p.input = InputState::new(base.input.theta(), value)?,
        }
        Ok(p)
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepAxis {
    type Err = UnknownName;

    fn from_str(s: &str) -> Result<Self, UnknownName> {
        SweepAxis::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| UnknownName(s.into()))
    }
}

/// Labeled parameter sets for a sweep, in the order of `values`.
pub fn sweep_points(
    base: &ProtocolParams,
    axis: SweepAxis,
    values: &[f64],
) -> Result<Vec<(String, ProtocolParams)>> {
    if values.is_empty() {
        return Err(Error::EmptySweep);
    }
    values
        .iter()
        .map(|&v| Ok((format!("{axis}={v}"), axis.apply(base, v)?)))
        .collect()
}

/// Runs one series per value on the shared grid of `base`.
pub fn sweep(base: &ProtocolParams, axis: SweepAxis, values: &[f64]) -> Result<Vec<LabeledSeries>> {
    sweep_points(base, axis, values)?
        .into_iter()
        .map(|(label, params)| {
            Ok(LabeledSeries {
                label,
                records: run_scenario(&params)?,
            })
        })
        .collect()
}
