use nmteleport_core::channels::{mu, BathParams, MeasurementStrengths};
use nmteleport_core::scenarios::{run_scenario, sweep, ProtocolParams, Scenario, SweepAxis};
use nmteleport_core::teleport::InputState;

/// RK4 on G'' + λG' + (γ₀λ/2)G = 0, G(0) = 1, G'(0) = 0, with λ = 1; μ = G².
fn mu_by_rk4(g: f64, t_end: f64, steps: usize) -> Vec<(f64, f64)> {
    let h = t_end / steps as f64;
    let rhs = |y: [f64; 2]| [y[1], -y[1] - 0.5 * g * y[0]];
    let mut y = [1.0, 0.0];
    let mut out = vec![(0.0, 1.0)];
    for k in 1..=steps {
        let k1 = rhs(y);
        let k2 = rhs([y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]]);
        let k3 = rhs([y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]]);
        let k4 = rhs([y[0] + h * k3[0], y[1] + h * k3[1]]);
        for i in 0..2 {
            y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        out.push((k as f64 * h, y[0] * y[0]));
    }
    out
}

#[test]
fn kernel_matches_integrated_amplitude_equation() {
    for g in [0.1, 0.5, 2.0, 20.0, 100.0] {
        let bath = BathParams::with_ratio(g).unwrap();
        for (t, want) in mu_by_rk4(g, 3.0, 60_000).into_iter().step_by(500) {
            let got = mu(t, &bath).unwrap();
            assert!((got - want).abs() < 1e-9, "g={g} t={t}: {got} vs {want}");
        }
    }
}

fn base(scenario: Scenario, strengths: MeasurementStrengths) -> ProtocolParams {
    ProtocolParams::new(
        scenario,
        BathParams::with_ratio(20.0).unwrap(),
        InputState::new(1.1, 0.4).unwrap(),
        strengths,
        1.0,
        1e-2,
    )
    .unwrap()
}

#[test]
fn sweep_equals_individual_runs() {
    let params = base(
        Scenario::WmQmr,
        MeasurementStrengths::new(0.0, 0.5, 0.0).unwrap(),
    );
    let values = [0.0, 0.4, 0.8];
    let series = sweep(&params, SweepAxis::P, &values).unwrap();
    assert_eq!(series.len(), 3);
    for (s, &p) in series.iter().zip(&values) {
        let single = base(
            Scenario::WmQmr,
            MeasurementStrengths::new(p, 0.5, 0.0).unwrap(),
        );
        assert_eq!(s.records, run_scenario(&single).unwrap());
        assert_eq!(s.label, format!("p={p}"));
    }
}

#[test]
fn records_stay_physical_for_every_scenario() {
    let strengths = MeasurementStrengths::new(0.6, 0.7, 0.8).unwrap();
    for scenario in Scenario::ALL {
        let records = run_scenario(&base(scenario, strengths)).unwrap();
        assert_eq!(records.len(), 101);
        for w in records.windows(2) {
            assert!(w[1].n_cumulative >= w[0].n_cumulative);
        }
        for r in &records {
            let f = r.fidelity.unwrap();
            assert!((0.0..=1.0).contains(&f));
            assert!(r.hss.unwrap() >= 0.0);
            assert!(r.norm.unwrap() > 0.0 && r.norm.unwrap() <= 1.0 + 1e-12);
            assert!((0.0..=1.0).contains(&r.mu));
        }
    }
}
