use oscsat::integrator::seeded_rng;
use oscsat::*;

fn linear_error(dt: f64) -> f64 {
    let lambda = -1.3;
    let steps = (2.0 / dt).round() as usize;
    let mut p = PhaseState::new(0.0, vec![1.0]);
    for _ in 0..steps {
        p = rk4_drift_step(|s: &PhaseState, out: &mut [f64]| out[0] = lambda * s.alpha[0], &p, dt).unwrap();
    }
    (p.alpha[0] - (lambda * 2.0f64).exp()).abs()
}

#[test]
fn rk4_is_fourth_order() {
    let (e1, e2) = (linear_error(0.1), linear_error(0.05));
    assert!((e1 / e2).log2() > 3.7);
}

#[test]
fn rk4_handles_time_dependent_rhs() {
    // d alpha/dt = cos t, alpha(0) = 0
    let mut p = PhaseState::new(0.0, vec![0.0]);
    for _ in 0..100 {
        p = rk4_drift_step(|s: &PhaseState, out: &mut [f64]| out[0] = s.t.cos(), &p, 0.01).unwrap();
    }
    assert!((p.alpha[0] - 1f64.sin()).abs() < 1e-10);
    assert!((p.t - 1.0).abs() < 1e-12);
}

#[test]
fn rk4_rejects_non_finite() {
    let p = PhaseState::new(0.0, vec![1.0]);
    assert!(rk4_drift_step(|_: &PhaseState, out: &mut [f64]| out[0] = f64::NAN, &p, 0.1).is_err());
}

#[test]
fn wiener_increments_have_expected_moments() {
    let cfg = IntegratorConfig {
        dt: 1e-3,
        a_n: 0.5,
        ..Default::default()
    };
    let mut rng = seeded_rng(7);
    let n = 200_000;
    let mut p = PhaseState::new(0.0, vec![0.0]);
    let (mut sum, mut sq) = (0.0, 0.0);
    for _ in 0..n {
        let next = sde_step(|_: &PhaseState, out: &mut [f64]| out.fill(0.0), &p, &cfg, &mut rng).unwrap();
        let d = next.alpha[0] - p.alpha[0];
        sum += d;
        sq += d * d;
        p = next;
    }
    let var = cfg.a_n * cfg.a_n * cfg.dt;
    let mean = sum / n as f64;
    let sample_var = sq / n as f64 - mean * mean;
    assert!(mean.abs() < 4.0 * (var / n as f64).sqrt());
    assert!((sample_var / var - 1.0).abs() < 0.02, "{sample_var} vs {var}");
}

#[test]
fn zero_noise_is_deterministic_drift() {
    let f = parse_dimacs(SAMPLE_CNF).unwrap();
    let d = Dynamics::new(SystemKind::Two, &f, SystemParams::system_two()).unwrap();
    let init = PhaseState::new(0.0, vec![0.1, 0.2, 0.3, 0.4, 0.5, 0.6]);
    let mut a = IntegratorConfig {
        a_n: 0.0,
        t_end: 1.0,
        ..Default::default()
    };
    let t1 = integrate(&d, &a, init.clone(), &mut ()).unwrap();
    a.rng_seed = 99;
    let t2 = integrate(&d, &a, init, &mut ()).unwrap();
    assert_eq!(t1.rows, t2.rows);
}

#[test]
fn traces_are_reproducible_and_sized() {
    let f = parse_dimacs(SAMPLE_CNF).unwrap();
    for kind in [SystemKind::One, SystemKind::Two] {
        let params = match kind {
            SystemKind::One => SystemParams::system_one(),
            SystemKind::Two => SystemParams::system_two(),
        };
        let d = Dynamics::new(kind, &f, params).unwrap();
        let cfg = IntegratorConfig {
            t_end: 2.5,
            sample_stride: 7,
            rng_seed: 4,
            ..Default::default()
        };
        let a = integrate_from_random(&d, &cfg, &mut ()).unwrap();
        let b = integrate_from_random(&d, &cfg, &mut ()).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.rows.len(), 2500 / 7 + 1);
        assert!(a.rows.iter().all(|r| r.step % 7 == 0));
        let other = integrate_from_random(&d, &IntegratorConfig { rng_seed: 5, ..cfg }, &mut ()).unwrap();
        assert_ne!(a.rows, other.rows);
    }
}

#[test]
fn observer_can_stop_early() {
    let f = parse_dimacs(SAMPLE_CNF).unwrap();
    let d = Dynamics::new(SystemKind::One, &f, SystemParams::system_one()).unwrap();
    let mut stop = |rows: &[TraceRow]| rows.len() == 4;
    let t = integrate_from_random(&d, &IntegratorConfig::default(), &mut stop).unwrap();
    assert_eq!(t.rows.len(), 4);
    assert_eq!(t.last().unwrap().step, 300);
}

#[test]
fn config_validation() {
    let p = SystemParams::system_one();
    assert!(IntegratorConfig { dt: 0.2, ..Default::default() }.validate(&p).is_err());
    assert!(IntegratorConfig { sample_stride: 0, ..Default::default() }.validate(&p).is_err());
    assert!(IntegratorConfig { t_end: -1.0, ..Default::default() }.validate(&p).is_err());
    assert!(IntegratorConfig::default().validate(&p).is_ok());
}

#[test]
fn json_trace_round_trips_bit_exactly() {
    let f = parse_dimacs(SAMPLE_CNF).unwrap();
    let d = Dynamics::new(SystemKind::Two, &f, SystemParams::system_two()).unwrap();
    let cfg = IntegratorConfig {
        t_end: 0.5,
        rng_seed: 8,
        ..Default::default()
    };
    let t = integrate_from_random(&d, &cfg, &mut ()).unwrap();
    let back = trace::trace_from_json(&trace::trace_to_json(&t)).unwrap();
    assert_eq!(t, back);
    let csv = trace::trace_to_csv(&t);
    assert_eq!(csv.lines().count(), t.rows.len() + 1);
    assert!(csv.starts_with("step,t,energy,sat_count,nae_count,alpha_1,"));
}

#[test]
fn normalized_kernel_system_two_finds_nae_optimum() {
    let f = parse_dimacs(SAMPLE_CNF).unwrap();
    let params = SystemParams {
        kernel_normalized: true,
        ..SystemParams::system_two()
    };
    let d = Dynamics::new(SystemKind::Two, &f, params).unwrap();
    let hits = (0..20u64)
        .filter(|&seed| {
            let cfg = IntegratorConfig {
                rng_seed: seed,
                ..Default::default()
            };
            let t = integrate_from_random(&d, &cfg, &mut ()).unwrap();
            t.rows.iter().any(|r| r.nae_count == 10)
        })
        .count();
    assert!(hits >= 18, "{hits}/20");
}
