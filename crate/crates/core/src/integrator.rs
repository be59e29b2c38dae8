//! Fixed-step RK4 drift with additive Wiener increments, and trace sampling.
//!
//! One step of `d alpha = f(alpha, t) dt + a_n dW` is the classical RK4 update of
//! the drift followed by `a_n sqrt(dt) xi_i` with independent standard normal
//! `xi_i`. All randomness comes from one seeded ChaCha stream per run, so a run
//! is a pure function of its inputs.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{eval_assignment, Formula};
use crate::kernel::{PhaseState, S2Mode, SystemParams};
use crate::readout::{binarize_system1, binarize_system2, ReadoutResult};
use crate::system_one;
use crate::system_two::{self, NaeLandscape};
use crate::trace::{Trace, TraceMeta, TraceRow};

pub type Rng64 = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SystemKind {
    One,
    Two,
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SystemKind::One => "one",
            SystemKind::Two => "two",
        })
    }
}

impl FromStr for SystemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" | "one" | "I" | "i" => Ok(SystemKind::One),
            "2" | "two" | "II" | "ii" => Ok(SystemKind::Two),
            other => Err(Error::InvalidParams(format!("unknown system `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub dt: f64,
    pub t_end: f64,
    /// Noise amplitude per unit time; each step adds `a_n sqrt(dt)` times a normal draw.
    pub a_n: f64,
    pub rng_seed: u64,
    pub sample_stride: usize,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            t_end: 100.0,
            a_n: 5e-4,
            rng_seed: 0,
            sample_stride: 100,
        }
    }
}

impl IntegratorConfig {
    pub fn validate(&self, params: &SystemParams) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidParams(format!("dt must be positive, got {}", self.dt)));
        }
        if self.dt >= params.period() / 10.0 {
            return Err(Error::InvalidParams(format!(
                "dt = {} must be below a tenth of the period {}",
                self.dt,
                params.period()
            )));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "t_end must be nonnegative, got {}",
                self.t_end
            )));
        }
        if !(self.a_n >= 0.0 && self.a_n.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "noise amplitude must be nonnegative, got {}",
                self.a_n
            )));
        }
        if self.sample_stride == 0 {
            return Err(Error::InvalidParams("sample stride must be positive".into()));
        }
        Ok(())
    }

    pub fn num_steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }
}

/// Classical RK4 on `alpha`; `t` advances by `dt`. `rhs(p, out)` writes d alpha/dt.
pub fn rk4_drift_step<F>(mut rhs: F, p: &PhaseState, dt: f64) -> Result<PhaseState>
where
    F: FnMut(&PhaseState, &mut [f64]),
{
    let mut ws = Rk4Workspace::new(p.alpha.len());
    let mut next = p.clone();
    ws.step(&mut rhs, &mut next, dt)?;
    Ok(next)
}

/// RK4 drift step followed by additive Wiener increments.
pub fn sde_step<F, R>(rhs: F, p: &PhaseState, cfg: &IntegratorConfig, rng: &mut R) -> Result<PhaseState>
where
    F: FnMut(&PhaseState, &mut [f64]),
    R: Rng + ?Sized,
{
    let mut next = rk4_drift_step(rhs, p, cfg.dt)?;
    add_noise(&mut next.alpha, cfg.a_n, cfg.dt, rng);
    Ok(next)
}

fn add_noise<R: Rng + ?Sized>(alpha: &mut [f64], a_n: f64, dt: f64, rng: &mut R) {
    if a_n == 0.0 {
        return;
    }
    let scale = a_n * dt.sqrt();
    for a in alpha {
        let xi: f64 = rng.sample(StandardNormal);
        *a += scale * xi;
    }
}

struct Rk4Workspace {
    k1: Vec<f64>,
    k2: Vec<f64>,
    k3: Vec<f64>,
    k4: Vec<f64>,
    probe: PhaseState,
}

impl Rk4Workspace {
    fn new(n: usize) -> Self {
        Self {
            k1: vec![0.0; n],
            k2: vec![0.0; n],
            k3: vec![0.0; n],
            k4: vec![0.0; n],
            probe: PhaseState::zeros(n),
        }
    }

    fn step<F>(&mut self, rhs: &mut F, p: &mut PhaseState, dt: f64) -> Result<()>
    where
        F: FnMut(&PhaseState, &mut [f64]),
    {
        let Self { k1, k2, k3, k4, probe } = self;
        rhs(p, k1);
        stage(probe, p, k1, 0.5 * dt);
        rhs(probe, k2);
        stage(probe, p, k2, 0.5 * dt);
        rhs(probe, k3);
        stage(probe, p, k3, dt);
        rhs(probe, k4);
        let finite = [&*k1, &*k2, &*k3, &*k4]
            .iter()
            .all(|k| k.iter().all(|v| v.is_finite()));
        if !finite {
            return Err(Error::NonFinite { step: 0, row: 0 });
        }
        for (q, a) in p.alpha.iter_mut().enumerate() {
            *a += dt / 6.0 * (k1[q] + 2.0 * k2[q] + 2.0 * k3[q] + k4[q]);
        }
        p.t += dt;
        Ok(())
    }
}

fn stage(probe: &mut PhaseState, base: &PhaseState, k: &[f64], h: f64) {
    probe.t = base.t + h;
    for ((dst, a), d) in probe.alpha.iter_mut().zip(&base.alpha).zip(k) {
        *dst = a + h * d;
    }
}

/// Right-hand side, energy and readout of one system on one formula.
#[derive(Debug, Clone)]
pub struct Dynamics<'a> {
    kind: SystemKind,
    formula: &'a Formula,
    params: SystemParams,
    landscape: Option<NaeLandscape>,
}

impl<'a> Dynamics<'a> {
    pub fn new(kind: SystemKind, formula: &'a Formula, params: SystemParams) -> Result<Self> {
        params.validate()?;
        let landscape = match (kind, params.s2_mode) {
            (SystemKind::One, _) => None,
            (SystemKind::Two, S2Mode::Full) => NaeLandscape::new(formula, &params).ok(),
            (SystemKind::Two, _) => Some(NaeLandscape::new(formula, &params)?),
        };
        Ok(Self {
            kind,
            formula,
            params,
            landscape,
        })
    }

    pub fn kind(&self) -> SystemKind {
        self.kind
    }

    pub fn formula(&self) -> &Formula {
        self.formula
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    /// d alpha/dt. Averaged System II modes act on phi = omega alpha, so their
    /// d phi/dt is divided by omega.
    pub fn rhs_into(&self, p: &PhaseState, out: &mut [f64]) {
        match (self.kind, self.params.s2_mode) {
            (SystemKind::One, _) => system_one::rhs_into(self.formula, &self.params, p, out),
            (SystemKind::Two, S2Mode::Full) => {
                system_two::rhs_full_into(self.formula, &self.params, p, out)
            }
            (SystemKind::Two, mode) => {
                let phi = self.phases(p);
                let land = self.landscape.as_ref().expect("averaged landscape");
                land.rhs_into(&phi, mode, out);
                for o in out.iter_mut() {
                    *o /= self.params.omega;
                }
            }
        }
    }

    pub fn rhs(&self, p: &PhaseState) -> Vec<f64> {
        let mut out = vec![0.0; p.alpha.len()];
        self.rhs_into(p, &mut out);
        out
    }

    fn phases(&self, p: &PhaseState) -> Vec<f64> {
        p.alpha.iter().map(|a| self.params.omega * a).collect()
    }

    pub fn energy(&self, p: &PhaseState) -> f64 {
        match self.kind {
            SystemKind::One => system_one::energy_v(self.formula, &self.params, p),
            SystemKind::Two => self
                .landscape
                .as_ref()
                .map_or(f64::NAN, |land| land.energy(&self.phases(p))),
        }
    }

    pub fn readout(&self, p: &PhaseState) -> ReadoutResult {
        match self.kind {
            SystemKind::One => binarize_system1(p, &self.params),
            SystemKind::Two => binarize_system2(p, &self.params),
        }
    }

    pub fn row(&self, step: usize, p: &PhaseState) -> TraceRow {
        let x = self.readout(p).assignment;
        let stats = eval_assignment(self.formula, &x).expect("readout length matches formula");
        TraceRow {
            step,
            t: p.t,
            energy: self.energy(p),
            sat_count: stats.sat_count,
            nae_count: stats.nae_count,
            alpha: p.alpha.clone(),
            x,
        }
    }

    /// alpha_i uniform over one period of lag, [0, 2 pi / omega).
    pub fn random_initial_state<R: Rng + ?Sized>(&self, rng: &mut R) -> PhaseState {
        let period = self.params.period();
        PhaseState::new(
            0.0,
            (0..self.formula.num_vars())
                .map(|_| rng.random_range(0.0..period))
                .collect(),
        )
    }
}

/// Called after each recorded row; returning `true` stops the run.
pub trait Observer {
    fn observe(&mut self, rows: &[TraceRow]) -> bool;
}

impl Observer for () {
    fn observe(&mut self, _rows: &[TraceRow]) -> bool {
        false
    }
}

impl<F: FnMut(&[TraceRow]) -> bool> Observer for F {
    fn observe(&mut self, rows: &[TraceRow]) -> bool {
        self(rows)
    }
}

/// Integrates from `initial` for `cfg.t_end`, drawing noise from `rng`, recording a
/// row at step 0 and every `cfg.sample_stride` steps.
pub fn integrate_with_rng<R: Rng + ?Sized>(
    dynamics: &Dynamics<'_>,
    cfg: &IntegratorConfig,
    initial: PhaseState,
    rng: &mut R,
    observer: &mut dyn Observer,
) -> Result<Trace> {
    cfg.validate(dynamics.params())?;
    let n = dynamics.formula().num_vars();
    if initial.alpha.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: initial.alpha.len(),
        });
    }
    if !initial.is_finite() {
        return Err(Error::NonFinite { step: 0, row: 0 });
    }
    let steps = cfg.num_steps();
    let t0 = initial.t;
    let mut state = initial;
    let mut ws = Rk4Workspace::new(n);
    let mut rows = Vec::with_capacity(steps / cfg.sample_stride + 1);
    rows.push(dynamics.row(0, &state));
    if observer.observe(&rows) {
        return Ok(finish(dynamics, cfg, rows));
    }
    let mut rhs = |p: &PhaseState, out: &mut [f64]| dynamics.rhs_into(p, out);
    for step in 1..=steps {
        ws.step(&mut rhs, &mut state, cfg.dt).map_err(|_| Error::NonFinite {
            step,
            row: rows.len(),
        })?;
        state.t = t0 + step as f64 * cfg.dt;
        add_noise(&mut state.alpha, cfg.a_n, cfg.dt, rng);
        if !state.is_finite() {
            return Err(Error::NonFinite {
                step,
                row: rows.len(),
            });
        }
        if step % cfg.sample_stride == 0 {
            rows.push(dynamics.row(step, &state));
            if observer.observe(&rows) {
                break;
            }
        }
    }
    Ok(finish(dynamics, cfg, rows))
}

/// Like [`integrate_with_rng`] with a generator seeded from `cfg.rng_seed`.
pub fn integrate(
    dynamics: &Dynamics<'_>,
    cfg: &IntegratorConfig,
    initial: PhaseState,
    observer: &mut dyn Observer,
) -> Result<Trace> {
    let mut rng = seeded_rng(cfg.rng_seed);
    integrate_with_rng(dynamics, cfg, initial, &mut rng, observer)
}

/// Draws a uniform initial state and integrates, all from the one seeded stream.
pub fn integrate_from_random(
    dynamics: &Dynamics<'_>,
    cfg: &IntegratorConfig,
    observer: &mut dyn Observer,
) -> Result<Trace> {
    let mut rng = seeded_rng(cfg.rng_seed);
    let initial = dynamics.random_initial_state(&mut rng);
    integrate_with_rng(dynamics, cfg, initial, &mut rng, observer)
}

fn finish(dynamics: &Dynamics<'_>, cfg: &IntegratorConfig, rows: Vec<TraceRow>) -> Trace {
    Trace {
        meta: TraceMeta {
            system: dynamics.kind(),
            num_vars: dynamics.formula().num_vars(),
            num_clauses: dynamics.formula().num_clauses(),
            params: *dynamics.params(),
            config: *cfg,
        },
        rows,
    }
}
