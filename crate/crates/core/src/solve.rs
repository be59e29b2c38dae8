//! Restart loop: integrate from fresh random states until a restart hits the
//! target or the budget runs out, keeping the best assignment seen in any sample.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{eval_assignment, Assignment, Formula};
use crate::integrator::{integrate_from_random, Dynamics, IntegratorConfig, SystemKind};
use crate::kernel::SystemParams;
use crate::oracle::{brute_force, Objective, DEFAULT_ORACLE_CAP};
use crate::readout::{convergence_check, ConvergenceStatus};
use crate::trace::{Trace, TraceRow};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveConfig {
    pub system: SystemKind,
    pub objective: Objective,
    pub params: SystemParams,
    /// Per-restart integration settings; `rng_seed` is the base seed.
    pub integrator: IntegratorConfig,
    pub restarts: usize,
    /// Worker threads; `None` uses every available core.
    pub workers: Option<usize>,
    /// Run the exhaustive oracle (when N is within its cap) to fix the target value.
    pub use_oracle: bool,
    /// Convergence window length in periods.
    pub window_periods: f64,
}

impl SolveConfig {
    pub fn new(system: SystemKind, params: SystemParams) -> Self {
        let objective = match system {
            SystemKind::One => Objective::Sat,
            SystemKind::Two => Objective::MaxNae,
        };
        Self {
            system,
            objective,
            params,
            integrator: IntegratorConfig::default(),
            restarts: 20,
            workers: None,
            use_oracle: true,
            window_periods: 3.0,
        }
    }

    /// Seed of restart `k`.
    pub fn restart_seed(&self, k: usize) -> u64 {
        self.integrator.rng_seed.wrapping_add(k as u64)
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.integrator.validate(&self.params)?;
        if self.restarts == 0 {
            return Err(Error::InvalidParams("need at least one restart".into()));
        }
        if self.workers == Some(0) {
            return Err(Error::InvalidParams("worker count must be positive".into()));
        }
        if self.window_periods.is_nan() || self.window_periods <= 0.0 {
            return Err(Error::InvalidParams("convergence window must be positive".into()));
        }
        Ok(())
    }

    fn window_rows(&self) -> usize {
        let sample_dt = self.integrator.dt * self.integrator.sample_stride as f64;
        ((self.window_periods * self.params.period() / sample_dt).ceil() as usize).max(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveStatus {
    Solved,
    BestEffort,
    InputError,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestartRecord {
    pub index: usize,
    pub seed: u64,
    pub steps: usize,
    pub converged: bool,
    pub final_energy: f64,
    pub final_sat_count: usize,
    pub final_nae_count: usize,
    pub best_value: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub status: SolveStatus,
    pub objective: Objective,
    pub system: SystemKind,
    pub best_assignment: Assignment,
    pub best_value: usize,
    /// Value that counts as solved: M, or the oracle optimum when it ran.
    pub target_value: usize,
    pub oracle_value: Option<usize>,
    pub restarts_used: usize,
    pub total_steps: usize,
    pub wall_time: f64,
    pub restarts: Vec<RestartRecord>,
    pub params: SystemParams,
    pub integrator: IntegratorConfig,
}

impl SolveReport {
    pub fn exit_code(&self) -> i32 {
        match self.status {
            SolveStatus::Solved => 0,
            SolveStatus::BestEffort => 1,
            SolveStatus::InputError => 2,
        }
    }
}

fn objective_value(objective: Objective, row: &TraceRow) -> usize {
    match objective {
        Objective::Sat | Objective::MaxSat => row.sat_count,
        Objective::MaxNae => row.nae_count,
    }
}

struct RestartOutcome {
    record: RestartRecord,
    best: (usize, Assignment),
    trace: Trace,
}

fn run_restart(
    dynamics: &Dynamics<'_>,
    cfg: &SolveConfig,
    target: usize,
    index: usize,
) -> Result<RestartOutcome> {
    let seed = cfg.restart_seed(index);
    let icfg = IntegratorConfig {
        rng_seed: seed,
        ..cfg.integrator
    };
    let window = cfg.window_rows();
    let formula = dynamics.formula();
    let objective = cfg.objective;
    let mut best: Option<(usize, Assignment)> = None;
    let mut converged = false;
    let mut observer = |rows: &[TraceRow]| {
        let row = rows.last().expect("observer sees at least one row");
        let value = objective_value(objective, row);
        if best.as_ref().is_none_or(|(v, _)| value > *v) {
            best = Some((value, row.x.clone()));
        }
        if rows.len() < window {
            return false;
        }
        let status = convergence_check(&rows[rows.len() - window..], formula, objective);
        // A Max-NAE restart parked at a sub-target optimum keeps running so that
        // noise gets the chance to move it.
        converged = status == ConvergenceStatus::Converged && value >= target;
        converged
    };
    let trace = integrate_from_random(dynamics, &icfg, &mut observer)?;
    let last = trace.last().expect("trace has an initial row").clone();
    let best = best.expect("at least one row was observed");
    Ok(RestartOutcome {
        record: RestartRecord {
            index,
            seed,
            steps: last.step,
            converged,
            final_energy: last.energy,
            final_sat_count: last.sat_count,
            final_nae_count: last.nae_count,
            best_value: best.0,
        },
        best,
        trace,
    })
}

fn solve_target(f: &Formula, cfg: &SolveConfig) -> Result<(usize, Option<usize>)> {
    let oracle_value = if cfg.use_oracle && f.num_vars() <= DEFAULT_ORACLE_CAP {
        Some(brute_force(f, cfg.objective)?.best_value)
    } else {
        None
    };
    let target = match cfg.objective {
        Objective::Sat => f.num_clauses(),
        Objective::MaxSat | Objective::MaxNae => oracle_value.unwrap_or(f.num_clauses()),
    };
    Ok((target, oracle_value))
}

/// Replays restart `index` of a solve and returns its sampled trajectory.
pub fn restart_trace(f: &Formula, cfg: &SolveConfig, index: usize) -> Result<Trace> {
    cfg.validate()?;
    let dynamics = Dynamics::new(cfg.system, f, cfg.params)?;
    let (target, _) = solve_target(f, cfg)?;
    Ok(run_restart(&dynamics, cfg, target, index)?.trace)
}

pub fn run_solve(f: &Formula, cfg: &SolveConfig) -> Result<SolveReport> {
    let started = Instant::now();
    cfg.validate()?;
    let dynamics = Dynamics::new(cfg.system, f, cfg.params)?;

    let (target, oracle_value) = solve_target(f, cfg)?;

    let workers = cfg
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?;

    // Restarts run a batch at a time; results are consumed in index order and
    // truncated at the first one that reaches the target, so the report does not
    // depend on the worker count.
    let mut records = Vec::new();
    let mut best: Option<(usize, Assignment)> = None;
    let mut solved = false;
    let mut next = 0;
    while next < cfg.restarts && !solved {
        let batch_end = (next + workers).min(cfg.restarts);
        let outcomes: Vec<Result<RestartOutcome>> = pool.install(|| {
            (next..batch_end)
                .into_par_iter()
                .map(|k| run_restart(&dynamics, cfg, target, k).map(|mut o| {
                    o.trace.rows = Vec::new();
                    o
                }))
                .collect()
        });
        for outcome in outcomes {
            let outcome = outcome?;
            if best.as_ref().is_none_or(|(v, _)| outcome.best.0 > *v) {
                best = Some(outcome.best.clone());
            }
            records.push(outcome.record);
            if outcome.best.0 >= target {
                solved = true;
                break;
            }
        }
        next = batch_end;
    }

    let (_, best_assignment) = best.expect("at least one restart ran");
    // Re-derive the value from the assignment rather than trusting the trace.
    let stats = eval_assignment(f, &best_assignment)?;
    let best_value = match cfg.objective {
        Objective::Sat | Objective::MaxSat => stats.sat_count,
        Objective::MaxNae => stats.nae_count,
    };
    let status = if best_value >= target {
        SolveStatus::Solved
    } else {
        SolveStatus::BestEffort
    };
    Ok(SolveReport {
        status,
        objective: cfg.objective,
        system: cfg.system,
        best_assignment,
        best_value,
        target_value: target,
        oracle_value,
        restarts_used: records.len(),
        total_steps: records.iter().map(|r| r.steps).sum(),
        wall_time: started.elapsed().as_secs_f64(),
        restarts: records,
        params: cfg.params,
        integrator: cfg.integrator,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimacs::parse_dimacs;

    #[test]
    fn single_variable_formula() {
        let f = Formula::from_dimacs_clauses(1, &[&[1]]).unwrap();
        let mut cfg = SolveConfig::new(SystemKind::One, SystemParams::system_one());
        cfg.restarts = 3;
        cfg.integrator.t_end = 20.0;
        let r = run_solve(&f, &cfg).unwrap();
        assert_eq!(r.status, SolveStatus::Solved);
        assert_eq!(r.best_assignment.bits(), &[true]);
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn report_is_independent_of_worker_count() {
        let f = parse_dimacs(crate::SAMPLE_CNF).unwrap();
        let mut cfg = SolveConfig::new(SystemKind::Two, SystemParams::system_two());
        cfg.restarts = 3;
        cfg.integrator.t_end = 5.0;
        cfg.workers = Some(1);
        let mut a = run_solve(&f, &cfg).unwrap();
        cfg.workers = Some(3);
        let mut b = run_solve(&f, &cfg).unwrap();
        a.wall_time = 0.0;
        b.wall_time = 0.0;
        assert_eq!(a, b);
        let best = a.restarts.iter().max_by_key(|r| r.best_value).unwrap();
        let t = restart_trace(&f, &cfg, best.index).unwrap();
        assert_eq!(t.last().unwrap().step, best.steps);
    }

    #[test]
    fn invalid_config() {
        let f = Formula::from_dimacs_clauses(1, &[&[1]]).unwrap();
        let mut cfg = SolveConfig::new(SystemKind::One, SystemParams::system_one());
        cfg.restarts = 0;
        assert!(run_solve(&f, &cfg).is_err());
        let mut cfg = SolveConfig::new(SystemKind::Two, SystemParams {
            s2_mode: crate::kernel::S2Mode::AveragedPrinted,
            ..SystemParams::system_two()
        });
        cfg.restarts = 1;
        // averaged dynamics need three literals per clause
        assert!(matches!(run_solve(&f, &cfg), Err(Error::ClauseArity { .. })));
    }
}
