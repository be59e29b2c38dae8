//! Oscillator-inspired dynamical systems for Boolean satisfiability.
//!
//! System I is a gradient flow whose zero-energy fixed points are 3-SAT
//! solutions. System II is an injection-locked phase system whose energy minima
//! are Max-NAE-3-SAT optima. Both are integrated with a fixed-step RK4 scheme
//! plus additive noise and read out as Boolean assignments, and every result can
//! be checked against the exhaustive oracles in [`oracle`].

pub mod dimacs;
pub mod error;
pub mod formula;
pub mod generate;
pub mod gradcheck;
pub mod integrator;
pub mod kernel;
pub mod oracle;
pub mod readout;
pub mod solve;
pub mod system_one;
pub mod system_two;
pub mod trace;

pub use dimacs::{parse_dimacs, parse_dimacs_with, serialize_dimacs, DuplicatePolicy, ParseOptions};
pub use error::{Error, Result};
pub use formula::{eval_assignment, Assignment, Clause, ClauseStats, Formula, Literal};
pub use generate::generate_random_3sat;
pub use gradcheck::{check_gradients, GradCheck, GradCheckReport};
pub use integrator::{
    integrate, integrate_from_random, integrate_with_rng, rk4_drift_step, sde_step, Dynamics,
    IntegratorConfig, Observer, SystemKind,
};
pub use kernel::{kernel_leave_one_out, kernel_value, theta, PhaseState, S2Mode, SystemParams};
pub use oracle::{brute_force, brute_force_with_cap, Objective, OracleResult};
pub use readout::{binarize_system1, binarize_system2, convergence_check, ConvergenceStatus, ReadoutResult};
pub use solve::{restart_trace, run_solve, RestartRecord, SolveConfig, SolveReport, SolveStatus};

pub use system_one::{energy_v, grad_v, rhs_system1};
pub use system_two::{
    clause_energy_table, discrete_clause_energy, energy_e, pair_term_t, rhs_averaged, rhs_full,
    ClauseEnergyRow, CornerPhases,
};
pub use trace::{emit_trace, Trace, TraceFormat, TraceRow};

/// The bundled 6-variable, 10-clause instance used throughout the tests.
pub const SAMPLE_CNF: &str = include_str!("../fixtures/sample.cnf");
