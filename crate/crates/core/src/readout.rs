//! Boolean readout of continuous phases and convergence detection.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::formula::{Assignment, Formula};
use crate::kernel::{theta, PhaseState, SystemParams};
use crate::oracle::Objective;
use crate::trace::TraceRow;

/// |cos| at or below this is a tie between the two Boolean values.
pub const TIE_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReadoutResult {
    pub assignment: Assignment,
    /// |cos| of the read phase: 1 on a corner, 0 halfway between.
    pub confidence: Vec<f64>,
    pub ambiguous: Vec<bool>,
}

fn read_cosines(cosines: impl Iterator<Item = f64>) -> ReadoutResult {
    let mut bits = Vec::new();
    let mut confidence = Vec::new();
    let mut ambiguous = Vec::new();
    for c in cosines {
        let tie = c.abs() <= TIE_EPS;
        bits.push(tie || c > 0.0);
        confidence.push(c.abs().min(1.0));
        ambiguous.push(tie);
    }
    ReadoutResult {
        assignment: Assignment::new(bits),
        confidence,
        ambiguous,
    }
}

/// x_i = 1 when the level-shifted oscillator `(1 + cos theta_i)/2` is at least 1/2.
pub fn binarize_system1(p: &PhaseState, params: &SystemParams) -> ReadoutResult {
    read_cosines((0..p.alpha.len()).map(|i| theta(p, params, i).cos()))
}

/// x_i = 1 when the phase `omega alpha_i` is closer to 0 than to pi (mod 2 pi).
pub fn binarize_system2(p: &PhaseState, params: &SystemParams) -> ReadoutResult {
    read_phases(p.alpha.iter().map(|a| params.omega * a))
}

/// Reads phases directly, wrapping each to [0, 2 pi) first.
pub fn read_phases(phi: impl Iterator<Item = f64>) -> ReadoutResult {
    read_cosines(phi.map(|ph| ph.rem_euclid(2.0 * PI).cos()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvergenceStatus {
    Converged,
    Running,
}

/// Converged when the readout is constant over `window` and, for SAT objectives,
/// every clause is satisfied; for Max-NAE the NAE count must also be constant.
pub fn convergence_check(window: &[TraceRow], f: &Formula, objective: Objective) -> ConvergenceStatus {
    let Some(first) = window.first() else {
        return ConvergenceStatus::Running;
    };
    let steady = window.iter().all(|r| r.x == first.x);
    let target = match objective {
        Objective::Sat | Objective::MaxSat => {
            window.iter().all(|r| r.sat_count == f.num_clauses())
        }
        Objective::MaxNae => window.iter().all(|r| r.nae_count == first.nae_count),
    };
    if steady && target {
        ConvergenceStatus::Converged
    } else {
        ConvergenceStatus::Running
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::eval_assignment;

    fn omega1() -> SystemParams {
        SystemParams {
            omega: 1.0,
            ..Default::default()
        }
    }

    #[test]
    fn system1_examples() {
        let p = omega1();
        let r = binarize_system1(&PhaseState::new(0.0, vec![0.0, PI, PI / 2.0]), &p);
        assert_eq!(r.assignment.bits(), &[true, false, true]);
        assert_eq!(r.confidence[0], 1.0);
        assert_eq!(r.confidence[1], 1.0);
        assert_eq!(r.ambiguous, vec![false, false, true]);
        assert!(r.confidence[2] < 0.1);
    }

    #[test]
    fn system2_examples() {
        let p = omega1();
        let r = binarize_system2(&PhaseState::new(7.0, vec![0.05, PI - 0.1, 2.0 * PI + 0.05]), &p);
        assert_eq!(r.assignment.bits(), &[true, false, true]);
        assert!(r.ambiguous.iter().all(|a| !a));
    }

    #[test]
    fn system2_ignores_time() {
        let p = SystemParams::default();
        let a = binarize_system2(&PhaseState::new(0.0, vec![0.1, 0.4]), &p);
        let b = binarize_system2(&PhaseState::new(3.3, vec![0.1, 0.4]), &p);
        assert_eq!(a, b);
    }

    #[test]
    fn global_flip_complements_readout() {
        let f = crate::generate::generate_random_3sat(6, 12, 2).unwrap();
        let phi = [0.3, 2.9, -1.2, 4.0, 0.9, 2.2];
        let a = read_phases(phi.iter().copied()).assignment;
        let b = read_phases(phi.iter().map(|p| p + PI)).assignment;
        assert_eq!(b, a.complement());
        let na = eval_assignment(&f, &a).unwrap().nae_count;
        let nb = eval_assignment(&f, &b).unwrap().nae_count;
        assert_eq!(na, nb);
    }

    fn row(bits: &[bool], sat: usize, nae: usize) -> TraceRow {
        TraceRow {
            step: 0,
            t: 0.0,
            energy: 0.0,
            sat_count: sat,
            nae_count: nae,
            alpha: vec![0.0; bits.len()],
            x: Assignment::new(bits.to_vec()),
        }
    }

    #[test]
    fn convergence_examples() {
        let f = Formula::from_dimacs_clauses(2, &[&[1, 2], &[-1, 2]]).unwrap();
        let solved = vec![row(&[true, true], 2, 1); 3];
        assert_eq!(convergence_check(&solved, &f, Objective::Sat), ConvergenceStatus::Converged);
        let flip = vec![
            row(&[true, true], 2, 1),
            row(&[false, true], 2, 1),
            row(&[true, true], 2, 1),
        ];
        assert_eq!(convergence_check(&flip, &f, Objective::Sat), ConvergenceStatus::Running);
        let short = vec![row(&[true, false], 1, 1); 3];
        assert_eq!(convergence_check(&short, &f, Objective::Sat), ConvergenceStatus::Running);
        assert_eq!(convergence_check(&short, &f, Objective::MaxNae), ConvergenceStatus::Converged);
        assert_eq!(convergence_check(&[], &f, Objective::Sat), ConvergenceStatus::Running);
    }
}
