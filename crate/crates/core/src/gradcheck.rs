//! Central-difference checks of the analytic gradients.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::formula::Formula;
use crate::integrator::seeded_rng;
use crate::kernel::{PhaseState, S2Mode, SystemParams};
use crate::system_one::{energy_v, grad_v};
use crate::system_two::NaeLandscape;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GradCheck {
    pub samples: usize,
    pub max_abs_error: f64,
    pub max_rel_error: f64,
}

impl GradCheck {
    fn new() -> Self {
        Self {
            samples: 0,
            max_abs_error: 0.0,
            max_rel_error: 0.0,
        }
    }

    fn record(&mut self, analytic: f64, numeric: f64) {
        let abs = (analytic - numeric).abs();
        let scale = analytic.abs().max(numeric.abs()).max(1e-8);
        self.max_abs_error = self.max_abs_error.max(abs);
        self.max_rel_error = self.max_rel_error.max(abs / scale);
        self.samples += 1;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradCheckReport {
    pub system_one: GradCheck,
    /// `None` when the formula is not strict 3-SAT.
    pub averaged_gradient: Option<GradCheck>,
}

/// Fourth-order central difference `f'(x)`.
pub fn central_difference(mut f: impl FnMut(f64) -> f64, x: f64, h: f64) -> f64 {
    (8.0 * (f(x + h) - f(x - h)) - (f(x + 2.0 * h) - f(x - 2.0 * h))) / (12.0 * h)
}

/// Compares dV/d(alpha) and -dE/d(phi) with central differences at `points`
/// random states drawn from `seed`.
pub fn check_gradients(
    f: &Formula,
    params: &SystemParams,
    points: usize,
    seed: u64,
    h: f64,
) -> Result<GradCheckReport> {
    params.validate()?;
    let mut rng = seeded_rng(seed);
    let n = f.num_vars();
    let period = params.period();

    let mut one = GradCheck::new();
    for _ in 0..points {
        let t = rng.random_range(0.0..period);
        let alpha: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..period)).collect();
        let p = PhaseState::new(t, alpha);
        let g = grad_v(f, params, &p);
        for (i, &gi) in g.iter().enumerate() {
            let num = central_difference(
                |x| {
                    let mut q = p.clone();
                    q.alpha[i] = x;
                    energy_v(f, params, &q)
                },
                p.alpha[i],
                h,
            );
            one.record(gi, num);
        }
    }

    let averaged_gradient = match NaeLandscape::new(f, params) {
        Ok(land) => {
            let mut two = GradCheck::new();
            let mut rhs = vec![0.0; n];
            for _ in 0..points {
                let phi: Vec<f64> = (0..n)
                    .map(|_| rng.random_range(0.0..2.0 * std::f64::consts::PI))
                    .collect();
                land.rhs_into(&phi, S2Mode::AveragedGradient, &mut rhs);
                for (i, &ri) in rhs.iter().enumerate() {
                    let num = central_difference(
                        |x| {
                            let mut q = phi.clone();
                            q[i] = x;
                            land.energy(&q)
                        },
                        phi[i],
                        h,
                    );
                    two.record(-ri, num);
                }
            }
            Some(two)
        }
        Err(_) => None,
    };

    Ok(GradCheckReport {
        system_one: one,
        averaged_gradient,
    })
}
