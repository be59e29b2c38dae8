//! System I: gradient flow on `V = sum_m A K_m^2` with the feedback `-1` term that
//! cancels the free oscillation once every clause kernel vanishes.

use serde::{Deserialize, Serialize};

use crate::formula::Formula;
use crate::kernel::{kernel_from_trig, literal_factors, product_except, PhaseState, PhaseTrig, SystemParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergySample {
    pub t: f64,
    pub value: f64,
}

pub fn energy_v(f: &Formula, params: &SystemParams, p: &PhaseState) -> f64 {
    let trig = PhaseTrig::new(p, params);
    energy_from_trig(f, params, &trig)
}

pub(crate) fn energy_from_trig(f: &Formula, params: &SystemParams, trig: &PhaseTrig) -> f64 {
    (0..f.num_clauses())
        .map(|m| {
            let k = kernel_from_trig(f, m, trig, params);
            params.a * k * k
        })
        .sum()
}

pub fn energy_sample(f: &Formula, params: &SystemParams, p: &PhaseState) -> EnergySample {
    EnergySample {
        t: p.t,
        value: energy_v(f, params, p),
    }
}

/// dV/d(alpha_i) for every variable.
pub fn grad_v(f: &Formula, params: &SystemParams, p: &PhaseState) -> Vec<f64> {
    let trig = PhaseTrig::new(p, params);
    let mut grad = vec![0.0; f.num_vars()];
    grad_into(f, params, &trig, &mut grad);
    grad
}

/// dV/d(alpha_i) = sum_m 2A K_m c_mi (K_m^(i) / 2) sin(theta_i) omega
pub(crate) fn grad_into(f: &Formula, params: &SystemParams, trig: &PhaseTrig, grad: &mut [f64]) {
    grad.fill(0.0);
    let n = f.num_vars();
    for clause in f.clauses() {
        let (factors, len) = literal_factors(clause, &trig.cos);
        let scale = params.absent_scale(n, len);
        let k = scale * factors[..len].iter().product::<f64>();
        if k == 0.0 {
            continue;
        }
        for (q, l) in clause.literals().iter().enumerate() {
            let loo = scale * product_except(&factors, len, q);
            grad[l.index()] += params.a * k * l.sign() * loo;
        }
    }
    for (g, s) in grad.iter_mut().zip(&trig.sin) {
        *g *= s * params.omega;
    }
}

/// d(alpha_i)/dt = -(dV/d(alpha_i) + 1)
pub fn rhs_system1(f: &Formula, params: &SystemParams, p: &PhaseState) -> Vec<f64> {
    let mut out = grad_v(f, params, p);
    for g in &mut out {
        *g = -(*g + 1.0);
    }
    out
}

pub(crate) fn rhs_into(f: &Formula, params: &SystemParams, p: &PhaseState, out: &mut [f64]) {
    let trig = PhaseTrig::new(p, params);
    grad_into(f, params, &trig, out);
    for g in out.iter_mut() {
        *g = -(*g + 1.0);
    }
}
