//! Clause kernels shared by both dynamical systems.
//!
//! Every trigonometric argument is `theta_i = omega * (t + alpha_i)`. A clause
//! kernel is the product over all variables of `(1 - c_mi cos theta_i) / 2`; an
//! absent variable contributes a constant 1/2, so only the present literals are
//! ever evaluated. Quotients of the form `K / (1 - c cos theta_i)` are always
//! taken as the leave-one-out product over `j != i`, which stays finite where the
//! quotient would be 0/0.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{Clause, Formula};

/// Continuous state: simulation time and one time-lag variable per Boolean variable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseState {
    pub t: f64,
    pub alpha: Vec<f64>,
}

impl PhaseState {
    pub fn new(t: f64, alpha: Vec<f64>) -> Self {
        Self { t, alpha }
    }

    pub fn zeros(n: usize) -> Self {
        Self::new(0.0, vec![0.0; n])
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.alpha.iter().all(|a| a.is_finite())
    }
}

/// Which right-hand side drives System II.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum S2Mode {
    /// Time-dependent dynamics with second-harmonic injection.
    #[default]
    Full,
    /// Phase-averaged dynamics with the printed coefficients.
    AveragedPrinted,
    /// Exact negative gradient of the averaged energy.
    AveragedGradient,
}

impl fmt::Display for S2Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            S2Mode::Full => "full",
            S2Mode::AveragedPrinted => "averaged_printed",
            S2Mode::AveragedGradient => "averaged_gradient",
        })
    }
}

impl FromStr for S2Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(S2Mode::Full),
            "averaged_printed" | "printed" => Ok(S2Mode::AveragedPrinted),
            "averaged_gradient" | "gradient" => Ok(S2Mode::AveragedGradient),
            other => Err(Error::InvalidParams(format!("unknown System II mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Coupling strength A.
    pub a: f64,
    /// Second-harmonic injection strength A_s.
    pub a_s: f64,
    /// Angular frequency; one period lasts `2 pi / omega`.
    pub omega: f64,
    /// Drop the `2^-(N-L)` factor that absent variables contribute to each kernel.
    pub kernel_normalized: bool,
    pub s2_mode: S2Mode,
}

impl Default for SystemParams {
    fn default() -> Self {
        Self {
            a: 1.0,
            a_s: 0.0,
            omega: 2.0 * PI,
            kernel_normalized: false,
            s2_mode: S2Mode::Full,
        }
    }
}

impl SystemParams {
    /// A = 10/(2 pi), omega = 2 pi.
    pub fn system_one() -> Self {
        Self {
            a: 10.0 / (2.0 * PI),
            ..Self::default()
        }
    }

    /// A = 5/(2 pi), A_s = 0.01/(2 pi), omega = 2 pi.
    pub fn system_two() -> Self {
        Self {
            a: 5.0 / (2.0 * PI),
            a_s: 0.01 / (2.0 * PI),
            ..Self::default()
        }
    }

    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.a > 0.0 && self.a.is_finite()) {
            return Err(Error::InvalidParams(format!("A must be positive, got {}", self.a)));
        }
        if !(self.a_s >= 0.0 && self.a_s.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "A_s must be nonnegative, got {}",
                self.a_s
            )));
        }
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "omega must be positive, got {}",
                self.omega
            )));
        }
        Ok(())
    }

    /// Constant factor that absent variables contribute to a clause kernel.
    #[inline]
    pub fn absent_scale(&self, num_vars: usize, clause_len: usize) -> f64 {
        if self.kernel_normalized {
            1.0
        } else {
            0.5f64.powi((num_vars - clause_len) as i32)
        }
    }
}

#[inline]
pub fn theta(p: &PhaseState, params: &SystemParams, i: usize) -> f64 {
    params.omega * (p.t + p.alpha[i])
}

/// cos and sin of every `theta_i` at one state.
#[derive(Debug, Clone)]
pub struct PhaseTrig {
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

impl PhaseTrig {
    pub fn new(p: &PhaseState, params: &SystemParams) -> Self {
        let (sin, cos) = (0..p.alpha.len())
            .map(|i| theta(p, params, i).sin_cos())
            .unzip();
        Self { cos, sin }
    }
}

/// Factors `(1 - c cos theta)/2` of the present literals, in clause order.
#[inline]
pub(crate) fn literal_factors(clause: &Clause, cos: &[f64]) -> ([f64; 3], usize) {
    let mut out = [1.0; 3];
    let lits = clause.literals();
    for (slot, l) in out.iter_mut().zip(lits) {
        *slot = 0.5 * (1.0 - l.sign() * cos[l.index()]);
    }
    (out, lits.len())
}

/// Product of all factors except the one at position `skip`.
#[inline]
pub(crate) fn product_except(factors: &[f64; 3], len: usize, skip: usize) -> f64 {
    let mut prod = 1.0;
    for (q, f) in factors[..len].iter().enumerate() {
        if q != skip {
            prod *= f;
        }
    }
    prod
}

pub(crate) fn kernel_from_trig(f: &Formula, m: usize, trig: &PhaseTrig, params: &SystemParams) -> f64 {
    let clause = f.clause(m);
    let (factors, len) = literal_factors(clause, &trig.cos);
    let scale = params.absent_scale(f.num_vars(), len);
    scale * factors[..len].iter().product::<f64>()
}

/// K_m at state `p`.
pub fn kernel_value(f: &Formula, m: usize, p: &PhaseState, params: &SystemParams) -> f64 {
    let clause = f.clause(m);
    let scale = params.absent_scale(f.num_vars(), clause.len());
    clause
        .literals()
        .iter()
        .map(|l| 0.5 * (1.0 - l.sign() * theta(p, params, l.index()).cos()))
        .product::<f64>()
        * scale
}

/// K_m^(i): the kernel product with the factor of zero-based variable `i` left out.
pub fn kernel_leave_one_out(
    f: &Formula,
    m: usize,
    p: &PhaseState,
    params: &SystemParams,
    i: usize,
) -> Result<f64> {
    let clause = f.clause(m);
    if !clause.contains_var(i) {
        return Err(Error::AbsentVariable {
            clause: m,
            var: i + 1,
        });
    }
    let scale = params.absent_scale(f.num_vars(), clause.len());
    Ok(clause
        .literals()
        .iter()
        .filter(|l| l.index() != i)
        .map(|l| 0.5 * (1.0 - l.sign() * theta(p, params, l.index()).cos()))
        .product::<f64>()
        * scale)
}
