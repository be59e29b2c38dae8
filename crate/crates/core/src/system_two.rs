//! System II: injection-locked phase dynamics for Max-NAE-3-SAT.
//!
//! Three views of the same system live here:
//! - [`rhs_full`], the time-dependent dynamics with second-harmonic injection;
//! - the phase-averaged energy [`energy_e`] and its dynamics [`rhs_averaged`],
//!   defined for formulas whose clauses all have three distinct variables;
//! - the corner reduction [`discrete_clause_energy`], where each clause energy
//!   collapses to one of two levels `E1 > E2`, with `E2` exactly on the
//!   NAE-satisfying corners.
//!
//! The averaged energy is a sum of cosine terms `coef * cos(n . phi)` with small
//! integer multipliers `n`. Each clause contributes seven term families for each
//! of its three variables (the "owner" of the block). The printed averaged
//! dynamics differentiate only the owner's block with respect to the owner's
//! phase; the gradient mode differentiates every term with respect to every
//! phase it touches, which is the exact `-grad E`.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{eval_assignment, Assignment, Clause, Formula};
use crate::kernel::{literal_factors, product_except, PhaseState, PhaseTrig, S2Mode, SystemParams};

/// Corner inputs may sit this far from 0 or pi.
pub const CORNER_TOL: f64 = 1e-9;

/// Row order of clause sign patterns in the table (true = negated literal).
pub const TABLE_SIGN_ORDER: [[bool; 3]; 8] = [
    [false, false, false],
    [false, false, true],
    [false, true, false],
    [true, false, false],
    [true, true, false],
    [false, true, true],
    [true, false, true],
    [true, true, true],
];

/// Corner order within each sign pattern (true = phase pi, i.e. x = 0).
pub const TABLE_CORNER_ORDER: [[bool; 3]; 8] = [
    [false, false, false],
    [false, false, true],
    [false, true, false],
    [true, false, false],
    [true, true, false],
    [false, true, true],
    [true, false, true],
    [true, true, true],
];

/// Binarized phases, each exactly 0 or pi.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CornerPhases {
    phi: Vec<f64>,
}

impl CornerPhases {
    /// Snaps each entry to 0 or pi; entries further than [`CORNER_TOL`] from
    /// 0, pi or 2 pi are rejected.
    pub fn new(phi: &[f64]) -> Result<Self> {
        let phi = phi
            .iter()
            .map(|&v| {
                if v.abs() <= CORNER_TOL || (v - 2.0 * PI).abs() <= CORNER_TOL {
                    Ok(0.0)
                } else if (v - PI).abs() <= CORNER_TOL {
                    Ok(PI)
                } else {
                    Err(Error::NotCorner {
                        value: v,
                        tol: CORNER_TOL,
                    })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { phi })
    }

    /// Phase 0 for x = 1, pi for x = 0.
    pub fn from_assignment(a: &Assignment) -> Self {
        Self {
            phi: a.bits().iter().map(|&b| if b { 0.0 } else { PI }).collect(),
        }
    }

    pub fn to_assignment(&self) -> Assignment {
        Assignment::new(self.phi.iter().map(|&p| p == 0.0).collect())
    }

    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    pub fn flipped(&self) -> Self {
        Self {
            phi: self.phi.iter().map(|&p| if p == 0.0 { PI } else { 0.0 }).collect(),
        }
    }
}

impl fmt::Display for CornerPhases {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = self
            .phi
            .iter()
            .map(|&p| if p == 0.0 { "0" } else { "pi" })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// Right-hand side of the full System II dynamics at state `p`:
///
/// `d alpha_i/dt = -A sin(theta_i) sum_m c_mi (K_m^(i))^2 (1 - c_mi cos theta_i)/2
///                 - sin(2 theta_i) A_s cos(2 omega t)`
pub fn rhs_full(f: &Formula, params: &SystemParams, p: &PhaseState) -> Vec<f64> {
    let mut out = vec![0.0; f.num_vars()];
    rhs_full_into(f, params, p, &mut out);
    out
}

pub(crate) fn rhs_full_into(f: &Formula, params: &SystemParams, p: &PhaseState, out: &mut [f64]) {
    let trig = PhaseTrig::new(p, params);
    out.fill(0.0);
    let n = f.num_vars();
    for clause in f.clauses() {
        let (factors, len) = literal_factors(clause, &trig.cos);
        let scale = params.absent_scale(n, len);
        for (q, l) in clause.literals().iter().enumerate() {
            let loo = scale * product_except(&factors, len, q);
            out[l.index()] += l.sign() * loo * loo * factors[q];
        }
    }
    let injection = params.a_s * (2.0 * params.omega * p.t).cos();
    for (o, (&s, &c)) in out[..n].iter_mut().zip(trig.sin.iter().zip(&trig.cos)) {
        *o = -params.a * s * *o - 2.0 * s * c * injection;
    }
}

/// `T = c_i c_j (6 cos(phi_i - phi_j) + 3/2 cos(phi_i + phi_j))`
pub fn pair_term_t(c_i: i8, c_j: i8, phi_i: f64, phi_j: f64) -> f64 {
    f64::from(c_i * c_j) * (6.0 * (phi_i - phi_j).cos() + 1.5 * (phi_i + phi_j).cos())
}

/// Energy of one three-variable clause at a corner, normalised as a formula with
/// N = 3. Always one of `E1 = (189/256) pi A - (3/2) pi A_s` or
/// `E2 = (-51/256) pi A - (3/2) pi A_s`.
pub fn discrete_clause_energy(signs: [i8; 3], corner: &CornerPhases, params: &SystemParams) -> Result<f64> {
    let phi = corner.phi();
    if phi.len() != 3 {
        return Err(Error::LengthMismatch {
            expected: 3,
            got: phi.len(),
        });
    }
    if signs.iter().any(|s| s.abs() != 1) {
        return Err(Error::InvalidParams(format!("clause signs must be +-1, got {signs:?}")));
    }
    let pairs = [(0, 1), (1, 2), (2, 0)];
    let t_sum: f64 = pairs
        .iter()
        .map(|&(a, b)| pair_term_t(signs[a], signs[b], phi[a], phi[b]))
        .sum();
    // The cos(2 phi_a - 2 phi_b) families: constant 9/8 at every corner.
    let double: f64 = pairs
        .iter()
        .map(|&(a, b)| 0.375 * (2.0 * (phi[a] - phi[b])).cos())
        .sum();
    let injection: f64 = phi.iter().map(|p| 0.5 * PI * params.a_s * (2.0 * p).cos()).sum();
    Ok(PI * params.a * 2f64.powi(-5) * (t_sum + double) - injection)
}

/// Numerator over 256 of the `pi A` coefficient of a clause energy at a corner,
/// computed in integers: 189 for E1, -51 for E2.
pub fn clause_energy_numerator(signs: [i8; 3], corner_is_pi: [bool; 3]) -> i64 {
    let s = |q: usize| -> i64 {
        let phase = if corner_is_pi[q] { -1 } else { 1 };
        i64::from(signs[q]) * phase
    };
    let pair_sum = s(0) * s(1) + s(1) * s(2) + s(2) * s(0);
    60 * pair_sum + 9
}

#[derive(Debug, Clone, Copy, PartialEq)]
/// `coef * cos(sum_q mult[q] * phi[vars[q]])`; `vars[0]` owns the term.
struct CosTerm {
    coef: f64,
    vars: [usize; 3],
    mult: [i8; 3],
}

impl CosTerm {
    #[inline]
    fn arg(&self, phi: &[f64]) -> f64 {
        self.vars
            .iter()
            .zip(&self.mult)
            .map(|(&v, &k)| f64::from(k) * phi[v])
            .sum()
    }
}

/// The averaged System II energy of one formula, expanded into cosine terms.
#[derive(Debug, Clone)]
pub struct NaeLandscape {
    n: usize,
    terms: Vec<CosTerm>,
    prefactor: f64,
    a_s: f64,
}

impl NaeLandscape {
    pub fn new(f: &Formula, params: &SystemParams) -> Result<Self> {
        f.require_strict_3()?;
        let n = f.num_vars();
        let mut terms = Vec::with_capacity(21 * f.num_clauses());
        for clause in f.clauses() {
            push_clause_terms(clause, &mut terms);
        }
        // pi A 2^(-2N+1); normalised kernels behave as if N = 3.
        let exp = if params.kernel_normalized { -5 } else { 1 - 2 * n as i32 };
        Ok(Self {
            n,
            terms,
            prefactor: PI * params.a * 2f64.powi(exp),
            a_s: params.a_s,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    pub fn energy(&self, phi: &[f64]) -> f64 {
        let coupling: f64 = self.terms.iter().map(|t| t.coef * t.arg(phi).cos()).sum();
        let injection: f64 = phi.iter().map(|p| (2.0 * p).cos()).sum();
        self.prefactor * coupling - 0.5 * PI * self.a_s * injection
    }

    /// Averaged dynamics d phi/dt. `mode` must be one of the averaged modes.
    pub fn rhs_into(&self, phi: &[f64], mode: S2Mode, out: &mut [f64]) {
        out.fill(0.0);
        for t in &self.terms {
            let s = t.coef * t.arg(phi).sin();
            match mode {
                S2Mode::AveragedGradient => {
                    for (&v, &k) in t.vars.iter().zip(&t.mult) {
                        out[v] += f64::from(k) * s;
                    }
                }
                _ => out[t.vars[0]] += f64::from(t.mult[0]) * s,
            }
        }
        for (o, p) in out.iter_mut().zip(phi) {
            *o = self.prefactor * *o - PI * self.a_s * (2.0 * p).sin();
        }
    }
}

fn push_clause_terms(clause: &Clause, terms: &mut Vec<CosTerm>) {
    let lits = clause.literals();
    debug_assert_eq!(lits.len(), 3);
    for i in 0..3 {
        let (j, k) = match i {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let vars = [lits[i].index(), lits[j].index(), lits[k].index()];
        let (ci, cj, ck) = (lits[i].sign(), lits[j].sign(), lits[k].sign());
        let families: [(f64, [i8; 3]); 7] = [
            (3.0 * ci * cj, [1, -1, 0]),
            (3.0 * ci * ck, [1, 0, -1]),
            (0.5 * ci * cj, [1, 1, -2]),
            (0.5 * ci * ck, [1, -2, 1]),
            (3.0 / 16.0, [2, 0, -2]),
            (3.0 / 16.0, [2, -2, 0]),
            (0.5 * cj * ck, [2, -1, -1]),
        ];
        terms.extend(families.iter().map(|&(coef, mult)| CosTerm {
            coef,
            vars,
            mult,
        }));
    }
}

/// Averaged energy E at phases `phi` (one entry per variable, phi = omega * alpha).
pub fn energy_e(f: &Formula, params: &SystemParams, phi: &[f64]) -> Result<f64> {
    check_len(f, phi)?;
    Ok(NaeLandscape::new(f, params)?.energy(phi))
}

/// Averaged dynamics d phi/dt in the mode selected by `params.s2_mode`.
pub fn rhs_averaged(f: &Formula, params: &SystemParams, phi: &[f64]) -> Result<Vec<f64>> {
    if params.s2_mode == S2Mode::Full {
        return Err(Error::InvalidParams(
            "rhs_averaged needs an averaged System II mode".into(),
        ));
    }
    check_len(f, phi)?;
    let land = NaeLandscape::new(f, params)?;
    let mut out = vec![0.0; f.num_vars()];
    land.rhs_into(phi, params.s2_mode, &mut out);
    Ok(out)
}

fn check_len(f: &Formula, phi: &[f64]) -> Result<()> {
    if phi.len() != f.num_vars() {
        return Err(Error::LengthMismatch {
            expected: f.num_vars(),
            got: phi.len(),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClauseEnergyRow {
    pub signs: [i8; 3],
    pub corner: CornerPhases,
    pub energy: f64,
    /// Exact `pi A` coefficient of `energy`, as a numerator over 256.
    pub a_numerator: i64,
    pub nae_satisfied: bool,
}

impl ClauseEnergyRow {
    pub fn sign_pattern(&self) -> String {
        self.signs.iter().map(|&s| if s > 0 { '+' } else { '-' }).collect()
    }
}

/// All 64 sign-pattern/corner combinations of one clause over variables 1..3.
pub fn clause_energy_table(params: &SystemParams) -> Vec<ClauseEnergyRow> {
    let mut rows = Vec::with_capacity(64);
    for neg in TABLE_SIGN_ORDER {
        let signs = neg.map(|n| if n { -1i8 } else { 1 });
        let lits: Vec<i64> = (0..3)
            .map(|q| if neg[q] { -(q as i64 + 1) } else { q as i64 + 1 })
            .collect();
        let f = Formula::from_dimacs_clauses(3, &[&lits]).expect("3-literal clause");
        for corner_pi in TABLE_CORNER_ORDER {
            let phi: Vec<f64> = corner_pi.iter().map(|&c| if c { PI } else { 0.0 }).collect();
            let corner = CornerPhases::new(&phi).expect("exact corner");
            let energy = NaeLandscape::new(&f, &SystemParams {
                kernel_normalized: false,
                ..*params
            })
            .expect("3-literal clause")
            .energy(&phi);
            let nae_satisfied = eval_assignment(&f, &corner.to_assignment())
                .expect("three variables")
                .nae_count
                == 1;
            rows.push(ClauseEnergyRow {
                signs,
                corner,
                energy,
                a_numerator: clause_energy_numerator(signs, corner_pi),
                nae_satisfied,
            });
        }
    }
    rows
}

/// CSV rendering of [`clause_energy_table`]. The energy equals
/// `a_coeff * pi * A + as_coeff * pi * A_s`, with both coefficients exact.
pub fn table_csv(rows: &[ClauseEnergyRow]) -> String {
    let mut out = String::from("signs,corner,energy,a_coeff,as_coeff,nae_satisfied\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}/256,-3/2,{}\n",
            r.sign_pattern(),
            r.corner,
            r.energy,
            r.a_numerator,
            r.nae_satisfied
        ));
    }
    out
}

/// E1 and E2 for `params`.
pub fn nae_energy_levels(params: &SystemParams) -> (f64, f64) {
    let inj = 1.5 * PI * params.a_s;
    (
        189.0 / 256.0 * PI * params.a - inj,
        -51.0 / 256.0 * PI * params.a - inj,
    )
}
