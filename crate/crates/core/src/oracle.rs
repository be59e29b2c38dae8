//! Exhaustive ground truth for SAT, MaxSAT and Max-NAE-SAT.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{Assignment, Formula};

pub const DEFAULT_ORACLE_CAP: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    Sat,
    MaxSat,
    MaxNae,
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Objective::Sat => "sat",
            Objective::MaxSat => "max_sat",
            Objective::MaxNae => "max_nae",
        })
    }
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sat" => Ok(Objective::Sat),
            "max_sat" | "maxsat" | "max-sat" => Ok(Objective::MaxSat),
            "max_nae" | "maxnae" | "max-nae" | "nae" => Ok(Objective::MaxNae),
            other => Err(Error::InvalidParams(format!("unknown objective `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResult {
    pub objective: Objective,
    pub best_value: usize,
    /// Lexicographically smallest assignment achieving `best_value`.
    pub best_assignment: Assignment,
    pub optimal_count: u64,
    pub satisfiable: bool,
}

/// Clause as bit masks over an assignment code (variable 1 is the top bit).
struct MaskClause {
    pos: u64,
    neg: u64,
}

impl MaskClause {
    #[inline]
    fn value(&self, code: u64, nae: bool) -> bool {
        let true_lits = (code & self.pos) | (!code & self.neg);
        if !nae {
            return true_lits != 0;
        }
        let false_lits = (!code & self.pos) | (code & self.neg);
        true_lits != 0 && false_lits != 0
    }
}

pub fn brute_force(f: &Formula, objective: Objective) -> Result<OracleResult> {
    brute_force_with_cap(f, objective, DEFAULT_ORACLE_CAP)
}

pub fn brute_force_with_cap(f: &Formula, objective: Objective, cap: usize) -> Result<OracleResult> {
    let n = f.num_vars();
    if n > cap || n > 62 {
        return Err(Error::OracleCap { n, cap: cap.min(62) });
    }
    let masks: Vec<MaskClause> = f
        .clauses()
        .iter()
        .map(|c| {
            let (mut pos, mut neg) = (0u64, 0u64);
            for l in c.literals() {
                let bit = 1u64 << (n - 1 - l.index());
                if l.negated {
                    neg |= bit;
                } else {
                    pos |= bit;
                }
            }
            MaskClause { pos, neg }
        })
        .collect();
    let nae = objective == Objective::MaxNae;
    let score = |code: u64| masks.iter().filter(|c| c.value(code, nae)).count();

    // (best value, first code achieving it, number of codes achieving it)
    let total = 1u64 << n;
    let chunk = 1u64 << n.saturating_sub(6).min(16);
    let (best_value, best_code, optimal_count) = (0..total.div_ceil(chunk))
        .into_par_iter()
        .map(|k| {
            let lo = k * chunk;
            let hi = (lo + chunk).min(total);
            let mut acc = (0usize, lo, 0u64);
            for code in lo..hi {
                let s = score(code);
                if s > acc.0 || acc.2 == 0 {
                    acc = (s, code, 1);
                } else if s == acc.0 {
                    acc.2 += 1;
                }
            }
            acc
        })
        .reduce(
            || (0, u64::MAX, 0),
            |a, b| {
                if a.2 == 0 {
                    return b;
                }
                if b.2 == 0 {
                    return a;
                }
                match a.0.cmp(&b.0) {
                    std::cmp::Ordering::Greater => a,
                    std::cmp::Ordering::Less => b,
                    std::cmp::Ordering::Equal => (a.0, a.1.min(b.1), a.2 + b.2),
                }
            },
        );

    Ok(OracleResult {
        objective,
        best_value,
        best_assignment: Assignment::from_index(best_code, n),
        optimal_count,
        satisfiable: objective != Objective::MaxNae && best_value == f.num_clauses(),
    })
}
