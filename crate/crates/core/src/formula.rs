//! CNF data model and Boolean / not-all-equal clause evaluation.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Most literals a clause may hold.
pub const MAX_CLAUSE_LEN: usize = 3;

/// A possibly negated variable. `var` is 1-based, as in DIMACS.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Literal {
    pub var: usize,
    pub negated: bool,
}

impl Literal {
    pub fn new(var: usize, negated: bool) -> Self {
        Self { var, negated }
    }

    pub fn pos(var: usize) -> Self {
        Self::new(var, false)
    }

    pub fn neg(var: usize) -> Self {
        Self::new(var, true)
    }

    /// Builds a literal from a signed DIMACS integer (must be nonzero).
    pub fn from_dimacs(lit: i64) -> Self {
        debug_assert!(lit != 0);
        Self::new(lit.unsigned_abs() as usize, lit < 0)
    }

    pub fn to_dimacs(self) -> i64 {
        let v = self.var as i64;
        if self.negated {
            -v
        } else {
            v
        }
    }

    /// Zero-based variable index into phase and assignment vectors.
    #[inline]
    pub fn index(self) -> usize {
        self.var - 1
    }

    /// The sign coefficient c_mi as a float: +1 for a normal literal, -1 for a negated one.
    #[inline]
    pub fn sign(self) -> f64 {
        if self.negated {
            -1.0
        } else {
            1.0
        }
    }

    #[inline]
    pub fn eval(self, value: bool) -> bool {
        value != self.negated
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// A disjunction of literals over pairwise distinct variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Clause {
    literals: Vec<Literal>,
}

impl Clause {
    pub fn new(literals: Vec<Literal>) -> Result<Self> {
        if literals.is_empty() {
            return Err(Error::InvalidFormula("empty clause".into()));
        }
        for (a, la) in literals.iter().enumerate() {
            if la.var == 0 {
                return Err(Error::InvalidFormula("variable index 0".into()));
            }
            if literals[..a].iter().any(|lb| lb.var == la.var) {
                return Err(Error::InvalidFormula(format!(
                    "variable {} repeated within a clause",
                    la.var
                )));
            }
        }
        Ok(Self { literals })
    }

    /// Convenience constructor from signed DIMACS integers.
    pub fn from_dimacs(lits: &[i64]) -> Result<Self> {
        if lits.contains(&0) {
            return Err(Error::InvalidFormula("literal 0 inside clause".into()));
        }
        Self::new(lits.iter().map(|&l| Literal::from_dimacs(l)).collect())
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    /// Sign coefficient of zero-based variable `index`, 0 if absent.
    pub fn coefficient(&self, index: usize) -> i8 {
        self.literals
            .iter()
            .find(|l| l.index() == index)
            .map_or(0, |l| if l.negated { -1 } else { 1 })
    }

    pub fn contains_var(&self, index: usize) -> bool {
        self.literals.iter().any(|l| l.index() == index)
    }

    pub fn is_satisfied(&self, bits: &[bool]) -> bool {
        self.literals.iter().any(|l| l.eval(bits[l.index()]))
    }

    /// True when the clause has at least one true and one false literal.
    pub fn is_nae_satisfied(&self, bits: &[bool]) -> bool {
        let mut any_true = false;
        let mut any_false = false;
        for l in &self.literals {
            if l.eval(bits[l.index()]) {
                any_true = true;
            } else {
                any_false = true;
            }
        }
        any_true && any_false
    }
}

/// A CNF instance with `num_vars` variables and 1-3 literals per clause.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Formula {
    num_vars: usize,
    clauses: Vec<Clause>,
}

impl Formula {
    pub fn new(num_vars: usize, clauses: Vec<Clause>) -> Result<Self> {
        if num_vars == 0 {
            return Err(Error::InvalidFormula("formula needs at least one variable".into()));
        }
        if clauses.is_empty() {
            return Err(Error::InvalidFormula("formula needs at least one clause".into()));
        }
        for (m, c) in clauses.iter().enumerate() {
            if c.len() > MAX_CLAUSE_LEN {
                return Err(Error::InvalidFormula(format!(
                    "clause {} has {} literals, at most {MAX_CLAUSE_LEN} allowed",
                    m + 1,
                    c.len()
                )));
            }
            if let Some(l) = c.literals().iter().find(|l| l.var > num_vars) {
                return Err(Error::InvalidFormula(format!(
                    "clause {} references variable {} but formula has {num_vars}",
                    m + 1,
                    l.var
                )));
            }
        }
        Ok(Self { num_vars, clauses })
    }

    /// Builds a formula from DIMACS-style signed integer clauses.
    pub fn from_dimacs_clauses(num_vars: usize, clauses: &[&[i64]]) -> Result<Self> {
        let clauses = clauses
            .iter()
            .map(|c| Clause::from_dimacs(c))
            .collect::<Result<Vec<_>>>()?;
        Self::new(num_vars, clauses)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn clause(&self, m: usize) -> &Clause {
        &self.clauses[m]
    }

    /// c_mi: sign of zero-based variable `index` in clause `m`, 0 if absent.
    pub fn coefficient(&self, m: usize, index: usize) -> i8 {
        self.clauses[m].coefficient(index)
    }

    /// Whether every clause has exactly three literals.
    pub fn is_strict_3(&self) -> bool {
        self.clauses.iter().all(|c| c.len() == 3)
    }

    pub fn require_strict_3(&self) -> Result<()> {
        match self.clauses.iter().position(|c| c.len() != 3) {
            None => Ok(()),
            Some(m) => Err(Error::ClauseArity {
                clause: m,
                vars: self.clauses[m].len(),
            }),
        }
    }
}

/// A Boolean value for every variable of a formula.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Assignment(pub Vec<bool>);

impl Assignment {
    pub fn new(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    /// Decodes `code` so that variable 1 is the most significant bit. Enumerating
    /// codes upward therefore walks assignments in lexicographic order.
    pub fn from_index(code: u64, num_vars: usize) -> Self {
        Self(
            (0..num_vars)
                .map(|i| (code >> (num_vars - 1 - i)) & 1 == 1)
                .collect(),
        )
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn complement(&self) -> Self {
        Self(self.0.iter().map(|b| !b).collect())
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Per-clause satisfaction under an assignment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClauseStats {
    pub sat_flags: Vec<bool>,
    pub sat_count: usize,
    pub nae_flags: Vec<bool>,
    pub nae_count: usize,
}

pub fn eval_assignment(f: &Formula, a: &Assignment) -> Result<ClauseStats> {
    if a.len() != f.num_vars() {
        return Err(Error::LengthMismatch {
            expected: f.num_vars(),
            got: a.len(),
        });
    }
    let bits = a.bits();
    let sat_flags: Vec<bool> = f.clauses().iter().map(|c| c.is_satisfied(bits)).collect();
    let nae_flags: Vec<bool> = f
        .clauses()
        .iter()
        .map(|c| c.is_nae_satisfied(bits))
        .collect();
    Ok(ClauseStats {
        sat_count: sat_flags.iter().filter(|&&s| s).count(),
        nae_count: nae_flags.iter().filter(|&&s| s).count(),
        sat_flags,
        nae_flags,
    })
}

/// XOR form of a 3-literal NAE clause: some pair of literals differs.
pub fn nae_xor_form(li: bool, lj: bool, lk: bool) -> bool {
    (li ^ lj) || (lj ^ lk) || (lk ^ li)
}

/// Product form of a 3-literal NAE clause: one literal true and one literal false.
pub fn nae_product_form(li: bool, lj: bool, lk: bool) -> bool {
    (li || lj || lk) && (!li || !lj || !lk)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Formula {
        crate::dimacs::parse_dimacs(include_str!("../fixtures/sample.cnf")).unwrap()
    }

    #[test]
    fn nae_true_when_literals_differ() {
        let f = Formula::from_dimacs_clauses(6, &[&[1, 2, 4]]).unwrap();
        let a = Assignment::new(vec![true, false, false, false, false, false]);
        let s = eval_assignment(&f, &a).unwrap();
        assert!(s.sat_flags[0]);
        assert!(s.nae_flags[0]);
    }

    #[test]
    fn all_true_is_sat_but_not_nae() {
        let f = Formula::from_dimacs_clauses(3, &[&[1, 2, 3]]).unwrap();
        let s = eval_assignment(&f, &Assignment::new(vec![true; 3])).unwrap();
        assert_eq!((s.sat_count, s.nae_count), (1, 0));
    }

    #[test]
    fn sample_all_false_satisfies_seven() {
        // Clauses with a negated literal are satisfied by all-false: 4, 5, 6, 7, 8, 9, 10.
        let s = eval_assignment(&sample(), &Assignment::new(vec![false; 6])).unwrap();
        assert_eq!(s.sat_count, 7);
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let err = eval_assignment(&sample(), &Assignment::new(vec![true; 5])).unwrap_err();
        assert_eq!(err, Error::LengthMismatch { expected: 6, got: 5 });
    }

    #[test]
    fn rejects_out_of_range_and_repeats() {
        assert!(Formula::from_dimacs_clauses(2, &[&[1, 3]]).is_err());
        assert!(Clause::from_dimacs(&[1, -1]).is_err());
        assert!(Clause::from_dimacs(&[2, 2]).is_err());
        assert!(Formula::from_dimacs_clauses(4, &[&[1, 2, 3, 4]]).is_err());
        assert!(Formula::new(1, vec![]).is_err());
        assert!(Formula::new(0, vec![Clause::from_dimacs(&[1]).unwrap()]).is_err());
    }

    #[test]
    fn coefficient_accessor() {
        let f = sample();
        assert_eq!(f.coefficient(3, 1), -1);
        assert_eq!(f.coefficient(3, 0), 0);
        assert_eq!(f.coefficient(0, 3), 1);
    }

    #[test]
    fn nae_forms_agree_for_all_sign_patterns() {
        for signs in 0..8u8 {
            for x in 0..8u8 {
                let lit = |b: u8| ((x >> b) & 1 == 1) != ((signs >> b) & 1 == 1);
                let (li, lj, lk) = (lit(0), lit(1), lit(2));
                assert_eq!(nae_xor_form(li, lj, lk), nae_product_form(li, lj, lk));
            }
        }
    }

    #[test]
    fn from_index_is_msb_first() {
        assert_eq!(Assignment::from_index(0b100, 3).to_string(), "100");
        assert_eq!(Assignment::from_index(0b011, 3).to_string(), "011");
    }
}
