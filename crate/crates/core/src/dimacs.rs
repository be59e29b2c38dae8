//! DIMACS CNF reading and writing.
//!
//! Accepts `c` comment lines anywhere, a single `p cnf N M` header, and
//! zero-terminated clauses that may span lines. A `%` line ends the input, as in
//! the SATLIB benchmark files.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::formula::{Clause, Formula, Literal};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DuplicatePolicy {
    /// Any variable repeated within a clause is an error.
    #[default]
    Reject,
    /// Identical repeated literals are merged; `x` together with `-x` is still an error.
    Deduplicate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ParseOptions {
    pub duplicates: DuplicatePolicy,
    /// Require every clause to have exactly three literals.
    pub strict_3: bool,
}

impl ParseOptions {
    pub fn permissive() -> Self {
        Self {
            duplicates: DuplicatePolicy::Deduplicate,
            strict_3: false,
        }
    }
}

pub fn parse_dimacs(text: &str) -> Result<Formula> {
    parse_dimacs_with(text, ParseOptions::default())
}

pub fn parse_dimacs_with(text: &str, opts: ParseOptions) -> Result<Formula> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Clause> = Vec::new();
    let mut pending: Vec<i64> = Vec::new();
    let mut pending_line = 0;
    let mut last_line = 0;

    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        last_line = line_no;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(parse_err(line_no, "duplicate problem line"));
            }
            header = Some(parse_header(line, line_no)?);
            continue;
        }
        let Some((num_vars, _)) = header else {
            return Err(parse_err(line_no, "clause data before `p cnf` header"));
        };
        for tok in line.split_whitespace() {
            let lit: i64 = tok
                .parse()
                .map_err(|_| parse_err(line_no, format!("invalid literal `{tok}`")))?;
            if lit == 0 {
                let lits = std::mem::take(&mut pending);
                clauses.push(build_clause(lits, num_vars, opts, pending_line.max(line_no))?);
                continue;
            }
            if lit.unsigned_abs() as usize > num_vars {
                return Err(parse_err(
                    line_no,
                    format!("literal {lit} out of range for {num_vars} variables"),
                ));
            }
            if pending.is_empty() {
                pending_line = line_no;
            }
            pending.push(lit);
        }
    }

    let Some((num_vars, num_clauses)) = header else {
        return Err(parse_err(last_line, "missing `p cnf` header"));
    };
    if !pending.is_empty() {
        return Err(parse_err(pending_line, "clause not terminated by 0"));
    }
    if clauses.len() != num_clauses {
        return Err(parse_err(
            last_line,
            format!(
                "header declares {num_clauses} clauses, found {}",
                clauses.len()
            ),
        ));
    }
    Formula::new(num_vars, clauses).map_err(|e| match e {
        Error::InvalidFormula(msg) => parse_err(last_line, msg),
        other => other,
    })
}

fn parse_header(line: &str, line_no: usize) -> Result<(usize, usize)> {
    let toks: Vec<&str> = line.split_whitespace().collect();
    if toks.len() != 4 || toks[0] != "p" || toks[1] != "cnf" {
        return Err(parse_err(line_no, "malformed header, expected `p cnf N M`"));
    }
    let n: usize = toks[2]
        .parse()
        .map_err(|_| parse_err(line_no, format!("invalid variable count `{}`", toks[2])))?;
    let m: usize = toks[3]
        .parse()
        .map_err(|_| parse_err(line_no, format!("invalid clause count `{}`", toks[3])))?;
    Ok((n, m))
}

fn build_clause(
    lits: Vec<i64>,
    num_vars: usize,
    opts: ParseOptions,
    line_no: usize,
) -> Result<Clause> {
    debug_assert!(lits.iter().all(|l| l.unsigned_abs() as usize <= num_vars));
    if lits.is_empty() {
        return Err(parse_err(line_no, "empty clause"));
    }
    let mut out: Vec<Literal> = Vec::with_capacity(lits.len());
    for &l in &lits {
        let lit = Literal::from_dimacs(l);
        match out.iter().find(|o| o.var == lit.var) {
            None => out.push(lit),
            Some(prev) if prev.negated != lit.negated => {
                return Err(parse_err(
                    line_no,
                    format!("tautological clause contains {} and {}", prev, lit),
                ));
            }
            Some(_) if opts.duplicates == DuplicatePolicy::Deduplicate => {}
            Some(_) => {
                return Err(parse_err(
                    line_no,
                    format!("variable {} repeated within a clause", lit.var),
                ));
            }
        }
    }
    if opts.strict_3 && out.len() != 3 {
        return Err(parse_err(
            line_no,
            format!("clause has {} literals, strict mode requires 3", out.len()),
        ));
    }
    Clause::new(out).map_err(|e| parse_err(line_no, e.to_string()))
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

pub fn serialize_dimacs(f: &Formula) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p cnf {} {}", f.num_vars(), f.num_clauses());
    for c in f.clauses() {
        for l in c.literals() {
            let _ = write!(out, "{} ", l.to_dimacs());
        }
        out.push_str("0\n");
    }
    out
}
