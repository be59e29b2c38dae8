use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid formula: {0}")]
    InvalidFormula(String),

    #[error("assignment has {got} variables, formula has {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("brute force limited to {cap} variables, formula has {n}")]
    OracleCap { n: usize, cap: usize },

    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("clause {clause} has {vars} distinct variables, averaged dynamics need exactly 3")]
    ClauseArity { clause: usize, vars: usize },

    #[error("phase {value} is not within {tol} of 0 or pi")]
    NotCorner { value: f64, tol: f64 },

    #[error("variable {var} does not appear in clause {clause}")]
    AbsentVariable { clause: usize, var: usize },

    #[error("state became non-finite at step {step} (trace row {row})")]
    NonFinite { step: usize, row: usize },
}
