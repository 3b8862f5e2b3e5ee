use thiserror::Error;

use crate::laurent::SeedVar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division is not exact")]
    NotDivisible,
    #[error("division by zero")]
    DivisionByZero,
    #[error("no value assigned to {0}")]
    MissingVariable(SeedVar),
    #[error("{0} has a negative exponent and was assigned 0")]
    ZeroSubstitution(SeedVar),
    #[error("invalid Motzkin path {0:?}: neighbouring entries differ by more than 1")]
    InvalidMotzkin(Vec<i32>),
    #[error("empty window [{0}, {1}]")]
    EmptyWindow(i32, i32),
    #[error("T[{alpha},{j},{k}] needs window [{need_lo}, {need_hi}] but the window is [{lo}, {hi}]")]
    WindowExceeded {
        alpha: i32,
        j: i32,
        k: i32,
        need_lo: i32,
        need_hi: i32,
        lo: i32,
        hi: i32,
    },
    #[error("time {0} lies outside the weight table")]
    TimeWindowExceeded(i64),
    #[error("matrix is {rows}x{cols}, expected square")]
    NonSquare { rows: usize, cols: usize },
    #[error("leading coefficient is not invertible")]
    NonInvertible,
    #[error("coefficient nodes cannot be mutated")]
    CoefficientMutation,
    #[error("invalid index: {0}")]
    InvalidIndex(String),
    #[error("invalid edges: {0}")]
    InvalidEdges(String),
    #[error("independent computations disagree: {0}")]
    InternalMismatch(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
