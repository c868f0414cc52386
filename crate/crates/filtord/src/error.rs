use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("shift has infinite complement T; a finite one is required here")]
    InfiniteTset,

    #[error("invalid jump set: {0}")]
    InvalidJumpSet(String),

    #[error("subset violates (C.1): elements {a} < {b} but rho({a}) = {rho_a} > {b}")]
    SubsetC1 { a: u64, b: u64, rho_a: u64 },

    #[error("subset violates (C.2): {elem} lies in A - rho(A) but not in the allowed index set")]
    SubsetC2 { elem: u64 },

    #[error("operands belong to different shifts")]
    ShiftMismatch,

    #[error("valuation 0 entry at index {index}, slot {slot}; vectors must lie in pi * M")]
    ZeroValuation { index: u64, slot: u32 },

    #[error("operation requires a non-empty jump set")]
    EmptyJumpSet,

    #[error("jump set is not admissible: {0}")]
    NotAdmissible(String),

    #[error("start position {r} must be smaller than e* = {e_star}")]
    StartTooLarge { r: u64, e_star: u64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("malformed Eisenstein shape: {0}")]
    MalformedShape(String),

    #[error("d = {d} is not coprime to p = {p}")]
    NotCoprime { d: u64, p: u64 },

    #[error("e* = {e_star} lies in I; realization over the plain cyclotomic base needs e* outside I")]
    EStarInI { e_star: u64 },

    #[error("polynomial is not Eisenstein: {0}")]
    NotEisenstein(String),

    #[error("ring elements belong to different towers")]
    TowerMismatch,

    #[error("precision exhausted at valuation {reached}; retry with precision >= {required} p-adic digits")]
    PrecisionExhausted { reached: u64, required: u32 },

    #[error("Teichmuller iteration failed to converge within the precision bound")]
    TeichmullerDivergence,

    #[error("factorization residual above tolerance; retry with precision >= {required}")]
    FactorResidual { required: u32 },

    #[error("arithmetic overflow while iterating the shift")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, Error>;
