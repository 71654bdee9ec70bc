use thiserror::Error;

/// Errors shared across the lab kernel.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("carrier must be non-empty")]
    EmptyCarrier,

    #[error("duplicate atom name: {name}")]
    DuplicateAtom { name: String },

    #[error("unknown atom: {name}")]
    UnknownAtom { name: String },

    #[error("carrier mismatch: {left} vs {right}")]
    CarrierMismatch { left: String, right: String },

    #[error("{what} bound exceeded: limit {limit}, got {actual}")]
    BoundExceeded {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("kernel of a proper filter must be non-empty")]
    EmptyKernel,

    #[error("map is not surjective: {missing} has no preimage")]
    NotSurjective { missing: String },

    #[error("map is not total: no value for {atom}")]
    NotTotal { atom: String },

    #[error("natural injection is not continuous into the bidual at {atom}")]
    BidualDefect { atom: String },

    #[error("invalid convergence table: {0}")]
    InvalidTable(#[from] AxiomViolation),
}

/// First violated convergence axiom, with witness kernels.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AxiomViolation {
    #[error("point axiom fails at {atom}: {atom} not in lim {kernel}")]
    Point { atom: String, kernel: String },

    #[error("monotonicity fails: lim {larger} exceeds lim {smaller} at {extra}")]
    Monotonicity {
        smaller: String,
        larger: String,
        extra: String,
    },

    #[error("table has {actual} rows, expected {expected}")]
    RowCount { expected: usize, actual: usize },
}
