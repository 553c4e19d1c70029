use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("expected {expected} entries, got {got}")]
    BadLength { expected: usize, got: usize },

    #[error("{what} is not Hermitian: entry ({row}, {col}) deviates by {defect:e}")]
    NotHermitian {
        what: &'static str,
        row: usize,
        col: usize,
        defect: f64,
    },

    #[error("{what} is not positive semidefinite: minimum eigenvalue {min_eigenvalue:e}")]
    NotPositive {
        what: &'static str,
        min_eigenvalue: f64,
    },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("matrix exponential overflow: scaled 1-norm {norm:e}")]
    ExpmOverflow { norm: f64 },

    #[error("singular matrix in linear solve")]
    Singular,

    #[error("eigensolver did not converge on a {dim}x{dim} matrix")]
    EigNoConvergence { dim: usize },

    #[error("Liouvillian is near-defective (eigenvector condition number {condition:e})")]
    NearDefective { condition: f64 },

    #[error("degenerate left/right pairing for eigenvalue {index}: |Tr(l^† r)| = {overlap:e}")]
    DegeneratePairing { index: usize, overlap: f64 },

    #[error("no unique steady state: {0}")]
    NoUniqueSteadyState(String),

    #[error("integration unstable at t = {time}: entry magnitude {magnitude:e}; try a smaller dt")]
    Unstable { time: f64, magnitude: f64 },

    #[error("unphysical trace {trace:e} at step {step}")]
    UnphysicalTrace { step: usize, trace: f64 },

    #[error("trajectory {trajectory} (seed {seed}) became non-finite at step {step}")]
    TrajectoryNonFinite {
        seed: u64,
        trajectory: u64,
        step: usize,
    },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("basis is not orthonormal: Tr(F_{i}^† F_{j}) = {value}")]
    NonOrthonormalBasis { i: usize, j: usize, value: C64Display },
}

/// Complex value wrapper with a compact `Display`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct C64Display(pub num_complex::Complex64);

impl std::fmt::Display for C64Display {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:e}{:+e}i", self.0.re, self.0.im)
    }
}
