use std::path::PathBuf;

use crate::controllers::MrcParams;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("undefined roots: zero polynomial")]
    UndefinedRoots,
    #[error("root finding did not converge for polynomial of degree {0}")]
    RootsDidNotConverge(usize),
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("ill-posed loop: 1 + L(s) is identically zero")]
    IllPosedLoop,
    #[error("improper transfer function: numerator degree {num} exceeds denominator degree {den}")]
    ImproperTransferFunction { num: usize, den: usize },
    #[error("Tustin singularity: I - A*dt/2 is not invertible")]
    TustinSingularity,
    #[error("improper controller: numerator degree {num} exceeds denominator degree {den}")]
    ImproperController { num: usize, den: usize },
    #[error("algebraic loop risk: plant must be strictly proper")]
    AlgebraicLoopRisk,
    #[error("non-minimum-phase plant: MRC inversion invalid")]
    NonMinimumPhase,
    #[error("improper IMC controller: filter order {order} is below the relative degree {required}")]
    ImproperImc { order: usize, required: usize },
    #[error("expected a root at s = 0 (constant term {constant:e})")]
    MissingOriginRoot { constant: f64 },
    #[error("initial output offset {0} is not reachable as a plant equilibrium")]
    UnreachableInitialOutput(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("step metrics need a nonzero reference amplitude")]
    ZeroReference,
    #[error("overshoot cap infeasible on grid: least violating candidate is wn = {}, tauf = {} with OS = {overshoot_pct:.3}%", .least_violating.wn, .least_violating.tauf)]
    RetuneInfeasible { least_violating: MrcParams, overshoot_pct: f64 },
    #[error("population of {0} is too small (DE needs at least 4 members)")]
    PopulationTooSmall(usize),
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("unknown config key `{0}`")]
    UnknownKey(String),
    #[error("{0}")]
    Invariant(String),
    #[error("malformed trace file {path}: {message}")]
    Trace { path: PathBuf, message: String },
    #[error("I/O error on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
