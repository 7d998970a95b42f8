//! Real polynomial and rational transfer-function algebra.

mod poly;
mod roots;
mod statespace;
mod tf;

pub use poly::{poly_mul, Polynomial};
pub use roots::{poly_roots, TOL_ROOT};
pub use statespace::StateSpace;
pub use tf::{
    min_phase_split, tf_dcgain, tf_feedback, tf_minreal, tf_relative_degree, tf_series,
    tf_to_statespace, MinPhaseSplit, TransferFunction, MINREAL_TOL,
};
