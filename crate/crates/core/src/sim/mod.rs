//! Discretization and fixed-step closed-loop simulation.
//!
//! Loop per sample: read `y` from the plant state, add noise to get `ym`,
//! feed `e = r - ym` to the controller, drive the plant with `u + d`.

mod closed_loop;
mod discretize;
mod scenario;
mod trace;

pub use closed_loop::{simulate_closed_loop, simulate_with_realization, LoopModel, DIVERGENCE_BOUND};
pub use discretize::{c2d_tustin, c2d_zoh, DiscreteSystem};
pub use scenario::{gen_noise, gen_reference, gen_wave, Realization, ScenarioConfig, ScenarioKind};
pub use trace::{SimTrace, TRACE_HEADER};
