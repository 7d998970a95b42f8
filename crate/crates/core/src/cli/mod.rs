//! Run configuration, the comparison matrix and report emission behind the
//! `surgectl` binary.

mod compare;
mod config;
mod report;

pub use compare::{load_results, run_compare, scenario_realizations, Cell, CellOutcome, CompareResults};
pub use config::{controller_block, load_config, parse_config, EmitSet, RunConfig, CONTROLLERS_FIXTURE};
pub use report::{
    emit_report, markdown_report, metrics_csv, plotdata, prepare_output_dir, save_trace, trace_path, write_with,
    METRICS_FILE, PLOTDATA_DIR, REPORT_FILE, TRACES_DIR,
};

use crate::error::Error;

/// Process exit code for an error: 1 config, 2 synthesis or simulation,
/// 3 I/O.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Config { .. } | Error::UnknownKey(_) | Error::Invariant(_) => 1,
        Error::Io { .. } | Error::Trace { .. } => 3,
        _ => 2,
    }
}
