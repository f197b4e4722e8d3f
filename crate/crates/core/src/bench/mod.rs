//! Sweep harness: patience, beam size and length penalty against step counts,
//! candidate counts, wall-clock relative to vanilla beam, and model score.

mod compare;
mod sweep;

pub use compare::{compare_algorithms, compare_variants, ComparisonRow, Variant};
pub use sweep::{
    run_sweep, run_sweep_with_model, CellOutcome, ModelSource, SweepAxis, SweepCell, SweepReport,
    SweepRow, SweepSpec,
};
