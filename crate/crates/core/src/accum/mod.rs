//! The value-plus-error accumulator, the folding sum loop, and the exact
//! fixed-point accumulator used as a reference.

mod exact;
mod floaterr;

pub use exact::ExactAccumulator;
pub use floaterr::{sum_with_policy, FloatErr, FoldPolicy, FoldStats, FoldingSum, MergeRule};
