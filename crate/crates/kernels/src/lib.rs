//! Accuracy kernels run under every summation scheme, with an exact oracle
//! as reference and operation counts for each run.

pub mod ddwork;
pub mod error;
pub mod gen;
pub mod montecarlo;
pub mod nbody;
pub mod norm;
pub mod record;
pub mod scheme;
pub mod sum;
pub mod trapezoid;
pub mod verify;

pub use error::KernelError;
pub use gen::{Grid, Order};
pub use record::{Evaluation, Point, ResultRecord, SchemeRun};
pub use scheme::{Accumulator, Scheme};
