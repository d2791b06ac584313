//! Finite metric spaces and the dynamical systems acting on them.

mod generators;
mod metric;
mod period;
mod product;
mod spec;
mod system;

pub use generators::{
    make_full_shift, make_golden_mean, make_grid_interval_map, make_multiply, make_reflection, make_rotation, make_sft,
    multiplicative_order, PiecewiseLinear, Snap, MAX_WORDS,
};
pub(crate) use metric::{cut_mask, fuzzy_label, Kind};
pub use metric::{validate_metric, MetricSpace, MetricViolation, WordInfo};
pub use period::{eventual_period, exhaustive_horizon, Decomposition};
pub use product::{image_iterates, iterate, power_system, product_system, ProductFactor};
pub use spec::SystemSpec;
pub(crate) use system::Csr;
pub use system::SystemMap;
