//! Grid-quantized fuzzy sets: cuts, the levelwise metric `d_∞`, the Zadeh
//! extension `T_F`, and `g`-fuzzifications.

mod gfunction;
mod lift;
mod piecewise;
mod set;
mod zadeh;

pub use gfunction::{xi_of, GFunction};
pub use lift::{enumerate_fuzzy, fuzzy_at, fuzzy_base, fuzzy_index, fuzzy_lift_system, Constraint};
pub use piecewise::{merge_chains, MergedChains, PiecewiseRepresentation};
pub use set::{alpha_cut, embed_indicator, levelwise_distance, support, FuzzySet, LevelGrid};
pub use zadeh::{g_fuzzify_apply, zadeh_apply};
