//! Return-time sets, dynamical property checkers, and the harness that
//! evaluates an equivalence list across a system and its lifts.

mod basis;
mod catalog;
mod metric_props;
mod returns;
mod theorems;
mod topo;
mod verdict;

pub use basis::{truncation, BasisSpec, OpenBasis};
pub use catalog::{
    builtin_systems, is_bijection, is_isometry, mild_mixing_catalog, parse_system, small_systems, BUILTIN, GENERATORS,
    THEOREMS,
};
pub use metric_props::{
    diam_decay, diam_reaches_zero, equicontinuity, equicontinuity_modulus, is_proximal, is_proximal_pair,
    is_uniformly_rigid, modulus_curve, rigidity_curve, Modulus,
};
pub use returns::{point_return_set, return_time_set, return_times, ReturnTimes, SetOrbit};
pub use theorems::{verify_theorem, EquivalenceReport, ItemRow, Level, RedAlert, TheoremConfig};
pub use topo::{
    exactness_of, is_a_transitive, is_devaney, is_f_mixing, is_f_transitive, is_mildly_mixing_bounded, is_mixing,
    is_n_rigid, is_periodically_dense, is_sensitive, is_transitive, is_weakly_mixing, is_weakly_rigid_upto,
    omega_limit, periodic_points, recurrent_points, weakly_disjoint, WeakMixingMethod,
};
pub use verdict::{Exactness, Status, Verdict};
