//! Optimal finite-precision approximations of discrete probability
//! distributions.
//!
//! An M-type distribution assigns every outcome a multiple of `1/M`. This
//! crate finds the M-type distribution closest to a target under two
//! criteria:
//!
//! - [`quantize_vd`] minimizes the variational distance `sum |t_i - p_i|`;
//! - [`quantize_id`] minimizes the informational divergence `D(p || t)`,
//!   where the expectation is taken under the approximation.
//!
//! [`bounds`] evaluates the closed-form guarantees on both errors and
//! [`oracle`] provides an exhaustive reference for small instances.
//!
//! ```
//! use mquant_core::{make_target, quantize_id, quantize_vd};
//!
//! let t = make_target(&[0.97, 0.01, 0.01, 0.01], false).unwrap();
//! assert_eq!(quantize_vd(&t, 256).unwrap().counts(), &[248, 3, 3, 2]);
//! assert_eq!(quantize_id(&t, 256).unwrap().0.counts(), &[247, 3, 3, 3]);
//! ```

#![forbid(unsafe_code)]

pub mod bounds;
pub mod distribution;
pub mod error;
pub mod metrics;
pub mod oracle;
pub mod quantize;
pub mod special;

pub use bounds::{bound_report, check_elementwise, BoundEntry, BoundReport, ElementwiseCheck};
pub use distribution::{
    make_family, make_target, parse_values, FamilyKind, FamilySpec, Target, Truncation,
};
pub use error::{Error, Result};
pub use metrics::{
    chi_square, informational_divergence, pinsker_floor, reverse_divergence, reverse_pinsker_bound,
    variational_distance, Base, Divergence,
};
pub use oracle::{oracle_min, Criterion};
pub use quantize::{
    increment_cost, prefix_allocation, quantize_id, quantize_vd, IncrementTrace, MTypeApprox,
    Method,
};
