//! Exact computation with vanishing sums of roots of unity.
//!
//! A sum of `m`-th roots of unity `Σ x_k ζ^k` is modelled as an element of the
//! integral group ring `ZG` of the cyclic group `G = <z>` of order `m`; it
//! vanishes exactly when the element lies in the kernel of `φ: ZG → Z[ζ_m]`.
//!
//! - [`groupring`]: arithmetic in `ZG`, rotations, subgroup sums, text and
//!   JSON forms.
//! - [`cyclotomic`]: `Φ_m`, the map `φ`, kernel certificates and the
//!   nonnegative decompositions, plus a fixed-point numeric oracle.
//! - [`weights`]: the weight sets `W(m)` and a character-value check.
//! - [`census`]: enumeration and classification of minimal vanishing sums.

pub mod census;
pub mod cyclotomic;
pub mod error;
pub mod groupring;
pub mod weights;

pub use error::{Error, Result};
pub use groupring::{parse_element, sigma_subgroup, sigma_subgroup_star, Factorization, GroupRingElement};
