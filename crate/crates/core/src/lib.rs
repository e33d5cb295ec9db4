//! Free-choice auditing for finite discrete probability models equipped
//! with a causal order.
//!
//! A variable is a *free choice* when it is statistically independent of
//! the joint of every variable outside its causal future. This crate
//! provides the pieces needed to decide that question mechanically:
//!
//! - [`prob`] — exact-rational and float joint distributions with
//!   marginalization, conditioning and independence queries;
//! - [`order`] — preorders over variable labels (reflexive-transitive
//!   relations) with closure and non-future queries;
//! - [`spacetime`] — Minkowski events, light-cone interval classification,
//!   Lorentz boosts, and causal orders derived from coordinates;
//! - [`freedom`] — the free-choice criterion, the weaker past-only
//!   variant, and whole-model audits with dependence witnesses;
//! - [`scenario`] — built-in named scenarios (single measurement,
//!   correlated settings, PR box, singlet correlations, local hidden
//!   variables) and CHSH evaluation;
//! - [`sampling`] — seeded reproducible sampling and G-test independence
//!   checks on sampled data.
//!
//! Numeric entries are generic over [`scalar::Scalar`]; the concrete
//! instantiations used throughout are aliased below.

pub mod freedom;
pub mod order;
pub mod prob;
pub mod sampling;
pub mod scalar;
pub mod scenario;
pub mod spacetime;

pub use num::BigRational;

/// Joint distribution with arbitrary-precision rational entries.
pub type ExactJoint = prob::JointDistribution<BigRational>;
/// Joint distribution with `f64` entries and a small comparison tolerance.
pub type ApproxJoint = prob::JointDistribution<f64>;
/// Spacetime event with `f64` coordinates.
pub type Event = spacetime::SpacetimeEvent<f64>;

pub use freedom::{Criterion, FreedomVerdict, Witness};
pub use order::{bell_order, CausalOrder};
pub use prob::{Joint, JointDistribution, Probability, VariableSpec};
pub use scenario::Scenario;
