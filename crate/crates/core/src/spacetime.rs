//! Minkowski events, light-cone interval classification, Lorentz boosts,
//! and causal orders derived from coordinates.
//!
//! Conventions: natural units with `c = 1`; between one and three spatial
//! dimensions; the future light cone is closed, so lightlike separation
//! with positive time difference counts as causal precedence. Interval
//! signs are decided with a classification tolerance of `1e-9` on the
//! squared interval, which makes pairs very close to the null cone
//! unreliable; keep test data away from that boundary.

use num::traits::{Float, NumCast};
use thiserror::Error;

use crate::order::CausalOrder;
use crate::prob::valid_identifier;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpacetimeError {
    #[error("invalid event label `{0}`")]
    InvalidLabel(String),
    #[error("duplicate event label `{0}`")]
    DuplicateLabel(String),
    #[error("events have {left} and {right} spatial dimensions")]
    DimensionMismatch { left: usize, right: usize },
    #[error("spatial dimension must be 1..=3, got {0}")]
    BadDimension(usize),
    #[error("coordinate of `{0}` is not finite")]
    NonFiniteCoordinate(String),
    #[error("boost speed must satisfy |v| < 1")]
    SuperluminalBoost,
    #[error("axis {axis} is invalid for {dim} spatial dimensions")]
    BadAxis { axis: usize, dim: usize },
}

/// Squared-interval classification of an ordered event pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntervalClass {
    Timelike,
    Lightlike,
    Spacelike,
    Coincident,
}

/// A labeled point in 1+1 to 3+1 Minkowski coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct SpacetimeEvent<F> {
    label: String,
    t: F,
    x: Vec<F>,
}

impl<F: Float> SpacetimeEvent<F> {
    pub fn new(label: impl Into<String>, t: F, x: &[F]) -> Result<Self, SpacetimeError> {
        let label = label.into();
        if !valid_identifier(&label) {
            return Err(SpacetimeError::InvalidLabel(label));
        }
        if x.is_empty() || x.len() > 3 {
            return Err(SpacetimeError::BadDimension(x.len()));
        }
        if !t.is_finite() || x.iter().any(|c| !c.is_finite()) {
            return Err(SpacetimeError::NonFiniteCoordinate(label));
        }
        Ok(Self {
            label,
            t,
            x: x.to_vec(),
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn t(&self) -> F {
        self.t
    }

    pub fn spatial(&self) -> &[F] {
        &self.x
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }
}

fn classification_tolerance<F: Float>() -> F {
    NumCast::from(1e-9).expect("tolerance fits any float")
}

/// Classify the interval from `a` to `b` using the squared interval
/// `s^2 = dt^2 - |dx|^2`.
pub fn interval_class<F: Float>(
    a: &SpacetimeEvent<F>,
    b: &SpacetimeEvent<F>,
) -> Result<IntervalClass, SpacetimeError> {
    if a.dim() != b.dim() {
        return Err(SpacetimeError::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let dt = b.t - a.t;
    let mut dist2 = F::zero();
    let mut coincident_space = true;
    for (xa, xb) in a.x.iter().zip(&b.x) {
        let d = *xb - *xa;
        dist2 = dist2 + d * d;
        coincident_space = coincident_space && d == F::zero();
    }
    if dt == F::zero() && coincident_space {
        return Ok(IntervalClass::Coincident);
    }
    let s2 = dt * dt - dist2;
    let tol = classification_tolerance::<F>();
    if s2 > tol {
        Ok(IntervalClass::Timelike)
    } else if s2 < -tol {
        Ok(IntervalClass::Spacelike)
    } else {
        Ok(IntervalClass::Lightlike)
    }
}

/// Causal order induced by the closed future light cone: `a -> b` iff
/// `a = b`, or `b` is later than `a` and the pair is timelike or
/// lightlike. Distinct coincident events are mutually unordered.
pub fn derive_order<F: Float>(events: &[SpacetimeEvent<F>]) -> Result<CausalOrder, SpacetimeError> {
    let n = events.len();
    for (i, e) in events.iter().enumerate() {
        if events[..i].iter().any(|f| f.label == e.label) {
            return Err(SpacetimeError::DuplicateLabel(e.label.clone()));
        }
        if e.dim() != events[0].dim() {
            return Err(SpacetimeError::DimensionMismatch {
                left: events[0].dim(),
                right: e.dim(),
            });
        }
    }
    let mut matrix = vec![false; n * n];
    for i in 0..n {
        matrix[i * n + i] = true;
        for j in 0..n {
            if i == j {
                continue;
            }
            let dt = events[j].t - events[i].t;
            if dt <= F::zero() {
                continue;
            }
            let class = interval_class(&events[i], &events[j])?;
            if matches!(class, IntervalClass::Timelike | IntervalClass::Lightlike) {
                matrix[i * n + j] = true;
            }
        }
    }
    // Cone containment is transitive; the closure only matters for pairs
    // straddling the classification tolerance.
    let labels = events.iter().map(|e| e.label.clone()).collect();
    Ok(CausalOrder::from_closed_matrix(labels, matrix))
}

/// Standard Lorentz boost with speed `v` along one spatial axis:
/// `t' = gamma (t - v x)`, `x' = gamma (x - v t)` with
/// `gamma = 1 / sqrt(1 - v^2)`; other coordinates unchanged.
pub fn boost<F: Float>(
    events: &[SpacetimeEvent<F>],
    v: F,
    axis: usize,
) -> Result<Vec<SpacetimeEvent<F>>, SpacetimeError> {
    // NaN speeds fail this comparison too
    let subluminal = matches!(
        v.abs().partial_cmp(&F::one()),
        Some(std::cmp::Ordering::Less)
    );
    if !subluminal {
        return Err(SpacetimeError::SuperluminalBoost);
    }
    let gamma = F::one() / (F::one() - v * v).sqrt();
    events
        .iter()
        .map(|e| {
            if axis >= e.dim() {
                return Err(SpacetimeError::BadAxis {
                    axis,
                    dim: e.dim(),
                });
            }
            let mut x = e.x.clone();
            let t = gamma * (e.t - v * x[axis]);
            x[axis] = gamma * (x[axis] - v * e.t);
            Ok(SpacetimeEvent {
                label: e.label.clone(),
                t,
                x,
            })
        })
        .collect()
}
