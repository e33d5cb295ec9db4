//! Built-in named scenarios and CHSH evaluation.
//!
//! A scenario bundles a joint distribution with a causal order over the
//! same variable names, optionally backed by a spacetime embedding whose
//! derived order must agree. Outcome encoding for all correlation
//! formulas is fixed globally: outcome `0` means `+1`, outcome `1`
//! means `-1`.
//!
//! Built-ins:
//! - [`single_measurement`] — state `Z`, chosen measurement `A`,
//!   outcome `X = Z xor A`;
//! - [`correlated_settings`] — two perfectly correlated settings that are
//!   nonetheless independent of the earlier state, separating the two
//!   freeness criteria;
//! - [`pr_box`] — the extremal no-signalling box `x xor y = a b`;
//! - [`singlet`] — two-qubit singlet statistics
//!   `E(a, b) = -cos(theta_a - theta_b)` at configurable angles;
//! - [`local_hidden_variable`] — deterministic response maps driven by a
//!   hidden variable `Z`.

use num::rational::BigRational;
use thiserror::Error;

use crate::freedom::{FreedomError, FreedomVerdict};
use crate::order::{bell_order, CausalOrder, OrderError};
use crate::prob::{Joint, JointDistribution, Probability, ProbError, VariableSpec};
use crate::scalar::Scalar;
use crate::spacetime::{derive_order, SpacetimeError, SpacetimeEvent};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("order labels and distribution variables differ")]
    LabelMismatch,
    #[error("embedding-derived order differs from the declared order")]
    EmbeddingMismatch,
    #[error("bad response map: {0}")]
    BadResponseMap(String),
    #[error("variable `{0}` must be binary for CHSH evaluation")]
    NotBinary(String),
    #[error(transparent)]
    Prob(#[from] ProbError),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Spacetime(#[from] SpacetimeError),
    #[error(transparent)]
    Freedom(#[from] FreedomError),
}

/// A named model: distribution plus causal order, with an optional
/// spacetime embedding that must reproduce the order.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    name: String,
    dist: Joint,
    order: CausalOrder,
    embedding: Option<Vec<SpacetimeEvent<f64>>>,
}

impl Scenario {
    pub fn new(
        name: impl Into<String>,
        dist: Joint,
        order: CausalOrder,
        embedding: Option<Vec<SpacetimeEvent<f64>>>,
    ) -> Result<Self, ScenarioError> {
        let mut names: Vec<&str> = dist.variable_names();
        let mut labels: Vec<&str> = order.labels().iter().map(String::as_str).collect();
        names.sort_unstable();
        labels.sort_unstable();
        if names != labels {
            return Err(ScenarioError::LabelMismatch);
        }
        if let Some(events) = &embedding {
            if derive_order(events)? != order {
                return Err(ScenarioError::EmbeddingMismatch);
            }
        }
        Ok(Self {
            name: name.into(),
            dist,
            order,
            embedding,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dist(&self) -> &Joint {
        &self.dist
    }

    pub fn order(&self) -> &CausalOrder {
        &self.order
    }

    pub fn embedding(&self) -> Option<&[SpacetimeEvent<f64>]> {
        self.embedding.as_deref()
    }

    pub fn audit(&self) -> Result<Vec<FreedomVerdict>, FreedomError> {
        self.dist.audit(&self.order)
    }

    pub fn audit_past_only(&self) -> Result<Vec<FreedomVerdict>, FreedomError> {
        self.dist.audit_past_only(&self.order)
    }

    pub fn is_free(&self, subject: &str) -> Result<FreedomVerdict, FreedomError> {
        self.dist.is_free(&self.order, subject)
    }

    pub fn is_free_past_only(&self, subject: &str) -> Result<FreedomVerdict, FreedomError> {
        self.dist.is_free_past_only(&self.order, subject)
    }

    /// CHSH value of the scenario's `A, B, X, Y` block.
    pub fn chsh(&self) -> Result<Probability, ScenarioError> {
        match &self.dist {
            Joint::Exact(d) => Ok(chsh_value(d)?.into_probability()),
            Joint::Approx(d) => Ok(chsh_value(d)?.into_probability()),
        }
    }
}

/// CHSH value of a distribution over binary `A, B, X, Y` (other
/// variables are summed out): with correlators
/// `E(a, b) = sum_{x,y} (-1)^(x+y) P(x, y | a, b)`, the value is the
/// largest `|E(0,0) +- E(0,1) +- E(1,0) +- E(1,1)|` over the four
/// sign placements with a single minus.
pub fn chsh_value<P: Scalar>(d: &JointDistribution<P>) -> Result<P, ScenarioError> {
    let m = d.marginalize(&["A", "B", "X", "Y"])?;
    for v in m.variables() {
        if v.cardinality() != 2 {
            return Err(ScenarioError::NotBinary(v.name().to_string()));
        }
    }
    let mut correlators = Vec::with_capacity(4);
    for a in 0..2u32 {
        for b in 0..2u32 {
            let cond = m.condition(&[("A", a), ("B", b)])?;
            let mut e = P::zero();
            for x in 0..2u32 {
                for y in 0..2u32 {
                    let p = cond.prob(&[x, y])?.clone();
                    if (x + y) % 2 == 0 {
                        e = e + p;
                    } else {
                        e = e - p;
                    }
                }
            }
            correlators.push(e);
        }
    }
    let mut best = P::zero();
    for minus_at in 0..4 {
        let mut s = P::zero();
        for (i, e) in correlators.iter().enumerate() {
            if i == minus_at {
                s = s - e.clone();
            } else {
                s = s + e.clone();
            }
        }
        let s = s.abs();
        if s > best {
            best = s;
        }
    }
    Ok(best)
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::from_ratio(n, d)
}

fn bit(name: &str) -> VariableSpec {
    VariableSpec::new(name, 2).expect("static name is valid")
}

/// State `Z`, measurement choice `A`, outcome `X = Z xor A`, with `Z` and
/// `A` independent uniform bits. `A` is free although it is correlated
/// with the joint `(Z, X)`: the outcome lies in its causal future.
pub fn single_measurement() -> Scenario {
    let vars = vec![bit("Z"), bit("A"), bit("X")];
    let entries = (0..2u32)
        .flat_map(|z| (0..2u32).map(move |a| (vec![z, a, z ^ a], ratio(1, 4))))
        .collect::<Vec<_>>();
    let dist = JointDistribution::from_entries(vars, entries).expect("table is normalized");
    let order = CausalOrder::from_edges(&["Z", "A", "X"], &[("Z", "X"), ("A", "X")])
        .expect("static labels");
    Scenario::new("single_measurement", Joint::Exact(dist), order, None)
        .expect("construction satisfies invariants")
}

/// Two-wing setup in which the settings `A` and `B` are perfectly
/// correlated copies of one uniform bit, both independent of the earlier
/// state `Z`, and each outcome copies its local setting. The past-only
/// variant accepts both settings (each is independent of its past `{Z}`)
/// while the full criterion rejects both.
pub fn correlated_settings() -> Scenario {
    let vars = vec![bit("Z"), bit("A"), bit("B"), bit("X"), bit("Y")];
    let entries = (0..2u32)
        .flat_map(|z| (0..2u32).map(move |c| (vec![z, c, c, c, c], ratio(1, 4))))
        .collect::<Vec<_>>();
    let dist = JointDistribution::from_entries(vars, entries).expect("table is normalized");
    // The state precedes the choices here, so the past-only reading has a
    // nonempty set {Z} to check against.
    let order = CausalOrder::from_edges(
        &["Z", "A", "B", "X", "Y"],
        &[
            ("Z", "A"),
            ("Z", "B"),
            ("Z", "X"),
            ("Z", "Y"),
            ("A", "X"),
            ("B", "Y"),
        ],
    )
    .expect("static labels");
    Scenario::new("correlated_settings", Joint::Exact(dist), order, None)
        .expect("construction satisfies invariants")
}

/// The extremal no-signalling box: uniform independent settings, outcomes
/// satisfying `x xor y = a b` with probability 1, split uniformly.
/// With `include_trivial_z` a cardinality-1 state `Z` is kept so the
/// label set matches the two-wing order.
pub fn pr_box(include_trivial_z: bool) -> Scenario {
    let mut entries = Vec::new();
    for a in 0..2u32 {
        for b in 0..2u32 {
            for x in 0..2u32 {
                for y in 0..2u32 {
                    if x ^ y == a & b {
                        let mut tuple = if include_trivial_z { vec![0u32] } else { vec![] };
                        tuple.extend([a, b, x, y]);
                        entries.push((tuple, ratio(1, 8)));
                    }
                }
            }
        }
    }
    let (vars, order) = if include_trivial_z {
        (
            vec![
                VariableSpec::new("Z", 1).expect("static name"),
                bit("A"),
                bit("B"),
                bit("X"),
                bit("Y"),
            ],
            bell_order(),
        )
    } else {
        (
            vec![bit("A"), bit("B"), bit("X"), bit("Y")],
            CausalOrder::from_edges(&["A", "B", "X", "Y"], &[("A", "X"), ("B", "Y")])
                .expect("static labels"),
        )
    };
    let dist = JointDistribution::from_entries(vars, entries).expect("table is normalized");
    Scenario::new("pr_box", Joint::Exact(dist), order, None)
        .expect("construction satisfies invariants")
}

/// Singlet-state statistics with measurement angles `angles_a` and
/// `angles_b` (radians): uniform independent settings and
/// `P(x, y | a, b) = (1 + s_x s_y E(a, b)) / 4` with
/// `E(a, b) = -cos(theta_a - theta_b)` and `s = +1` for outcome 0,
/// `-1` for outcome 1. Cosines are irrational, so the table is
/// float-valued with the default tolerance.
pub fn singlet(angles_a: [f64; 2], angles_b: [f64; 2]) -> Scenario {
    let vars = vec![
        VariableSpec::new("Z", 1).expect("static name"),
        bit("A"),
        bit("B"),
        bit("X"),
        bit("Y"),
    ];
    let mut entries = Vec::new();
    for (a, theta_a) in angles_a.iter().enumerate() {
        for (b, theta_b) in angles_b.iter().enumerate() {
            let e = -(theta_a - theta_b).cos();
            for x in 0..2u32 {
                for y in 0..2u32 {
                    let sx = 1.0 - 2.0 * x as f64;
                    let sy = 1.0 - 2.0 * y as f64;
                    let p = (1.0 + sx * sy * e) / 16.0;
                    entries.push((vec![0, a as u32, b as u32, x, y], p));
                }
            }
        }
    }
    let dist = JointDistribution::from_entries(vars, entries).expect("table is normalized");
    Scenario::new("singlet", Joint::Approx(dist), bell_order(), None)
        .expect("construction satisfies invariants")
}

/// Hidden-variable model: `Z` has `lambda_card` values distributed as
/// `lambda_probs`, settings are uniform and independent of `Z`, and the
/// outcomes follow the deterministic response tables
/// `response_x[a][lambda]`, `response_y[b][lambda]` (values in `{0, 1}`).
pub fn local_hidden_variable(
    lambda_card: usize,
    response_x: &[Vec<u8>],
    response_y: &[Vec<u8>],
    lambda_probs: &[BigRational],
) -> Result<Scenario, ScenarioError> {
    if lambda_card == 0 {
        return Err(ScenarioError::BadResponseMap(
            "hidden variable needs at least one value".to_string(),
        ));
    }
    for (side, map) in [("response_x", response_x), ("response_y", response_y)] {
        if map.len() != 2 {
            return Err(ScenarioError::BadResponseMap(format!(
                "{side} must cover both settings, got {}",
                map.len()
            )));
        }
        for row in map {
            if row.len() != lambda_card {
                return Err(ScenarioError::BadResponseMap(format!(
                    "{side} row covers {} hidden values, expected {lambda_card}",
                    row.len()
                )));
            }
            if row.iter().any(|&v| v > 1) {
                return Err(ScenarioError::BadResponseMap(format!(
                    "{side} outcomes must be 0 or 1"
                )));
            }
        }
    }
    if lambda_probs.len() != lambda_card {
        return Err(ScenarioError::BadResponseMap(format!(
            "{} hidden-variable probabilities for cardinality {lambda_card}",
            lambda_probs.len()
        )));
    }
    let vars = vec![
        VariableSpec::new("Z", lambda_card)?,
        bit("A"),
        bit("B"),
        bit("X"),
        bit("Y"),
    ];
    let quarter = ratio(1, 4);
    let mut entries = Vec::new();
    for (z, pz) in lambda_probs.iter().enumerate() {
        for (a, row_x) in response_x.iter().enumerate() {
            for (b, row_y) in response_y.iter().enumerate() {
                let x = row_x[z] as u32;
                let y = row_y[z] as u32;
                entries.push((
                    vec![z as u32, a as u32, b as u32, x, y],
                    pz.clone() * quarter.clone(),
                ));
            }
        }
    }
    let dist = JointDistribution::from_entries(vars, entries)?;
    Scenario::new(
        "local_hidden_variable",
        Joint::Exact(dist),
        bell_order(),
        None,
    )
}
