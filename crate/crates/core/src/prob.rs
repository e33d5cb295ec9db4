//! Finite discrete joint probability distributions.
//!
//! Tables are dense and zero-filled, stored in lexicographic (row-major)
//! order over outcome tuples, with the last variable varying fastest.
//! Entries are generic over [`Scalar`]: exact rationals give exact
//! verdicts, floats compare within the table's tolerance. The sizes in
//! scope here are tiny (at most a few thousand outcomes), so every
//! operation simply walks the table.

use std::collections::HashSet;
use std::fmt;

use num::rational::BigRational;
use num::traits::ToPrimitive;
use thiserror::Error;

use crate::scalar::Scalar;

/// Errors from distribution construction and queries.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProbError {
    #[error("invalid variable name `{0}`")]
    InvalidName(String),
    #[error("variable `{0}` must have cardinality >= 1")]
    ZeroCardinality(String),
    #[error("duplicate variable `{0}`")]
    DuplicateVariable(String),
    #[error("outcome {value} is outside the alphabet of `{variable}` (cardinality {cardinality})")]
    OutOfAlphabet {
        variable: String,
        value: u32,
        cardinality: usize,
    },
    #[error("outcome tuple has {got} entries, expected {expected}")]
    WrongArity { expected: usize, got: usize },
    #[error("probabilities sum to {sum}, expected 1")]
    NotNormalized { sum: String },
    #[error("negative probability {0}")]
    NegativeProbability(String),
    #[error("mixed exact and approximate probabilities in one table")]
    MixedMode,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("keep set is empty")]
    EmptyKeepSet,
    #[error("variable set is empty")]
    EmptyVariableSet,
    #[error("variable sets overlap")]
    OverlappingSets,
    #[error("conditioning event has zero probability")]
    ZeroProbabilityEvent,
    #[error("variable name `{0}` appears in both factors")]
    NameCollision(String),
}

pub(crate) fn valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A named finite variable with alphabet `{0, .., cardinality - 1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableSpec {
    name: String,
    cardinality: usize,
}

impl VariableSpec {
    /// Names must match `[A-Za-z][A-Za-z0-9_]*` and cardinality must be
    /// at least 1.
    pub fn new(name: impl Into<String>, cardinality: usize) -> Result<Self, ProbError> {
        let name = name.into();
        if !valid_identifier(&name) {
            return Err(ProbError::InvalidName(name));
        }
        if cardinality == 0 {
            return Err(ProbError::ZeroCardinality(name));
        }
        Ok(Self { name, cardinality })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn cardinality(&self) -> usize {
        self.cardinality
    }
}

/// Decode a flat table index into an outcome tuple (lexicographic order,
/// last axis fastest).
pub(crate) fn decode_index(mut idx: usize, cards: &[usize]) -> Vec<u32> {
    let mut tuple = vec![0u32; cards.len()];
    for (slot, &card) in tuple.iter_mut().zip(cards).rev() {
        *slot = (idx % card) as u32;
        idx /= card;
    }
    tuple
}

/// A total probability table over a tuple of finite variables.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution<P: Scalar> {
    vars: Vec<VariableSpec>,
    table: Vec<P>,
    tol: P,
}

impl<P: Scalar> JointDistribution<P> {
    /// Build a distribution from sparse entries; missing tuples are zero.
    /// Repeated tuples accumulate. The entries must be nonnegative and sum
    /// to 1 within the scalar's default tolerance.
    pub fn from_entries(
        vars: Vec<VariableSpec>,
        entries: impl IntoIterator<Item = (Vec<u32>, P)>,
    ) -> Result<Self, ProbError> {
        Self::with_tolerance(vars, entries, P::default_tolerance())
    }

    /// As [`from_entries`](Self::from_entries) with an explicit comparison
    /// tolerance (zero for exact scalars).
    pub fn with_tolerance(
        vars: Vec<VariableSpec>,
        entries: impl IntoIterator<Item = (Vec<u32>, P)>,
        tol: P,
    ) -> Result<Self, ProbError> {
        let mut seen = HashSet::new();
        for v in &vars {
            if !seen.insert(v.name.clone()) {
                return Err(ProbError::DuplicateVariable(v.name.clone()));
            }
        }
        let size = vars
            .iter()
            .try_fold(1usize, |acc, v| acc.checked_mul(v.cardinality))
            .expect("outcome table size overflows usize");
        let mut table = vec![P::zero(); size];
        let strides = strides_of(&vars);
        for (tuple, p) in entries {
            if tuple.len() != vars.len() {
                return Err(ProbError::WrongArity {
                    expected: vars.len(),
                    got: tuple.len(),
                });
            }
            let mut idx = 0usize;
            for ((&value, var), stride) in tuple.iter().zip(&vars).zip(&strides) {
                if (value as usize) >= var.cardinality {
                    return Err(ProbError::OutOfAlphabet {
                        variable: var.name.clone(),
                        value,
                        cardinality: var.cardinality,
                    });
                }
                idx += value as usize * stride;
            }
            let p = p
                .clone()
                .sanitize_unit()
                .ok_or_else(|| ProbError::NegativeProbability(p.to_string()))?;
            table[idx] = table[idx].clone() + p;
        }
        let mut sum = P::zero();
        for p in &table {
            sum = sum + p.clone();
        }
        if (sum.clone() - P::one()).abs() > tol {
            return Err(ProbError::NotNormalized {
                sum: sum.to_string(),
            });
        }
        Ok(Self { vars, table, tol })
    }

    pub fn variables(&self) -> &[VariableSpec] {
        &self.vars
    }

    pub fn variable_names(&self) -> Vec<&str> {
        self.vars.iter().map(|v| v.name.as_str()).collect()
    }

    /// Comparison tolerance of this table.
    pub fn tolerance(&self) -> &P {
        &self.tol
    }

    /// Number of outcome tuples (product of cardinalities).
    pub fn outcome_count(&self) -> usize {
        self.table.len()
    }

    /// Probability of one full outcome tuple.
    pub fn prob(&self, tuple: &[u32]) -> Result<&P, ProbError> {
        if tuple.len() != self.vars.len() {
            return Err(ProbError::WrongArity {
                expected: self.vars.len(),
                got: tuple.len(),
            });
        }
        let strides = strides_of(&self.vars);
        let mut idx = 0usize;
        for ((&value, var), stride) in tuple.iter().zip(&self.vars).zip(&strides) {
            if (value as usize) >= var.cardinality {
                return Err(ProbError::OutOfAlphabet {
                    variable: var.name.clone(),
                    value,
                    cardinality: var.cardinality,
                });
            }
            idx += value as usize * stride;
        }
        Ok(&self.table[idx])
    }

    /// All `(tuple, probability)` pairs in lexicographic tuple order.
    pub fn outcomes(&self) -> impl Iterator<Item = (Vec<u32>, &P)> + '_ {
        let cards = self.cards();
        self.table
            .iter()
            .enumerate()
            .map(move |(i, p)| (decode_index(i, &cards), p))
    }

    fn cards(&self) -> Vec<usize> {
        self.vars.iter().map(|v| v.cardinality).collect()
    }

    fn axis_of(&self, name: &str) -> Result<usize, ProbError> {
        self.vars
            .iter()
            .position(|v| v.name == name)
            .ok_or_else(|| ProbError::UnknownVariable(name.to_string()))
    }

    fn resolve_unique(&self, names: &[&str]) -> Result<Vec<usize>, ProbError> {
        let mut axes = Vec::with_capacity(names.len());
        for name in names {
            let axis = self.axis_of(name)?;
            if axes.contains(&axis) {
                return Err(ProbError::DuplicateVariable(name.to_string()));
            }
            axes.push(axis);
        }
        Ok(axes)
    }

    /// Sum out every variable not named in `keep`; the result's variables
    /// follow the order given by `keep`.
    pub fn marginalize(&self, keep: &[&str]) -> Result<Self, ProbError> {
        if keep.is_empty() {
            return Err(ProbError::EmptyKeepSet);
        }
        let axes = self.resolve_unique(keep)?;
        let out_vars: Vec<VariableSpec> = axes.iter().map(|&a| self.vars[a].clone()).collect();
        let out_strides = strides_of(&out_vars);
        let out_size: usize = out_vars.iter().map(|v| v.cardinality).product();
        let mut out_table = vec![P::zero(); out_size];
        let cards = self.cards();
        for (i, p) in self.table.iter().enumerate() {
            let tuple = decode_index(i, &cards);
            let mut out_idx = 0usize;
            for (&axis, stride) in axes.iter().zip(&out_strides) {
                out_idx += tuple[axis] as usize * stride;
            }
            out_table[out_idx] = out_table[out_idx].clone() + p.clone();
        }
        Ok(Self {
            vars: out_vars,
            table: out_table,
            tol: self.tol.clone(),
        })
    }

    /// Condition on a partial assignment; the result ranges over the
    /// remaining variables in their original order.
    pub fn condition(&self, given: &[(&str, u32)]) -> Result<Self, ProbError> {
        let names: Vec<&str> = given.iter().map(|(n, _)| *n).collect();
        let axes = self.resolve_unique(&names)?;
        for ((name, value), &axis) in given.iter().zip(&axes) {
            if (*value as usize) >= self.vars[axis].cardinality {
                return Err(ProbError::OutOfAlphabet {
                    variable: name.to_string(),
                    value: *value,
                    cardinality: self.vars[axis].cardinality,
                });
            }
        }
        let rest: Vec<usize> = (0..self.vars.len()).filter(|a| !axes.contains(a)).collect();
        let out_vars: Vec<VariableSpec> = rest.iter().map(|&a| self.vars[a].clone()).collect();
        let out_strides = strides_of(&out_vars);
        let out_size: usize = out_vars.iter().map(|v| v.cardinality).product();

        let cards = self.cards();
        let mut mass = P::zero();
        let mut out_table = vec![P::zero(); out_size];
        for (i, p) in self.table.iter().enumerate() {
            let tuple = decode_index(i, &cards);
            let matches = given
                .iter()
                .zip(&axes)
                .all(|((_, value), &axis)| tuple[axis] == *value);
            if !matches {
                continue;
            }
            mass = mass + p.clone();
            let mut out_idx = 0usize;
            for (&axis, stride) in rest.iter().zip(&out_strides) {
                out_idx += tuple[axis] as usize * stride;
            }
            out_table[out_idx] = out_table[out_idx].clone() + p.clone();
        }
        if mass.is_zero() {
            return Err(ProbError::ZeroProbabilityEvent);
        }
        for p in &mut out_table {
            *p = p.clone() / mass.clone();
        }
        Ok(Self {
            vars: out_vars,
            table: out_table,
            tol: self.tol.clone(),
        })
    }

    fn split_marginals(&self, s: &[&str], t: &[&str]) -> Result<(Self, Self, Self), ProbError> {
        if s.is_empty() || t.is_empty() {
            return Err(ProbError::EmptyVariableSet);
        }
        let s_axes = self.resolve_unique(s)?;
        let t_axes = self.resolve_unique(t)?;
        if s_axes.iter().any(|a| t_axes.contains(a)) {
            return Err(ProbError::OverlappingSets);
        }
        let both: Vec<&str> = s.iter().chain(t.iter()).copied().collect();
        Ok((
            self.marginalize(&both)?,
            self.marginalize(s)?,
            self.marginalize(t)?,
        ))
    }

    /// Whether the joint of `s` and the joint of `t` factorize:
    /// `P(sigma, tau) = P(sigma) * P(tau)` for every assignment pair,
    /// within the table tolerance.
    pub fn is_independent(&self, s: &[&str], t: &[&str]) -> Result<bool, ProbError> {
        Ok(self.max_gap(s, t)?.deviation <= self.tol)
    }

    pub(crate) fn max_gap(&self, s: &[&str], t: &[&str]) -> Result<RawGap<P>, ProbError> {
        let (joint, ms, mt) = self.split_marginals(s, t)?;
        let s_cards = ms.cards();
        let t_cards = mt.cards();
        let t_len = mt.table.len();
        let mut best: Option<RawGap<P>> = None;
        for (i, p_s) in ms.table.iter().enumerate() {
            for (j, p_t) in mt.table.iter().enumerate() {
                let p_joint = &joint.table[i * t_len + j];
                let product = p_s.clone() * p_t.clone();
                let deviation = (p_joint.clone() - product.clone()).abs();
                let better = match &best {
                    None => true,
                    Some(b) => deviation > b.deviation,
                };
                if better {
                    best = Some(RawGap {
                        s_values: decode_index(i, &s_cards),
                        t_values: decode_index(j, &t_cards),
                        joint: p_joint.clone(),
                        product,
                        deviation,
                    });
                }
            }
        }
        Ok(best.expect("marginal tables are never empty"))
    }

    /// The assignment pair maximizing `|P(sigma, tau) - P(sigma) P(tau)|`,
    /// ties broken by lexicographically first `(sigma, tau)`.
    pub fn max_factorization_deviation(
        &self,
        s: &[&str],
        t: &[&str],
    ) -> Result<FactorizationGap, ProbError> {
        let gap = self.max_gap(s, t)?;
        Ok(FactorizationGap {
            s_assignment: s
                .iter()
                .map(|n| n.to_string())
                .zip(gap.s_values.iter().copied())
                .collect(),
            t_assignment: t
                .iter()
                .map(|n| n.to_string())
                .zip(gap.t_values.iter().copied())
                .collect(),
            joint: gap.joint.into_probability(),
            product: gap.product.into_probability(),
            deviation: gap.deviation.into_probability(),
        })
    }

    /// Product of two distributions over disjoint variable sets.
    pub fn product(&self, other: &Self) -> Result<Self, ProbError> {
        for v in &other.vars {
            if self.vars.iter().any(|u| u.name == v.name) {
                return Err(ProbError::NameCollision(v.name.clone()));
            }
        }
        let mut vars = self.vars.clone();
        vars.extend(other.vars.iter().cloned());
        let mut table = Vec::with_capacity(self.table.len() * other.table.len());
        for a in &self.table {
            for b in &other.table {
                table.push(a.clone() * b.clone());
            }
        }
        let tol = if self.tol > other.tol {
            self.tol.clone()
        } else {
            other.tol.clone()
        };
        Ok(Self { vars, table, tol })
    }
}

fn strides_of(vars: &[VariableSpec]) -> Vec<usize> {
    let mut strides = vec![1usize; vars.len()];
    for i in (0..vars.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * vars[i + 1].cardinality;
    }
    strides
}

/// Argmax cell of the factorization check, kept in the table's scalar.
pub(crate) struct RawGap<P> {
    pub s_values: Vec<u32>,
    pub t_values: Vec<u32>,
    pub joint: P,
    pub product: P,
    pub deviation: P,
}

/// Result of [`JointDistribution::max_factorization_deviation`].
#[derive(Debug, Clone, PartialEq)]
pub struct FactorizationGap {
    pub s_assignment: Vec<(String, u32)>,
    pub t_assignment: Vec<(String, u32)>,
    pub joint: Probability,
    pub product: Probability,
    pub deviation: Probability,
}

/// A probability value tagged with its arithmetic mode.
#[derive(Debug, Clone)]
pub enum Probability {
    Exact(BigRational),
    Approx(f64),
}

impl Probability {
    /// Exact rational `n / d`, stored in lowest terms.
    pub fn exact(n: i64, d: i64) -> Self {
        Probability::Exact(BigRational::from_ratio(n, d))
    }

    pub fn approx(value: f64) -> Self {
        Probability::Approx(value)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Probability::Exact(_))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Probability::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Probability::Approx(v) => *v,
        }
    }
}

impl PartialEq for Probability {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Probability::Exact(a), Probability::Exact(b)) => a == b,
            (Probability::Approx(a), Probability::Approx(b)) => a == b,
            _ => false,
        }
    }
}

impl PartialOrd for Probability {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        match (self, other) {
            (Probability::Exact(a), Probability::Exact(b)) => a.partial_cmp(b),
            (Probability::Approx(a), Probability::Approx(b)) => a.partial_cmp(b),
            _ => None,
        }
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Probability::Exact(r) => write!(f, "{r}"),
            Probability::Approx(v) => write!(f, "{v}"),
        }
    }
}

/// A joint distribution whose arithmetic mode is only known at runtime
/// (scenario files may carry either rationals or floats).
#[derive(Debug, Clone, PartialEq)]
pub enum Joint {
    Exact(JointDistribution<BigRational>),
    Approx(JointDistribution<f64>),
}

impl Joint {
    /// Build from mode-tagged entries. All entries must share one mode.
    pub fn from_entries(
        vars: Vec<VariableSpec>,
        entries: Vec<(Vec<u32>, Probability)>,
    ) -> Result<Self, ProbError> {
        let mut exact = Vec::new();
        let mut approx = Vec::new();
        for (tuple, p) in entries {
            match p {
                Probability::Exact(r) => exact.push((tuple, r)),
                Probability::Approx(v) => approx.push((tuple, v)),
            }
        }
        match (exact.is_empty(), approx.is_empty()) {
            (false, false) => Err(ProbError::MixedMode),
            (_, true) => Ok(Joint::Exact(JointDistribution::from_entries(vars, exact)?)),
            (true, false) => Ok(Joint::Approx(JointDistribution::from_entries(vars, approx)?)),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Joint::Exact(_))
    }

    pub fn variables(&self) -> &[VariableSpec] {
        match self {
            Joint::Exact(d) => d.variables(),
            Joint::Approx(d) => d.variables(),
        }
    }

    pub fn variable_names(&self) -> Vec<&str> {
        match self {
            Joint::Exact(d) => d.variable_names(),
            Joint::Approx(d) => d.variable_names(),
        }
    }

    pub fn outcome_count(&self) -> usize {
        match self {
            Joint::Exact(d) => d.outcome_count(),
            Joint::Approx(d) => d.outcome_count(),
        }
    }

    pub fn prob(&self, tuple: &[u32]) -> Result<Probability, ProbError> {
        match self {
            Joint::Exact(d) => Ok(d.prob(tuple)?.clone().into_probability()),
            Joint::Approx(d) => Ok(d.prob(tuple)?.into_probability()),
        }
    }

    /// `(tuple, probability)` pairs in lexicographic tuple order.
    pub fn probabilities(&self) -> Vec<(Vec<u32>, Probability)> {
        match self {
            Joint::Exact(d) => d
                .outcomes()
                .map(|(t, p)| (t, p.clone().into_probability()))
                .collect(),
            Joint::Approx(d) => d
                .outcomes()
                .map(|(t, p)| (t, p.into_probability()))
                .collect(),
        }
    }

    pub fn marginalize(&self, keep: &[&str]) -> Result<Self, ProbError> {
        match self {
            Joint::Exact(d) => Ok(Joint::Exact(d.marginalize(keep)?)),
            Joint::Approx(d) => Ok(Joint::Approx(d.marginalize(keep)?)),
        }
    }

    pub fn condition(&self, given: &[(&str, u32)]) -> Result<Self, ProbError> {
        match self {
            Joint::Exact(d) => Ok(Joint::Exact(d.condition(given)?)),
            Joint::Approx(d) => Ok(Joint::Approx(d.condition(given)?)),
        }
    }

    pub fn is_independent(&self, s: &[&str], t: &[&str]) -> Result<bool, ProbError> {
        match self {
            Joint::Exact(d) => d.is_independent(s, t),
            Joint::Approx(d) => d.is_independent(s, t),
        }
    }

    pub fn max_factorization_deviation(
        &self,
        s: &[&str],
        t: &[&str],
    ) -> Result<FactorizationGap, ProbError> {
        match self {
            Joint::Exact(d) => d.max_factorization_deviation(s, t),
            Joint::Approx(d) => d.max_factorization_deviation(s, t),
        }
    }

    pub fn product(&self, other: &Self) -> Result<Self, ProbError> {
        match (self, other) {
            (Joint::Exact(a), Joint::Exact(b)) => Ok(Joint::Exact(a.product(b)?)),
            (Joint::Approx(a), Joint::Approx(b)) => Ok(Joint::Approx(a.product(b)?)),
            _ => Err(ProbError::MixedMode),
        }
    }
}
