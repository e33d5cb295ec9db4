//! The free-choice criterion and its rejected past-only variant.
//!
//! A variable `A` is free when it is independent of the joint of its
//! non-future set, the variables `A` cannot reach in the causal order.
//! The past-only variant instead tests independence from the strict
//! causal past only; it is kept around because comparing the two on the
//! correlated-settings scenario shows why the weaker reading fails:
//! two perfectly correlated settings both pass it.

use std::fmt;

use thiserror::Error;

use crate::order::{bell_order, CausalOrder, OrderError};
use crate::prob::{Joint, JointDistribution, Probability, ProbError, RawGap};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FreedomError {
    #[error("order labels and distribution variables differ")]
    LabelMismatch,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("wrong order shape: {0}")]
    WrongOrderShape(String),
    #[error(transparent)]
    Prob(#[from] ProbError),
    #[error(transparent)]
    Order(#[from] OrderError),
}

/// Which freeness reading produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    /// Independence from the joint of the whole non-future set.
    PaperDefinition,
    /// Independence from the strict causal past only.
    PastOnlyVariant,
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Criterion::PaperDefinition => write!(f, "PaperDefinition"),
            Criterion::PastOnlyVariant => write!(f, "PastOnlyVariant"),
        }
    }
}

/// Evidence that a subject is correlated with part of its reference set:
/// the assignment pair with the largest factorization gap, searched over
/// nonempty subsets of the reference set (smallest subset first), so the
/// witness names the tightest correlated subsystem.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub subject_assignment: (String, u32),
    pub reference_assignment: Vec<(String, u32)>,
    /// Joint probability of the two assignments.
    pub lhs: Probability,
    /// Product of their marginal probabilities.
    pub rhs: Probability,
    pub deviation: Probability,
}

/// Outcome of a freeness check for one variable.
#[derive(Debug, Clone, PartialEq)]
pub struct FreedomVerdict {
    pub subject: String,
    pub free: bool,
    /// The set the subject was tested against, in label order.
    pub reference_set: Vec<String>,
    pub criterion: Criterion,
    /// Present exactly when `free` is false.
    pub witness: Option<Witness>,
}

fn check_labels<P: Scalar>(
    d: &JointDistribution<P>,
    o: &CausalOrder,
) -> Result<(), FreedomError> {
    let mut names: Vec<&str> = d.variable_names();
    let mut labels: Vec<&str> = o.labels().iter().map(String::as_str).collect();
    names.sort_unstable();
    labels.sort_unstable();
    if names != labels {
        return Err(FreedomError::LabelMismatch);
    }
    Ok(())
}

fn resolve_subject(o: &CausalOrder, subject: &str) -> Result<(), FreedomError> {
    if o.labels().iter().any(|l| l == subject) {
        Ok(())
    } else {
        Err(FreedomError::UnknownVariable(subject.to_string()))
    }
}

/// Free-choice verdict for `subject`: independent of the joint of its
/// non-future set, vacuously free when that set is empty.
pub fn is_free<P: Scalar>(
    d: &JointDistribution<P>,
    o: &CausalOrder,
    subject: &str,
) -> Result<FreedomVerdict, FreedomError> {
    check_labels(d, o)?;
    resolve_subject(o, subject)?;
    let reference = o.non_future(subject)?;
    build_verdict(d, subject, reference, Criterion::PaperDefinition)
}

/// The rejected variant: tests only against the strict causal past.
pub fn is_free_past_only<P: Scalar>(
    d: &JointDistribution<P>,
    o: &CausalOrder,
    subject: &str,
) -> Result<FreedomVerdict, FreedomError> {
    check_labels(d, o)?;
    resolve_subject(o, subject)?;
    let reference = o.causal_past(subject)?;
    build_verdict(d, subject, reference, Criterion::PastOnlyVariant)
}

/// One verdict per variable in label order, using the full criterion.
pub fn audit<P: Scalar>(
    d: &JointDistribution<P>,
    o: &CausalOrder,
) -> Result<Vec<FreedomVerdict>, FreedomError> {
    o.labels().iter().map(|label| is_free(d, o, label)).collect()
}

/// One verdict per variable in label order, using the past-only variant.
pub fn audit_past_only<P: Scalar>(
    d: &JointDistribution<P>,
    o: &CausalOrder,
) -> Result<Vec<FreedomVerdict>, FreedomError> {
    o.labels()
        .iter()
        .map(|label| is_free_past_only(d, o, label))
        .collect()
}

/// Convenience wrapper for the two-wing setup: under [`bell_order`],
/// `A` (resp. `B`) is free iff its marginal is unchanged by conditioning
/// on the joint of the opposite setting, opposite outcome, and the state.
pub fn check_bell_condition<P: Scalar>(
    d: &JointDistribution<P>,
    o: &CausalOrder,
    subject: &str,
) -> Result<bool, FreedomError> {
    if *o != bell_order() {
        return Err(FreedomError::WrongOrderShape(
            "expected the two-wing measurement order over {Z, A, B, X, Y}".to_string(),
        ));
    }
    if subject != "A" && subject != "B" {
        return Err(FreedomError::WrongOrderShape(format!(
            "subject must be A or B, got `{subject}`"
        )));
    }
    Ok(is_free(d, o, subject)?.free)
}

fn build_verdict<P: Scalar>(
    d: &JointDistribution<P>,
    subject: &str,
    reference: Vec<String>,
    criterion: Criterion,
) -> Result<FreedomVerdict, FreedomError> {
    if reference.is_empty() {
        // Independence from nothing holds vacuously.
        return Ok(FreedomVerdict {
            subject: subject.to_string(),
            free: true,
            reference_set: reference,
            criterion,
            witness: None,
        });
    }
    let refs: Vec<&str> = reference.iter().map(String::as_str).collect();
    let free = d.is_independent(&[subject], &refs)?;
    let witness = if free {
        None
    } else {
        Some(best_witness(d, subject, &reference)?)
    };
    Ok(FreedomVerdict {
        subject: subject.to_string(),
        free,
        reference_set: reference,
        criterion,
        witness,
    })
}

/// Strongest factorization gap over nonempty subsets of the reference
/// set. Subsets are scanned by increasing size, then lexicographically,
/// and only a strictly larger deviation replaces the incumbent, so the
/// witness is deterministic and names the smallest offending subsystem.
fn best_witness<P: Scalar>(
    d: &JointDistribution<P>,
    subject: &str,
    reference: &[String],
) -> Result<Witness, ProbError> {
    let mut best: Option<(RawGap<P>, Vec<usize>)> = None;
    for size in 1..=reference.len() {
        for combo in combinations(reference.len(), size) {
            let subset: Vec<&str> = combo.iter().map(|&i| reference[i].as_str()).collect();
            let gap = d.max_gap(&[subject], &subset)?;
            let better = match &best {
                None => true,
                Some((incumbent, _)) => gap.deviation > incumbent.deviation,
            };
            if better {
                best = Some((gap, combo));
            }
        }
    }
    let (gap, combo) = best.expect("reference set is nonempty");
    Ok(Witness {
        subject_assignment: (subject.to_string(), gap.s_values[0]),
        reference_assignment: combo
            .iter()
            .map(|&i| reference[i].clone())
            .zip(gap.t_values.iter().copied())
            .collect(),
        lhs: gap.joint.into_probability(),
        rhs: gap.product.into_probability(),
        deviation: gap.deviation.into_probability(),
    })
}

/// All k-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k == 0 || k > n {
        return out;
    }
    let mut c: Vec<usize> = (0..k).collect();
    'outer: loop {
        out.push(c.clone());
        let mut i = k - 1;
        loop {
            if c[i] < n - k + i {
                c[i] += 1;
                for j in (i + 1)..k {
                    c[j] = c[j - 1] + 1;
                }
                continue 'outer;
            }
            if i == 0 {
                break 'outer;
            }
            i -= 1;
        }
    }
    out
}

impl Joint {
    pub fn is_free(&self, o: &CausalOrder, subject: &str) -> Result<FreedomVerdict, FreedomError> {
        match self {
            Joint::Exact(d) => is_free(d, o, subject),
            Joint::Approx(d) => is_free(d, o, subject),
        }
    }

    pub fn is_free_past_only(
        &self,
        o: &CausalOrder,
        subject: &str,
    ) -> Result<FreedomVerdict, FreedomError> {
        match self {
            Joint::Exact(d) => is_free_past_only(d, o, subject),
            Joint::Approx(d) => is_free_past_only(d, o, subject),
        }
    }

    pub fn audit(&self, o: &CausalOrder) -> Result<Vec<FreedomVerdict>, FreedomError> {
        match self {
            Joint::Exact(d) => audit(d, o),
            Joint::Approx(d) => audit(d, o),
        }
    }

    pub fn audit_past_only(&self, o: &CausalOrder) -> Result<Vec<FreedomVerdict>, FreedomError> {
        match self {
            Joint::Exact(d) => audit_past_only(d, o),
            Joint::Approx(d) => audit_past_only(d, o),
        }
    }

    pub fn check_bell_condition(
        &self,
        o: &CausalOrder,
        subject: &str,
    ) -> Result<bool, FreedomError> {
        match self {
            Joint::Exact(d) => check_bell_condition(d, o, subject),
            Joint::Approx(d) => check_bell_condition(d, o, subject),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::VariableSpec;
    use num::BigRational;

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::from_ratio(n, d)
    }

    /// Z uniform, A = Z.
    fn copied_bit() -> JointDistribution<BigRational> {
        JointDistribution::from_entries(
            vec![
                VariableSpec::new("Z", 2).unwrap(),
                VariableSpec::new("A", 2).unwrap(),
            ],
            vec![(vec![0, 0], ratio(1, 2)), (vec![1, 1], ratio(1, 2))],
        )
        .unwrap()
    }

    #[test]
    fn dependent_chain_fails_both_criteria() {
        let d = copied_bit();
        let o = CausalOrder::from_edges(&["Z", "A"], &[("Z", "A")]).unwrap();
        let paper = is_free(&d, &o, "A").unwrap();
        assert!(!paper.free);
        assert_eq!(paper.reference_set, vec!["Z"]);
        let past = is_free_past_only(&d, &o, "A").unwrap();
        assert!(!past.free);
        assert_eq!(past.reference_set, vec!["Z"]);
        assert_eq!(past.criterion, Criterion::PastOnlyVariant);
        let w = past.witness.unwrap();
        assert_eq!(w.deviation, Probability::exact(1, 4));
        assert_eq!(w.subject_assignment, ("A".to_string(), 0));
        assert_eq!(w.reference_assignment, vec![("Z".to_string(), 0)]);
    }

    #[test]
    fn empty_non_future_is_vacuously_free() {
        let d = copied_bit();
        // Z reaches everything, so nothing is outside its future.
        let o = CausalOrder::from_edges(&["Z", "A"], &[("Z", "A")]).unwrap();
        let v = is_free(&d, &o, "Z").unwrap();
        assert!(v.free);
        assert!(v.reference_set.is_empty());
        assert!(v.witness.is_none());
    }

    #[test]
    fn independent_pair_is_free_both_ways() {
        let d = JointDistribution::from_entries(
            vec![
                VariableSpec::new("Z", 2).unwrap(),
                VariableSpec::new("A", 2).unwrap(),
            ],
            (0..4).map(|i| (vec![i / 2, i % 2], ratio(1, 4))),
        )
        .unwrap();
        let o = CausalOrder::from_edges::<&str>(&["Z", "A"], &[]).unwrap();
        assert!(is_free(&d, &o, "A").unwrap().free);
        assert!(is_free(&d, &o, "Z").unwrap().free);
    }

    #[test]
    fn label_mismatch_is_reported() {
        let d = copied_bit();
        let o = CausalOrder::from_edges::<&str>(&["Z", "B"], &[]).unwrap();
        assert_eq!(is_free(&d, &o, "Z").unwrap_err(), FreedomError::LabelMismatch);
    }

    #[test]
    fn unknown_subject_is_reported() {
        let d = copied_bit();
        let o = CausalOrder::from_edges::<&str>(&["Z", "A"], &[]).unwrap();
        assert_eq!(
            is_free(&d, &o, "Q").unwrap_err(),
            FreedomError::UnknownVariable("Q".to_string())
        );
    }

    #[test]
    fn audit_reports_in_label_order() {
        let d = copied_bit();
        let o = CausalOrder::from_edges(&["Z", "A"], &[("Z", "A")]).unwrap();
        let verdicts = audit(&d, &o).unwrap();
        assert_eq!(verdicts.len(), 2);
        assert_eq!(verdicts[0].subject, "Z");
        assert!(verdicts[0].free);
        assert_eq!(verdicts[1].subject, "A");
        assert!(!verdicts[1].free);
    }

    #[test]
    fn bell_condition_rejects_other_orders() {
        let d = copied_bit();
        let o = CausalOrder::from_edges(&["Z", "A"], &[("Z", "A")]).unwrap();
        assert!(matches!(
            check_bell_condition(&d, &o, "A"),
            Err(FreedomError::WrongOrderShape(_))
        ));
    }

    #[test]
    fn combinations_are_lexicographic() {
        assert_eq!(
            combinations(3, 2),
            vec![vec![0, 1], vec![0, 2], vec![1, 2]]
        );
        assert_eq!(combinations(3, 1), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
    }
}
