//! Causal orders: preorders (reflexive-transitive relations) over
//! variable labels.
//!
//! Orders are stored fully closed as a dense boolean matrix, so every
//! query is a lookup. Antisymmetry is not required; cycles are legal and
//! produce mutual precedence.

use std::fmt;

use thiserror::Error;

use crate::prob::valid_identifier;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrderError {
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),
    #[error("invalid label `{0}`")]
    InvalidLabel(String),
    #[error("labels must be distinct, got `{0}` twice")]
    SameLabel(String),
}

/// A preorder over a finite set of labels. `precedes(a, b)` reads
/// "b is in the causal future of a".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CausalOrder {
    labels: Vec<String>,
    // row-major n*n; matrix[a*n + b] holds a -> b
    matrix: Vec<bool>,
}

impl CausalOrder {
    /// Reflexive-transitive closure of the given generating edges.
    pub fn from_edges<L: AsRef<str>>(labels: &[L], edges: &[(L, L)]) -> Result<Self, OrderError> {
        let labels: Vec<String> = labels.iter().map(|l| l.as_ref().to_string()).collect();
        for (i, l) in labels.iter().enumerate() {
            if !valid_identifier(l) {
                return Err(OrderError::InvalidLabel(l.clone()));
            }
            if labels[..i].contains(l) {
                return Err(OrderError::DuplicateLabel(l.clone()));
            }
        }
        let n = labels.len();
        let mut matrix = vec![false; n * n];
        for i in 0..n {
            matrix[i * n + i] = true;
        }
        let index = |name: &str| -> Result<usize, OrderError> {
            labels
                .iter()
                .position(|l| l == name)
                .ok_or_else(|| OrderError::UnknownLabel(name.to_string()))
        };
        for (from, to) in edges {
            let a = index(from.as_ref())?;
            let b = index(to.as_ref())?;
            matrix[a * n + b] = true;
        }
        close_transitively(&mut matrix, n);
        Ok(Self { labels, matrix })
    }

    /// Wrap an already reflexive-transitive matrix; closes it defensively.
    pub(crate) fn from_closed_matrix(labels: Vec<String>, mut matrix: Vec<bool>) -> Self {
        let n = labels.len();
        debug_assert_eq!(matrix.len(), n * n);
        for i in 0..n {
            matrix[i * n + i] = true;
        }
        close_transitively(&mut matrix, n);
        Self { labels, matrix }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    fn index(&self, label: &str) -> Result<usize, OrderError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| OrderError::UnknownLabel(label.to_string()))
    }

    /// Whether `b` lies in the causal future of `a` (reflexively true).
    pub fn precedes(&self, a: &str, b: &str) -> Result<bool, OrderError> {
        let i = self.index(a)?;
        let j = self.index(b)?;
        Ok(self.matrix[i * self.labels.len() + j])
    }

    /// Labels that `a` cannot reach: `{ w : not (a -> w) }`, in label
    /// order. Never contains `a` itself.
    pub fn non_future(&self, a: &str) -> Result<Vec<String>, OrderError> {
        let i = self.index(a)?;
        let n = self.labels.len();
        Ok(self
            .labels
            .iter()
            .enumerate()
            .filter(|(j, _)| !self.matrix[i * n + j])
            .map(|(_, l)| l.clone())
            .collect())
    }

    /// Labels strictly preceding `a`: `{ w != a : w -> a }`, in label order.
    pub fn causal_past(&self, a: &str) -> Result<Vec<String>, OrderError> {
        let i = self.index(a)?;
        let n = self.labels.len();
        Ok(self
            .labels
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i && self.matrix[j * n + i])
            .map(|(_, l)| l.clone())
            .collect())
    }

    /// Neither label reaches the other. Rejects `a = b`: callers must be
    /// explicit about asking for a genuinely distinct pair.
    pub fn mutually_unordered(&self, a: &str, b: &str) -> Result<bool, OrderError> {
        if a == b {
            return Err(OrderError::SameLabel(a.to_string()));
        }
        Ok(!self.precedes(a, b)? && !self.precedes(b, a)?)
    }

    /// All related non-reflexive pairs `(a, b)` with `a -> b`, in label order.
    pub fn pairs(&self) -> Vec<(String, String)> {
        let n = self.labels.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j && self.matrix[i * n + j] {
                    out.push((self.labels[i].clone(), self.labels[j].clone()));
                }
            }
        }
        out
    }

    /// All unordered pairs `(a, b)` with `a` before `b` in label order.
    pub fn unordered_pairs(&self) -> Vec<(String, String)> {
        let n = self.labels.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if !self.matrix[i * n + j] && !self.matrix[j * n + i] {
                    out.push((self.labels[i].clone(), self.labels[j].clone()));
                }
            }
        }
        out
    }
}

impl fmt::Display for CausalOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<String> = self
            .pairs()
            .iter()
            .map(|(a, b)| format!("{a} -> {b}"))
            .collect();
        write!(f, "{{{}}}", edges.join("; "))
    }
}

fn close_transitively(matrix: &mut [bool], n: usize) {
    for k in 0..n {
        for i in 0..n {
            if !matrix[i * n + k] {
                continue;
            }
            for j in 0..n {
                if matrix[k * n + j] {
                    matrix[i * n + j] = true;
                }
            }
        }
    }
}

/// The two-wing measurement order over `{Z, A, B, X, Y}`: a shared state
/// feeding two outcomes, each outcome also fed by its local setting.
/// Generating edges: `Z -> X`, `Z -> Y`, `A -> X`, `B -> Y`.
pub fn bell_order() -> CausalOrder {
    CausalOrder::from_edges(
        &["Z", "A", "B", "X", "Y"],
        &[("Z", "X"), ("Z", "Y"), ("A", "X"), ("B", "Y")],
    )
    .expect("fixed labels and edges are valid")
}
