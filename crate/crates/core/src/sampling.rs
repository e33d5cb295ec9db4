//! Seeded sampling from joint distributions and frequency-based
//! independence testing of the sampled data.
//!
//! Everything here is an empirical companion to the exact machinery in
//! [`crate::prob`]: the underlying question is decided on the table, the
//! sampler exists so the same question can be asked of finite data.
//!
//! # Generator
//!
//! Draws come from SplitMix64, fixed across platforms by its update
//! equations (all arithmetic mod 2^64):
//!
//! ```text
//! state  = state + 0x9E3779B97F4A7C15
//! z      = state
//! z      = (z xor (z >> 30)) * 0xBF58476D1CE4E915
//! z      = (z xor (z >> 27)) * 0x94D049BB133111EB
//! output = z xor (z >> 31)
//! ```
//!
//! A uniform double in `[0, 1)` takes the top 53 bits: `output >> 11`
//! scaled by `2^-53`. Sampling proceeds in batches of [`SAMPLE_BATCH`]
//! rows; batch `i` reseeds its own generator at `seed + i` (wrapping), so
//! batches are independent streams and may be produced concurrently and
//! merged in batch order with identical results.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use statrs::function::gamma::gamma_ur;
use thiserror::Error;

use crate::prob::{decode_index, Joint, JointDistribution, ProbError, VariableSpec};
use crate::scalar::Scalar;

#[derive(Debug, Error)]
pub enum SamplingError {
    #[error("sample variables do not match the given specs: {0}")]
    SpecMismatch(String),
    #[error("variable sets overlap")]
    OverlappingSets,
    #[error("variable set is empty")]
    EmptyVariableSet,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("degenerate contingency table: {side} side has {categories} observed category")]
    DegenerateTable { side: String, categories: usize },
    #[error("sample file, line {line}: {message}")]
    ParseError { line: usize, message: String },
    #[error(transparent)]
    Prob(#[from] ProbError),
}

/// Deterministic 64-bit generator; see the module docs for the exact
/// update equations.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E915);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` from the top 53 bits.
    pub fn next_unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in `0..n`. Used by test harnesses more than by sampling.
    pub fn next_below(&mut self, n: u64) -> u64 {
        // modulo bias is irrelevant at the ranges used here
        self.next_u64() % n
    }
}

/// Rows of i.i.d. draws from a joint distribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleSet {
    variables: Vec<String>,
    rows: Vec<Vec<u32>>,
    seed: u64,
}

impl SampleSet {
    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    /// Serialize: a `#` comment carrying seed and row count, a header of
    /// variable names, then one comma-separated row per draw.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# seed={} n={}", self.seed, self.rows.len());
        let _ = writeln!(out, "{}", self.variables.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    /// Parse the [`to_csv`](Self::to_csv) format. The seed comment is
    /// optional (seed defaults to 0), but a declared `n` must match the
    /// number of rows.
    pub fn from_csv(text: &str) -> Result<Self, SamplingError> {
        let mut seed = 0u64;
        let mut declared_n: Option<usize> = None;
        let mut variables: Option<Vec<String>> = None;
        let mut rows = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                for field in comment.split_whitespace() {
                    if let Some(v) = field.strip_prefix("seed=") {
                        seed = v.parse().map_err(|_| SamplingError::ParseError {
                            line: idx + 1,
                            message: format!("bad seed `{v}`"),
                        })?;
                    } else if let Some(v) = field.strip_prefix("n=") {
                        declared_n = Some(v.parse().map_err(|_| SamplingError::ParseError {
                            line: idx + 1,
                            message: format!("bad row count `{v}`"),
                        })?);
                    }
                }
                continue;
            }
            match &variables {
                None => {
                    let names: Vec<String> = line.split(',').map(|s| s.trim().to_string()).collect();
                    if names.iter().any(|n| n.is_empty()) {
                        return Err(SamplingError::ParseError {
                            line: idx + 1,
                            message: "empty variable name in header".to_string(),
                        });
                    }
                    variables = Some(names);
                }
                Some(names) => {
                    let cells: Result<Vec<u32>, _> =
                        line.split(',').map(|c| c.trim().parse::<u32>()).collect();
                    let row = cells.map_err(|_| SamplingError::ParseError {
                        line: idx + 1,
                        message: format!("bad outcome row `{line}`"),
                    })?;
                    if row.len() != names.len() {
                        return Err(SamplingError::ParseError {
                            line: idx + 1,
                            message: format!(
                                "row has {} cells, header has {}",
                                row.len(),
                                names.len()
                            ),
                        });
                    }
                    rows.push(row);
                }
            }
        }
        let variables = variables.ok_or(SamplingError::ParseError {
            line: 1,
            message: "missing header row".to_string(),
        })?;
        if let Some(n) = declared_n {
            if n != rows.len() {
                return Err(SamplingError::ParseError {
                    line: 1,
                    message: format!("comment declares n={n} but file has {} rows", rows.len()),
                });
            }
        }
        Ok(Self {
            variables,
            rows,
            seed,
        })
    }
}

/// Rows per independently seeded batch.
pub const SAMPLE_BATCH: usize = 8192;

/// Draw `n` i.i.d. rows by inverse CDF over the lexicographically ordered
/// outcome tuples. Identical `(d, n, seed)` give identical rows on every
/// platform. Panics when `n == 0`.
pub fn sample_dist<P: Scalar>(d: &JointDistribution<P>, n: usize, seed: u64) -> SampleSet {
    assert!(n >= 1, "sample size must be at least 1");
    let cards: Vec<usize> = d.variables().iter().map(|v| v.cardinality()).collect();
    let mut cumulative = Vec::with_capacity(d.outcome_count());
    let mut acc = 0.0f64;
    for (_, p) in d.outcomes() {
        acc += p.to_f64().unwrap_or(0.0);
        cumulative.push(acc);
    }
    let mut rows = Vec::with_capacity(n);
    let batches = n.div_ceil(SAMPLE_BATCH);
    for batch in 0..batches {
        let mut rng = SplitMix64::new(seed.wrapping_add(batch as u64));
        let take = SAMPLE_BATCH.min(n - batch * SAMPLE_BATCH);
        for _ in 0..take {
            let u = rng.next_unit() * acc;
            let idx = cumulative.partition_point(|c| *c <= u);
            let idx = idx.min(cumulative.len() - 1);
            rows.push(decode_index(idx, &cards));
        }
    }
    SampleSet {
        variables: d.variables().iter().map(|v| v.name().to_string()).collect(),
        rows,
        seed,
    }
}

/// [`sample_dist`] for a runtime-mode distribution.
pub fn sample(d: &Joint, n: usize, seed: u64) -> SampleSet {
    match d {
        Joint::Exact(d) => sample_dist(d, n, seed),
        Joint::Approx(d) => sample_dist(d, n, seed),
    }
}

/// Relative frequencies of the sampled rows as a float table.
pub fn empirical_distribution(
    s: &SampleSet,
    specs: &[VariableSpec],
) -> Result<JointDistribution<f64>, SamplingError> {
    if specs.len() != s.variables.len()
        || specs
            .iter()
            .zip(&s.variables)
            .any(|(spec, name)| spec.name() != name)
    {
        return Err(SamplingError::SpecMismatch(format!(
            "specs name [{}], samples carry [{}]",
            specs.iter().map(|v| v.name()).collect::<Vec<_>>().join(", "),
            s.variables.join(", ")
        )));
    }
    for row in &s.rows {
        for (value, spec) in row.iter().zip(specs) {
            if (*value as usize) >= spec.cardinality() {
                return Err(SamplingError::SpecMismatch(format!(
                    "outcome {} of `{}` is outside cardinality {}",
                    value,
                    spec.name(),
                    spec.cardinality()
                )));
            }
        }
    }
    let n = s.rows.len() as f64;
    let mut counts: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
    for row in &s.rows {
        *counts.entry(row.clone()).or_insert(0) += 1;
    }
    let entries: Vec<(Vec<u32>, f64)> = counts
        .into_iter()
        .map(|(tuple, c)| (tuple, c as f64 / n))
        .collect();
    Ok(JointDistribution::from_entries(specs.to_vec(), entries)?)
}

/// G-test (likelihood-ratio) summary for one lhs/rhs split.
#[derive(Debug, Clone)]
pub struct GTestResult {
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
    /// `(alpha, reject)` for each requested level.
    pub reject_at: Vec<(f64, bool)>,
    pub warnings: Vec<String>,
}

/// Likelihood-ratio independence test of the joint lhs-assignment against
/// the joint rhs-assignment: `G = 2 sum O ln(O / E)` over observed cells,
/// expected counts from the product of marginal counts over `n`, compared
/// to the chi-squared upper tail with
/// `(categories_lhs - 1) (categories_rhs - 1)` degrees of freedom.
/// Categories are the distinct observed tuples of each side. Cells with
/// `O = 0` contribute zero. Expected counts below 5 produce a warning.
pub fn g_test(
    s: &SampleSet,
    lhs: &[&str],
    rhs: &[&str],
    alphas: &[f64],
) -> Result<GTestResult, SamplingError> {
    if lhs.is_empty() || rhs.is_empty() {
        return Err(SamplingError::EmptyVariableSet);
    }
    let resolve = |names: &[&str]| -> Result<Vec<usize>, SamplingError> {
        names
            .iter()
            .map(|name| {
                s.variables
                    .iter()
                    .position(|v| v == name)
                    .ok_or_else(|| SamplingError::UnknownVariable(name.to_string()))
            })
            .collect()
    };
    let lhs_axes = resolve(lhs)?;
    let rhs_axes = resolve(rhs)?;
    if lhs_axes.iter().any(|a| rhs_axes.contains(a)) {
        return Err(SamplingError::OverlappingSets);
    }

    let project = |row: &[u32], axes: &[usize]| -> Vec<u32> {
        axes.iter().map(|&a| row[a]).collect()
    };
    let mut lhs_cats: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
    let mut rhs_cats: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
    for row in &s.rows {
        let next = lhs_cats.len();
        lhs_cats.entry(project(row, &lhs_axes)).or_insert(next);
        let next = rhs_cats.len();
        rhs_cats.entry(project(row, &rhs_axes)).or_insert(next);
    }
    let r = lhs_cats.len();
    let c = rhs_cats.len();
    if r < 2 {
        return Err(SamplingError::DegenerateTable {
            side: "lhs".to_string(),
            categories: r,
        });
    }
    if c < 2 {
        return Err(SamplingError::DegenerateTable {
            side: "rhs".to_string(),
            categories: c,
        });
    }

    let mut observed = vec![0u64; r * c];
    for row in &s.rows {
        let i = lhs_cats[&project(row, &lhs_axes)];
        let j = rhs_cats[&project(row, &rhs_axes)];
        observed[i * c + j] += 1;
    }
    let n = s.rows.len() as f64;
    let row_totals: Vec<f64> = (0..r)
        .map(|i| (0..c).map(|j| observed[i * c + j] as f64).sum())
        .collect();
    let col_totals: Vec<f64> = (0..c)
        .map(|j| (0..r).map(|i| observed[i * c + j] as f64).sum())
        .collect();

    let mut statistic = 0.0f64;
    let mut low_expected = 0usize;
    for i in 0..r {
        for j in 0..c {
            let expected = row_totals[i] * col_totals[j] / n;
            if expected < 5.0 {
                low_expected += 1;
            }
            let o = observed[i * c + j] as f64;
            if o > 0.0 {
                statistic += 2.0 * o * (o / expected).ln();
            }
        }
    }
    let statistic = statistic.max(0.0);
    let degrees_of_freedom = (r - 1) * (c - 1);
    // upper tail of chi-squared(df); gamma_ur needs a strictly positive x
    let p_value = if statistic > 0.0 {
        gamma_ur(degrees_of_freedom as f64 / 2.0, statistic / 2.0)
    } else {
        1.0
    };
    let mut warnings = Vec::new();
    if low_expected > 0 {
        warnings.push(format!(
            "{low_expected} of {} cells have expected count below 5; consider more samples",
            r * c
        ));
    }
    Ok(GTestResult {
        statistic,
        degrees_of_freedom,
        p_value,
        reject_at: alphas.iter().map(|&a| (a, p_value < a)).collect(),
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::Probability;

    fn uniform_bit(name: &str) -> Joint {
        Joint::from_entries(
            vec![VariableSpec::new(name, 2).unwrap()],
            vec![
                (vec![0], Probability::exact(1, 2)),
                (vec![1], Probability::exact(1, 2)),
            ],
        )
        .unwrap()
    }

    fn correlated_bits() -> Joint {
        Joint::from_entries(
            vec![
                VariableSpec::new("A", 2).unwrap(),
                VariableSpec::new("B", 2).unwrap(),
            ],
            vec![
                (vec![0, 0], Probability::exact(1, 2)),
                (vec![1, 1], Probability::exact(1, 2)),
            ],
        )
        .unwrap()
    }

    fn independent_bits() -> Joint {
        Joint::from_entries(
            vec![
                VariableSpec::new("A", 2).unwrap(),
                VariableSpec::new("B", 2).unwrap(),
            ],
            (0..4)
                .map(|i| (vec![i / 2, i % 2], Probability::exact(1, 4)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn point_mass_rows_are_constant() {
        let d = Joint::from_entries(
            vec![VariableSpec::new("A", 3).unwrap()],
            vec![(vec![2], Probability::exact(1, 1))],
        )
        .unwrap();
        let s = sample(&d, 50, 9);
        assert!(s.rows().iter().all(|row| row == &vec![2]));
    }

    #[test]
    fn same_seed_reproduces_byte_identical_output() {
        let d = correlated_bits();
        let a = sample(&d, 1000, 7);
        let b = sample(&d, 1000, 7);
        assert_eq!(a, b);
        assert_eq!(a.to_csv(), b.to_csv());
        let c = sample(&d, 1000, 8);
        assert_ne!(a.rows(), c.rows());
    }

    #[test]
    fn uniform_bit_frequency_concentrates() {
        let d = uniform_bit("A");
        let s = sample(&d, 100_000, 3);
        let zeros = s.rows().iter().filter(|r| r[0] == 0).count() as f64;
        let freq = zeros / s.n() as f64;
        assert!((freq - 0.5).abs() < 0.01, "freq = {freq}");
    }

    #[test]
    fn batch_boundaries_do_not_change_early_rows() {
        let d = uniform_bit("A");
        let small = sample(&d, 100, 42);
        let large = sample(&d, SAMPLE_BATCH + 100, 42);
        assert_eq!(small.rows(), &large.rows()[..100]);
    }

    #[test]
    fn empirical_distribution_examples() {
        let specs = vec![VariableSpec::new("A", 2).unwrap()];
        let all_zero = SampleSet {
            variables: vec!["A".to_string()],
            rows: vec![vec![0], vec![0]],
            seed: 0,
        };
        let d = empirical_distribution(&all_zero, &specs).unwrap();
        assert_eq!(d.prob(&[0]).unwrap(), &1.0);

        let half = SampleSet {
            variables: vec!["A".to_string()],
            rows: vec![vec![0], vec![0], vec![1], vec![1]],
            seed: 0,
        };
        let d = empirical_distribution(&half, &specs).unwrap();
        assert_eq!(d.prob(&[0]).unwrap(), &0.5);
        assert_eq!(d.prob(&[1]).unwrap(), &0.5);
    }

    #[test]
    fn empirical_distribution_rejects_mismatched_specs() {
        let s = SampleSet {
            variables: vec!["A".to_string()],
            rows: vec![vec![0]],
            seed: 0,
        };
        let wrong_name = vec![VariableSpec::new("B", 2).unwrap()];
        assert!(matches!(
            empirical_distribution(&s, &wrong_name),
            Err(SamplingError::SpecMismatch(_))
        ));
        let too_small = vec![VariableSpec::new("A", 1).unwrap()];
        let s2 = SampleSet {
            variables: vec!["A".to_string()],
            rows: vec![vec![1]],
            seed: 0,
        };
        assert!(matches!(
            empirical_distribution(&s2, &too_small),
            Err(SamplingError::SpecMismatch(_))
        ));
    }

    #[test]
    fn g_test_rejects_perfect_correlation() {
        let s = sample(&correlated_bits(), 100_000, 5);
        let r = g_test(&s, &["A"], &["B"], &[0.01]).unwrap();
        // G is about 2 n ln 2 for a perfectly correlated pair
        let expected = 2.0 * s.n() as f64 * 2.0f64.ln();
        assert!((r.statistic - expected).abs() / expected < 0.05);
        assert_eq!(r.degrees_of_freedom, 1);
        assert!(r.p_value < 1e-12);
        assert_eq!(r.reject_at, vec![(0.01, true)]);
    }

    #[test]
    fn g_test_accepts_independent_bits() {
        let s = sample(&independent_bits(), 100_000, 11);
        let r = g_test(&s, &["A"], &["B"], &[0.01]).unwrap();
        assert!(r.p_value > 0.01, "p = {}", r.p_value);
        assert_eq!(r.reject_at, vec![(0.01, false)]);
    }

    #[test]
    fn g_test_degenerate_side() {
        let d = Joint::from_entries(
            vec![
                VariableSpec::new("A", 1).unwrap(),
                VariableSpec::new("B", 2).unwrap(),
            ],
            vec![
                (vec![0, 0], Probability::exact(1, 2)),
                (vec![0, 1], Probability::exact(1, 2)),
            ],
        )
        .unwrap();
        let s = sample(&d, 100, 1);
        assert!(matches!(
            g_test(&s, &["A"], &["B"], &[0.05]),
            Err(SamplingError::DegenerateTable { .. })
        ));
    }

    #[test]
    fn g_test_error_paths() {
        let s = sample(&independent_bits(), 100, 1);
        assert!(matches!(
            g_test(&s, &["A"], &["A"], &[0.05]),
            Err(SamplingError::OverlappingSets)
        ));
        assert!(matches!(
            g_test(&s, &["A"], &["C"], &[0.05]),
            Err(SamplingError::UnknownVariable(_))
        ));
        assert!(matches!(
            g_test(&s, &[], &["A"], &[0.05]),
            Err(SamplingError::EmptyVariableSet)
        ));
    }

    #[test]
    fn low_expected_counts_warn() {
        let s = sample(&independent_bits(), 12, 2);
        let r = g_test(&s, &["A"], &["B"], &[0.05]).unwrap();
        assert!(!r.warnings.is_empty());
    }

    #[test]
    fn csv_round_trip() {
        let s = sample(&correlated_bits(), 25, 123);
        let text = s.to_csv();
        assert!(text.starts_with("# seed=123 n=25\nA,B\n"));
        let back = SampleSet::from_csv(&text).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn csv_parse_errors_carry_line_numbers() {
        let err = SampleSet::from_csv("# seed=1 n=2\nA,B\n0,1\n").unwrap_err();
        assert!(matches!(err, SamplingError::ParseError { .. }));
        let err = SampleSet::from_csv("A,B\n0\n").unwrap_err();
        match err {
            SamplingError::ParseError { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn empirical_deviation_shrinks_with_sample_size() {
        let d = correlated_bits();
        let specs = vec![
            VariableSpec::new("A", 2).unwrap(),
            VariableSpec::new("B", 2).unwrap(),
        ];
        let truth = [0.5, 0.0, 0.0, 0.5];
        let mean_max_dev = |n: usize| -> f64 {
            let mut total = 0.0;
            for seed in 0..20u64 {
                let emp = empirical_distribution(&sample(&d, n, seed), &specs).unwrap();
                let max_dev = emp
                    .outcomes()
                    .zip(truth)
                    .map(|((_, p), t)| (p - t).abs())
                    .fold(0.0f64, f64::max);
                total += max_dev;
            }
            total / 20.0
        };
        let coarse = mean_max_dev(1_000);
        let fine = mean_max_dev(100_000);
        assert!(
            fine < coarse,
            "mean max deviation should shrink: {coarse} -> {fine}"
        );
    }

    #[test]
    fn p_value_is_monotone_in_the_statistic() {
        // fixed df, growing G must shrink p
        let mut last = 1.0f64;
        for g in [0.1, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0] {
            let p = gamma_ur(0.5, g / 2.0);
            assert!(p < last, "p must decrease, got {p} after {last}");
            last = p;
        }
    }

    #[test]
    fn chi_squared_tail_sanity() {
        // df = 1: the 5% critical value is 3.841459
        let s = SampleSet {
            variables: vec!["A".to_string(), "B".to_string()],
            rows: vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]],
            seed: 0,
        };
        let r = g_test(&s, &["A"], &["B"], &[]).unwrap();
        assert_eq!(r.degrees_of_freedom, 1);
        // perfectly balanced table: G = 0, p = 1
        assert!(r.statistic.abs() < 1e-12);
        assert!((r.p_value - 1.0).abs() < 1e-12);
        // direct spot checks of the tail function used for p-values
        assert!((gamma_ur(0.5, 3.841459 / 2.0) - 0.05).abs() < 1e-4);
        assert!((gamma_ur(1.0, 1.0) - (-1.0f64).exp()).abs() < 1e-12);
    }
}
