//! Text tables and structured JSON for audit verdicts.
//!
//! The JSON schema is stable: an array of verdict objects with fields
//! `subject`, `free`, `criterion`, `reference_set`, `witness`, where
//! `witness` is null or an object with `subject_assignment`,
//! `reference_assignment`, `lhs`, `rhs`, `deviation`.

use std::collections::BTreeMap;

use freechoice::freedom::{FreedomVerdict, Witness};
use serde::Serialize;

#[derive(Serialize)]
pub struct WitnessJson {
    pub subject_assignment: BTreeMap<String, u32>,
    pub reference_assignment: BTreeMap<String, u32>,
    pub lhs: f64,
    pub rhs: f64,
    pub deviation: f64,
}

#[derive(Serialize)]
pub struct VerdictJson {
    pub subject: String,
    pub free: bool,
    pub criterion: String,
    pub reference_set: Vec<String>,
    pub witness: Option<WitnessJson>,
}

impl From<&FreedomVerdict> for VerdictJson {
    fn from(v: &FreedomVerdict) -> Self {
        VerdictJson {
            subject: v.subject.clone(),
            free: v.free,
            criterion: v.criterion.to_string(),
            reference_set: v.reference_set.clone(),
            witness: v.witness.as_ref().map(|w| WitnessJson {
                subject_assignment: BTreeMap::from([(
                    w.subject_assignment.0.clone(),
                    w.subject_assignment.1,
                )]),
                reference_assignment: w
                    .reference_assignment
                    .iter()
                    .map(|(n, val)| (n.clone(), *val))
                    .collect(),
                lhs: w.lhs.to_f64(),
                rhs: w.rhs.to_f64(),
                deviation: w.deviation.to_f64(),
            }),
        }
    }
}

/// Pretty-printed JSON array of verdicts (paper verdicts first, then any
/// past-only variant verdicts, each tagged by its `criterion` field).
pub fn verdicts_json(paper: &[FreedomVerdict], variant: Option<&[FreedomVerdict]>) -> String {
    let mut rows: Vec<VerdictJson> = paper.iter().map(VerdictJson::from).collect();
    if let Some(variant) = variant {
        rows.extend(variant.iter().map(VerdictJson::from));
    }
    let mut s = serde_json::to_string_pretty(&rows).expect("verdicts serialize");
    s.push('\n');
    s
}

pub fn reference_text(reference: &[String]) -> String {
    if reference.is_empty() {
        "(empty)".to_string()
    } else {
        format!("{{{}}}", reference.join(", "))
    }
}

pub fn witness_text(w: &Witness) -> String {
    let subject = format!("{}={}", w.subject_assignment.0, w.subject_assignment.1);
    let refs: Vec<String> = w
        .reference_assignment
        .iter()
        .map(|(n, v)| format!("{n}={v}"))
        .collect();
    let refs = refs.join(", ");
    format!(
        "P({subject}, {refs}) = {} vs P({subject})P({refs}) = {} (deviation {})",
        w.lhs, w.rhs, w.deviation
    )
}

/// Fixed-width text table of verdicts; `variant` adds a past-only column.
pub fn audit_table(
    scenario_name: &str,
    mode: &str,
    paper: &[FreedomVerdict],
    variant: Option<&[FreedomVerdict]>,
) -> String {
    let mut header = vec!["subject".to_string(), "free".to_string()];
    if variant.is_some() {
        header.push("past-only".to_string());
    }
    header.push("reference".to_string());
    header.push("witness".to_string());

    let mut rows: Vec<Vec<String>> = vec![header];
    for (i, v) in paper.iter().enumerate() {
        let mut row = vec![
            v.subject.clone(),
            if v.free { "yes" } else { "no" }.to_string(),
        ];
        if let Some(variant) = variant {
            row.push(if variant[i].free { "yes" } else { "no" }.to_string());
        }
        row.push(reference_text(&v.reference_set));
        let witness = match (&v.witness, v.reference_set.is_empty()) {
            (Some(w), _) => witness_text(w),
            // nothing lies outside this variable's future, so independence
            // from the (empty) reference set holds vacuously
            (None, true) => "vacuously free".to_string(),
            (None, false) => "-".to_string(),
        };
        row.push(witness);
        rows.push(row);
    }

    let cols = rows[0].len();
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0))
        .collect();
    let mut out = format!("scenario \"{scenario_name}\" ({mode})\n");
    for row in rows {
        let line: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(c, cell)| format!("{cell:<width$}", width = widths[c]))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use freechoice::scenario::correlated_settings;

    #[test]
    fn table_and_json_render() {
        let s = correlated_settings();
        let paper = s.audit().unwrap();
        let variant = s.audit_past_only().unwrap();
        let table = audit_table(s.name(), "exact", &paper, Some(&variant));
        assert!(table.contains("subject"));
        assert!(table.contains("past-only"));
        assert!(table.contains("{Z, B, Y}"));
        let json = verdicts_json(&paper, None);
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        let arr = parsed.as_array().unwrap();
        assert_eq!(arr.len(), 5);
        let a = arr.iter().find(|v| v["subject"] == "A").unwrap();
        assert_eq!(a["free"], false);
        assert_eq!(a["criterion"], "PaperDefinition");
        assert_eq!(a["witness"]["deviation"], 0.25);
    }
}
