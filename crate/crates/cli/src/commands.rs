//! Command implementations, kept free of filesystem and process concerns
//! so they can be exercised directly from tests. The binary wires them
//! to files, stdout and exit codes.

use std::collections::BTreeMap;
use std::fmt;

use freechoice::sampling::{g_test, sample, GTestResult, SampleSet};
use freechoice::scalar::Scalar as _;
use freechoice::scenario::{
    correlated_settings, local_hidden_variable, pr_box, single_measurement, singlet,
};
use freechoice::{BigRational, Scenario};
use serde_json::json;

use crate::diag::Diagnostic;
use crate::parser::{parse_scenario, ScenarioFile};
use crate::report;

/// All command errors exit with code 2; 1 is reserved for
/// `--fail-on-not-free` verdicts.
#[derive(Debug)]
pub enum CliError {
    Parse(Vec<Diagnostic>),
    Msg(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(diags) => {
                for (i, d) in diags.iter().enumerate() {
                    if i > 0 {
                        writeln!(f)?;
                    }
                    write!(f, "error: {d}")?;
                }
                Ok(())
            }
            CliError::Msg(m) => write!(f, "error: {m}"),
        }
    }
}

#[derive(Debug)]
pub struct CommandOutput {
    pub text: String,
    pub not_free_found: bool,
}

fn load(text: &str) -> Result<ScenarioFile, CliError> {
    parse_scenario(text).map_err(CliError::Parse)
}

fn load_scenario(text: &str) -> Result<Scenario, CliError> {
    load(text)?.into_scenario().map_err(CliError::Msg)
}

fn mode_name(s: &Scenario) -> &'static str {
    if s.dist().is_exact() {
        "exact"
    } else {
        "approx"
    }
}

fn audit_output(s: &Scenario, past_only: bool, json: bool) -> Result<CommandOutput, CliError> {
    let paper = s.audit().map_err(|e| CliError::Msg(e.to_string()))?;
    let variant = if past_only {
        Some(
            s.audit_past_only()
                .map_err(|e| CliError::Msg(e.to_string()))?,
        )
    } else {
        None
    };
    let not_free_found = paper.iter().any(|v| !v.free);
    let text = if json {
        report::verdicts_json(&paper, variant.as_deref())
    } else {
        report::audit_table(s.name(), mode_name(s), &paper, variant.as_deref())
    };
    Ok(CommandOutput {
        text,
        not_free_found,
    })
}

/// Audit every variable of a scenario file.
pub fn cmd_audit(text: &str, past_only: bool, json: bool) -> Result<CommandOutput, CliError> {
    let scenario = load_scenario(text)?;
    audit_output(&scenario, past_only, json)
}

/// Print the causal order derived from a spacetime block: the closed
/// non-reflexive relation plus the mutually unordered pairs.
pub fn cmd_derive_order(text: &str, json: bool) -> Result<CommandOutput, CliError> {
    let file = load(text)?;
    if file.embedding.is_none() {
        return Err(CliError::Msg(
            "scenario has no spacetime block; nothing to derive".to_string(),
        ));
    }
    let edges = file.order.pairs();
    let unordered = file.order.unordered_pairs();
    let text = if json {
        let value = json!({
            "edges": edges,
            "unordered": unordered,
        });
        format!("{}\n", serde_json::to_string_pretty(&value).expect("serializes"))
    } else {
        let mut out = String::from("order:\n");
        if edges.is_empty() {
            out.push_str("  (none)\n");
        }
        for (a, b) in &edges {
            out.push_str(&format!("  {a} -> {b}\n"));
        }
        out.push_str("mutually unordered:\n");
        if unordered.is_empty() {
            out.push_str("  (none)\n");
        }
        for (a, b) in &unordered {
            out.push_str(&format!("  ({a}, {b})\n"));
        }
        out
    };
    Ok(CommandOutput {
        text,
        not_free_found: false,
    })
}

/// Draw samples; returns the sample-file contents plus a summary line.
pub fn cmd_sample(
    text: &str,
    n: usize,
    seed: u64,
    out_path: &str,
    json: bool,
) -> Result<(String, CommandOutput), CliError> {
    if n == 0 {
        return Err(CliError::Msg("need at least one sample".to_string()));
    }
    let scenario = load_scenario(text)?;
    let set = sample(scenario.dist(), n, seed);
    let csv = set.to_csv();
    let summary = if json {
        format!(
            "{}\n",
            serde_json::to_string_pretty(&json!({
                "n": n,
                "seed": seed,
                "out": out_path,
            }))
            .expect("serializes")
        )
    } else {
        format!("wrote {n} samples (seed {seed}) to {out_path}\n")
    };
    Ok((
        csv,
        CommandOutput {
            text: summary,
            not_free_found: false,
        },
    ))
}

fn gtest_report(r: &GTestResult, json: bool) -> String {
    if json {
        let reject: BTreeMap<String, bool> = r
            .reject_at
            .iter()
            .map(|(alpha, reject)| (format!("{alpha}"), *reject))
            .collect();
        let value = json!({
            "statistic": r.statistic,
            "degrees_of_freedom": r.degrees_of_freedom,
            "p_value": r.p_value,
            "reject_at": reject,
            "warnings": r.warnings,
        });
        format!("{}\n", serde_json::to_string_pretty(&value).expect("serializes"))
    } else {
        let mut out = format!(
            "G = {:.6}\ndf = {}\np-value = {:.6e}\n",
            r.statistic, r.degrees_of_freedom, r.p_value
        );
        for (alpha, reject) in &r.reject_at {
            out.push_str(&format!(
                "alpha {alpha}: {}\n",
                if *reject {
                    "reject independence"
                } else {
                    "no rejection"
                }
            ));
        }
        for w in &r.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        out
    }
}

/// G-test of lhs vs rhs on a sample file.
pub fn cmd_gtest(
    data: &str,
    lhs: &[String],
    rhs: &[String],
    alphas: &[f64],
    json: bool,
) -> Result<CommandOutput, CliError> {
    let set = SampleSet::from_csv(data).map_err(|e| CliError::Msg(e.to_string()))?;
    let alphas = if alphas.is_empty() {
        vec![0.05, 0.01]
    } else {
        alphas.to_vec()
    };
    let lhs_refs: Vec<&str> = lhs.iter().map(String::as_str).collect();
    let rhs_refs: Vec<&str> = rhs.iter().map(String::as_str).collect();
    let result = g_test(&set, &lhs_refs, &rhs_refs, &alphas)
        .map_err(|e| CliError::Msg(e.to_string()))?;
    Ok(CommandOutput {
        text: gtest_report(&result, json),
        not_free_found: false,
    })
}

/// The hidden-variable demo model: a uniform hidden bit copied to both
/// outcomes, ignoring the settings.
fn lhv_demo() -> Scenario {
    let copy = vec![vec![0u8, 1], vec![0, 1]];
    let probs = vec![
        BigRational::from_ratio(1, 2),
        BigRational::from_ratio(1, 2),
    ];
    local_hidden_variable(2, &copy, &copy, &probs).expect("demo model is valid")
}

fn counterexample_text(s: &Scenario) -> Result<String, CliError> {
    let mut out = format!("scenario \"{}\"\n\n", s.name());
    out.push_str(
        "The two settings copy one shared uniform bit, so P(A=B=0) = P(A=B=1) = 1/2,\n\
         while each setting is independent of the earlier state Z. The two readings\n\
         of freeness disagree here. Checking a setting only against its causal past\n\
         {Z} finds nothing: the settings are independent of Z. Checking it against\n\
         everything it cannot influence catches the correlation with the other wing.\n\n",
    );
    for subject in ["A", "B"] {
        let paper = s
            .is_free(subject)
            .map_err(|e| CliError::Msg(e.to_string()))?;
        let past = s
            .is_free_past_only(subject)
            .map_err(|e| CliError::Msg(e.to_string()))?;
        let witness = paper
            .witness
            .as_ref()
            .map(|w| format!(", deviation {}", w.deviation))
            .unwrap_or_default();
        out.push_str(&format!(
            "  {}: {} {} (reference {}{})\n",
            paper.criterion,
            subject,
            if paper.free { "free" } else { "not free" },
            report::reference_text(&paper.reference_set),
            witness,
        ));
        out.push_str(&format!(
            "  {}: {} {} (reference {})\n",
            past.criterion,
            subject,
            if past.free { "free" } else { "not free" },
            report::reference_text(&past.reference_set),
        ));
    }
    Ok(out)
}

/// Run one of the built-in demos by name.
pub fn cmd_demo(name: &str, json: bool) -> Result<CommandOutput, CliError> {
    use std::f64::consts::PI;
    let scenario = match name {
        "single" => single_measurement(),
        "counterexample" => correlated_settings(),
        "prbox" => pr_box(true),
        "singlet" => singlet([0.0, PI / 2.0], [PI / 4.0, 3.0 * PI / 4.0]),
        "lhv" => lhv_demo(),
        other => {
            return Err(CliError::Msg(format!(
                "unknown demo `{other}` (expected single, counterexample, prbox, singlet, lhv)"
            )))
        }
    };
    if name == "counterexample" {
        let not_free_found = scenario
            .audit()
            .map_err(|e| CliError::Msg(e.to_string()))?
            .iter()
            .any(|v| !v.free);
        if json {
            let mut output = audit_output(&scenario, true, true)?;
            output.not_free_found = not_free_found;
            Ok(output)
        } else {
            Ok(CommandOutput {
                text: counterexample_text(&scenario)?,
                not_free_found,
            })
        }
    } else {
        audit_output(&scenario, false, json)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::export::export_scenario;

    #[test]
    fn audit_reports_not_free_settings() {
        let text = export_scenario(&correlated_settings());
        let out = cmd_audit(&text, false, false).unwrap();
        assert!(out.not_free_found);
        assert!(out.text.contains("correlated_settings"));
        assert!(out.text.contains("deviation 1/4"));
    }

    #[test]
    fn audit_with_variant_column() {
        let text = export_scenario(&correlated_settings());
        let out = cmd_audit(&text, true, false).unwrap();
        assert!(out.text.contains("past-only"));

        // in JSON the variant arrives as extra verdict objects
        let out = cmd_audit(&text, true, true).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&out.text).unwrap();
        let arr = parsed.as_array().unwrap();
        assert_eq!(arr.len(), 10);
        let variant_a = arr
            .iter()
            .find(|v| v["subject"] == "A" && v["criterion"] == "PastOnlyVariant")
            .unwrap();
        assert_eq!(variant_a["free"], true);
        let paper_a = arr
            .iter()
            .find(|v| v["subject"] == "A" && v["criterion"] == "PaperDefinition")
            .unwrap();
        assert_eq!(paper_a["free"], false);
    }

    #[test]
    fn audit_without_dist_is_an_error() {
        let text = "scenario \"x\"\nvar A { alphabet: 2 }\norder { A -> A }\n";
        let err = cmd_audit(text, false, false).unwrap_err();
        assert!(matches!(err, CliError::Msg(m) if m.contains("no dist block")));
    }

    #[test]
    fn derive_order_requires_spacetime() {
        let text = export_scenario(&correlated_settings());
        let err = cmd_derive_order(&text, false).unwrap_err();
        assert!(matches!(err, CliError::Msg(m) if m.contains("no spacetime block")));
    }

    #[test]
    fn derive_order_lists_edges_and_unordered_pairs() {
        let text = r#"
scenario "layout"
var A { alphabet: 2 }
var B { alphabet: 2 }
var Z { alphabet: 2 }
var X { alphabet: 2 }
var Y { alphabet: 2 }
spacetime {
  A: (0, -1);
  B: (0, 1);
  Z: (-2, 0);
  X: (1, -1);
  Y: (1, 1);
}
"#;
        let out = cmd_derive_order(text, false).unwrap();
        for needle in ["Z -> A", "Z -> B", "A -> X", "B -> Y", "(A, B)", "(X, Y)"] {
            assert!(out.text.contains(needle), "missing {needle} in:\n{}", out.text);
        }
    }

    #[test]
    fn sample_then_gtest_round_trip() {
        let text = export_scenario(&correlated_settings());
        let (csv, summary) = cmd_sample(&text, 2000, 9, "out.csv", false).unwrap();
        assert!(summary.text.contains("2000"));
        let out = cmd_gtest(
            &csv,
            &["A".to_string()],
            &["B".to_string()],
            &[0.01],
            false,
        )
        .unwrap();
        assert!(out.text.contains("reject independence"));
    }

    #[test]
    fn demo_counterexample_shows_both_criteria() {
        let out = cmd_demo("counterexample", false).unwrap();
        assert!(out.text.contains("PaperDefinition: A not free"));
        assert!(out.text.contains("PastOnlyVariant: A free"));
        assert!(out.text.contains("PaperDefinition: B not free"));
        assert!(out.text.contains("PastOnlyVariant: B free"));
        assert!(out.text.contains("{Z, B, Y}"));
        assert!(out.not_free_found);
    }

    #[test]
    fn unknown_demo_is_rejected() {
        let err = cmd_demo("nosuch", false).unwrap_err();
        assert!(matches!(err, CliError::Msg(m) if m.contains("unknown demo `nosuch`")));
    }

    #[test]
    fn prbox_demo_settings_are_free() {
        let out = cmd_demo("prbox", true).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&out.text).unwrap();
        for subject in ["A", "B", "Z"] {
            let v = parsed
                .as_array()
                .unwrap()
                .iter()
                .find(|v| v["subject"] == subject)
                .unwrap();
            assert_eq!(v["free"], true, "{subject}");
        }
    }
}
