//! Scenario-to-text export. Exported text parses back to an equal
//! scenario: rationals are written `n/d`, floats with Rust's shortest
//! round-trip formatting, zero entries are omitted, and the causal order
//! is written as the full closed pair list (re-closing it is a no-op).

use std::fmt::Write as _;

use freechoice::prob::Probability;
use freechoice::Scenario;
use num::Zero;

pub fn export_scenario(s: &Scenario) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "scenario \"{}\"", escape(s.name()));
    for v in s.dist().variables() {
        let _ = writeln!(out, "var {} {{ alphabet: {} }}", v.name(), v.cardinality());
    }
    if let Some(events) = s.embedding() {
        let points: Vec<String> = events
            .iter()
            .map(|e| {
                let mut coords = vec![fmt_num(e.t())];
                coords.extend(e.spatial().iter().map(|&c| fmt_num(c)));
                format!("{}: ({})", e.label(), coords.join(", "))
            })
            .collect();
        let _ = writeln!(out, "spacetime {{ {} }}", points.join("; "));
    } else {
        let pairs = s.order().pairs();
        let edges: Vec<String> = if pairs.is_empty() {
            // the grammar wants at least one edge; a self-loop is a no-op
            let first = &s.order().labels()[0];
            vec![format!("{first} -> {first}")]
        } else {
            pairs
                .iter()
                .map(|(a, b)| format!("{a} -> {b}"))
                .collect()
        };
        let _ = writeln!(out, "order {{ {} }}", edges.join("; "));
    }
    let _ = writeln!(out, "dist {{");
    let names = s.dist().variable_names();
    for (tuple, p) in s.dist().probabilities() {
        let zero = match &p {
            Probability::Exact(r) => r.is_zero(),
            Probability::Approx(v) => *v == 0.0,
        };
        if zero {
            continue;
        }
        let assigns: Vec<String> = names
            .iter()
            .zip(&tuple)
            .map(|(n, v)| format!("{n}={v}"))
            .collect();
        let value = match &p {
            Probability::Exact(r) => format!("{}/{}", r.numer(), r.denom()),
            Probability::Approx(v) => fmt_num(*v),
        };
        let _ = writeln!(out, "  ({}): {}", assigns.join(", "), value);
    }
    let _ = writeln!(out, "}}");
    out
}

/// Shortest round-trip float, forced to look like a float so the lexer
/// does not read whole numbers back as integers.
fn fmt_num(v: f64) -> String {
    let s = format!("{v}");
    if s.contains('.') || s.contains('e') || s.contains('E') {
        s
    } else {
        format!("{s}.0")
    }
}

fn escape(name: &str) -> String {
    name.replace('\\', "\\\\").replace('"', "\\\"")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_scenario;
    use freechoice::scenario::{correlated_settings, pr_box, single_measurement, singlet};

    #[test]
    fn builtin_exports_parse_back_equal() {
        for scenario in [
            single_measurement(),
            correlated_settings(),
            pr_box(false),
            pr_box(true),
        ] {
            let text = export_scenario(&scenario);
            let parsed = parse_scenario(&text)
                .unwrap_or_else(|e| panic!("{}: {e:?}", scenario.name()))
                .into_scenario()
                .unwrap();
            assert_eq!(parsed, scenario, "{} round trip", scenario.name());
        }
    }

    #[test]
    fn float_tables_round_trip_bit_exactly() {
        use std::f64::consts::PI;
        let s = singlet([0.0, PI / 2.0], [PI / 4.0, 3.0 * PI / 4.0]);
        let text = export_scenario(&s);
        let parsed = parse_scenario(&text).unwrap().into_scenario().unwrap();
        assert_eq!(parsed, s);
    }

    #[test]
    fn whole_floats_are_written_with_a_point() {
        assert_eq!(fmt_num(1.0), "1.0");
        assert_eq!(fmt_num(0.25), "0.25");
        assert_eq!(fmt_num(-2.0), "-2.0");
        assert_eq!(fmt_num(1e-17), "0.00000000000000001");
    }
}
