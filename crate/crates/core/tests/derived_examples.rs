//! Brute-force cross-checks of table-level values for the built-in
//! scenarios: marginals, conditionals, and independence facts are
//! recomputed here by direct summation over the full tables, independent
//! of the library's own marginalization path.

use freechoice::order::bell_order;
use freechoice::prob::{Joint, Probability};
use freechoice::scenario::{pr_box, single_measurement};
use freechoice::BigRational;
use num::Zero;

/// Sum the table directly over every tuple matching a partial assignment.
fn brute_mass(d: &Joint, assignment: &[(&str, u32)]) -> Probability {
    let names = d.variable_names();
    let axes: Vec<usize> = assignment
        .iter()
        .map(|(n, _)| names.iter().position(|v| v == n).unwrap())
        .collect();
    match d {
        Joint::Exact(d) => {
            let mut total = BigRational::zero();
            for (tuple, p) in d.outcomes() {
                if axes
                    .iter()
                    .zip(assignment)
                    .all(|(&a, (_, val))| tuple[a] == *val)
                {
                    total += p.clone();
                }
            }
            Probability::Exact(total)
        }
        Joint::Approx(d) => {
            let mut total = 0.0;
            for (tuple, p) in d.outcomes() {
                if axes
                    .iter()
                    .zip(assignment)
                    .all(|(&a, (_, val))| tuple[a] == *val)
                {
                    total += p;
                }
            }
            Probability::Approx(total)
        }
    }
}

#[test]
fn pr_box_marginal_over_b_y_is_uniform() {
    let d = pr_box(false).dist().clone();
    let m = d.marginalize(&["B", "Y"]).unwrap();
    for b in 0..2 {
        for y in 0..2 {
            assert_eq!(m.prob(&[b, y]).unwrap(), Probability::exact(1, 4));
            // and the brute-force sum over the 16-entry table agrees
            assert_eq!(
                brute_mass(&d, &[("B", b), ("Y", y)]),
                Probability::exact(1, 4)
            );
        }
    }
}

#[test]
fn pr_box_conditional_on_b1_y0_correlates_a_and_x() {
    let d = pr_box(false).dist().clone();
    let c = d.condition(&[("B", 1), ("Y", 0)]).unwrap();
    assert_eq!(c.variable_names(), vec!["A", "X"]);
    assert_eq!(c.prob(&[0, 0]).unwrap(), Probability::exact(1, 2));
    assert_eq!(c.prob(&[1, 1]).unwrap(), Probability::exact(1, 2));
    assert_eq!(c.prob(&[0, 1]).unwrap(), Probability::exact(0, 1));
    assert_eq!(c.prob(&[1, 0]).unwrap(), Probability::exact(0, 1));
}

#[test]
fn pr_box_setting_factorizes_from_remote_wing() {
    let d = pr_box(false).dist().clone();
    assert!(d.is_independent(&["A"], &["B", "Y"]).unwrap());
    let gap = d.max_factorization_deviation(&["A"], &["B", "Y"]).unwrap();
    assert_eq!(gap.deviation, Probability::exact(0, 1));
    // all 8 factorization equations, brute force
    for a in 0..2 {
        for b in 0..2 {
            for y in 0..2 {
                let joint = brute_mass(&d, &[("A", a), ("B", b), ("Y", y)]);
                let pa = brute_mass(&d, &[("A", a)]).to_f64();
                let pby = brute_mass(&d, &[("B", b), ("Y", y)]).to_f64();
                assert_eq!(joint.to_f64(), pa * pby);
            }
        }
    }
}

#[test]
fn single_measurement_brute_force_masks() {
    let d = single_measurement().dist().clone();
    // A is uniform and pairwise independent of X
    for a in 0..2 {
        for x in 0..2 {
            let joint = brute_mass(&d, &[("A", a), ("X", x)]);
            assert_eq!(joint, Probability::exact(1, 4));
        }
    }
    // but (Z, X) pins A down completely
    let joint = brute_mass(&d, &[("A", 0), ("Z", 0), ("X", 0)]);
    assert_eq!(joint, Probability::exact(1, 4));
    let product = Probability::exact(1, 8); // P(A=0) * P(Z=0, X=0)
    assert_ne!(joint, product);
    assert!(!d.is_independent(&["A"], &["Z", "X"]).unwrap());
}

/// One transitivity sweep; repeated to a fixed point it is the closure.
fn one_step(pairs: &mut Vec<(String, String)>) -> bool {
    let mut changed = false;
    let snapshot = pairs.clone();
    for (a, b) in &snapshot {
        for (c, d) in &snapshot {
            if b == c && !pairs.contains(&(a.clone(), d.clone())) {
                pairs.push((a.clone(), d.clone()));
                changed = true;
            }
        }
    }
    changed
}

#[test]
fn bell_order_agrees_with_fixed_point_closure() {
    let o = bell_order();
    let labels = o.labels().to_vec();
    let mut pairs: Vec<(String, String)> = vec![
        ("Z".into(), "X".into()),
        ("Z".into(), "Y".into()),
        ("A".into(), "X".into()),
        ("B".into(), "Y".into()),
    ];
    for l in &labels {
        pairs.push((l.clone(), l.clone()));
    }
    while one_step(&mut pairs) {}
    for a in &labels {
        for b in &labels {
            assert_eq!(
                o.precedes(a, b).unwrap(),
                pairs.contains(&(a.clone(), b.clone())),
                "{a} -> {b}"
            );
        }
    }
    assert_eq!(o.non_future("Z").unwrap(), vec!["A", "B"]);
    assert!(o.mutually_unordered("X", "Y").unwrap());
}
