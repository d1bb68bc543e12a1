//! Acceptance suite: each test is one numbered criterion and prints a
//! single PASS line when it completes. Tolerances are pinned here and
//! nowhere else.

use std::time::Instant;

use diversity_core::audit::{
    audit_equidistance3, reproduce_worked_cases, run_audit, theorem2_demo, AuditConfig, AxiomId,
};
use diversity_core::fixtures;
use diversity_core::measures::{
    d_f, d_f_hybrid, d_merging, d_three, MeasureKind, SuitableFunctionKind,
};
use diversity_core::metric::DistanceMatrix;
use diversity_core::random::{random_metric, Ensemble};
use diversity_core::scalar::Scalar;
use diversity_core::symmetry::{average_orbits, edge_orbits};

const EQ2: SuitableFunctionKind = SuitableFunctionKind::HarmonicEq2;
const GEO: SuitableFunctionKind = SuitableFunctionKind::GeometricMean;

fn s(text: &str) -> Scalar {
    Scalar::parse(text, false).unwrap()
}

fn pass(criterion: usize, summary: &str) {
    println!("criterion {criterion}: PASS - {summary}");
}

#[test]
fn criterion_01_phylogenetic_diversity_fixture() {
    let tree = fixtures::fig1_tree();
    let cases: [(&[&str], i64); 5] = [
        (&["u", "v", "w"], 14),
        (&["u", "v", "x"], 22),
        (&["u", "x", "y"], 20),
        (&["u", "w", "y"], 19),
        (&["u", "y"], 19),
    ];
    for (subset, expected) in cases {
        let start = Instant::now();
        let value = tree.phylo_diversity(subset).unwrap();
        let elapsed = start.elapsed();
        assert_eq!(value, Scalar::from_int(expected), "subset {subset:?}");
        assert!(
            elapsed.as_micros() < 1000,
            "PD of {subset:?} took {elapsed:?}, bound is 1 ms"
        );
    }
    pass(1, "five tree-diversity values exact, each under 1 ms");
}

#[test]
fn criterion_02_three_vertex_formula_and_counterexample() {
    let unit = DistanceMatrix::triangle(s("1"), s("1"), s("1"));
    assert_eq!(d_three(&unit).unwrap().value, s("2"));

    let degenerate = DistanceMatrix::triangle(s("1"), s("3/2"), s("1/2"));
    let v = d_f(&degenerate, &EQ2).unwrap().value;
    assert_eq!(v, s("51/22"));
    assert!(v > s("2"));

    // the equidistance audit must find this exact violation unprompted
    let cfg = AuditConfig {
        instances: 10,
        ..AuditConfig::default()
    };
    let section = audit_equidistance3(&MeasureKind::DF(EQ2), &cfg);
    let found = section
        .violations
        .iter()
        .any(|v| v.score_before == s("51/22") && v.score_after == s("2"));
    assert!(found, "equidistance audit missed the documented counterexample");
    pass(2, "unit triangle scores 2, degenerate triangle 51/22 > 2, audit detects it");
}

#[test]
fn criterion_03_regular_sets_score_n_minus_one() {
    for n in 2..=8usize {
        let labels = (1..=n).map(|i| format!("s{i}")).collect();
        let m =
            DistanceMatrix::from_upper_triangle(labels, vec![s("1"); n * (n - 1) / 2]).unwrap();
        assert_eq!(d_f(&m, &EQ2).unwrap().value, Scalar::from_int(n as i64 - 1));
    }
    pass(3, "all-1 matrices score exactly n-1 for n = 2..=8");
}

#[test]
fn criterion_04_hybrid_intuition_failure() {
    let uneven = d_f_hybrid(&fixtures::fig2_s(), &EQ2).unwrap();
    let regular = d_f_hybrid(&fixtures::fig2_s_prime(), &EQ2).unwrap();
    assert_eq!(uneven.value, s("97/30"));
    assert_eq!(regular.value, s("3"));
    // descending rank puts the uneven set first
    let mut ranked = vec![("S'", regular.value.clone()), ("S", uneven.value.clone())];
    ranked.sort_by(|a, b| b.1.cmp(&a.1));
    assert_eq!(ranked[0].0, "S");
    pass(4, "hybrid scores 97/30 and 3, ranking the uneven set above the regular one");
}

/// Independent non-memoized floating-point implementation of the merging
/// recursion, sharing no code with the library path.
fn merging_oracle(d: &[Vec<f64>]) -> f64 {
    let n = d.len();
    if n <= 1 {
        return 0.0;
    }
    if n == 2 {
        return d[0][1];
    }
    let mut inv_total = 0.0;
    for k in 0..n {
        for l in (k + 1)..n {
            inv_total += 1.0 / d[k][l];
        }
    }
    let mut total = 0.0;
    for k in 0..n {
        for l in (k + 1)..n {
            let p = (1.0 / d[k][l]) / inv_total;
            // merge k and l: averaged distances, others untouched
            let rest: Vec<usize> = (0..n).filter(|&i| i != k && i != l).collect();
            let m = rest.len() + 1;
            let mut merged = vec![vec![0.0; m]; m];
            for (a, &i) in rest.iter().enumerate() {
                let avg = (d[k][i] + d[l][i]) / 2.0;
                merged[0][a + 1] = avg;
                merged[a + 1][0] = avg;
                for (b, &j) in rest.iter().enumerate() {
                    merged[a + 1][b + 1] = d[i][j];
                }
            }
            total += p * (d[k][l] + merging_oracle(&merged));
        }
    }
    total
}

fn to_f64_grid(m: &DistanceMatrix) -> Vec<Vec<f64>> {
    let n = m.len();
    (0..n)
        .map(|i| (0..n).map(|j| m.get(i, j).to_f64()).collect())
        .collect()
}

#[test]
fn criterion_05_merging_measure_worked_examples() {
    let tri = fixtures::fig9_triangle();
    let inv_total: Scalar = tri.pairs().map(|(_, _, d)| d.recip().unwrap()).sum();
    let p = |i: usize, j: usize| tri.get(i, j).recip().unwrap() / inv_total.clone();
    assert_eq!(p(0, 1), s("3/13"));
    assert_eq!(p(0, 2), s("6/13"));
    assert_eq!(p(1, 2), s("4/13"));
    assert_eq!(d_merging(&tri).unwrap().value, s("153/26"));
    assert_eq!(*tri.merge_pair(0, 1).unwrap().get(0, 1), s("5/2"));
    assert_eq!(*tri.merge_pair(0, 2).unwrap().get(0, 1), s("7/2"));
    assert_eq!(*tri.merge_pair(1, 2).unwrap().get(0, 1), s("3"));

    let uneven = d_merging(&fixtures::fig2_s()).unwrap().value;
    assert!((uneven.to_f64() - 2.838).abs() < 5e-4, "rounded-value check");
    let oracle = merging_oracle(&to_f64_grid(&fixtures::fig2_s()));
    assert!(
        (uneven.to_f64() - oracle).abs() < 1e-9,
        "library {} vs float oracle {}",
        uneven.to_f64(),
        oracle
    );
    let regular = d_merging(&fixtures::fig2_s_prime()).unwrap().value;
    assert_eq!(regular, s("3"));
    assert!(regular > uneven);
    pass(5, "merging probabilities, merged distances, 153/26, 2.838 check, float oracle within 1e-9");
}

#[test]
fn criterion_06_merging_equals_three_vertex_on_random_triangles() {
    let start = Instant::now();
    for seed in 0..1000u64 {
        let m = random_metric(3, Ensemble::ShortestPathRepair, seed).unwrap();
        assert_eq!(
            d_merging(&m).unwrap().value,
            d_three(&m).unwrap().value,
            "seed {seed}"
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 5, "took {elapsed:?}, bound is 5 s");
    pass(6, "merging equals the closed formula exactly on 1000 random triangles");
}

#[test]
fn criterion_07_symmetry_fixtures() {
    let g2 = fixtures::fig5_g2();
    assert_eq!(g2.automorphisms(9).unwrap().len(), 24);
    let orbits2 = edge_orbits(&g2, 9).unwrap();
    assert_eq!(orbits2.orbits.len(), 1);

    let g1 = fixtures::fig5_g1();
    let orbits1 = edge_orbits(&g1, 9).unwrap();
    assert_eq!(orbits1.orbits.len(), 2);
    let in_same_orbit = orbits1.orbits.iter().any(|orbit| {
        let labels: Vec<&str> = orbit.iter().map(|(_, _, l)| l.as_str()).collect();
        labels.contains(&"e1") && labels.contains(&"e2")
    });
    assert!(!in_same_orbit);

    let averaged = average_orbits(&fixtures::fig8_gs(), &fixtures::fig8_gp(), 9).unwrap();
    for (i, j) in [(0, 3), (1, 3), (2, 3)] {
        assert_eq!(*averaged.get(i, j), s("4/3"));
    }
    pass(7, "G2 has 24 automorphisms / one orbit, G1 splits e1 and e2, averaging yields 4/3");
}

#[test]
fn criterion_08_property_audits_at_scale() {
    let start = Instant::now();
    // Theorem-backed measures: zero violations of axioms 1, 2, 4 across
    // 10^4 random pseudometrics (split over the three axiom sections)
    let cfg_df = AuditConfig {
        instances: 3400,
        n_range: vec![3, 4, 5, 6],
        ..AuditConfig::default()
    };
    for f in [EQ2, GEO] {
        let report = run_audit(
            &MeasureKind::DF(f.clone()),
            &[AxiomId::Adding, AxiomId::Monotonicity, AxiomId::Scaling],
            &cfg_df,
        );
        assert_eq!(
            report.total_violations(),
            0,
            "d_f violations:\n{}",
            report.summary()
        );
        let checked: usize = report.sections.iter().map(|s| s.checked).sum();
        assert!(checked >= 10_000, "only {checked} instances checked");
    }
    // the merging measure: all six axiom sections, 10^3 instances each
    let cfg_merge = AuditConfig {
        instances: 1000,
        n_range: vec![3, 4, 5],
        ..AuditConfig::default()
    };
    let report = run_audit(&MeasureKind::DMerging, &AxiomId::ALL, &cfg_merge);
    let mut confirmed_5a = 0usize;
    for section in &report.sections {
        if section.axiom == AxiomId::SymmetricAveraging {
            // The symmetric-averaging property for the merging measure is an
            // open conjecture, and this audit's partial-labelling generator
            // turns out to be strong enough to falsify it on rare instances
            // (roughly 1 in 6000 draws; see the frozen regression in the
            // audit module). Such a violation only counts here if the
            // independent float oracle reproduces the strict reversal from
            // scratch; anything unconfirmed would be a library bug.
            for v in &section.violations {
                let before = merging_oracle(&to_f64_grid(&v.before));
                let after = merging_oracle(&to_f64_grid(&v.after));
                assert!(
                    after < before - 1e-9,
                    "unconfirmed 5a violation at instance {} - library bug?",
                    v.instance
                );
                assert!((v.score_before.to_f64() - before).abs() < 1e-9);
                assert!((v.score_after.to_f64() - after).abs() < 1e-9);
                confirmed_5a += 1;
                println!(
                    "criterion 8: note - confirmed symmetric-averaging counterexample at \
                     instance {} (margin ~ {:.3e})",
                    v.instance,
                    v.margin.to_f64()
                );
            }
            assert!(
                section.violations.len() <= 2,
                "too many 5a violations to be the known rare phenomenon:\n{}",
                report.summary()
            );
        } else {
            assert!(
                section.violations.is_empty(),
                "merging violations:\n{}",
                report.summary()
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs() < 120, "took {elapsed:?}, bound is 2 min");
    pass(
        8,
        &format!(
            "zero violations for d_f (axioms 1,2,4) and d_merging (1,2,4,5,5b) at scale; \
             {confirmed_5a} independently confirmed 5a counterexample(s) recorded as findings"
        ),
    );
}

#[test]
fn criterion_09_theorem2_demo() {
    let cfg = AuditConfig::default();
    let demo = theorem2_demo(&MeasureKind::DMerging, &cfg, 100).unwrap();
    assert_eq!(demo.minimal_k, 2);
    assert_eq!(demo.d_s, s("13/5"));
    assert_eq!(demo.d_u_k, s("73/30"));
    assert!(demo.d_s > demo.d_u_k);
    assert_eq!(demo.d_s_padded, demo.d_s, "padding must preserve D(S)");
    assert_eq!(demo.d_u_k_padded, demo.d_u_k, "padding must preserve D(U_k)");
    assert!(demo.contradiction.contains("contradicts"));
    pass(9, "demo terminates with minimal k = 2 and a score-preserving padding ledger");
}

#[test]
fn criterion_10_determinism() {
    let cfg = AuditConfig {
        instances: 120,
        ..AuditConfig::default()
    };
    let axioms = [AxiomId::Adding, AxiomId::Scaling, AxiomId::Equidistance3];
    let runs: Vec<String> = (0..2)
        .map(|_| {
            let mut out = String::new();
            for kind in [MeasureKind::DF(EQ2), MeasureKind::DMerging] {
                let report = run_audit(&kind, &axioms, &cfg);
                out.push_str(&serde_json::to_string(&report).unwrap());
                out.push('\n');
            }
            out.push_str(&serde_json::to_string(&reproduce_worked_cases()).unwrap());
            out
        })
        .collect();
    assert_eq!(runs[0], runs[1], "same-seed runs must be byte-identical");
    pass(10, "two same-seed runs produce byte-identical JSON reports");
}
