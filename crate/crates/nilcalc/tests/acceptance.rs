//! Acceptance criteria 1–12.
//!
//! The symbolic checks run on every catalog group, the numeric ones on
//! heisenberg:1 through `verify_all`, which also produces the timing rows of
//! criterion 12. One PASS/FAIL line is printed per criterion, followed by the
//! individual rows. Run with `cargo test --test acceptance -- --nocapture`.

use std::collections::BTreeMap;

use nilcalc::verify::{self, CriterionResult, NumericConfig};
use nilcalc_core::{catalog, GradedGroup};

const SEED: u64 = 2024;

fn group(name: &str) -> GradedGroup {
    GradedGroup::new(catalog::lookup(name).unwrap().unwrap()).unwrap()
}

fn criterion_number(row: &CriterionResult) -> u32 {
    row.criterion.split('.').next().and_then(|s| s.parse().ok()).unwrap()
}

/// Total of the per-group runtime rows named `name`.
fn summed_runtime(rows: &[CriterionResult], name: &str, limit: f64) -> CriterionResult {
    let total = rows.iter().filter(|r| r.criterion == name).map(|r| r.value).sum();
    CriterionResult::below(&format!("{name}.all-groups"), "catalog", total, limit)
}

#[test]
fn acceptance() {
    let mut rows = Vec::new();
    for name in ["abelian:3", "heisenberg:2", "engel"] {
        rows.extend(verify::symbolic_suite(&group(name), SEED).unwrap());
    }
    let cfg = NumericConfig { seed: SEED, refine: true, ..NumericConfig::default() };
    rows.extend(verify::verify_all(&group("heisenberg:1"), &cfg).unwrap());

    rows.push(summed_runtime(&rows, "2.duality.runtime-s", 30.0));
    rows.push(summed_runtime(&rows, "5.composition.runtime-s", 60.0));

    let mut by_criterion: BTreeMap<u32, Vec<&CriterionResult>> = BTreeMap::new();
    for r in &rows {
        by_criterion.entry(criterion_number(r)).or_default().push(r);
    }
    println!();
    for (k, rs) in &by_criterion {
        let pass = rs.iter().all(|r| r.pass);
        println!("criterion {k:>2}: {} ({} checks)", if pass { "PASS" } else { "FAIL" }, rs.len());
    }
    println!();
    for r in &rows {
        println!(
            "  {} {:<13} {:<38} {:>12.4e} vs {:>10.3e}{}",
            if r.pass { "ok  " } else { "FAIL" },
            r.group,
            r.criterion,
            r.value,
            r.threshold,
            if r.detail.is_empty() { String::new() } else { format!("  [{}]", r.detail) }
        );
    }

    assert_eq!(by_criterion.keys().copied().collect::<Vec<_>>(), (1..=12).collect::<Vec<_>>());
    let failed: Vec<_> = rows.iter().filter(|r| !r.pass).map(|r| format!("{} {}", r.group, r.criterion)).collect();
    assert!(failed.is_empty(), "failed: {failed:?}");
}
