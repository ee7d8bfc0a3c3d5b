//! Named verification checks with a machine-readable report.

use anyhow::Result;
use serde::Serialize;
use serde_json::{json, Value};
use sylow_d4_core::characters::char_family_counts;
use sylow_d4_core::classes::family_counts;
use sylow_d4_core::group::GraphAuto;
use sylow_d4_core::oracle::{certify_characters, certify_classes, class_function_check};
use sylow_d4_core::table::{CharTable, OrthMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    /// Square table, class equation, sum of squared degrees, family sizes.
    Counts,
    Orthogonality,
    /// Brute-force classes and induced characters; q <= 3 only.
    Oracle,
    /// Values are preserved by the triality automorphism.
    Equivariance,
    /// Every cell has a closed formula.
    Coverage,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    Full,
    Sampled,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub check: Check,
    pub passed: bool,
    pub detail: Value,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub p: u32,
    pub a: u32,
    pub q: u64,
    pub rows: usize,
    pub cols: usize,
    pub checks: Vec<CheckResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn run(t: &CharTable, checks: &[Check], mode: Mode, pairs: usize, seed: u64) -> Result<Report> {
    let f = &t.field;
    let q = t.q();
    let mut out = Vec::new();
    for &check in checks {
        let (passed, detail) = match check {
            Check::Counts => {
                let c = t.counts();
                let bad: Vec<String> = family_counts(&t.classes, q)
                    .into_iter()
                    .chain(char_family_counts(&t.chars, q))
                    .filter(|(_, got, want)| got != want)
                    .map(|(name, got, want)| format!("{name}: {got} != {want}"))
                    .collect();
                (
                    c.ok() && bad.is_empty(),
                    json!({
                        "rows": c.rows,
                        "cols": c.cols,
                        "order": c.order.to_string(),
                        "class_size_sum": c.class_size_sum.to_string(),
                        "degree_square_sum": c.degree_square_sum.to_string(),
                        "family_count_mismatches": bad,
                    }),
                )
            }
            Check::Orthogonality => {
                let m = match mode {
                    Mode::Full => OrthMode::Full,
                    Mode::Sampled => OrthMode::Sampled { pairs, seed },
                };
                let r = t.orthogonality(m)?;
                (
                    r.ok(),
                    json!({
                        "mode": if m == OrthMode::Full { "full" } else { "sampled" },
                        "row_pairs": r.row_pairs,
                        "col_pairs": r.col_pairs,
                        "failures": r.failures,
                    }),
                )
            }
            Check::Oracle => {
                let classes = certify_classes(f, &t.classes)?;
                let chars = certify_characters(f, &t.classes, &t.chars)?;
                let (compared, class_fn) = class_function_check(f, &t.classes, &t.chars, 2, seed);
                (
                    classes.is_empty()
                        && chars.mismatch_count == 0
                        && chars.reducible.is_empty()
                        && class_fn.is_empty(),
                    json!({
                        "class_problems": classes,
                        "cells": chars.cells,
                        "constructions_checked": chars.inducings_checked,
                        "mismatches": chars.mismatch_count,
                        "first_mismatches": chars.mismatches,
                        "reducible": chars.reducible,
                        "conjugate_comparisons": compared,
                        "class_function_failures": class_fn,
                    }),
                )
            }
            Check::Equivariance => {
                let r = t.equivariance(&GraphAuto::tau())?;
                (
                    r.failures.is_empty() && (f.p() == 2 || r.compared > 0),
                    json!({
                        "compared": r.compared,
                        "skipped_rows": r.skipped_rows,
                        "skipped_cols": r.skipped_cols,
                        "failures": r.failures,
                    }),
                )
            }
            Check::Coverage => match t.evaluate_all() {
                Ok(n) => (true, json!({ "cells": n })),
                Err(e) => (false, json!({ "error": e.to_string() })),
            },
        };
        out.push(CheckResult { check, passed, detail });
    }
    Ok(Report { p: f.p(), a: f.a(), q: q as u64, rows: t.rows(), cols: t.cols(), checks: out })
}
