//! Listing of space kinds, operator kinds and check kinds.

use std::fmt::Write as _;

use arens_core::operator::OperatorRegistry;
use serde_json::{json, Value};

use crate::checks::CheckRegistry;
use crate::report::VERSION;

pub const SPACE_KINDS: &[(&str, &str)] = &[
    ("fin_dim", "R^n with the coordinatewise order; field `n`"),
    ("seq_l1", "finitely supported sequences; dual: eventually constant sequences"),
    ("seq_c", "eventually constant sequences; dual: limit functional plus an ℓ_1 part"),
    ("direct_sum", "finite direct sum of R^{n_k}; fields `mode` (p | zero), `p`, `components`"),
];

fn entries(items: impl Iterator<Item = (&'static str, &'static str)>) -> Value {
    Value::Array(items.map(|(k, s)| json!({"kind": k, "summary": s})).collect())
}

pub fn catalog_json(ops: &OperatorRegistry, checks: &CheckRegistry) -> Value {
    json!({
        "workbench": VERSION,
        "spaces": entries(SPACE_KINDS.iter().copied()),
        "operators": entries(ops.kinds()),
        "checks": entries(checks.kinds()),
        "demos": entries(crate::demo::DEMOS.iter().copied()),
    })
}

pub fn catalog_text(ops: &OperatorRegistry, checks: &CheckRegistry) -> String {
    let mut out = format!("workbench {VERSION}\n");
    let mut section = |title: &str, items: Vec<(&str, &str)>| {
        let _ = writeln!(out, "\n{title}:");
        for (k, s) in items {
            let _ = writeln!(out, "  {k:<24} {s}");
        }
    };
    section("space kinds", SPACE_KINDS.to_vec());
    section("operator kinds", ops.kinds().collect());
    section("check kinds", checks.kinds().collect());
    section("demos", crate::demo::DEMOS.to_vec());
    out
}
