//! Scenario files: named spaces, named operators and a list of checks.

use std::path::Path;

use arens_core::operator::{Context, OperatorRegistry, RegOperator};
use arens_core::{Error, Result};
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::checks::CheckRegistry;

pub const DEFAULT_SAMPLES: usize = 64;

/// What a check is expected to report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expect {
    #[default]
    Pass,
    Fail,
    NotRepresentable,
}

#[derive(Debug, Clone)]
pub struct CheckSpec {
    pub index: usize,
    pub check: String,
    pub label: Option<String>,
    /// Name under which the operator is reported, and the operator itself.
    pub operator: Option<(String, RegOperator)>,
    pub expect: Expect,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    /// The full check object; checks read their own parameters from it.
    pub params: Value,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub name: String,
    pub seed: u64,
    pub samples: usize,
    pub ctx: Context,
    pub checks: Vec<CheckSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    #[serde(default)]
    name: Option<String>,
    #[serde(default)]
    description: Option<String>,
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    samples: Option<usize>,
    #[serde(default)]
    spaces: Option<Value>,
    #[serde(default)]
    operators: Option<Value>,
    checks: Vec<Value>,
}

fn parse_err(at: &str, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("{at}: {msg}"))
}

/// Named entries given either as an object keyed by name or as a list of
/// objects carrying a `name` field. List order is kept.
fn named_entries(v: &Value, what: &str) -> Result<Vec<(String, Value)>> {
    match v {
        Value::Object(m) => Ok(m.iter().map(|(k, v)| (k.clone(), v.clone())).collect()),
        Value::Array(items) => items
            .iter()
            .enumerate()
            .map(|(i, item)| {
                let at = format!("{what}[{i}]");
                let mut obj: Map<String, Value> = item
                    .as_object()
                    .cloned()
                    .ok_or_else(|| parse_err(&at, "expected an object"))?;
                let name = obj
                    .remove("name")
                    .and_then(|n| n.as_str().map(str::to_owned))
                    .ok_or_else(|| parse_err(&at, "missing string field `name`"))?;
                Ok((name, Value::Object(obj)))
            })
            .collect(),
        _ => Err(parse_err(what, "expected an object or a list")),
    }
}

fn optional<T: for<'de> Deserialize<'de>>(obj: &Value, key: &str, at: &str) -> Result<Option<T>> {
    match obj.get(key) {
        None | Some(Value::Null) => Ok(None),
        Some(v) => serde_json::from_value(v.clone())
            .map(Some)
            .map_err(|e| parse_err(at, format!("field `{key}`: {e}"))),
    }
}

impl Scenario {
    pub fn load(path: &Path, checks: &CheckRegistry, ops: &OperatorRegistry) -> Result<Scenario> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
        let fallback = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "scenario".into());
        Scenario::parse(&text, &fallback, checks, ops)
    }

    pub fn parse(text: &str, fallback_name: &str, checks: &CheckRegistry, ops: &OperatorRegistry) -> Result<Scenario> {
        let raw: RawScenario = serde_json::from_str(text).map_err(|e| Error::Parse(format!("scenario: {e}")))?;
        let _ = raw.description;
        let mut ctx = Context::default();

        if let Some(spaces) = &raw.spaces {
            for (name, spec) in named_entries(spaces, "spaces")? {
                let s = ctx.space(&spec).map_err(|e| parse_err(&format!("spaces.{name}"), e))?;
                ctx.spaces.insert(name, s);
            }
        }

        if let Some(operators) = &raw.operators {
            // Entries may refer to each other; resolve until no progress.
            let mut pending = named_entries(operators, "operators")?;
            while !pending.is_empty() {
                let before = pending.len();
                let mut last = None;
                pending.retain(|(name, spec)| match ops.build(spec, &ctx) {
                    Ok(op) => {
                        ctx.operators.insert(name.clone(), op);
                        false
                    }
                    Err(e) => {
                        last = Some(parse_err(&format!("operators.{name}"), e));
                        true
                    }
                });
                if pending.len() == before {
                    return Err(last.expect("a pending operator failed"));
                }
            }
        }

        let mut specs = Vec::with_capacity(raw.checks.len());
        for (index, c) in raw.checks.iter().enumerate() {
            let at = format!("checks[{index}]");
            if !c.is_object() {
                return Err(parse_err(&at, "expected an object"));
            }
            let check: String = optional(c, "check", &at)?.ok_or_else(|| parse_err(&at, "missing field `check`"))?;
            if checks.get(&check).is_none() {
                return Err(parse_err(&at, format!("unknown check `{check}`")));
            }
            let operator = match c.get("operator") {
                None => None,
                Some(v) => {
                    let op = ops.resolve(v, &ctx).map_err(|e| parse_err(&at, e))?;
                    let name = match v {
                        Value::String(s) => s.clone(),
                        _ => format!("{}#{index}", op.kind()),
                    };
                    Some((name, op))
                }
            };
            specs.push(CheckSpec {
                index,
                check,
                label: optional(c, "label", &at)?,
                operator,
                expect: optional(c, "expect", &at)?.unwrap_or_default(),
                seed: optional(c, "seed", &at)?,
                samples: optional(c, "samples", &at)?,
                params: c.clone(),
            });
        }

        Ok(Scenario {
            name: raw.name.unwrap_or_else(|| fallback_name.to_owned()),
            seed: raw.seed,
            samples: raw.samples.unwrap_or(DEFAULT_SAMPLES),
            ctx,
            checks: specs,
        })
    }
}
