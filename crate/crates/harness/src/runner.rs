//! Executes the checks of a scenario, optionally in parallel.

use std::time::Instant;

use arens_core::sample::derive_seed;
use arens_core::Error;
use rayon::prelude::*;
use serde_json::Value;

use crate::checks::{CheckInput, CheckRegistry};
use crate::report::{CheckResult, Report, Status};
use crate::scenario::{CheckSpec, Expect, Scenario};

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    /// Worker threads; `None` uses the rayon default.
    pub jobs: Option<usize>,
    /// Record wall-clock times. Off by default so reports stay byte-stable.
    pub timing: bool,
}

fn run_one(reg: &CheckRegistry, spec: &CheckSpec, seed: u64, samples: usize, timing: bool) -> CheckResult {
    let seed = spec.seed.unwrap_or_else(|| derive_seed(seed, spec.index as u64));
    let samples = spec.samples.unwrap_or(samples);
    let check = reg.get(&spec.check).expect("check kinds are validated at load");
    log::info!("check #{} {} starting (seed {seed})", spec.index, spec.check);
    let start = Instant::now();
    let outcome = check.run(&CheckInput { spec, seed, samples });
    let elapsed = start.elapsed();
    log::info!("check #{} {} finished in {:?}", spec.index, spec.check, elapsed);

    let (status, details, witness, error) = match outcome {
        Ok(o) => (
            if o.passed { Status::Pass } else { Status::Fail },
            o.details,
            o.witness,
            None,
        ),
        Err(Error::NotRepresentable(loc)) => (Status::NotRepresentable, Value::Null, None, Some(loc)),
        Err(e @ Error::InvariantViolation(_)) => (Status::InvariantViolation, Value::Null, None, Some(e.to_string())),
        Err(e @ Error::Parse(_)) => (Status::ParseError, Value::Null, None, Some(e.to_string())),
        Err(e) => (Status::Error, Value::Null, None, Some(e.to_string())),
    };
    let ok = matches!(
        (spec.expect, status),
        (Expect::Pass, Status::Pass) | (Expect::Fail, Status::Fail) | (Expect::NotRepresentable, Status::NotRepresentable)
    );
    CheckResult {
        index: spec.index,
        check: spec.check.clone(),
        label: spec.label.clone(),
        operator: spec.operator.as_ref().map(|(n, _)| n.clone()),
        expect: spec.expect,
        status,
        ok,
        seed,
        samples,
        details,
        witness,
        error,
        elapsed_ms: timing.then(|| elapsed.as_millis() as u64),
    }
}

pub fn run_scenario(s: &Scenario, reg: &CheckRegistry, opts: &RunOptions) -> Report {
    let seed = opts.seed.unwrap_or(s.seed);
    let samples = opts.samples.unwrap_or(s.samples);
    let start = Instant::now();
    let work = || -> Vec<CheckResult> {
        s.checks
            .par_iter()
            .map(|spec| run_one(reg, spec, seed, samples, opts.timing))
            .collect()
    };
    let mut results = match opts.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(work),
        None => work(),
    };
    results.sort_by_key(|r| r.index);
    Report::new(&s.name, seed, samples, results, opts.timing.then(|| start.elapsed().as_millis() as u64))
}
