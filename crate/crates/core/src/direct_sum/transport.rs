use serde::Serialize;
use serde_json::json;

use super::maps::{band_project, block_projection, to_blocks};
use super::DirectSumSpace;
use crate::arens::{
    arens_extend, compare_all_extensions, generator_tuples, random_tuples, CompareReport, Counterexample, Extension,
    Verdict,
};
use crate::bidual::{model_modulus, Bidual};
use crate::error::{mismatch, Result};
use crate::lattice::{Riesz, Space};
use crate::operator::{compose_hom, is_multimorphism, LatticeMap, MultiVerdict, Permutation, RegOperator};
use crate::sample;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransportReport {
    pub components: usize,
    /// `ψ(AR(A)(x'')) = (AR(π_n ∘ A)(x''))_n`.
    pub blockwise: Verdict,
    /// `ψ(|AR(A)(x'')|) = (AR(π_n ∘ A)(|x''|))_n`.
    pub modulus: Verdict,
}

impl TransportReport {
    pub fn passed(&self) -> bool {
        self.blockwise.passed && self.modulus.passed
    }
}

fn sum_space(a: &RegOperator) -> Result<DirectSumSpace> {
    match a.codomain() {
        Space::DirectSum(s) => Ok(s.clone()),
        other => Err(mismatch(format!("transport needs an operator into a direct sum, not {other}"))),
    }
}

pub fn transport_check(a: &RegOperator, rho: &Permutation, samples: usize, seed: u64) -> Result<TransportReport> {
    let space = sum_space(a)?;
    let k = space.components.len();
    let ext = arens_extend(a, rho)?;
    let parts = (1..=k)
        .map(|n| arens_extend(&compose_hom(block_projection(&space, n)?, a)?, rho))
        .collect::<Result<Vec<_>>>()?;
    let mut tuples = generator_tuples(a.domain());
    tuples.extend(random_tuples(a.domain(), samples, seed, sample::bidual));
    let mut blockwise = Verdict { passed: true, cases: 0, counterexample: None };
    let mut modulus = blockwise.clone();
    for args in &tuples {
        let abs: Vec<Bidual> = args.iter().map(Riesz::abs).collect();
        let value = ext.eval(args)?;
        let lhs = to_blocks(&space, &value)?;
        let lhs_abs = to_blocks(&space, &model_modulus(&value))?;
        let mut fail_b = None;
        let mut fail_m = None;
        for (n, part) in parts.iter().enumerate() {
            let block = Bidual::Vec(lhs.block(&space, n + 1));
            let want = part.eval(args)?;
            if fail_b.is_none() && block != want {
                fail_b = Some(Counterexample {
                    args: args.clone(),
                    functional: None,
                    lhs: json!({"component": n + 1, "transported": block}),
                    rhs: json!({"component_extension": want}),
                });
            }
            let block_abs = Bidual::Vec(lhs_abs.block(&space, n + 1));
            let want_abs = part.eval(&abs)?;
            if fail_m.is_none() && block_abs != want_abs {
                fail_m = Some(Counterexample {
                    args: args.clone(),
                    functional: None,
                    lhs: json!({"component": n + 1, "transported_modulus": block_abs}),
                    rhs: json!({"component_extension_of_moduli": want_abs}),
                });
            }
        }
        record(&mut blockwise, fail_b);
        record(&mut modulus, fail_m);
    }
    Ok(TransportReport { components: k, blockwise, modulus })
}

fn record(v: &mut Verdict, failure: Option<Counterexample>) {
    v.cases += 1;
    if let Some(c) = failure {
        if v.passed {
            v.passed = false;
            v.counterexample = Some(c);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BandReport {
    pub idempotent: bool,
    pub positive: bool,
    pub hom: bool,
    pub source_multimorphism: bool,
    /// Multimorphism verdict of `π ∘ A`; must hold when `A` is one.
    pub projected_multimorphism: bool,
    /// Extensions of `π ∘ A`.
    pub extensions: CompareReport,
}

impl BandReport {
    pub fn passed(&self) -> bool {
        self.idempotent
            && self.positive
            && self.hom
            && (!self.source_multimorphism || (self.projected_multimorphism && self.extensions.all_equal))
    }
}

pub fn check_band_projection(a: &RegOperator, band: &[usize], samples: usize, seed: u64) -> Result<BandReport> {
    let p: LatticeMap = band_project(a.codomain(), band)?;
    let LatticeMap::Matrix(m) = &p else { unreachable!("band projections are matrices") };
    let idempotent = m.entries.mul(&m.entries)? == m.entries;
    let pa = compose_hom(p.clone(), a)?;
    let source = is_multimorphism(a, samples, seed)?;
    let projected = is_multimorphism(&pa, samples, seed)?;
    Ok(BandReport {
        idempotent,
        positive: p.is_positive(),
        hom: p.is_hom(),
        source_multimorphism: matches!(source, MultiVerdict::Yes { .. }),
        projected_multimorphism: matches!(projected, MultiVerdict::Yes { .. }),
        extensions: compare_all_extensions(&pa, samples, seed)?,
    })
}
