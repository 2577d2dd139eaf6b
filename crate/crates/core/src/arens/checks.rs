//! Identity checks for the extensions. Each returns a [`Verdict`] carrying
//! the first counterexample found.

use num_traits::{Signed, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use super::dg::davie_gamelin_eval;
use super::extend::{arens_extend, Extension};
use super::grid::{dual_generators, generator_tuples, sign_templates};
use super::star::star_chain;
use crate::bidual::{embed_j, model_modulus, Bidual};
use crate::error::{Error, Result};
use crate::lattice::{Dual, EvConstSeq, FinSupSeq, Model, Primal, Riesz, Space, VecElem};
use crate::operator::{compose_hom, index_tuples, Idx, LatticeMap, Permutation, RegOperator};
use crate::rational::{self, Rational};
use crate::sample::{self, SampleRng};

pub fn rational_json(r: &Rational) -> Value {
    let (n, d) = rational::to_pair(r);
    json!([n, d])
}

fn bidual_json(x: &Bidual) -> Value {
    serde_json::to_value(x).expect("bidual serializes")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    pub args: Vec<Bidual>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub functional: Option<Dual>,
    pub lhs: Value,
    pub rhs: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub passed: bool,
    pub cases: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
}

impl Verdict {
    fn new() -> Verdict {
        Verdict { passed: true, cases: 0, counterexample: None }
    }

    /// Count a case; the first failure is kept.
    fn record(&mut self, failure: Option<Counterexample>) {
        self.cases += 1;
        if let Some(c) = failure {
            if self.passed {
                self.passed = false;
                self.counterexample = Some(c);
            }
        }
    }
}

pub fn random_tuples(
    domain: &[Space],
    count: usize,
    seed: u64,
    f: fn(&Space, &mut SampleRng) -> Bidual,
) -> Vec<Vec<Bidual>> {
    let mut rng = sample::rng(seed);
    (0..count).map(|_| domain.iter().map(|s| f(s, &mut rng)).collect()).collect()
}

/// Every combination of per-slot sign templates.
pub fn sign_tuples(domain: &[Space]) -> Vec<Vec<Bidual>> {
    let t: Vec<Vec<Bidual>> = domain.iter().map(sign_templates).collect();
    let dims: Vec<usize> = t.iter().map(Vec::len).collect();
    index_tuples(&dims)
        .into_iter()
        .map(|idx| idx.iter().zip(&t).map(|(&i, g)| g[i - 1].clone()).collect())
        .collect()
}

fn abs_args(args: &[Bidual]) -> Vec<Bidual> {
    args.iter().map(Riesz::abs).collect()
}

/// Compare two codomain bidual elements on the dual generators.
fn compare_on(duals: &[Dual], args: &[Bidual], lhs: &Bidual, rhs: &Bidual) -> Result<Option<Counterexample>> {
    for y in duals {
        let (l, r) = (lhs.apply(y)?, rhs.apply(y)?);
        if l != r {
            return Ok(Some(Counterexample {
                args: args.to_vec(),
                functional: Some(y.clone()),
                lhs: rational_json(&l),
                rhs: rational_json(&r),
            }));
        }
    }
    if lhs != rhs {
        return Ok(Some(Counterexample {
            args: args.to_vec(),
            functional: None,
            lhs: bidual_json(lhs),
            rhs: bidual_json(rhs),
        }));
    }
    Ok(None)
}

/// `|Ã(x'')| = Ã(|x''|)` in the codomain bidual model.
pub fn multimorphism_at(ext: &dyn Extension, args: &[Bidual]) -> Result<Option<Counterexample>> {
    let lhs = model_modulus(&ext.eval(args)?);
    let rhs = ext.eval(&abs_args(args))?;
    compare_on(&dual_generators(ext.base().codomain()), args, &lhs, &rhs)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtensionWitness {
    pub rho: Permutation,
    pub sigma: Permutation,
    pub args: Vec<Bidual>,
    pub functional: Dual,
    pub values: [Value; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareReport {
    pub perms: Vec<Permutation>,
    pub equal: Vec<Vec<bool>>,
    pub all_equal: bool,
    pub witnesses: Vec<ExtensionWitness>,
    pub tuples: usize,
    pub functionals: usize,
}

/// Pairwise comparison of `AR^ρ` over `perms` on the given tuples and
/// functionals.
pub fn compare_extensions(a: &RegOperator, perms: &[Permutation], tuples: &[Vec<Bidual>], duals: &[Dual]) -> Result<CompareReport> {
    let exts = perms.iter().map(|p| arens_extend(a, p)).collect::<Result<Vec<_>>>()?;
    let n = perms.len();
    let mut equal = vec![vec![true; n]; n];
    let mut witnesses = Vec::new();
    for args in tuples {
        for y in duals {
            let vals = exts.iter().map(|e| e.value(args, y)).collect::<Result<Vec<_>>>()?;
            for p in 0..n {
                for q in p + 1..n {
                    if equal[p][q] && vals[p] != vals[q] {
                        equal[p][q] = false;
                        equal[q][p] = false;
                        witnesses.push(ExtensionWitness {
                            rho: perms[p].clone(),
                            sigma: perms[q].clone(),
                            args: args.clone(),
                            functional: y.clone(),
                            values: [rational_json(&vals[p]), rational_json(&vals[q])],
                        });
                    }
                }
            }
        }
    }
    Ok(CompareReport {
        all_equal: witnesses.is_empty(),
        perms: perms.to_vec(),
        equal,
        witnesses,
        tuples: tuples.len(),
        functionals: duals.len(),
    })
}

pub const MAX_COMPARE_ARITY: usize = 4;

/// All `m!` extensions on the generator grid plus `samples` random tuples.
pub fn compare_all_extensions(a: &RegOperator, samples: usize, seed: u64) -> Result<CompareReport> {
    if a.arity() > MAX_COMPARE_ARITY {
        return Err(Error::Unsupported(format!("arity {} exceeds the m! budget", a.arity())));
    }
    let mut tuples = generator_tuples(a.domain());
    tuples.extend(random_tuples(a.domain(), samples, seed, sample::bidual));
    compare_extensions(a, &Permutation::all(a.arity()), &tuples, &dual_generators(a.codomain()))
}

/// Pointwise agreement of two extensions on tuples, against every dual
/// generator of the codomain.
pub fn agreement(lhs: &dyn Extension, rhs: &dyn Extension, tuples: &[Vec<Bidual>]) -> Result<Verdict> {
    let duals = dual_generators(lhs.base().codomain());
    let mut v = Verdict::new();
    for args in tuples {
        let mut failure = None;
        for y in &duals {
            let (l, r) = (lhs.value(args, y)?, rhs.value(args, y)?);
            if l != r {
                failure = Some(Counterexample {
                    args: args.clone(),
                    functional: Some(y.clone()),
                    lhs: rational_json(&l),
                    rhs: rational_json(&r),
                });
                break;
            }
        }
        v.record(failure);
    }
    Ok(v)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StarReport {
    /// Literal chain against `AR^θ`.
    pub theta: Verdict,
    /// Literal chain against the reversal `ρ(k) = m + 1 - k`.
    pub reversal: Verdict,
}

pub fn check_star_chain(a: &RegOperator, tuples: &[Vec<Bidual>]) -> Result<StarReport> {
    let m = a.arity();
    let chain = star_chain(a);
    let theta = arens_extend(a, &Permutation::theta(m))?;
    let reversal = arens_extend(a, &Permutation::reversal(m))?;
    let duals = dual_generators(a.codomain());
    let (mut vt, mut vr) = (Verdict::new(), Verdict::new());
    // The literal chain is the expensive side; evaluate it once per case.
    for args in tuples {
        let (mut ft, mut fr) = (None, None);
        for y in &duals {
            let c = chain.value(args, y)?;
            for (ext, failure) in [(&theta, &mut ft), (&reversal, &mut fr)] {
                if failure.is_none() {
                    let e = ext.value(args, y)?;
                    if e != c {
                        *failure = Some(Counterexample {
                            args: args.clone(),
                            functional: Some(y.clone()),
                            lhs: rational_json(&c),
                            rhs: rational_json(&e),
                        });
                    }
                }
            }
        }
        vt.record(ft);
        vr.record(fr);
    }
    Ok(StarReport { theta: vt, reversal: vr })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DgReport {
    pub agree: Verdict,
    /// Inputs outside the computable model, skipped.
    pub skipped: usize,
    pub max_stable_n: usize,
}

/// Davie–Gamelin limits against bar-lift composition.
pub fn check_dg_oracle(a: &RegOperator, perms: &[Permutation], tuples: &[Vec<Bidual>], cap: usize) -> Result<DgReport> {
    let mut agree = Verdict::new();
    let mut skipped = 0;
    let mut max_n = 0;
    for rho in perms {
        let ext = arens_extend(a, rho)?;
        for args in tuples {
            let want = match ext.eval(args) {
                Ok(v) => v,
                Err(Error::NotRepresentable(_)) => {
                    skipped += 1;
                    continue;
                }
                Err(e) => return Err(e),
            };
            match davie_gamelin_eval(a, rho, args, cap) {
                Ok(got) => {
                    max_n = max_n.max(got.max_stable_n);
                    let failure = (got.value != want).then(|| Counterexample {
                        args: args.clone(),
                        functional: None,
                        lhs: json!({"rho": rho, "davie_gamelin": got.value}),
                        rhs: json!({"bar_lift": want}),
                    });
                    agree.record(failure);
                }
                Err(Error::StabilizationFailure { detail, .. }) => agree.record(Some(Counterexample {
                    args: args.clone(),
                    functional: None,
                    lhs: json!({"rho": rho, "stabilization_failure": detail}),
                    rhs: json!({"bar_lift": want}),
                })),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(DgReport { agree, skipped, max_stable_n: max_n })
}

fn basis_inputs(space: &Space, threshold: usize) -> Vec<Primal> {
    match space.model() {
        Model::Fin(n) => (1..=n).map(|i| Primal::Vec(VecElem::unit(n, i))).collect(),
        Model::L1 => (1..=threshold + 2).map(|i| Primal::Finsup(FinSupSeq::unit(i))).collect(),
        Model::C => {
            let mut v: Vec<Primal> = (1..=threshold + 1).map(|i| Primal::Evconst(EvConstSeq::unit(i))).collect();
            v.push(Primal::Evconst(EvConstSeq::constant(rational::one())));
            v
        }
    }
}

/// `AR^ρ(A)(Jx_1..Jx_m) = J(A(x))` on basis tuples and random primal tuples.
pub fn check_extends(a: &RegOperator, rho: &Permutation, samples: usize, seed: u64) -> Result<Verdict> {
    let ext = arens_extend(a, rho)?;
    let bases: Vec<Vec<Primal>> = a.domain().iter().map(|s| basis_inputs(s, a.threshold())).collect();
    let dims: Vec<usize> = bases.iter().map(Vec::len).collect();
    let mut tuples: Vec<Vec<Primal>> = index_tuples(&dims)
        .into_iter()
        .map(|idx| idx.iter().zip(&bases).map(|(&i, b)| b[i - 1].clone()).collect())
        .collect();
    let mut rng = sample::rng(seed);
    tuples.extend((0..samples).map(|_| a.domain().iter().map(|s| sample::primal(s, &mut rng)).collect::<Vec<_>>()));
    let duals = dual_generators(a.codomain());
    let mut v = Verdict::new();
    for xs in tuples {
        let js: Vec<Bidual> = xs.iter().map(embed_j).collect();
        let lhs = ext.eval(&js)?;
        let rhs = embed_j(&a.evaluate(&xs)?);
        v.record(compare_on(&duals, &js, &lhs, &rhs)?);
    }
    Ok(v)
}

/// `A ≥ 0 ⇒ AR^ρ(A)(x'')(y') ≥ 0` for positive arguments and functionals.
/// Vacuous (zero cases) when `A` is not positive.
pub fn check_positive_transfer(a: &RegOperator, rho: &Permutation, samples: usize, seed: u64) -> Result<Verdict> {
    let mut v = Verdict::new();
    if !a.is_positive() {
        return Ok(v);
    }
    let ext = arens_extend(a, rho)?;
    let mut tuples: Vec<Vec<Bidual>> = generator_tuples(a.domain())
        .into_iter()
        .filter(|t| t.iter().all(Riesz::is_positive))
        .collect();
    tuples.extend(random_tuples(a.domain(), samples, seed, sample::positive_bidual));
    let duals = dual_generators(a.codomain());
    for args in tuples {
        let mut failure = None;
        for y in &duals {
            let val = ext.value(&args, y)?;
            if val.is_negative() {
                failure = Some(Counterexample {
                    args: args.clone(),
                    functional: Some(y.clone()),
                    lhs: rational_json(&val),
                    rhs: json!([0, 1]),
                });
                break;
            }
        }
        v.record(failure);
    }
    Ok(v)
}

/// A coordinate projection on the codomain, used when no map is given.
pub fn default_hom(codomain: &Space) -> Result<LatticeMap> {
    match codomain.model() {
        Model::Fin(k) => {
            let mut row = vec![rational::zero(); k];
            row[0] = rational::one();
            LatticeMap::matrix_between(
                crate::linalg::Matrix::from_rows(vec![row])?,
                codomain.clone(),
                Space::FinDim(1),
            )
        }
        Model::L1 => LatticeMap::coords(codomain.clone(), vec![Idx::At(1), Idx::At(2)]),
        Model::C => LatticeMap::coords(codomain.clone(), vec![Idx::Limit, Idx::At(1)]),
    }
}

/// `AR^ρ(u ∘ A) = u'' ∘ AR^ρ(A)`.
pub fn check_naturality(a: &RegOperator, rho: &Permutation, u: &LatticeMap, tuples: &[Vec<Bidual>]) -> Result<Verdict> {
    let lhs_ext = arens_extend(&compose_hom(u.clone(), a)?, rho)?;
    let ext = arens_extend(a, rho)?;
    let duals = dual_generators(&u.target());
    let mut v = Verdict::new();
    for args in tuples {
        let lhs = lhs_ext.eval(args)?;
        let rhs = u.bidual(&ext.eval(args)?)?;
        v.record(compare_on(&duals, args, &lhs, &rhs)?);
    }
    Ok(v)
}

/// `AR(x'') = Σ_ξ P(ξ) AR(x''^{ξ})` with `x^{+1} = x⁺`, `x^{-1} = x⁻` and
/// `P(ξ) = ξ_1 ⋯ ξ_m`.
pub fn check_sign_expansion(a: &RegOperator, rho: &Permutation, tuples: &[Vec<Bidual>]) -> Result<Verdict> {
    let ext = arens_extend(a, rho)?;
    let m = a.arity();
    let duals = dual_generators(a.codomain());
    let mut v = Verdict::new();
    for args in tuples {
        let lhs = ext.eval(args)?;
        let mut rhs = Bidual::zero_of(a.codomain());
        for bits in 0u32..(1 << m) {
            let mut sign = rational::one();
            let parts: Vec<Bidual> = args
                .iter()
                .enumerate()
                .map(|(r, x)| {
                    if bits >> r & 1 == 1 {
                        sign = -sign.clone();
                        x.neg_part()
                    } else {
                        x.pos_part()
                    }
                })
                .collect();
            rhs = rhs.add(&ext.eval(&parts)?.scale(&sign));
        }
        v.record(compare_on(&duals, args, &lhs, &rhs)?);
    }
    Ok(v)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropsReport {
    pub extends: Verdict,
    pub positive_transfer: Verdict,
    pub naturality: Verdict,
    pub sign_expansion: Verdict,
}

impl PropsReport {
    pub fn passed(&self) -> bool {
        self.extends.passed && self.positive_transfer.passed && self.naturality.passed && self.sign_expansion.passed
    }
}

pub fn verify_extension_props(
    a: &RegOperator,
    rho: &Permutation,
    u: Option<&LatticeMap>,
    samples: usize,
    seed: u64,
) -> Result<PropsReport> {
    let default;
    let u = match u {
        Some(u) => u,
        None => {
            default = default_hom(a.codomain())?;
            &default
        }
    };
    let mut tuples = generator_tuples(a.domain());
    tuples.extend(random_tuples(a.domain(), samples, seed, sample::bidual));
    let mut signed = sign_tuples(a.domain());
    signed.extend(random_tuples(a.domain(), samples, seed ^ 0x5157, sample::bidual));
    Ok(PropsReport {
        extends: check_extends(a, rho, samples, seed)?,
        positive_transfer: check_positive_transfer(a, rho, samples, seed)?,
        naturality: check_naturality(a, rho, u, &tuples)?,
        sign_expansion: check_sign_expansion(a, rho, &signed)?,
    })
}

/// Whether `y` is a nonnegative combination of Riesz-homomorphism
/// functionals: coordinate functionals, and the limit on the c-model.
pub fn is_hom_span(y: &Dual) -> bool {
    match y {
        Dual::Evconst(t) => y.is_positive() && t.tail().is_zero(),
        _ => y.is_positive(),
    }
}

/// `|Ã(x'')(y')| = Ã(|x''|)(y')` for a homomorphism `y'`.
pub fn check_hom_composite(a: &RegOperator, rho: &Permutation, y: &Dual, tuples: &[Vec<Bidual>]) -> Result<Verdict> {
    if !y.belongs_to(a.codomain()) {
        return Err(crate::error::mismatch("functional is not on the codomain"));
    }
    let ext = arens_extend(a, rho)?;
    let mut v = Verdict::new();
    for args in tuples {
        let lhs = ext.value(args, y)?.abs();
        let rhs = ext.value(&abs_args(args), y)?;
        v.record((lhs != rhs).then(|| Counterexample {
            args: args.clone(),
            functional: Some(y.clone()),
            lhs: rational_json(&lhs),
            rhs: rational_json(&rhs),
        }));
    }
    Ok(v)
}

/// `|AR(x'')|(y') = AR(|x''|)(y')` with the modulus taken in the codomain
/// bidual model.
pub fn check_modulus_identity(a: &RegOperator, rho: &Permutation, y: &Dual, tuples: &[Vec<Bidual>]) -> Result<Verdict> {
    if !is_hom_span(y) {
        return Err(crate::error::mismatch("functional is not a nonnegative combination of homomorphisms"));
    }
    let ext = arens_extend(a, rho)?;
    let mut v = Verdict::new();
    for args in tuples {
        let lhs = model_modulus(&ext.eval(args)?).apply(y)?;
        let rhs = ext.value(&abs_args(args), y)?;
        v.record((lhs != rhs).then(|| Counterexample {
            args: args.clone(),
            functional: Some(y.clone()),
            lhs: rational_json(&lhs),
            rhs: rational_json(&rhs),
        }));
    }
    Ok(v)
}

/// Multimorphism identity for the extension restricted to arguments with
/// zero singular part.
pub fn check_oc_restriction(a: &RegOperator, rho: &Permutation, samples: usize, seed: u64) -> Result<Verdict> {
    let ext = arens_extend(a, rho)?;
    let mut v = Verdict::new();
    for args in random_tuples(a.domain(), samples, seed, sample::oc_bidual) {
        v.record(multimorphism_at(&ext, &args)?);
    }
    Ok(v)
}

/// Multimorphism identity for every `AR^ρ` on the given tuples.
pub fn check_extension_multimorphism(a: &RegOperator, perms: &[Permutation], tuples: &[Vec<Bidual>]) -> Result<Verdict> {
    let mut v = Verdict::new();
    for rho in perms {
        let ext = arens_extend(a, rho)?;
        for args in tuples {
            v.record(multimorphism_at(&ext, args)?);
        }
    }
    Ok(v)
}
