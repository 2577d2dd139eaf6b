//! Check kinds, looked up by the `check` field of a check spec.

use std::collections::BTreeMap;

use arens_core::arens::{
    arens_extend, check_dg_oracle, check_extension_multimorphism, check_hom_composite, check_modulus_identity,
    check_oc_restriction, check_star_chain, compare_all_extensions, compare_extensions, davie_gamelin_eval,
    dual_generators, generator_tuples, hom_functionals, random_tuples, sign_tuples,
    verify_extension_props, Extension, Verdict, DEFAULT_CAP,
};
use arens_core::bidual::Bidual;
use arens_core::direct_sum::{check_band_projection, transport_check};
use arens_core::lattice::{Dual, Primal, Riesz, VecElem};
use arens_core::operator::{
    finite_rank_reduce, index_tuples, is_multimorphism, kusraev_factor, tensor_of_factors, LatticeMap, MultiVerdict,
    OperatorRepr, Permutation, RegOperator,
};
use arens_core::rational;
use arens_core::sample;
use arens_core::{Error, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use crate::scenario::CheckSpec;

/// Everything a check needs from its spec once the run parameters are fixed.
pub struct CheckInput<'a> {
    pub spec: &'a CheckSpec,
    pub seed: u64,
    pub samples: usize,
}

impl CheckInput<'_> {
    pub fn operator(&self) -> Result<&RegOperator> {
        self.spec
            .operator
            .as_ref()
            .map(|(_, op)| op)
            .ok_or_else(|| self.bad("missing field `operator`"))
    }

    fn bad(&self, msg: impl std::fmt::Display) -> Error {
        Error::Parse(format!("checks[{}]: {msg}", self.spec.index))
    }

    pub fn param<T: DeserializeOwned>(&self, key: &str) -> Result<Option<T>> {
        match self.spec.params.get(key) {
            None | Some(Value::Null) => Ok(None),
            Some(v) => serde_json::from_value(v.clone())
                .map(Some)
                .map_err(|e| self.bad(format!("field `{key}`: {e}"))),
        }
    }

    /// Permutations named by the `rho` field; `all` when absent.
    pub fn perms(&self, m: usize) -> Result<Vec<Permutation>> {
        match self.spec.params.get("rho") {
            None => Ok(Permutation::all(m)),
            Some(v) => parse_perms(v, m).map_err(|e| self.bad(format!("field `rho`: {e}"))),
        }
    }

    /// Explicit `args` tuples, or the generator grid plus seeded random
    /// tuples. `"grid": false` leaves out the grid.
    pub fn tuples(&self, a: &RegOperator) -> Result<Vec<Vec<Bidual>>> {
        if let Some(t) = self.param::<Vec<Vec<Bidual>>>("args")? {
            return Ok(t);
        }
        let mut t = if self.param::<bool>("grid")?.unwrap_or(true) {
            generator_tuples(a.domain())
        } else {
            Vec::new()
        };
        t.extend(random_tuples(a.domain(), self.samples, self.seed, sample::bidual));
        Ok(t)
    }
}

pub fn parse_perms(v: &Value, m: usize) -> std::result::Result<Vec<Permutation>, String> {
    let named = |s: &str| match s {
        "all" => Ok(Permutation::all(m)),
        "identity" | "id" => Ok(vec![Permutation::identity(m)]),
        "theta" => Ok(vec![Permutation::theta(m)]),
        "reversal" => Ok(vec![Permutation::reversal(m)]),
        other => Err(format!("unknown permutation name `{other}`")),
    };
    let one = |v: &Value| -> std::result::Result<Permutation, String> {
        if let Some(s) = v.as_str() {
            return named(s).map(|mut p| p.remove(0));
        }
        let p: Permutation = serde_json::from_value(v.clone()).map_err(|e| e.to_string())?;
        if p.arity() != m {
            return Err(format!("permutation {p} has arity {} but the operator has arity {m}", p.arity()));
        }
        Ok(p)
    };
    match v {
        Value::String(s) => named(s),
        Value::Array(items) if items.iter().all(Value::is_u64) => Ok(vec![one(v)?]),
        Value::Array(items) => items.iter().map(one).collect(),
        _ => Err("expected a name, a permutation or a list of them".into()),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub passed: bool,
    pub details: Value,
    /// Replayable counterexample with exact rational inputs.
    pub witness: Option<Value>,
}

fn to_json<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report values serialize")
}

impl Outcome {
    fn from_verdict(v: &Verdict, details: Value) -> Outcome {
        Outcome {
            passed: v.passed,
            details,
            witness: v.counterexample.as_ref().map(to_json),
        }
    }

    /// Several verdicts labelled by permutation; the first failure is the witness.
    fn from_verdicts(items: Vec<(Permutation, Verdict)>) -> Outcome {
        let passed = items.iter().all(|(_, v)| v.passed);
        let witness = items
            .iter()
            .find(|(_, v)| !v.passed)
            .map(|(rho, v)| json!({"rho": rho, "counterexample": v.counterexample}));
        let details = Value::Array(
            items
                .iter()
                .map(|(rho, v)| json!({"rho": rho, "passed": v.passed, "cases": v.cases}))
                .collect(),
        );
        Outcome { passed, details, witness }
    }
}

pub trait Check: Send + Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    fn run(&self, input: &CheckInput) -> Result<Outcome>;
}

pub struct CheckRegistry {
    checks: BTreeMap<&'static str, Box<dyn Check>>,
}

impl Default for CheckRegistry {
    fn default() -> Self {
        let mut r = CheckRegistry { checks: BTreeMap::new() };
        r.register(Box::new(CompareAll));
        r.register(Box::new(Evaluate));
        r.register(Box::new(DgOracle));
        r.register(Box::new(Props));
        r.register(Box::new(StarChainCheck));
        r.register(Box::new(HomComposite));
        r.register(Box::new(ModulusIdentity));
        r.register(Box::new(OcRestriction));
        r.register(Box::new(Multimorphism));
        r.register(Box::new(ExtensionMultimorphism));
        r.register(Box::new(Kusraev));
        r.register(Box::new(FiniteRank));
        r.register(Box::new(BandProjection));
        r.register(Box::new(Transport));
        r
    }
}

impl CheckRegistry {
    pub fn register(&mut self, c: Box<dyn Check>) {
        self.checks.insert(c.name(), c);
    }

    pub fn get(&self, name: &str) -> Option<&dyn Check> {
        self.checks.get(name).map(|c| c.as_ref())
    }

    pub fn kinds(&self) -> impl Iterator<Item = (&'static str, &'static str)> + '_ {
        self.checks.values().map(|c| (c.name(), c.summary()))
    }
}

struct CompareAll;
impl Check for CompareAll {
    fn name(&self) -> &'static str {
        "compare_all"
    }
    fn summary(&self) -> &'static str {
        "all m! extensions agree on the generator grid and seeded random tuples"
    }
    fn run(&self, input: &CheckInput) -> Result<Outcome> {
        let a = input.operator()?;
        let r = if input.spec.params.get("rho").is_some() || input.spec.params.get("args").is_some() {
            let perms = input.perms(a.arity())?;
            compare_extensions(a, &perms, &input.tuples(a)?, &dual_generators(a.codomain()))?
        } else {
            compare_all_extensions(a, input.samples, input.seed)?
        };
        Ok(Outcome {
            passed: r.all_equal,
            details: json!({
                "perms": r.perms,
                "equal": r.equal,
                "tuples": r.tuples,
                "functionals": r.functionals,
            }),
            witness: r.witnesses.first().map(to_json),
        })
    }
}

/// Explicit values of chosen extensions, by bar-lift and by iterated limits.
struct Evaluate;
impl Check for Evaluate {
    fn name(&self) -> &'static str {
        "evaluate"
    }
    fn summary(&self) -> &'static str {
        "evaluate AR^ρ at given arguments by bar-lift and Davie–Gamelin limits, optionally against expected values"
    }
    fn run(&self, input: &CheckInput) -> Result<Outcome> {
        let a = input.operator()?;
        let cap = input.param::<usize>("cap")?.unwrap_or(DEFAULT_CAP);
        let cases: Vec<Value> = input.param("cases")?.ok_or_else(|| input.bad("missing field `cases`"))?;
        let mut passed = true;
        let mut witness = None;
        let mut rows = Vec::new();
        for (i, case) in cases.iter().enumerate() {
            let perms = match case.get("rho") {
                Some(v) => parse_perms(v, a.arity()).map_err(|e| input.bad(format!("cases[{i}].rho: {e}")))?,
                None => return Err(input.bad(format!("cases[{i}]: missing field `rho`"))),
            };
            let args: Vec<Bidual> = case
                .get("args")
                .map(|v| serde_json::from_value(v.clone()))
                .transpose()
                .map_err(|e| input.bad(format!("cases[{i}].args: {e}")))?
                .ok_or_else(|| input.bad(format!("cases[{i}]: missing field `args`")))?;
            let expected: Option<Bidual> = case
                .get("expected")
                .map(|v| serde_json::from_value(v.clone()))
                .transpose()
                .map_err(|e| input.bad(format!("cases[{i}].expected: {e}")))?;
            for rho in perms {
                let bar = arens_extend(a, &rho)?.eval(&args)?;
                let dg = davie_gamelin_eval(a, &rho, &args, cap)?;
                let ok = dg.value == bar && expected.as_ref().is_none_or(|e| *e == bar);
                let row = json!({
                    "case": i,
                    "rho": rho,
                    "bar_lift": bar,
                    "davie_gamelin": dg.value,
                    "max_stable_n": dg.max_stable_n,
                    "expected": expected,
                });
                if !ok && passed {
                    passed = false;
                    witness = Some(json!({"args": args, "values": row}));
                }
                rows.push(row);
            }
        }
        Ok(Outcome { passed, details: Value::Array(rows), witness })
    }
}

struct DgOracle;
impl Check for DgOracle {
    fn name(&self) -> &'static str {
        "dg_oracle"
    }
    fn summary(&self) -> &'static str {
        "Davie–Gamelin iterated limits agree with bar-lift evaluation and stabilize below the index cap"
    }
    fn run(&self, input: &CheckInput) -> Result<Outcome> {
        let a = input.operator()?;
        let cap = input.param::<usize>("cap")?.unwrap_or(DEFAULT_CAP);
        let r = check_dg_oracle(a, &input.perms(a.arity())?, &input.tuples(a)?, cap)?;
        Ok(Outcome::from_verdict(
            &r.agree,
            json!({"cases": r.agree.cases, "skipped": r.skipped, "max_stable_n": r.max_stable_n, "cap": cap}),
        ))
    }
}

struct Props;
impl Check for Props {
    fn name(&self) -> &'static str {
        "props"
    }
    fn summary(&self) -> &'static str {
        "extension identity, positivity transfer, naturality under a lattice map, sign expansion"
    }
    fn run(&self, input: &CheckInput) -> Result<Outcome> {
        let a = input.operator()?;
        let u: Option<LatticeMap> = input.param("u")?;
        let mut passed = true;
        let mut witness = None;
        let mut details = Vec::new();
        for rho in input.perms(a.arity())? {
            let r = verify_extension_props(a, &rho, u.as_ref(), input.samples, input.seed)?;
            if !r.passed() && passed {
                passed = false;
                witness = Some(json!({"rho": rho, "report": r}));
            }
            details.push(json!({
                "rho": rho,
                "extends": r.extends.cases,
                "positive_transfer": r.positive_transfer.cases,
                "naturality": r.naturality.cases,
                "sign_expansion": r.sign_expansion.cases,
                "passed": r.passed(),
            }));
        }
        Ok(Outcome { passed, details: Value::Array(details), witness })
    }
}

struct StarChainCheck;
impl Check for StarChainCheck {
    fn name(&self) -> &'static str {
        "star_chain"
    }
    fn summary(&self) -> &'static str {
        "AR^θ equals the literal iterated-adjoint chain A***…"
    }
    fn run(&self, input: &CheckInput) -> Result<Outcome> {
        let a = input.operator()?;
        let r = check_star_chain(a, &input.tuples(a)?)?;
        Ok(Outcome::from_verdict(
            &r.theta,
            json!({
                "cases": r.theta.cases,
                "theta": r.theta.passed,
                "reversal": r.reversal.passed,
            }),
        ))
    }
}

struct HomComposite;
impl Check for HomComposite {
    fn name(&self) -> &'static str {
        "hom_composite"
    }
    fn summary(&self) -> &'static str {
        "|AR(x'')(y')| = AR(|x''|)(y') for homomorphism functionals y'"
    }
    fn run(&self, input: &CheckInput) -> Result<Outcome> {
        let a = input.operator()?;
        let ys = match input.param::<Dual>("functional")? {
            Some(y) => vec![y],
            None => hom_functionals(a.codomain()),
        };
        let tuples = input.tuples(a)?;
        let mut items = Vec::new();
        for rho in input.perms(a.arity())? {
            for y in &ys {
                items.push((rho.clone(), check_hom_composite(a, &rho, y, &tuples)?));
            }
        }
        Ok(Outcome::from_verdicts(items))
    }
}

/// Default functional for the modulus identity: a positive combination of
/// two homomorphisms when the codomain has them.
fn hom_span_functional(a: &RegOperator) -> Dual {
    let h = hom_functionals(a.codomain());
    match h.as_slice() {
        [first, second, ..] => first.scale(&rational::int(2)).add(&second.scale(&rational::int(3))),
        [first] => first.clone(),
        [] => Dual::zero_of(a.codomain()),
    }
}

struct ModulusIdentity;
impl Check for ModulusIdentity {
    fn name(&self) -> &'static str {
        "modulus_identity"
    }
    fn summary(&self) -> &'static str {
        "|AR(x'')|(y') = AR(|x''|)(y') for y' in the positive span of homomorphisms"
    }
    fn run(&self, input: &CheckInput) -> Result<Outcome> {
        let a = input.operator()?;
        let y = match input.param::<Dual>("functional")? {
            Some(y) => y,
            None => hom_span_functional(a),
        };
        let tuples = input.tuples(a)?;
        let mut items = Vec::new();
        for rho in input.perms(a.arity())? {
            items.push((rho.clone(), check_modulus_identity(a, &rho, &y, &tuples)?));
        }
        Ok(Outcome::from_verdicts(items))
    }
}

struct OcRestriction;
impl Check for OcRestriction {
    fn name(&self) -> &'static str {
        "oc_restriction"
    }
    fn summary(&self) -> &'static str {
        "multimorphism identity of AR^ρ on arguments with zero singular part"
    }
    fn run(&self, input: &CheckInput) -> Result<Outcome> {
        let a = input.operator()?;
        let mut items = Vec::new();
        for rho in input.perms(a.arity())? {
            items.push((rho.clone(), check_oc_restriction(a, &rho, input.samples, input.seed)?));
        }
        Ok(Outcome::from_verdicts(items))
    }
}

struct Multimorphism;
impl Check for Multimorphism {
    fn name(&self) -> &'static str {
        "multimorphism"
    }
    fn summary(&self) -> &'static str {
        "certify |A(x)| = A(|x|) by structure or rule, cross-checked on sign patterns and random tuples"
    }
    fn run(&self, input: &CheckInput) -> Result<Outcome> {
        let a = input.operator()?;
        let v = is_multimorphism(a, input.samples, input.seed)?;
        Ok(match &v {
            MultiVerdict::Yes { .. } => Outcome { passed: true, details: to_json(&v), witness: None },
            MultiVerdict::No { witness } => Outcome {
                passed: false,
                details: json!({"verdict": "no"}),
                witness: Some(json!({"args": witness})),
            },
        })
    }
}

struct ExtensionMultimorphism;
impl Check for ExtensionMultimorphism {
    fn name(&self) -> &'static str {
        "extension_multimorphism"
    }
    fn summary(&self) -> &'static str {
        "|AR(x'')| = AR(|x''|) against every dual generator, over sign patterns, the grid and random tuples"
    }
    fn run(&self, input: &CheckInput) -> Result<Outcome> {
        let a = input.operator()?;
        let mut tuples = sign_tuples(a.domain());
        tuples.extend(input.tuples(a)?);
        let v = check_extension_multimorphism(a, &input.perms(a.arity())?, &tuples)?;
        Ok(Outcome::from_verdict(&v, json!({"cases": v.cases})))
    }
}

struct Kusraev;
impl Check for Kusraev {
    fn name(&self) -> &'static str {
        "kusraev"
    }
    fn summary(&self) -> &'static str {
        "factor a scalar multimorphism as a product of homomorphisms and rebuild the tensor"
    }
    fn run(&self, input: &CheckInput) -> Result<Outcome> {
        let a = input.operator()?;
        let factors = match kusraev_factor(a) {
            Ok(f) => f,
            Err(Error::NotMultimorphism(w)) => {
                return Ok(Outcome {
                    passed: false,
                    details: json!({"factors": null}),
                    witness: Some(json!({"not_multimorphism": w})),
                })
            }
            Err(e) => return Err(e),
        };
        let rebuilt = tensor_of_factors(&factors)?;
        let original = a.to_tensor()?;
        let passed = rebuilt == original;
        Ok(Outcome {
            passed,
            details: json!({"factors": factors}),
            witness: (!passed).then(|| json!({"original": original.to_json(), "rebuilt": rebuilt.to_json()})),
        })
    }
}

struct FiniteRank;
impl Check for FiniteRank {
    fn name(&self) -> &'static str {
        "finite_rank"
    }
    fn summary(&self) -> &'static str {
        "sublattice generated by the range: atoms, isomorphism onto R^n, astriction A = I⁻¹ ∘ A_1"
    }
    fn run(&self, input: &CheckInput) -> Result<Outcome> {
        let a = input.operator()?;
        let r = finite_rank_reduce(a)?;
        let dims: Vec<usize> = a
            .domain()
            .iter()
            .map(|s| s.fin_dim().ok_or_else(|| Error::Unsupported("finite_rank needs finite-dimensional slots".into())))
            .collect::<Result<_>>()?;
        let mut tuples: Vec<Vec<Primal>> = index_tuples(&dims)
            .into_iter()
            .map(|idx| idx.iter().zip(&dims).map(|(&i, &n)| Primal::Vec(VecElem::unit(n, i))).collect())
            .collect();
        let mut rng = sample::rng(input.seed);
        tuples.extend((0..input.samples).map(|_| a.domain().iter().map(|s| sample::primal(s, &mut rng)).collect()));
        let mut cases = 0;
        let mut witness = None;
        let mut images = Vec::new();
        for xs in &tuples {
            let Primal::Vec(g) = a.evaluate(xs)? else {
                return Err(Error::Unsupported("finite_rank needs a finite-dimensional codomain".into()));
            };
            cases += 1;
            let ok = match &r.astriction {
                Some(a1) => match a1.evaluate(xs)? {
                    Primal::Vec(c) => r.contains(&g) && r.from_coords(&c)? == g && r.to_coords(&g)? == c,
                    _ => false,
                },
                None => g.is_zero(),
            };
            if !ok && witness.is_none() {
                witness = Some(json!({"args": xs, "image": g}));
            }
            images.push(g);
        }
        // I preserves lattice operations on G.
        for pair in images.windows(2) {
            let (g, h) = (&pair[0], &pair[1]);
            cases += 1;
            if r.dim() > 0 && r.to_coords(&g.sup(h))? != r.to_coords(g)?.sup(&r.to_coords(h)?) && witness.is_none() {
                witness = Some(json!({"sup_of": [g, h]}));
            }
        }
        let atoms: Vec<Value> = r.atoms.iter().map(to_json).collect();
        Ok(Outcome {
            passed: witness.is_none(),
            details: json!({"dim": r.dim(), "atoms": atoms, "rounds": r.rounds, "cases": cases}),
            witness,
        })
    }
}

struct BandProjection;
impl Check for BandProjection {
    fn name(&self) -> &'static str {
        "band_projection"
    }
    fn summary(&self) -> &'static str {
        "composing with a band projection keeps the multimorphism property and the coincidence of extensions"
    }
    fn run(&self, input: &CheckInput) -> Result<Outcome> {
        let a = input.operator()?;
        let band: Vec<usize> = input.param("band")?.ok_or_else(|| input.bad("missing field `band`"))?;
        let r = check_band_projection(a, &band, input.samples, input.seed)?;
        let passed = r.passed();
        Ok(Outcome {
            passed,
            details: json!({
                "band": band,
                "idempotent": r.idempotent,
                "positive": r.positive,
                "hom": r.hom,
                "source_multimorphism": r.source_multimorphism,
                "projected_multimorphism": r.projected_multimorphism,
                "extensions_equal": r.extensions.all_equal,
            }),
            witness: (!passed).then(|| to_json(&r.extensions.witnesses.first())),
        })
    }
}

struct Transport;
impl Check for Transport {
    fn name(&self) -> &'static str {
        "transport"
    }
    fn summary(&self) -> &'static str {
        "ψ carries AR(A) and its modulus blockwise onto the extensions of the components"
    }
    fn run(&self, input: &CheckInput) -> Result<Outcome> {
        let a = input.operator()?;
        let mut passed = true;
        let mut witness = None;
        let mut details = Vec::new();
        for rho in input.perms(a.arity())? {
            let r = transport_check(a, &rho, input.samples, input.seed)?;
            if !r.passed() && passed {
                passed = false;
                let w = if r.blockwise.passed { &r.modulus } else { &r.blockwise };
                witness = Some(json!({"rho": rho, "counterexample": w.counterexample}));
            }
            details.push(json!({
                "rho": rho,
                "components": r.components,
                "blockwise": r.blockwise.cases,
                "modulus": r.modulus.cases,
                "passed": r.passed(),
            }));
        }
        Ok(Outcome { passed, details: Value::Array(details), witness })
    }
}
