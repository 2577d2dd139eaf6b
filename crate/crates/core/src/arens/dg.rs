//! Iterated-limit evaluation of `AR^ρ(A)` along approximant sequences.

use serde::Serialize;

use super::extend::{check_bidual_args, reconstruct};
use crate::bidual::{approximants, Bidual};
use crate::error::{mismatch, Error, Result};
use crate::lattice::{pairing, Dual, Model, Primal};
use crate::operator::{Permutation, RegOperator};
use crate::rational::Rational;

pub const DEFAULT_CAP: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DgValue {
    pub value: Bidual,
    /// Largest `N` at which some limit was found stable.
    pub max_stable_n: usize,
}

struct Dg<'a> {
    a: &'a RegOperator,
    rho: &'a Permutation,
    args: &'a [Bidual],
    y: &'a Dual,
    base_offset: usize,
    cap: usize,
}

impl Dg<'_> {
    /// Limit over slot `ρ(level)` with the outer slots already fixed in
    /// `chosen`; level 0 evaluates the operator.
    fn limit(&self, level: usize, chosen: &mut Vec<Option<Primal>>, max_n: &mut usize) -> Result<Rational> {
        if level == 0 {
            let xs: Vec<Primal> = chosen.iter().map(|x| x.clone().expect("all slots chosen")).collect();
            return pairing(self.y, &self.a.evaluate(&xs)?);
        }
        let slot = self.rho.apply(level) - 1;
        let x = &self.args[slot];
        if matches!(x.model(), Model::Fin(_)) {
            chosen[slot] = Some(approximants(x, 1));
            let v = self.limit(level - 1, chosen, max_n);
            chosen[slot] = None;
            return v;
        }
        let offset = chosen
            .iter()
            .flatten()
            .map(Primal::index_extent)
            .max()
            .unwrap_or(0)
            .max(self.base_offset);
        let mut at = |n: usize, chosen: &mut Vec<Option<Primal>>| -> Result<Rational> {
            chosen[slot] = Some(approximants(x, n + offset));
            let v = self.limit(level - 1, chosen, max_n);
            chosen[slot] = None;
            v
        };
        let mut n = 1;
        while 4 * n <= self.cap {
            let v = at(n, chosen)?;
            if at(2 * n, chosen)? == v && at(4 * n, chosen)? == v {
                *max_n = (*max_n).max(n);
                return Ok(v);
            }
            n += 1;
        }
        Err(Error::StabilizationFailure {
            cap: self.cap,
            detail: format!("limit over slot {} did not settle", slot + 1),
        })
    }
}

/// `lim_{α_{ρ(m)}} … lim_{α_{ρ(1)}} y'(A(x_{α_1}, …, x_{α_m}))`, outermost
/// limit over slot `ρ(m)`.
pub fn davie_gamelin_value(a: &RegOperator, rho: &Permutation, args: &[Bidual], y: &Dual, cap: usize) -> Result<(Rational, usize)> {
    check_bidual_args(a, args)?;
    if rho.arity() != a.arity() {
        return Err(mismatch("permutation arity differs from the operator"));
    }
    let base_offset = a
        .threshold()
        .max(y.index_extent())
        .max(args.iter().map(Bidual::index_extent).max().unwrap_or(0));
    let dg = Dg { a, rho, args, y, base_offset, cap };
    let mut chosen = vec![None; args.len()];
    let mut max_n = 0;
    let v = dg.limit(a.arity(), &mut chosen, &mut max_n)?;
    Ok((v, max_n))
}

pub fn davie_gamelin_eval(a: &RegOperator, rho: &Permutation, args: &[Bidual], cap: usize) -> Result<DgValue> {
    check_bidual_args(a, args)?;
    let bound = a.threshold().max(args.iter().map(Bidual::index_extent).max().unwrap_or(0)) + 1;
    let max_n = std::cell::Cell::new(0);
    let value = reconstruct(a.codomain(), bound, |y| {
        let (v, n) = davie_gamelin_value(a, rho, args, y, cap)?;
        max_n.set(max_n.get().max(n));
        Ok(v)
    })?;
    Ok(DgValue { value, max_stable_n: max_n.get() })
}
