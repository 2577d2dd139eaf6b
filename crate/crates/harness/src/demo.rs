//! Step-by-step evaluation of the upper-triangular form at `(L, L)`.

use std::fmt::Write as _;

use arens_core::arens::{arens_extend, bar_lift, davie_gamelin_eval, Extension, DEFAULT_CAP};
use arens_core::bidual::Bidual;
use arens_core::lattice::{Dual, FinSupSeq, Primal, Space, VecElem};
use arens_core::operator::{Form, Permutation, RegOperator, UpperTriangular};
use arens_core::rational;
use arens_core::Result;

pub const DEMOS: &[(&str, &str)] = &[(
    "irregularity",
    "two Arens extensions of Σ_{i≤j} x_i y_j disagree at (L, L): 0 versus 1",
)];

fn show_dual(f: &Dual) -> String {
    match f {
        Dual::Evconst(t) => {
            let mut parts: Vec<String> = t.prefix().iter().map(ToString::to_string).collect();
            parts.push(format!("{} repeating", t.tail()));
            format!("({})", parts.join(", "))
        }
        other => serde_json::to_string(other).expect("dual serializes"),
    }
}

fn unit(i: usize) -> Primal {
    Primal::Finsup(FinSupSeq::unit(i))
}

fn trace_rho(out: &mut String, b: &RegOperator, form: &Form, rho: &Permutation, name: &str) -> Result<Bidual> {
    let l = Bidual::limit_l1();
    let first = rho.apply(1);
    let other = rho.apply(2);
    let _ = writeln!(out, "\nρ = {name} {rho}: lift slot {first} first, then slot {other}");
    let _ = writeln!(out, "  slices in slot {first} with slot {other} fixed at e_k:");
    for k in 1..=4 {
        let mut fixed = vec![Some(unit(k)), Some(unit(k))];
        fixed[first - 1] = None;
        let s = form.slice(&fixed)?;
        let _ = writeln!(out, "    k = {k}: {}  L(slice) = {}", show_dual(&s), Bidual::limit_l1().apply(&s)?);
    }
    let lifted = bar_lift(form, &l, rho, 1)?;
    let rest = lifted.slice(&[None])?;
    let _ = writeln!(out, "  after lifting L through slot {first}: functional on slot {other} = {}", show_dual(&rest));
    let v = l.apply(&rest)?;
    let _ = writeln!(out, "  lifting L through slot {other}: value {v}");
    let full = arens_extend(b, rho)?.eval(&[l.clone(), l.clone()])?;
    let dg = davie_gamelin_eval(b, rho, &[l.clone(), l], DEFAULT_CAP)?;
    let _ = writeln!(
        out,
        "  AR^{name}(B)(L, L) = {}   (Davie–Gamelin: {}, stable from N = {})",
        show_bidual(&full),
        show_bidual(&dg.value),
        dg.max_stable_n
    );
    Ok(full)
}

fn show_bidual(x: &Bidual) -> String {
    match x {
        Bidual::Vec(v) if v.len() == 1 => v.get(1).to_string(),
        other => serde_json::to_string(other).expect("bidual serializes"),
    }
}

/// The derivation trace; the last line states whether the two values differ.
pub fn irregularity() -> Result<String> {
    let b = RegOperator::new(UpperTriangular::new(Space::SeqL1)?);
    let form = b.compose_dual(&Dual::Vec(VecElem::new(vec![rational::one()])))?;
    let mut out = String::new();
    let _ = writeln!(out, "B(x, y) = Σ_{{i≤j}} x_i y_j on the ℓ_1-model, scalar valued");
    let _ = writeln!(out, "L = generalized limit: acts on an eventually constant dual element by its tail");
    let _ = writeln!(out, "\nB(e_i, e_j) for i, j = 1..5 (row i, column j):");
    for i in 1..=5 {
        let row: Vec<String> = (1..=5)
            .map(|j| form.evaluate(&[unit(i), unit(j)]).map(|v| v.to_string()))
            .collect::<Result<_>>()?;
        let _ = writeln!(out, "  {}", row.join(" "));
    }
    let _ = writeln!(out, "lim_j lim_i B(e_i, e_j) = 0, lim_i lim_j B(e_i, e_j) = 1");
    let id = trace_rho(&mut out, &b, &form, &Permutation::identity(2), "id")?;
    let theta = trace_rho(&mut out, &b, &form, &Permutation::theta(2), "θ")?;
    let _ = writeln!(
        out,
        "\nAR^id(B)(L, L) = {} and AR^θ(B)(L, L) = {}: the extensions {}",
        show_bidual(&id),
        show_bidual(&theta),
        if id == theta { "agree" } else { "differ" }
    );
    Ok(out)
}
