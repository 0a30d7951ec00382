use crate::error::Result;
use crate::model::{Alternative, CpStatement, CpTheory};
use crate::semantics::preorder::{universe_within_cap, BitMatrix, ExplicitPreorder};

/// Whether `s` sanctions the worsening swap `(o, o')`: `o[U] = o'[U] ⊨ α`,
/// `o[W] = w`, `o'[W] = w'`, and `o`, `o'` agree outside `U ∪ V ∪ W`.
pub fn sanctions(s: &CpStatement, o: &Alternative, o2: &Alternative) -> bool {
    let u = s.condition_vars();
    let outside = u.union(s.free()).union(s.swapped());
    let fixed = (0..o.values().len()).all(|a| outside.contains(a) || o.get(a) == o2.get(a));
    fixed
        && o.agrees_on(o2, u)
        && o.extends(s.better())
        && o2.extends(s.worse())
        && s.condition().holds(o)
}

/// Every `o'` such that some statement of `t` sanctions `(o, o')`, sorted and deduplicated.
pub fn worsening_successors(t: &CpTheory, o: &Alternative) -> Vec<Alternative> {
    let mut out = Vec::new();
    for s in t.statements() {
        push_successors(t, s, o, &mut out);
    }
    out.sort_unstable();
    out.dedup();
    out
}

pub(crate) fn push_successors(
    t: &CpTheory,
    s: &CpStatement,
    o: &Alternative,
    out: &mut Vec<Alternative>,
) {
    if !s.applies_above(o) {
        return;
    }
    let base = o.assign(s.worse());
    for v in t.schema().instantiations(s.free()) {
        out.push(base.assign(&v));
    }
}

/// The exact preorder `≥_t`: all sanctioned swaps over the enumerated
/// universe, closed reflexively and transitively.
///
/// `cap` bounds the number of relation cells, i.e. the square of the universe size.
pub fn closure_oracle(t: &CpTheory, cap: u128) -> Result<ExplicitPreorder> {
    Ok(ExplicitPreorder::closure_of(
        t.schema().clone(),
        swap_graph(t, cap)?,
    ))
}

/// The sanctioned-swap relation `t*` as an incidence matrix over alternative ranks.
pub fn swap_graph(t: &CpTheory, cap: u128) -> Result<BitMatrix> {
    let schema = t.schema();
    let n = universe_within_cap(schema, cap)?;
    let mut m = BitMatrix::new(n);
    let mut succ = Vec::new();
    for i in 0..n {
        let o = schema.unrank(i);
        succ.clear();
        for s in t.statements() {
            push_successors(t, s, &o, &mut succ);
        }
        for o2 in &succ {
            m.set(i, schema.rank(o2));
        }
    }
    Ok(m)
}
