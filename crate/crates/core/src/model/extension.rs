use crate::error::Result;
use crate::model::formula::Formula;
use crate::model::schema::AttrSet;
use crate::model::statement::{CpStatement, CpTheory};
use crate::semantics::preorder::ExplicitPreorder;

/// One statement `o[X∖Δ] : o[Δ] ≥ o'[Δ]` per pair `o ≥ o'` with `o ≠ o'`,
/// `Δ` being the attributes on which `o` and `o'` differ. The condition pins
/// the common part so that each statement sanctions exactly that one swap.
pub fn preorder_to_cp(r: &ExplicitPreorder) -> Result<CpTheory> {
    if !r.is_preorder() {
        return Err(crate::error::Error::NotAPreorder(
            "relation is not reflexive and transitive".into(),
        ));
    }
    let schema = r.schema().clone();
    let mut statements = Vec::new();
    for (i, j) in r.pairs().filter(|(i, j)| i != j) {
        let (o, o2) = (r.alternative(i), r.alternative(j));
        let delta = o.diff(&o2);
        statements.push(CpStatement::new(
            &schema,
            Formula::from_instantiation(&o.restrict(schema.all().difference(delta))),
            AttrSet::empty(),
            o.restrict(delta),
            o2.restrict(delta),
        )?);
    }
    CpTheory::new(schema, statements)
}
