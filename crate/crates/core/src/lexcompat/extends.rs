use crate::error::{Error, Result};
use crate::lexcompat::choose::relevant;
use crate::lptree::{is_complete, LpNode, LpTree, NodeContext};
use crate::model::{consistent_with, Alternative, CpStatement, CpTheory, Instantiation, Schema};

/// Whether the order of the complete tree contains the preorder of the theory,
/// decided node by node without enumerating alternatives.
///
/// At every node `N` where a statement is relevant, its free attributes must
/// avoid `Anc(N)`, and every swap it sanctions that reaches `N` must be ranked
/// the right way by the rule that applies there.
pub fn extends_check(t: &CpTheory, tree: &LpTree) -> Result<bool> {
    if t.schema() != tree.schema() {
        return Err(Error::SchemaMismatch);
    }
    if !is_complete(tree) {
        return Err(Error::Unsupported(
            "extension checking needs a complete LP-tree".into(),
        ));
    }
    let schema = t.schema();
    let mut ok = true;
    tree.visit(|node, ctx| {
        if !ok {
            return;
        }
        for s in t.statements() {
            if relevant(schema, s, ctx, Some(node.label))
                && !statement_respected(schema, s, node, ctx)
            {
                ok = false;
                return;
            }
        }
    });
    Ok(ok)
}

fn statement_respected(schema: &Schema, s: &CpStatement, node: &LpNode, ctx: &NodeContext) -> bool {
    if !s.free().is_disjoint(ctx.anc) {
        return false;
    }
    let here = node.label;
    let v = s.free().intersection(here);
    let w = s.swapped();
    // values of the common part that matter at N: the label outside V ∪ W,
    // and the unlabelled ancestors the rules may test
    let shared = here.union(ctx.non_inst).difference(v).difference(w);
    let vs: Vec<Instantiation> = schema.instantiations(v).collect();
    let (wb, ww) = (s.better().restrict(here), s.worse().restrict(here));
    for x in schema.instantiations(shared) {
        let Some(common) = ctx.inst.merge(&x) else {
            continue;
        };
        if !consistent_with(schema, s.condition(), &common) {
            continue;
        }
        let probe = complete(schema, &common);
        let Some(rule) = node.rule_for(&probe) else {
            return false;
        };
        let base = x.restrict(here);
        let left = base.merge(&wb).expect("disjoint");
        let right = base.merge(&ww).expect("disjoint");
        for v1 in &vs {
            let o = probe.assign(&left.merge(v1).expect("disjoint"));
            for v2 in &vs {
                let o2 = probe.assign(&right.merge(v2).expect("disjoint"));
                if rule.label_of(&o, &o2) != crate::semantics::RelationLabel::StrictlyBetter {
                    return false;
                }
            }
        }
    }
    true
}

/// Any alternative extending `inst`; only its restriction to bound attributes is read.
fn complete(schema: &Schema, inst: &Instantiation) -> Alternative {
    Alternative(vec![0; schema.len()]).assign(inst)
}
