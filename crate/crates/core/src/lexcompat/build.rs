use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::lexcompat::choose::{choose_attribute, CandidateLabel};
use crate::lptree::{Children, LpNode, LpTree, NodeContext, Rule};
use crate::model::{Alternative, CpTheory, Instantiation};
use crate::semantics::top_p_by;

/// Default bound on the number of nodes a compiled tree may have.
pub const DEFAULT_NODE_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BuildOutcome {
    /// A complete tree whose order extends the theory.
    Built(LpTree),
    /// No label fits at the node reached by `branch` (edge labels from the root).
    Failure { branch: Vec<Instantiation> },
    /// The tree outgrew the node budget before the answer was known.
    NodeBudgetExceeded,
}

enum Stop {
    Failure(Vec<Instantiation>),
    Budget,
    Error(Error),
}

/// Top-down construction of a complete `k`-LP-tree, branches explored
/// depth-first from the leftmost edge.
pub fn build_complete_lptree(t: &CpTheory, k: usize, node_budget: usize) -> Result<BuildOutcome> {
    if k == 0 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    let mut nodes = 0usize;
    let mut branch = Vec::new();
    match build_node(
        t,
        k,
        &NodeContext::root(),
        &mut nodes,
        node_budget,
        &mut branch,
    ) {
        Ok(root) => Ok(BuildOutcome::Built(LpTree::new(t.schema().clone(), root))),
        Err(Stop::Failure(b)) => Ok(BuildOutcome::Failure { branch: b }),
        Err(Stop::Budget) => Ok(BuildOutcome::NodeBudgetExceeded),
        Err(Stop::Error(e)) => Err(e),
    }
}

fn build_node(
    t: &CpTheory,
    k: usize,
    ctx: &NodeContext,
    nodes: &mut usize,
    budget: usize,
    branch: &mut Vec<Instantiation>,
) -> Result<LpNode, Stop> {
    if *nodes == budget {
        return Err(Stop::Budget);
    }
    *nodes += 1;
    let schema = t.schema();
    let label = match choose_attribute(t, ctx, k) {
        Ok(Some(c)) => c,
        Ok(None) => return Err(Stop::Failure(branch.clone())),
        Err(e) => return Err(Stop::Error(e)),
    };
    let rule = Rule::linear(schema, label.attrs, label.order.clone()).map_err(Stop::Error)?;
    let below = ctx.anc.union(label.attrs);
    let children = if below == schema.all() {
        Children::Leaf
    } else {
        let mut bs = Vec::new();
        for edge in schema.instantiations(label.attrs) {
            branch.push(edge.clone());
            let child = build_node(t, k, &ctx.below_edge(&edge), nodes, budget, branch)?;
            branch.pop();
            bs.push((edge, child));
        }
        Children::Branches(bs)
    };
    Ok(LpNode {
        label: label.attrs,
        rules: vec![rule],
        children,
    })
}

/// Whether some complete `k`-LP-tree extends the theory; the construction
/// may take time exponential in the number of attributes.
pub fn is_k_lexico_compatible(t: &CpTheory, k: usize, node_budget: usize) -> Result<bool> {
    match build_complete_lptree(t, k, node_budget)? {
        BuildOutcome::Built(_) => Ok(true),
        BuildOutcome::Failure { .. } => Ok(false),
        BuildOutcome::NodeBudgetExceeded => Err(Error::BudgetExhausted(format!(
            "compiled tree exceeds {node_budget} nodes"
        ))),
    }
}

/// TOP-p for a `k`-lexico-compatible theory. Only the branches followed by
/// candidate pairs are built, each down to the node that separates the pair.
pub fn top_p_lexcompat(
    t: &CpTheory,
    k: usize,
    s: &[Alternative],
    p: usize,
) -> Result<Vec<Alternative>> {
    if k == 0 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    for o in s {
        t.schema().check_alternative(o)?;
    }
    let mut labels: HashMap<Instantiation, CandidateLabel> = HashMap::new();
    top_p_by(s, p, |a, b| {
        strictly_better_on_branch(t, k, a, b, &mut labels)
    })
}

fn strictly_better_on_branch(
    t: &CpTheory,
    k: usize,
    a: &Alternative,
    b: &Alternative,
    labels: &mut HashMap<Instantiation, CandidateLabel>,
) -> Result<bool> {
    let mut ctx = NodeContext::root();
    loop {
        let label = match labels.get(&ctx.inst) {
            Some(l) => l.clone(),
            None => {
                let l = choose_attribute(t, &ctx, k)?.ok_or(Error::NotLexicoCompatible { k })?;
                labels.insert(ctx.inst.clone(), l.clone());
                l
            }
        };
        let (ta, tb) = (a.restrict(label.attrs), b.restrict(label.attrs));
        if ta != tb {
            return Ok(label.position(&ta) < label.position(&tb));
        }
        ctx = ctx.below_edge(&ta);
        if ctx.anc == t.schema().all() {
            return Ok(false);
        }
    }
}
