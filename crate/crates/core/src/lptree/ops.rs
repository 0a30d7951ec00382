use crate::error::{Error, Result};
use crate::lptree::tree::{Children, LpNode, LpTree, NodeContext};
use crate::model::{Alternative, CpStatement, CpTheory, Formula};
use crate::semantics::{top_p_by, universe_within_cap, BitMatrix, ExplicitPreorder, RelationLabel};

/// The node deciding `{o, o'}` with its context, or `None` when the pair
/// leaves the tree undecided.
pub fn decide<'a>(
    tree: &'a LpTree,
    o: &Alternative,
    o2: &Alternative,
) -> Result<Option<(&'a LpNode, NodeContext)>> {
    if o == o2 {
        return Err(Error::Precondition(
            "decide needs two distinct alternatives".into(),
        ));
    }
    let mut node = tree.root();
    let mut ctx = NodeContext::root();
    loop {
        if !o.agrees_on(o2, node.label) {
            return Ok(Some((node, ctx)));
        }
        match &node.children {
            Children::Leaf => return Ok(None),
            Children::Single(c) => {
                ctx = ctx.below_single(node.label);
                node = c;
            }
            Children::Branches(bs) => match bs.iter().find(|(l, _)| o.extends(l)) {
                Some((l, c)) => {
                    ctx = ctx.below_edge(l);
                    node = c;
                }
                None => return Ok(None),
            },
        }
    }
}

/// Label of `(o, o')` under the tree's preorder.
///
/// The pair is labelled at the node that decides it, except that a node
/// where `o` and `o'` agree but whose rule ties `o`'s label instantiation with
/// another one makes them equivalent: both reach each other through that
/// tied instantiation. Without ties this is the plain deciding-node label.
pub fn compare_lptree(tree: &LpTree, o: &Alternative, o2: &Alternative) -> Result<RelationLabel> {
    if o == o2 {
        return Err(Error::Precondition(
            "compare needs two distinct alternatives".into(),
        ));
    }
    let mut node = tree.root();
    loop {
        let rule = node
            .rule_for(o)
            .ok_or_else(|| Error::MalformedTree("no rule applies on the branch".into()))?;
        if !o.agrees_on(o2, node.label) {
            return Ok(rule.label_of(o, o2));
        }
        if rule.has_tie_partner(o) {
            return Ok(RelationLabel::Equivalent);
        }
        match node.child_for(o) {
            Some(c) => node = c,
            None => return Ok(RelationLabel::Incomparable),
        }
    }
}

/// Every attribute on every branch and every rule a linear order.
pub fn is_complete(tree: &LpTree) -> bool {
    fn go(n: &LpNode, anc: crate::model::AttrSet, all: crate::model::AttrSet) -> bool {
        let here = anc.union(n.label);
        n.rules.iter().all(|r| r.is_linear())
            && match &n.children {
                Children::Leaf => here == all,
                Children::Single(c) => go(c, here, all),
                Children::Branches(bs) => bs.iter().all(|(_, c)| go(c, here, all)),
            }
    }
    go(tree.root(), Default::default(), tree.schema().all())
}

/// Every rule order is antisymmetric.
pub fn is_linearisable_lptree(tree: &LpTree) -> bool {
    let mut ok = true;
    tree.visit(|n, _| ok &= n.rules.iter().all(|r| r.is_antisymmetric()));
    ok
}

/// The statement set equivalent to the tree. For a node `N` and a rule
/// `α : ≥`, every pair `w ≥ w'` gives `α ∧ u ∧ z | V : w# ≥ w'#`, where `u`
/// is the path instantiation, `z` pins the label attributes on which `w` and
/// `w'` agree, and `V` holds the attributes neither above nor at `N`.
pub fn lptree_to_statements(tree: &LpTree) -> Result<CpTheory> {
    let schema = tree.schema();
    let mut statements = Vec::new();
    let mut err = None;
    tree.visit(|n, ctx| {
        let free = schema.all().difference(ctx.anc.union(n.label));
        for rule in &n.rules {
            let space = rule.space();
            for i in 0..space.size() {
                for j in rule.order().row(i).filter(|&j| j != i) {
                    let (w, w2) = (space.inst_at(i), space.inst_at(j));
                    let delta: crate::model::AttrSet = w
                        .iter()
                        .zip(w2.iter())
                        .filter(|(a, b)| a.1 != b.1)
                        .map(|(a, _)| a.0)
                        .collect();
                    let common = w.restrict(n.label.difference(delta));
                    let condition = Formula::conj([
                        rule.condition().clone(),
                        Formula::from_instantiation(&ctx.inst),
                        Formula::from_instantiation(&common),
                    ]);
                    match CpStatement::new(
                        schema,
                        condition,
                        free,
                        w.restrict(delta),
                        w2.restrict(delta),
                    ) {
                        Ok(s) => statements.push(s),
                        Err(e) => err = err.take().or(Some(e)),
                    }
                }
            }
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    CpTheory::new(schema.clone(), statements)
}

/// The relation of the tree over the whole universe, pair by pair.
pub fn lptree_relation(tree: &LpTree, cap: u128) -> Result<ExplicitPreorder> {
    let schema = tree.schema();
    let n = universe_within_cap(schema, cap)?;
    let alts: Vec<Alternative> = schema.alternatives().collect();
    let mut m = BitMatrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            if i != j
                && matches!(
                    compare_lptree(tree, &alts[i], &alts[j])?,
                    RelationLabel::StrictlyBetter | RelationLabel::Equivalent
                )
            {
                m.set(i, j);
            }
        }
    }
    ExplicitPreorder::new(schema.clone(), m)
}

/// `|CUT^{>,o}|` for a complete tree, without enumerating alternatives:
/// along the branch of `o`, each node contributes the label instantiations
/// strictly better than `o`'s, times every completion below the node.
pub fn strict_cut_count(tree: &LpTree, o: &Alternative) -> Result<u128> {
    tree.schema().check_alternative(o)?;
    if !is_complete(tree) {
        return Err(Error::Unsupported(
            "strict cut counting needs a complete LP-tree".into(),
        ));
    }
    let schema = tree.schema();
    let overflow = || Error::Unsupported("cut size exceeds 128 bits".into());
    let mut total: u128 = 0;
    for (node, ctx) in tree.branch(o) {
        let rule = node
            .rule_for(o)
            .ok_or_else(|| Error::MalformedTree("no rule applies on the branch".into()))?;
        let i = rule.space().index_of(o);
        let better = (0..rule.space().size())
            .filter(|&j| rule.order().get(j, i) && !rule.order().get(i, j))
            .count() as u128;
        if better == 0 {
            continue;
        }
        let rest = schema
            .count_instantiations(schema.all().difference(ctx.anc.union(node.label)))
            .ok_or_else(overflow)?;
        total = better
            .checked_mul(rest)
            .and_then(|c| total.checked_add(c))
            .ok_or_else(overflow)?;
    }
    Ok(total)
}

/// Some member of `CUT^{R,o}` (`R` is `>` when `strict`, else `≥`): the first
/// node on `o`'s branch whose rule ranks another label instantiation above
/// (or with) `o`'s supplies it.
pub fn cut_extract_lptree(
    tree: &LpTree,
    o: &Alternative,
    strict: bool,
) -> Result<Option<Alternative>> {
    tree.schema().check_alternative(o)?;
    for (node, _) in tree.branch(o) {
        let rule = node
            .rule_for(o)
            .ok_or_else(|| Error::MalformedTree("no rule applies on the branch".into()))?;
        let space = rule.space();
        let i = space.index_of(o);
        let found = (0..space.size())
            .find(|&j| j != i && rule.order().get(j, i) && (!strict || !rule.order().get(i, j)));
        if let Some(j) = found {
            return Ok(Some(o.assign(&space.inst_at(j))));
        }
        if rule.has_tie_partner(o) {
            // everything agreeing with `o` down to here is equivalent to it
            return Ok(None);
        }
    }
    Ok(None)
}

/// `CUT^{R,o}` by comparing `o` with every alternative; for trees where counting has no shortcut.
pub fn cut_by_enumeration(
    tree: &LpTree,
    o: &Alternative,
    strict: bool,
    cap: u128,
) -> Result<Vec<Alternative>> {
    tree.schema().check_alternative(o)?;
    universe_within_cap(tree.schema(), cap)?;
    let mut out = Vec::new();
    for o2 in tree.schema().alternatives() {
        if o2 == *o {
            continue;
        }
        let hit = match compare_lptree(tree, &o2, o)? {
            RelationLabel::StrictlyBetter => true,
            RelationLabel::Equivalent => !strict,
            _ => false,
        };
        if hit {
            out.push(o2);
        }
    }
    Ok(out)
}

pub fn top_p_lptree(tree: &LpTree, s: &[Alternative], p: usize) -> Result<Vec<Alternative>> {
    for o in s {
        tree.schema().check_alternative(o)?;
    }
    top_p_by(s, p, |a, b| {
        Ok(compare_lptree(tree, a, b)? == RelationLabel::StrictlyBetter)
    })
}
