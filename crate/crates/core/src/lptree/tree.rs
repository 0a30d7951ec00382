use std::fmt;

use crate::error::{Error, Result};
use crate::model::{Alternative, AttrSet, Formula, Instantiation, Schema, Subspace};
use crate::semantics::{BitMatrix, RelationLabel};

/// Largest number of instantiations of a node label a rule order may range over.
pub const MAX_LABEL_INSTANTIATIONS: usize = 4096;

/// Link between consecutive instantiations of a rule chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Link {
    /// `>`: the left side is preferred.
    Better,
    /// `~`: both sides are equally preferred.
    Tied,
}

/// `first link₁ i₁ link₂ i₂ ...`, as written in the rule.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chain {
    pub first: Instantiation,
    pub rest: Vec<(Link, Instantiation)>,
}

impl Chain {
    pub fn single(first: Instantiation) -> Self {
        Chain {
            first,
            rest: Vec::new(),
        }
    }

    /// A strict chain `i₀ > i₁ > ...`.
    pub fn strict(items: impl IntoIterator<Item = Instantiation>) -> Option<Self> {
        let mut it = items.into_iter();
        let first = it.next()?;
        Some(Chain {
            first,
            rest: it.map(|i| (Link::Better, i)).collect(),
        })
    }

    pub fn items(&self) -> impl Iterator<Item = &Instantiation> {
        std::iter::once(&self.first).chain(self.rest.iter().map(|(_, i)| i))
    }

    fn links(&self) -> impl Iterator<Item = (&Instantiation, Link, &Instantiation)> {
        self.items()
            .zip(self.rest.iter())
            .map(|(a, (l, b))| (a, *l, b))
    }
}

/// A local preference rule `α : ≥` of a node table. The order over the
/// instantiations of the node label is given in extension by chains and
/// stored closed under reflexivity and transitivity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    condition: Formula,
    chains: Vec<Chain>,
    space: Subspace,
    order: BitMatrix,
}

impl Rule {
    pub fn new(
        schema: &Schema,
        label: AttrSet,
        condition: Formula,
        chains: Vec<Chain>,
    ) -> Result<Self> {
        condition.check(schema)?;
        if chains.is_empty() {
            return Err(Error::MalformedTree(
                "a rule needs at least one chain".into(),
            ));
        }
        let space = Subspace::new(schema, label)?;
        if space.size() > MAX_LABEL_INSTANTIATIONS {
            return Err(Error::Unsupported(format!(
                "label {{{}}} has {} instantiations, above {MAX_LABEL_INSTANTIATIONS}",
                schema.render_set(label),
                space.size()
            )));
        }
        let mut order = BitMatrix::identity(space.size());
        for chain in &chains {
            for inst in chain.items() {
                schema.check_instantiation(inst)?;
                if inst.vars() != label {
                    return Err(Error::MalformedTree(format!(
                        "`{}` does not instantiate exactly {{{}}}",
                        schema.render_instantiation(inst),
                        schema.render_set(label)
                    )));
                }
            }
            for (a, link, b) in chain.links() {
                let (i, j) = (
                    space.index_of_inst(a).unwrap(),
                    space.index_of_inst(b).unwrap(),
                );
                order.set(i, j);
                if link == Link::Tied {
                    order.set(j, i);
                }
            }
        }
        order.transitive_closure();
        Ok(Rule {
            condition,
            chains,
            space,
            order,
        })
    }

    /// `⊤ : i₀ > i₁ > ...`
    pub fn linear(schema: &Schema, label: AttrSet, order: Vec<Instantiation>) -> Result<Self> {
        let chain =
            Chain::strict(order).ok_or_else(|| Error::MalformedTree("empty order".into()))?;
        Rule::new(schema, label, Formula::True, vec![chain])
    }

    pub fn condition(&self) -> &Formula {
        &self.condition
    }

    pub fn chains(&self) -> &[Chain] {
        &self.chains
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    /// The closed order over label instantiations, indexed through [`Rule::space`].
    pub fn order(&self) -> &BitMatrix {
        &self.order
    }

    pub fn label_of(&self, o: &Alternative, o2: &Alternative) -> RelationLabel {
        let (i, j) = (self.space.index_of(o), self.space.index_of(o2));
        RelationLabel::from_pair(self.order.get(i, j), self.order.get(j, i))
    }

    /// Whether the rule ties `o`'s label instantiation with a different one.
    pub fn has_tie_partner(&self, o: &Alternative) -> bool {
        let i = self.space.index_of(o);
        (0..self.space.size()).any(|j| j != i && self.order.get(i, j) && self.order.get(j, i))
    }

    pub fn is_antisymmetric(&self) -> bool {
        let n = self.space.size();
        (0..n).all(|i| (0..i).all(|j| !(self.order.get(i, j) && self.order.get(j, i))))
    }

    pub fn is_linear(&self) -> bool {
        let n = self.space.size();
        (0..n).all(|i| (0..i).all(|j| self.order.get(i, j) != self.order.get(j, i)))
    }

    /// `>` links whose reverse is implied by the rest of the rule.
    fn contradicted_links(&self) -> Vec<(Instantiation, Instantiation)> {
        let mut out = Vec::new();
        for chain in &self.chains {
            for (a, link, b) in chain.links() {
                let (i, j) = (
                    self.space.index_of_inst(a).unwrap(),
                    self.space.index_of_inst(b).unwrap(),
                );
                if link == Link::Better && self.order.get(j, i) {
                    out.push((a.clone(), b.clone()));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Children {
    Leaf,
    /// One child reached by an unlabelled edge.
    Single(Box<LpNode>),
    /// One child per instantiation of the node label, in input order.
    Branches(Vec<(Instantiation, LpNode)>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpNode {
    pub label: AttrSet,
    pub rules: Vec<Rule>,
    pub children: Children,
}

impl LpNode {
    pub fn leaf(label: AttrSet, rules: Vec<Rule>) -> Self {
        LpNode {
            label,
            rules,
            children: Children::Leaf,
        }
    }

    /// The rule whose condition `o` satisfies, first match.
    pub fn rule_for(&self, o: &Alternative) -> Option<&Rule> {
        self.rules.iter().find(|r| r.condition.holds(o))
    }

    /// The child `o` descends into, if any.
    pub fn child_for(&self, o: &Alternative) -> Option<&LpNode> {
        match &self.children {
            Children::Leaf => None,
            Children::Single(c) => Some(c),
            Children::Branches(bs) => bs.iter().find(|(l, _)| o.extends(l)).map(|(_, c)| c),
        }
    }

    /// Number of nodes in this subtree.
    pub fn count(&self) -> usize {
        1 + match &self.children {
            Children::Leaf => 0,
            Children::Single(c) => c.count(),
            Children::Branches(bs) => bs.iter().map(|(_, c)| c.count()).sum(),
        }
    }

    /// Largest label size in this subtree.
    pub fn width(&self) -> usize {
        let below = match &self.children {
            Children::Leaf => 0,
            Children::Single(c) => c.width(),
            Children::Branches(bs) => bs.iter().map(|(_, c)| c.width()).max().unwrap_or(0),
        };
        self.label.len().max(below)
    }
}

/// Where a node sits: `Anc(N)`, `NonInst(N)`, and `inst(N)` over `Inst(N)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NodeContext {
    pub anc: AttrSet,
    pub non_inst: AttrSet,
    pub inst: Instantiation,
}

impl NodeContext {
    pub fn root() -> Self {
        NodeContext::default()
    }

    pub fn inst_vars(&self) -> AttrSet {
        self.inst.vars()
    }

    /// Context of a child reached through an unlabelled edge below a node labelled `label`.
    pub fn below_single(&self, label: AttrSet) -> Self {
        NodeContext {
            anc: self.anc.union(label),
            non_inst: self.non_inst.union(label),
            inst: self.inst.clone(),
        }
    }

    /// Context of a child reached through the edge labelled `edge`.
    pub fn below_edge(&self, edge: &Instantiation) -> Self {
        NodeContext {
            anc: self.anc.union(edge.vars()),
            non_inst: self.non_inst,
            inst: self
                .inst
                .merge(edge)
                .expect("edge labels bind fresh attributes"),
        }
    }
}

/// A structural problem found by [`LpTree::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Edges from the root, `/` for the root itself.
    pub path: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpTree {
    schema: Schema,
    root: LpNode,
}

impl LpTree {
    pub fn new(schema: Schema, root: LpNode) -> Self {
        LpTree { schema, root }
    }

    /// Build and validate in one step.
    pub fn validated(schema: Schema, root: LpNode) -> Result<Self> {
        let t = LpTree::new(schema, root);
        t.validate().map_err(|v| {
            Error::MalformedTree(
                v.iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join("; "),
            )
        })?;
        Ok(t)
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn root(&self) -> &LpNode {
        &self.root
    }

    pub fn node_count(&self) -> usize {
        self.root.count()
    }

    /// `k` of the smallest `k`-LPT class containing the tree.
    pub fn width(&self) -> usize {
        self.root.width()
    }

    /// Visit every node with its context, parents before children, branches in order.
    pub fn visit<'a>(&'a self, mut f: impl FnMut(&'a LpNode, &NodeContext)) {
        fn go<'a>(n: &'a LpNode, ctx: &NodeContext, f: &mut impl FnMut(&'a LpNode, &NodeContext)) {
            f(n, ctx);
            match &n.children {
                Children::Leaf => {}
                Children::Single(c) => go(c, &ctx.below_single(n.label), f),
                Children::Branches(bs) => {
                    for (edge, c) in bs {
                        if let Some(inst) = ctx.inst.merge(edge) {
                            let sub = NodeContext {
                                anc: ctx.anc.union(n.label),
                                non_inst: ctx.non_inst,
                                inst,
                            };
                            go(c, &sub, f);
                        }
                    }
                }
            }
        }
        go(&self.root, &NodeContext::root(), &mut f);
    }

    /// The nodes on the branch of `o`, root first, each with its context.
    pub fn branch<'a>(&'a self, o: &Alternative) -> Vec<(&'a LpNode, NodeContext)> {
        let mut out = Vec::new();
        let mut node = &self.root;
        let mut ctx = NodeContext::root();
        loop {
            let next = match &node.children {
                Children::Leaf => None,
                Children::Single(c) => Some((&**c, ctx.below_single(node.label))),
                Children::Branches(bs) => bs
                    .iter()
                    .find(|(l, _)| o.extends(l))
                    .map(|(l, c)| (c, ctx.below_edge(l))),
            };
            out.push((node, ctx));
            match next {
                Some((c, sub)) => {
                    node = c;
                    ctx = sub;
                }
                None => return out,
            }
        }
    }

    /// Check the structural constraints; every problem is reported with its path.
    pub fn validate(&self) -> Result<(), Vec<Violation>> {
        let mut out = Vec::new();
        self.validate_node(&self.root, &NodeContext::root(), "/".to_string(), &mut out);
        if out.is_empty() {
            Ok(())
        } else {
            Err(out)
        }
    }

    fn validate_node(&self, n: &LpNode, ctx: &NodeContext, path: String, out: &mut Vec<Violation>) {
        let schema = &self.schema;
        let mut report = |message: String| {
            out.push(Violation {
                path: path.clone(),
                message,
            })
        };
        if n.label.is_empty() {
            report("node label is empty".into());
        }
        if !n.label.is_subset(schema.all()) {
            report("node label mentions unknown attributes".into());
            return;
        }
        let repeated = n.label.intersection(ctx.anc);
        if !repeated.is_empty() {
            report(format!(
                "attribute repeated on branch: {}",
                schema.render_set(repeated)
            ));
        }
        let mut cond_vars = AttrSet::empty();
        for (i, r) in n.rules.iter().enumerate() {
            if r.space.attrs() != n.label {
                report(format!(
                    "rule {} orders a set other than the node label",
                    i + 1
                ));
            }
            let vars = r.condition.vars();
            if !vars.is_subset(ctx.non_inst) {
                report(format!(
                    "rule {} condition mentions {}, outside the unlabelled ancestors",
                    i + 1,
                    schema.render_set(vars.difference(ctx.non_inst))
                ));
            }
            cond_vars = cond_vars.union(vars);
            for (a, b) in r.contradicted_links() {
                report(format!(
                    "rule {} states {} > {} but also the converse",
                    i + 1,
                    schema.render_instantiation(&a),
                    schema.render_instantiation(&b)
                ));
            }
        }
        let cond_vars = cond_vars.intersection(ctx.non_inst);
        if n.rules.is_empty() {
            report("rule multiplicity: the table is empty".into());
        } else if schema
            .count_instantiations(cond_vars)
            .is_none_or(|c| c > 1 << 20)
        {
            report("rule multiplicity: conditions range over too many attributes to check".into());
        } else {
            for u in schema.instantiations(cond_vars) {
                let hits = n
                    .rules
                    .iter()
                    .filter(|r| {
                        r.condition.vars().is_subset(ctx.non_inst)
                            && r.condition.eval(&u).unwrap_or(false)
                    })
                    .count();
                if hits != 1 {
                    let u_text = if u.is_empty() {
                        "every context".to_string()
                    } else {
                        format!("`{}`", schema.render_instantiation(&u))
                    };
                    report(format!("rule multiplicity: {hits} rules apply to {u_text}"));
                    break;
                }
            }
        }
        match &n.children {
            Children::Leaf => {}
            Children::Single(c) => {
                let sub = format!("{}*", sep(&path));
                self.validate_node(c, &ctx.below_single(n.label), sub, out);
            }
            Children::Branches(bs) => {
                let expected = schema.count_instantiations(n.label);
                if expected != Some(bs.len() as u128) {
                    out.push(Violation {
                        path: path.clone(),
                        message: format!(
                            "edge labels: {} edges for {} instantiations of {{{}}}",
                            bs.len(),
                            expected.map_or("too many".into(), |e| e.to_string()),
                            schema.render_set(n.label)
                        ),
                    });
                }
                for (i, (edge, c)) in bs.iter().enumerate() {
                    let edge_text = schema.render_instantiation(edge);
                    if edge.vars() != n.label || schema.check_instantiation(edge).is_err() {
                        out.push(Violation {
                            path: path.clone(),
                            message: format!(
                                "edge label `{edge_text}` does not instantiate the node label"
                            ),
                        });
                        continue;
                    }
                    if bs[..i].iter().any(|(e, _)| e == edge) {
                        out.push(Violation {
                            path: path.clone(),
                            message: format!("edge label `{edge_text}` is repeated"),
                        });
                        continue;
                    }
                    let Some(inst) = ctx.inst.merge(edge) else {
                        continue;
                    };
                    let sub = NodeContext {
                        anc: ctx.anc.union(n.label),
                        non_inst: ctx.non_inst,
                        inst,
                    };
                    self.validate_node(c, &sub, format!("{}{edge_text}", sep(&path)), out);
                }
            }
        }
    }
}

fn sep(path: &str) -> String {
    if path == "/" {
        "/".into()
    } else {
        format!("{path}/")
    }
}
