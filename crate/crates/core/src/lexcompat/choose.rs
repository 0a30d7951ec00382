use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use crate::error::{Error, Result};
use crate::lptree::NodeContext;
use crate::model::{
    consistent_with, AttrSet, CpStatement, CpTheory, Instantiation, Schema, Subspace,
};

/// Whether `s` may sanction a pair decided at a node labelled `label` in context `ctx`.
/// With no label only the first two conditions are tested.
pub fn relevant(
    schema: &Schema,
    s: &CpStatement,
    ctx: &NodeContext,
    label: Option<AttrSet>,
) -> bool {
    s.swapped().is_disjoint(ctx.anc)
        && consistent_with(schema, s.condition(), &ctx.inst)
        && label.is_none_or(|l| !s.swapped().is_disjoint(l))
}

/// `φ(N)`: statements whose condition is consistent with the path and whose
/// swapped attributes are all below the node.
pub fn phi_at_node<'a>(t: &'a CpTheory, ctx: &NodeContext) -> Vec<&'a CpStatement> {
    t.statements()
        .iter()
        .filter(|s| relevant(t.schema(), s, ctx, None))
        .collect()
}

/// A node label chosen for a theory: attributes `T` and a linear order over
/// their instantiations, best first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateLabel {
    pub attrs: AttrSet,
    pub order: Vec<Instantiation>,
}

impl CandidateLabel {
    /// Position of `o[T]` in the order, 0 being the best.
    pub fn position(&self, inst: &Instantiation) -> Option<usize> {
        self.order
            .iter()
            .position(|i| inst.restrict(self.attrs) == *i)
    }
}

/// Strict preferences `t > t'` required between instantiations of a candidate label.
#[derive(Debug, Clone)]
pub struct ForcedPairGraph {
    space: Subspace,
    edges: BTreeSet<(usize, usize)>,
}

impl ForcedPairGraph {
    pub fn new(space: Subspace) -> Self {
        ForcedPairGraph {
            space,
            edges: BTreeSet::new(),
        }
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn add(&mut self, t: &Instantiation, t2: &Instantiation) {
        let i = self
            .space
            .index_of_inst(t)
            .expect("forced pair over the label");
        let j = self
            .space
            .index_of_inst(t2)
            .expect("forced pair over the label");
        self.edges.insert((i, j));
    }

    /// A linear order containing every edge, or `None` if the edges contain a
    /// cycle. Among the available sources the smallest index always goes first.
    pub fn linearize(&self) -> Option<Vec<usize>> {
        let n = self.space.size();
        let mut indegree = vec![0usize; n];
        let mut out_edges = vec![Vec::new(); n];
        for &(i, j) in &self.edges {
            if i == j {
                return None;
            }
            indegree[j] += 1;
            out_edges[i].push(j);
        }
        let mut ready: BinaryHeap<Reverse<usize>> =
            (0..n).filter(|&i| indegree[i] == 0).map(Reverse).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(Reverse(i)) = ready.pop() {
            order.push(i);
            for &j in &out_edges[i] {
                indegree[j] -= 1;
                if indegree[j] == 0 {
                    ready.push(Reverse(j));
                }
            }
        }
        (order.len() == n).then_some(order)
    }
}

/// Forced pairs of one statement for candidate `T`: for every `x` over the
/// part of `T` outside `V ∪ W` that is consistent with the condition and the
/// path, and every `v₁`, `v₂` over `T ∩ V`, `x v₁ w[T] > x v₂ w'[T]`.
fn add_forced_pairs(
    schema: &Schema,
    s: &CpStatement,
    ctx: &NodeContext,
    label: AttrSet,
    g: &mut ForcedPairGraph,
) {
    let tw = label.intersection(s.swapped());
    let tv = label.intersection(s.free());
    let tr = label.difference(tw).difference(tv);
    let (wb, ww) = (s.better().restrict(tw), s.worse().restrict(tw));
    let vs: Vec<Instantiation> = schema.instantiations(tv).collect();
    for x in schema.instantiations(tr) {
        let Some(with_path) = ctx.inst.merge(&x) else {
            continue;
        };
        if !consistent_with(schema, s.condition(), &with_path) {
            continue;
        }
        let xb = x.merge(&wb).expect("disjoint");
        let xw = x.merge(&ww).expect("disjoint");
        for v1 in &vs {
            let t = xb.merge(v1).expect("disjoint");
            for v2 in &vs {
                g.add(&t, &xw.merge(v2).expect("disjoint"));
            }
        }
    }
}

/// Candidate label sets: sizes `1..=k`, each size in lexicographic order.
fn candidates(free: AttrSet, k: usize) -> impl Iterator<Item = AttrSet> {
    let attrs = free.to_vec();
    let max = k.min(attrs.len());
    (1..=max).flat_map(move |size| Combinations::new(attrs.clone(), size))
}

struct Combinations {
    items: Vec<usize>,
    idx: Option<Vec<usize>>,
}

impl Combinations {
    fn new(items: Vec<usize>, size: usize) -> Self {
        let idx = (size <= items.len()).then(|| (0..size).collect());
        Combinations { items, idx }
    }
}

impl Iterator for Combinations {
    type Item = AttrSet;

    fn next(&mut self) -> Option<AttrSet> {
        let idx = self.idx.as_mut()?;
        let out = idx.iter().map(|&i| self.items[i]).collect();
        let n = self.items.len();
        let size = idx.len();
        let mut i = size;
        loop {
            if i == 0 {
                self.idx = None;
                break;
            }
            i -= 1;
            if idx[i] < n - size + i {
                idx[i] += 1;
                for j in i + 1..size {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// The label Algorithm 1 puts at a node: the first candidate `T` (smallest
/// first) such that no statement of `φ(N)` leaving `T` unswapped has a free
/// attribute in `T`, and the forced pairs of the statements swapping inside
/// `T` are acyclic. `None` when no candidate qualifies.
pub fn choose_attribute(
    t: &CpTheory,
    ctx: &NodeContext,
    k: usize,
) -> Result<Option<CandidateLabel>> {
    let schema = t.schema();
    if k == 0 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    let free = schema.all().difference(ctx.anc);
    if free.is_empty() {
        return Err(Error::Precondition(
            "every attribute is already placed above the node".into(),
        ));
    }
    let phi = phi_at_node(t, ctx);
    'candidates: for label in candidates(free, k) {
        for s in &phi {
            if s.swapped().is_disjoint(label) && !s.free().is_disjoint(label) {
                continue 'candidates;
            }
        }
        let mut g = ForcedPairGraph::new(Subspace::new(schema, label)?);
        for s in phi.iter().filter(|s| !s.swapped().is_disjoint(label)) {
            add_forced_pairs(schema, s, ctx, label, &mut g);
        }
        if let Some(order) = g.linearize() {
            return Ok(Some(CandidateLabel {
                attrs: label,
                order: order.into_iter().map(|i| g.space().inst_at(i)).collect(),
            }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Formula;

    fn lit(a: usize, v: usize) -> Instantiation {
        Instantiation::new([(a, v)]).unwrap()
    }

    #[test]
    fn combinations_in_order() {
        let free: AttrSet = [1, 3, 4].into_iter().collect();
        let all: Vec<Vec<usize>> = candidates(free, 2).map(|s| s.to_vec()).collect();
        assert_eq!(
            all,
            vec![
                vec![1],
                vec![3],
                vec![4],
                vec![1, 3],
                vec![1, 4],
                vec![3, 4]
            ]
        );
    }

    #[test]
    fn contradictory_pairs_fail() {
        let s = Schema::from_names(&[("X", &["x", "nx"])]).unwrap();
        let a =
            CpStatement::new(&s, Formula::True, AttrSet::empty(), lit(0, 0), lit(0, 1)).unwrap();
        let b =
            CpStatement::new(&s, Formula::True, AttrSet::empty(), lit(0, 1), lit(0, 0)).unwrap();
        let t = CpTheory::new(s, vec![a, b]).unwrap();
        assert_eq!(choose_attribute(&t, &NodeContext::root(), 1).unwrap(), None);
    }

    #[test]
    fn free_attribute_is_postponed() {
        // X | {Y} : x > nx forbids Y at the root
        let s = Schema::from_names(&[("Y", &["y", "ny"]), ("X", &["x", "nx"])]).unwrap();
        let a = CpStatement::new(
            &s,
            Formula::True,
            AttrSet::singleton(0),
            lit(1, 1),
            lit(1, 0),
        )
        .unwrap();
        let t = CpTheory::new(s, vec![a]).unwrap();
        let c = choose_attribute(&t, &NodeContext::root(), 1)
            .unwrap()
            .unwrap();
        assert_eq!(c.attrs, AttrSet::singleton(1));
        assert_eq!(c.order, vec![lit(1, 1), lit(1, 0)]);
    }

    #[test]
    fn relevance() {
        let s = Schema::from_names(&[("A", &["a", "na"]), ("B", &["b", "nb"])]).unwrap();
        let st = CpStatement::new(
            &s,
            Formula::atom(0, 0),
            AttrSet::empty(),
            lit(1, 0),
            lit(1, 1),
        )
        .unwrap();
        let root = NodeContext::root();
        assert!(relevant(&s, &st, &root, Some(AttrSet::singleton(1))));
        assert!(!relevant(&s, &st, &root, Some(AttrSet::singleton(0))));
        let under_na = root.below_edge(&lit(0, 1));
        assert!(!relevant(&s, &st, &under_na, None));
        let below_b = root.below_edge(&lit(1, 0));
        assert!(!relevant(&s, &st, &below_b, None));
    }
}
