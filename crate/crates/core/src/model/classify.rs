use std::collections::BTreeSet;

use crate::model::schema::{AttrSet, Instantiation};
use crate::model::statement::CpTheory;

/// Directed graph over attribute indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DependencyGraph {
    vertices: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl DependencyGraph {
    pub fn new(vertices: usize) -> Self {
        DependencyGraph {
            vertices,
            edges: BTreeSet::new(),
        }
    }

    pub fn add_edge(&mut self, from: usize, to: usize) {
        self.edges.insert((from, to));
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<(usize, usize)> {
        &self.edges
    }

    pub fn has_edge(&self, from: usize, to: usize) -> bool {
        self.edges.contains(&(from, to))
    }

    pub fn parents(&self, x: usize) -> AttrSet {
        self.edges
            .iter()
            .filter(|e| e.1 == x)
            .map(|e| e.0)
            .collect()
    }

    pub fn is_acyclic(&self) -> bool {
        let mut indegree = vec![0usize; self.vertices];
        for &(_, y) in &self.edges {
            indegree[y] += 1;
        }
        let mut ready: Vec<usize> = (0..self.vertices).filter(|&v| indegree[v] == 0).collect();
        let mut removed = 0;
        while let Some(v) = ready.pop() {
            removed += 1;
            for &(_, y) in self.edges.range((v, 0)..(v + 1, 0)) {
                indegree[y] -= 1;
                if indegree[y] == 0 {
                    ready.push(y);
                }
            }
        }
        removed == self.vertices
    }

    /// Acyclic, and the underlying undirected multigraph is a forest
    /// (a pair of opposite edges counts as an undirected cycle).
    pub fn is_polytree(&self) -> bool {
        let mut parent: Vec<usize> = (0..self.vertices).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for &(x, y) in &self.edges {
            let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
            if rx == ry {
                return false;
            }
            parent[rx] = ry;
        }
        true
    }
}

/// `(X, Y)` is an edge iff some statement has `X ∈ Var(α)` and `Y ∈ Var(w)`,
/// or `X ∈ Var(w)` and `Y ∈ V`.
pub fn dependency_graph(t: &CpTheory) -> DependencyGraph {
    let mut g = DependencyGraph::new(t.schema().len());
    for s in t.statements() {
        let swapped = s.swapped();
        for x in s.condition_vars().iter() {
            for y in swapped.iter() {
                g.add_edge(x, y);
            }
        }
        for x in swapped.iter() {
            for y in s.free().iter() {
                g.add_edge(x, y);
            }
        }
    }
    g
}

/// Sublanguage membership of a theory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LanguageProfile {
    /// Largest `|W|` over all statements (0 for the empty theory).
    pub max_swap_width: usize,
    /// Every condition is `⊤` or a conjunction of atoms.
    pub conjunctive: bool,
    /// Every free part is empty.
    pub free_empty: bool,
    pub acyclic: bool,
    pub polytree: bool,
    /// The theory is exactly the statement set of some CP-net.
    pub cpnet: bool,
    pub size: usize,
}

pub fn classify(t: &CpTheory) -> LanguageProfile {
    let graph = dependency_graph(t);
    let max_swap_width = t
        .statements()
        .iter()
        .map(|s| s.swapped().len())
        .max()
        .unwrap_or(0);
    let conjunctive = t
        .statements()
        .iter()
        .all(|s| s.condition().is_conjunctive());
    let free_empty = t.statements().iter().all(|s| s.free().is_empty());
    let cpnet = max_swap_width == 1 && conjunctive && free_empty && cpnet_shaped(t, &graph);
    LanguageProfile {
        max_swap_width,
        conjunctive,
        free_empty,
        acyclic: graph.is_acyclic(),
        polytree: graph.is_polytree(),
        cpnet,
        size: t.size(),
    }
}

/// For every attribute `X` with parents `U`, the statements swapping `X` are
/// grouped by their (full) instantiation of `U`; each of the `|U|` groups must
/// chain the whole domain of `X` exactly once.
fn cpnet_shaped(t: &CpTheory, graph: &DependencyGraph) -> bool {
    let schema = t.schema();
    for x in 0..schema.len() {
        let parents = graph.parents(x);
        let d = schema.domain_size(x);
        let mut groups: Vec<(Instantiation, Vec<(usize, usize)>)> = Vec::new();
        for s in t.statements().iter().filter(|s| s.swapped().contains(x)) {
            let Some(lits) = s.condition().as_conjunction() else {
                return false;
            };
            let Ok(u) = Instantiation::new(lits) else {
                return false;
            };
            if u.vars() != parents {
                return false;
            }
            let pair = (s.better().get(x).unwrap(), s.worse().get(x).unwrap());
            match groups.iter_mut().find(|(c, _)| *c == u) {
                Some((_, pairs)) => pairs.push(pair),
                None => groups.push((u, vec![pair])),
            }
        }
        if schema.count_instantiations(parents) != Some(groups.len() as u128) {
            return false;
        }
        if !groups
            .iter()
            .all(|(_, pairs)| is_hamiltonian_chain(pairs, d))
        {
            return false;
        }
    }
    true
}

fn is_hamiltonian_chain(pairs: &[(usize, usize)], d: usize) -> bool {
    if pairs.len() != d - 1 {
        return false;
    }
    let mut next = vec![None; d];
    let mut has_pred = vec![false; d];
    for &(a, b) in pairs {
        if next[a].is_some() || has_pred[b] {
            return false;
        }
        next[a] = Some(b);
        has_pred[b] = true;
    }
    let Some(mut v) = (0..d).find(|&v| !has_pred[v]) else {
        return false;
    };
    let mut visited = 1;
    while let Some(w) = next[v] {
        v = w;
        visited += 1;
        if visited > d {
            return false;
        }
    }
    visited == d
}
