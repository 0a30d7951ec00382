use crate::error::{Error, Result};
use crate::model::classify::{dependency_graph, DependencyGraph};
use crate::model::formula::Formula;
use crate::model::schema::{AttrSet, Instantiation, Schema};
use crate::model::statement::{CpStatement, CpTheory};

/// Conditional preference table of one attribute.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CpTable {
    pub parents: AttrSet,
    /// One rule per parent instantiation: the domain of the attribute listed best first.
    pub rules: Vec<(Instantiation, Vec<usize>)>,
}

/// A CP-net: one table per attribute, indexed like the schema.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CpNet {
    schema: Schema,
    tables: Vec<CpTable>,
}

impl CpNet {
    pub fn new(schema: Schema, tables: Vec<CpTable>) -> Result<Self> {
        if tables.len() != schema.len() {
            return Err(Error::MalformedNet(format!(
                "{} tables for {} attributes",
                tables.len(),
                schema.len()
            )));
        }
        for (x, table) in tables.iter().enumerate() {
            let name = schema.name(x);
            if table.parents.contains(x) || !table.parents.is_subset(schema.all()) {
                return Err(Error::MalformedNet(format!("bad parent set for `{name}`")));
            }
            for u in schema.instantiations(table.parents) {
                let n = table.rules.iter().filter(|(c, _)| *c == u).count();
                if n != 1 {
                    return Err(Error::MalformedNet(format!(
                        "table of `{name}` has {n} rules for parent context {{{}}}",
                        schema.render_instantiation(&u)
                    )));
                }
            }
            for (u, order) in &table.rules {
                if u.vars() != table.parents {
                    return Err(Error::MalformedNet(format!(
                        "rule context of `{name}` does not instantiate exactly its parents"
                    )));
                }
                schema.check_instantiation(u)?;
                let mut seen = vec![false; schema.domain_size(x)];
                for &v in order {
                    if v >= seen.len() || std::mem::replace(&mut seen[v], true) {
                        return Err(Error::MalformedNet(format!(
                            "rule order of `{name}` is not a permutation"
                        )));
                    }
                }
                if seen.iter().any(|s| !s) {
                    return Err(Error::MalformedNet(format!(
                        "rule order of `{name}` is not total"
                    )));
                }
            }
        }
        Ok(CpNet { schema, tables })
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn tables(&self) -> &[CpTable] {
        &self.tables
    }

    /// The edges `(parent, child)` of the net's graph.
    pub fn graph(&self) -> DependencyGraph {
        let mut g = DependencyGraph::new(self.schema.len());
        for (x, t) in self.tables.iter().enumerate() {
            for p in t.parents.iter() {
                g.add_edge(p, x);
            }
        }
        g
    }

    /// `u : x ≥ x'` for each rule and each pair of consecutive values of its order.
    pub fn to_statements(&self) -> CpTheory {
        let mut out = Vec::new();
        for (x, table) in self.tables.iter().enumerate() {
            for (u, order) in &table.rules {
                let cond = Formula::from_instantiation(u);
                for w in order.windows(2) {
                    let st = CpStatement::new(
                        &self.schema,
                        cond.clone(),
                        AttrSet::empty(),
                        Instantiation::new([(x, w[0])]).expect("single binding"),
                        Instantiation::new([(x, w[1])]).expect("single binding"),
                    )
                    .expect("net rules yield well-formed statements");
                    out.push(st);
                }
            }
        }
        CpTheory::new(self.schema.clone(), out).expect("statements share the net's schema")
    }

    /// Expand a unary theory without free attributes into the equivalent net:
    /// parents come from the dependency graph, and the rule for each parent
    /// context is the order induced by the statements whose condition holds in
    /// that context. Fails unless every such order is linear.
    pub fn from_theory(t: &CpTheory) -> Result<CpNet> {
        let schema = t.schema();
        if let Some(s) = t
            .statements()
            .iter()
            .find(|s| s.swapped().len() != 1 || !s.free().is_empty())
        {
            return Err(Error::MalformedNet(format!(
                "statement swapping {{{}}} is not unary with an empty free part",
                schema.render_set(s.swapped())
            )));
        }
        let graph = dependency_graph(t);
        let mut tables = Vec::with_capacity(schema.len());
        for x in 0..schema.len() {
            let parents = graph.parents(x);
            let relevant: Vec<&CpStatement> = t
                .statements()
                .iter()
                .filter(|s| s.swapped().contains(x))
                .collect();
            let d = schema.domain_size(x);
            let mut rules = Vec::new();
            for u in schema.instantiations(parents) {
                let mut geq = vec![vec![false; d]; d];
                for (v, row) in geq.iter_mut().enumerate() {
                    row[v] = true;
                }
                for s in &relevant {
                    if s.condition().eval(&u)? {
                        geq[s.better().get(x).unwrap()][s.worse().get(x).unwrap()] = true;
                    }
                }
                for k in 0..d {
                    for i in 0..d {
                        if geq[i][k] {
                            for j in 0..d {
                                if geq[k][j] {
                                    geq[i][j] = true;
                                }
                            }
                        }
                    }
                }
                let linear = (0..d).all(|i| (0..d).all(|j| i == j || geq[i][j] != geq[j][i]));
                if !linear {
                    return Err(Error::MalformedNet(format!(
                        "statements do not induce a linear order on `{}` in context {{{}}}",
                        schema.name(x),
                        schema.render_instantiation(&u)
                    )));
                }
                let mut order: Vec<usize> = (0..d).collect();
                // the best value dominates the most others
                order.sort_by_key(|&v| std::cmp::Reverse(geq[v].iter().filter(|b| **b).count()));
                rules.push((u, order));
            }
            tables.push(CpTable { parents, rules });
        }
        CpNet::new(schema.clone(), tables)
    }
}
