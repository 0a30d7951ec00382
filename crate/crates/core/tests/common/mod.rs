//! Random generators and a naive reference semantics shared by the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use cpref::lexcompat::Cnf;
use cpref::lptree::{Chain, Children, Link, LpNode, LpTree, NodeContext, Rule};
use cpref::model::{
    Alternative, AttrSet, Attribute, CpStatement, CpTheory, Formula, Instantiation, Schema,
};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub fn theory(name: &str) -> CpTheory {
    cpref::textio::parse_theory(&fixture(name)).unwrap_or_else(|d| panic!("{name}: {d}"))
}

/// `A=a,B=b` against the schema.
pub fn alt(schema: &Schema, text: &str) -> Alternative {
    cpref::textio::data::parse_alternative(schema, text).unwrap_or_else(|d| panic!("{text}: {d}"))
}

pub fn schema(rng: &mut Rng8, max_attrs: usize, max_dom: usize) -> Schema {
    let n = rng.gen_range(1..=max_attrs);
    let attrs = (0..n)
        .map(|i| {
            let d = rng.gen_range(2..=max_dom);
            Attribute::new(format!("X{i}"), (0..d).map(|v| format!("x{i}_{v}")))
        })
        .collect();
    Schema::new(attrs).unwrap()
}

/// Schema with exactly `sizes.len()` attributes of the given domain sizes.
pub fn schema_of(sizes: &[usize]) -> Schema {
    let attrs = sizes
        .iter()
        .enumerate()
        .map(|(i, &d)| Attribute::new(format!("X{i}"), (0..d).map(|v| format!("x{i}_{v}"))))
        .collect();
    Schema::new(attrs).unwrap()
}

pub fn inst(rng: &mut Rng8, schema: &Schema, set: AttrSet) -> Instantiation {
    Instantiation::new(
        set.iter()
            .map(|a| (a, rng.gen_range(0..schema.domain_size(a)))),
    )
    .unwrap()
}

fn subset(rng: &mut Rng8, of: AttrSet, p: f64) -> AttrSet {
    let mut s = AttrSet::empty();
    for a in of.iter() {
        if rng.gen_bool(p) {
            s.insert(a);
        }
    }
    s
}

fn pick(rng: &mut Rng8, of: AttrSet) -> usize {
    let v = of.to_vec();
    v[rng.gen_range(0..v.len())]
}

/// A formula whose variables all lie in `vars`.
pub fn formula(rng: &mut Rng8, schema: &Schema, vars: AttrSet, depth: usize) -> Formula {
    if vars.is_empty() {
        return Formula::True;
    }
    let atom = |rng: &mut Rng8| {
        let a = pick(rng, vars);
        Formula::atom(a, rng.gen_range(0..schema.domain_size(a)))
    };
    if depth == 0 {
        return atom(rng);
    }
    match rng.gen_range(0..8) {
        0 | 1 => atom(rng),
        2 => Formula::not(formula(rng, schema, vars, depth - 1)),
        3 | 4 => Formula::and(
            formula(rng, schema, vars, depth - 1),
            formula(rng, schema, vars, depth - 1),
        ),
        5 => Formula::or(
            formula(rng, schema, vars, depth - 1),
            formula(rng, schema, vars, depth - 1),
        ),
        6 => Formula::implies(
            formula(rng, schema, vars, depth - 1),
            formula(rng, schema, vars, depth - 1),
        ),
        _ => Formula::iff(
            formula(rng, schema, vars, depth - 1),
            formula(rng, schema, vars, depth - 1),
        ),
    }
}

pub fn statement(rng: &mut Rng8, schema: &Schema) -> CpStatement {
    let all = schema.all();
    let mut w = AttrSet::singleton(pick(rng, all));
    if rng.gen_bool(0.25) {
        w = w.union(subset(rng, all.difference(w), 0.3));
    }
    let rest = all.difference(w);
    let v = if rng.gen_bool(0.35) {
        subset(rng, rest, 0.4)
    } else {
        AttrSet::empty()
    };
    let u = subset(rng, rest.difference(v), 0.5);
    let condition = if u.is_empty() || rng.gen_bool(0.2) {
        Formula::True
    } else if rng.gen_bool(0.5) {
        Formula::from_instantiation(&inst(rng, schema, u))
    } else {
        formula(rng, schema, u, 2)
    };
    let better = inst(rng, schema, w);
    let worse = Instantiation::new(better.iter().map(|(a, x)| {
        let d = schema.domain_size(a);
        (a, (x + rng.gen_range(1..d)) % d)
    }))
    .unwrap();
    CpStatement::new(schema, condition, v, better, worse).unwrap()
}

pub fn random_theory(rng: &mut Rng8, schema: &Schema, max_statements: usize) -> CpTheory {
    let n = rng.gen_range(0..=max_statements);
    let stmts = (0..n).map(|_| statement(rng, schema)).collect();
    CpTheory::new(schema.clone(), stmts).unwrap()
}

/// Shape knobs for random trees.
#[derive(Debug, Clone, Copy)]
pub struct TreeShape {
    pub k: usize,
    pub complete: bool,
    /// Allow `~` links in incomplete rule orders.
    pub ties: bool,
}

pub fn lptree(rng: &mut Rng8, schema: &Schema, shape: TreeShape) -> LpTree {
    let root = node(rng, schema, &NodeContext::root(), shape);
    LpTree::new(schema.clone(), root)
}

fn node(rng: &mut Rng8, schema: &Schema, ctx: &NodeContext, shape: TreeShape) -> LpNode {
    let remaining = schema.all().difference(ctx.anc);
    let mut order = remaining.to_vec();
    order.shuffle(rng);
    let size = rng.gen_range(1..=shape.k.min(order.len()));
    let label = order[..size].iter().fold(AttrSet::empty(), |mut s, &a| {
        s.insert(a);
        s
    });
    let rules = rules(rng, schema, label, ctx, shape);
    let rest = remaining.difference(label);
    let stop = rest.is_empty() || (!shape.complete && rng.gen_bool(0.2));
    let children = if stop {
        Children::Leaf
    } else if rng.gen_bool(0.5) && schema.count_instantiations(label).unwrap() <= 9 {
        Children::Branches(
            schema
                .instantiations(label)
                .map(|e| {
                    let c = node(rng, schema, &ctx.below_edge(&e), shape);
                    (e, c)
                })
                .collect(),
        )
    } else {
        Children::Single(Box::new(node(rng, schema, &ctx.below_single(label), shape)))
    };
    LpNode {
        label,
        rules,
        children,
    }
}

fn rules(
    rng: &mut Rng8,
    schema: &Schema,
    label: AttrSet,
    ctx: &NodeContext,
    shape: TreeShape,
) -> Vec<Rule> {
    let order = |rng: &mut Rng8| -> Vec<Chain> {
        let mut items: Vec<Instantiation> = schema.instantiations(label).collect();
        items.shuffle(rng);
        if shape.complete {
            return vec![Chain::strict(items).unwrap()];
        }
        if rng.gen_bool(0.3) {
            items.truncate(rng.gen_range(1..=items.len()));
        }
        let mut chains = Vec::new();
        let mut it = items.into_iter();
        let mut cur = Chain::single(it.next().unwrap());
        for i in it {
            match rng.gen_range(0..5) {
                0 => chains.push(std::mem::replace(&mut cur, Chain::single(i))),
                1 if shape.ties => cur.rest.push((Link::Tied, i)),
                _ => cur.rest.push((Link::Better, i)),
            }
        }
        chains.push(cur);
        chains
    };
    if ctx.non_inst.is_empty() || rng.gen_bool(0.4) {
        return vec![Rule::new(schema, label, Formula::True, order(rng)).unwrap()];
    }
    let parent = pick(rng, ctx.non_inst);
    let d = schema.domain_size(parent);
    if rng.gen_bool(0.5) {
        let v = rng.gen_range(0..d);
        let yes = Formula::atom(parent, v);
        vec![
            Rule::new(schema, label, yes.clone(), order(rng)).unwrap(),
            Rule::new(schema, label, Formula::not(yes), order(rng)).unwrap(),
        ]
    } else {
        (0..d)
            .map(|v| Rule::new(schema, label, Formula::atom(parent, v), order(rng)).unwrap())
            .collect()
    }
}

pub fn lit(a: usize, v: usize) -> Instantiation {
    Instantiation::new([(a, v)]).unwrap()
}

/// Chain of `n` binary attributes under unlabelled edges; below the root each
/// attribute prefers the value its predecessor took.
pub fn follow_the_leader(n: usize) -> LpTree {
    let s = schema_of(&vec![2; n]);
    let mut node: Option<LpNode> = None;
    for a in (0..n).rev() {
        let label = AttrSet::singleton(a);
        let rules = if a == 0 {
            vec![Rule::linear(&s, label, vec![lit(a, 0), lit(a, 1)]).unwrap()]
        } else {
            (0..2)
                .map(|v| {
                    let chain = Chain::strict([lit(a, v), lit(a, 1 - v)]).unwrap();
                    Rule::new(&s, label, Formula::atom(a - 1, v), vec![chain]).unwrap()
                })
                .collect()
        };
        node = Some(LpNode {
            label,
            rules,
            children: match node {
                Some(c) => Children::Single(Box::new(c)),
                None => Children::Leaf,
            },
        });
    }
    LpTree::validated(s, node.unwrap()).unwrap()
}

/// Random preorder given as a relation matrix over alternative ranks.
pub fn preorder_matrix(rng: &mut Rng8, n: usize) -> Vec<Vec<bool>> {
    let mut m = vec![vec![false; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = true;
    }
    let density = rng.gen_range(0.0..0.25);
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.gen_bool(density) {
                m[i][j] = true;
            }
        }
    }
    close(&mut m);
    m
}

pub fn cnf(rng: &mut Rng8, max_vars: usize, max_clauses: usize) -> Cnf {
    let vars = rng.gen_range(1..=max_vars);
    let m = rng.gen_range(1..=max_clauses);
    let clauses = (0..m)
        .map(|_| {
            let len = rng.gen_range(1..=3);
            (0..len)
                .map(|_| {
                    let v = rng.gen_range(1..=vars) as i64;
                    if rng.gen_bool(0.5) {
                        v
                    } else {
                        -v
                    }
                })
                .collect()
        })
        .collect();
    Cnf::new(vars, clauses).unwrap()
}

// Reference semantics, written from the definitions without the library's
// swap generation or closure code.

fn eval(f: &Formula, o: &[usize]) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(a, v) => o[*a] == *v,
        Formula::Not(g) => !eval(g, o),
        Formula::And(l, r) => eval(l, o) && eval(r, o),
        Formula::Or(l, r) => eval(l, o) || eval(r, o),
        Formula::Implies(l, r) => !eval(l, o) || eval(r, o),
        Formula::Iff(l, r) => eval(l, o) == eval(r, o),
    }
}

pub fn universe(schema: &Schema) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for a in 0..schema.len() {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..schema.domain_size(a)).map(move |v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out
}

fn naive_sanctions(s: &CpStatement, o: &[usize], o2: &[usize]) -> bool {
    let u = s.condition().vars();
    let v = s.free();
    let w = s.swapped();
    (0..o.len()).all(|a| {
        if u.contains(a) {
            o[a] == o2[a]
        } else if w.contains(a) {
            s.better().get(a) == Some(o[a]) && s.worse().get(a) == Some(o2[a])
        } else {
            v.contains(a) || o[a] == o2[a]
        }
    }) && eval(s.condition(), o)
}

pub fn close(m: &mut [Vec<bool>]) {
    let n = m.len();
    for k in 0..n {
        for i in 0..n {
            if m[i][k] {
                for j in 0..n {
                    if m[k][j] {
                        m[i][j] = true;
                    }
                }
            }
        }
    }
}

/// `m[i][j]` iff alternative `i` is at least as good as `j`, indices in
/// lexicographic order of value indices (first attribute most significant).
pub fn reference_relation(t: &CpTheory) -> Vec<Vec<bool>> {
    let alts = universe(t.schema());
    let n = alts.len();
    let mut m = vec![vec![false; n]; n];
    for i in 0..n {
        m[i][i] = true;
        for j in 0..n {
            if t.statements()
                .iter()
                .any(|s| naive_sanctions(s, &alts[i], &alts[j]))
            {
                m[i][j] = true;
            }
        }
    }
    close(&mut m);
    m
}

pub fn is_linear(m: &[Vec<bool>]) -> bool {
    (0..m.len()).all(|i| (0..i).all(|j| m[i][j] != m[j][i]))
}
