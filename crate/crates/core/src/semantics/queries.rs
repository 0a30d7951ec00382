use std::fmt;
use std::str::FromStr;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use crate::error::{Error, Result};
use crate::model::{Alternative, CpTheory};
use crate::semantics::preorder::ExplicitPreorder;
use crate::semantics::swaps::{closure_oracle, swap_graph};

/// `≥_t` is antisymmetric iff every strongly connected component of the
/// sanctioned-swap graph is a single alternative.
pub fn linearisable(t: &CpTheory, cap: u128) -> Result<bool> {
    let m = swap_graph(t, cap)?;
    let mut g: DiGraph<(), ()> = DiGraph::with_capacity(m.len(), 0);
    for _ in 0..m.len() {
        g.add_node(());
    }
    for i in 0..m.len() {
        for j in m.row(i) {
            g.add_edge(NodeIndex::new(i), NodeIndex::new(j), ());
        }
    }
    Ok(tarjan_scc(&g).iter().all(|c| c.len() == 1))
}

/// Whether the two theories induce the same preorder.
pub fn equivalent(t: &CpTheory, t2: &CpTheory, cap: u128) -> Result<bool> {
    if t.schema() != t2.schema() {
        return Err(Error::SchemaMismatch);
    }
    Ok(closure_oracle(t, cap)? == closure_oracle(t2, cap)?)
}

/// No statement sanctions a swap into `o`, i.e. no `o' ≠ o` has `o' ≥_t o`.
/// A scan of the statements; no search.
pub fn undominated_check(t: &CpTheory, o: &Alternative) -> bool {
    !t.statements().iter().any(|s| s.applies_below(o))
}

/// Some member of `CUT^{≥,o}`: the alternative a statement improves into `o` from,
/// obtained by rebinding the swapped attributes of `o` to the preferred side.
pub fn geq_cut_extract(t: &CpTheory, o: &Alternative) -> Option<Alternative> {
    t.statements()
        .iter()
        .find(|s| s.applies_below(o))
        .map(|s| o.assign(s.better()))
}

/// Optimality notions for a single alternative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OptimalityKind {
    /// Nothing is strictly better.
    WeaklyUndominated,
    /// Nothing else is at least as good.
    Undominated,
    /// At least as good as everything.
    Dominating,
    /// Strictly better than everything else.
    StronglyDominating,
}

impl OptimalityKind {
    pub const ALL: [OptimalityKind; 4] = [
        OptimalityKind::WeaklyUndominated,
        OptimalityKind::Undominated,
        OptimalityKind::Dominating,
        OptimalityKind::StronglyDominating,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            OptimalityKind::WeaklyUndominated => "weakly-undominated",
            OptimalityKind::Undominated => "undominated",
            OptimalityKind::Dominating => "dominating",
            OptimalityKind::StronglyDominating => "strongly-dominating",
        }
    }
}

impl fmt::Display for OptimalityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OptimalityKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        OptimalityKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown optimality kind `{s}`")))
    }
}

impl ExplicitPreorder {
    pub fn is_optimal_at(&self, i: usize, kind: OptimalityKind) -> bool {
        let n = self.len();
        match kind {
            OptimalityKind::WeaklyUndominated => {
                (0..n).all(|j| !(self.geq_at(j, i) && !self.geq_at(i, j)))
            }
            OptimalityKind::Undominated => (0..n).all(|j| j == i || !self.geq_at(j, i)),
            OptimalityKind::Dominating => (0..n).all(|j| self.geq_at(i, j)),
            OptimalityKind::StronglyDominating => {
                (0..n).all(|j| j == i || (self.geq_at(i, j) && !self.geq_at(j, i)))
            }
        }
    }

    /// `CUT^{R,o}`: every `o' ≠ o` with `o' R o`, where `R` is `>` when `strict`, else `≥`.
    pub fn cut(&self, o: &Alternative, strict: bool) -> Vec<Alternative> {
        let i = self.index(o);
        (0..self.len())
            .filter(|&j| j != i && self.geq_at(j, i) && (!strict || !self.geq_at(i, j)))
            .map(|j| self.alternative(j))
            .collect()
    }
}

/// Decide the requested optimality of `o`. The undominated check uses the
/// statement scan; the other kinds go through the oracle.
pub fn optimum_check(
    t: &CpTheory,
    o: &Alternative,
    kind: OptimalityKind,
    cap: u128,
) -> Result<bool> {
    t.schema().check_alternative(o)?;
    if kind == OptimalityKind::Undominated {
        return Ok(undominated_check(t, o));
    }
    let p = closure_oracle(t, cap)?;
    Ok(p.is_optimal_at(p.index(o), kind))
}

/// The first alternative (in rank order) of the requested kind, if any.
pub fn optimum_exists(
    t: &CpTheory,
    kind: OptimalityKind,
    cap: u128,
) -> Result<Option<Alternative>> {
    let p = closure_oracle(t, cap)?;
    Ok((0..p.len())
        .find(|&i| p.is_optimal_at(i, kind))
        .map(|i| p.alternative(i)))
}

/// Greedy TOP-p over a candidate set given a strict-preference test.
///
/// Candidates are deduplicated and sorted; at each step the smallest remaining
/// candidate that no remaining candidate beats is emitted. Every pair is tested once.
pub fn top_p_by<F>(
    candidates: &[Alternative],
    p: usize,
    mut strictly_better: F,
) -> Result<Vec<Alternative>>
where
    F: FnMut(&Alternative, &Alternative) -> Result<bool>,
{
    let mut s = candidates.to_vec();
    s.sort_unstable();
    s.dedup();
    if p >= s.len() {
        return Err(Error::Precondition(format!(
            "p = {p} must be smaller than the {} candidates",
            s.len()
        )));
    }
    let n = s.len();
    let mut beats = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                beats[i][j] = strictly_better(&s[i], &s[j])?;
            }
        }
    }
    let mut remaining = vec![true; n];
    let mut out = Vec::with_capacity(p);
    for _ in 0..p {
        let pick = (0..n)
            .find(|&c| remaining[c] && !(0..n).any(|r| remaining[r] && beats[r][c]))
            .ok_or_else(|| {
                Error::Precondition("strict preference is cyclic on the candidates".into())
            })?;
        remaining[pick] = false;
        out.push(s[pick].clone());
    }
    Ok(out)
}

/// TOP-p for any theory, with strict preference read off the oracle.
pub fn top_p_general(
    t: &CpTheory,
    s: &[Alternative],
    p: usize,
    cap: u128,
) -> Result<Vec<Alternative>> {
    for o in s {
        t.schema().check_alternative(o)?;
    }
    let oracle = closure_oracle(t, cap)?;
    top_p_by(s, p, |a, b| Ok(oracle.strictly_better(a, b)))
}

/// Whether `seq` answers TOP-p for `s` under the strict part of `oracle`.
pub fn satisfies_top_p(oracle: &ExplicitPreorder, s: &[Alternative], seq: &[Alternative]) -> bool {
    let distinct = seq.iter().enumerate().all(|(i, o)| !seq[..i].contains(o));
    distinct
        && seq.iter().all(|o| s.contains(o))
        && seq.iter().enumerate().all(|(i, oi)| {
            s.iter()
                .filter(|o2| oracle.strictly_better(o2, oi))
                .all(|o2| seq[..i].contains(o2))
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AttrSet, CpStatement, Formula, Instantiation, Schema};

    fn two_cycle() -> CpTheory {
        let s = Schema::from_names(&[("X", &["x", "nx"])]).unwrap();
        let x = Instantiation::new([(0, 0)]).unwrap();
        let nx = Instantiation::new([(0, 1)]).unwrap();
        let a =
            CpStatement::new(&s, Formula::True, AttrSet::empty(), x.clone(), nx.clone()).unwrap();
        let b = CpStatement::new(&s, Formula::True, AttrSet::empty(), nx, x).unwrap();
        CpTheory::new(s, vec![a, b]).unwrap()
    }

    #[test]
    fn two_cycle_is_not_linearisable() {
        let t = two_cycle();
        assert!(!linearisable(&t, 1 << 20).unwrap());
        assert_eq!(
            optimum_exists(&t, OptimalityKind::Undominated, 1 << 20).unwrap(),
            None
        );
        assert!(
            optimum_exists(&t, OptimalityKind::WeaklyUndominated, 1 << 20)
                .unwrap()
                .is_some()
        );
    }

    #[test]
    fn single_statement_dominating() {
        let s = Schema::from_names(&[("X", &["x", "nx"])]).unwrap();
        let st = CpStatement::new(
            &s,
            Formula::True,
            AttrSet::empty(),
            Instantiation::new([(0, 0)]).unwrap(),
            Instantiation::new([(0, 1)]).unwrap(),
        )
        .unwrap();
        let t = CpTheory::new(s, vec![st]).unwrap();
        let x = Alternative(vec![0]);
        for kind in OptimalityKind::ALL {
            assert!(optimum_check(&t, &x, kind, 1 << 20).unwrap(), "{kind}");
        }
        assert!(!optimum_check(
            &t,
            &Alternative(vec![1]),
            OptimalityKind::Dominating,
            1 << 20
        )
        .unwrap());
    }

    #[test]
    fn top_p_rejects_large_p() {
        let t = two_cycle();
        let s = vec![Alternative(vec![0]), Alternative(vec![1])];
        assert!(top_p_general(&t, &s, 2, 1 << 20).is_err());
        // duplicates collapse
        assert!(top_p_general(&t, &[s[0].clone(), s[0].clone()], 1, 1 << 20).is_err());
    }

    #[test]
    fn incomparable_candidates_in_canonical_order() {
        let s = Schema::from_names(&[("A", &["a", "na"]), ("B", &["b", "nb"])]).unwrap();
        let t = CpTheory::empty(s.clone());
        let mut all: Vec<_> = s.alternatives().collect();
        all.reverse();
        let top = top_p_general(&t, &all, 3, 1 << 20).unwrap();
        assert_eq!(top, s.alternatives().take(3).collect::<Vec<_>>());
    }

    #[test]
    fn kinds_round_trip_through_text() {
        for k in OptimalityKind::ALL {
            assert_eq!(k.as_str().parse::<OptimalityKind>().unwrap(), k);
        }
        assert!("best".parse::<OptimalityKind>().is_err());
    }
}
