use std::collections::{HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::model::{Alternative, CpTheory};
use crate::semantics::preorder::RelationLabel;
use crate::semantics::swaps::push_successors;

/// Limits for the breadth-first dominance search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    /// Maximum number of distinct alternatives kept in the visited set.
    pub max_states: usize,
    /// Maximum number of alternatives whose successors are generated.
    pub max_expansions: usize,
}

impl SearchBudget {
    pub fn new(max_states: usize, max_expansions: usize) -> Result<Self> {
        if max_states == 0 || max_expansions == 0 {
            return Err(Error::Precondition("search budget must be positive".into()));
        }
        Ok(SearchBudget {
            max_states,
            max_expansions,
        })
    }

    /// A budget that never runs out.
    pub fn unlimited() -> Self {
        SearchBudget {
            max_states: usize::MAX,
            max_expansions: usize::MAX,
        }
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_states: 1_000_000,
            max_expansions: 1_000_000,
        }
    }
}

/// Answer of a budgeted search. Running out of budget is never reported as `false`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bounded<T> {
    Answer(T),
    BudgetExhausted,
}

impl<T> Bounded<T> {
    pub fn answer(self) -> Option<T> {
        match self {
            Bounded::Answer(t) => Some(t),
            Bounded::BudgetExhausted => None,
        }
    }
}

/// `o ≥_t o'`: `o = o'`, or a chain of worsening swaps leads from `o` to `o'`.
pub fn dominates(
    t: &CpTheory,
    o: &Alternative,
    target: &Alternative,
    budget: SearchBudget,
) -> Bounded<bool> {
    if o == target {
        return Bounded::Answer(true);
    }
    let mut visited: HashSet<Alternative> = HashSet::new();
    let mut queue = VecDeque::new();
    visited.insert(o.clone());
    queue.push_back(o.clone());
    let mut expansions = 0usize;
    let mut succ = Vec::new();
    while let Some(cur) = queue.pop_front() {
        if expansions == budget.max_expansions {
            return Bounded::BudgetExhausted;
        }
        expansions += 1;
        succ.clear();
        for s in t.statements() {
            push_successors(t, s, &cur, &mut succ);
        }
        if succ.contains(target) {
            return Bounded::Answer(true);
        }
        for next in succ.drain(..) {
            if !visited.contains(&next) {
                if visited.len() == budget.max_states {
                    return Bounded::BudgetExhausted;
                }
                visited.insert(next.clone());
                queue.push_back(next);
            }
        }
    }
    Bounded::Answer(false)
}

/// Four-way comparison of distinct alternatives from two dominance searches.
pub fn compare(
    t: &CpTheory,
    o: &Alternative,
    o2: &Alternative,
    budget: SearchBudget,
) -> Result<Bounded<RelationLabel>> {
    if o == o2 {
        return Err(Error::Precondition(
            "compare needs two distinct alternatives".into(),
        ));
    }
    let fwd = dominates(t, o, o2, budget);
    let bwd = dominates(t, o2, o, budget);
    Ok(match (fwd, bwd) {
        (Bounded::Answer(g), Bounded::Answer(l)) => Bounded::Answer(RelationLabel::from_pair(g, l)),
        _ => Bounded::BudgetExhausted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{AttrSet, CpStatement, Formula, Instantiation, Schema};

    /// `x_1 ≥ x̄_1` style chain over a binary attribute plus a long free-part fan-out.
    fn fanout() -> (CpTheory, Alternative, Alternative) {
        let spec: Vec<(String, Vec<&str>)> =
            (0..8).map(|i| (format!("X{i}"), vec!["x", "nx"])).collect();
        let spec_ref: Vec<(&str, &[&str])> = spec
            .iter()
            .map(|(n, v)| (n.as_str(), v.as_slice()))
            .collect();
        let s = Schema::from_names(&spec_ref).unwrap();
        let free: AttrSet = (1..8).collect();
        let st = CpStatement::new(
            &s,
            Formula::True,
            free,
            Instantiation::new([(0, 0)]).unwrap(),
            Instantiation::new([(0, 1)]).unwrap(),
        )
        .unwrap();
        let t = CpTheory::new(s, vec![st]).unwrap();
        (
            t,
            Alternative(vec![0; 8]),
            Alternative(vec![1, 0, 0, 0, 0, 0, 0, 1]),
        )
    }

    #[test]
    fn reflexive() {
        let (t, o, _) = fanout();
        assert_eq!(
            dominates(&t, &o, &o, SearchBudget::new(1, 1).unwrap()),
            Bounded::Answer(true)
        );
    }

    #[test]
    fn budget_exhaustion_is_not_false() {
        let (t, o, _) = fanout();
        // o ≥ anything with X0 = x̄, but never reaches alternatives with X0 = x other than itself
        let unreachable = Alternative(vec![0, 1, 0, 0, 0, 0, 0, 0]);
        assert_eq!(
            dominates(&t, &o, &unreachable, SearchBudget::new(10, 1_000).unwrap()),
            Bounded::BudgetExhausted
        );
        assert_eq!(
            dominates(&t, &o, &unreachable, SearchBudget::unlimited()),
            Bounded::Answer(false)
        );
    }

    #[test]
    fn finds_direct_targets_even_on_small_budgets() {
        let (t, o, target) = fanout();
        assert_eq!(
            dominates(&t, &o, &target, SearchBudget::new(1, 1).unwrap()),
            Bounded::Answer(true)
        );
    }

    #[test]
    fn compare_rejects_identical_pair() {
        let (t, o, _) = fanout();
        assert!(compare(&t, &o, &o, SearchBudget::default()).is_err());
    }

    #[test]
    fn zero_budget_rejected() {
        assert!(SearchBudget::new(0, 5).is_err());
    }
}
