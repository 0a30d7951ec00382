use crate::error::{Error, Result};
use crate::model::schema::{Alternative, AttrSet, Instantiation, Schema};

/// Propositional formula over atoms `attribute = value`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    True,
    False,
    Atom(usize, usize),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(attr: usize, value: usize) -> Formula {
        Formula::Atom(attr, value)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Formula {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Formula {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Formula, r: Formula) -> Formula {
        Formula::Implies(Box::new(l), Box::new(r))
    }

    pub fn iff(l: Formula, r: Formula) -> Formula {
        Formula::Iff(Box::new(l), Box::new(r))
    }

    /// Left-nested conjunction; `True` for no conjuncts. `True` conjuncts are dropped.
    pub fn conj(parts: impl IntoIterator<Item = Formula>) -> Formula {
        parts
            .into_iter()
            .filter(|f| *f != Formula::True)
            .reduce(Formula::and)
            .unwrap_or(Formula::True)
    }

    /// The conjunction of the literals of `inst`.
    pub fn from_instantiation(inst: &Instantiation) -> Formula {
        Formula::conj(inst.iter().map(|(a, v)| Formula::Atom(a, v)))
    }

    pub fn vars(&self) -> AttrSet {
        let mut set = AttrSet::empty();
        self.collect_vars(&mut set);
        set
    }

    fn collect_vars(&self, set: &mut AttrSet) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(a, _) => set.insert(*a),
            Formula::Not(f) => f.collect_vars(set),
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Implies(l, r)
            | Formula::Iff(l, r) => {
                l.collect_vars(set);
                r.collect_vars(set);
            }
        }
    }

    /// Number of connectives plus number of atoms.
    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False => 0,
            Formula::Atom(..) => 1,
            Formula::Not(f) => 1 + f.size(),
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Implies(l, r)
            | Formula::Iff(l, r) => 1 + l.size() + r.size(),
        }
    }

    pub fn check(&self, schema: &Schema) -> Result<()> {
        match self {
            Formula::True | Formula::False => Ok(()),
            Formula::Atom(a, v) => schema.check_instantiation(&Instantiation::new([(*a, *v)])?),
            Formula::Not(f) => f.check(schema),
            Formula::And(l, r)
            | Formula::Or(l, r)
            | Formula::Implies(l, r)
            | Formula::Iff(l, r) => {
                l.check(schema)?;
                r.check(schema)
            }
        }
    }

    /// `o ⊨ f`.
    pub fn holds(&self, o: &Alternative) -> bool {
        match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(a, v) => o.get(*a) == *v,
            Formula::Not(f) => !f.holds(o),
            Formula::And(l, r) => l.holds(o) && r.holds(o),
            Formula::Or(l, r) => l.holds(o) || r.holds(o),
            Formula::Implies(l, r) => !l.holds(o) || r.holds(o),
            Formula::Iff(l, r) => l.holds(o) == r.holds(o),
        }
    }

    /// Evaluate under a partial instantiation that binds every variable of the formula.
    pub fn eval(&self, inst: &Instantiation) -> Result<bool> {
        match self.partial_eval(inst) {
            Some(b) => Ok(b),
            None => {
                let missing = self.vars().difference(inst.vars());
                let attr = missing.iter().next().unwrap_or_default();
                Err(Error::UnboundAttribute(format!("#{attr}")))
            }
        }
    }

    /// Kleene evaluation: `None` when the value depends on unbound attributes.
    pub fn partial_eval(&self, inst: &Instantiation) -> Option<bool> {
        match self {
            Formula::True => Some(true),
            Formula::False => Some(false),
            Formula::Atom(a, v) => inst.get(*a).map(|x| x == *v),
            Formula::Not(f) => f.partial_eval(inst).map(|b| !b),
            Formula::And(l, r) => match (l.partial_eval(inst), r.partial_eval(inst)) {
                (Some(false), _) | (_, Some(false)) => Some(false),
                (Some(true), Some(true)) => Some(true),
                _ => None,
            },
            Formula::Or(l, r) => match (l.partial_eval(inst), r.partial_eval(inst)) {
                (Some(true), _) | (_, Some(true)) => Some(true),
                (Some(false), Some(false)) => Some(false),
                _ => None,
            },
            Formula::Implies(l, r) => match (l.partial_eval(inst), r.partial_eval(inst)) {
                (Some(false), _) | (_, Some(true)) => Some(true),
                (Some(true), Some(false)) => Some(false),
                _ => None,
            },
            Formula::Iff(l, r) => match (l.partial_eval(inst), r.partial_eval(inst)) {
                (Some(x), Some(y)) => Some(x == y),
                _ => None,
            },
        }
    }

    /// The literals of the formula if it is `True`, an atom, or a conjunction of atoms.
    pub fn as_conjunction(&self) -> Option<Vec<(usize, usize)>> {
        fn walk(f: &Formula, out: &mut Vec<(usize, usize)>) -> bool {
            match f {
                Formula::True => true,
                Formula::Atom(a, v) => {
                    out.push((*a, *v));
                    true
                }
                Formula::And(l, r) => walk(l, out) && walk(r, out),
                _ => false,
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out).then_some(out)
    }

    pub fn is_conjunctive(&self) -> bool {
        self.as_conjunction().is_some()
    }

    /// Concrete syntax; binary subformulas are always parenthesised so the text
    /// parses back to the same tree.
    pub fn render(&self, schema: &Schema) -> String {
        let mut out = String::new();
        self.render_into(schema, &mut out, false);
        out
    }

    fn render_into(&self, schema: &Schema, out: &mut String, nested: bool) {
        let binary = |out: &mut String, l: &Formula, op: &str, r: &Formula| {
            if nested {
                out.push('(');
            }
            l.render_into(schema, out, true);
            out.push(' ');
            out.push_str(op);
            out.push(' ');
            r.render_into(schema, out, true);
            if nested {
                out.push(')');
            }
        };
        match self {
            Formula::True => out.push_str("true"),
            Formula::False => out.push_str("false"),
            Formula::Atom(a, v) => {
                out.push_str(schema.name(*a));
                out.push('=');
                out.push_str(schema.value_name(*a, *v));
            }
            Formula::Not(f) => {
                out.push_str("not ");
                f.render_into(schema, out, true);
            }
            Formula::And(l, r) => binary(out, l, "and", r),
            Formula::Or(l, r) => binary(out, l, "or", r),
            Formula::Implies(l, r) => binary(out, l, "->", r),
            Formula::Iff(l, r) => binary(out, l, "<->", r),
        }
    }
}

/// Whether some extension of `inst` over `Var(f)` satisfies `f`.
///
/// Enumerates values only for the attributes of `f` left unbound by `inst`,
/// cutting branches as soon as the partial valuation decides `f`.
pub fn consistent_with(schema: &Schema, f: &Formula, inst: &Instantiation) -> bool {
    let free: Vec<usize> = f.vars().difference(inst.vars()).to_vec();
    let mut work = inst.restrict(f.vars());
    search(schema, f, &free, &mut work)
}

fn search(schema: &Schema, f: &Formula, free: &[usize], work: &mut Instantiation) -> bool {
    match f.partial_eval(work) {
        Some(b) => b,
        None => {
            let Some((&attr, rest)) = free.split_first() else {
                unreachable!("formula undecided with every variable bound")
            };
            let found = (0..schema.domain_size(attr)).any(|v| {
                work.set(attr, v);
                search(schema, f, rest, work)
            });
            work.unset(attr);
            found
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn holiday() -> Schema {
        Schema::from_names(&[
            ("W", &["w", "nw"]),
            ("C", &["c1", "c2", "c3"]),
            ("P", &["p", "np"]),
        ])
        .unwrap()
    }

    #[test]
    fn eval_atoms_and_connectives() {
        let s = holiday();
        // w̄c₂p
        let o = Instantiation::new([(0, 1), (1, 1), (2, 0)]).unwrap();
        let nw = Formula::atom(0, 1);
        assert!(nw.eval(&o).unwrap());
        let f = Formula::and(nw.clone(), Formula::not(Formula::atom(1, 0)));
        assert!(f.eval(&o).unwrap());
        assert!(!Formula::False.eval(&o).unwrap());
        assert_eq!(f.render(&s), "W=nw and not C=c1");
    }

    #[test]
    fn eval_requires_bound_variables() {
        let inst = Instantiation::new([(0, 1)]).unwrap();
        let f = Formula::and(Formula::atom(0, 1), Formula::atom(2, 0));
        assert!(matches!(f.eval(&inst), Err(Error::UnboundAttribute(_))));
        // short-circuit still decides
        let g = Formula::and(Formula::atom(0, 0), Formula::atom(2, 0));
        assert_eq!(g.eval(&inst), Ok(false));
    }

    #[test]
    fn one_value_per_attribute() {
        let s = holiday();
        let f = Formula::and(Formula::atom(1, 0), Formula::atom(1, 2));
        assert!(s.alternatives().all(|o| !f.holds(&o)));
        assert!(!consistent_with(&s, &f, &Instantiation::empty()));
    }

    #[test]
    fn consistency_examples() {
        let s = Schema::from_names(&[("A", &["a", "na"]), ("B", &["b", "nb"])]).unwrap();
        let not_a = Instantiation::new([(0, 1)]).unwrap();
        assert!(!consistent_with(&s, &Formula::atom(0, 0), &not_a));
        let f = Formula::or(Formula::atom(0, 0), Formula::atom(1, 0));
        assert!(consistent_with(&s, &f, &not_a));
        assert!(consistent_with(&s, &Formula::True, &Instantiation::empty()));
        assert!(!consistent_with(
            &s,
            &Formula::False,
            &Instantiation::empty()
        ));
    }

    #[test]
    fn size_counts_connectives_and_atoms() {
        let f = Formula::or(Formula::atom(0, 0), Formula::not(Formula::atom(1, 0)));
        assert_eq!(f.size(), 4);
        assert_eq!(Formula::True.size(), 0);
    }

    #[test]
    fn conjunction_shapes() {
        assert_eq!(Formula::conj([]), Formula::True);
        let c = Formula::conj([Formula::atom(0, 0), Formula::True, Formula::atom(1, 1)]);
        assert_eq!(c.as_conjunction(), Some(vec![(0, 0), (1, 1)]));
        assert!(!Formula::not(Formula::atom(0, 0)).is_conjunctive());
    }
}
