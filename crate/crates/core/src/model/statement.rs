use crate::error::{Error, Result};
use crate::model::formula::Formula;
use crate::model::schema::{Alternative, AttrSet, Instantiation, Schema};

/// A conditional preference statement `α | V : w ≥ w'`.
///
/// `U = Var(α)`, `V` the free attributes, and `W = Var(w) = Var(w')` the
/// swapped attributes are pairwise disjoint, and `w`, `w'` differ on every
/// attribute of `W`. Both are checked on construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CpStatement {
    condition: Formula,
    free: AttrSet,
    better: Instantiation,
    worse: Instantiation,
}

impl CpStatement {
    pub fn new(
        schema: &Schema,
        condition: Formula,
        free: AttrSet,
        better: Instantiation,
        worse: Instantiation,
    ) -> Result<Self> {
        condition.check(schema)?;
        schema.check_instantiation(&better)?;
        schema.check_instantiation(&worse)?;
        if !free.is_subset(schema.all()) {
            return Err(Error::MalformedStatement(
                "free part mentions unknown attributes".into(),
            ));
        }
        let swapped = better.vars();
        if swapped.is_empty() {
            return Err(Error::MalformedStatement("no swapped attribute".into()));
        }
        if swapped != worse.vars() {
            return Err(Error::MalformedStatement(
                "both sides of the swap must bind the same attributes".into(),
            ));
        }
        if let Some(a) = swapped.iter().find(|&a| better.get(a) == worse.get(a)) {
            return Err(Error::MalformedStatement(format!(
                "swap values must differ on every swapped attribute (`{}`)",
                schema.name(a)
            )));
        }
        let cond_vars = condition.vars();
        let clash = |x: AttrSet, y: AttrSet, what: &str| -> Result<()> {
            match x.intersection(y).iter().next() {
                Some(a) => Err(Error::MalformedStatement(format!(
                    "attribute `{}` occurs in both {what}",
                    schema.name(a)
                ))),
                None => Ok(()),
            }
        };
        clash(cond_vars, free, "the condition and the free part")?;
        clash(cond_vars, swapped, "the condition and the swap")?;
        clash(free, swapped, "the free part and the swap")?;
        Ok(CpStatement {
            condition,
            free,
            better,
            worse,
        })
    }

    /// Expand `α | V : w₁ ≥ w₂ ≥ … ≥ wₖ` into adjacent-pair statements.
    pub fn chain(
        schema: &Schema,
        condition: &Formula,
        free: AttrSet,
        links: &[Instantiation],
    ) -> Result<Vec<CpStatement>> {
        if links.len() < 2 {
            return Err(Error::MalformedStatement(
                "a chain needs at least two members".into(),
            ));
        }
        links
            .windows(2)
            .map(|w| CpStatement::new(schema, condition.clone(), free, w[0].clone(), w[1].clone()))
            .collect()
    }

    pub fn condition(&self) -> &Formula {
        &self.condition
    }

    /// `U`
    pub fn condition_vars(&self) -> AttrSet {
        self.condition.vars()
    }

    /// `V`
    pub fn free(&self) -> AttrSet {
        self.free
    }

    /// `W`
    pub fn swapped(&self) -> AttrSet {
        self.better.vars()
    }

    pub fn better(&self) -> &Instantiation {
        &self.better
    }

    pub fn worse(&self) -> &Instantiation {
        &self.worse
    }

    /// `|α| + |V| + 2|W|`; free attributes are counted as well.
    pub fn size(&self) -> usize {
        self.condition.size() + self.free.len() + 2 * self.better.len()
    }

    /// Does the statement apply at `o` as the preferred side (`o ⊨ α`, `o[W] = w`)?
    pub fn applies_above(&self, o: &Alternative) -> bool {
        o.extends(&self.better) && self.condition.holds(o)
    }

    /// Does the statement apply at `o` as the worse side (`o ⊨ α`, `o[W] = w'`)?
    pub fn applies_below(&self, o: &Alternative) -> bool {
        o.extends(&self.worse) && self.condition.holds(o)
    }
}

/// A finite set of CP statements over one schema.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CpTheory {
    schema: Schema,
    statements: Vec<CpStatement>,
}

impl CpTheory {
    pub fn new(schema: Schema, statements: Vec<CpStatement>) -> Result<Self> {
        let theory = CpTheory {
            schema,
            statements: Vec::with_capacity(statements.len()),
        };
        statements.into_iter().try_fold(theory, |mut t, s| {
            t.push(s)?;
            Ok(t)
        })
    }

    pub fn empty(schema: Schema) -> Self {
        CpTheory {
            schema,
            statements: Vec::new(),
        }
    }

    /// Append a statement, re-checking it against this theory's schema.
    pub fn push(&mut self, s: CpStatement) -> Result<()> {
        let s = CpStatement::new(&self.schema, s.condition, s.free, s.better, s.worse)?;
        self.statements.push(s);
        Ok(())
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn statements(&self) -> &[CpStatement] {
        &self.statements
    }

    pub fn len(&self) -> usize {
        self.statements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.statements.is_empty()
    }

    pub fn size(&self) -> usize {
        self.statements.iter().map(CpStatement::size).sum()
    }

    /// `self ∪ other`; the schemas must coincide.
    pub fn union(&self, other: &CpTheory) -> Result<CpTheory> {
        if self.schema != other.schema {
            return Err(Error::SchemaMismatch);
        }
        let mut out = self.clone();
        out.statements.extend(other.statements.iter().cloned());
        Ok(out)
    }
}
