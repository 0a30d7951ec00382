use std::fmt;

use crate::error::{Error, Result};
use crate::model::{Alternative, Schema};

/// Default bound on the number of relation cells (`|universe|²`) the oracle may allocate.
pub const DEFAULT_CAP: u128 = 1 << 20;

/// Square boolean matrix stored as packed rows.
#[derive(Clone, PartialEq, Eq)]
pub struct BitMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64);
        BitMatrix {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::new(n);
        for i in 0..n {
            m.set(i, i);
        }
        m
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
    }

    /// Column indices set in row `i`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        let row = &self.bits[i * self.words..(i + 1) * self.words];
        row.iter().enumerate().flat_map(|(w, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(w * 64 + b)
                }
            })
        })
    }

    pub fn row_count(&self, i: usize) -> usize {
        self.bits[i * self.words..(i + 1) * self.words]
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    /// Warshall's algorithm over packed rows: after step `k`, row `i` absorbs
    /// row `k` whenever `i` reaches `k`.
    pub fn transitive_closure(&mut self) {
        let w = self.words;
        for k in 0..self.n {
            let row_k: Vec<u64> = self.bits[k * w..(k + 1) * w].to_vec();
            for i in 0..self.n {
                if self.get(i, k) {
                    for (dst, src) in self.bits[i * w..(i + 1) * w].iter_mut().zip(&row_k) {
                        *dst |= src;
                    }
                }
            }
        }
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BitMatrix({})", self.n)?;
        for i in 0..self.n {
            let line: String = (0..self.n)
                .map(|j| if self.get(i, j) { '1' } else { '.' })
                .collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

/// The four mutually exclusive ways two distinct alternatives can relate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RelationLabel {
    StrictlyBetter,
    StrictlyWorse,
    Equivalent,
    Incomparable,
}

impl RelationLabel {
    /// Label of `(o, o')` given whether `o ≥ o'` and whether `o' ≥ o`.
    pub fn from_pair(geq: bool, leq: bool) -> Self {
        match (geq, leq) {
            (true, true) => RelationLabel::Equivalent,
            (true, false) => RelationLabel::StrictlyBetter,
            (false, true) => RelationLabel::StrictlyWorse,
            (false, false) => RelationLabel::Incomparable,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RelationLabel::StrictlyBetter => "strictly-better",
            RelationLabel::StrictlyWorse => "strictly-worse",
            RelationLabel::Equivalent => "equivalent",
            RelationLabel::Incomparable => "incomparable",
        }
    }
}

impl fmt::Display for RelationLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Number of alternatives of `schema`, provided the relation over them fits in `cap` cells.
pub fn universe_within_cap(schema: &Schema, cap: u128) -> Result<usize> {
    let alternatives = schema.universe_size().unwrap_or(u128::MAX);
    let cells = alternatives.saturating_mul(alternatives);
    if cells > cap || alternatives > usize::MAX as u128 {
        return Err(Error::OracleTooLarge {
            alternatives,
            cells,
            cap,
        });
    }
    Ok(alternatives as usize)
}

/// A preorder over all alternatives of a schema, given in extension.
/// Universe positions are alternative ranks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExplicitPreorder {
    schema: Schema,
    relation: BitMatrix,
}

impl ExplicitPreorder {
    /// Wrap a relation after checking it is reflexive and transitive.
    pub fn new(schema: Schema, relation: BitMatrix) -> Result<Self> {
        let n = schema.universe_size().unwrap_or(u128::MAX);
        if n != relation.len() as u128 {
            return Err(Error::NotAPreorder(format!(
                "relation over {} elements for a universe of {n}",
                relation.len()
            )));
        }
        if let Some(i) = (0..relation.len()).find(|&i| !relation.get(i, i)) {
            return Err(Error::NotAPreorder(format!(
                "not reflexive at {}",
                schema.render_alternative(&schema.unrank(i))
            )));
        }
        let mut closed = relation.clone();
        closed.transitive_closure();
        if closed != relation {
            return Err(Error::NotAPreorder("not transitive".into()));
        }
        Ok(ExplicitPreorder { schema, relation })
    }

    /// Reflexive-transitive closure of an arbitrary relation.
    pub fn closure_of(schema: Schema, mut relation: BitMatrix) -> Self {
        for i in 0..relation.len() {
            relation.set(i, i);
        }
        relation.transitive_closure();
        ExplicitPreorder { schema, relation }
    }

    pub fn identity(schema: Schema) -> Result<Self> {
        let n = universe_within_cap(&schema, u128::MAX)?;
        Ok(ExplicitPreorder {
            schema,
            relation: BitMatrix::identity(n),
        })
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn relation(&self) -> &BitMatrix {
        &self.relation
    }

    pub fn len(&self) -> usize {
        self.relation.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relation.is_empty()
    }

    pub fn alternative(&self, i: usize) -> Alternative {
        self.schema.unrank(i)
    }

    pub fn index(&self, o: &Alternative) -> usize {
        self.schema.rank(o)
    }

    pub fn geq_at(&self, i: usize, j: usize) -> bool {
        self.relation.get(i, j)
    }

    /// `o ≥ o'`
    pub fn geq(&self, o: &Alternative, o2: &Alternative) -> bool {
        self.relation.get(self.index(o), self.index(o2))
    }

    /// `o > o'`
    pub fn strictly_better(&self, o: &Alternative, o2: &Alternative) -> bool {
        let (i, j) = (self.index(o), self.index(o2));
        self.relation.get(i, j) && !self.relation.get(j, i)
    }

    pub fn label_at(&self, i: usize, j: usize) -> RelationLabel {
        RelationLabel::from_pair(self.relation.get(i, j), self.relation.get(j, i))
    }

    pub fn label(&self, o: &Alternative, o2: &Alternative) -> RelationLabel {
        self.label_at(self.index(o), self.index(o2))
    }

    /// All pairs `(i, j)` with `i ≥ j`, row-major.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.len()).flat_map(move |i| self.relation.row(i).map(move |j| (i, j)))
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.pairs()
            .all(|(i, j)| i == j || !self.relation.get(j, i))
    }

    pub fn is_total(&self) -> bool {
        (0..self.len()).all(|i| (0..i).all(|j| self.relation.get(i, j) || self.relation.get(j, i)))
    }

    pub fn is_linear_order(&self) -> bool {
        self.is_antisymmetric() && self.is_total()
    }

    /// Closure idempotence: the relation is reflexive and equals its own transitive closure.
    pub fn is_preorder(&self) -> bool {
        let mut closed = self.relation.clone();
        closed.transitive_closure();
        closed == self.relation && (0..self.len()).all(|i| self.relation.get(i, i))
    }

    /// `self ⊇ other` as relations.
    pub fn contains(&self, other: &ExplicitPreorder) -> bool {
        self.len() == other.len() && other.pairs().all(|(i, j)| self.relation.get(i, j))
    }
}
