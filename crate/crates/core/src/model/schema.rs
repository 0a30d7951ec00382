use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Hard limit on the number of attributes, imposed by the bit-set representation of [`AttrSet`].
pub const MAX_ATTRIBUTES: usize = 64;

/// A set of attribute indices of one schema.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AttrSet(u64);

impl AttrSet {
    pub const fn empty() -> Self {
        AttrSet(0)
    }

    pub fn singleton(attr: usize) -> Self {
        AttrSet(1 << attr)
    }

    /// The first `n` attributes.
    pub fn first(n: usize) -> Self {
        if n >= 64 {
            AttrSet(u64::MAX)
        } else {
            AttrSet((1u64 << n) - 1)
        }
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn contains(self, attr: usize) -> bool {
        attr < 64 && self.0 & (1 << attr) != 0
    }

    pub fn insert(&mut self, attr: usize) {
        self.0 |= 1 << attr;
    }

    pub fn remove(&mut self, attr: usize) {
        self.0 &= !(1 << attr);
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn union(self, other: AttrSet) -> AttrSet {
        AttrSet(self.0 | other.0)
    }

    pub fn intersection(self, other: AttrSet) -> AttrSet {
        AttrSet(self.0 & other.0)
    }

    pub fn difference(self, other: AttrSet) -> AttrSet {
        AttrSet(self.0 & !other.0)
    }

    pub fn is_disjoint(self, other: AttrSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: AttrSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Members in increasing index order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for AttrSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut set = AttrSet::empty();
        for a in iter {
            set.insert(a);
        }
        set
    }
}

impl fmt::Debug for AttrSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Attribute {
    pub name: String,
    pub values: Vec<String>,
}

impl Attribute {
    pub fn new<S: Into<String>>(
        name: S,
        values: impl IntoIterator<Item = impl Into<String>>,
    ) -> Self {
        Attribute {
            name: name.into(),
            values: values.into_iter().map(Into::into).collect(),
        }
    }

    pub fn domain_size(&self) -> usize {
        self.values.len()
    }
}

/// The combinatorial domain: an ordered list of attributes with finite domains.
///
/// Alternatives are ranked in mixed radix with the first attribute most
/// significant, so rank order is the lexicographic order induced by the
/// declaration order of attributes and values.
#[derive(Debug, Clone)]
pub struct Schema {
    attributes: Vec<Attribute>,
    index: HashMap<String, usize>,
}

impl PartialEq for Schema {
    fn eq(&self, other: &Self) -> bool {
        self.attributes == other.attributes
    }
}

impl Eq for Schema {}

impl Schema {
    pub fn new(attributes: Vec<Attribute>) -> Result<Self> {
        if attributes.len() > MAX_ATTRIBUTES {
            return Err(Error::InvalidSchema(format!(
                "{} attributes exceed the supported maximum of {MAX_ATTRIBUTES}",
                attributes.len()
            )));
        }
        let mut index = HashMap::new();
        for (i, attr) in attributes.iter().enumerate() {
            if index.insert(attr.name.clone(), i).is_some() {
                return Err(Error::InvalidSchema(format!(
                    "duplicate attribute `{}`",
                    attr.name
                )));
            }
            if attr.values.len() < 2 {
                return Err(Error::InvalidSchema(format!(
                    "attribute `{}` needs at least two values",
                    attr.name
                )));
            }
            for (j, v) in attr.values.iter().enumerate() {
                if attr.values[..j].contains(v) {
                    return Err(Error::InvalidSchema(format!(
                        "duplicate value `{v}` in domain of `{}`",
                        attr.name
                    )));
                }
            }
        }
        Ok(Schema { attributes, index })
    }

    /// Shorthand used throughout tests and fixtures.
    pub fn from_names(spec: &[(&str, &[&str])]) -> Result<Self> {
        Schema::new(
            spec.iter()
                .map(|(name, values)| Attribute::new(*name, values.iter().copied()))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.attributes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attributes.is_empty()
    }

    pub fn attributes(&self) -> &[Attribute] {
        &self.attributes
    }

    pub fn attribute(&self, attr: usize) -> &Attribute {
        &self.attributes[attr]
    }

    pub fn name(&self, attr: usize) -> &str {
        &self.attributes[attr].name
    }

    pub fn value_name(&self, attr: usize, value: usize) -> &str {
        &self.attributes[attr].values[value]
    }

    pub fn domain_size(&self, attr: usize) -> usize {
        self.attributes[attr].values.len()
    }

    pub fn all(&self) -> AttrSet {
        AttrSet::first(self.len())
    }

    pub fn attr_index(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownAttribute(name.to_string()))
    }

    pub fn value_index(&self, attr: usize, value: &str) -> Result<usize> {
        self.attributes[attr]
            .values
            .iter()
            .position(|v| v == value)
            .ok_or_else(|| Error::UnknownValue {
                attr: self.name(attr).to_string(),
                value: value.to_string(),
            })
    }

    /// Resolve `name = value` into indices.
    pub fn literal(&self, attr: &str, value: &str) -> Result<(usize, usize)> {
        let a = self.attr_index(attr)?;
        Ok((a, self.value_index(a, value)?))
    }

    /// Number of instantiations of `set`, `None` on overflow.
    pub fn count_instantiations(&self, set: AttrSet) -> Option<u128> {
        set.iter()
            .try_fold(1u128, |acc, a| acc.checked_mul(self.domain_size(a) as u128))
    }

    /// Number of alternatives, `None` on overflow.
    pub fn universe_size(&self) -> Option<u128> {
        self.count_instantiations(self.all())
    }

    /// All instantiations of `set`, in lexicographic order.
    pub fn instantiations(&self, set: AttrSet) -> Instantiations {
        let attrs = set.to_vec();
        let radices = attrs.iter().map(|&a| self.domain_size(a)).collect();
        Instantiations {
            attrs,
            counter: Some(MixedRadix::new(radices)),
        }
    }

    /// All alternatives in rank order.
    pub fn alternatives(&self) -> impl Iterator<Item = Alternative> {
        let radices: Vec<usize> = (0..self.len()).map(|a| self.domain_size(a)).collect();
        let mut counter = Some(MixedRadix::new(radices));
        std::iter::from_fn(move || {
            let c = counter.as_mut()?;
            let alt = Alternative(c.digits.clone());
            if !c.advance() {
                counter = None;
            }
            Some(alt)
        })
    }

    pub fn rank(&self, alt: &Alternative) -> usize {
        alt.0
            .iter()
            .enumerate()
            .fold(0usize, |acc, (a, &v)| acc * self.domain_size(a) + v)
    }

    pub fn unrank(&self, mut rank: usize) -> Alternative {
        let mut values = vec![0; self.len()];
        for a in (0..self.len()).rev() {
            let d = self.domain_size(a);
            values[a] = rank % d;
            rank /= d;
        }
        Alternative(values)
    }

    pub fn check_instantiation(&self, inst: &Instantiation) -> Result<()> {
        for (a, v) in inst.iter() {
            if a >= self.len() {
                return Err(Error::UnknownAttribute(format!("#{a}")));
            }
            if v >= self.domain_size(a) {
                return Err(Error::UnknownValue {
                    attr: self.name(a).to_string(),
                    value: format!("#{v}"),
                });
            }
        }
        Ok(())
    }

    pub fn check_alternative(&self, alt: &Alternative) -> Result<()> {
        if alt.0.len() != self.len() {
            return Err(Error::Precondition(format!(
                "alternative binds {} attributes, schema has {}",
                alt.0.len(),
                self.len()
            )));
        }
        for (a, &v) in alt.0.iter().enumerate() {
            if v >= self.domain_size(a) {
                return Err(Error::UnknownValue {
                    attr: self.name(a).to_string(),
                    value: format!("#{v}"),
                });
            }
        }
        Ok(())
    }

    /// `A=a,B=b,...`
    pub fn render_alternative(&self, alt: &Alternative) -> String {
        alt.0
            .iter()
            .enumerate()
            .map(|(a, &v)| format!("{}={}", self.name(a), self.value_name(a, v)))
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn render_instantiation(&self, inst: &Instantiation) -> String {
        inst.iter()
            .map(|(a, v)| format!("{}={}", self.name(a), self.value_name(a, v)))
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn render_set(&self, set: AttrSet) -> String {
        set.iter()
            .map(|a| self.name(a))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// Odometer over digits with the given radices, last digit fastest.
#[derive(Debug, Clone)]
pub(crate) struct MixedRadix {
    radices: Vec<usize>,
    pub(crate) digits: Vec<usize>,
}

impl MixedRadix {
    pub(crate) fn new(radices: Vec<usize>) -> Self {
        let digits = vec![0; radices.len()];
        MixedRadix { radices, digits }
    }

    /// Step to the next combination; false once wrapped around.
    pub(crate) fn advance(&mut self) -> bool {
        for i in (0..self.digits.len()).rev() {
            self.digits[i] += 1;
            if self.digits[i] < self.radices[i] {
                return true;
            }
            self.digits[i] = 0;
        }
        false
    }
}

/// Iterator over the instantiations of an attribute set.
pub struct Instantiations {
    attrs: Vec<usize>,
    counter: Option<MixedRadix>,
}

impl Iterator for Instantiations {
    type Item = Instantiation;

    fn next(&mut self) -> Option<Instantiation> {
        let c = self.counter.as_mut()?;
        let inst = Instantiation(
            self.attrs
                .iter()
                .copied()
                .zip(c.digits.iter().copied())
                .collect(),
        );
        if !c.advance() {
            self.counter = None;
        }
        Some(inst)
    }
}

/// A partial instantiation: one value for each attribute of some subset.
/// Bindings are kept sorted by attribute index.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Instantiation(Vec<(usize, usize)>);

impl Instantiation {
    pub fn empty() -> Self {
        Instantiation(Vec::new())
    }

    /// Build from `(attribute, value)` pairs; an attribute bound twice is an error.
    pub fn new(pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut v: Vec<(usize, usize)> = pairs.into_iter().collect();
        v.sort_unstable();
        for w in v.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::Precondition(format!(
                    "attribute #{} bound twice",
                    w[0].0
                )));
            }
        }
        Ok(Instantiation(v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.iter().copied()
    }

    pub fn get(&self, attr: usize) -> Option<usize> {
        self.0
            .binary_search_by_key(&attr, |&(a, _)| a)
            .ok()
            .map(|i| self.0[i].1)
    }

    pub fn vars(&self) -> AttrSet {
        self.0.iter().map(|&(a, _)| a).collect()
    }

    /// Bind or rebind one attribute.
    pub fn set(&mut self, attr: usize, value: usize) {
        match self.0.binary_search_by_key(&attr, |&(a, _)| a) {
            Ok(i) => self.0[i].1 = value,
            Err(i) => self.0.insert(i, (attr, value)),
        }
    }

    pub fn unset(&mut self, attr: usize) {
        if let Ok(i) = self.0.binary_search_by_key(&attr, |&(a, _)| a) {
            self.0.remove(i);
        }
    }

    pub fn restrict(&self, set: AttrSet) -> Instantiation {
        Instantiation(
            self.0
                .iter()
                .copied()
                .filter(|&(a, _)| set.contains(a))
                .collect(),
        )
    }

    /// Agreement on every commonly bound attribute.
    pub fn compatible(&self, other: &Instantiation) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (a, x) = self.0[i];
            let (b, y) = other.0[j];
            match a.cmp(&b) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    if x != y {
                        return false;
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        true
    }

    /// Combined bindings, or `None` if the two disagree somewhere.
    pub fn merge(&self, other: &Instantiation) -> Option<Instantiation> {
        if !self.compatible(other) {
            return None;
        }
        let mut out = self.clone();
        for (a, v) in other.iter() {
            out.set(a, v);
        }
        Some(out)
    }
}

/// A full instantiation of the schema, stored as one value index per attribute.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Alternative(pub Vec<usize>);

impl Alternative {
    pub fn get(&self, attr: usize) -> usize {
        self.0[attr]
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn set(&mut self, attr: usize, value: usize) {
        self.0[attr] = value;
    }

    pub fn restrict(&self, set: AttrSet) -> Instantiation {
        Instantiation(set.iter().map(|a| (a, self.0[a])).collect())
    }

    pub fn as_instantiation(&self) -> Instantiation {
        Instantiation(self.0.iter().copied().enumerate().collect())
    }

    /// `true` iff this alternative agrees with every binding of `inst`.
    pub fn extends(&self, inst: &Instantiation) -> bool {
        inst.iter().all(|(a, v)| self.0[a] == v)
    }

    /// Copy with the bindings of `inst` overriding the current values.
    pub fn assign(&self, inst: &Instantiation) -> Alternative {
        let mut out = self.clone();
        for (a, v) in inst.iter() {
            out.0[a] = v;
        }
        out
    }

    pub fn agrees_on(&self, other: &Alternative, set: AttrSet) -> bool {
        set.iter().all(|a| self.0[a] == other.0[a])
    }

    /// Attributes on which the two alternatives differ.
    pub fn diff(&self, other: &Alternative) -> AttrSet {
        self.0
            .iter()
            .zip(&other.0)
            .enumerate()
            .filter(|(_, (x, y))| x != y)
            .map(|(a, _)| a)
            .collect()
    }
}

/// Dense indexing of the instantiations of one attribute set, in the order of
/// [`Schema::instantiations`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    attrs: Vec<usize>,
    radices: Vec<usize>,
    size: usize,
}

impl Subspace {
    pub fn new(schema: &Schema, set: AttrSet) -> Result<Self> {
        let attrs = set.to_vec();
        let radices: Vec<usize> = attrs.iter().map(|&a| schema.domain_size(a)).collect();
        let size = radices
            .iter()
            .try_fold(1usize, |acc, &r| acc.checked_mul(r))
            .ok_or_else(|| {
                Error::Unsupported(format!(
                    "too many instantiations of {}",
                    schema.render_set(set)
                ))
            })?;
        Ok(Subspace {
            attrs,
            radices,
            size,
        })
    }

    pub fn attrs(&self) -> AttrSet {
        self.attrs.iter().copied().collect()
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn index_of(&self, o: &Alternative) -> usize {
        self.attrs
            .iter()
            .zip(&self.radices)
            .fold(0, |acc, (&a, &r)| acc * r + o.get(a))
    }

    /// Index of an instantiation binding (at least) every attribute of the subspace.
    pub fn index_of_inst(&self, inst: &Instantiation) -> Option<usize> {
        self.attrs
            .iter()
            .zip(&self.radices)
            .try_fold(0, |acc, (&a, &r)| Some(acc * r + inst.get(a)?))
    }

    pub fn inst_at(&self, mut i: usize) -> Instantiation {
        let mut pairs = vec![(0, 0); self.attrs.len()];
        for k in (0..self.attrs.len()).rev() {
            pairs[k] = (self.attrs[k], i % self.radices[k]);
            i /= self.radices[k];
        }
        Instantiation(pairs)
    }
}
