//! Finite relational structures and the maps between them.
//!
//! Carriers are ordered lists of element names; internally every element is
//! addressed by its position `0..n`. Relation contents are explicit tuple
//! sets, one per relation symbol, in signature order.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};

/// A tuple of carrier positions.
pub type Tuple = Vec<usize>;

const RESERVED: &[&str] = &["signature", "structure", "elements"];

fn valid_token(s: &str) -> bool {
    !s.is_empty()
        && !s
            .chars()
            .any(|c| c.is_whitespace() || matches!(c, '(' | ')' | ',' | ':' | '#'))
}

/// A relational signature: relation symbols with their arities, kept in
/// lexicographic order of the symbol names.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signature {
    relations: Vec<(String, usize)>,
}

impl Signature {
    pub fn new<I, S>(relations: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let mut relations: Vec<(String, usize)> =
            relations.into_iter().map(|(n, a)| (n.into(), a)).collect();
        for (name, arity) in &relations {
            if !valid_token(name) || name.contains('/') || RESERVED.contains(&name.as_str()) {
                return Err(Error::Signature(format!("invalid relation name `{name}`")));
            }
            if *arity == 0 {
                return Err(Error::Signature(format!("relation `{name}` has arity 0")));
            }
        }
        relations.sort();
        for w in relations.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(Error::Signature(format!("duplicate relation `{}`", w[0].0)));
            }
        }
        Ok(Signature { relations })
    }

    /// The signature of graphs and digraphs: one binary symbol `E`.
    pub fn binary() -> Self {
        Signature {
            relations: vec![("E".to_string(), 2)],
        }
    }

    pub fn len(&self) -> usize {
        self.relations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.relations.is_empty()
    }

    pub fn name(&self, r: usize) -> &str {
        &self.relations[r].0
    }

    pub fn arity(&self, r: usize) -> usize {
        self.relations[r].1
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.relations.iter().position(|(n, _)| n == name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, usize)> + '_ {
        self.relations.iter().map(|(n, a)| (n.as_str(), *a))
    }

    /// Adds relation symbols, keeping the canonical order.
    pub fn extended<I, S>(&self, extra: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        Signature::new(
            self.relations
                .iter()
                .cloned()
                .chain(extra.into_iter().map(|(n, a)| (n.into(), a))),
        )
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .relations
            .iter()
            .map(|(n, a)| format!("{n}/{a}"))
            .collect();
        f.write_str(&parts.join(" "))
    }
}

pub(crate) fn ensure_same_signature(a: &Structure, b: &Structure) -> Result<()> {
    if a.signature != b.signature {
        return Err(Error::SignatureMismatch {
            left: a.signature.to_string(),
            right: b.signature.to_string(),
        });
    }
    Ok(())
}

/// A finite relational structure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Structure {
    name: String,
    signature: Signature,
    elements: Vec<String>,
    index: HashMap<String, usize>,
    relations: Vec<BTreeSet<Tuple>>,
}

impl Structure {
    /// Builds a structure from element names and per-relation tuple sets
    /// given as carrier positions, in signature order.
    pub fn from_indices(
        name: impl Into<String>,
        signature: Signature,
        elements: Vec<String>,
        relations: Vec<BTreeSet<Tuple>>,
    ) -> Result<Self> {
        let name = name.into();
        if relations.len() != signature.len() {
            return Err(Error::Structure(format!(
                "{name}: {} relation contents for {} symbols",
                relations.len(),
                signature.len()
            )));
        }
        let mut index = HashMap::with_capacity(elements.len());
        for (i, e) in elements.iter().enumerate() {
            if !valid_token(e) {
                return Err(Error::Structure(format!("{name}: invalid element name `{e}`")));
            }
            if index.insert(e.clone(), i).is_some() {
                return Err(Error::Structure(format!("{name}: duplicate element `{e}`")));
            }
        }
        for (r, content) in relations.iter().enumerate() {
            for t in content {
                if t.len() != signature.arity(r) {
                    return Err(Error::Structure(format!(
                        "{name}: tuple of length {} in relation `{}` of arity {}",
                        t.len(),
                        signature.name(r),
                        signature.arity(r)
                    )));
                }
                if let Some(&x) = t.iter().find(|&&x| x >= elements.len()) {
                    return Err(Error::Structure(format!(
                        "{name}: tuple entry {x} outside a carrier of size {}",
                        elements.len()
                    )));
                }
            }
        }
        Ok(Structure {
            name,
            signature,
            elements,
            index,
            relations,
        })
    }

    /// Builds a structure from named tuples. Relations not mentioned are empty.
    pub fn from_named<S: AsRef<str>>(
        name: impl Into<String>,
        signature: Signature,
        elements: &[S],
        tuples: &[(&str, Vec<Vec<&str>>)],
    ) -> Result<Self> {
        let elements: Vec<String> = elements.iter().map(|e| e.as_ref().to_string()).collect();
        let pos: HashMap<&str, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.as_str(), i))
            .collect();
        let mut relations = vec![BTreeSet::new(); signature.len()];
        for (rel, ts) in tuples {
            let r = signature
                .index_of(rel)
                .ok_or_else(|| Error::Structure(format!("unknown relation `{rel}`")))?;
            for t in ts {
                let t = t
                    .iter()
                    .map(|e| pos.get(e).copied().ok_or_else(|| Error::Domain(e.to_string())))
                    .collect::<Result<Tuple>>()?;
                relations[r].insert(t);
            }
        }
        Structure::from_indices(name, signature, elements, relations)
    }

    /// A graph over the binary signature; every edge is stored in both
    /// orientations.
    pub fn graph<S: AsRef<str>>(
        name: impl Into<String>,
        elements: &[S],
        edges: &[(usize, usize)],
    ) -> Result<Self> {
        let mut e = BTreeSet::new();
        for &(x, y) in edges {
            e.insert(vec![x, y]);
            e.insert(vec![y, x]);
        }
        Structure::from_indices(
            name,
            Signature::binary(),
            elements.iter().map(|s| s.as_ref().to_string()).collect(),
            vec![e],
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &str {
        &self.elements[i]
    }

    pub fn index_of(&self, element: &str) -> Result<usize> {
        self.index
            .get(element)
            .copied()
            .ok_or_else(|| Error::Domain(element.to_string()))
    }

    pub fn relation(&self, r: usize) -> &BTreeSet<Tuple> {
        &self.relations[r]
    }

    pub fn relations(&self) -> &[BTreeSet<Tuple>] {
        &self.relations
    }

    pub fn holds(&self, r: usize, t: &[usize]) -> bool {
        self.relations[r].contains(t)
    }

    pub fn tuple_count(&self) -> usize {
        self.relations.iter().map(BTreeSet::len).sum()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// Same structure with new element names (position for position).
    pub fn with_element_names(self, names: Vec<String>) -> Result<Self> {
        if names.len() != self.len() {
            return Err(Error::Structure(format!(
                "{} names for {} elements",
                names.len(),
                self.len()
            )));
        }
        Structure::from_indices(self.name, self.signature, names, self.relations)
    }

    /// Reorders the carrier: element `i` of the result is element
    /// `order[i]` of `self`. `order` must be a permutation.
    pub fn permuted(&self, order: &[usize]) -> Structure {
        let mut inverse = vec![usize::MAX; self.len()];
        for (new, &old) in order.iter().enumerate() {
            inverse[old] = new;
        }
        let relations = self
            .relations
            .iter()
            .map(|rel| {
                rel.iter()
                    .map(|t| t.iter().map(|&x| inverse[x]).collect())
                    .collect()
            })
            .collect();
        let elements: Vec<String> = order.iter().map(|&i| self.elements[i].clone()).collect();
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        Structure {
            name: self.name.clone(),
            signature: self.signature.clone(),
            elements,
            index,
            relations,
        }
    }

    /// Induced substructure on the given positions (sorted, deduplicated).
    pub fn induced(&self, subset: &[usize]) -> Result<Structure> {
        let mut keep: Vec<usize> = subset.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if let Some(&x) = keep.iter().find(|&&x| x >= self.len()) {
            return Err(Error::Domain(format!("#{x}")));
        }
        let mut pos = vec![usize::MAX; self.len()];
        for (i, &x) in keep.iter().enumerate() {
            pos[x] = i;
        }
        let relations = self
            .relations
            .iter()
            .map(|rel| {
                rel.iter()
                    .filter(|t| t.iter().all(|&x| pos[x] != usize::MAX))
                    .map(|t| t.iter().map(|&x| pos[x]).collect())
                    .collect()
            })
            .collect();
        Structure::from_indices(
            self.name.clone(),
            self.signature.clone(),
            keep.iter().map(|&i| self.elements[i].clone()).collect(),
            relations,
        )
    }

    /// Induced substructure on elements given by name.
    pub fn induced_by_names<S: AsRef<str>>(&self, names: &[S]) -> Result<Structure> {
        let idx = names
            .iter()
            .map(|n| self.index_of(n.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        self.induced(&idx)
    }

    /// Whether `self` is literally an induced substructure of `other`:
    /// same signature, carrier a subset by name, relations the restriction.
    pub fn is_induced_substructure_of(&self, other: &Structure) -> bool {
        if self.signature != other.signature {
            return false;
        }
        let Ok(pos) = self
            .elements
            .iter()
            .map(|e| other.index_of(e))
            .collect::<Result<Vec<_>>>()
        else {
            return false;
        };
        match other.induced(&pos) {
            Ok(sub) => {
                // `induced` sorts positions; compare through names.
                let sub_pos: Vec<usize> = self
                    .elements
                    .iter()
                    .map(|e| sub.index[e.as_str()])
                    .collect();
                sub.relations.iter().zip(&self.relations).all(|(theirs, ours)| {
                    theirs.len() == ours.len()
                        && ours
                            .iter()
                            .all(|t| theirs.contains(&t.iter().map(|&x| sub_pos[x]).collect::<Tuple>()))
                })
            }
            Err(_) => false,
        }
    }

    /// Names not yet used in the carrier, derived from `base` by appending
    /// primes.
    pub(crate) fn fresh_name(taken: &HashSet<String>, base: &str) -> String {
        let mut name = base.to_string();
        while taken.contains(&name) {
            name.push('\'');
        }
        name
    }
}

/// Induced substructure on a set of positions. Fails with a domain error for
/// positions outside the carrier.
pub fn induced_substructure(a: &Structure, subset: &[usize]) -> Result<Structure> {
    a.induced(subset)
}

/// The kinds of maps the library distinguishes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Hom,
    Mono,
    Embedding,
    Iso,
}

impl Mode {
    pub fn injective(self) -> bool {
        !matches!(self, Mode::Hom)
    }

    pub fn reflecting(self) -> bool {
        matches!(self, Mode::Embedding | Mode::Iso)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Hom => "hom",
            Mode::Mono => "mono",
            Mode::Embedding => "embed",
            Mode::Iso => "iso",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A partial function between the carriers of two structures, stored by
/// position.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartialMap {
    images: Vec<Option<usize>>,
    target_len: usize,
}

impl PartialMap {
    pub fn empty(source_len: usize, target_len: usize) -> Self {
        PartialMap {
            images: vec![None; source_len],
            target_len,
        }
    }

    pub fn identity(n: usize) -> Self {
        PartialMap {
            images: (0..n).map(Some).collect(),
            target_len: n,
        }
    }

    /// A total map given by its image list.
    pub fn total(images: Vec<usize>, target_len: usize) -> Result<Self> {
        PartialMap::from_images(images.into_iter().map(Some).collect(), target_len)
    }

    pub fn from_images(images: Vec<Option<usize>>, target_len: usize) -> Result<Self> {
        if let Some(y) = images.iter().flatten().find(|&&y| y >= target_len) {
            return Err(Error::Domain(format!("#{y}")));
        }
        Ok(PartialMap { images, target_len })
    }

    /// Builds a map from `(source, target)` position pairs; a source
    /// position listed twice with different images is rejected.
    pub fn from_pairs(
        source_len: usize,
        target_len: usize,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        let mut m = PartialMap::empty(source_len, target_len);
        for (x, y) in pairs {
            m.insert(x, y)?;
        }
        Ok(m)
    }

    /// Builds a map between two structures from element names.
    pub fn from_named<S: AsRef<str>>(
        source: &Structure,
        target: &Structure,
        pairs: &[(S, S)],
    ) -> Result<Self> {
        let mut m = PartialMap::empty(source.len(), target.len());
        for (x, y) in pairs {
            m.insert(source.index_of(x.as_ref())?, target.index_of(y.as_ref())?)?;
        }
        Ok(m)
    }

    pub fn insert(&mut self, x: usize, y: usize) -> Result<()> {
        if x >= self.images.len() {
            return Err(Error::Domain(format!("#{x}")));
        }
        if y >= self.target_len {
            return Err(Error::Domain(format!("#{y}")));
        }
        match self.images[x] {
            Some(prev) if prev != y => Err(Error::precondition(format!(
                "assignment not functional at #{x}: #{prev} vs #{y}"
            ))),
            _ => {
                self.images[x] = Some(y);
                Ok(())
            }
        }
    }

    pub fn get(&self, x: usize) -> Option<usize> {
        self.images.get(x).copied().flatten()
    }

    pub fn source_len(&self) -> usize {
        self.images.len()
    }

    pub fn target_len(&self) -> usize {
        self.target_len
    }

    pub fn images(&self) -> &[Option<usize>] {
        &self.images
    }

    pub fn domain(&self) -> Vec<usize> {
        (0..self.images.len()).filter(|&x| self.images[x].is_some()).collect()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.images
            .iter()
            .enumerate()
            .filter_map(|(x, y)| y.map(|y| (x, y)))
    }

    pub fn domain_len(&self) -> usize {
        self.images.iter().filter(|y| y.is_some()).count()
    }

    pub fn image(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.images.iter().flatten().copied().collect();
        set.into_iter().collect()
    }

    pub fn is_total(&self) -> bool {
        self.images.iter().all(Option::is_some)
    }

    /// The image list of a total map.
    pub fn as_total(&self) -> Option<Vec<usize>> {
        self.images.iter().copied().collect()
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = HashSet::new();
        self.images.iter().flatten().all(|y| seen.insert(*y))
    }

    /// Inverse of an injective map.
    pub fn inverse(&self) -> Option<PartialMap> {
        if !self.is_injective() {
            return None;
        }
        let mut inv = PartialMap::empty(self.target_len, self.images.len());
        for (x, y) in self.pairs() {
            inv.images[y] = Some(x);
        }
        Some(inv)
    }

    /// `other ∘ self`: apply `self` first. Defined where both are.
    pub fn then(&self, other: &PartialMap) -> PartialMap {
        PartialMap {
            images: self
                .images
                .iter()
                .map(|y| y.and_then(|y| other.get(y)))
                .collect(),
            target_len: other.target_len,
        }
    }

    pub fn restrict(&self, domain: &[usize]) -> PartialMap {
        let mut m = PartialMap::empty(self.images.len(), self.target_len);
        for &x in domain {
            if x < self.images.len() {
                m.images[x] = self.images[x];
            }
        }
        m
    }

    /// Whether `self` agrees with `other` on the domain of `other`.
    pub fn extends(&self, other: &PartialMap) -> bool {
        other.pairs().all(|(x, y)| self.get(x) == Some(y))
    }

    /// Renders the assignment as `a->b, c->d` using element names.
    pub fn describe(&self, source: &Structure, target: &Structure) -> String {
        self.pairs()
            .map(|(x, y)| format!("{}->{}", source.element(x), target.element(y)))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

fn check_dims(src: &Structure, tgt: &Structure, m: &PartialMap) -> Result<()> {
    ensure_same_signature(src, tgt)?;
    if m.source_len() != src.len() || m.target_len() != tgt.len() {
        return Err(Error::precondition(format!(
            "map of shape {}->{} does not fit structures of sizes {} and {}",
            m.source_len(),
            m.target_len(),
            src.len(),
            tgt.len()
        )));
    }
    Ok(())
}

/// Checks a total map in the given mode.
///
/// * `Hom`: every relation tuple is preserved.
/// * `Mono`: a homomorphism that is injective.
/// * `Embedding`: a monomorphism that also reflects tuples over its image.
/// * `Iso`: a surjective embedding.
pub fn check_map(src: &Structure, tgt: &Structure, m: &PartialMap, mode: Mode) -> Result<bool> {
    check_dims(src, tgt, m)?;
    if !m.is_total() {
        return Err(Error::precondition(format!(
            "mode {mode} needs a total map, got one defined on {} of {} elements",
            m.domain_len(),
            src.len()
        )));
    }
    if !check_partial_map(src, tgt, m, mode)? {
        return Ok(false);
    }
    if mode == Mode::Iso && m.image().len() != tgt.len() {
        return Ok(false);
    }
    Ok(true)
}

/// Checks a partial map as a map from the substructure induced by its
/// domain. `Iso` is treated like `Embedding` (a local isomorphism).
pub fn check_partial_map(
    src: &Structure,
    tgt: &Structure,
    m: &PartialMap,
    mode: Mode,
) -> Result<bool> {
    check_dims(src, tgt, m)?;
    for (r, rel) in src.relations.iter().enumerate() {
        let mut mapped = Vec::with_capacity(src.signature.arity(r));
        for t in rel {
            mapped.clear();
            let mut total = true;
            for &x in t {
                match m.get(x) {
                    Some(y) => mapped.push(y),
                    None => {
                        total = false;
                        break;
                    }
                }
            }
            if total && !tgt.holds(r, &mapped) {
                return Ok(false);
            }
        }
    }
    if mode.injective() && !m.is_injective() {
        return Ok(false);
    }
    if mode.reflecting() {
        let mut pre = vec![None; tgt.len()];
        for (x, y) in m.pairs() {
            pre[y] = Some(x);
        }
        for (r, rel) in tgt.relations.iter().enumerate() {
            for t in rel {
                let back: Option<Tuple> = t.iter().map(|&y| pre[y]).collect();
                if let Some(back) = back {
                    if !src.holds(r, &back) {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Disjoint union of structures over one signature. Element `e` of part
/// `i` is named `p<i>.e`. Returns the union and the canonical injections.
pub fn disjoint_union<'a>(
    parts: impl IntoIterator<Item = &'a Structure>,
) -> Result<(Structure, Vec<PartialMap>)> {
    let parts: Vec<&Structure> = parts.into_iter().collect();
    let first = parts
        .first()
        .ok_or_else(|| Error::precondition("disjoint union of an empty list"))?;
    for p in &parts[1..] {
        ensure_same_signature(first, p)?;
    }
    let total: usize = parts.iter().map(|p| p.len()).sum();
    let mut elements = Vec::with_capacity(total);
    let mut relations = vec![BTreeSet::new(); first.signature.len()];
    let mut injections = Vec::with_capacity(parts.len());
    let mut offset = 0;
    for (i, p) in parts.iter().enumerate() {
        elements.extend(p.elements.iter().map(|e| format!("p{i}.{e}")));
        for (r, rel) in p.relations.iter().enumerate() {
            relations[r].extend(rel.iter().map(|t| t.iter().map(|&x| x + offset).collect::<Tuple>()));
        }
        injections.push(PartialMap::total(
            (offset..offset + p.len()).collect(),
            total,
        )?);
        offset += p.len();
    }
    let name = parts.iter().map(|p| p.name()).collect::<Vec<_>>().join("+");
    let u = Structure::from_indices(name, first.signature.clone(), elements, relations)?;
    Ok((u, injections))
}

/// Quotient by a partition of the carrier. Blocks become single elements
/// (ordered by least member, named after it); relation contents are the
/// images of the original tuples. Returns the quotient and the canonical
/// surjection.
pub fn quotient(a: &Structure, blocks: &[Vec<usize>]) -> Result<(Structure, PartialMap)> {
    let mut block_of = vec![usize::MAX; a.len()];
    for (b, block) in blocks.iter().enumerate() {
        if block.is_empty() {
            return Err(Error::Partition(format!("block {b} is empty")));
        }
        for &x in block {
            if x >= a.len() {
                return Err(Error::Partition(format!("element #{x} not in the carrier")));
            }
            if block_of[x] != usize::MAX {
                return Err(Error::Partition(format!(
                    "element `{}` lies in two blocks",
                    a.element(x)
                )));
            }
            block_of[x] = b;
        }
    }
    if let Some(x) = block_of.iter().position(|&b| b == usize::MAX) {
        return Err(Error::Partition(format!(
            "element `{}` is not covered",
            a.element(x)
        )));
    }
    let mut order: Vec<usize> = (0..blocks.len()).collect();
    order.sort_by_key(|&b| blocks[b].iter().min().copied());
    let mut rank = vec![0; blocks.len()];
    for (i, &b) in order.iter().enumerate() {
        rank[b] = i;
    }
    let surj: Vec<usize> = block_of.iter().map(|&b| rank[b]).collect();
    let elements = order
        .iter()
        .map(|&b| a.element(*blocks[b].iter().min().unwrap()).to_string())
        .collect();
    let relations = a
        .relations
        .iter()
        .map(|rel| {
            rel.iter()
                .map(|t| t.iter().map(|&x| surj[x]).collect())
                .collect()
        })
        .collect();
    let q = Structure::from_indices(a.name.clone(), a.signature.clone(), elements, relations)?;
    let map = PartialMap::total(surj, blocks.len())?;
    Ok((q, map))
}
