//! Canonical forms of small structures.
//!
//! The canonical labelling is the carrier permutation with the least
//! encoding, where the encoding lists, for each new label `k` in turn and
//! each relation, the presence bits of all tuples whose largest label is
//! `k` (lexicographic within that slice). Every prefix of the encoding is
//! fixed once the first labels are chosen, which gives a branch-and-bound
//! search. Labels are only drawn from colour classes of an
//! isomorphism-invariant colour refinement, in colour order.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::structures::{Signature, Structure, Tuple};

/// Comparable isomorphism invariant: equal keys iff isomorphic.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey {
    size: usize,
    bits: Vec<u64>,
}

/// Tuples over labels `0..=k` whose largest entry is `k`, lexicographic.
fn frontier_tuples(k: usize, arity: usize) -> Vec<Tuple> {
    let mut out = Vec::new();
    let mut cur = vec![0; arity];
    loop {
        if cur.contains(&k) {
            out.push(cur.clone());
        }
        // Odometer over 0..=k.
        let mut i = arity;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < k {
                cur[i] += 1;
                for c in cur.iter_mut().skip(i + 1) {
                    *c = 0;
                }
                break;
            }
        }
    }
}

/// Iterated colour refinement; returns a colour per element, colours
/// numbered in an isomorphism-invariant order.
fn refine(a: &Structure) -> Vec<usize> {
    let n = a.len();
    let mut colour = vec![0usize; n];
    loop {
        let mut sigs: Vec<(usize, Vec<(usize, usize, Vec<usize>)>)> = (0..n)
            .map(|x| (colour[x], Vec::new()))
            .collect();
        for (r, rel) in a.relations().iter().enumerate() {
            for t in rel {
                let pattern: Vec<usize> = t.iter().map(|&z| colour[z]).collect();
                for (p, &x) in t.iter().enumerate() {
                    sigs[x].1.push((r, p, pattern.clone()));
                }
            }
        }
        for s in &mut sigs {
            s.1.sort();
        }
        let distinct: BTreeSet<&(usize, Vec<(usize, usize, Vec<usize>)>)> = sigs.iter().collect();
        let rank: HashMap<_, usize> = distinct.iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let next: Vec<usize> = sigs.iter().map(|s| rank[s]).collect();
        let before = colour.iter().collect::<BTreeSet<_>>().len();
        if distinct.len() == before {
            return next;
        }
        colour = next;
    }
}

struct Canon<'a> {
    a: &'a Structure,
    /// Allowed colour for each label position.
    slot_colour: Vec<usize>,
    colour: Vec<usize>,
    frontier: Vec<Vec<Vec<Tuple>>>,
    perm: Vec<usize>,
    used: Vec<bool>,
    bits: Vec<bool>,
    best: Option<(Vec<bool>, Vec<usize>)>,
}

impl Canon<'_> {
    fn search(&mut self, k: usize) {
        let n = self.a.len();
        if k == n {
            let better = match &self.best {
                None => true,
                Some((b, _)) => self.bits < *b,
            };
            if better {
                self.best = Some((self.bits.clone(), self.perm.clone()));
            }
            return;
        }
        for e in 0..n {
            if self.used[e] || self.colour[e] != self.slot_colour[k] {
                continue;
            }
            self.perm.push(e);
            self.used[e] = true;
            let mark = self.bits.len();
            for (r, ts) in self.frontier[k].iter().enumerate() {
                for t in ts {
                    let mapped: Tuple = t.iter().map(|&l| self.perm[l]).collect();
                    self.bits.push(self.a.holds(r, &mapped));
                }
            }
            let prune = match &self.best {
                Some((b, _)) => self.bits.as_slice() > &b[..self.bits.len()],
                None => false,
            };
            if !prune {
                self.search(k + 1);
            }
            self.bits.truncate(mark);
            self.used[e] = false;
            self.perm.pop();
        }
    }
}

/// Canonical labelling: position `i` of the result is the element that
/// receives label `i`. Also returns the key.
pub fn canonical_labelling(a: &Structure) -> (Vec<usize>, CanonicalKey) {
    let n = a.len();
    let colour = refine(a);
    let mut slot_colour = colour.clone();
    slot_colour.sort_unstable();
    let frontier = (0..n)
        .map(|k| {
            a.signature()
                .iter()
                .map(|(_, arity)| frontier_tuples(k, arity))
                .collect()
        })
        .collect();
    let mut c = Canon {
        a,
        slot_colour,
        colour,
        frontier,
        perm: Vec::with_capacity(n),
        used: vec![false; n],
        bits: Vec::new(),
        best: None,
    };
    c.search(0);
    let (bits, perm) = c.best.unwrap_or_default();
    let mut packed = vec![0u64; bits.len().div_ceil(64)];
    for (i, &b) in bits.iter().enumerate() {
        if b {
            packed[i / 64] |= 1 << (63 - i % 64);
        }
    }
    (
        perm,
        CanonicalKey {
            size: n,
            bits: packed,
        },
    )
}

pub fn canonical_key(a: &Structure) -> CanonicalKey {
    canonical_labelling(a).1
}

/// Relabelled copy of `a` in canonical order, elements named `0, 1, …`.
/// Isomorphic inputs give identical outputs, the name included.
pub fn canonical_form(a: &Structure) -> Structure {
    let (perm, _) = canonical_labelling(a);
    a.permuted(&perm)
        .with_name("canonical")
        .with_element_names((0..a.len()).map(|i| i.to_string()).collect())
        .expect("numeric names are distinct")
}

/// Upper bound on the number of independent tuple slots (hence `2^slots`
/// raw candidates) an enumeration may range over.
pub const RAW_ENUMERATION_LIMIT: usize = 20;

/// Number of tuple bits for `n` elements over `sig`.
pub(crate) fn tuple_bits(sig: &Signature, n: usize) -> usize {
    sig.iter()
        .map(|(_, a)| n.saturating_pow(a as u32))
        .fold(0usize, usize::saturating_add)
}

/// Canonical representatives of the structures on `n` elements whose
/// relations are unions of the given slots (each slot a set of tuples that
/// is switched on or off as a whole) and which pass `keep`. Sorted by
/// canonical key; elements are named `0, 1, …`.
pub(crate) fn canonical_reps(
    sig: &Signature,
    n: usize,
    slots: &[Vec<(usize, Tuple)>],
    keep: impl Fn(&Structure) -> Result<bool>,
) -> Result<Vec<Structure>> {
    if slots.len() > RAW_ENUMERATION_LIMIT {
        return Err(Error::Budget(format!(
            "enumerating structures with {n} elements over [{sig}] needs 2^{} candidates",
            slots.len()
        )));
    }
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let mut reps: BTreeMap<CanonicalKey, Structure> = BTreeMap::new();
    for mask in 0u64..(1u64 << slots.len()) {
        let mut rels = vec![BTreeSet::new(); sig.len()];
        for (i, slot) in slots.iter().enumerate() {
            if mask >> i & 1 == 1 {
                for (r, t) in slot {
                    rels[*r].insert(t.clone());
                }
            }
        }
        let s = Structure::from_indices("s", sig.clone(), names.clone(), rels)?;
        if !keep(&s)? {
            continue;
        }
        let (perm, key) = canonical_labelling(&s);
        reps.entry(key).or_insert_with(|| s.permuted(&perm));
    }
    Ok(reps
        .into_values()
        .map(|s| s.with_element_names(names.clone()).expect("numeric names"))
        .collect())
}

type EnumCache = Mutex<HashMap<(Signature, usize), Arc<Vec<Structure>>>>;

fn enum_cache() -> &'static EnumCache {
    static CACHE: OnceLock<EnumCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Canonical representatives of all structures over `sig` with exactly
/// `n` elements, sorted by canonical key.
pub fn all_structures(sig: &Signature, n: usize) -> Result<Arc<Vec<Structure>>> {
    if let Some(hit) = enum_cache().lock().unwrap().get(&(sig.clone(), n)) {
        return Ok(hit.clone());
    }
    if tuple_bits(sig, n) > RAW_ENUMERATION_LIMIT {
        return Err(Error::Budget(format!(
            "enumerating all structures with {n} elements over [{sig}] needs 2^{} candidates",
            tuple_bits(sig, n)
        )));
    }
    let slots: Vec<Vec<(usize, Tuple)>> = sig
        .iter()
        .enumerate()
        .flat_map(|(r, (_, arity))| all_tuples(n, arity).into_iter().map(move |t| vec![(r, t)]))
        .collect();
    let out: Arc<Vec<Structure>> = Arc::new(
        canonical_reps(sig, n, &slots, |_| Ok(true))?
            .into_iter()
            .enumerate()
            .map(|(i, s)| s.with_name(format!("s{n}_{i}")))
            .collect(),
    );
    enum_cache()
        .lock()
        .unwrap()
        .insert((sig.clone(), n), out.clone());
    Ok(out)
}

/// All `arity`-tuples over `0..n` in lexicographic order.
pub fn all_tuples(n: usize, arity: usize) -> Vec<Tuple> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut cur = vec![0; arity];
    loop {
        out.push(cur.clone());
        let mut i = arity;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] + 1 < n {
                cur[i] += 1;
                for c in cur.iter_mut().skip(i + 1) {
                    *c = 0;
                }
                break;
            }
        }
    }
}
