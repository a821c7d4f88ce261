//! Classes of finite structures: ages, built-in classes, and checks of the
//! class properties HP, JEP, AP and HAP at bounded size.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::ops::ControlFlow;
use std::sync::{Arc, Mutex, OnceLock};

use crate::canon::{
    all_structures, all_tuples, canonical_key, canonical_labelling, canonical_reps, tuple_bits,
    CanonicalKey, RAW_ENUMERATION_LIMIT,
};
use crate::error::{Error, Result};
use crate::homsearch::{
    enumerate_maps, exists_map, for_each_map, hom_equivalent, search_map, subsets_of_size,
    Decision, VarOrder,
};
use crate::structures::{
    check_map, check_partial_map, ensure_same_signature, Mode, PartialMap, Signature, Structure,
    Tuple,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClassKind {
    AgeOf(Structure),
    /// Symmetric irreflexive `E/2`.
    AllGraphs,
    /// Any binary relation `E/2`, loops allowed.
    AllDigraphs,
    /// Strict linear orders, `E` read as `<`.
    LinearOrders,
    /// Structures into which none of the listed structures embeds.
    Forbidden(Vec<Structure>),
    /// The isomorphism closure of the listed structures.
    Explicit(Vec<Structure>),
}

/// A class of finite structures given by a membership test and an
/// enumerator of canonical representatives.
pub struct ClassOracle {
    signature: Signature,
    kind: ClassKind,
    keys: BTreeSet<CanonicalKey>,
    cache: Mutex<BTreeMap<usize, Arc<Vec<Structure>>>>,
}

impl Clone for ClassOracle {
    fn clone(&self) -> Self {
        ClassOracle {
            signature: self.signature.clone(),
            kind: self.kind.clone(),
            keys: self.keys.clone(),
            cache: Mutex::new(self.cache.lock().unwrap().clone()),
        }
    }
}

impl fmt::Debug for ClassOracle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ClassOracle({})", self.describe())
    }
}

impl ClassOracle {
    fn with_kind(signature: Signature, kind: ClassKind) -> Self {
        ClassOracle {
            signature,
            kind,
            keys: BTreeSet::new(),
            cache: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn age_of(a: &Structure) -> Self {
        Self::with_kind(a.signature().clone(), ClassKind::AgeOf(a.clone()))
    }

    pub fn all_graphs() -> Self {
        Self::with_kind(Signature::binary(), ClassKind::AllGraphs)
    }

    pub fn all_digraphs() -> Self {
        Self::with_kind(Signature::binary(), ClassKind::AllDigraphs)
    }

    pub fn linear_orders() -> Self {
        Self::with_kind(Signature::binary(), ClassKind::LinearOrders)
    }

    pub fn forbidden(signature: Signature, list: Vec<Structure>) -> Result<Self> {
        check_list(&signature, &list)?;
        Ok(Self::with_kind(signature, ClassKind::Forbidden(list)))
    }

    pub fn explicit(signature: Signature, list: Vec<Structure>) -> Result<Self> {
        check_list(&signature, &list)?;
        let mut c = Self::with_kind(signature, ClassKind::Explicit(list.clone()));
        c.keys = list.iter().map(canonical_key).collect();
        Ok(c)
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn kind(&self) -> &ClassKind {
        &self.kind
    }

    /// Short description in class-spec style.
    pub fn describe(&self) -> String {
        let names = |l: &[Structure]| {
            l.iter()
                .map(|s| s.name().to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        match &self.kind {
            ClassKind::AgeOf(a) => format!("age-of:{}", a.name()),
            ClassKind::AllGraphs => "all-graphs".into(),
            ClassKind::AllDigraphs => "all-digraphs".into(),
            ClassKind::LinearOrders => "linear-orders".into(),
            ClassKind::Forbidden(l) => format!("forbidden:{}", names(l)),
            ClassKind::Explicit(l) => format!("explicit:{}", names(l)),
        }
    }

    /// Membership; structures over another signature are never members.
    pub fn contains(&self, c: &Structure) -> Result<bool> {
        if c.signature() != &self.signature || c.is_empty() {
            return Ok(false);
        }
        Ok(match &self.kind {
            ClassKind::AgeOf(a) => exists_map(c, a, Mode::Embedding)?,
            ClassKind::AllGraphs => is_graph(c),
            ClassKind::AllDigraphs => true,
            ClassKind::LinearOrders => is_linear_order(c),
            ClassKind::Forbidden(list) => {
                for f in list {
                    if exists_map(f, c, Mode::Embedding)? {
                        return Ok(false);
                    }
                }
                true
            }
            ClassKind::Explicit(_) => self.keys.contains(&canonical_key(c)),
        })
    }

    /// Canonical representatives of the members with exactly `k` elements,
    /// sorted by canonical key. Member `i` of size `k` is named `m<k>_<i>`.
    pub fn members(&self, k: usize) -> Result<Arc<Vec<Structure>>> {
        if let Some(hit) = self.cache.lock().unwrap().get(&k) {
            return Ok(hit.clone());
        }
        let raw: Vec<Structure> = if k == 0 {
            Vec::new()
        } else {
            match &self.kind {
                ClassKind::AgeOf(a) => reps_of(
                    subsets_of_size(a.len(), k)
                        .iter()
                        .map(|s| a.induced(s))
                        .collect::<Result<Vec<_>>>()?,
                ),
                ClassKind::Explicit(list) => {
                    reps_of(list.iter().filter(|s| s.len() == k).cloned().collect())
                }
                ClassKind::LinearOrders => reps_of(vec![crate::catalog::linear_order(k)]),
                ClassKind::AllGraphs => {
                    let slots: Vec<Vec<(usize, Tuple)>> = (0..k)
                        .flat_map(|i| (i + 1..k).map(move |j| vec![(0, vec![i, j]), (0, vec![j, i])]))
                        .collect();
                    canonical_reps(&self.signature, k, &slots, |_| Ok(true))?
                }
                ClassKind::AllDigraphs => all_structures(&self.signature, k)?.to_vec(),
                ClassKind::Forbidden(_) => {
                    let mut keep = Vec::new();
                    for s in all_structures(&self.signature, k)?.iter() {
                        if self.contains(s)? {
                            keep.push(s.clone());
                        }
                    }
                    keep
                }
            }
        };
        let out: Arc<Vec<Structure>> = Arc::new(
            raw.into_iter()
                .enumerate()
                .map(|(i, s)| s.with_name(format!("m{k}_{i}")))
                .collect(),
        );
        self.cache.lock().unwrap().insert(k, out.clone());
        Ok(out)
    }

    /// Representatives of all members with at most `n` elements, sorted by
    /// size, then canonical key.
    pub fn enumerate_up_to(&self, n: usize) -> Result<Vec<Structure>> {
        let mut out = Vec::new();
        for k in 1..=n {
            out.extend(self.members(k)?.iter().cloned());
        }
        Ok(out)
    }

    /// Size of the largest member, when the class is known to be finite.
    pub fn max_member_size(&self) -> Option<usize> {
        match &self.kind {
            ClassKind::AgeOf(a) => Some(a.len()),
            ClassKind::Explicit(l) => Some(l.iter().map(Structure::len).max().unwrap_or(0)),
            _ => None,
        }
    }

    /// Closed under induced substructures.
    pub fn is_hereditary(&self) -> bool {
        match &self.kind {
            ClassKind::Explicit(list) => list.iter().all(|s| {
                (1..s.len()).all(|k| {
                    subsets_of_size(s.len(), k).iter().all(|sub| {
                        s.induced(sub)
                            .map(|t| self.keys.contains(&canonical_key(&t)))
                            .unwrap_or(false)
                    })
                })
            }),
            _ => true,
        }
    }

    /// Whether [`members`](Self::members) can list every size up to `m`
    /// within the raw enumeration limit.
    pub fn enumeration_feasible(&self, m: usize) -> bool {
        match &self.kind {
            ClassKind::AgeOf(_) | ClassKind::Explicit(_) | ClassKind::LinearOrders => true,
            ClassKind::AllGraphs => m * m.saturating_sub(1) / 2 <= RAW_ENUMERATION_LIMIT,
            ClassKind::AllDigraphs | ClassKind::Forbidden(_) => {
                tuple_bits(&self.signature, m) <= RAW_ENUMERATION_LIMIT
            }
        }
    }
}

fn check_list(signature: &Signature, list: &[Structure]) -> Result<()> {
    for s in list {
        if s.signature() != signature {
            return Err(Error::SignatureMismatch {
                left: signature.to_string(),
                right: s.signature().to_string(),
            });
        }
    }
    Ok(())
}

/// Canonical representatives, deduplicated and sorted by key.
fn reps_of(list: Vec<Structure>) -> Vec<Structure> {
    let mut reps = BTreeMap::new();
    for s in list {
        let (perm, key) = canonical_labelling(&s);
        reps.entry(key).or_insert_with(|| {
            s.permuted(&perm)
                .with_element_names((0..s.len()).map(|i| i.to_string()).collect())
                .expect("numeric names")
        });
    }
    reps.into_values().collect()
}

fn is_graph(c: &Structure) -> bool {
    c.signature() == &Signature::binary()
        && c.relation(0)
            .iter()
            .all(|t| t[0] != t[1] && c.holds(0, &[t[1], t[0]]))
}

fn is_linear_order(c: &Structure) -> bool {
    if c.signature() != &Signature::binary() {
        return false;
    }
    let n = c.len();
    for x in 0..n {
        if c.holds(0, &[x, x]) {
            return false;
        }
        for y in 0..n {
            if x != y && c.holds(0, &[x, y]) == c.holds(0, &[y, x]) {
                return false;
            }
            for z in 0..n {
                if c.holds(0, &[x, y]) && c.holds(0, &[y, z]) && !c.holds(0, &[x, z]) {
                    return false;
                }
            }
        }
    }
    true
}

/// Members of `age_of(a)` with at most `n` elements.
pub fn age(a: &Structure, n: usize) -> Result<Vec<Structure>> {
    ClassOracle::age_of(a).enumerate_up_to(n)
}

/// A completed square: `g1: B1 → C`, `g2: B2 → C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Amalgam {
    pub c: Structure,
    pub g1: PartialMap,
    pub g2: PartialMap,
}

/// Gluing data for a square: the two structures to be joined, which
/// element of `b1` each element of `b2` must land on (if any), and the
/// mode required of the second leg. The first leg is always an embedding.
struct Square<'a> {
    b1: &'a Structure,
    b2: &'a Structure,
    glue: Vec<Option<usize>>,
    leg2: Mode,
}

/// Where an unglued element of `b2` goes: an element of `b1` or a new
/// element (numbered in order of first use).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Slot {
    Old(usize),
    New(usize),
}

impl Square<'_> {
    fn unglued(&self) -> Vec<usize> {
        (0..self.b2.len()).filter(|&x| self.glue[x].is_none()).collect()
    }

    fn pushout_size(&self) -> usize {
        self.b1.len() + self.unglued().len()
    }

    /// The structure on `b1` plus the new slots, with the images of all
    /// tuples of `b1` and `b2`.
    fn build(&self, assign: &[Slot]) -> Result<Amalgam> {
        let unglued = self.unglued();
        let fresh = assign
            .iter()
            .filter_map(|s| match s {
                Slot::New(i) => Some(i + 1),
                Slot::Old(_) => None,
            })
            .max()
            .unwrap_or(0);
        let size = self.b1.len() + fresh;
        let mut taken: HashSet<String> = self.b1.elements().iter().cloned().collect();
        let mut elements = self.b1.elements().to_vec();
        let mut images = vec![0; self.b2.len()];
        for (x, g) in self.glue.iter().enumerate() {
            if let Some(y) = g {
                images[x] = *y;
            }
        }
        for (k, &x) in unglued.iter().enumerate() {
            images[x] = match assign[k] {
                Slot::Old(y) => y,
                Slot::New(i) => {
                    let pos = self.b1.len() + i;
                    if elements.len() == pos {
                        let name = Structure::fresh_name(&taken, self.b2.element(x));
                        taken.insert(name.clone());
                        elements.push(name);
                    }
                    pos
                }
            };
        }
        let mut relations: Vec<BTreeSet<Tuple>> = self.b1.relations().to_vec();
        for (r, rel) in self.b2.relations().iter().enumerate() {
            for t in rel {
                relations[r].insert(t.iter().map(|&x| images[x]).collect());
            }
        }
        let name = format!("{}*{}", self.b1.name(), self.b2.name());
        let c = Structure::from_indices(name, self.b1.signature().clone(), elements, relations)?;
        Ok(Amalgam {
            g1: PartialMap::total((0..self.b1.len()).collect(), size)?,
            g2: PartialMap::total(images, size)?,
            c,
        })
    }

    fn accepts(&self, class: &ClassOracle, m: usize, am: &Amalgam) -> Result<bool> {
        Ok(am.c.len() <= m
            && check_map(self.b1, &am.c, &am.g1, Mode::Embedding)?
            && check_map(self.b2, &am.c, &am.g2, self.leg2)?
            && class.contains(&am.c)?)
    }

    /// Assignments of the unglued elements other than the pushout itself,
    /// ordered by number of merged elements, then lexicographically.
    fn quotient_assignments(&self) -> Option<Vec<Vec<Slot>>> {
        let unglued = self.unglued();
        let k = unglued.len();
        let used_by_glue: HashSet<usize> = self.glue.iter().flatten().copied().collect();
        let choices = self.b1.len() + k;
        if (choices as f64).powi(k as i32) > QUOTIENT_CAP as f64 {
            return None;
        }
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(k);
        fn rec(
            sq: &Square<'_>,
            k: usize,
            used_by_glue: &HashSet<usize>,
            cur: &mut Vec<Slot>,
            next_new: usize,
            out: &mut Vec<Vec<Slot>>,
        ) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for y in 0..sq.b1.len() {
                if sq.leg2.injective() && (used_by_glue.contains(&y) || cur.contains(&Slot::Old(y))) {
                    continue;
                }
                cur.push(Slot::Old(y));
                rec(sq, k, used_by_glue, cur, next_new, out);
                cur.pop();
            }
            let news: Vec<usize> = if sq.leg2.injective() {
                vec![next_new]
            } else {
                (0..=next_new).collect()
            };
            for i in news {
                cur.push(Slot::New(i));
                rec(sq, k, used_by_glue, cur, next_new.max(i + 1), out);
                cur.pop();
            }
        }
        rec(self, k, &used_by_glue, &mut cur, 0, &mut out);
        let merges = |a: &Vec<Slot>| {
            let new: HashSet<_> = a.iter().filter(|s| matches!(s, Slot::New(_))).collect();
            k - new.len()
        };
        out.retain(|a| merges(a) > 0);
        out.sort_by_key(|a| (merges(a), a.clone()));
        Some(out)
    }
}

const QUOTIENT_CAP: usize = 200_000;
const EXTENSION_CAP: usize = 50_000;

/// Result of a bounded witness search. `complete` records that every
/// member of the class up to the bound was tried.
enum WitnessSearch {
    Found(Amalgam),
    NotFound { complete: bool },
}

/// Searches a member `C` (at most `m` elements) with an embedding of `b1`
/// and a `leg2` map of `b2` that agree on the glue. Candidates in order:
/// the pushout, its quotients, one-tuple extensions of those, and finally
/// (when the class can be enumerated that far) every member.
fn find_witness(class: &ClassOracle, sq: &Square<'_>, m: usize) -> Result<WitnessSearch> {
    let pushout = sq.build(&(0..sq.unglued().len()).map(Slot::New).collect::<Vec<_>>())?;
    if sq.accepts(class, m, &pushout)? {
        return Ok(WitnessSearch::Found(pushout));
    }
    let mut bases = vec![pushout];
    if let Some(assignments) = sq.quotient_assignments() {
        for a in assignments {
            let am = sq.build(&a)?;
            if sq.accepts(class, m, &am)? {
                return Ok(WitnessSearch::Found(am));
            }
            if bases.len() < EXTENSION_CAP {
                bases.push(am);
            }
        }
    }
    let mut tried = 0usize;
    'bases: for base in &bases {
        let img1: HashSet<usize> = base.g1.image().into_iter().collect();
        let img2: HashSet<usize> = base.g2.image().into_iter().collect();
        for (r, (_, arity)) in base.c.signature().iter().enumerate() {
            for t in all_tuples(base.c.len(), arity) {
                if base.c.holds(r, &t)
                    || t.iter().all(|x| img1.contains(x))
                    || (sq.leg2.reflecting() && t.iter().all(|x| img2.contains(x)))
                {
                    continue;
                }
                for closed in [false, true] {
                    let added = if closed { permutations(&t) } else { vec![t.clone()] };
                    if closed && added.len() == 1 {
                        continue;
                    }
                    tried += 1;
                    if tried > EXTENSION_CAP {
                        break 'bases;
                    }
                    let mut rels = base.c.relations().to_vec();
                    rels[r].extend(added);
                    let c = Structure::from_indices(
                        base.c.name(),
                        base.c.signature().clone(),
                        base.c.elements().to_vec(),
                        rels,
                    )?;
                    let am = Amalgam {
                        c,
                        g1: base.g1.clone(),
                        g2: base.g2.clone(),
                    };
                    if sq.accepts(class, m, &am)? {
                        return Ok(WitnessSearch::Found(am));
                    }
                }
            }
        }
    }
    if !class.enumeration_feasible(m) {
        return Ok(WitnessSearch::NotFound { complete: false });
    }
    let lo = if sq.leg2.injective() {
        sq.b1.len().max(sq.b2.len())
    } else {
        sq.b1.len()
    };
    for k in lo.max(1)..=m {
        for c in class.members(k)?.iter() {
            if let Some(am) = square_into(sq, c)? {
                return Ok(WitnessSearch::Found(am));
            }
        }
    }
    Ok(WitnessSearch::NotFound { complete: true })
}

/// Completes the square inside the given structure, if possible.
fn square_into(sq: &Square<'_>, c: &Structure) -> Result<Option<Amalgam>> {
    let mut found = None;
    let mut err = None;
    for_each_map(
        sq.b1,
        c,
        Mode::Embedding,
        &PartialMap::empty(sq.b1.len(), c.len()),
        VarOrder::Lexicographic,
        |g1| {
            let seed = PartialMap::from_images(
                sq.glue.iter().map(|g| g.map(|y| g1[y])).collect(),
                c.len(),
            )
            .expect("glue images lie in the carrier");
            let attempt = check_partial_map(sq.b2, c, &seed, sq.leg2).and_then(|ok| {
                if ok {
                    Ok(search_map(sq.b2, c, sq.leg2, &seed)?.into_map())
                } else {
                    Ok(None)
                }
            });
            match attempt {
                Ok(Some(g2)) => {
                    found = Some(Amalgam {
                        c: c.clone(),
                        g1: PartialMap::total(g1.to_vec(), c.len()).expect("total"),
                        g2,
                    });
                    ControlFlow::Break(())
                }
                Ok(None) => ControlFlow::Continue(()),
                Err(e) => {
                    err = Some(e);
                    ControlFlow::Break(())
                }
            }
        },
    )?;
    match err {
        Some(e) => Err(e),
        None => Ok(found),
    }
}

fn permutations(t: &[usize]) -> Vec<Tuple> {
    let mut out = BTreeSet::new();
    fn rec(rest: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut BTreeSet<Tuple>) {
        if rest.is_empty() {
            out.insert(cur.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            cur.push(x);
            rec(rest, cur, out);
            cur.pop();
            rest.insert(i, x);
        }
    }
    rec(&mut t.to_vec(), &mut Vec::new(), &mut out);
    out.into_iter().collect()
}

/// The pushout of a homomorphism `f1: A → B1` and an embedding
/// `f2: A ↪ B2`: `B1` plus the elements of `B2` outside the image of `f2`,
/// with the images of all tuples.
pub fn free_amalgam(
    a: &Structure,
    b1: &Structure,
    f1: &PartialMap,
    b2: &Structure,
    f2: &PartialMap,
) -> Result<Amalgam> {
    ensure_same_signature(a, b1)?;
    ensure_same_signature(a, b2)?;
    if !check_map(a, b1, f1, Mode::Hom)? {
        return Err(Error::precondition("f1 is not a homomorphism"));
    }
    if !check_map(a, b2, f2, Mode::Embedding)? {
        return Err(Error::precondition("f2 is not an embedding"));
    }
    let sq = square(a, b1, f1, b2, f2, Mode::Hom);
    sq.build(&(0..sq.unglued().len()).map(Slot::New).collect::<Vec<_>>())
}

fn square<'a>(
    a: &Structure,
    b1: &'a Structure,
    f1: &PartialMap,
    b2: &'a Structure,
    f2: &PartialMap,
    leg2: Mode,
) -> Square<'a> {
    let mut glue = vec![None; b2.len()];
    for x in 0..a.len() {
        if let (Some(y1), Some(y2)) = (f1.get(x), f2.get(x)) {
            glue[y2] = Some(y1);
        }
    }
    Square { b1, b2, glue, leg2 }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassProperty {
    Hp,
    Jep,
    Ap,
    Hap,
}

impl ClassProperty {
    pub fn as_str(self) -> &'static str {
        match self {
            ClassProperty::Hp => "HP",
            ClassProperty::Jep => "JEP",
            ClassProperty::Ap => "AP",
            ClassProperty::Hap => "HAP",
        }
    }
}

impl fmt::Display for ClassProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A configuration a property quantifies over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Configuration {
    /// A member with a non-member induced substructure.
    Hereditary { member: Structure, sub: Structure },
    /// Two members to be jointly embedded.
    Joint { a: Structure, b: Structure },
    /// `f1: A → B1` and the embedding `f2: A ↪ B2`.
    Square {
        a: Structure,
        b1: Structure,
        b2: Structure,
        f1: PartialMap,
        f2: PartialMap,
    },
}

impl Configuration {
    /// The structures involved, renamed after their role.
    pub fn structures(&self) -> Vec<Structure> {
        match self {
            Configuration::Hereditary { member, sub } => {
                vec![member.clone().with_name("member"), sub.clone().with_name("sub")]
            }
            Configuration::Joint { a, b } => {
                vec![a.clone().with_name("A"), b.clone().with_name("B")]
            }
            Configuration::Square { a, b1, b2, .. } => vec![
                a.clone().with_name("A"),
                b1.clone().with_name("B1"),
                b2.clone().with_name("B2"),
            ],
        }
    }

    /// One line per map, e.g. `f1: 0->1, 1->0`.
    pub fn describe_maps(&self) -> Vec<String> {
        match self {
            Configuration::Square { a, b1, b2, f1, f2 } => vec![
                format!("f1: {}", f1.describe(a, b1)),
                format!("f2: {}", f2.describe(a, b2)),
            ],
            _ => Vec::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerdictOutcome {
    Holds,
    Fails(Configuration),
    /// Configurations without a witness within the bound whose failure
    /// could not be certified.
    Inconclusive(Vec<Configuration>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropertyVerdict {
    pub property: ClassProperty,
    pub size_bound: usize,
    pub amalgam_bound: usize,
    pub outcome: VerdictOutcome,
}

impl PropertyVerdict {
    pub fn holds(&self) -> bool {
        self.outcome == VerdictOutcome::Holds
    }

    pub fn fails(&self) -> bool {
        matches!(self.outcome, VerdictOutcome::Fails(_))
    }

    pub fn outcome_word(&self) -> &'static str {
        match self.outcome {
            VerdictOutcome::Holds => "holds",
            VerdictOutcome::Fails(_) => "fails",
            VerdictOutcome::Inconclusive(_) => "inconclusive",
        }
    }
}

/// Verifies a class property on all members with at most `n` elements,
/// looking for witnesses with at most `m` elements.
///
/// A missing witness is a certified failure only when every member up to
/// `m` was tried and either the class has no members above `m`, or it is
/// hereditary and `m` covers the pushout (any witness then restricts to
/// one inside the union of the two images).
pub fn check_class_property(
    class: &ClassOracle,
    property: ClassProperty,
    n: usize,
    m: usize,
) -> Result<PropertyVerdict> {
    if n == 0 || m < n {
        return Err(Error::precondition(format!(
            "bounds need 1 <= n <= m, got n={n}, m={m}"
        )));
    }
    let members = class.enumerate_up_to(n)?;
    let verdict = |outcome| PropertyVerdict {
        property,
        size_bound: n,
        amalgam_bound: m,
        outcome,
    };
    let mut blocked = Vec::new();
    let certified = |sq: &Square<'_>| {
        class.max_member_size().is_some_and(|s| s <= m)
            || (class.is_hereditary() && m >= sq.pushout_size())
    };
    match property {
        ClassProperty::Hp => {
            for member in &members {
                for k in 1..member.len() {
                    for sub in subsets_of_size(member.len(), k) {
                        let s = member.induced(&sub)?;
                        if !class.contains(&s)? {
                            return Ok(verdict(VerdictOutcome::Fails(
                                Configuration::Hereditary {
                                    member: member.clone(),
                                    sub: s,
                                },
                            )));
                        }
                    }
                }
            }
        }
        ClassProperty::Jep => {
            for (i, a) in members.iter().enumerate() {
                for b in &members[i..] {
                    let sq = Square {
                        b1: a,
                        b2: b,
                        glue: vec![None; b.len()],
                        leg2: Mode::Embedding,
                    };
                    if let WitnessSearch::NotFound { complete } = find_witness(class, &sq, m)? {
                        let config = Configuration::Joint {
                            a: a.clone(),
                            b: b.clone(),
                        };
                        if complete && certified(&sq) {
                            return Ok(verdict(VerdictOutcome::Fails(config)));
                        }
                        blocked.push(config);
                    }
                }
            }
        }
        ClassProperty::Ap | ClassProperty::Hap => {
            let (leg1, leg2) = if property == ClassProperty::Ap {
                (Mode::Embedding, Mode::Embedding)
            } else {
                (Mode::Hom, Mode::Hom)
            };
            for a in &members {
                for b1 in &members {
                    let f1s = enumerate_maps(a, b1, leg1, &PartialMap::empty(a.len(), b1.len()))?;
                    if f1s.is_empty() {
                        continue;
                    }
                    for b2 in members.iter().filter(|b| b.len() >= a.len()) {
                        let f2s =
                            enumerate_maps(a, b2, Mode::Embedding, &PartialMap::empty(a.len(), b2.len()))?;
                        for f1 in &f1s {
                            for f2 in &f2s {
                                let sq = square(a, b1, f1, b2, f2, leg2);
                                if let WitnessSearch::NotFound { complete } =
                                    find_witness(class, &sq, m)?
                                {
                                    let config = Configuration::Square {
                                        a: a.clone(),
                                        b1: b1.clone(),
                                        b2: b2.clone(),
                                        f1: f1.clone(),
                                        f2: f2.clone(),
                                    };
                                    if complete && certified(&sq) {
                                        return Ok(verdict(VerdictOutcome::Fails(config)));
                                    }
                                    blocked.push(config);
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(verdict(if blocked.is_empty() {
        VerdictOutcome::Holds
    } else {
        VerdictOutcome::Inconclusive(blocked)
    }))
}

/// Completes a square for the chain construction: `f1: A → H` (a
/// homomorphism, or an embedding when `leg2` is an embedding mode) and the
/// inclusion `A ≤ B` given as `f2`. Returns `None` when no witness with at
/// most `m` elements was found.
pub(crate) fn amalgamate(
    class: &ClassOracle,
    a: &Structure,
    h: &Structure,
    f1: &PartialMap,
    b: &Structure,
    f2: &PartialMap,
    leg2: Mode,
    m: usize,
) -> Result<Option<Amalgam>> {
    let sq = square(a, h, f1, b, f2, leg2);
    // Prefer extending inside `h` with `h` fixed pointwise.
    let seed = PartialMap::from_images(sq.glue.clone(), h.len())?;
    if check_partial_map(b, h, &seed, leg2)? {
        if let Some(g2) = search_map(b, h, leg2, &seed)?.into_map() {
            return Ok(Some(Amalgam {
                c: h.clone(),
                g1: PartialMap::identity(h.len()),
                g2,
            }));
        }
    }
    Ok(match find_witness(class, &sq, m)? {
        WitnessSearch::Found(am) => Some(am),
        WitnessSearch::NotFound { .. } => None,
    })
}

/// Joint embedding for the chain construction: `h` and `b` into one member.
pub(crate) fn joint_embed(
    class: &ClassOracle,
    h: &Structure,
    b: &Structure,
    m: usize,
) -> Result<Option<Amalgam>> {
    if let Some(g2) = search_map(b, h, Mode::Embedding, &PartialMap::empty(b.len(), h.len()))?.into_map() {
        return Ok(Some(Amalgam {
            c: h.clone(),
            g1: PartialMap::identity(h.len()),
            g2,
        }));
    }
    let sq = Square {
        b1: h,
        b2: b,
        glue: vec![None; b.len()],
        leg2: Mode::Embedding,
    };
    Ok(match find_witness(class, &sq, m)? {
        WitnessSearch::Found(am) => Some(am),
        WitnessSearch::NotFound { .. } => None,
    })
}

/// Every member of `ca` with at most `n` elements maps homomorphically to
/// some member of `cb` with at most `n` elements.
pub fn age_projects(ca: &ClassOracle, cb: &ClassOracle, n: usize) -> Result<Decision<Structure>> {
    if ca.signature() != cb.signature() {
        return Err(Error::SignatureMismatch {
            left: ca.signature().to_string(),
            right: cb.signature().to_string(),
        });
    }
    let targets = cb.enumerate_up_to(n)?;
    'members: for a in ca.enumerate_up_to(n)? {
        for b in &targets {
            if exists_map(&a, b, Mode::Hom)? {
                continue 'members;
            }
        }
        return Ok(Decision::No(a));
    }
    Ok(Decision::Yes)
}

/// Why `H ≼ H2` fails at a bounded size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrecedenceWitness {
    /// A member of the age of `H2` that does not embed into `H`.
    NotEmbedded(Structure),
    /// Positions `a ⊂ b` of `H` and a homomorphism from `H[a]` to `H2`
    /// (as a partial map from `H`) with no extension to `H[b]`.
    NoExtension {
        a: Vec<usize>,
        b: Vec<usize>,
        map: PartialMap,
    },
}

/// Bounded check of `Age(H) ⊇ Age(H2)` together with the extension of
/// homomorphisms from induced `A ≤ B ≤ H` (with `A` non-empty) into `H2`.
pub fn hom_precedes(h: &Structure, h2: &Structure, n: usize) -> Result<Decision<PrecedenceWitness>> {
    ensure_same_signature(h, h2)?;
    for c in age(h2, n)? {
        if !exists_map(&c, h, Mode::Embedding)? {
            return Ok(Decision::No(PrecedenceWitness::NotEmbedded(c)));
        }
    }
    for kb in 2..=n.min(h.len()) {
        for b in subsets_of_size(h.len(), kb) {
            let hb = h.induced(&b)?;
            for ka in 1..kb {
                for pos in subsets_of_size(kb, ka) {
                    let a: Vec<usize> = pos.iter().map(|&i| b[i]).collect();
                    let ha = h.induced(&a)?;
                    for f in enumerate_maps(&ha, h2, Mode::Hom, &PartialMap::empty(ha.len(), h2.len()))? {
                        let mut seed = PartialMap::empty(hb.len(), h2.len());
                        for (i, &p) in pos.iter().enumerate() {
                            seed.insert(p, f.get(i).expect("total"))?;
                        }
                        if !search_map(&hb, h2, Mode::Hom, &seed)?.is_found() {
                            let mut map = PartialMap::empty(h.len(), h2.len());
                            for (i, &x) in a.iter().enumerate() {
                                map.insert(x, f.get(i).expect("total"))?;
                            }
                            return Ok(Decision::No(PrecedenceWitness::NoExtension { a, b, map }));
                        }
                    }
                }
            }
        }
    }
    Ok(Decision::Yes)
}

type ProfileCache = Mutex<HashMap<(CanonicalKey, Signature, usize), Arc<Vec<bool>>>>;

fn profile_cache() -> &'static ProfileCache {
    static CACHE: OnceLock<ProfileCache> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// For every structure on exactly `k` elements (in enumeration order),
/// whether it maps to `t`.
fn csp_profile(t: &Structure, k: usize) -> Result<Arc<Vec<bool>>> {
    let key = (canonical_key(t), t.signature().clone(), k);
    if let Some(hit) = profile_cache().lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }
    let profile: Arc<Vec<bool>> = Arc::new(
        all_structures(t.signature(), k)?
            .iter()
            .map(|c| exists_map(c, t, Mode::Hom))
            .collect::<Result<_>>()?,
    );
    profile_cache().lock().unwrap().insert(key, profile.clone());
    Ok(profile)
}

/// Whether `A` and `B` accept the same structures with at most `n`
/// elements, decided by enumeration. The answer is cross-checked against
/// homomorphic equivalence; a disagreement is an invariant error.
pub fn csp_equivalent(a: &Structure, b: &Structure, n: usize) -> Result<Decision<Structure>> {
    ensure_same_signature(a, b)?;
    let mut direct = Decision::Yes;
    // The templates themselves are the most telling witnesses.
    for t in [a, b] {
        if t.len() <= n && exists_map(t, a, Mode::Hom)? != exists_map(t, b, Mode::Hom)? {
            direct = Decision::No(t.clone());
        }
    }
    'sizes: for k in 1..=n {
        if !direct.is_yes() {
            break;
        }
        let (pa, pb) = (csp_profile(a, k)?, csp_profile(b, k)?);
        for (i, (x, y)) in pa.iter().zip(pb.iter()).enumerate() {
            if x != y {
                direct = Decision::No(all_structures(a.signature(), k)?[i].clone());
                break 'sizes;
            }
        }
    }
    let equivalent = hom_equivalent(a, b)?;
    let consistent = if equivalent {
        direct.is_yes()
    } else {
        // A distinguishing structure exists among A and B themselves.
        n < a.len().max(b.len()) || !direct.is_yes()
    };
    if !consistent {
        return Err(Error::Invariant(format!(
            "bounded CSP comparison of {} and {} disagrees with homomorphic equivalence",
            a.name(),
            b.name()
        )));
    }
    Ok(direct)
}
