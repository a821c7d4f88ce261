//! Tuple type orders, hom-irreducibility and cores.

use std::collections::HashMap;
use std::ops::ControlFlow;

use crate::ages::{ClassKind, ClassOracle};
use crate::canon::all_tuples;
use crate::error::{Error, Result};
use crate::homsearch::{for_each_map, search_map, subsets_of_size, Decision, VarOrder};
use crate::structures::{check_map, check_partial_map, Mode, PartialMap, Structure, Tuple};

/// Largest number of tuples a type order is built over.
pub const TUPLE_LIMIT: usize = 1 << 12;

/// The map `a_i ↦ b_i`, or `None` when it is not a function.
fn tuple_map(a: &Structure, x: &[usize], y: &[usize]) -> Option<PartialMap> {
    let mut m = PartialMap::empty(a.len(), a.len());
    for (&p, &q) in x.iter().zip(y) {
        match m.get(p) {
            Some(v) if v != q => return None,
            Some(_) => {}
            None => m.insert(p, q).ok()?,
        }
    }
    Some(m)
}

/// `a ≤ b`: the map `a_i ↦ b_i` is a local homomorphism of `A`.
pub fn tuple_leq(a: &Structure, x: &[usize], y: &[usize]) -> Result<bool> {
    if x.len() != y.len() {
        return Err(Error::precondition(format!(
            "tuples of lengths {} and {}",
            x.len(),
            y.len()
        )));
    }
    if let Some(&e) = x.iter().chain(y).find(|&&e| e >= a.len()) {
        return Err(Error::Domain(format!("#{e}")));
    }
    match tuple_map(a, x, y) {
        Some(m) => check_partial_map(a, a, &m, Mode::Hom),
        None => Ok(false),
    }
}

/// Which maps define the quasiorder on tuples.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TypeOrder {
    /// `a ≤ b` when a local homomorphism sends `a` to `b`.
    LocalHom,
    /// `a ≤ b` when an endomorphism sends `a` to `b`; the up-sets are the
    /// relations defined by positive existential types.
    Endomorphism,
}

/// The quasiorder on `n`-tuples, quotiented into classes.
#[derive(Clone, Debug)]
pub struct TupleOrder {
    pub base: Structure,
    pub arity: usize,
    pub order_kind: TypeOrder,
    /// Classes in order of their least tuple; each class sorted.
    pub classes: Vec<Vec<Tuple>>,
    /// `leq[c][d]` for classes `c` and `d`.
    pub leq: Vec<Vec<bool>>,
    pub maximal: Vec<bool>,
    class_of: HashMap<Tuple, usize>,
}

impl TupleOrder {
    pub fn class_of(&self, t: &[usize]) -> Option<usize> {
        self.class_of.get(t).copied()
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Classes lying strictly above `c`.
    pub fn above(&self, c: usize) -> Vec<usize> {
        (0..self.len())
            .filter(|&d| d != c && self.leq[c][d])
            .collect()
    }

    /// Number of up-closed sets of classes (the empty and full ones
    /// included): the number of relations invariant under the maps that
    /// define the order.
    pub fn up_set_count(&self) -> u128 {
        let all: Vec<bool> = vec![true; self.len()];
        let mut memo = HashMap::new();
        self.count_up_sets(all, &mut memo)
    }

    fn count_up_sets(&self, present: Vec<bool>, memo: &mut HashMap<Vec<bool>, u128>) -> u128 {
        let Some(x) = present.iter().position(|&p| p) else {
            return 1;
        };
        if let Some(&n) = memo.get(&present) {
            return n;
        }
        // Up-sets without x avoid everything below x; those with x
        // contain everything above it.
        let without: Vec<bool> = (0..self.len())
            .map(|y| present[y] && !self.leq[y][x])
            .collect();
        let with: Vec<bool> = (0..self.len())
            .map(|y| present[y] && !self.leq[x][y])
            .collect();
        let n = self.count_up_sets(without, memo) + self.count_up_sets(with, memo);
        memo.insert(present, n);
        n
    }

    /// The principal up-set of class `c`, as class flags.
    pub fn principal_up_set(&self, c: usize) -> Vec<bool> {
        (0..self.len()).map(|d| self.leq[c][d]).collect()
    }

    /// All non-empty up-sets, as class flags, in order of their bit
    /// encoding. Fails when there are more than `cap`.
    pub fn up_sets(&self, cap: usize) -> Result<Vec<Vec<bool>>> {
        let count = self.up_set_count();
        if count > cap as u128 + 1 {
            return Err(Error::Budget(format!(
                "{count} up-sets of the arity-{} type order exceed the cap of {cap}",
                self.arity
            )));
        }
        let mut out = Vec::new();
        let mut cur = vec![false; self.len()];
        self.collect_up_sets(0, &mut cur, &mut out);
        out.retain(|u| u.iter().any(|&b| b));
        Ok(out)
    }

    fn collect_up_sets(&self, i: usize, cur: &mut Vec<bool>, out: &mut Vec<Vec<bool>>) {
        if i == self.len() {
            let closed = (0..self.len())
                .all(|c| !cur[c] || (0..self.len()).all(|d| !self.leq[c][d] || cur[d]));
            if closed {
                out.push(cur.clone());
            }
            return;
        }
        for b in [false, true] {
            cur[i] = b;
            self.collect_up_sets(i + 1, cur, out);
        }
        cur[i] = false;
    }
}

fn build_order(
    a: &Structure,
    n: usize,
    kind: TypeOrder,
    leq: impl Fn(&Tuple, &Tuple) -> Result<bool>,
) -> Result<TupleOrder> {
    if n == 0 {
        return Err(Error::precondition("arity must be at least 1"));
    }
    let count = a.len().checked_pow(n as u32).unwrap_or(usize::MAX);
    if count > TUPLE_LIMIT {
        return Err(Error::Budget(format!(
            "{}^{n} = {count} tuples exceed the limit of {TUPLE_LIMIT}",
            a.len()
        )));
    }
    let tuples = all_tuples(a.len(), n);
    let t = tuples.len();
    let mut rel = vec![vec![false; t]; t];
    for i in 0..t {
        for j in 0..t {
            rel[i][j] = i == j || leq(&tuples[i], &tuples[j])?;
        }
    }
    let mut class_idx = vec![usize::MAX; t];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..t {
        if class_idx[i] != usize::MAX {
            continue;
        }
        let members: Vec<usize> = (i..t).filter(|&j| rel[i][j] && rel[j][i]).collect();
        for &j in &members {
            class_idx[j] = classes.len();
        }
        classes.push(members);
    }
    let k = classes.len();
    let leq: Vec<Vec<bool>> = (0..k)
        .map(|c| (0..k).map(|d| rel[classes[c][0]][classes[d][0]]).collect())
        .collect();
    let maximal = (0..k)
        .map(|c| (0..k).all(|d| d == c || !leq[c][d]))
        .collect();
    let class_of = tuples
        .iter()
        .enumerate()
        .map(|(i, tu)| (tu.clone(), class_idx[i]))
        .collect();
    Ok(TupleOrder {
        base: a.clone(),
        arity: n,
        order_kind: kind,
        classes: classes
            .into_iter()
            .map(|c| c.into_iter().map(|i| tuples[i].clone()).collect())
            .collect(),
        leq,
        maximal,
        class_of,
    })
}

/// Classes of `n`-tuples under mutual local-homomorphism reachability.
pub fn type_classes(a: &Structure, n: usize) -> Result<TupleOrder> {
    build_order(a, n, TypeOrder::LocalHom, |x, y| tuple_leq(a, x, y))
}

/// All endomorphisms of `a` as image lists, in lexicographic order.
pub fn endomorphisms(a: &Structure) -> Result<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for_each_map(
        a,
        a,
        Mode::Hom,
        &PartialMap::empty(a.len(), a.len()),
        VarOrder::Lexicographic,
        |e| {
            out.push(e.to_vec());
            ControlFlow::Continue(())
        },
    )?;
    Ok(out)
}

/// Classes of `n`-tuples under mutual endomorphism reachability (positive
/// existential types).
pub fn pe_type_classes(a: &Structure, n: usize) -> Result<TupleOrder> {
    let endos = endomorphisms(a)?;
    build_order(a, n, TypeOrder::Endomorphism, |x, y| {
        Ok(endos
            .iter()
            .any(|e| x.iter().zip(y).all(|(&p, &q)| e[p] == q)))
    })
}

/// Which positions of `t` carry equal entries.
fn kernel(t: &[usize]) -> Vec<usize> {
    t.iter()
        .map(|x| t.iter().position(|y| y == x).expect("present"))
        .collect()
}

/// Climbs from `t` to a tuple in a maximal class, always moving to the
/// least class strictly above with the same equality pattern (or the least
/// class strictly above when there is none). Returns the tuple and the local
/// homomorphism `t_i ↦ max_i`.
pub fn saturate(a: &Structure, t: &[usize]) -> Result<(Tuple, PartialMap)> {
    if t.is_empty() {
        return Err(Error::precondition("empty tuple"));
    }
    if let Some(&e) = t.iter().find(|&&e| e >= a.len()) {
        return Err(Error::Domain(format!("#{e}")));
    }
    let order = type_classes(a, t.len())?;
    let mut c = order.class_of(t).expect("every tuple is classified");
    let top = if order.maximal[c] {
        t.to_vec()
    } else {
        // Prefer classes keeping the equality pattern of `t`, so that
        // distinct entries stay distinct while possible.
        let pattern = kernel(t);
        loop {
            let above = order.above(c);
            let Some(&d) = above
                .iter()
                .find(|&&d| kernel(&order.classes[d][0]) == pattern)
                .or(above.first())
            else {
                break;
            };
            c = d;
        }
        order.classes[c][0].clone()
    };
    let e = tuple_map(a, t, &top).expect("reachable tuples give a function");
    Ok((top, e))
}

/// A homomorphism out of a structure that is not an embedding, with its
/// target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NonEmbedding {
    pub target: Structure,
    pub map: PartialMap,
}

fn first_non_embedding(a: &Structure, b: &Structure) -> Result<Option<PartialMap>> {
    let mut found = None;
    for_each_map(
        a,
        b,
        Mode::Hom,
        &PartialMap::empty(a.len(), b.len()),
        VarOrder::Lexicographic,
        |f| {
            let m = PartialMap::total(f.to_vec(), b.len()).expect("total");
            if check_map(a, b, &m, Mode::Embedding).expect("shapes agree") {
                ControlFlow::Continue(())
            } else {
                found = Some(m);
                ControlFlow::Break(())
            }
        },
    )?;
    Ok(found)
}

/// Every homomorphism from `a` into a member of `class` with at most `n`
/// elements is an embedding.
///
/// For an age with `n ≥ |a|` this is tested against the base structure
/// directly: a non-embedding into a member composes with the member's
/// embedding, and a non-embedding into the base corestricts to its image.
pub fn is_hom_irreducible(a: &Structure, class: &ClassOracle, n: usize) -> Result<Decision<NonEmbedding>> {
    if !class.contains(a)? {
        return Err(Error::precondition(format!(
            "{} is not a member of {}",
            a.name(),
            class.describe()
        )));
    }
    if let ClassKind::AgeOf(base) = class.kind() {
        if n >= a.len() {
            return Ok(match first_non_embedding(a, base)? {
                Some(map) => Decision::No(NonEmbedding {
                    target: base.clone(),
                    map,
                }),
                None => Decision::Yes,
            });
        }
    }
    for b in class.enumerate_up_to(n)? {
        if let Some(map) = first_non_embedding(a, &b)? {
            return Ok(Decision::No(NonEmbedding { target: b, map }));
        }
    }
    Ok(Decision::Yes)
}

/// Members with at most `n` elements that are hom-irreducible in the
/// class, tested against members with at most `2n` elements.
pub fn irreducibles(class: &ClassOracle, n: usize) -> Result<Vec<Structure>> {
    let mut out = Vec::new();
    for m in class.enumerate_up_to(n)? {
        if is_hom_irreducible(&m, class, 2 * n)?.is_yes() {
            out.push(m);
        }
    }
    Ok(out)
}

/// An idempotent endomorphism of `source` onto the induced substructure
/// `image` (on positions `subset`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Retraction {
    pub source: Structure,
    pub image: Structure,
    pub subset: Vec<usize>,
    pub map: PartialMap,
}

/// The smallest retract of `a`, which is its core. Subsets are tried by
/// size, then lexicographically.
pub fn finite_core(a: &Structure) -> Result<Retraction> {
    for k in 1..=a.len() {
        for subset in subsets_of_size(a.len(), k) {
            let image = a.induced(&subset)?;
            let mut seed = PartialMap::empty(a.len(), image.len());
            for (i, &x) in subset.iter().enumerate() {
                seed.insert(x, i)?;
            }
            if !check_partial_map(a, &image, &seed, Mode::Hom)? {
                continue;
            }
            if let Some(r) = search_map(a, &image, Mode::Hom, &seed)?.into_map() {
                let images = r
                    .as_total()
                    .expect("total")
                    .iter()
                    .map(|&i| subset[i])
                    .collect();
                return Ok(Retraction {
                    source: a.clone(),
                    image,
                    subset,
                    map: PartialMap::total(images, a.len())?,
                });
            }
        }
    }
    Err(Error::precondition("empty structure has no core"))
}

/// Every endomorphism is an embedding; otherwise the first one (in
/// lexicographic order of images) that is not.
pub fn is_core(a: &Structure) -> Result<Decision<PartialMap>> {
    Ok(match first_non_embedding(a, a)? {
        Some(e) => Decision::No(e),
        None => Decision::Yes,
    })
}

/// Options for [`expand_by_types_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExpansionOptions {
    /// Add a symbol for every non-empty up-set, not only the principal
    /// ones.
    pub all_up_sets: bool,
    /// Cap on up-sets per arity when `all_up_sets` is set.
    pub max_up_sets: usize,
}

impl Default for ExpansionOptions {
    fn default() -> Self {
        ExpansionOptions {
            all_up_sets: false,
            max_up_sets: 1 << 12,
        }
    }
}

/// Expands `a` by one relation per positive existential type of each arity
/// up to `k`: the principal up-sets of the endomorphism order on tuples.
pub fn expand_by_types(a: &Structure, k: usize) -> Result<Structure> {
    expand_by_types_with(a, k, ExpansionOptions::default())
}

pub fn expand_by_types_with(a: &Structure, k: usize, opts: ExpansionOptions) -> Result<Structure> {
    if k == 0 {
        return Err(Error::precondition("arity must be at least 1"));
    }
    let mut symbols: Vec<(String, usize)> = Vec::new();
    let mut contents = Vec::new();
    for m in 1..=k {
        let order = pe_type_classes(a, m)?;
        let ups = if opts.all_up_sets {
            order.up_sets(opts.max_up_sets)?
        } else {
            let mut ps: Vec<Vec<bool>> = (0..order.len()).map(|c| order.principal_up_set(c)).collect();
            ps.dedup();
            ps
        };
        for u in ups {
            let mut hex = String::new();
            for chunk in u.chunks(4).rev() {
                let digit = chunk
                    .iter()
                    .enumerate()
                    .fold(0u32, |acc, (i, &b)| acc | (u32::from(b) << i));
                hex.push(char::from_digit(digit, 16).expect("nibble"));
            }
            let hex = hex.trim_start_matches('0');
            let mut name = format!("T{m}x{}", if hex.is_empty() { "0" } else { hex });
            while a.signature().index_of(&name).is_some() || symbols.iter().any(|(s, _)| *s == name) {
                name.push('\'');
            }
            symbols.push((name, m));
            contents.push(
                u.iter()
                    .enumerate()
                    .filter(|(_, &b)| b)
                    .flat_map(|(c, _)| order.classes[c].iter().cloned())
                    .collect::<std::collections::BTreeSet<Tuple>>(),
            );
        }
    }
    let sig = a.signature().extended(symbols.iter().map(|(s, m)| (s.as_str(), *m)))?;
    let mut relations = vec![Default::default(); sig.len()];
    for (r, (name, _)) in a.signature().iter().enumerate() {
        relations[sig.index_of(name).expect("kept")] = a.relation(r).clone();
    }
    for ((name, _), content) in symbols.iter().zip(contents) {
        relations[sig.index_of(name).expect("added")] = content;
    }
    Structure::from_indices(
        format!("{}^", a.name()),
        sig,
        a.elements().to_vec(),
        relations,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::homsearch::{count_maps, exists_map, hom_equivalent, homogeneity_check, HomogeneityKind};

    fn iso(a: &Structure, b: &Structure) -> bool {
        a.len() == b.len() && exists_map(a, b, Mode::Iso).unwrap()
    }

    #[test]
    fn tuple_leq_examples() {
        let e1 = catalog::single_edge_plus_point();
        assert!(tuple_leq(&e1, &[0, 2], &[0, 1]).unwrap());
        assert!(!tuple_leq(&e1, &[0, 1], &[0, 2]).unwrap());
        assert!(tuple_leq(&e1, &[1, 2], &[1, 2]).unwrap());
        assert!(!tuple_leq(&e1, &[0, 0], &[0, 1]).unwrap());
        assert!(tuple_leq(&e1, &[0], &[0, 1]).is_err());
    }

    #[test]
    fn tuple_leq_is_a_quasiorder_on_the_catalog() {
        for a in catalog::standard_up_to(4) {
            for n in 1..=2 {
                let ts = all_tuples(a.len(), n);
                for x in &ts {
                    assert!(tuple_leq(&a, x, x).unwrap());
                    for y in &ts {
                        if !tuple_leq(&a, x, y).unwrap() {
                            continue;
                        }
                        for z in &ts {
                            if tuple_leq(&a, y, z).unwrap() {
                                assert!(tuple_leq(&a, x, z).unwrap(), "{} {x:?} {y:?} {z:?}", a.name());
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn type_class_examples() {
        let k3 = type_classes(&catalog::complete(3), 1).unwrap();
        assert_eq!(k3.len(), 1);
        assert!(k3.maximal[0]);
        assert_eq!(k3.up_set_count(), 2);

        let k2 = type_classes(&catalog::complete(2), 2).unwrap();
        assert_eq!(k2.classes, vec![vec![vec![0, 0], vec![1, 1]], vec![vec![0, 1], vec![1, 0]]]);
        assert!(!k2.leq[0][1] && !k2.leq[1][0]);
        assert_eq!(k2.up_set_count(), 4);

        let e1 = type_classes(&catalog::single_edge_plus_point(), 2).unwrap();
        let edge = e1.class_of(&[0, 1]).unwrap();
        let non_edge = e1.class_of(&[0, 2]).unwrap();
        assert!(e1.leq[non_edge][edge] && !e1.leq[edge][non_edge]);
        assert_eq!(e1.class_of(&[1, 0]), Some(edge));
    }

    /// Brute-force oracle for up-set counting: test every subset of
    /// classes for upward closure.
    #[test]
    fn up_set_count_matches_subset_enumeration() {
        for a in catalog::standard_up_to(4) {
            for n in 1..=2 {
                let o = type_classes(&a, n).unwrap();
                if o.len() > 16 {
                    continue;
                }
                let brute = (0u32..1 << o.len())
                    .filter(|mask| {
                        (0..o.len()).all(|c| {
                            mask >> c & 1 == 0 || (0..o.len()).all(|d| !o.leq[c][d] || mask >> d & 1 == 1)
                        })
                    })
                    .count() as u128;
                assert_eq!(o.up_set_count(), brute, "{} n={n}", a.name());
                assert_eq!(o.up_sets(1 << 16).unwrap().len() as u128, brute - 1);
            }
        }
    }

    #[test]
    fn saturate_examples() {
        let (t, e) = saturate(&catalog::complete(3), &[0, 1]).unwrap();
        assert_eq!(t, vec![0, 1]);
        assert_eq!(e.pairs().collect::<Vec<_>>(), vec![(0, 0), (1, 1)]);

        let e1 = catalog::single_edge_plus_point();
        let (t, _) = saturate(&e1, &[0, 2]).unwrap();
        assert!(e1.holds(0, &t), "{t:?}");

        let p3 = catalog::path(3);
        let (t, e) = saturate(&p3, &[0, 2]).unwrap();
        assert!(p3.holds(0, &t), "{t:?}");
        assert!(check_partial_map(&p3, &p3, &e, Mode::Hom).unwrap());
    }

    #[test]
    fn irreducibility_examples() {
        let graphs = ClassOracle::all_graphs();
        assert!(is_hom_irreducible(&catalog::complete(3), &graphs, 4).unwrap().is_yes());
        assert!(is_hom_irreducible(&catalog::complete(1), &graphs, 2).unwrap().is_yes());
        let p3 = catalog::path(3);
        let no = is_hom_irreducible(&p3, &graphs, 3).unwrap();
        let w = no.witness().unwrap();
        assert!(iso(&w.target, &catalog::complete(2)));
        assert_eq!(w.map.get(0), w.map.get(2));
        assert!(is_hom_irreducible(&catalog::loop_vertex(), &graphs, 2).is_err());
    }

    #[test]
    fn irreducible_lists() {
        let want = [catalog::complete(1), catalog::complete(2), catalog::complete(3)];
        let got = irreducibles(&ClassOracle::all_graphs(), 3).unwrap();
        assert_eq!(got.len(), 3);
        assert!(got.iter().zip(&want).all(|(g, w)| iso(g, w)));

        let got = irreducibles(&ClassOracle::age_of(&catalog::complete(2)), 2).unwrap();
        assert_eq!(got.len(), 2);

        let got = irreducibles(&ClassOracle::linear_orders(), 3).unwrap();
        assert_eq!(got.len(), 3);
    }

    #[test]
    fn core_examples() {
        let r = finite_core(&catalog::path(3)).unwrap();
        assert!(iso(&r.image, &catalog::complete(2)));
        assert!(check_map(&r.source, &r.source, &r.map, Mode::Hom).unwrap());
        let r = finite_core(&catalog::complete(3)).unwrap();
        assert_eq!(r.map, PartialMap::identity(3));
        let r = finite_core(&catalog::cycle(6)).unwrap();
        assert!(iso(&r.image, &catalog::complete(2)));

        assert!(is_core(&catalog::complete(3)).unwrap().is_yes());
        assert!(!is_core(&catalog::path(3)).unwrap().is_yes());
        let w = is_core(&catalog::empty_graph(2)).unwrap();
        assert_eq!(w.witness().unwrap().as_total(), Some(vec![0, 0]));
    }

    #[test]
    fn cores_are_retracts_and_idempotent() {
        for a in catalog::standard() {
            let r = finite_core(&a).unwrap();
            assert!(is_core(&r.image).unwrap().is_yes(), "{}", a.name());
            assert!(hom_equivalent(&a, &r.image).unwrap());
            assert_eq!(r.map.then(&r.map), r.map, "{}", a.name());
            assert_eq!(r.map.image(), r.subset);
            let again = finite_core(&r.image).unwrap();
            assert_eq!(again.image.len(), r.image.len());
            // Another element order gives an isomorphic core.
            let rev: Vec<usize> = (0..a.len()).rev().collect();
            let other = finite_core(&a.permuted(&rev)).unwrap();
            assert!(iso(&other.image, &r.image), "{}", a.name());
        }
    }

    #[test]
    fn expansion_examples() {
        let k3 = expand_by_types(&catalog::complete(3), 1).unwrap();
        assert_eq!(k3.signature().len(), 2);
        assert_eq!(k3.relation(1).len(), 3);

        let e1 = catalog::single_edge_plus_point();
        let x = expand_by_types(&e1, 1).unwrap();
        let order = pe_type_classes(&e1, 1).unwrap();
        assert_eq!(x.signature().len(), 1 + order.len());
    }

    #[test]
    fn expansion_keeps_endomorphisms_and_is_hom_homogeneous() {
        for a in catalog::standard_up_to(4) {
            for k in 1..=2 {
                let x = expand_by_types(&a, k).unwrap();
                assert_eq!(
                    count_maps(&a, &a, Mode::Hom).unwrap(),
                    count_maps(&x, &x, Mode::Hom).unwrap(),
                    "{} k={k}",
                    a.name()
                );
            }
            let x = expand_by_types(&a, a.len()).unwrap();
            assert!(homogeneity_check(&x, HomogeneityKind::Hom).unwrap().is_yes(), "{}", a.name());
        }
    }

    #[test]
    fn all_up_set_expansion_is_capped() {
        let a = catalog::empty_graph(3);
        let opts = ExpansionOptions {
            all_up_sets: true,
            max_up_sets: 1,
        };
        assert!(matches!(expand_by_types_with(&a, 2, opts), Err(Error::Budget(_))));
        let x = expand_by_types_with(&a, 1, ExpansionOptions { all_up_sets: true, ..opts }).unwrap();
        assert_eq!(x.signature().len(), 2);
    }
}
