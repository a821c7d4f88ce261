//! Finite stages of infinite constructions: the chain whose union is a
//! homomorphism-homogeneous (or homogeneous) limit, the tree of
//! homomorphism classes along a chain, and core approximations.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use crate::ages::{
    age, age_projects, amalgamate, check_class_property, joint_embed, Amalgam, ClassOracle,
    ClassProperty, PropertyVerdict, VerdictOutcome,
};
use crate::canon::{canonical_key, CanonicalKey};
use crate::cores::irreducibles;
use crate::error::{Error, Result};
use crate::homsearch::{
    enumerate_maps, hom_equivalent, homogeneity_check, search_map, subsets_of_size, Decision,
    HomogeneityKind,
};
use crate::structures::{check_partial_map, Mode, PartialMap, Structure, Tuple};

/// The schedule `π(i, j)` from pairs (even `i`, any `j`) onto the even
/// naturals: the Cantor index of `(i/2, j)`, doubled. Always `π(i, j) ≥ i`.
pub fn pairing(i: u64, j: u64) -> Result<u64> {
    if i % 2 == 1 {
        return Err(Error::precondition(format!("pairing needs an even first argument, got {i}")));
    }
    let p = i / 2;
    let d = p
        .checked_add(j)
        .ok_or_else(|| Error::Domain("pairing overflow".into()))?;
    let tri = d
        .checked_mul(d + 1)
        .map(|x| x / 2)
        .and_then(|t| t.checked_add(p))
        .and_then(|t| t.checked_mul(2))
        .ok_or_else(|| Error::Domain("pairing overflow".into()))?;
    Ok(tri)
}

/// Inverse of [`pairing`].
pub fn unpair(k: u64) -> Result<(u64, u64)> {
    if k % 2 == 1 {
        return Err(Error::precondition(format!("only even stages are scheduled, got {k}")));
    }
    let idx = k / 2;
    // Largest d with d(d+1)/2 <= idx.
    let mut d = (((8.0 * idx as f64 + 1.0).sqrt() - 1.0) / 2.0) as u64;
    while d * (d + 1) / 2 > idx {
        d -= 1;
    }
    while (d + 1) * (d + 2) / 2 <= idx {
        d += 1;
    }
    let p = idx - d * (d + 1) / 2;
    Ok((2 * p, d - p))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitMode {
    /// Homomorphisms are extended; the union is homomorphism-homogeneous.
    Hap,
    /// Embeddings are extended; the union is homogeneous.
    Ap,
}

impl LimitMode {
    pub fn as_str(self) -> &'static str {
        match self {
            LimitMode::Hap => "hap",
            LimitMode::Ap => "ap",
        }
    }

    fn legs(self) -> (Mode, Mode) {
        match self {
            LimitMode::Hap => (Mode::Hom, Mode::Hom),
            LimitMode::Ap => (Mode::Embedding, Mode::Embedding),
        }
    }

    fn property(self) -> ClassProperty {
        match self {
            LimitMode::Hap => ClassProperty::Hap,
            LimitMode::Ap => ClassProperty::Ap,
        }
    }
}

impl fmt::Display for LimitMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A member `b` of the class with a proper non-empty induced substructure
/// `a` on positions `subset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TaskPair {
    pub a: Structure,
    pub b: Structure,
    pub subset: Vec<usize>,
}

impl TaskPair {
    /// The inclusion of `a` into `b`.
    pub fn inclusion(&self) -> PartialMap {
        PartialMap::total(self.subset.clone(), self.b.len()).expect("subset lies in b")
    }
}

/// Pairs `A < B` of members with `|B| ≤ n`, one per isomorphism type of
/// the pair, in order of `B` then subset size then subset.
pub fn task_pairs(class: &ClassOracle, n: usize) -> Result<Vec<TaskPair>> {
    let mut seen: HashSet<CanonicalKey> = HashSet::new();
    let mut out = Vec::new();
    for b in class.enumerate_up_to(n)? {
        let mut mark = String::from("mark");
        while b.signature().index_of(&mark).is_some() {
            mark.push('\'');
        }
        let sig = b.signature().extended([(mark.as_str(), 1)])?;
        for k in 1..b.len() {
            for subset in subsets_of_size(b.len(), k) {
                let mut rels: Vec<BTreeSet<Tuple>> = vec![BTreeSet::new(); sig.len()];
                for (r, (name, _)) in b.signature().iter().enumerate() {
                    rels[sig.index_of(name).expect("kept")] = b.relation(r).clone();
                }
                rels[sig.index_of(&mark).expect("added")] =
                    subset.iter().map(|&x| vec![x]).collect();
                let marked = Structure::from_indices("pair", sig.clone(), b.elements().to_vec(), rels)?;
                if !seen.insert(canonical_key(&marked)) {
                    continue;
                }
                let a = b.induced(&subset)?;
                if class.contains(&a)? {
                    out.push(TaskPair {
                        a,
                        b: b.clone(),
                        subset,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// A scheduled task: pair `pair` with `f: A → H_stage`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triple {
    pub id: String,
    pub pair: usize,
    pub stage: usize,
    pub f: PartialMap,
}

/// A processed task and the extension `g: B → H_{stage}` found for it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Processed {
    pub triple: Triple,
    pub at_stage: usize,
    pub g: PartialMap,
}

/// Everything recorded by [`build_limit`].
#[derive(Clone, Debug)]
pub struct ChainState {
    pub class: String,
    pub mode: LimitMode,
    pub seed_bound: usize,
    /// `H_0, …, H_k`; each stage is an induced substructure of the next
    /// on its leading positions, with the same element names.
    pub stages: Vec<Structure>,
    pub pairs: Vec<TaskPair>,
    pub representatives: Vec<Structure>,
    /// `queues[i]`: tasks listed for `H_i` (empty for odd `i`).
    pub queues: Vec<Vec<Triple>>,
    pub processed: Vec<Processed>,
    /// Representatives embedded by joint-embedding steps, with the stage
    /// and the embedding.
    pub embedded: Vec<(usize, usize, PartialMap)>,
    pub log: Vec<String>,
}

impl ChainState {
    pub fn last(&self) -> &Structure {
        self.stages.last().expect("at least the seed stage")
    }

    /// The construction log, one line per stage.
    pub fn log_text(&self) -> String {
        let mut s = self.log.join("\n");
        s.push('\n');
        s
    }
}

/// Rebuilds the witness so that `g1` is the identity onto the leading
/// positions, which keep the names of `h`; other elements are named
/// `h<counter>`.
fn align(h: &Structure, am: &Amalgam, counter: &mut usize) -> Result<(Structure, PartialMap)> {
    let mut order: Vec<usize> = (0..h.len()).map(|x| am.g1.get(x).expect("total")).collect();
    let placed: HashSet<usize> = order.iter().copied().collect();
    order.extend((0..am.c.len()).filter(|y| !placed.contains(y)));
    let mut names: Vec<String> = h.elements().to_vec();
    let taken: HashSet<String> = names.iter().cloned().collect();
    while names.len() < order.len() {
        let name = format!("h{counter}");
        *counter += 1;
        if !taken.contains(&name) {
            names.push(name);
        }
    }
    let c = am.c.permuted(&order).with_element_names(names)?;
    let mut pos = vec![0; am.c.len()];
    for (i, &y) in order.iter().enumerate() {
        pos[y] = i;
    }
    let g2 = PartialMap::from_images(
        am.g2.images().iter().map(|y| y.map(|y| pos[y])).collect(),
        c.len(),
    )?;
    Ok((c, g2))
}

fn seed_stage(rep: &Structure, counter: &mut usize) -> Result<Structure> {
    let names = (0..rep.len())
        .map(|_| {
            let n = format!("h{counter}");
            *counter += 1;
            n
        })
        .collect();
    rep.clone().with_name("H0").with_element_names(names)
}

/// Builds `H_0 ≤ … ≤ H_steps`. Even stages process the task scheduled by
/// [`pairing`]; odd stages jointly embed the next representative. Each
/// step first tries to stay inside the current stage.
pub fn build_limit(
    class: &ClassOracle,
    steps: usize,
    mode: LimitMode,
    seed_bound: usize,
) -> Result<ChainState> {
    if steps == 0 || seed_bound == 0 {
        return Err(Error::precondition("steps and seed bound must be at least 1"));
    }
    for p in [ClassProperty::Hp, ClassProperty::Jep, mode.property()] {
        let v = check_class_property(class, p, seed_bound, 2 * seed_bound)?;
        if v.fails() {
            return Err(Error::precondition(format!(
                "{} fails {p} at size {seed_bound}",
                class.describe()
            )));
        }
    }
    let reps = class.enumerate_up_to(seed_bound)?;
    let Some(first) = reps.first() else {
        return Err(Error::precondition("class has no members within the seed bound"));
    };
    let pairs = task_pairs(class, seed_bound)?;
    let (leg1, leg2) = mode.legs();
    let mut counter = 0;
    let mut state = ChainState {
        class: class.describe(),
        mode,
        seed_bound,
        stages: vec![seed_stage(first, &mut counter)?],
        pairs,
        representatives: reps.clone(),
        queues: Vec::new(),
        processed: Vec::new(),
        embedded: vec![(0, 0, PartialMap::identity(first.len()))],
        log: Vec::new(),
    };
    let mut listed: HashSet<(usize, Vec<Option<usize>>)> = HashSet::new();
    let mut next_rep = 1;
    for k in 0..steps {
        let h = state.stages[k].clone();
        let mut queue = Vec::new();
        if k % 2 == 0 {
            for (p, pair) in state.pairs.iter().enumerate() {
                for f in enumerate_maps(&pair.a, &h, leg1, &PartialMap::empty(pair.a.len(), h.len()))? {
                    if listed.insert((p, f.images().to_vec())) {
                        queue.push(Triple {
                            id: format!("t{k}.{}", queue.len()),
                            pair: p,
                            stage: k,
                            f,
                        });
                    }
                }
            }
        }
        state.queues.push(queue);
        let (next, action, task) = if k % 2 == 0 {
            let (i, j) = unpair(k as u64)?;
            match state.queues[i as usize].get(j as usize).cloned() {
                None => (h.clone(), "amalgam", "none".to_string()),
                Some(t) => {
                    let pair = &state.pairs[t.pair];
                    let f = t.f.clone();
                    // Lift f to the current stage (earlier stages are prefixes).
                    let f = PartialMap::total(f.as_total().expect("total"), h.len())?;
                    let m = h.len() + pair.b.len() - pair.a.len() + 2;
                    let Some(am) = amalgamate(class, &pair.a, &h, &f, &pair.b, &pair.inclusion(), leg2, m)?
                    else {
                        return Err(Error::Construction(format!(
                            "stage {k}: no {} witness with at most {m} elements for task {} ({} < {}, f = {{{}}})",
                            mode.property(),
                            t.id,
                            pair.a.name(),
                            pair.b.name(),
                            f.describe(&pair.a, &h)
                        )));
                    };
                    let (c, g) = align(&h, &am, &mut counter)?;
                    let id = t.id.clone();
                    state.processed.push(Processed {
                        triple: t,
                        at_stage: k + 1,
                        g,
                    });
                    (c, "amalgam", id)
                }
            }
        } else if let Some(rep) = reps.get(next_rep) {
            let m = h.len() + rep.len() + 2;
            let Some(am) = joint_embed(class, &h, rep, m)? else {
                return Err(Error::Construction(format!(
                    "stage {k}: no joint embedding of {} with at most {m} elements",
                    rep.name()
                )));
            };
            let (c, g) = align(&h, &am, &mut counter)?;
            state.embedded.push((k + 1, next_rep, g));
            next_rep += 1;
            (c, "joint-embed", format!("r{}", next_rep - 1))
        } else {
            (h.clone(), "joint-embed", "none".to_string())
        };
        if !class.contains(&next)? {
            return Err(Error::Invariant(format!("stage {} left the class", k + 1)));
        }
        state.log.push(format!(
            "stage={} action={action} size={} task={task}",
            k + 1,
            next.len()
        ));
        state.stages.push(next.with_name(format!("H{}", k + 1)));
    }
    Ok(state)
}

/// A task `(A < B, f: A → H)` with no extension inside `H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionFailure {
    pub pair: TaskPair,
    pub f: PartialMap,
}

/// Every failing task over pairs of members with `|B| ≤ n`, in pair
/// order, then lexicographic order of `f`.
pub fn extension_failures(h: &Structure, class: &ClassOracle, n: usize) -> Result<Vec<ExtensionFailure>> {
    let mut out = Vec::new();
    for pair in task_pairs(class, n)? {
        for f in enumerate_maps(&pair.a, h, Mode::Hom, &PartialMap::empty(pair.a.len(), h.len()))? {
            let seed = pair.inclusion().inverse().expect("injective").then(&f);
            let seed = PartialMap::from_images(seed.images().to_vec(), h.len())?;
            let extends = check_partial_map(&pair.b, h, &seed, Mode::Hom)?
                && search_map(&pair.b, h, Mode::Hom, &seed)?.is_found();
            if !extends {
                out.push(ExtensionFailure {
                    pair: pair.clone(),
                    f,
                });
            }
        }
    }
    Ok(out)
}

/// For all pairs `A < B` of members with `|B| ≤ n` and all `f: A → H`,
/// some homomorphism `B → H` extends `f`.
pub fn verify_extension_property(
    h: &Structure,
    class: &ClassOracle,
    n: usize,
) -> Result<Decision<ExtensionFailure>> {
    Ok(match extension_failures(h, class, n)?.into_iter().next() {
        Some(f) => Decision::No(f),
        None => Decision::Yes,
    })
}

/// Equality pattern and relation tuples by position.
type QfType = (Vec<usize>, Vec<BTreeSet<Tuple>>);

/// The quantifier-free type of a tuple of `b`: its equality pattern and
/// the relation tuples among its entries, by first position.
fn qf_type(b: &Structure, t: &[usize]) -> QfType {
    let first: Vec<usize> = t
        .iter()
        .map(|x| t.iter().position(|y| y == x).expect("present"))
        .collect();
    let pos = |y: usize| t.iter().position(|&x| x == y);
    let rels = b
        .relations()
        .iter()
        .map(|rel| {
            rel.iter()
                .filter_map(|u| u.iter().map(|&y| pos(y)).collect::<Option<Tuple>>())
                .collect()
        })
        .collect();
    (first, rels)
}

/// One class of homomorphisms `A_t → B`: maps whose image tuples are
/// related by a local isomorphism of `B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeClass {
    pub representative: PartialMap,
    pub size: usize,
    /// Class of the restriction at the previous level.
    pub parent: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomTree {
    pub levels: Vec<Vec<TreeClass>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KonigOutcome {
    /// One class per level along a path of the tree, and a tower of maps
    /// `A_t → B`, each extending the previous one exactly.
    Branch {
        tree: HomTree,
        classes: Vec<usize>,
        maps: Vec<PartialMap>,
    },
    /// The first level (1-based) without any homomorphism.
    Empty { level: usize, tree: HomTree },
}

/// Builds the tree of homomorphism classes along `chain[..depth]` and
/// extracts a branch with an exact tower of representatives.
pub fn konig_hom(chain: &[Structure], b: &Structure, depth: usize) -> Result<KonigOutcome> {
    if depth == 0 || depth > chain.len() {
        return Err(Error::precondition(format!(
            "depth {depth} outside 1..={}",
            chain.len()
        )));
    }
    let chain = &chain[..depth];
    for w in chain.windows(2) {
        if w[0].len() >= w[1].len() || !w[0].is_induced_substructure_of(&w[1]) {
            return Err(Error::precondition(format!(
                "{} is not a proper induced substructure of {}",
                w[0].name(),
                w[1].name()
            )));
        }
    }
    // Positions of A_t's elements inside A_{t+1}.
    let lift: Vec<Vec<usize>> = chain
        .windows(2)
        .map(|w| {
            w[0].elements()
                .iter()
                .map(|e| w[1].index_of(e).expect("nested"))
                .collect()
        })
        .collect();
    let mut tree = HomTree { levels: Vec::new() };
    let mut keys: Vec<BTreeMap<QfType, usize>> = Vec::new();
    for (t, a) in chain.iter().enumerate() {
        let maps = enumerate_maps(a, b, Mode::Hom, &PartialMap::empty(a.len(), b.len()))?;
        let mut level: Vec<TreeClass> = Vec::new();
        let mut index: BTreeMap<QfType, usize> = BTreeMap::new();
        for m in maps {
            let img = m.as_total().expect("total");
            let key = qf_type(b, &img);
            if let Some(&c) = index.get(&key) {
                level[c].size += 1;
                continue;
            }
            let parent = if t == 0 {
                None
            } else {
                let restricted: Vec<usize> = lift[t - 1].iter().map(|&p| img[p]).collect();
                Some(keys[t - 1][&qf_type(b, &restricted)])
            };
            index.insert(key, level.len());
            level.push(TreeClass {
                representative: m,
                size: 1,
                parent,
            });
        }
        let empty = level.is_empty();
        tree.levels.push(level);
        keys.push(index);
        if empty {
            return Ok(KonigOutcome::Empty { level: t + 1, tree });
        }
    }
    // The leftmost deepest class and its ancestors.
    let mut classes = vec![0; depth];
    for t in (0..depth - 1).rev() {
        classes[t] = tree.levels[t + 1][classes[t + 1]].parent.expect("non-root");
    }
    // Realise the branch as a tower, extending level by level and
    // preferring extensions in the branch's class; backtrack if stuck.
    let mut maps: Vec<PartialMap> = Vec::new();
    if !tower(chain, b, &lift, &keys, &classes, &mut maps)? {
        return Err(Error::Invariant("a deepest class exists but no tower was found".into()));
    }
    Ok(KonigOutcome::Branch { tree, classes, maps })
}

fn tower(
    chain: &[Structure],
    b: &Structure,
    lift: &[Vec<usize>],
    keys: &[BTreeMap<QfType, usize>],
    classes: &[usize],
    maps: &mut Vec<PartialMap>,
) -> Result<bool> {
    let t = maps.len();
    if t == chain.len() {
        return Ok(true);
    }
    let a = &chain[t];
    let mut seed = PartialMap::empty(a.len(), b.len());
    if let Some(prev) = maps.last() {
        for (i, &p) in lift[t - 1].iter().enumerate() {
            seed.insert(p, prev.get(i).expect("total"))?;
        }
    }
    let mut candidates = enumerate_maps(a, b, Mode::Hom, &seed)?;
    candidates.sort_by_key(|m| keys[t][&qf_type(b, &m.as_total().expect("total"))] != classes[t]);
    for m in candidates {
        maps.push(m);
        if tower(chain, b, lift, keys, classes, maps)? {
            return Ok(true);
        }
        maps.pop();
    }
    Ok(false)
}

/// What [`build_core_approx`] checked along the way.
#[derive(Clone, Debug)]
pub struct CoreReport {
    pub hom_homogeneous: bool,
    pub irreducibles: Vec<Structure>,
    pub hp: PropertyVerdict,
    pub ap: PropertyVerdict,
    pub projects: bool,
    pub chain: ChainState,
    pub hom_equivalent: bool,
    pub age_matches: bool,
}

/// Approximates the core of `a` as a limit of its hom-irreducible age
/// members: those members form a class with HP and AP, whose limit is
/// built for `steps` stages.
pub fn build_core_approx(a: &Structure, steps: usize) -> Result<(Structure, CoreReport)> {
    let n = a.len();
    let hom_homogeneous = homogeneity_check(a, HomogeneityKind::Hom)?.is_yes();
    let irr = irreducibles(&ClassOracle::age_of(a), n)?;
    let d = ClassOracle::explicit(a.signature().clone(), irr.clone())?;
    let hp = check_class_property(&d, ClassProperty::Hp, n, n)?;
    let ap = check_class_property(&d, ClassProperty::Ap, n, n)?;
    for v in [&hp, &ap] {
        if let VerdictOutcome::Fails(config) = &v.outcome {
            let names: Vec<String> = config.structures().iter().map(|s| s.name().to_string()).collect();
            return Err(Error::Construction(format!(
                "hom-irreducible members of the age of {} fail {} ({})",
                a.name(),
                v.property,
                names.join(", ")
            )));
        }
    }
    let projects = age_projects(&ClassOracle::age_of(a), &d, n)?.is_yes();
    let chain = build_limit(&d, steps, LimitMode::Ap, n)?;
    let f = chain.last().clone().with_name(format!("core({})", a.name()));
    let hom_equivalent = hom_equivalent(a, &f)?;
    let want: BTreeSet<CanonicalKey> = irr.iter().map(canonical_key).collect();
    let got: BTreeSet<CanonicalKey> = age(&f, n)?.iter().map(canonical_key).collect();
    Ok((
        f,
        CoreReport {
            hom_homogeneous,
            irreducibles: irr,
            hp,
            ap,
            projects,
            chain,
            hom_equivalent,
            age_matches: want == got,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::homsearch::exists_map;
    use crate::structures::check_map;

    fn iso(a: &Structure, b: &Structure) -> bool {
        a.len() == b.len() && exists_map(a, b, Mode::Iso).unwrap()
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(pairing(0, 0).unwrap(), 0);
        for i in (0..=20).step_by(2) {
            for j in 0..=20 {
                assert_eq!(unpair(pairing(i, j).unwrap()).unwrap(), (i, j));
            }
        }
        assert!((0..=100).all(|j| pairing(4, j).unwrap() >= 4));
        assert!(pairing(3, 0).is_err());
        assert!(unpair(5).is_err());
    }

    #[test]
    fn task_pairs_are_distinct_up_to_isomorphism() {
        let pairs = task_pairs(&ClassOracle::all_graphs(), 2).unwrap();
        assert_eq!(pairs.len(), 2);
        // P3 has three pair types of size 1 (end, middle) and size 2
        // (edge, endpoints).
        let pairs = task_pairs(&ClassOracle::explicit(crate::Signature::binary(), vec![catalog::path(3)]).unwrap(), 3);
        // Its substructures are not members of the explicit class.
        assert!(pairs.unwrap().is_empty());
        let pairs = task_pairs(&ClassOracle::age_of(&catalog::path(3)), 3).unwrap();
        let from_p3 = pairs.iter().filter(|p| p.b.len() == 3).count();
        assert_eq!(from_p3, 4);
    }

    fn assert_chain_invariants(state: &ChainState) {
        for w in state.stages.windows(2) {
            assert!(w[0].is_induced_substructure_of(&w[1]));
        }
        let (_, leg2) = state.mode.legs();
        for p in &state.processed {
            let pair = &state.pairs[p.triple.pair];
            let h = &state.stages[p.at_stage];
            assert!(check_map(&pair.b, h, &p.g, leg2).unwrap());
            for (i, &x) in pair.subset.iter().enumerate() {
                assert_eq!(p.g.get(x), p.triple.f.get(i));
            }
        }
    }

    #[test]
    fn graph_chain_embeds_small_graphs() {
        let class = ClassOracle::all_graphs();
        let state = build_limit(&class, 8, LimitMode::Hap, 2).unwrap();
        assert_chain_invariants(&state);
        let h = state.last();
        for g in [catalog::complete(1), catalog::empty_graph(2), catalog::complete(2)] {
            assert!(exists_map(&g, h, Mode::Embedding).unwrap());
        }
        assert_eq!(state.log.len(), 8);
        assert!(state.log[0].starts_with("stage=1 action=amalgam size="));
        assert!(state.log[1].starts_with("stage=2 action=joint-embed size="));
    }

    #[test]
    fn complete_graph_chain_stays_complete() {
        let ks: Vec<Structure> = (1..=4).map(catalog::complete).collect();
        let class = ClassOracle::explicit(crate::Signature::binary(), ks).unwrap();
        let state = build_limit(&class, 8, LimitMode::Ap, 3).unwrap();
        assert_chain_invariants(&state);
        for h in &state.stages {
            assert_eq!(h.relation(0).len(), h.len() * (h.len() - 1));
        }
    }

    #[test]
    fn linear_order_chain_grows() {
        let state = build_limit(&ClassOracle::linear_orders(), 6, LimitMode::Hap, 2).unwrap();
        assert_chain_invariants(&state);
        let h = state.last();
        assert!(h.len() >= 3, "{}", h.len());
        assert!(ClassOracle::linear_orders().contains(h).unwrap());
    }

    #[test]
    fn non_amalgamating_class_is_rejected() {
        let class = ClassOracle::age_of(&catalog::path(3));
        assert!(build_limit(&class, 4, LimitMode::Hap, 3).is_err());
    }

    #[test]
    fn extension_property_examples() {
        let k3 = catalog::complete(3);
        assert!(verify_extension_property(&k3, &ClassOracle::age_of(&k3), 3).unwrap().is_yes());
        let p3 = catalog::path(3);
        let no = verify_extension_property(&p3, &ClassOracle::age_of(&p3), 3).unwrap();
        let w = no.witness().unwrap();
        assert_eq!(w.pair.b.len(), 3);
        assert!(w.pair.b.relation(0).len() == 4 && w.pair.a.relation(0).is_empty());
    }

    #[test]
    fn konig_examples() {
        let ks: Vec<Structure> = (1..=3).map(catalog::complete).collect();
        match konig_hom(&ks, &catalog::complete(3), 3).unwrap() {
            KonigOutcome::Branch { maps, .. } => {
                assert!(check_map(&ks[2], &catalog::complete(3), &maps[2], Mode::Embedding).unwrap())
            }
            other => panic!("{other:?}"),
        }
        match konig_hom(&ks, &catalog::complete(2), 3).unwrap() {
            KonigOutcome::Empty { level, .. } => assert_eq!(level, 3),
            other => panic!("{other:?}"),
        }
        let ps: Vec<Structure> = (1..=3).map(catalog::path).collect();
        match konig_hom(&ps, &catalog::complete(2), 3).unwrap() {
            KonigOutcome::Branch { maps, tree, .. } => {
                assert_eq!(maps[2].as_total().unwrap().iter().collect::<BTreeSet<_>>().len(), 2);
                assert!(tree.levels.iter().all(|l| !l.is_empty()));
            }
            other => panic!("{other:?}"),
        }
        assert!(konig_hom(&[catalog::complete(2), catalog::path(2)], &catalog::complete(2), 2).is_err());
    }

    #[test]
    fn core_approximation_examples() {
        let (f, report) = build_core_approx(&catalog::complete(3), 5).unwrap();
        assert!(iso(&f, &catalog::complete(3)));
        assert!(report.hom_equivalent && report.age_matches && report.projects);

        let two_edges = catalog::sum("2K2", &[catalog::complete(2), catalog::complete(2)]);
        let (f, report) = build_core_approx(&two_edges, 5).unwrap();
        assert!(iso(&f, &catalog::complete(2)));
        assert!(report.hom_homogeneous && report.hom_equivalent);
    }

    #[test]
    fn core_of_graph_chain_stage_is_complete() {
        let state = build_limit(&ClassOracle::all_graphs(), 30, LimitMode::Hap, 2).unwrap();
        let (f, report) = build_core_approx(state.last(), 10).unwrap();
        assert!(f.len() >= 2);
        assert_eq!(f.relation(0).len(), f.len() * (f.len() - 1));
        assert!(report.hom_equivalent && report.age_matches);
    }
}
