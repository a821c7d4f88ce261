//! Backtracking search for maps between finite structures.
//!
//! Variables are the source elements, values the target elements. The
//! search assigns the most constrained variable first (ties by carrier
//! order) and forward-checks every relation tuple that has all but one of
//! its variables assigned. Injective modes also remove used values, and
//! reflecting modes check target tuples over the current image.

use std::ops::ControlFlow;

use crate::budget;
use crate::error::{Error, Result};
use crate::structures::{check_partial_map, ensure_same_signature, Mode, PartialMap, Structure};

pub use crate::structures::Mode as SearchMode;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Found(PartialMap),
    Exhausted,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub outcome: Outcome,
    pub nodes_explored: u64,
}

impl SearchResult {
    pub fn found(&self) -> Option<&PartialMap> {
        match &self.outcome {
            Outcome::Found(m) => Some(m),
            Outcome::Exhausted => None,
        }
    }

    pub fn is_found(&self) -> bool {
        self.found().is_some()
    }

    pub fn into_map(self) -> Option<PartialMap> {
        match self.outcome {
            Outcome::Found(m) => Some(m),
            Outcome::Exhausted => None,
        }
    }
}

/// Order in which variables are assigned.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarOrder {
    /// Smallest remaining domain first, ties by carrier order.
    MostConstrained,
    /// Carrier order; solutions are then produced in lexicographic order.
    Lexicographic,
}

struct Solver<'a> {
    a: &'a Structure,
    b: &'a Structure,
    mode: Mode,
    order: VarOrder,
    /// For each source element: (relation, tuple) pairs mentioning it.
    a_inc: Vec<Vec<(usize, &'a [usize])>>,
    /// For each target element: (relation, tuple) pairs mentioning it.
    b_inc: Vec<Vec<(usize, &'a [usize])>>,
    assign: Vec<Option<usize>>,
    pre: Vec<Option<usize>>,
    nodes: u64,
    scratch: Vec<usize>,
}

impl<'a> Solver<'a> {
    fn new(a: &'a Structure, b: &'a Structure, mode: Mode, order: VarOrder) -> Self {
        let mut a_inc = vec![Vec::new(); a.len()];
        for (r, rel) in a.relations().iter().enumerate() {
            for t in rel {
                let mut seen: Vec<usize> = t.clone();
                seen.sort_unstable();
                seen.dedup();
                for x in seen {
                    a_inc[x].push((r, t.as_slice()));
                }
            }
        }
        let mut b_inc = vec![Vec::new(); b.len()];
        if mode.reflecting() {
            for (r, rel) in b.relations().iter().enumerate() {
                for t in rel {
                    let mut seen: Vec<usize> = t.clone();
                    seen.sort_unstable();
                    seen.dedup();
                    for y in seen {
                        b_inc[y].push((r, t.as_slice()));
                    }
                }
            }
        }
        Solver {
            a,
            b,
            mode,
            order,
            a_inc,
            b_inc,
            assign: vec![None; a.len()],
            pre: vec![None; b.len()],
            nodes: 0,
            scratch: Vec::new(),
        }
    }

    /// Whether `x ↦ u` is consistent with the current partial assignment.
    fn compatible(&mut self, x: usize, u: usize) -> bool {
        if self.mode.injective() {
            if let Some(other) = self.pre[u] {
                if other != x {
                    return false;
                }
            }
        }
        for &(r, t) in &self.a_inc[x] {
            self.scratch.clear();
            let mut complete = true;
            for &z in t {
                if z == x {
                    self.scratch.push(u);
                } else if let Some(w) = self.assign[z] {
                    self.scratch.push(w);
                } else {
                    complete = false;
                    break;
                }
            }
            if complete && !self.b.holds(r, &self.scratch) {
                return false;
            }
        }
        if self.mode.reflecting() {
            for &(r, t) in &self.b_inc[u] {
                self.scratch.clear();
                let mut complete = true;
                for &w in t {
                    if w == u {
                        self.scratch.push(x);
                    } else if let Some(z) = self.pre[w] {
                        self.scratch.push(z);
                    } else {
                        complete = false;
                        break;
                    }
                }
                if complete && !self.a.holds(r, &self.scratch) {
                    return false;
                }
            }
        }
        true
    }

    fn set(&mut self, x: usize, u: usize) {
        self.assign[x] = Some(u);
        // Reflecting modes are injective, so `pre` is a partial inverse.
        if self.mode.injective() {
            self.pre[u] = Some(x);
        }
    }

    fn unset(&mut self, x: usize, u: usize) {
        self.assign[x] = None;
        if self.pre[u] == Some(x) {
            self.pre[u] = None;
        }
    }

    fn initial_domains(&mut self) -> Vec<Vec<usize>> {
        (0..self.a.len())
            .map(|x| {
                if let Some(u) = self.assign[x] {
                    vec![u]
                } else {
                    (0..self.b.len()).filter(|&u| self.compatible(x, u)).collect()
                }
            })
            .collect()
    }

    fn pick(&self, domains: &[Vec<usize>]) -> Option<usize> {
        let free = (0..self.a.len()).filter(|&x| self.assign[x].is_none());
        match self.order {
            VarOrder::Lexicographic => free.min(),
            VarOrder::MostConstrained => free.min_by_key(|&x| (domains[x].len(), x)),
        }
    }

    fn run(
        &mut self,
        domains: &[Vec<usize>],
        visit: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>> {
        let Some(x) = self.pick(domains) else {
            let sol: Vec<usize> = self.assign.iter().map(|v| v.unwrap()).collect();
            return Ok(visit(&sol));
        };
        for &u in &domains[x] {
            self.nodes += 1;
            budget::charge(1)?;
            if !self.compatible(x, u) {
                continue;
            }
            self.set(x, u);
            let mut next = Vec::with_capacity(domains.len());
            let mut dead = false;
            for y in 0..domains.len() {
                if self.assign[y].is_some() || dead {
                    next.push(Vec::new());
                    continue;
                }
                let d: Vec<usize> = domains[y]
                    .iter()
                    .copied()
                    .filter(|&w| self.compatible(y, w))
                    .collect();
                dead = d.is_empty();
                next.push(d);
            }
            if !dead {
                if let ControlFlow::Break(()) = self.run(&next, visit)? {
                    self.unset(x, u);
                    return Ok(ControlFlow::Break(()));
                }
            }
            self.unset(x, u);
        }
        Ok(ControlFlow::Continue(()))
    }
}

fn prepare<'a>(
    a: &'a Structure,
    b: &'a Structure,
    mode: Mode,
    seed: &PartialMap,
    order: VarOrder,
) -> Result<Option<Solver<'a>>> {
    ensure_same_signature(a, b)?;
    if seed.source_len() != a.len() || seed.target_len() != b.len() {
        return Err(Error::precondition("seed does not fit the structures"));
    }
    if !check_partial_map(a, b, seed, mode)? {
        return Err(Error::precondition(format!(
            "seed {{{}}} already violates mode {mode}",
            seed.describe(a, b)
        )));
    }
    if mode == Mode::Iso {
        let counts_match = a.len() == b.len()
            && a
                .relations()
                .iter()
                .zip(b.relations())
                .all(|(x, y)| x.len() == y.len());
        if !counts_match {
            return Ok(None);
        }
    }
    if mode.injective() && a.len() > b.len() {
        return Ok(None);
    }
    let mut s = Solver::new(a, b, mode, order);
    for (x, u) in seed.pairs() {
        s.set(x, u);
    }
    Ok(Some(s))
}

/// Calls `visit` on every total map from `a` to `b` in `mode` extending
/// `seed`, until it breaks. Returns the number of search nodes.
pub fn for_each_map(
    a: &Structure,
    b: &Structure,
    mode: Mode,
    seed: &PartialMap,
    order: VarOrder,
    mut visit: impl FnMut(&[usize]) -> ControlFlow<()>,
) -> Result<u64> {
    let Some(mut s) = prepare(a, b, mode, seed, order)? else {
        return Ok(0);
    };
    let domains = s.initial_domains();
    if domains.iter().any(Vec::is_empty) {
        return Ok(0);
    }
    let _ = s.run(&domains, &mut visit)?;
    Ok(s.nodes)
}

/// Searches a total map from `a` to `b` in `mode` extending `seed`.
pub fn search_map(a: &Structure, b: &Structure, mode: Mode, seed: &PartialMap) -> Result<SearchResult> {
    search_map_ordered(a, b, mode, seed, VarOrder::MostConstrained)
}

pub fn search_map_ordered(
    a: &Structure,
    b: &Structure,
    mode: Mode,
    seed: &PartialMap,
    order: VarOrder,
) -> Result<SearchResult> {
    let mut found = None;
    let nodes = for_each_map(a, b, mode, seed, order, |sol| {
        found = Some(sol.to_vec());
        ControlFlow::Break(())
    })?;
    let outcome = match found {
        Some(sol) => Outcome::Found(PartialMap::total(sol, b.len())?),
        None => Outcome::Exhausted,
    };
    Ok(SearchResult {
        outcome,
        nodes_explored: nodes,
    })
}

/// Whether some map exists, from the empty seed.
pub fn exists_map(a: &Structure, b: &Structure, mode: Mode) -> Result<bool> {
    Ok(search_map(a, b, mode, &PartialMap::empty(a.len(), b.len()))?.is_found())
}

/// Exact number of total maps passing [`check_map`](crate::structures::check_map) in `mode`.
pub fn count_maps(a: &Structure, b: &Structure, mode: Mode) -> Result<u64> {
    let mut n = 0u64;
    for_each_map(
        a,
        b,
        mode,
        &PartialMap::empty(a.len(), b.len()),
        VarOrder::MostConstrained,
        |_| {
            n += 1;
            ControlFlow::Continue(())
        },
    )?;
    Ok(n)
}

/// All maps extending `seed`, in lexicographic order of their image lists.
pub fn enumerate_maps(
    a: &Structure,
    b: &Structure,
    mode: Mode,
    seed: &PartialMap,
) -> Result<Vec<PartialMap>> {
    let mut out = Vec::new();
    for_each_map(a, b, mode, seed, VarOrder::Lexicographic, |sol| {
        out.push(sol.to_vec());
        ControlFlow::Continue(())
    })?;
    out.into_iter()
        .map(|s| PartialMap::total(s, b.len()))
        .collect()
}

/// Tries to extend a local homomorphism `f` of `a` to a homomorphism from
/// the substructure induced by `goal` into `a`. The returned map is a
/// partial self-map of `a` defined exactly on `goal`.
pub fn extend_local(a: &Structure, f: &PartialMap, goal: &[usize]) -> Result<SearchResult> {
    if f.source_len() != a.len() || f.target_len() != a.len() {
        return Err(Error::precondition("local map does not fit the structure"));
    }
    if !check_partial_map(a, a, f, Mode::Hom)? {
        return Err(Error::precondition(format!(
            "{{{}}} is not a local homomorphism",
            f.describe(a, a)
        )));
    }
    let mut goal: Vec<usize> = goal.to_vec();
    goal.sort_unstable();
    goal.dedup();
    if let Some(x) = f.domain().into_iter().find(|x| goal.binary_search(x).is_err()) {
        return Err(Error::precondition(format!(
            "goal does not contain `{}` from the domain",
            a.element(x)
        )));
    }
    let sub = a.induced(&goal)?;
    let mut seed = PartialMap::empty(sub.len(), a.len());
    for (i, &x) in goal.iter().enumerate() {
        if let Some(y) = f.get(x) {
            seed.insert(i, y)?;
        }
    }
    let res = search_map(&sub, a, Mode::Hom, &seed)?;
    let outcome = match res.outcome {
        Outcome::Found(m) => {
            let mut back = PartialMap::empty(a.len(), a.len());
            for (i, y) in m.pairs() {
                back.insert(goal[i], y)?;
            }
            Outcome::Found(back)
        }
        Outcome::Exhausted => Outcome::Exhausted,
    };
    Ok(SearchResult {
        outcome,
        nodes_explored: res.nodes_explored,
    })
}

/// Which maps a homogeneity check quantifies over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomogeneityKind {
    /// Local homomorphisms must extend to endomorphisms.
    Hom,
    /// Local isomorphisms must extend to automorphisms.
    Iso,
}

/// Two-valued answer carrying a witness on the negative side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision<W> {
    Yes,
    No(W),
}

impl<W> Decision<W> {
    pub fn is_yes(&self) -> bool {
        matches!(self, Decision::Yes)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Decision::Yes => None,
            Decision::No(w) => Some(w),
        }
    }
}

/// k-element subsets of `0..n` in lexicographic order.
pub(crate) fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..n {
            if n - x < k - cur.len() {
                break;
            }
            cur.push(x);
            rec(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

/// Visits local maps of `a` (homomorphisms or isomorphisms between induced
/// substructures) with domain sizes in `sizes`, ordered by domain size,
/// then domain, then assignment.
pub(crate) fn for_each_local_map(
    a: &Structure,
    kind: HomogeneityKind,
    sizes: std::ops::RangeInclusive<usize>,
    mut visit: impl FnMut(PartialMap) -> Result<ControlFlow<()>>,
) -> Result<()> {
    let mode = match kind {
        HomogeneityKind::Hom => Mode::Hom,
        HomogeneityKind::Iso => Mode::Embedding,
    };
    for k in sizes {
        for dom in subsets_of_size(a.len(), k) {
            let sub = a.induced(&dom)?;
            let mut stop = false;
            let mut err = None;
            for_each_map(
                &sub,
                a,
                mode,
                &PartialMap::empty(sub.len(), a.len()),
                VarOrder::Lexicographic,
                |sol| {
                    let mut f = PartialMap::empty(a.len(), a.len());
                    for (i, &y) in sol.iter().enumerate() {
                        f.insert(dom[i], y).expect("fresh domain");
                    }
                    match visit(f) {
                        Ok(ControlFlow::Continue(())) => ControlFlow::Continue(()),
                        Ok(ControlFlow::Break(())) => {
                            stop = true;
                            ControlFlow::Break(())
                        }
                        Err(e) => {
                            err = Some(e);
                            ControlFlow::Break(())
                        }
                    }
                },
            )?;
            if let Some(e) = err {
                return Err(e);
            }
            if stop {
                return Ok(());
            }
        }
    }
    Ok(())
}

/// Checks (homomorphism-)homogeneity of a finite structure. The
/// counterexample is the first non-extendable local map in (domain size,
/// domain, assignment) order.
pub fn homogeneity_check(a: &Structure, kind: HomogeneityKind) -> Result<Decision<PartialMap>> {
    let n = a.len();
    let mut counterexample = None;
    // Maps on the empty or full domain always extend.
    if n >= 2 {
        let carrier: Vec<usize> = (0..n).collect();
        for_each_local_map(a, kind, 1..=n - 1, |f| {
            let extends = match kind {
                HomogeneityKind::Hom => extend_local(a, &f, &carrier)?.is_found(),
                HomogeneityKind::Iso => search_map(a, a, Mode::Iso, &f)?.is_found(),
            };
            if extends {
                Ok(ControlFlow::Continue(()))
            } else {
                counterexample = Some(f);
                Ok(ControlFlow::Break(()))
            }
        })?;
    }
    Ok(match counterexample {
        Some(f) => Decision::No(f),
        None => Decision::Yes,
    })
}

/// Homomorphisms exist in both directions.
pub fn hom_equivalent(a: &Structure, b: &Structure) -> Result<bool> {
    ensure_same_signature(a, b)?;
    Ok(exists_map(a, b, Mode::Hom)? && exists_map(b, a, Mode::Hom)?)
}
