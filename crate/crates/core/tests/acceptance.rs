//! Acceptance suite. Run with `cargo test -p relhom --test acceptance`;
//! prints one PASS/FAIL line per criterion and exits non-zero on failure.

use std::collections::{BTreeSet, HashSet};
use std::process::ExitCode;
use std::time::Instant;

use relhom::ages::{age, check_class_property, csp_equivalent, ClassOracle, ClassProperty};
use relhom::canon::canonical_key;
use relhom::catalog;
use relhom::cores::{
    endomorphisms, expand_by_types, finite_core, irreducibles, is_core, is_hom_irreducible, saturate,
    type_classes,
};
use relhom::homsearch::{count_maps, hom_equivalent, homogeneity_check, search_map};
use relhom::limits::{build_limit, extension_failures, konig_hom, pairing, unpair, KonigOutcome, LimitMode};
use relhom::{check_map, check_partial_map, HomogeneityKind, Mode, PartialMap, Structure};

type Check = std::result::Result<String, String>;

/// Pair (by `B` and subset) and the images of `f`.
type Task = (String, Vec<usize>, Vec<Option<usize>>);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn err(e: relhom::Error) -> String {
    e.to_string()
}

/// Every map `a → b`, by brute force, filtered by `check_map`.
fn brute_force(a: &Structure, b: &Structure, mode: Mode) -> u64 {
    let (n, m) = (a.len(), b.len());
    let mut images = vec![0; n];
    let mut count = 0;
    loop {
        let map = PartialMap::total(images.clone(), m).unwrap();
        if check_map(a, b, &map, mode).unwrap() {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == n {
                return count;
            }
            images[i] += 1;
            if images[i] < m {
                break;
            }
            images[i] = 0;
            i += 1;
        }
    }
}

const MODES: [Mode; 4] = [Mode::Hom, Mode::Mono, Mode::Embedding, Mode::Iso];

fn solver_matches_enumeration() -> Check {
    let cat = catalog::standard();
    ensure!(cat.len() >= 30, "catalog has only {} structures", cat.len());
    let mut checked = 0;
    for a in &cat {
        for b in &cat {
            for mode in MODES {
                let expected = brute_force(a, b, mode);
                let empty = PartialMap::empty(a.len(), b.len());
                let found = search_map(a, b, mode, &empty).map_err(err)?;
                if let Some(m) = found.found() {
                    ensure!(check_map(a, b, m, mode).unwrap(), "invalid {mode:?} map {} -> {}", a.name(), b.name());
                }
                ensure!(
                    found.is_found() == (expected > 0),
                    "{mode:?} {} -> {}: solver {} vs {expected} maps",
                    a.name(),
                    b.name(),
                    found.is_found()
                );
                let counted = count_maps(a, b, mode).map_err(err)?;
                ensure!(counted == expected, "{mode:?} {} -> {}: count {counted} vs {expected}", a.name(), b.name());
                checked += 1;
            }
        }
    }
    Ok(format!("{} structures, {checked} (pair, mode) checks", cat.len()))
}

fn graph_irreducibility_law() -> Check {
    let graphs = ClassOracle::all_graphs().enumerate_up_to(4).map_err(err)?;
    for g in &graphs {
        let complete = g.relation(0).len() == g.len() * (g.len() - 1);
        let irr = is_hom_irreducible(g, &ClassOracle::all_graphs(), 5).map_err(err)?.is_yes();
        ensure!(irr == complete, "{} edges on {} vertices: irreducible = {irr}", g.relation(0).len() / 2, g.len());
    }
    Ok(format!("{} graphs", graphs.len()))
}

fn hap_necessity() -> Check {
    let mut checked = Vec::new();
    for a in catalog::standard() {
        if !homogeneity_check(&a, HomogeneityKind::Hom).map_err(err)?.is_yes() {
            continue;
        }
        let v = check_class_property(&ClassOracle::age_of(&a), ClassProperty::Hap, 3, 8).map_err(err)?;
        ensure!(!v.fails(), "HAP fails for the age of {}", a.name());
        checked.push(a.name().to_string());
    }
    ensure!(!checked.is_empty(), "no hom-homogeneous catalog structure");
    Ok(format!("{} ages: {}", checked.len(), checked.join(" ")))
}

fn chain_soundness() -> Check {
    let graphs = ClassOracle::all_graphs();
    let state = build_limit(&graphs, 12, LimitMode::Hap, 2).map_err(err)?;
    let h = state.last();
    for g in graphs.enumerate_up_to(2).map_err(err)? {
        let empty = PartialMap::empty(g.len(), h.len());
        ensure!(search_map(&g, h, Mode::Embedding, &empty).map_err(err)?.is_found(), "{} not embedded", g.name());
    }
    for m in age(h, 3).map_err(err)? {
        ensure!(graphs.contains(&m).map_err(err)?, "age member outside the class");
    }
    // Stages of a longer run extend those of a shorter one, so one long
    // run covers every step count.
    let long = build_limit(&graphs, 64, LimitMode::Hap, 2).map_err(err)?;
    ensure!(
        long.stages[..state.stages.len()] == state.stages[..],
        "runs with different step counts disagree"
    );
    let mut previous: Option<HashSet<Task>> = None;
    let mut converged = None;
    for (k, stage) in long.stages.iter().enumerate() {
        let failures = extension_failures(stage, &graphs, 2).map_err(err)?;
        let now: HashSet<_> = failures
            .iter()
            .map(|f| (f.pair.b.name().to_string(), f.pair.subset.clone(), f.f.images().to_vec()))
            .collect();
        if let Some(prev) = &previous {
            let old_len = long.stages[k - 1].len();
            for task in &now {
                let existed = task.2.iter().flatten().all(|&y| y < old_len);
                ensure!(!existed || prev.contains(task), "discharged task regressed at stage {k}");
            }
        }
        if failures.is_empty() && converged.is_none() {
            converged = Some(k);
        }
        previous = Some(now);
    }
    let Some(k) = converged else {
        return Err("extension property not reached within 64 steps".into());
    };
    let tail_ok = long.stages[k..]
        .iter()
        .all(|s| extension_failures(s, &graphs, 2).map(|f| f.is_empty()).unwrap_or(false));
    ensure!(tail_ok, "extension property lost after stage {k}");
    Ok(format!("|H_12| = {}, extension property from stage {k} (|H| = {})", h.len(), long.stages[k].len()))
}

fn csp_equivalence() -> Check {
    let cat = catalog::standard_up_to(4);
    let mut pairs = 0;
    for a in &cat {
        for b in &cat {
            let csp = csp_equivalent(a, b, 4).map_err(err)?.is_yes();
            let he = hom_equivalent(a, b).map_err(err)?;
            ensure!(csp == he, "{} vs {}: csp {csp}, hom-equivalent {he}", a.name(), b.name());
            pairs += 1;
        }
    }
    Ok(format!("{pairs} pairs"))
}

fn six_vertex_graphs() -> Vec<Structure> {
    vec![
        catalog::complete(6),
        catalog::empty_graph(6),
        catalog::sum("3K2", &[catalog::complete(2), catalog::complete(2), catalog::complete(2)]),
        catalog::sum("2K3", &[catalog::complete(3), catalog::complete(3)]),
        catalog::sum("K4+K2", &[catalog::complete(4), catalog::complete(2)]),
        catalog::cycle(6),
        catalog::path(6),
    ]
}

fn core_pipeline() -> Check {
    let mut checked = Vec::new();
    let graphs = catalog::standard()
        .into_iter()
        .chain(six_vertex_graphs())
        .filter(|g| ClassOracle::all_graphs().contains(g).unwrap());
    for g in graphs {
        if !homogeneity_check(&g, HomogeneityKind::Hom).map_err(err)?.is_yes() {
            continue;
        }
        let r = finite_core(&g).map_err(err)?;
        let img = &r.image;
        ensure!(img.relation(0).len() == img.len() * (img.len() - 1), "core of {} is not complete", g.name());
        ensure!(is_core(img).map_err(err)?.is_yes(), "image of {} is not a core", g.name());
        ensure!(hom_equivalent(&g, img).map_err(err)?, "{} not hom-equivalent to its core", g.name());
        let irr = irreducibles(&ClassOracle::age_of(&g), g.len()).map_err(err)?;
        let key = canonical_key(img);
        ensure!(irr.iter().any(|s| canonical_key(s) == key), "core of {} is not irreducible", g.name());
        checked.push(g.name().to_string());
    }
    ensure!(!checked.is_empty(), "no hom-homogeneous graph");
    Ok(format!("{} graphs: {}", checked.len(), checked.join(" ")))
}

fn saturation() -> Check {
    let mut tuples = 0;
    for a in catalog::standard() {
        let age = ClassOracle::age_of(&a);
        for n in 1..=2 {
            let order = type_classes(&a, n).map_err(err)?;
            for class in &order.classes {
                for t in class {
                    let (top, e) = saturate(&a, t).map_err(err)?;
                    let c = order.class_of(&top).expect("classified");
                    ensure!(order.maximal[c], "{} {t:?}: {top:?} not maximal", a.name());
                    ensure!(
                        check_partial_map(&a, &a, &e, Mode::Hom).unwrap(),
                        "{} {t:?}: climbing map is not a local homomorphism",
                        a.name()
                    );
                    let sub = a.induced(&dedup(&top)).map_err(err)?;
                    ensure!(
                        is_hom_irreducible(&sub, &age, a.len()).map_err(err)?.is_yes(),
                        "{} {t:?}: {top:?} spans a reducible substructure",
                        a.name()
                    );
                    tuples += 1;
                }
            }
        }
    }
    Ok(format!("{tuples} tuples"))
}

fn dedup(t: &[usize]) -> Vec<usize> {
    t.iter().copied().collect::<BTreeSet<_>>().into_iter().collect()
}

fn filtrations(a: &Structure) -> Vec<Vec<Structure>> {
    let n = a.len();
    let forward: Vec<usize> = (0..n).collect();
    let backward: Vec<usize> = (0..n).rev().collect();
    let mut out = vec![];
    for order in [forward, backward] {
        out.push((1..=n).map(|t| a.induced(&order[..t]).unwrap()).collect());
    }
    out
}

fn konig_equivalence() -> Check {
    let cat = catalog::standard();
    let mut runs = 0;
    for a in &cat {
        for chain in filtrations(a) {
            for b in &cat {
                let exists = search_map(a, b, Mode::Hom, &PartialMap::empty(a.len(), b.len()))
                    .map_err(err)?
                    .is_found();
                match konig_hom(&chain, b, chain.len()).map_err(err)? {
                    KonigOutcome::Branch { maps, .. } => {
                        ensure!(exists, "{} -> {}: branch without a homomorphism", a.name(), b.name());
                        for (t, m) in maps.iter().enumerate() {
                            ensure!(check_map(&chain[t], b, m, Mode::Hom).unwrap(), "level {t} is not a homomorphism");
                            if t > 0 {
                                for (i, e) in chain[t - 1].elements().iter().enumerate() {
                                    let p = chain[t].index_of(e).unwrap();
                                    ensure!(m.get(p) == maps[t - 1].get(i), "tower breaks at level {}", t + 1);
                                }
                            }
                        }
                    }
                    KonigOutcome::Empty { level, .. } => {
                        ensure!(!exists, "{} -> {}: empty at level {level} but a homomorphism exists", a.name(), b.name());
                    }
                }
                runs += 1;
            }
        }
    }
    Ok(format!("{runs} (filtration, target) runs"))
}

fn expansion() -> Check {
    let mut structures: Vec<Structure> = catalog::standard_up_to(4);
    structures.extend(ClassOracle::all_graphs().enumerate_up_to(4).map_err(err)?);
    structures.extend(ClassOracle::all_digraphs().enumerate_up_to(2).map_err(err)?);
    for a in &structures {
        let e = expand_by_types(a, a.len()).map_err(err)?;
        ensure!(
            homogeneity_check(&e, HomogeneityKind::Hom).map_err(err)?.is_yes(),
            "expansion of {} is not hom-homogeneous",
            a.name()
        );
        let before = endomorphisms(a).map_err(err)?.len();
        let after = endomorphisms(&e).map_err(err)?.len();
        ensure!(before == after, "{}: {before} endomorphisms before, {after} after", a.name());
    }
    Ok(format!("{} structures", structures.len()))
}

fn schedule_fairness() -> Check {
    let mut seen = HashSet::new();
    for k in (0..20_000u64).step_by(2) {
        let (i, j) = unpair(k).map_err(err)?;
        ensure!(i % 2 == 0, "unpair({k}) has odd first component");
        ensure!(pairing(i, j).map_err(err)? == k, "round trip fails at {k}");
        ensure!(k >= i, "pairing({i}, {j}) = {k} < {i}");
        ensure!(seen.insert((i, j)), "({i}, {j}) hit twice");
    }
    for i in (0..200u64).step_by(2) {
        for j in 0..200 {
            let k = pairing(i, j).map_err(err)?;
            ensure!(k >= i && k % 2 == 0, "pairing({i}, {j}) = {k}");
            ensure!(unpair(k).map_err(err)? == (i, j), "round trip fails at ({i}, {j})");
        }
    }
    Ok("10000 even naturals".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("solver agrees with exhaustive enumeration", solver_matches_enumeration),
        ("graph irreducibility law", graph_irreducibility_law),
        ("HAP for ages of hom-homogeneous structures", hap_necessity),
        ("chain soundness and convergence", chain_soundness),
        ("bounded CSP equality vs hom-equivalence", csp_equivalence),
        ("core pipeline on hom-homogeneous graphs", core_pipeline),
        ("saturated tuples span irreducibles", saturation),
        ("Konig branch iff homomorphism", konig_equivalence),
        ("type expansion is hom-homogeneous", expansion),
        ("schedule fairness", schedule_fairness),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS  {name} [{detail}] ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {why} ({secs:.2}s)", i + 1);
            }
        }
    }
    println!("acceptance: {}/{} passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
