//! Browser bindings: each export takes plain strings and numbers and
//! returns a JSON document, `{"error": ...}` on failure.

use serde::Serialize;
use wasm_bindgen::prelude::wasm_bindgen;

use relhom::ages::ClassOracle;
use relhom::budget::with_node_limit;
use relhom::cores::finite_core;
use relhom::format::{self, to_file_string};
use relhom::homsearch::{homogeneity_check, search_map};
use relhom::limits::{build_limit, verify_extension_property, LimitMode};
use relhom::{HomogeneityKind, Mode, PartialMap, Structure};

const NODE_LIMIT: u64 = 2_000_000;

#[derive(Serialize)]
struct Failure {
    error: String,
}

#[derive(Serialize)]
struct MapResult {
    found: bool,
    mode: &'static str,
    /// `[source element, target element]` pairs.
    map: Vec<[String; 2]>,
}

#[derive(Serialize)]
struct CoreResult {
    size: usize,
    is_core_already: bool,
    hom_homogeneous: bool,
    retraction: Vec<[String; 2]>,
    core: String,
}

#[derive(Serialize)]
struct LimitResult {
    sizes: Vec<usize>,
    log: Vec<String>,
    edges: Vec<[String; 2]>,
    extension_property: bool,
    structure: String,
}

fn json<T: Serialize>(r: Result<T, String>) -> String {
    match r {
        Ok(v) => serde_json::to_string(&v),
        Err(error) => serde_json::to_string(&Failure { error }),
    }
    .expect("plain data serializes")
}

fn pick(text: &str, name: &str) -> Result<Structure, String> {
    let file = format::parse(text).map_err(|e| e.to_string())?;
    file.get(name)
        .cloned()
        .ok_or_else(|| format!("no structure named `{name}`"))
}

fn pairs(m: &PartialMap, a: &Structure, b: &Structure) -> Vec<[String; 2]> {
    m.pairs()
        .map(|(x, y)| [a.element(x).to_string(), b.element(y).to_string()])
        .collect()
}

fn mode(name: &str) -> Result<Mode, String> {
    match name {
        "hom" => Ok(Mode::Hom),
        "mono" => Ok(Mode::Mono),
        "embed" => Ok(Mode::Embedding),
        "iso" => Ok(Mode::Iso),
        _ => Err(format!("unknown mode `{name}`")),
    }
}

/// Searches for a map from structure `a` to structure `b`, both named in
/// the structure file `text`.
#[wasm_bindgen]
pub fn find_map(text: &str, a: &str, b: &str, mode_name: &str) -> String {
    json((|| {
        let (a, b) = (pick(text, a)?, pick(text, b)?);
        let m = mode(mode_name)?;
        let res = with_node_limit(NODE_LIMIT, || search_map(&a, &b, m, &PartialMap::empty(a.len(), b.len())))
            .map_err(|e| e.to_string())?;
        Ok(MapResult {
            found: res.is_found(),
            mode: m.as_str(),
            map: res.found().map(|f| pairs(f, &a, &b)).unwrap_or_default(),
        })
    })())
}

/// The core of a structure, as a retraction onto an induced substructure.
#[wasm_bindgen]
pub fn core_of(text: &str, name: &str) -> String {
    json((|| {
        let a = pick(text, name)?;
        with_node_limit(NODE_LIMIT, || {
            let r = finite_core(&a)?;
            let hh = homogeneity_check(&a, HomogeneityKind::Hom)?.is_yes();
            Ok(CoreResult {
                size: r.image.len(),
                is_core_already: r.image.len() == a.len(),
                hom_homogeneous: hh,
                retraction: pairs(&r.map, &a, &a),
                core: to_file_string(&r.image.clone().with_name(format!("core_{}", a.name()))),
            })
        })
        .map_err(|e: relhom::Error| e.to_string())
    })())
}

/// Runs the chain construction over all finite graphs for `steps` stages
/// and reports whether the last stage extends every homomorphism between
/// graphs on at most two vertices.
#[wasm_bindgen]
pub fn graph_limit(steps: usize) -> String {
    json((|| {
        if steps > 64 {
            return Err("at most 64 steps".to_string());
        }
        let class = ClassOracle::all_graphs();
        with_node_limit(NODE_LIMIT, || {
            let state = build_limit(&class, steps, LimitMode::Hap, 2)?;
            let h = state.last();
            let ok = verify_extension_property(h, &class, 2)?.is_yes();
            Ok(LimitResult {
                sizes: state.stages.iter().map(Structure::len).collect(),
                log: state.log.clone(),
                edges: h
                    .relation(0)
                    .iter()
                    .filter(|t| t[0] < t[1])
                    .map(|t| [h.element(t[0]).to_string(), h.element(t[1]).to_string()])
                    .collect(),
                extension_property: ok,
                structure: to_file_string(&h.clone().with_name("H")),
            })
        })
        .map_err(|e: relhom::Error| e.to_string())
    })())
}
