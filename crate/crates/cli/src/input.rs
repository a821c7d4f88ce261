//! Loading structure references (`file#name`) and class specs.

use std::fs;

use relhom::ages::ClassOracle;
use relhom::format::{self, StructureFile};
use relhom::{Signature, Structure};

use crate::Failure;

pub fn load_file(path: &str) -> Result<StructureFile, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{path}: {e}")))?;
    format::parse(&text).map_err(|e| Failure::Input(format!("{path}: {e}")))
}

/// `file#name`, or just `file` when it holds exactly one structure.
pub fn load_structure(reference: &str, max_elements: usize) -> Result<Structure, Failure> {
    let (path, name) = match reference.rsplit_once('#') {
        Some((p, n)) => (p, Some(n)),
        None => (reference, None),
    };
    let file = load_file(path)?;
    let s = match name {
        Some(n) => file
            .get(n)
            .cloned()
            .ok_or_else(|| Failure::Input(format!("{path}: no structure named `{n}`")))?,
        None if file.structures.len() == 1 => file.structures[0].clone(),
        None => {
            return Err(Failure::Input(format!(
                "{path} holds {} structures; name one with {path}#<name>",
                file.structures.len()
            )))
        }
    };
    check_size(&s, max_elements)?;
    Ok(s)
}

pub fn check_size(s: &Structure, max_elements: usize) -> Result<(), Failure> {
    if s.len() > max_elements {
        return Err(Failure::Budget(format!(
            "{} has {} elements, over the element budget of {max_elements}",
            s.name(),
            s.len()
        )));
    }
    Ok(())
}

/// `all-graphs | all-digraphs | linear-orders | age-of:<file>#<name> |
/// forbidden:<file> | explicit:<file>`.
pub fn load_class(spec: &str, max_elements: usize) -> Result<ClassOracle, Failure> {
    match spec {
        "all-graphs" => return Ok(ClassOracle::all_graphs()),
        "all-digraphs" => return Ok(ClassOracle::all_digraphs()),
        "linear-orders" => return Ok(ClassOracle::linear_orders()),
        _ => {}
    }
    let Some((kind, arg)) = spec.split_once(':') else {
        return Err(Failure::Usage(format!("unknown class `{spec}`")));
    };
    match kind {
        "age-of" => Ok(ClassOracle::age_of(&load_structure(arg, max_elements)?)),
        "forbidden" | "explicit" => {
            let file = load_file(arg)?;
            for s in &file.structures {
                check_size(s, max_elements)?;
            }
            let sig: Signature = file.signature;
            let built = if kind == "forbidden" {
                ClassOracle::forbidden(sig, file.structures)
            } else {
                ClassOracle::explicit(sig, file.structures)
            };
            built.map_err(Failure::from)
        }
        _ => Err(Failure::Usage(format!("unknown class kind `{kind}` in `{spec}`"))),
    }
}

/// `a=x,b=y` as name pairs.
pub fn parse_pairs(text: &str) -> Result<Vec<(String, String)>, Failure> {
    text.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            p.split_once('=')
                .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                .ok_or_else(|| Failure::Usage(format!("expected name=name, got `{p}`")))
        })
        .collect()
}

/// `a,b,c` against the elements of `s`.
pub fn parse_tuple(s: &Structure, text: &str) -> Result<Vec<usize>, Failure> {
    text.split(',')
        .map(|e| s.index_of(e.trim()).map_err(|_| Failure::Usage(format!("`{}` is not an element of {}", e.trim(), s.name()))))
        .collect()
}
