//! The structure text format.
//!
//! ```text
//! signature E/2
//! structure K3
//!   elements a b c
//!   E: (a,b) (b,a) (a,c) (c,a) (b,c) (c,b)
//! ```
//!
//! Comments start with `#`. Tokens may be separated by arbitrary
//! whitespace, including inside tuples.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::structures::{Signature, Structure, Tuple};

/// A parsed file: one signature, one or more structures.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureFile {
    pub signature: Signature,
    pub structures: Vec<Structure>,
}

impl StructureFile {
    pub fn get(&self, name: &str) -> Option<&Structure> {
        self.structures.iter().find(|s| s.name() == name)
    }
}

fn perr(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

struct Pending {
    line: usize,
    name: String,
    elements: Option<Vec<String>>,
    relations: Vec<Option<BTreeSet<Tuple>>>,
}

impl Pending {
    fn finish(self, signature: &Signature) -> Result<Structure> {
        let elements = self
            .elements
            .ok_or_else(|| perr(self.line, format!("structure `{}` has no elements line", self.name)))?;
        if elements.is_empty() {
            return Err(perr(self.line, format!("structure `{}` is empty", self.name)));
        }
        let relations = self
            .relations
            .into_iter()
            .map(Option::unwrap_or_default)
            .collect();
        Structure::from_indices(self.name, signature.clone(), elements, relations)
            .map_err(|e| perr(self.line, e.to_string()))
    }
}

fn parse_signature(line: usize, rest: &str) -> Result<Signature> {
    let mut rels = Vec::new();
    for tok in rest.split_whitespace() {
        let (name, arity) = tok
            .rsplit_once('/')
            .ok_or_else(|| perr(line, format!("expected name/arity, got `{tok}`")))?;
        let arity: usize = arity
            .parse()
            .map_err(|_| perr(line, format!("bad arity in `{tok}`")))?;
        rels.push((name.to_string(), arity));
    }
    Signature::new(rels).map_err(|e| perr(line, e.to_string()))
}

fn parse_tuples(
    line: usize,
    body: &str,
    arity: usize,
    index: &HashMap<&str, usize>,
) -> Result<BTreeSet<Tuple>> {
    let compact: String = body.chars().filter(|c| !c.is_whitespace()).collect();
    let mut out = BTreeSet::new();
    let mut rest = compact.as_str();
    while !rest.is_empty() {
        let inner = rest
            .strip_prefix('(')
            .ok_or_else(|| perr(line, format!("expected `(` at `{rest}`")))?;
        let close = inner
            .find(')')
            .ok_or_else(|| perr(line, "unterminated tuple"))?;
        let tuple = inner[..close]
            .split(',')
            .map(|e| {
                index
                    .get(e)
                    .copied()
                    .ok_or_else(|| perr(line, format!("unknown element `{e}`")))
            })
            .collect::<Result<Tuple>>()?;
        if tuple.len() != arity {
            return Err(perr(
                line,
                format!("tuple of length {} for arity {arity}", tuple.len()),
            ));
        }
        out.insert(tuple);
        rest = &inner[close + 1..];
    }
    Ok(out)
}

/// Parses a structure file.
pub fn parse(text: &str) -> Result<StructureFile> {
    let mut signature: Option<Signature> = None;
    let mut structures = Vec::new();
    let mut pending: Option<Pending> = None;

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (keyword, rest) = content
            .split_once(char::is_whitespace)
            .map(|(k, r)| (k, r.trim()))
            .unwrap_or((content, ""));
        match keyword {
            "signature" => {
                if signature.is_some() {
                    return Err(perr(line, "second signature line"));
                }
                signature = Some(parse_signature(line, rest)?);
            }
            "structure" => {
                let sig = signature
                    .as_ref()
                    .ok_or_else(|| perr(line, "structure before signature"))?;
                if rest.is_empty() || rest.split_whitespace().count() != 1 {
                    return Err(perr(line, "expected `structure <name>`"));
                }
                if let Some(p) = pending.take() {
                    structures.push(p.finish(sig)?);
                }
                if structures.iter().any(|s: &Structure| s.name() == rest) {
                    return Err(perr(line, format!("duplicate structure name `{rest}`")));
                }
                pending = Some(Pending {
                    line,
                    name: rest.to_string(),
                    elements: None,
                    relations: vec![None; sig.len()],
                });
            }
            "elements" => {
                let p = pending
                    .as_mut()
                    .ok_or_else(|| perr(line, "elements outside a structure block"))?;
                if p.elements.is_some() {
                    return Err(perr(line, "second elements line"));
                }
                p.elements = Some(rest.split_whitespace().map(str::to_string).collect());
            }
            _ => {
                let (rel, body) = content
                    .split_once(':')
                    .ok_or_else(|| perr(line, format!("unrecognized line `{content}`")))?;
                let rel = rel.trim();
                let sig = signature
                    .as_ref()
                    .ok_or_else(|| perr(line, "relation before signature"))?;
                let p = pending
                    .as_mut()
                    .ok_or_else(|| perr(line, "relation outside a structure block"))?;
                let r = sig
                    .index_of(rel)
                    .ok_or_else(|| perr(line, format!("unknown relation `{rel}`")))?;
                let elements = p
                    .elements
                    .as_ref()
                    .ok_or_else(|| perr(line, "relation line before elements line"))?;
                if p.relations[r].is_some() {
                    return Err(perr(line, format!("second line for relation `{rel}`")));
                }
                let index: HashMap<&str, usize> = elements
                    .iter()
                    .enumerate()
                    .map(|(i, e)| (e.as_str(), i))
                    .collect();
                p.relations[r] = Some(parse_tuples(line, body, sig.arity(r), &index)?);
            }
        }
    }
    let signature = signature.ok_or_else(|| perr(0, "missing signature line"))?;
    if let Some(p) = pending.take() {
        structures.push(p.finish(&signature)?);
    }
    if structures.is_empty() {
        return Err(perr(0, "no structure blocks"));
    }
    Ok(StructureFile {
        signature,
        structures,
    })
}

/// Writes one structure block (without the signature line).
pub fn write_block(out: &mut String, s: &Structure) {
    let _ = writeln!(out, "structure {}", s.name());
    let _ = writeln!(out, "  elements {}", s.elements().join(" "));
    for (r, (name, _)) in s.signature().iter().enumerate() {
        out.push_str("  ");
        out.push_str(name);
        out.push(':');
        for t in s.relation(r) {
            let names: Vec<&str> = t.iter().map(|&x| s.element(x)).collect();
            let _ = write!(out, " ({})", names.join(","));
        }
        out.push('\n');
    }
}

/// Writes a complete file for structures sharing one signature.
pub fn write<'a>(signature: &Signature, structures: impl IntoIterator<Item = &'a Structure>) -> String {
    let mut out = format!("signature {signature}\n");
    for s in structures {
        write_block(&mut out, s);
    }
    out
}

/// A single structure as a complete file.
pub fn to_file_string(s: &Structure) -> String {
    write(s.signature(), [s])
}
