//! Report assembly. Text mode writes `# key: value` comment lines followed
//! by the structures as a complete structure file, so the whole report
//! re-parses. Lines mode writes `key=value` records, and each line of the
//! structure file as `struct=<line>`.

use relhom::format;
use relhom::Structure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Lines,
}

#[derive(Default)]
pub struct Report {
    fields: Vec<(String, String)>,
    structures: Vec<Structure>,
}

impl Report {
    pub fn new(result: &str) -> Self {
        let mut r = Report::default();
        r.field("result", result);
        r
    }

    pub fn field(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.fields.push((key.to_string(), value.to_string()));
        self
    }

    pub fn structure(&mut self, s: Structure) -> &mut Self {
        self.structures.push(s);
        self
    }

    pub fn render(&self, fmt: Format) -> String {
        let mut out = String::new();
        let file = self.structure_file();
        match fmt {
            Format::Text => {
                for (k, v) in &self.fields {
                    out.push_str(&format!("# {k}: {v}\n"));
                }
                out.push_str(&file);
            }
            Format::Lines => {
                for (k, v) in &self.fields {
                    out.push_str(&format!("{k}={v}\n"));
                }
                for line in file.lines() {
                    out.push_str(&format!("struct={line}\n"));
                }
            }
        }
        out
    }

    /// Structures grouped by signature, one file section per group.
    fn structure_file(&self) -> String {
        let mut out = String::new();
        let mut groups: Vec<(String, Vec<&Structure>)> = Vec::new();
        for s in &self.structures {
            let sig = s.signature().to_string();
            match groups.iter_mut().find(|(g, _)| *g == sig) {
                Some((_, v)) => v.push(s),
                None => groups.push((sig, vec![s])),
            }
        }
        for (_, group) in groups {
            out.push_str(&format::write(group[0].signature(), group.iter().copied()));
        }
        out
    }
}
