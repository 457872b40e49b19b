//! Versioned text format for trained models.
//!
//! ```text
//! mfold-model	1
//! kind	m-transh
//! dim	3
//! config	9f0c2a1b33d4e5f6
//! entities	2
//! e	entity	kobe	0.1	-0.25	1e-7
//! e	fact-id	u1	...
//! relations	1
//! relation	award
//! roles	season	winner
//! normal	...
//! offset	...
//! weights	...
//! end
//! ```
//!
//! Floats use the shortest representation that parses back to the same bits.
//! Lines starting with `#` are comments.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{CostModel, EmbeddingTable, MTransHParams, ModelKind, RelationModel, RelationParams, TransHParams};
use crate::symbol::{EntityId, RelTypeId, RoleId};

pub const MODEL_FORMAT_VERSION: u32 = 1;
const MAGIC: &str = "mfold-model";

#[derive(Debug, Clone)]
pub struct SavedModel {
    pub model: CostModel,
    /// Digest of the training configuration, when recorded.
    pub config_digest: Option<String>,
}

fn push_floats(out: &mut String, key: &str, values: &[f64]) {
    out.push_str(key);
    for v in values {
        let _ = write!(out, "\t{v:?}");
    }
    out.push('\n');
}

pub fn format_model(model: &CostModel, config_digest: Option<&str>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{MAGIC}\t{MODEL_FORMAT_VERSION}");
    let _ = writeln!(out, "kind\t{}", model.kind().name());
    let _ = writeln!(out, "dim\t{}", model.dim());
    let _ = writeln!(out, "config\t{}", config_digest.unwrap_or("-"));
    let table = model.embedding();
    let _ = writeln!(out, "entities\t{}", table.len());
    for row in 0..table.len() {
        let name = table.name(row);
        let flag = if model.fact_ids().contains(name) { "fact-id" } else { "entity" };
        push_floats(&mut out, &format!("e\t{flag}\t{name}"), table.row(row));
    }
    let _ = writeln!(out, "relations\t{}", model.relations().len());
    for rel in model.relations() {
        let _ = writeln!(out, "relation\t{}", rel.rel_type);
        out.push_str("roles");
        for role in &rel.roles {
            let _ = write!(out, "\t{role}");
        }
        out.push('\n');
        push_floats(&mut out, "normal", rel.params.normal());
        push_floats(&mut out, "offset", rel.params.offset());
        if let RelationParams::MTransH(p) = &rel.params {
            push_floats(&mut out, "weights", &p.weights);
        }
    }
    out.push_str("end\n");
    out
}

pub fn save_model(model: &CostModel, config_digest: Option<&str>, path: &Path) -> Result<()> {
    fs::write(path, format_model(model, config_digest)).map_err(|e| Error::io(path, e))
}

pub fn load_model(path: &Path) -> Result<SavedModel> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    read_model(&text, path)
}

struct Lines<'a, I: Iterator<Item = (usize, &'a str)>> {
    inner: I,
    path: &'a Path,
    line: usize,
}

impl<'a, I: Iterator<Item = (usize, &'a str)>> Lines<'a, I> {
    fn err(&self, reason: impl Into<String>) -> Error {
        Error::Parse {
            path: self.path.to_path_buf(),
            line: self.line,
            reason: reason.into(),
        }
    }

    /// Next line split on tabs, which must start with `key`.
    fn expect(&mut self, key: &str) -> Result<Vec<&'a str>> {
        let (k, line) = self
            .inner
            .next()
            .ok_or_else(|| Error::Truncated(format!("{}: expected `{key}`", self.path.display())))?;
        self.line = k + 1;
        let fields: Vec<&str> = line.split('\t').collect();
        if fields[0] != key {
            return Err(self.err(format!("expected `{key}`, found `{}`", fields[0])));
        }
        Ok(fields[1..].to_vec())
    }

    fn single(&mut self, key: &str) -> Result<&'a str> {
        let fields = self.expect(key)?;
        match fields.as_slice() {
            [v] => Ok(v),
            _ => Err(self.err(format!("`{key}` takes one value"))),
        }
    }

    fn count(&mut self, key: &str) -> Result<usize> {
        let v = self.single(key)?;
        v.parse().map_err(|_| self.err(format!("bad count `{v}`")))
    }

    fn floats(&self, fields: &[&str], dim: usize) -> Result<Vec<f64>> {
        if fields.len() != dim {
            return Err(self.err(format!("dimension mismatch: expected {dim} values, found {}", fields.len())));
        }
        fields
            .iter()
            .map(|f| f.parse().map_err(|_| self.err(format!("bad number `{f}`"))))
            .collect()
    }
}

pub fn read_model(text: &str, path: &Path) -> Result<SavedModel> {
    let mut lines = Lines {
        inner: text.lines().enumerate().filter(|(_, l)| !l.starts_with('#')),
        path,
        line: 0,
    };
    let version = lines.single(MAGIC)?;
    if version.parse::<u32>().ok() != Some(MODEL_FORMAT_VERSION) {
        return Err(Error::Version {
            found: version.to_string(),
            expected: MODEL_FORMAT_VERSION,
        });
    }
    let kind_name = lines.single("kind")?;
    let kind = ModelKind::parse(kind_name).ok_or_else(|| lines.err(format!("unknown kind `{kind_name}`")))?;
    let dim = lines.count("dim")?;
    let digest = lines.single("config")?;
    let config_digest = (digest != "-").then(|| digest.to_string());

    let mut table = EmbeddingTable::new(dim);
    let mut fact_ids = BTreeSet::new();
    for _ in 0..lines.count("entities")? {
        let fields = lines.expect("e")?;
        if fields.len() < 2 {
            return Err(lines.err("entity line needs a flag and a name"));
        }
        let name = EntityId::new(fields[1]);
        match fields[0] {
            "entity" => {}
            "fact-id" => {
                fact_ids.insert(name.clone());
            }
            other => return Err(lines.err(format!("unknown entity flag `{other}`"))),
        }
        let vector = lines.floats(&fields[2..], dim)?;
        table.insert(name, &vector).map_err(|e| lines.err(e.to_string()))?;
    }

    let mut relations = Vec::new();
    for _ in 0..lines.count("relations")? {
        let rel_type = RelTypeId::new(lines.single("relation")?);
        let roles: Vec<RoleId> = lines.expect("roles")?.iter().map(RoleId::new).collect();
        let fields = lines.expect("normal")?;
        let normal = lines.floats(&fields, dim)?;
        let fields = lines.expect("offset")?;
        let offset = lines.floats(&fields, dim)?;
        let params = match kind {
            ModelKind::TransH => RelationParams::TransH(TransHParams {
                normal,
                translation: offset,
            }),
            ModelKind::MTransH | ModelKind::MTransHId => {
                let fields = lines.expect("weights")?;
                let weights = lines.floats(&fields, roles.len())?;
                RelationParams::MTransH(MTransHParams {
                    normal,
                    bias: offset,
                    weights,
                })
            }
        };
        relations.push(RelationModel {
            rel_type,
            roles,
            params,
        });
    }
    lines.expect("end")?;
    let model = CostModel::new(kind, table, relations, fact_ids).map_err(|e| lines.err(e.to_string()))?;
    Ok(SavedModel { model, config_digest })
}
