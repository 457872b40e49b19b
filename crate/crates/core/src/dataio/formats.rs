//! Line-oriented text formats for instance and fact representations.
//!
//! Keyed instances: `rel<TAB>role=entity<TAB>...`.
//! Positional instances: `rel e1 ... eJ`, whitespace separated, entities in
//! the relation's role order (from a sidecar schema file, else roles `0..J`).
//! Facts: `meta_rel<TAB>fact_id<TAB>role={e1,e2,...}<TAB>...`.
//!
//! Keyed files may carry `#!` directives so that they round-trip exactly:
//! `#!schema<TAB>rel<TAB>role...` (for relations without items),
//! `#!entity<TAB>name` (for entities outside every item) and
//! `#!origin<TAB>rel<TAB>parent<TAB>fold`. Other lines
//! starting with `#` are comments.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::kb::{Fact, FactRepresentation, Instance, InstanceRepresentation, Origin, RelationSchema};
use crate::symbol::{EntityId, Interner, RelTypeId, RoleId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InstanceFormat {
    Positional,
    Keyed,
}

impl InstanceFormat {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "positional" => Some(InstanceFormat::Positional),
            "keyed" => Some(InstanceFormat::Keyed),
            _ => None,
        }
    }
}

/// Role order per relation for positional files.
pub type RoleOrder = BTreeMap<RelTypeId, Vec<RoleId>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedInstances {
    pub rep: InstanceRepresentation,
    /// Lines that repeated an instance already read.
    pub duplicates: usize,
}

/// Expected sizes used by strict ingestion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExpectedCounts {
    pub entities: usize,
    pub instances: usize,
    pub relation_types: usize,
}

/// Published JF17K training split sizes.
pub const JF17K_TRAIN: ExpectedCounts = ExpectedCounts {
    entities: 17629,
    instances: 139997,
    relation_types: 181,
};

/// Published JF17K test split sizes.
pub const JF17K_TEST: ExpectedCounts = ExpectedCounts {
    entities: 12282,
    instances: 22076,
    relation_types: 159,
};

/// Fails unless `rep` has exactly the expected sizes.
pub fn check_counts(rep: &InstanceRepresentation, expected: &ExpectedCounts) -> Result<()> {
    let stats = rep.stats();
    let got = ExpectedCounts {
        entities: stats.entity_count,
        instances: stats.instance_count,
        relation_types: stats.rel_type_count,
    };
    if &got != expected {
        return Err(Error::Data(format!(
            "count mismatch: expected {} entities / {} instances / {} relation types, got {} / {} / {}",
            expected.entities,
            expected.instances,
            expected.relation_types,
            got.entities,
            got.instances,
            got.relation_types
        )));
    }
    Ok(())
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn parse_err(path: &Path, line: usize, reason: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        reason: reason.into(),
    }
}

/// Reads a sidecar schema file: `rel<TAB>role1<TAB>role2...` per line, the
/// roles in positional order.
pub fn parse_role_order(path: &Path) -> Result<RoleOrder> {
    read_role_order(&read(path)?, path)
}

pub fn read_role_order(text: &str, path: &Path) -> Result<RoleOrder> {
    let mut out = RoleOrder::new();
    for (no, line) in numbered(text) {
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() < 2 {
            return Err(parse_err(path, no, "schema line needs a relation and at least one role"));
        }
        let rel = RelTypeId::new(fields[0]);
        let roles: Vec<RoleId> = fields[1..].iter().map(|r| RoleId::new(*r)).collect();
        RelationSchema::new(rel.clone(), roles.clone()).map_err(|e| parse_err(path, no, e.to_string()))?;
        if out.insert(rel.clone(), roles).is_some() {
            return Err(parse_err(path, no, format!("relation `{rel}` listed twice")));
        }
    }
    Ok(out)
}

/// Non-blank, non-comment lines with 1-based numbers.
fn numbered(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.strip_suffix('\r').unwrap_or(l)))
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
}

fn directives(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.strip_suffix('\r').unwrap_or(l)))
        .filter_map(|(no, l)| l.strip_prefix("#!").map(|d| (no, d)))
}

pub fn parse_instances(path: &Path, format: InstanceFormat) -> Result<ParsedInstances> {
    read_instances(&read(path)?, path, format, None)
}

/// Positional parse with an explicit role order.
pub fn parse_instances_with_roles(path: &Path, roles: &RoleOrder) -> Result<ParsedInstances> {
    read_instances(&read(path)?, path, InstanceFormat::Positional, Some(roles))
}

/// Parses instance text; `path` only labels errors.
pub fn read_instances(
    text: &str,
    path: &Path,
    format: InstanceFormat,
    roles: Option<&RoleOrder>,
) -> Result<ParsedInstances> {
    let mut rep = InstanceRepresentation::new();
    let mut interner = Interner::new();
    let mut duplicates = 0;
    if format == InstanceFormat::Keyed {
        apply_directives(text, path, &mut rep, &mut interner)?;
    }
    let mut arity: BTreeMap<RelTypeId, (usize, usize)> = BTreeMap::new();
    for (no, line) in numbered(text) {
        let instance = match format {
            InstanceFormat::Keyed => keyed_instance(line, path, no, &mut interner)?,
            InstanceFormat::Positional => {
                let tokens: Vec<&str> = line.split_whitespace().collect();
                if tokens.len() < 2 {
                    return Err(parse_err(path, no, "expected a relation name and at least one entity"));
                }
                let rel = interner.rel_type(tokens[0]);
                let j = tokens.len() - 1;
                match arity.get(&rel) {
                    Some(&(seen, first)) if seen != j => {
                        return Err(parse_err(
                            path,
                            no,
                            format!("`{rel}` has {j} entities here but {seen} on line {first}"),
                        ))
                    }
                    Some(_) => {}
                    None => {
                        arity.insert(rel.clone(), (j, no));
                    }
                }
                let order: Vec<RoleId> = match roles {
                    Some(map) => {
                        let order = map
                            .get(&rel)
                            .ok_or_else(|| parse_err(path, no, format!("no schema for `{rel}`")))?;
                        if order.len() != j {
                            return Err(parse_err(
                                path,
                                no,
                                format!("`{rel}` has {} roles but the line has {j} entities", order.len()),
                            ));
                        }
                        order.clone()
                    }
                    None => (0..j).map(|k| interner.role(&k.to_string())).collect(),
                };
                let pairs = order.into_iter().zip(tokens[1..].iter().map(|e| interner.entity(e)));
                Instance::new(rel, pairs).map_err(|e| parse_err(path, no, e.to_string()))?
            }
        };
        let fresh = rep
            .insert(instance)
            .map_err(|e| parse_err(path, no, e.to_string()))?;
        duplicates += usize::from(!fresh);
    }
    Ok(ParsedInstances { rep, duplicates })
}

fn keyed_instance(line: &str, path: &Path, no: usize, interner: &mut Interner) -> Result<Instance> {
    let mut fields = line.split('\t');
    let rel = fields.next().filter(|r| !r.is_empty());
    let rel = rel.ok_or_else(|| parse_err(path, no, "missing relation name"))?;
    let mut pairs = Vec::new();
    for field in fields {
        let (role, entity) = field
            .split_once('=')
            .ok_or_else(|| parse_err(path, no, format!("expected role=entity, found `{field}`")))?;
        if role.is_empty() || entity.is_empty() {
            return Err(parse_err(path, no, format!("empty role or entity in `{field}`")));
        }
        pairs.push((interner.role(role), interner.entity(entity)));
    }
    if pairs.is_empty() {
        return Err(parse_err(path, no, "instance has no roles"));
    }
    Instance::new(interner.rel_type(rel), pairs).map_err(|e| parse_err(path, no, e.to_string()))
}

/// Target of `#!` directives: the parts shared by both representations.
trait DirectiveSink {
    fn add_schema(&mut self, schema: RelationSchema) -> Result<()>;
    fn add_entity(&mut self, entity: EntityId);
    fn add_origin(&mut self, rel: RelTypeId, origin: Origin) -> Result<()>;
}

impl DirectiveSink for InstanceRepresentation {
    fn add_schema(&mut self, schema: RelationSchema) -> Result<()> {
        InstanceRepresentation::add_schema(self, schema)
    }
    fn add_entity(&mut self, entity: EntityId) {
        self.entities.insert(entity);
    }
    fn add_origin(&mut self, rel: RelTypeId, origin: Origin) -> Result<()> {
        self.origins.insert(rel, origin);
        Ok(())
    }
}

impl DirectiveSink for FactRepresentation {
    fn add_schema(&mut self, schema: RelationSchema) -> Result<()> {
        FactRepresentation::add_schema(self, schema)
    }
    fn add_entity(&mut self, entity: EntityId) {
        self.entities.insert(entity);
    }
    fn add_origin(&mut self, _: RelTypeId, _: Origin) -> Result<()> {
        Err(Error::Data("origin directives are not allowed in fact files".into()))
    }
}

fn apply_directives(text: &str, path: &Path, sink: &mut impl DirectiveSink, interner: &mut Interner) -> Result<()> {
    for (no, directive) in directives(text) {
        let fields: Vec<&str> = directive.split('\t').collect();
        match fields[0] {
            "schema" if fields.len() >= 3 => {
                let rel = interner.rel_type(fields[1]);
                let roles: Vec<RoleId> = fields[2..].iter().map(|r| interner.role(r)).collect();
                let schema = RelationSchema::new(rel, roles)
                    .map_err(|e| parse_err(path, no, e.to_string()))?;
                sink.add_schema(schema).map_err(|e| parse_err(path, no, e.to_string()))?;
            }
            "entity" if fields.len() == 2 => sink.add_entity(interner.entity(fields[1])),
            "origin" if fields.len() == 4 => {
                let fold = fields[3]
                    .parse()
                    .map_err(|_| parse_err(path, no, format!("bad fold `{}`", fields[3])))?;
                let origin = Origin {
                    parent: interner.rel_type(fields[2]),
                    fold,
                };
                sink.add_origin(interner.rel_type(fields[1]), origin)
                    .map_err(|e| parse_err(path, no, e.to_string()))?;
            }
            _ => return Err(parse_err(path, no, format!("malformed directive `#!{directive}`"))),
        }
    }
    Ok(())
}

fn covered_entities<'a>(items: impl Iterator<Item = &'a EntityId>) -> BTreeSet<&'a EntityId> {
    items.collect()
}

/// Keyed text for `rep`, directives first. Parsing it back yields `rep`.
pub fn format_instances_keyed(rep: &InstanceRepresentation) -> String {
    let mut out = String::new();
    let bare = rep.schemas.values().filter(|s| rep.instances.get(s.rel_type()).is_none_or(|set| set.is_empty()));
    for schema in bare {
        let _ = write!(out, "#!schema\t{}", schema.rel_type());
        for role in schema.roles() {
            let _ = write!(out, "\t{role}");
        }
        out.push('\n');
    }
    for (rel, origin) in &rep.origins {
        let _ = writeln!(out, "#!origin\t{rel}\t{}\t{}", origin.parent, origin.fold);
    }
    let covered = covered_entities(rep.iter().flat_map(|i| i.entities()));
    for e in rep.entities.iter().filter(|e| !covered.contains(e)) {
        let _ = writeln!(out, "#!entity\t{e}");
    }
    for instance in rep.iter() {
        out.push_str(instance.rel_type().name());
        for (role, entity) in instance.assignment() {
            let _ = write!(out, "\t{role}={entity}");
        }
        out.push('\n');
    }
    out
}

/// Positional text plus the sidecar role-order text that reads it back.
pub fn format_instances_positional(rep: &InstanceRepresentation) -> (String, String) {
    let mut body = String::new();
    for instance in rep.iter() {
        body.push_str(instance.rel_type().name());
        for entity in instance.entities() {
            body.push(' ');
            body.push_str(entity.name());
        }
        body.push('\n');
    }
    let mut schema = String::new();
    for s in rep.schemas.values() {
        schema.push_str(s.rel_type().name());
        for role in s.roles() {
            let _ = write!(schema, "\t{role}");
        }
        schema.push('\n');
    }
    (body, schema)
}

pub fn write_instances(rep: &InstanceRepresentation, path: &Path) -> Result<()> {
    write_text(path, &format_instances_keyed(rep))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

pub fn parse_facts(path: &Path) -> Result<FactRepresentation> {
    read_facts(&read(path)?, path)
}

pub fn read_facts(text: &str, path: &Path) -> Result<FactRepresentation> {
    let mut rep = FactRepresentation::new();
    let mut interner = Interner::new();
    apply_directives(text, path, &mut rep, &mut interner)?;
    let mut seen: BTreeMap<EntityId, usize> = BTreeMap::new();
    for (no, line) in numbered(text) {
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() < 3 || fields[0].is_empty() || fields[1].is_empty() {
            return Err(parse_err(path, no, "expected meta_rel, fact_id and at least one role"));
        }
        let fact_id = interner.entity(fields[1]);
        if let Some(first) = seen.insert(fact_id.clone(), no) {
            return Err(parse_err(path, no, format!("fact id `{fact_id}` already used on line {first}")));
        }
        let mut pairs = Vec::new();
        for field in &fields[2..] {
            let (role, set) = field
                .split_once('=')
                .ok_or_else(|| parse_err(path, no, format!("expected role={{...}}, found `{field}`")))?;
            let inner = set
                .strip_prefix('{')
                .and_then(|s| s.strip_suffix('}'))
                .ok_or_else(|| parse_err(path, no, format!("role `{role}` needs a braced set")))?;
            if inner.is_empty() {
                return Err(parse_err(path, no, format!("role `{role}` has an empty set")));
            }
            let entities: BTreeSet<EntityId> = inner.split(',').map(|e| interner.entity(e)).collect();
            let role = interner.role(role);
            pairs.push((role, entities));
        }
        let fact = Fact::new(interner.rel_type(fields[0]), fact_id, pairs)
            .map_err(|e| parse_err(path, no, e.to_string()))?;
        rep.insert(fact).map_err(|e| parse_err(path, no, e.to_string()))?;
    }
    Ok(rep)
}

pub fn format_facts(rep: &FactRepresentation) -> String {
    let mut out = String::new();
    let bare = rep.schemas.values().filter(|s| rep.facts.get(s.rel_type()).is_none_or(|set| set.is_empty()));
    for schema in bare {
        let _ = write!(out, "#!schema\t{}", schema.rel_type());
        for role in schema.roles() {
            let _ = write!(out, "\t{role}");
        }
        out.push('\n');
    }
    let covered = covered_entities(rep.iter().flat_map(|f| f.entities()));
    for e in rep.entities.iter().filter(|e| !covered.contains(e)) {
        let _ = writeln!(out, "#!entity\t{e}");
    }
    for fact in rep.iter() {
        let _ = write!(out, "{}\t{}", fact.rel_type(), fact.fact_id());
        for (role, set) in fact.assignment() {
            let names: Vec<&str> = set.iter().map(|e| e.name()).collect();
            let _ = write!(out, "\t{role}={{{}}}", names.join(","));
        }
        out.push('\n');
    }
    out
}

pub fn write_facts(rep: &FactRepresentation, path: &Path) -> Result<()> {
    write_text(path, &format_facts(rep))
}

/// Path label for in-memory parses.
pub fn memory_path() -> PathBuf {
    PathBuf::from("<memory>")
}
