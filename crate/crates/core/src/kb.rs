//! Instance and fact representations of a knowledge base.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::Add;

use crate::error::{Error, Result};
use crate::symbol::{EntityId, RelTypeId, RoleId};

/// Role that carries a fact's identifier after ID-preserving conversion.
pub const FACT_ID_ROLE: &str = "FACT-ID";

/// Separator used in pair labels; forbidden inside role names.
pub const PAIR_SEPARATOR: char = '.';

pub fn fact_id_role() -> RoleId {
    RoleId::new(FACT_ID_ROLE)
}

pub(crate) fn is_fact_id_role(role: &RoleId) -> bool {
    role.name() == FACT_ID_ROLE
}

/// Characters that cannot appear in a role name without breaking pair labels
/// or the keyed file format.
pub fn role_name_is_legal(name: &str) -> bool {
    !name.is_empty()
        && !name
            .chars()
            .any(|c| c == PAIR_SEPARATOR || c == '=' || c == '\t' || c == '\n' || c == '\r')
}

/// The role set of one relation type, kept in canonical (lexicographic) order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RelationSchema {
    rel_type: RelTypeId,
    roles: Vec<RoleId>,
}

impl RelationSchema {
    pub fn new(rel_type: RelTypeId, roles: impl IntoIterator<Item = RoleId>) -> Result<Self> {
        let mut roles: Vec<RoleId> = roles.into_iter().collect();
        roles.sort();
        if roles.is_empty() {
            return Err(Error::Schema {
                rel: rel_type.to_string(),
                reason: "role set is empty".into(),
            });
        }
        if let Some(w) = roles.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Schema {
                rel: rel_type.to_string(),
                reason: format!("duplicate role `{}`", w[0]),
            });
        }
        Ok(RelationSchema { rel_type, roles })
    }

    pub fn rel_type(&self) -> &RelTypeId {
        &self.rel_type
    }

    pub fn roles(&self) -> &[RoleId] {
        &self.roles
    }

    /// Total number of roles, FACT-ID included.
    pub fn arity(&self) -> usize {
        self.roles.len()
    }

    /// Number of entity roles (FACT-ID excluded); this is J for a J-fold relation.
    pub fn fold(&self) -> usize {
        self.roles.iter().filter(|r| !is_fact_id_role(r)).count()
    }

    pub fn has_fact_id(&self) -> bool {
        self.roles.iter().any(is_fact_id_role)
    }

    pub fn position(&self, role: &RoleId) -> Option<usize> {
        self.roles.binary_search(role).ok()
    }

    /// Same relation type with FACT-ID added (no-op if present).
    pub fn with_fact_id(&self) -> RelationSchema {
        let mut roles = self.roles.clone();
        if !self.has_fact_id() {
            roles.push(fact_id_role());
            roles.sort();
        }
        RelationSchema {
            rel_type: self.rel_type.clone(),
            roles,
        }
    }

    pub fn without_fact_id(&self) -> RelationSchema {
        RelationSchema {
            rel_type: self.rel_type.clone(),
            roles: self.roles.iter().filter(|r| !is_fact_id_role(r)).cloned().collect(),
        }
    }
}

/// One tuple of a relation: a total map from the schema's roles to entities.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Instance {
    rel_type: RelTypeId,
    assignment: BTreeMap<RoleId, EntityId>,
}

impl Instance {
    /// Builds an instance; a role given twice is an error.
    pub fn new(
        rel_type: RelTypeId,
        pairs: impl IntoIterator<Item = (RoleId, EntityId)>,
    ) -> Result<Self> {
        let mut assignment = BTreeMap::new();
        for (role, entity) in pairs {
            if assignment.insert(role.clone(), entity).is_some() {
                return Err(Error::SchemaMismatch {
                    rel: rel_type.to_string(),
                    reason: format!("role `{role}` assigned twice"),
                });
            }
        }
        Ok(Instance {
            rel_type,
            assignment,
        })
    }

    /// Convenience constructor from string pairs, used heavily in tests.
    pub fn from_names(rel: &str, pairs: &[(&str, &str)]) -> Result<Self> {
        Instance::new(
            RelTypeId::new(rel),
            pairs
                .iter()
                .map(|(r, e)| (RoleId::new(r), EntityId::new(e))),
        )
    }

    pub fn rel_type(&self) -> &RelTypeId {
        &self.rel_type
    }

    pub fn assignment(&self) -> &BTreeMap<RoleId, EntityId> {
        &self.assignment
    }

    pub fn get(&self, role: &RoleId) -> Option<&EntityId> {
        self.assignment.get(role)
    }

    pub fn roles(&self) -> impl Iterator<Item = &RoleId> {
        self.assignment.keys()
    }

    pub fn entities(&self) -> impl Iterator<Item = &EntityId> {
        self.assignment.values()
    }

    pub fn fact_id(&self) -> Option<&EntityId> {
        self.assignment.get(&fact_id_role())
    }

    /// Entity roles only (FACT-ID excluded).
    pub fn fold(&self) -> usize {
        self.assignment.keys().filter(|r| !is_fact_id_role(r)).count()
    }

    /// Copy with one role's entity replaced. The role must already be present.
    pub fn replaced(&self, role: &RoleId, entity: EntityId) -> Instance {
        debug_assert!(self.assignment.contains_key(role));
        let mut out = self.clone();
        out.assignment.insert(role.clone(), entity);
        out
    }

    /// Restriction to all roles but FACT-ID.
    pub fn without_fact_id(&self) -> Instance {
        Instance {
            rel_type: self.rel_type.clone(),
            assignment: self
                .assignment
                .iter()
                .filter(|(r, _)| !is_fact_id_role(r))
                .map(|(r, e)| (r.clone(), e.clone()))
                .collect(),
        }
    }

    pub(crate) fn from_parts(rel_type: RelTypeId, assignment: BTreeMap<RoleId, EntityId>) -> Self {
        Instance {
            rel_type,
            assignment,
        }
    }

    fn matches(&self, schema: &RelationSchema) -> std::result::Result<(), String> {
        let missing: Vec<_> = schema
            .roles()
            .iter()
            .filter(|r| !self.assignment.contains_key(*r))
            .map(|r| r.to_string())
            .collect();
        let extra: Vec<_> = self
            .assignment
            .keys()
            .filter(|r| schema.position(r).is_none())
            .map(|r| r.to_string())
            .collect();
        match (missing.is_empty(), extra.is_empty()) {
            (true, true) => Ok(()),
            (false, true) => Err(format!("missing roles {}", missing.join(","))),
            (true, false) => Err(format!("extra roles {}", extra.join(","))),
            (false, false) => Err(format!(
                "missing roles {}; extra roles {}",
                missing.join(","),
                extra.join(",")
            )),
        }
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.rel_type)?;
        for (i, (role, entity)) in self.assignment.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{role}={entity}")?;
        }
        f.write_str(")")
    }
}

/// A fact of a meta-relation: each role maps to a nonempty set of entities.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fact {
    rel_type: RelTypeId,
    fact_id: EntityId,
    assignment: BTreeMap<RoleId, BTreeSet<EntityId>>,
}

impl Fact {
    pub fn new(
        rel_type: RelTypeId,
        fact_id: EntityId,
        pairs: impl IntoIterator<Item = (RoleId, BTreeSet<EntityId>)>,
    ) -> Result<Self> {
        let mut assignment = BTreeMap::new();
        for (role, set) in pairs {
            if assignment.insert(role.clone(), set).is_some() {
                return Err(Error::SchemaMismatch {
                    rel: rel_type.to_string(),
                    reason: format!("role `{role}` assigned twice in fact `{fact_id}`"),
                });
            }
        }
        Ok(Fact {
            rel_type,
            fact_id,
            assignment,
        })
    }

    pub fn from_names(rel: &str, fact_id: &str, pairs: &[(&str, &[&str])]) -> Result<Self> {
        Fact::new(
            RelTypeId::new(rel),
            EntityId::new(fact_id),
            pairs.iter().map(|(r, es)| {
                (
                    RoleId::new(r),
                    es.iter().map(EntityId::new).collect::<BTreeSet<_>>(),
                )
            }),
        )
    }

    pub fn rel_type(&self) -> &RelTypeId {
        &self.rel_type
    }

    pub fn fact_id(&self) -> &EntityId {
        &self.fact_id
    }

    pub fn assignment(&self) -> &BTreeMap<RoleId, BTreeSet<EntityId>> {
        &self.assignment
    }

    pub fn roles(&self) -> impl Iterator<Item = &RoleId> {
        self.assignment.keys()
    }

    pub fn entities(&self) -> impl Iterator<Item = &EntityId> {
        self.assignment.values().flatten()
    }

    /// Every role's set is a singleton, so the fact is also an instance.
    pub fn is_degenerate(&self) -> bool {
        self.assignment.values().all(|s| s.len() == 1)
    }

    /// Number of instances the fact expands to: the product of set sizes.
    pub fn expansion_size(&self) -> usize {
        self.assignment.values().map(BTreeSet::len).product()
    }
}

/// Provenance of a relation type produced by star-to-clique conversion.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Origin {
    /// Relation type the triples were cut from.
    pub parent: RelTypeId,
    /// Fold of the original (pre-conversion) relation.
    pub fold: usize,
}

/// Which rule a [`Violation`] breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    EmptySchema,
    DuplicateRole,
    IllegalRoleName,
    MisfiledRelation,
    UnregisteredRelation,
    SchemaMismatch,
    UnknownEntity,
    EmptyRoleSet,
    DuplicateFactId,
    FactIdCollision,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Violation {
    pub rule: Rule,
    pub subject: String,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}: {}", self.rule, self.subject, self.detail)
    }
}

/// Counts reported by `stats`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Stats {
    pub entity_count: usize,
    pub rel_type_count: usize,
    pub instance_count: usize,
    /// J -> number of instances (or facts) of J-fold relations.
    pub fold_histogram: BTreeMap<usize, usize>,
}

impl Add for Stats {
    type Output = Stats;

    fn add(mut self, rhs: Stats) -> Stats {
        self.entity_count += rhs.entity_count;
        self.rel_type_count += rhs.rel_type_count;
        self.instance_count += rhs.instance_count;
        for (fold, n) in rhs.fold_histogram {
            *self.fold_histogram.entry(fold).or_default() += n;
        }
        self
    }
}

impl fmt::Display for Stats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "entities\t{}", self.entity_count)?;
        writeln!(f, "relation_types\t{}", self.rel_type_count)?;
        writeln!(f, "instances\t{}", self.instance_count)?;
        for (fold, n) in &self.fold_histogram {
            writeln!(f, "fold_{fold}\t{n}")?;
        }
        Ok(())
    }
}

fn schema_violations(schemas: &BTreeMap<RelTypeId, RelationSchema>, out: &mut Vec<Violation>) {
    for (rel, schema) in schemas {
        if schema.rel_type() != rel {
            out.push(Violation {
                rule: Rule::MisfiledRelation,
                subject: rel.to_string(),
                detail: format!("schema registered for `{}`", schema.rel_type()),
            });
        }
        if schema.roles().is_empty() {
            out.push(Violation {
                rule: Rule::EmptySchema,
                subject: rel.to_string(),
                detail: "no roles".into(),
            });
        }
        if schema.roles().windows(2).any(|w| w[0] == w[1]) {
            out.push(Violation {
                rule: Rule::DuplicateRole,
                subject: rel.to_string(),
                detail: "duplicate role".into(),
            });
        }
        for role in schema.roles() {
            if !role_name_is_legal(role.name()) {
                out.push(Violation {
                    rule: Rule::IllegalRoleName,
                    subject: rel.to_string(),
                    detail: format!("role `{role}`"),
                });
            }
        }
    }
}

/// A KB as entities, relation schemas and per-type instance sets.
///
/// Fields are public so that arbitrary (possibly malformed) representations
/// can be assembled and then checked with [`InstanceRepresentation::validate`];
/// [`InstanceRepresentation::insert`] is the checked way to grow one.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InstanceRepresentation {
    pub entities: BTreeSet<EntityId>,
    pub schemas: BTreeMap<RelTypeId, RelationSchema>,
    pub instances: BTreeMap<RelTypeId, BTreeSet<Instance>>,
    /// Present on relation types produced by star-to-clique conversion.
    pub origins: BTreeMap<RelTypeId, Origin>,
}

impl InstanceRepresentation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_schema(&mut self, schema: RelationSchema) -> Result<()> {
        match self.schemas.get(schema.rel_type()) {
            Some(existing) if existing != &schema => Err(Error::SchemaMismatch {
                rel: schema.rel_type().to_string(),
                reason: format!(
                    "roles {:?} conflict with registered {:?}",
                    schema.roles(),
                    existing.roles()
                ),
            }),
            Some(_) => Ok(()),
            None => {
                self.schemas.insert(schema.rel_type().clone(), schema);
                Ok(())
            }
        }
    }

    /// Adds an instance, registering its schema on first sight. Returns
    /// `false` when the instance was already present.
    pub fn insert(&mut self, instance: Instance) -> Result<bool> {
        let rel = instance.rel_type().clone();
        match self.schemas.get(&rel) {
            Some(schema) => {
                if let Err(reason) = instance.matches(schema) {
                    return Err(Error::SchemaMismatch {
                        rel: rel.to_string(),
                        reason,
                    });
                }
            }
            None => {
                let schema = RelationSchema::new(rel.clone(), instance.roles().cloned())?;
                self.schemas.insert(rel.clone(), schema);
            }
        }
        self.entities.extend(instance.entities().cloned());
        Ok(self.instances.entry(rel).or_default().insert(instance))
    }

    pub fn from_instances(instances: impl IntoIterator<Item = Instance>) -> Result<Self> {
        let mut rep = InstanceRepresentation::new();
        for instance in instances {
            rep.insert(instance)?;
        }
        Ok(rep)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Instance> {
        self.instances.values().flatten()
    }

    pub fn instance_count(&self) -> usize {
        self.instances.values().map(BTreeSet::len).sum()
    }

    pub fn contains(&self, instance: &Instance) -> bool {
        self.instances
            .get(instance.rel_type())
            .is_some_and(|set| set.contains(instance))
    }

    pub fn schema(&self, rel: &RelTypeId) -> Option<&RelationSchema> {
        self.schemas.get(rel)
    }

    /// Fold of the original relation: the recorded origin if the type came
    /// from star-to-clique conversion, otherwise the schema's own fold.
    pub fn original_fold(&self, rel: &RelTypeId) -> Option<usize> {
        match self.origins.get(rel) {
            Some(origin) => Some(origin.fold),
            None => self.schemas.get(rel).map(RelationSchema::fold),
        }
    }

    /// Entities that occur under the FACT-ID role.
    pub fn fact_id_entities(&self) -> BTreeSet<EntityId> {
        self.iter().filter_map(|t| t.fact_id().cloned()).collect()
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        schema_violations(&self.schemas, &mut out);
        for (rel, set) in &self.instances {
            let schema = self.schemas.get(rel);
            for instance in set {
                let subject = instance.to_string();
                if instance.rel_type() != rel {
                    out.push(Violation {
                        rule: Rule::MisfiledRelation,
                        subject: subject.clone(),
                        detail: format!("stored under `{rel}`"),
                    });
                }
                match schema {
                    None => out.push(Violation {
                        rule: Rule::UnregisteredRelation,
                        subject: subject.clone(),
                        detail: format!("no schema for `{rel}`"),
                    }),
                    Some(schema) => {
                        if let Err(detail) = instance.matches(schema) {
                            out.push(Violation {
                                rule: Rule::SchemaMismatch,
                                subject: subject.clone(),
                                detail,
                            });
                        }
                    }
                }
                for entity in instance.entities() {
                    if !self.entities.contains(entity) {
                        out.push(Violation {
                            rule: Rule::UnknownEntity,
                            subject: subject.clone(),
                            detail: format!("entity `{entity}`"),
                        });
                    }
                }
            }
        }
        out
    }

    pub fn stats(&self) -> Stats {
        let mut fold_histogram = BTreeMap::new();
        for (rel, set) in &self.instances {
            if set.is_empty() {
                continue;
            }
            let fold = self
                .schemas
                .get(rel)
                .map(RelationSchema::fold)
                .unwrap_or_else(|| set.iter().next().map_or(0, Instance::fold));
            *fold_histogram.entry(fold).or_default() += set.len();
        }
        Stats {
            entity_count: self.entities.len(),
            rel_type_count: self.schemas.len(),
            instance_count: self.instance_count(),
            fold_histogram,
        }
    }

    /// Keeps only the instances accepted by `keep`; entities are recomputed
    /// from what survives, schemas and origins are kept for surviving types.
    pub fn retain_instances(&self, mut keep: impl FnMut(&Instance) -> bool) -> Self {
        let mut out = InstanceRepresentation::new();
        for (rel, set) in &self.instances {
            let kept: BTreeSet<Instance> = set.iter().filter(|t| keep(t)).cloned().collect();
            if kept.is_empty() {
                continue;
            }
            for t in &kept {
                out.entities.extend(t.entities().cloned());
            }
            if let Some(schema) = self.schemas.get(rel) {
                out.schemas.insert(rel.clone(), schema.clone());
            }
            if let Some(origin) = self.origins.get(rel) {
                out.origins.insert(rel.clone(), origin.clone());
            }
            out.instances.insert(rel.clone(), kept);
        }
        out
    }
}

/// A KB of facts over meta-relations.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FactRepresentation {
    pub entities: BTreeSet<EntityId>,
    pub schemas: BTreeMap<RelTypeId, RelationSchema>,
    pub facts: BTreeMap<RelTypeId, BTreeSet<Fact>>,
}

impl FactRepresentation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_schema(&mut self, schema: RelationSchema) -> Result<()> {
        match self.schemas.get(schema.rel_type()) {
            Some(existing) if existing != &schema => Err(Error::SchemaMismatch {
                rel: schema.rel_type().to_string(),
                reason: "conflicting role set".into(),
            }),
            Some(_) => Ok(()),
            None => {
                self.schemas.insert(schema.rel_type().clone(), schema);
                Ok(())
            }
        }
    }

    /// Adds a fact, registering its schema on first sight. Fact-ID uniqueness
    /// across relation types is not checked here (see [`Self::from_facts`]
    /// and [`Self::validate`]).
    pub fn insert(&mut self, fact: Fact) -> Result<bool> {
        let rel = fact.rel_type().clone();
        match self.schemas.get(&rel) {
            Some(schema) => {
                let roles: Vec<&RoleId> = fact.roles().collect();
                let expected: Vec<&RoleId> = schema.roles().iter().collect();
                if roles != expected {
                    return Err(Error::SchemaMismatch {
                        rel: rel.to_string(),
                        reason: format!("fact `{}` roles differ from schema", fact.fact_id()),
                    });
                }
            }
            None => {
                let schema = RelationSchema::new(rel.clone(), fact.roles().cloned())?;
                self.schemas.insert(rel.clone(), schema);
            }
        }
        self.entities.extend(fact.entities().cloned());
        Ok(self.facts.entry(rel).or_default().insert(fact))
    }

    /// Builds a representation, rejecting two different facts with one ID.
    pub fn from_facts(facts: impl IntoIterator<Item = Fact>) -> Result<Self> {
        let mut rep = FactRepresentation::new();
        let mut seen: HashMap<EntityId, Fact> = HashMap::new();
        for fact in facts {
            if let Some(existing) = seen.get(fact.fact_id()) {
                if existing == &fact {
                    continue;
                }
                return Err(Error::Data(format!("duplicate fact id `{}`", fact.fact_id())));
            }
            seen.insert(fact.fact_id().clone(), fact.clone());
            rep.insert(fact)?;
        }
        Ok(rep)
    }

    pub fn find(&self, fact_id: &EntityId) -> Option<&Fact> {
        self.iter().find(|f| f.fact_id() == fact_id)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Fact> {
        self.facts.values().flatten()
    }

    pub fn fact_count(&self) -> usize {
        self.facts.values().map(BTreeSet::len).sum()
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        schema_violations(&self.schemas, &mut out);
        let mut seen_ids: BTreeMap<&EntityId, &RelTypeId> = BTreeMap::new();
        for (rel, set) in &self.facts {
            let schema = self.schemas.get(rel);
            for fact in set {
                let subject = format!("fact `{}`", fact.fact_id());
                if fact.rel_type() != rel {
                    out.push(Violation {
                        rule: Rule::MisfiledRelation,
                        subject: subject.clone(),
                        detail: format!("stored under `{rel}`"),
                    });
                }
                match schema {
                    None => out.push(Violation {
                        rule: Rule::UnregisteredRelation,
                        subject: subject.clone(),
                        detail: format!("no schema for `{rel}`"),
                    }),
                    Some(schema) => {
                        let roles: Vec<&RoleId> = fact.roles().collect();
                        let expected: Vec<&RoleId> = schema.roles().iter().collect();
                        if roles != expected {
                            out.push(Violation {
                                rule: Rule::SchemaMismatch,
                                subject: subject.clone(),
                                detail: "roles differ from schema".into(),
                            });
                        }
                    }
                }
                for (role, entities) in fact.assignment() {
                    if entities.is_empty() {
                        out.push(Violation {
                            rule: Rule::EmptyRoleSet,
                            subject: subject.clone(),
                            detail: format!("role `{role}`"),
                        });
                    }
                    for entity in entities {
                        if !self.entities.contains(entity) {
                            out.push(Violation {
                                rule: Rule::UnknownEntity,
                                subject: subject.clone(),
                                detail: format!("entity `{entity}`"),
                            });
                        }
                    }
                }
                if seen_ids.insert(fact.fact_id(), rel).is_some() {
                    out.push(Violation {
                        rule: Rule::DuplicateFactId,
                        subject: subject.clone(),
                        detail: "fact id used more than once".into(),
                    });
                }
                if self.entities.contains(fact.fact_id()) {
                    out.push(Violation {
                        rule: Rule::FactIdCollision,
                        subject,
                        detail: "fact id is also an entity".into(),
                    });
                }
            }
        }
        out
    }

    /// Same counts as for instances, with facts in place of instances.
    pub fn stats(&self) -> Stats {
        let mut fold_histogram = BTreeMap::new();
        for (rel, set) in &self.facts {
            if set.is_empty() {
                continue;
            }
            let fold = self.schemas.get(rel).map_or(0, RelationSchema::fold);
            *fold_histogram.entry(fold).or_default() += set.len();
        }
        Stats {
            entity_count: self.entities.len(),
            rel_type_count: self.schemas.len(),
            instance_count: self.fact_count(),
            fold_histogram,
        }
    }
}

/// The two-instance example of a sports award and a team roster sharing one
/// player.
pub fn toy_instance_rep() -> InstanceRepresentation {
    let award = Instance::from_names(
        "SportAward",
        &[
            ("SEASON", "Season 10-11"),
            ("AWARD", "All-Star MVP"),
            ("WINNER", "Kobe Bryant"),
        ],
    )
    .expect("well-formed");
    let roster = Instance::from_names(
        "TeamRoster",
        &[
            ("PLAYER", "Kobe Bryant"),
            ("POSITION", "Point Guard"),
            ("TEAM", "Lakers"),
        ],
    )
    .expect("well-formed");
    InstanceRepresentation::from_instances([award, roster]).expect("well-formed")
}
