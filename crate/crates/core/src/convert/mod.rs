//! Conversions between fact and instance representations.
//!
//! `T_id` expands a fact into the cartesian product of its role sets and tags
//! every resulting instance with the fact's ID under the FACT-ID role; `T` does
//! the same and then drops the tag. Only the tagged form can be inverted.

mod s2c;

pub use s2c::{
    pair_label, s2c_collision_witness, s2c_representation, triple_type, LabelledEdge,
    LabelledGraph,
};

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::kb::{
    fact_id_role, is_fact_id_role, Fact, FactRepresentation, Instance, InstanceRepresentation,
};
use crate::symbol::{EntityId, RelTypeId, RoleId};

/// How fact IDs are treated when converting facts to instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IdMode {
    /// `T`: drop fact IDs.
    Drop,
    /// `T_id`: every fact's instances carry FACT-ID; exactly invertible.
    Keep,
    /// `T_id` with degenerate meta-relations (all facts singleton) converted
    /// by `T` instead. Used when building benchmark datasets.
    KeepCollapsingDegenerate,
}

/// Cartesian expansion of a fact, optionally tagged with its ID.
fn expand(fact: &Fact, tag_id: bool) -> BTreeSet<Instance> {
    let roles: Vec<(&RoleId, Vec<&EntityId>)> = fact
        .assignment()
        .iter()
        .map(|(r, set)| (r, set.iter().collect()))
        .collect();
    let mut out = BTreeSet::new();
    if roles.iter().any(|(_, set)| set.is_empty()) {
        return out;
    }
    // mixed-radix counter over role-set indices
    let mut cursor = vec![0usize; roles.len()];
    loop {
        let mut assignment: BTreeMap<RoleId, EntityId> = roles
            .iter()
            .zip(&cursor)
            .map(|((r, set), &i)| ((*r).clone(), set[i].clone()))
            .collect();
        if tag_id {
            assignment.insert(fact_id_role(), fact.fact_id().clone());
        }
        out.insert(Instance::from_parts(fact.rel_type().clone(), assignment));

        let mut k = 0;
        loop {
            if k == roles.len() {
                return out;
            }
            cursor[k] += 1;
            if cursor[k] < roles[k].1.len() {
                break;
            }
            cursor[k] = 0;
            k += 1;
        }
    }
}

/// `T_id(u)`. A degenerate fact is a single instance and keeps no ID.
pub fn fact_to_instances_id(fact: &Fact) -> BTreeSet<Instance> {
    expand(fact, !fact.is_degenerate())
}

/// `T(u)`: the expansion without the fact ID.
pub fn fact_to_instances(fact: &Fact) -> BTreeSet<Instance> {
    expand(fact, false)
}

/// Converts a whole fact representation.
///
/// With IDs kept, the fact IDs join the entity set and each affected schema
/// gains the FACT-ID role.
pub fn convert_fact_rep(facts: &FactRepresentation, mode: IdMode) -> InstanceRepresentation {
    let mut out = InstanceRepresentation::new();
    out.entities = facts.entities.clone();
    for (rel, schema) in &facts.schemas {
        let set = facts.facts.get(rel);
        let tag = match mode {
            IdMode::Drop => false,
            IdMode::Keep => true,
            IdMode::KeepCollapsingDegenerate => {
                set.is_some_and(|s| s.iter().any(|f| !f.is_degenerate()))
            }
        };
        let schema = if tag {
            schema.with_fact_id()
        } else {
            schema.clone()
        };
        out.schemas.insert(rel.clone(), schema);
        let mut instances = BTreeSet::new();
        for fact in set.into_iter().flatten() {
            if tag {
                out.entities.insert(fact.fact_id().clone());
            }
            instances.extend(expand(fact, tag));
        }
        if !instances.is_empty() {
            out.instances.insert(rel.clone(), instances);
        }
    }
    out
}

/// Rebuilds facts from an ID-tagged instance representation.
///
/// Instances are grouped by their FACT-ID value and each role's entity set is
/// the union over the group. Incomplete groups yield the corresponding
/// sub-fact. Instances without FACT-ID become one fact each, under a
/// synthesized ID of the form `<rel>#<n>`.
pub fn recover_facts(tagged: &InstanceRepresentation) -> Result<FactRepresentation> {
    let mut groups: BTreeMap<EntityId, (RelTypeId, BTreeMap<RoleId, BTreeSet<EntityId>>)> =
        BTreeMap::new();
    let mut untagged: Vec<&Instance> = Vec::new();

    for instance in tagged.iter() {
        let Some(id) = instance.fact_id() else {
            untagged.push(instance);
            continue;
        };
        let (rel, roles) = groups
            .entry(id.clone())
            .or_insert_with(|| (instance.rel_type().clone(), BTreeMap::new()));
        if rel != instance.rel_type() {
            let (first, second) = if *rel <= *instance.rel_type() {
                (rel.to_string(), instance.rel_type().to_string())
            } else {
                (instance.rel_type().to_string(), rel.to_string())
            };
            return Err(Error::InconsistentFactGroup {
                fact_id: id.to_string(),
                first,
                second,
            });
        }
        for (role, entity) in instance.assignment() {
            if !is_fact_id_role(role) {
                roles.entry(role.clone()).or_default().insert(entity.clone());
            }
        }
    }

    let fact_ids: BTreeSet<EntityId> = groups.keys().cloned().collect();
    let mut out = FactRepresentation::new();
    out.entities = tagged
        .entities
        .iter()
        .filter(|e| !fact_ids.contains(*e))
        .cloned()
        .collect();
    for (rel, schema) in &tagged.schemas {
        out.schemas.insert(rel.clone(), schema.without_fact_id());
    }

    for (id, (rel, roles)) in groups {
        let fact = Fact::new(rel.clone(), id, roles)?;
        out.facts.entry(rel).or_default().insert(fact);
    }

    let mut counters: BTreeMap<&RelTypeId, usize> = BTreeMap::new();
    for instance in untagged {
        let rel = instance.rel_type();
        let counter = counters.entry(rel).or_default();
        let id = loop {
            let candidate = EntityId::new(format!("{rel}#{counter}"));
            *counter += 1;
            if !tagged.entities.contains(&candidate) && !fact_ids.contains(&candidate) {
                break candidate;
            }
        };
        let fact = Fact::new(
            rel.clone(),
            id,
            instance
                .assignment()
                .iter()
                .map(|(r, e)| (r.clone(), BTreeSet::from([e.clone()]))),
        )?;
        out.facts.entry(rel.clone()).or_default().insert(fact);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table_one() -> (Fact, Fact) {
        let u1 = Fact::from_names(
            "InstrumentContribution",
            "u1",
            &[
                ("CONTRIBUTOR", &["WillMcGregor"]),
                ("RECORDING", &["PreciousThings"]),
                ("INSTRUMENT-ROLE", &["BassGuitar", "Bass"]),
            ],
        )
        .unwrap();
        let u2 = Fact::from_names(
            "InstrumentContribution",
            "u2",
            &[
                ("CONTRIBUTOR", &["MichaelHarrison"]),
                ("RECORDING", &["PrettyGoodYear"]),
                ("INSTRUMENT-ROLE", &["Violin"]),
            ],
        )
        .unwrap();
        (u1, u2)
    }

    fn t(pairs: &[(&str, &str)]) -> Instance {
        Instance::from_names("InstrumentContribution", pairs).unwrap()
    }

    #[test]
    fn t_id_of_u1_matches_table() {
        let (u1, _) = table_one();
        let got = fact_to_instances_id(&u1);
        let expected = BTreeSet::from([
            t(&[
                ("CONTRIBUTOR", "WillMcGregor"),
                ("RECORDING", "PreciousThings"),
                ("INSTRUMENT-ROLE", "BassGuitar"),
                ("FACT-ID", "u1"),
            ]),
            t(&[
                ("CONTRIBUTOR", "WillMcGregor"),
                ("RECORDING", "PreciousThings"),
                ("INSTRUMENT-ROLE", "Bass"),
                ("FACT-ID", "u1"),
            ]),
        ]);
        assert_eq!(got, expected);
    }

    #[test]
    fn t_of_u1_drops_ids() {
        let (u1, _) = table_one();
        let got = fact_to_instances(&u1);
        let expected: BTreeSet<Instance> = fact_to_instances_id(&u1)
            .iter()
            .map(Instance::without_fact_id)
            .collect();
        assert_eq!(got, expected);
        assert_eq!(got.len(), 2);
    }

    #[test]
    fn degenerate_fact_has_no_id_role() {
        let (_, u2) = table_one();
        let with_id = fact_to_instances_id(&u2);
        assert_eq!(with_id.len(), 1);
        assert!(with_id.iter().all(|t| t.fact_id().is_none()));
        assert_eq!(with_id, fact_to_instances(&u2));
    }

    #[test]
    fn expansion_is_cartesian_product() {
        let fact = Fact::from_names(
            "R",
            "f",
            &[("A", &["a1", "a2"]), ("B", &["b1", "b2", "b3"])],
        )
        .unwrap();
        let got = fact_to_instances_id(&fact);
        // brute force enumeration
        let mut expected = BTreeSet::new();
        for a in ["a1", "a2"] {
            for b in ["b1", "b2", "b3"] {
                expected.insert(
                    Instance::from_names("R", &[("A", a), ("B", b), ("FACT-ID", "f")]).unwrap(),
                );
            }
        }
        assert_eq!(got, expected);
        assert_eq!(got.len(), 6);
    }

    #[test]
    fn marriage_fact_expands_over_spouses() {
        let fact = Fact::from_names(
            "PeopleMarriage",
            "m1",
            &[
                ("SPOUSE", &["Kobe Bryant", "Venessa Bryant"]),
                ("LOCATION", &["Dana Point"]),
            ],
        )
        .unwrap();
        let got = fact_to_instances(&fact);
        let expected = BTreeSet::from([
            Instance::from_names(
                "PeopleMarriage",
                &[("SPOUSE", "Kobe Bryant"), ("LOCATION", "Dana Point")],
            )
            .unwrap(),
            Instance::from_names(
                "PeopleMarriage",
                &[("SPOUSE", "Venessa Bryant"), ("LOCATION", "Dana Point")],
            )
            .unwrap(),
        ]);
        assert_eq!(got, expected);
    }

    #[test]
    fn convert_single_fact_with_and_without_ids() {
        let (u1, _) = table_one();
        let facts = FactRepresentation::from_facts([u1]).unwrap();

        let tagged = convert_fact_rep(&facts, IdMode::Keep);
        assert_eq!(tagged.instance_count(), 2);
        assert!(tagged.entities.contains(&EntityId::new("u1")));
        assert!(tagged.validate().is_empty());

        let plain = convert_fact_rep(&facts, IdMode::Drop);
        assert_eq!(plain.instance_count(), 2);
        assert!(!plain.entities.contains(&EntityId::new("u1")));
        assert_eq!(plain.entities, facts.entities);
        assert!(plain.validate().is_empty());
    }

    #[test]
    fn convert_empty() {
        let empty = FactRepresentation::new();
        for mode in [IdMode::Drop, IdMode::Keep, IdMode::KeepCollapsingDegenerate] {
            assert_eq!(convert_fact_rep(&empty, mode), InstanceRepresentation::new());
        }
    }

    #[test]
    fn recover_table_one() {
        let (u1, u2) = table_one();
        let facts = FactRepresentation::from_facts([u1, u2]).unwrap();
        let tagged = convert_fact_rep(&facts, IdMode::Keep);
        assert_eq!(recover_facts(&tagged).unwrap(), facts);
    }

    #[test]
    fn collapsing_mode_keeps_ids_only_where_needed() {
        let (u1, u2) = table_one();
        let degenerate_only = Fact::from_names("PlaceOfBirth", "p1", &[("PERSON", &["Kobe"]), ("PLACE", &["Philadelphia"])]).unwrap();
        let facts = FactRepresentation::from_facts([u1, u2, degenerate_only]).unwrap();
        let tagged = convert_fact_rep(&facts, IdMode::KeepCollapsingDegenerate);
        assert!(tagged.schemas[&RelTypeId::new("InstrumentContribution")].has_fact_id());
        assert!(!tagged.schemas[&RelTypeId::new("PlaceOfBirth")].has_fact_id());
        assert!(!tagged.entities.contains(&EntityId::new("p1")));
        assert!(tagged.validate().is_empty());
    }

    #[test]
    fn recover_untagged_gives_one_fact_per_instance() {
        let rep = crate::kb::toy_instance_rep();
        let facts = recover_facts(&rep).unwrap();
        assert_eq!(facts.fact_count(), 2);
        assert!(facts.iter().all(Fact::is_degenerate));
        assert!(facts.validate().is_empty());
    }

    #[test]
    fn recover_rejects_id_shared_across_types() {
        let rep = InstanceRepresentation::from_instances([
            Instance::from_names("R", &[("a", "x"), ("FACT-ID", "f")]).unwrap(),
            Instance::from_names("S", &[("a", "y"), ("FACT-ID", "f")]).unwrap(),
        ])
        .unwrap();
        match recover_facts(&rep) {
            Err(Error::InconsistentFactGroup { fact_id, .. }) => assert_eq!(fact_id, "f"),
            other => panic!("expected group error, got {other:?}"),
        }
    }

    #[test]
    fn partial_group_recovers_sub_fact() {
        let (u1, _) = table_one();
        let mut instances = fact_to_instances_id(&u1).into_iter();
        let first = instances.next().unwrap();
        let rep = InstanceRepresentation::from_instances([first.clone()]).unwrap();
        let facts = recover_facts(&rep).unwrap();
        let fact = facts.find(&EntityId::new("u1")).unwrap();
        assert_eq!(fact.expansion_size(), 1);
    }
}
