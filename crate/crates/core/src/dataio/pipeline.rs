//! Dataset construction: fact filtering and sampling, degree filtering to a
//! fixpoint, and the ID-coverage-preserving train/test split.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::convert::{convert_fact_rep, s2c_representation, IdMode};
use crate::error::{Error, Result};
use crate::kb::{FactRepresentation, Instance, InstanceRepresentation};
use crate::symbol::EntityId;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FilterOptions {
    pub min_entity_instances: usize,
    pub max_facts_per_type: usize,
    pub drop_single_role: bool,
    pub seed: u64,
}

impl Default for FilterOptions {
    fn default() -> Self {
        FilterOptions {
            min_entity_instances: 5,
            max_facts_per_type: 10_000,
            drop_single_role: true,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterOutput {
    /// Instances without fact ids.
    pub g: InstanceRepresentation,
    /// The same instances tagged with fact ids (degenerate-only meta-relations
    /// stay untagged).
    pub g_id: InstanceRepresentation,
    pub dropped_single_role_facts: usize,
    pub dropped_by_cap: usize,
    pub degree_rounds: usize,
}

/// Number of instances each entity takes part in.
pub fn entity_degrees(rep: &InstanceRepresentation) -> HashMap<&EntityId, usize> {
    let mut degree = HashMap::new();
    for instance in rep.iter() {
        let distinct: BTreeSet<&EntityId> = instance.entities().collect();
        for e in distinct {
            *degree.entry(e).or_insert(0) += 1;
        }
    }
    degree
}

/// Repeatedly drops instances touching an entity of degree below `min`
/// until none is left. Returns the filtered representation and the number
/// of removal rounds.
pub fn degree_filter(rep: &InstanceRepresentation, min: usize) -> (InstanceRepresentation, usize) {
    let mut current = rep.retain_instances(|_| true);
    let mut rounds = 0;
    loop {
        let low: BTreeSet<EntityId> = entity_degrees(&current)
            .into_iter()
            .filter(|&(_, d)| d < min)
            .map(|(e, _)| e.clone())
            .collect();
        if low.is_empty() {
            return (current, rounds);
        }
        rounds += 1;
        current = current.retain_instances(|i| i.entities().all(|e| !low.contains(e)));
    }
}

/// Builds the instance datasets from a fact KB: drops single-role
/// meta-relations, caps each meta-relation by seeded sampling, converts,
/// then applies the degree filter and restricts the ID-tagged conversion to
/// the surviving instances.
pub fn filter_pipeline(facts: &FactRepresentation, options: &FilterOptions) -> FilterOutput {
    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut kept = FactRepresentation::new();
    let mut dropped_single_role_facts = 0;
    let mut dropped_by_cap = 0;
    for (rel, set) in &facts.facts {
        let schema = &facts.schemas[rel];
        if options.drop_single_role && schema.arity() == 1 {
            dropped_single_role_facts += set.len();
            continue;
        }
        let mut chosen: Vec<_> = set.iter().collect();
        if chosen.len() > options.max_facts_per_type {
            chosen.shuffle(&mut rng);
            dropped_by_cap += chosen.len() - options.max_facts_per_type;
            chosen.truncate(options.max_facts_per_type);
        }
        kept.add_schema(schema.clone()).expect("schema from a valid representation");
        for fact in chosen {
            kept.insert(fact.clone()).expect("fact from a valid representation");
        }
    }
    let (g, degree_rounds) = degree_filter(&convert_fact_rep(&kept, IdMode::Drop), options.min_entity_instances);
    let g_id = convert_fact_rep(&kept, IdMode::KeepCollapsingDegenerate)
        .retain_instances(|i| g.contains(&i.without_fact_id()));
    FilterOutput {
        g,
        g_id,
        dropped_single_role_facts,
        dropped_by_cap,
        degree_rounds,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variant {
    /// Plain instances.
    G,
    /// Instances tagged with fact ids.
    GId,
    /// Star-to-clique triples.
    GS2c,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub fact_id: Option<EntityId>,
    pub fold: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetBundle {
    pub variant: Variant,
    pub train: InstanceRepresentation,
    pub test: InstanceRepresentation,
    /// Source fact and original fold of every item on either side.
    pub provenance: BTreeMap<Instance, Provenance>,
}

impl DatasetBundle {
    fn new(variant: Variant, train: InstanceRepresentation, test: InstanceRepresentation) -> Self {
        let mut provenance = BTreeMap::new();
        for side in [&train, &test] {
            for item in side.iter() {
                let fold = side.original_fold(item.rel_type()).unwrap_or_else(|| item.fold());
                let prov = Provenance {
                    fact_id: item.fact_id().cloned(),
                    fold,
                };
                provenance.insert(item.clone(), prov);
            }
        }
        DatasetBundle {
            variant,
            train,
            test,
            provenance,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitOutput {
    pub g_id: DatasetBundle,
    pub g: DatasetBundle,
    pub g_s2c: DatasetBundle,
    pub requested_fraction: f64,
    /// Test share of the ID-tagged instances after coverage moves.
    pub realized_fraction: f64,
    /// Instances moved from test to train to keep fact ids covered.
    pub moved_to_train: usize,
}

/// Random instance-level split of an ID-tagged representation.
///
/// Every fact id in the test side also appears in train: when all drawn
/// instances of a fact land in test, the first of them (in draw order)
/// moves to train. The same split then induces the plain and star-to-clique
/// variants; a plain instance produced on both sides stays in train only.
pub fn split(g_id: &InstanceRepresentation, test_fraction: f64, seed: u64) -> Result<SplitOutput> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::Config(format!("test fraction must lie in (0, 1), got {test_fraction}")));
    }
    let items: Vec<&Instance> = g_id.iter().collect();
    let mut order: Vec<usize> = (0..items.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    let n_test = (test_fraction * items.len() as f64).round() as usize;
    let mut in_test = vec![false; items.len()];
    for &k in &order[..n_test] {
        in_test[k] = true;
    }

    let mut train_ids: BTreeSet<&EntityId> = BTreeSet::new();
    for (k, item) in items.iter().enumerate() {
        if !in_test[k] {
            train_ids.extend(item.fact_id());
        }
    }
    let mut moved_to_train = 0;
    for &k in &order[..n_test] {
        if let Some(id) = items[k].fact_id() {
            if train_ids.insert(id) {
                in_test[k] = false;
                moved_to_train += 1;
            }
        }
    }

    let test_items: BTreeSet<&Instance> = (0..items.len()).filter(|&k| in_test[k]).map(|k| items[k]).collect();
    let train_id = g_id.retain_instances(|i| !test_items.contains(i));
    if train_id.instance_count() == 0 {
        return Err(Error::Data("split leaves the training set empty".into()));
    }
    let test_id = g_id.retain_instances(|i| !train_id.contains(i));
    let realized_fraction = if items.is_empty() {
        0.0
    } else {
        test_id.instance_count() as f64 / items.len() as f64
    };

    let train_g = strip_ids(&train_id);
    let test_g = strip_ids(&test_id).retain_instances(|i| !train_g.contains(i));
    let train_s2c = s2c_representation(&train_g);
    let test_s2c = s2c_representation(&test_g);

    Ok(SplitOutput {
        g_id: DatasetBundle::new(Variant::GId, train_id, test_id),
        g: DatasetBundle::new(Variant::G, train_g, test_g),
        g_s2c: DatasetBundle::new(Variant::GS2c, train_s2c, test_s2c),
        requested_fraction: test_fraction,
        realized_fraction,
        moved_to_train,
    })
}

/// Drops the FACT-ID role everywhere.
pub fn strip_ids(rep: &InstanceRepresentation) -> InstanceRepresentation {
    let mut out = InstanceRepresentation::new();
    for schema in rep.schemas.values() {
        out.add_schema(schema.without_fact_id()).expect("stripped schemas are distinct");
    }
    for item in rep.iter() {
        out.insert(item.without_fact_id()).expect("schema registered above");
    }
    out.entities = rep.entities.difference(&rep.fact_id_entities()).cloned().collect();
    out.origins = rep.origins.clone();
    out
}

/// Keeps the items of `test` whose entities all occur in `known`.
pub fn restrict_to_entities(test: &InstanceRepresentation, known: &BTreeSet<EntityId>) -> InstanceRepresentation {
    test.retain_instances(|i| i.entities().all(|e| known.contains(e)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kb::Fact;

    fn facts(list: &[(&str, &str, &[(&str, &[&str])])]) -> FactRepresentation {
        FactRepresentation::from_facts(list.iter().map(|(r, id, pairs)| Fact::from_names(r, id, pairs).unwrap()))
            .unwrap()
    }

    /// Complete binary KB over `n` entities: every entity has degree n-1.
    fn dense(n: usize) -> FactRepresentation {
        let mut list = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                list.push(
                    Fact::from_names("R", &format!("f{i}_{j}"), &[("a", &[&format!("e{i}")]), ("b", &[&format!("e{j}")])])
                        .unwrap(),
                );
            }
        }
        FactRepresentation::from_facts(list).unwrap()
    }

    #[test]
    fn high_degree_only_caps() {
        let f = dense(8);
        let out = filter_pipeline(&f, &FilterOptions::default());
        assert_eq!(out.degree_rounds, 0);
        assert_eq!(out.g.instance_count(), 28);
        assert_eq!(out.g_id.instance_count(), 28);
        let capped = filter_pipeline(
            &f,
            &FilterOptions {
                max_facts_per_type: 20,
                min_entity_instances: 0,
                ..Default::default()
            },
        );
        assert_eq!(capped.dropped_by_cap, 8);
        assert_eq!(capped.g.instance_count(), 20);
    }

    #[test]
    fn low_degree_entity_removed() {
        let mut f = dense(8);
        for k in 0..4 {
            f.insert(Fact::from_names("S", &format!("x{k}"), &[("a", &["lonely"]), ("b", &[&format!("e{k}")])]).unwrap())
                .unwrap();
        }
        let out = filter_pipeline(&f, &FilterOptions::default());
        assert!(!out.g.entities.contains(&EntityId::new("lonely")));
        assert_eq!(out.g.instance_count(), 28);
        assert!(entity_degrees(&out.g).values().all(|&d| d >= 5));
    }

    #[test]
    fn single_role_dropped() {
        let f = facts(&[("Solo", "s1", &[("a", &["x"])]), ("Pair", "p1", &[("a", &["x"]), ("b", &["y"])])]);
        let out = filter_pipeline(
            &f,
            &FilterOptions {
                min_entity_instances: 1,
                ..Default::default()
            },
        );
        assert_eq!(out.dropped_single_role_facts, 1);
        assert_eq!(out.g.instance_count(), 1);
    }

    #[test]
    fn filter_is_idempotent() {
        let mut f = dense(7);
        f.insert(Fact::from_names("R", "tail", &[("a", &["e0"]), ("b", &["z"])]).unwrap()).unwrap();
        let out = filter_pipeline(&f, &FilterOptions::default());
        let (again, rounds) = degree_filter(&out.g, 5);
        assert_eq!(again, out.g);
        assert_eq!(rounds, 0);
    }

    #[test]
    fn single_instance_fact_stays_in_train() {
        let f = facts(&[
            ("M", "m1", &[("a", &["x"]), ("b", &["y", "z"])]),
            ("M", "m2", &[("a", &["x"]), ("b", &["w"])]),
        ]);
        let g_id = convert_fact_rep(&f, IdMode::KeepCollapsingDegenerate);
        for seed in 0..20 {
            let s = split(&g_id, 0.5, seed).unwrap();
            let test_ids = s.g_id.test.fact_id_entities();
            assert!(test_ids.is_subset(&s.g_id.train.fact_id_entities()));
            assert!(s.g_id.test.iter().all(|i| i.fact_id().is_none_or(|id| id.name() != "m2")));
        }
    }

    #[test]
    fn two_instance_fact_split_keeps_coverage() {
        let f = facts(&[("M", "m1", &[("a", &["x"]), ("b", &["y", "z"])])]);
        let g_id = convert_fact_rep(&f, IdMode::Keep);
        let s = split(&g_id, 0.5, 3).unwrap();
        assert_eq!(s.g_id.train.instance_count(), 1);
        assert_eq!(s.g_id.test.instance_count(), 1);
        assert_eq!(s.moved_to_train, 0);
        assert_eq!(s.realized_fraction, 0.5);
    }

    #[test]
    fn bad_fraction() {
        let g = crate::kb::toy_instance_rep();
        assert!(matches!(split(&g, 0.0, 0), Err(Error::Config(_))));
        assert!(matches!(split(&g, 1.0, 0), Err(Error::Config(_))));
        assert!(matches!(split(&InstanceRepresentation::new(), 0.5, 0), Err(Error::Data(_))));
    }

    #[test]
    fn variants_consistent() {
        let f = facts(&[
            ("M", "m1", &[("a", &["x"]), ("b", &["y", "z"]), ("c", &["q"])]),
            ("M", "m2", &[("a", &["x"]), ("b", &["w", "v"]), ("c", &["q"])]),
            ("N", "n1", &[("a", &["x"]), ("b", &["y"])]),
        ]);
        let g_id = convert_fact_rep(&f, IdMode::KeepCollapsingDegenerate);
        let s = split(&g_id, 0.4, 11).unwrap();
        assert_eq!(strip_ids(&s.g_id.train), s.g.train);
        assert_eq!(s2c_representation(&s.g.train), s.g_s2c.train);
        assert_eq!(s2c_representation(&s.g.test), s.g_s2c.test);
        assert!(s.g_s2c.provenance.values().all(|p| p.fold >= 2));
    }
}
