//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use mfold::{EntityId, Fact, FactRepresentation, Instance, InstanceRepresentation, RelTypeId, RoleId};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn vector(rng: &mut impl Rng, dim: usize) -> Vec<f64> {
    (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

pub fn unit_vector(rng: &mut impl Rng, dim: usize) -> Vec<f64> {
    loop {
        let v = vector(rng, dim);
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-3 {
            return v.iter().map(|x| x / norm).collect();
        }
    }
}

pub fn roles(count: usize) -> Vec<RoleId> {
    (0..count).map(|k| RoleId::new(format!("r{k}"))).collect()
}

/// Random facts: up to `max_facts` facts over up to three meta-relations of
/// 1..=`max_roles` roles, each role set holding 1..=`max_set` entities.
pub fn random_facts(
    rng: &mut impl Rng,
    max_facts: usize,
    max_roles: usize,
    max_set: usize,
    entities: usize,
) -> FactRepresentation {
    let relation_count = rng.gen_range(1..=3);
    let schemas: Vec<(RelTypeId, Vec<RoleId>)> = (0..relation_count)
        .map(|k| (RelTypeId::new(format!("M{k}")), roles(rng.gen_range(1..=max_roles))))
        .collect();
    let pool: Vec<EntityId> = (0..entities).map(|k| EntityId::new(format!("n{k}"))).collect();
    let fact_count = rng.gen_range(0..=max_facts);
    let facts: Vec<Fact> = (0..fact_count)
        .map(|k| {
            let (rel, rel_roles) = &schemas[rng.gen_range(0..schemas.len())];
            let pairs: Vec<(RoleId, BTreeSet<EntityId>)> = rel_roles
                .iter()
                .map(|role| {
                    let size = rng.gen_range(1..=max_set);
                    let set = pool.choose_multiple(rng, size).cloned().collect();
                    (role.clone(), set)
                })
                .collect();
            Fact::new(rel.clone(), EntityId::new(format!("u{k}")), pairs).unwrap()
        })
        .collect();
    FactRepresentation::from_facts(facts).unwrap()
}

/// Random instances of relations with folds in `folds`, entities drawn with
/// replacement from a pool of `entities`, so repeated entities and
/// overlapping pairs occur.
pub fn random_instances(rng: &mut impl Rng, count: usize, folds: &[usize], entities: usize) -> InstanceRepresentation {
    let mut rep = InstanceRepresentation::new();
    for _ in 0..count {
        let fold = folds[rng.gen_range(0..folds.len())];
        let rel = RelTypeId::new(format!("R{fold}"));
        let pairs: Vec<(RoleId, EntityId)> = roles(fold)
            .into_iter()
            .map(|r| (r, EntityId::new(format!("e{}", rng.gen_range(0..entities)))))
            .collect();
        rep.insert(Instance::new(rel, pairs).unwrap()).unwrap();
    }
    rep
}

/// A fact KB for the dataset pipeline: meta-relations of 1 to 4 roles,
/// skewed entity popularity so the degree filter has work to do, and a
/// share of non-degenerate facts.
pub fn pipeline_facts(seed: u64) -> FactRepresentation {
    let mut rng = rng(seed);
    let schemas: Vec<(RelTypeId, Vec<RoleId>)> = [1, 2, 3, 4]
        .iter()
        .map(|&j| (RelTypeId::new(format!("M{j}")), roles(j)))
        .collect();
    let draw = |rng: &mut ChaCha8Rng| {
        let u: f64 = rng.gen();
        EntityId::new(format!("n{}", (400.0 * u * u * u) as usize))
    };
    let facts: Vec<Fact> = (0..1500)
        .map(|k| {
            let (rel, rel_roles) = &schemas[rng.gen_range(0..schemas.len())];
            let pairs: Vec<(RoleId, BTreeSet<EntityId>)> = rel_roles
                .iter()
                .map(|role| {
                    let size = if rng.gen_bool(0.2) { 2 } else { 1 };
                    (role.clone(), (0..size).map(|_| draw(&mut rng)).collect())
                })
                .collect();
            Fact::new(rel.clone(), EntityId::new(format!("f{k}")), pairs).unwrap()
        })
        .collect();
    FactRepresentation::from_facts(facts).unwrap()
}
