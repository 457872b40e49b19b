//! Synthetic knowledge bases generated from a planted m-TransH model.
//!
//! Each instance fixes all but one randomly chosen role at random entities
//! and fills the remaining role with the entity of lowest planted cost, so
//! the multi-fold structure is exactly expressible by m-TransH but only
//! partially visible through pairwise triples. A fraction of instances is
//! then corrupted by replacing one entity at random.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::kb::{Instance, InstanceRepresentation};
use crate::model::cost::{dot, mtransh_cost_unchecked};
use crate::model::{normalize, MTransHParams};
use crate::symbol::{EntityId, RelTypeId, RoleId};

#[derive(Debug, Clone, PartialEq)]
pub struct PlantedConfig {
    pub entities: usize,
    /// `(fold, number of relation types)` pairs.
    pub relations: Vec<(usize, usize)>,
    pub instances: usize,
    /// Probability that an instance gets one random entity swapped in.
    pub noise: f64,
    pub dim: usize,
    pub seed: u64,
}

impl Default for PlantedConfig {
    fn default() -> Self {
        PlantedConfig {
            entities: 200,
            relations: vec![(2, 4), (3, 4), (4, 4)],
            instances: 2000,
            noise: 0.05,
            dim: 25,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PlantedRelation {
    pub rel_type: RelTypeId,
    pub roles: Vec<RoleId>,
    pub params: MTransHParams,
}

#[derive(Debug, Clone)]
pub struct PlantedKb {
    pub rep: InstanceRepresentation,
    pub entities: Vec<EntityId>,
    pub vectors: Vec<Vec<f64>>,
    pub relations: Vec<PlantedRelation>,
    /// Instances that were corrupted after generation.
    pub noisy: usize,
}

fn unit_vector(rng: &mut impl Rng, dim: usize) -> Vec<f64> {
    let mut v: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
    normalize(&mut v);
    v
}

fn planted_relation(rng: &mut impl Rng, fold: usize, index: usize, dim: usize) -> PlantedRelation {
    let normal = unit_vector(rng, dim);
    let mut bias = unit_vector(rng, dim);
    let s = dot(&bias, &normal);
    bias.iter_mut().zip(&normal).for_each(|(b, n)| *b -= s * n);
    normalize(&mut bias);
    bias.iter_mut().for_each(|b| *b *= 0.5);
    // magnitudes in [0.5, 1.5] with random signs: binary weights need not
    // cancel, which a translation cannot express
    let weights = (0..fold)
        .map(|_| {
            let m: f64 = rng.gen_range(0.5..1.5);
            if rng.gen_bool(0.5) {
                m
            } else {
                -m
            }
        })
        .collect();
    PlantedRelation {
        rel_type: RelTypeId::new(format!("rel{fold}_{index}")),
        roles: (0..fold).map(|k| RoleId::new(format!("r{k}"))).collect(),
        params: MTransHParams { normal, bias, weights },
    }
}

/// Generates a planted KB; deterministic in `config.seed`.
pub fn planted_kb(config: &PlantedConfig) -> Result<PlantedKb> {
    if config.entities < 2 || config.dim == 0 || config.relations.is_empty() {
        return Err(Error::Config("planted KB needs ≥2 entities, dim ≥1 and some relations".into()));
    }
    if !(0.0..=1.0).contains(&config.noise) {
        return Err(Error::Config("noise must lie in [0, 1]".into()));
    }
    if config.relations.iter().any(|&(fold, _)| fold < 2 || fold > config.entities) {
        return Err(Error::Config("relation folds must lie in [2, entities]".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let width = config.entities.to_string().len();
    let entities: Vec<EntityId> = (0..config.entities)
        .map(|k| EntityId::new(format!("e{k:0width$}")))
        .collect();
    let vectors: Vec<Vec<f64>> = (0..config.entities).map(|_| unit_vector(&mut rng, config.dim)).collect();
    let mut relations = Vec::new();
    for &(fold, count) in &config.relations {
        for index in 0..count {
            relations.push(planted_relation(&mut rng, fold, index, config.dim));
        }
    }

    let mut rep = InstanceRepresentation::new();
    let mut noisy = 0;
    let mut attempts = 0;
    while rep.instance_count() < config.instances {
        attempts += 1;
        if attempts > 20 * config.instances + 1000 {
            return Err(Error::Config("could not generate enough distinct instances".into()));
        }
        let rel = &relations[rng.gen_range(0..relations.len())];
        let fold = rel.roles.len();
        let free = rng.gen_range(0..fold);
        let mut chosen: Vec<usize> = (0..config.entities).collect();
        let (picked, _) = chosen.partial_shuffle(&mut rng, fold - 1);
        let mut slots: Vec<usize> = picked.to_vec();
        slots.insert(free, usize::MAX);
        let mut best = (f64::INFINITY, 0);
        let mut refs: Vec<&[f64]> = slots
            .iter()
            .map(|&k| if k == usize::MAX { &vectors[0][..] } else { &vectors[k][..] })
            .collect();
        for (cand, v) in vectors.iter().enumerate() {
            if slots.contains(&cand) {
                continue;
            }
            refs[free] = v;
            let c = mtransh_cost_unchecked(&rel.params, &refs);
            if c < best.0 {
                best = (c, cand);
            }
        }
        slots[free] = best.1;
        let corrupt = rng.gen_bool(config.noise);
        if corrupt {
            let role = rng.gen_range(0..fold);
            let fresh: Vec<usize> = (0..config.entities).filter(|k| !slots.contains(k)).collect();
            if let Some(&k) = fresh.choose(&mut rng) {
                slots[role] = k;
            }
        }
        let instance = Instance::new(
            rel.rel_type.clone(),
            rel.roles.iter().cloned().zip(slots.iter().map(|&k| entities[k].clone())),
        )?;
        if rep.insert(instance)? {
            noisy += usize::from(corrupt);
        }
    }
    Ok(PlantedKb {
        rep,
        entities,
        vectors,
        relations,
        noisy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> PlantedConfig {
        PlantedConfig {
            entities: 30,
            relations: vec![(2, 1), (3, 2)],
            instances: 100,
            noise: 0.1,
            dim: 5,
            seed: 4,
        }
    }

    #[test]
    fn sizes_and_determinism() {
        let a = planted_kb(&small()).unwrap();
        let b = planted_kb(&small()).unwrap();
        assert_eq!(a.rep, b.rep);
        assert_eq!(a.rep.instance_count(), 100);
        assert!(a.rep.validate().is_empty());
        let folds: std::collections::BTreeSet<usize> = a.rep.iter().map(|i| i.fold()).collect();
        assert_eq!(folds, [2, 3].into_iter().collect());
    }

    #[test]
    fn noiseless_instances_are_planted_minima() {
        let kb = planted_kb(&PlantedConfig { noise: 0.0, ..small() }).unwrap();
        let index = |e: &EntityId| kb.entities.iter().position(|x| x == e).unwrap();
        for item in kb.rep.iter() {
            let rel = kb.relations.iter().find(|r| &r.rel_type == item.rel_type()).unwrap();
            let slots: Vec<usize> = item.entities().map(index).collect();
            let refs: Vec<&[f64]> = slots.iter().map(|&k| &kb.vectors[k][..]).collect();
            let cost = mtransh_cost_unchecked(&rel.params, &refs);
            // some slot holds an entity no other entity beats
            let optimal_somewhere = (0..slots.len()).any(|free| {
                kb.vectors.iter().enumerate().all(|(k, v)| {
                    if slots.iter().enumerate().any(|(s, &e)| s != free && e == k) {
                        return true;
                    }
                    let mut alt = refs.clone();
                    alt[free] = v;
                    mtransh_cost_unchecked(&rel.params, &alt) >= cost
                })
            });
            assert!(optimal_somewhere, "{item}");
        }
    }

    #[test]
    fn invalid_configs() {
        assert!(planted_kb(&PlantedConfig { entities: 1, ..small() }).is_err());
        assert!(planted_kb(&PlantedConfig { relations: vec![(1, 1)], ..small() }).is_err());
        assert!(planted_kb(&PlantedConfig { noise: 1.5, ..small() }).is_err());
    }
}
