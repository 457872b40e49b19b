use rand::Rng;

use crate::error::{Error, Result};
use crate::kb::{is_fact_id_role, Instance};
use crate::symbol::{EntityId, RoleId};

use super::TrainMode;

/// A corrupted copy of a training instance: one role's entity swapped out.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct NegativeExample {
    pub source: Instance,
    pub corrupted_role: RoleId,
    pub replacement: EntityId,
}

impl NegativeExample {
    pub fn corrupted(&self) -> Instance {
        self.source
            .replaced(&self.corrupted_role, self.replacement.clone())
    }
}

/// `[c - f_neg]_+` added to the positive cost: the contribution of one
/// (positive, negative) pair to the margin objective.
pub fn pair_loss(f_pos: f64, f_neg: f64, margin: f64) -> f64 {
    f_pos + (margin - f_neg).max(0.0)
}

pub(crate) fn binomial2(j: usize) -> usize {
    j * j.saturating_sub(1) / 2
}

/// Negatives drawn per training item: one per triple for TransH, `C(J, 2)`
/// per J-fold instance for m-TransH, so both see the same total when the
/// triples are the S2C image of the instances.
pub fn negatives_per_item(mode: TrainMode, fold: usize) -> usize {
    match mode {
        TrainMode::TransHTriple => 1,
        TrainMode::MTransH | TrainMode::MTransHId => binomial2(fold),
    }
}

/// Uniform draw from `0..pool_len` excluding `skip` (when the original is in
/// the pool).
pub(crate) fn draw_excluding(rng: &mut impl Rng, pool_len: usize, skip: Option<usize>) -> usize {
    match skip {
        Some(s) => {
            let k = rng.gen_range(0..pool_len - 1);
            if k >= s {
                k + 1
            } else {
                k
            }
        }
        None => rng.gen_range(0..pool_len),
    }
}

/// Draws `count` negatives for `instance`. Each picks a role uniformly (never
/// FACT-ID) and replaces its entity by a uniform draw from `pool` minus the
/// original entity.
pub fn sample_negatives(
    instance: &Instance,
    count: usize,
    pool: &[EntityId],
    rng: &mut impl Rng,
) -> Result<Vec<NegativeExample>> {
    if pool.len() < 2 {
        return Err(Error::EmptyPool);
    }
    let roles: Vec<&RoleId> = instance.roles().filter(|r| !is_fact_id_role(r)).collect();
    if roles.is_empty() {
        return Err(Error::Data(format!("{instance} has no role to corrupt")));
    }
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let role = roles[rng.gen_range(0..roles.len())];
        let original = instance.get(role).expect("role of instance");
        let skip = pool.iter().position(|e| e == original);
        let replacement = pool[draw_excluding(rng, pool.len(), skip)].clone();
        out.push(NegativeExample {
            source: instance.clone(),
            corrupted_role: role.clone(),
            replacement,
        });
    }
    Ok(out)
}
