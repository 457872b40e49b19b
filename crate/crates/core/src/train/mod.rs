//! Margin-based training with stochastic gradient descent.
//!
//! The objective summed over an epoch is
//! `Σ_t f_r(t) + Σ_{t⁻} [c - f_r(t⁻)]_+` plus the weighted soft-constraint
//! penalty of the relations touched by each batch.

mod negative;

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kb::{is_fact_id_role, InstanceRepresentation};
use crate::model::{
    normalize, CostModel, DenseItem, EmbeddingTable, GradBuffer, MTransHParams, ModelKind,
    RelationModel, RelationParams, TransHParams,
};

pub use negative::{negatives_per_item, pair_loss, sample_negatives, NegativeExample};

/// The three training set-ups. TransH:inst reuses the TransH:triple model and
/// differs only at evaluation time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TrainMode {
    #[serde(rename = "transh-triple")]
    TransHTriple,
    #[serde(rename = "m-transh")]
    MTransH,
    #[serde(rename = "m-transh-id")]
    MTransHId,
}

impl TrainMode {
    pub fn model_kind(self) -> ModelKind {
        match self {
            TrainMode::TransHTriple => ModelKind::TransH,
            TrainMode::MTransH => ModelKind::MTransH,
            TrainMode::MTransHId => ModelKind::MTransHId,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TrainMode::TransHTriple => "transh-triple",
            TrainMode::MTransH => "m-transh",
            TrainMode::MTransHId => "m-transh-id",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "transh-triple" | "transh" => Some(TrainMode::TransHTriple),
            "m-transh" => Some(TrainMode::MTransH),
            "m-transh-id" => Some(TrainMode::MTransHId),
            _ => None,
        }
    }
}

impl fmt::Display for TrainMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    pub dim: usize,
    pub margin: f64,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub penalty_weight: f64,
    pub seed: u64,
    pub mode: TrainMode,
    /// Renormalize after every step instead of relying on the penalty alone.
    pub strict_constraints: bool,
    /// Keep the m-TransH role weights at their initial values.
    pub freeze_weights: bool,
    /// Redraw negatives that happen to be training instances.
    pub reject_known_positives: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            dim: 50,
            margin: 1.0,
            learning_rate: 0.01,
            epochs: 500,
            batch_size: 128,
            penalty_weight: 0.25,
            seed: 0,
            mode: TrainMode::MTransH,
            strict_constraints: false,
            freeze_weights: false,
            reject_known_positives: false,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::Config(msg.to_owned()));
        if self.dim == 0 {
            return fail("dim must be positive");
        }
        if !(self.margin >= 0.0 && self.margin.is_finite()) {
            return fail("margin must be a finite non-negative number");
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return fail("learning_rate must be positive");
        }
        if self.batch_size == 0 {
            return fail("batch_size must be positive");
        }
        if !(self.penalty_weight >= 0.0 && self.penalty_weight.is_finite()) {
            return fail("penalty_weight must be a finite non-negative number");
        }
        Ok(())
    }

    /// Stable one-line rendering, used for digests and run headers.
    pub fn canonical(&self) -> String {
        format!(
            "mode={} dim={} margin={} learning_rate={} epochs={} batch_size={} penalty_weight={} seed={} strict_constraints={} freeze_weights={} reject_known_positives={}",
            self.mode,
            self.dim,
            self.margin,
            self.learning_rate,
            self.epochs,
            self.batch_size,
            self.penalty_weight,
            self.seed,
            self.strict_constraints,
            self.freeze_weights,
            self.reject_known_positives
        )
    }

    /// FNV-1a digest of [`Self::canonical`], as 16 hex digits.
    pub fn digest(&self) -> String {
        let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
        for byte in self.canonical().bytes() {
            hash ^= u64::from(byte);
            hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
        }
        format!("{hash:016x}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpochRecord {
    pub epoch: usize,
    /// Mean per-item margin objective over the epoch.
    pub loss: f64,
    /// Weighted constraint penalty at the end of the epoch.
    pub penalty: f64,
    pub elapsed_ms: u128,
}

impl fmt::Display for EpochRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "epoch {} loss {} penalty {} elapsed_ms {}",
            self.epoch, self.loss, self.penalty, self.elapsed_ms
        )
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrainLog {
    pub epochs: Vec<EpochRecord>,
    /// Rejected updates and similar incidents, in order of occurrence.
    pub events: Vec<String>,
    pub negatives_per_epoch: usize,
}

impl fmt::Display for TrainLog {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for record in &self.epochs {
            writeln!(f, "{record}")?;
        }
        Ok(())
    }
}

fn uniform_vec(rng: &mut impl Rng, dim: usize, bound: f64) -> Vec<f64> {
    (0..dim).map(|_| rng.gen_range(-bound..=bound)).collect()
}

/// Random initial parameters.
///
/// Entities (in name order) get components uniform in `±6/√dim`. Per
/// relation, the normal is a random unit vector and the offset a random unit
/// vector orthogonal to it. m-TransH role weights start at `+1` for the first
/// role and `-1/(J-1)` for the others, which is exact TransH for binary
/// relations.
pub fn init_params(
    rep: &InstanceRepresentation,
    config: &TrainConfig,
    rng: &mut impl Rng,
) -> Result<CostModel> {
    config.validate()?;
    let dim = config.dim;
    let bound = 6.0 / (dim as f64).sqrt();
    let mut table = EmbeddingTable::new(dim);
    for entity in &rep.entities {
        let v = uniform_vec(rng, dim, bound);
        table.insert(entity.clone(), &v)?;
    }
    let kind = config.mode.model_kind();
    let mut relations = Vec::with_capacity(rep.schemas.len());
    for (rel, schema) in &rep.schemas {
        let mut normal = uniform_vec(rng, dim, 1.0);
        normalize(&mut normal);
        let mut offset = uniform_vec(rng, dim, 1.0);
        let s: f64 = offset.iter().zip(&normal).map(|(a, b)| a * b).sum();
        offset.iter_mut().zip(&normal).for_each(|(o, n)| *o -= s * n);
        normalize(&mut offset);
        let roles = schema.roles().to_vec();
        let params = match kind {
            ModelKind::TransH => RelationParams::TransH(TransHParams {
                normal,
                translation: offset,
            }),
            ModelKind::MTransH | ModelKind::MTransHId => {
                let j = roles.len();
                let rest = if j > 1 { -1.0 / (j - 1) as f64 } else { 0.0 };
                let weights = (0..j).map(|i| if i == 0 { 1.0 } else { rest }).collect();
                RelationParams::MTransH(MTransHParams {
                    normal,
                    bias: offset,
                    weights,
                })
            }
        };
        relations.push(RelationModel {
            rel_type: rel.clone(),
            roles,
            params,
        });
    }
    let fact_ids = if kind == ModelKind::MTransHId {
        rep.fact_id_entities()
    } else {
        BTreeSet::new()
    };
    CostModel::new(kind, table, relations, fact_ids)
}

fn check_training_rep(rep: &InstanceRepresentation, mode: TrainMode) -> Result<()> {
    if let Some(v) = rep.validate().first() {
        return Err(Error::Data(format!("training data is invalid: {v}")));
    }
    for (rel, schema) in &rep.schemas {
        if rep.instances.get(rel).is_none_or(|s| s.is_empty()) {
            return Err(Error::Data(format!("relation `{rel}` has no training instance")));
        }
        if schema.fold() < 2 {
            return Err(Error::Data(format!(
                "relation `{rel}` is {}-fold; at least 2 roles are required",
                schema.fold()
            )));
        }
        match mode {
            TrainMode::TransHTriple if schema.arity() != 2 => {
                return Err(Error::Data(format!(
                    "TransH trains on triples, but `{rel}` has {} roles",
                    schema.arity()
                )));
            }
            TrainMode::MTransH if schema.has_fact_id() => {
                return Err(Error::Data(format!(
                    "`{rel}` carries FACT-ID; use the m-transh-id mode"
                )));
            }
            _ => {}
        }
    }
    Ok(())
}

/// Trains a model on `rep`.
pub fn train(rep: &InstanceRepresentation, config: &TrainConfig) -> Result<(CostModel, TrainLog)> {
    train_with_observer(rep, config, |_, _| {})
}

/// Like [`train`], calling `observer` after every epoch with the current
/// model.
pub fn train_with_observer(
    rep: &InstanceRepresentation,
    config: &TrainConfig,
    mut observer: impl FnMut(&EpochRecord, &CostModel),
) -> Result<(CostModel, TrainLog)> {
    config.validate()?;
    check_training_rep(rep, config.mode)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut model = init_params(rep, config, &mut rng)?;

    let items: Vec<DenseItem> = rep
        .iter()
        .map(|t| model.densify(t))
        .collect::<Result<_>>()?;
    // roles eligible for corruption, per relation row
    let eligible: Vec<Vec<usize>> = model
        .relations()
        .iter()
        .map(|r| {
            r.roles
                .iter()
                .enumerate()
                .filter(|(_, role)| !is_fact_id_role(role))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let neg_counts: Vec<usize> = items
        .iter()
        .map(|item| negatives_per_item(config.mode, eligible[item.relation].len()))
        .collect();
    let pool = model.candidate_rows();
    if pool.len() < 2 {
        return Err(Error::EmptyPool);
    }
    let mut pool_pos = vec![None; model.embedding().len()];
    for (k, &row) in pool.iter().enumerate() {
        pool_pos[row] = Some(k);
    }
    let known: HashSet<DenseItem> = if config.reject_known_positives {
        items.iter().cloned().collect()
    } else {
        HashSet::new()
    };

    let mut log = TrainLog {
        negatives_per_epoch: neg_counts.iter().sum(),
        ..TrainLog::default()
    };
    let mut order: Vec<usize> = (0..items.len()).collect();
    let mut buf = GradBuffer::new();
    let start = Instant::now();

    for epoch in 1..=config.epochs {
        order.shuffle(&mut rng);
        let mut total = 0.0;
        for (batch_no, batch) in order.chunks(config.batch_size).enumerate() {
            buf.clear();
            for &i in batch {
                let item = &items[i];
                let f_pos = model.dense_cost(item);
                model.accumulate_gradient(item, 1.0, &mut buf);
                let mut item_loss = f_pos;
                let roles = &eligible[item.relation];
                for _ in 0..neg_counts[i] {
                    let mut negative = item.clone();
                    for _attempt in 0..100 {
                        let slot = roles[rng.gen_range(0..roles.len())];
                        let original = item.entities[slot];
                        let k = negative::draw_excluding(&mut rng, pool.len(), pool_pos[original]);
                        negative.entities.clone_from(&item.entities);
                        negative.entities[slot] = pool[k];
                        if !known.contains(&negative) {
                            break;
                        }
                    }
                    let f_neg = model.dense_cost(&negative);
                    let violation = config.margin - f_neg;
                    if violation > 0.0 {
                        model.accumulate_gradient(&negative, -1.0, &mut buf);
                        item_loss += violation;
                    }
                }
                total += item_loss;
            }
            let touched = buf.touched_relations();
            if config.penalty_weight > 0.0 {
                for &rel in &touched {
                    model.accumulate_penalty_gradient(rel, config.penalty_weight, &mut buf);
                }
            }
            if !model.apply_gradient(&buf, config.learning_rate, config.freeze_weights) {
                log.events.push(format!(
                    "epoch {epoch} batch {batch_no}: non-finite update rejected"
                ));
                continue;
            }
            if config.strict_constraints {
                for rel in touched {
                    model.params_mut(rel).enforce_constraints();
                }
            }
        }
        let record = EpochRecord {
            epoch,
            loss: if items.is_empty() {
                0.0
            } else {
                total / items.len() as f64
            },
            penalty: model.constraint_penalty(config.penalty_weight),
            elapsed_ms: start.elapsed().as_millis(),
        };
        observer(&record, &model);
        log.epochs.push(record);
    }
    Ok((model, log))
}
