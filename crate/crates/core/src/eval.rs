//! Entity-ranking evaluation.
//!
//! For every test item and every entity slot, the true entity is hidden, the
//! cost is evaluated with each candidate in its place, and the rank of the
//! true entity among the candidates (lowest cost first) is recorded. Ranking
//! is raw: other known positives are not filtered out.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::kb::{is_fact_id_role, Instance, InstanceRepresentation};
use crate::model::cost::{dot, project_into};
use crate::model::{CostModel, ModelKind, RelationParams};
use crate::symbol::{EntityId, RelTypeId, RoleId};

/// Which items are queried and how their cost is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Protocol {
    /// Binary items scored by the model's own relation (TransH on triples).
    Triple,
    /// Instances of the original relations; a TransH model is scored
    /// through the decomposition framework.
    Instance,
    /// ID-tagged instances; FACT-ID slots are never queried.
    InstanceId,
}

impl Protocol {
    pub fn name(self) -> &'static str {
        match self {
            Protocol::Triple => "triple",
            Protocol::Instance => "instance",
            Protocol::InstanceId => "instance-id",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "triple" => Some(Protocol::Triple),
            "instance" => Some(Protocol::Instance),
            "instance-id" => Some(Protocol::InstanceId),
            _ => None,
        }
    }
}

/// Name of the experiment a (model, protocol) combination corresponds to.
pub fn experiment_label(kind: ModelKind, protocol: Protocol) -> Result<&'static str> {
    match (kind, protocol) {
        (ModelKind::TransH, Protocol::Triple) => Ok("TransH:triple"),
        (ModelKind::TransH, Protocol::Instance) => Ok("TransH:inst"),
        (ModelKind::MTransH, Protocol::Instance) => Ok("m-TransH"),
        (ModelKind::MTransHId, Protocol::InstanceId) => Ok("m-TransH:ID"),
        _ => Err(Error::Incompatible(format!(
            "a {kind} model cannot be evaluated with the {} protocol",
            protocol.name()
        ))),
    }
}

/// How equal costs are ordered against the true entity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TieRule {
    /// Rank = 1 + number of candidates with strictly lower cost.
    #[default]
    Optimistic,
    /// Rank = number of candidates with cost lower than or equal to the truth.
    Pessimistic,
}

impl TieRule {
    pub fn name(self) -> &'static str {
        match self {
            TieRule::Optimistic => "optimistic",
            TieRule::Pessimistic => "pessimistic",
        }
    }
}

/// Restricts evaluation to a seeded random subset of the test items.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sampling {
    pub fraction: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EvalOptions {
    pub tie: TieRule,
    pub sampling: Option<Sampling>,
    /// Worker threads; 0 uses the global pool.
    pub threads: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QueryRecord {
    /// Position of the item in the test representation's iteration order.
    pub item: usize,
    pub rel_type: RelTypeId,
    /// Fold of the item's original relation; `None` for a triple whose
    /// provenance is unknown.
    pub fold: Option<usize>,
    pub role: RoleId,
    pub rank: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FoldMetrics {
    pub hit_at_10: f64,
    pub mean_rank: f64,
    pub queries: usize,
}

impl FoldMetrics {
    fn of<'a>(records: impl IntoIterator<Item = &'a QueryRecord>) -> FoldMetrics {
        let (mut n, mut hits, mut rank_sum) = (0usize, 0usize, 0u128);
        for r in records {
            n += 1;
            hits += usize::from(r.rank <= 10);
            rank_sum += r.rank as u128;
        }
        if n == 0 {
            return FoldMetrics {
                hit_at_10: 0.0,
                mean_rank: 0.0,
                queries: 0,
            };
        }
        FoldMetrics {
            hit_at_10: hits as f64 / n as f64,
            mean_rank: rank_sum as f64 / n as f64,
            queries: n,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankingReport {
    pub label: &'static str,
    pub protocol: Protocol,
    pub dim: usize,
    pub tie: TieRule,
    pub sampling: Option<Sampling>,
    pub candidate_count: usize,
    pub records: Vec<QueryRecord>,
    pub hit_at_10: f64,
    pub mean_rank: f64,
}

/// 1-based rank of `costs[truth]` under the tie rule. NaN never counts as
/// lower.
pub fn rank_from_costs(costs: &[f64], truth: usize, tie: TieRule) -> usize {
    let target = costs[truth];
    let lower = costs.iter().filter(|&&c| c < target).count();
    match tie {
        TieRule::Optimistic => lower + 1,
        TieRule::Pessimistic => {
            let equal_others = costs
                .iter()
                .enumerate()
                .filter(|&(k, &c)| k != truth && c == target)
                .count();
            lower + equal_others + 1
        }
    }
}

/// `‖base + weight · P_n(x)‖²`, the cost as a function of one slot.
struct SlotTerm<'m> {
    normal: &'m [f64],
    base: Vec<f64>,
    weight: f64,
}

impl SlotTerm<'_> {
    fn eval(&self, x: &[f64]) -> f64 {
        let s = dot(x, self.normal);
        let mut total = 0.0;
        for i in 0..x.len() {
            let v = self.base[i] + self.weight * (x[i] - s * self.normal[i]);
            total += v * v;
        }
        total
    }
}

/// Slot cost = constant + Σ terms.
struct SlotCost<'m> {
    constant: f64,
    terms: Vec<SlotTerm<'m>>,
}

impl SlotCost<'_> {
    fn eval(&self, x: &[f64]) -> f64 {
        self.constant + self.terms.iter().map(|t| t.eval(x)).sum::<f64>()
    }
}

/// Linear-form view of a relation: normal, offset and per-role weights.
fn linear_form(params: &RelationParams) -> (&[f64], &[f64], Vec<f64>) {
    match params {
        RelationParams::TransH(p) => (&p.normal, &p.translation, vec![1.0, -1.0]),
        RelationParams::MTransH(p) => (&p.normal, &p.bias, p.weights.clone()),
    }
}

/// Native cost with `slot` free: `Σ_{ρ≠slot} a(ρ) P(t(ρ)) + offset` as base.
fn native_slot_cost<'m>(model: &'m CostModel, rel: usize, vectors: &[&[f64]], slot: usize) -> SlotCost<'m> {
    let (normal, offset, weights) = linear_form(&model.relations()[rel].params);
    let mut base = offset.to_vec();
    let mut projected = vec![0.0; normal.len()];
    for (k, (t, a)) in vectors.iter().zip(&weights).enumerate() {
        if k == slot {
            continue;
        }
        project_into(normal, t, &mut projected);
        for (b, p) in base.iter_mut().zip(&projected) {
            *b += a * p;
        }
    }
    SlotCost {
        constant: 0.0,
        terms: vec![SlotTerm {
            normal,
            base,
            weight: weights[slot],
        }],
    }
}

fn decomposed_slot_cost<'m>(
    model: &'m CostModel,
    item: &Instance,
    vectors: &[&[f64]],
    slot: usize,
) -> Result<SlotCost<'m>> {
    let roles: Vec<&RoleId> = item.roles().collect();
    let mut cost = SlotCost {
        constant: 0.0,
        terms: Vec::new(),
    };
    let mut projected = vec![0.0; model.dim()];
    for i in 0..roles.len() {
        for j in i + 1..roles.len() {
            let params = model
                .pair_params(item.rel_type(), roles[i], roles[j])
                .ok_or_else(|| Error::MissingPairParams {
                    rel: item.rel_type().to_string(),
                    first: roles[i].to_string(),
                    second: roles[j].to_string(),
                })?;
            if i != slot && j != slot {
                cost.constant += crate::model::cost::transh_cost_unchecked(params, vectors[i], vectors[j]);
                continue;
            }
            // head slot: P(x') + d - P(y); tail slot: P(x) + d - P(y')
            let (other, weight, other_sign) = if i == slot {
                (vectors[j], 1.0, -1.0)
            } else {
                (vectors[i], -1.0, 1.0)
            };
            project_into(&params.normal, other, &mut projected);
            let base = params
                .translation
                .iter()
                .zip(&projected)
                .map(|(d, p)| d + other_sign * p)
                .collect();
            cost.terms.push(SlotTerm {
                normal: &params.normal,
                base,
                weight,
            });
        }
    }
    Ok(cost)
}

fn slot_cost<'m>(
    model: &'m CostModel,
    decomposed: bool,
    item: &Instance,
    slot: usize,
) -> Result<SlotCost<'m>> {
    let vectors = item
        .entities()
        .map(|e| {
            model
                .embedding()
                .get(e)
                .ok_or_else(|| Error::UnknownEntity(e.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    if decomposed {
        decomposed_slot_cost(model, item, &vectors, slot)
    } else {
        let dense = model.densify(item)?;
        Ok(native_slot_cost(model, dense.relation, &vectors, slot))
    }
}

fn uses_decomposition(model: &CostModel, protocol: Protocol) -> bool {
    model.kind() == ModelKind::TransH && protocol == Protocol::Instance
}

/// Rank of the true entity at `role` among `candidates`.
///
/// The protocol selects the cost: a TransH model under [`Protocol::Instance`]
/// is scored with the decomposed cost, everything else natively.
pub fn rank_entity(
    model: &CostModel,
    protocol: Protocol,
    item: &Instance,
    role: &RoleId,
    candidates: &[EntityId],
    tie: TieRule,
) -> Result<usize> {
    let slot = item
        .roles()
        .position(|r| r == role)
        .ok_or_else(|| Error::RoleMismatch {
            rel: item.rel_type().to_string(),
            reason: format!("role `{role}` not in {item}"),
        })?;
    let truth = item.get(role).expect("role present");
    let truth_idx = candidates
        .iter()
        .position(|c| c == truth)
        .ok_or_else(|| Error::TruthNotCandidate(truth.to_string()))?;
    let cost = slot_cost(model, uses_decomposition(model, protocol), item, slot)?;
    let costs = candidates
        .iter()
        .map(|c| {
            model
                .embedding()
                .get(c)
                .map(|x| cost.eval(x))
                .ok_or_else(|| Error::UnknownEntity(c.to_string()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(rank_from_costs(&costs, truth_idx, tie))
}

fn check_compatible(model: &CostModel, test: &InstanceRepresentation, protocol: Protocol) -> Result<()> {
    experiment_label(model.kind(), protocol)?;
    for (rel, schema) in &test.schemas {
        if protocol == Protocol::Triple && schema.arity() != 2 {
            return Err(Error::Incompatible(format!(
                "triple protocol needs binary items; `{rel}` has {} roles",
                schema.arity()
            )));
        }
        if protocol != Protocol::InstanceId && schema.has_fact_id() {
            return Err(Error::Incompatible(format!(
                "`{rel}` carries FACT-ID; use the instance-id protocol"
            )));
        }
    }
    Ok(())
}

/// Evaluates `model` on every entity slot of every item in `test`.
pub fn evaluate(
    model: &CostModel,
    test: &InstanceRepresentation,
    protocol: Protocol,
    options: &EvalOptions,
) -> Result<RankingReport> {
    let label = experiment_label(model.kind(), protocol)?;
    check_compatible(model, test, protocol)?;
    let decomposed = uses_decomposition(model, protocol);

    let candidates = model.candidate_rows();
    let mut position = vec![None; model.embedding().len()];
    for (k, &row) in candidates.iter().enumerate() {
        position[row] = Some(k);
    }

    let items: Vec<&Instance> = test.iter().collect();
    let mut selected: Vec<usize> = (0..items.len()).collect();
    if let Some(sampling) = options.sampling {
        if !(sampling.fraction > 0.0 && sampling.fraction <= 1.0) {
            return Err(Error::Config("sampling fraction must be in (0, 1]".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed);
        selected.shuffle(&mut rng);
        selected.truncate((sampling.fraction * items.len() as f64).ceil() as usize);
        selected.sort_unstable();
    }

    let query_item = |k: usize| -> Result<Vec<QueryRecord>> {
        let item = items[k];
        let fold = if protocol == Protocol::Triple {
            test.origins.get(item.rel_type()).map(|o| o.fold)
        } else {
            Some(item.fold())
        };
        let mut out = Vec::new();
        for (slot, (role, truth)) in item.assignment().iter().enumerate() {
            if is_fact_id_role(role) {
                continue;
            }
            let row = model
                .embedding()
                .index_of(truth)
                .ok_or_else(|| Error::UnknownEntity(truth.to_string()))?;
            let truth_idx = position[row].ok_or_else(|| Error::TruthNotCandidate(truth.to_string()))?;
            let cost = slot_cost(model, decomposed, item, slot)?;
            let costs: Vec<f64> = candidates
                .iter()
                .map(|&c| cost.eval(model.embedding().row(c)))
                .collect();
            out.push(QueryRecord {
                item: k,
                rel_type: item.rel_type().clone(),
                fold,
                role: role.clone(),
                rank: rank_from_costs(&costs, truth_idx, options.tie),
            });
        }
        Ok(out)
    };

    let run = || -> Result<Vec<Vec<QueryRecord>>> { selected.par_iter().map(|&k| query_item(k)).collect() };
    let nested = if options.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(options.threads)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?
            .install(run)?
    } else {
        run()?
    };
    let records: Vec<QueryRecord> = nested.into_iter().flatten().collect();
    let overall = FoldMetrics::of(&records);
    Ok(RankingReport {
        label,
        protocol,
        dim: model.dim(),
        tie: options.tie,
        sampling: options.sampling,
        candidate_count: candidates.len(),
        hit_at_10: overall.hit_at_10,
        mean_rank: overall.mean_rank,
        records,
    })
}

/// Partitions the report's queries by the fold of the original relation.
pub fn breakdown_by_fold(report: &RankingReport) -> Result<BTreeMap<usize, FoldMetrics>> {
    if report.records.is_empty() {
        return Err(Error::Data("empty ranking report".into()));
    }
    let mut groups: BTreeMap<usize, Vec<&QueryRecord>> = BTreeMap::new();
    for r in &report.records {
        let fold = r
            .fold
            .ok_or_else(|| Error::MissingProvenance(r.rel_type.to_string()))?;
        groups.entry(fold).or_default().push(r);
    }
    Ok(groups
        .into_iter()
        .map(|(fold, rs)| (fold, FoldMetrics::of(rs)))
        .collect())
}

impl RankingReport {
    /// Tabular export: a summary row under `protocol dim hit10 mean_rank`,
    /// the per-fold breakdown when provenance allows, then one line per
    /// query.
    pub fn export(&self) -> String {
        let mut out = String::new();
        let sampling = match self.sampling {
            Some(s) => format!("fraction={} seed={}", s.fraction, s.seed),
            None => "none".into(),
        };
        let _ = writeln!(
            out,
            "# protocol={} tie={} sampling={} candidates={} queries={}",
            self.protocol.name(),
            self.tie.name(),
            sampling,
            self.candidate_count,
            self.records.len()
        );
        let _ = writeln!(out, "protocol dim hit10 mean_rank");
        let _ = writeln!(out, "{} {} {} {}", self.label, self.dim, self.hit_at_10, self.mean_rank);
        if let Ok(folds) = breakdown_by_fold(self) {
            let _ = writeln!(out);
            let _ = writeln!(out, "fold hit10 mean_rank queries");
            for (fold, m) in folds {
                let _ = writeln!(out, "{} {} {} {}", fold, m.hit_at_10, m.mean_rank, m.queries);
            }
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "item\trel\tfold\trole\trank");
        for r in &self.records {
            let fold = r.fold.map_or_else(|| "-".to_string(), |f| f.to_string());
            let _ = writeln!(out, "{}\t{}\t{}\t{}\t{}", r.item, r.rel_type, fold, r.role, r.rank);
        }
        out
    }
}

impl fmt::Display for RankingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: HIT@10 {:.2}%  RANK {:.1}  ({} queries)",
            self.label,
            100.0 * self.hit_at_10,
            self.mean_rank,
            self.records.len()
        )
    }
}

/// Summary and records read back from [`RankingReport::export`] output.
#[derive(Debug, Clone, PartialEq)]
pub struct ExportedReport {
    pub label: String,
    pub dim: usize,
    pub hit_at_10: f64,
    pub mean_rank: f64,
    pub per_fold: BTreeMap<usize, FoldMetrics>,
    pub records: Vec<QueryRecord>,
}

/// Parses an exported report.
pub fn parse_export(text: &str) -> Result<ExportedReport> {
    let bad = |line: usize, what: &str| Error::Data(format!("report line {}: {what}", line + 1));
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.starts_with('#'));
    let mut summary = None;
    let mut per_fold = BTreeMap::new();
    let mut records = Vec::new();
    let mut section = "";
    for (no, line) in lines.by_ref() {
        if line.is_empty() {
            continue;
        }
        match line {
            "protocol dim hit10 mean_rank" => section = "summary",
            "fold hit10 mean_rank queries" => section = "fold",
            "item\trel\tfold\trole\trank" => section = "records",
            _ => match section {
                "summary" => {
                    let f: Vec<&str> = line.split(' ').collect();
                    if f.len() != 4 {
                        return Err(bad(no, "summary needs 4 fields"));
                    }
                    summary = Some((
                        f[0].to_string(),
                        f[1].parse().map_err(|_| bad(no, "dim"))?,
                        f[2].parse().map_err(|_| bad(no, "hit10"))?,
                        f[3].parse().map_err(|_| bad(no, "mean_rank"))?,
                    ));
                }
                "fold" => {
                    let f: Vec<&str> = line.split(' ').collect();
                    if f.len() != 4 {
                        return Err(bad(no, "fold row needs 4 fields"));
                    }
                    per_fold.insert(
                        f[0].parse().map_err(|_| bad(no, "fold"))?,
                        FoldMetrics {
                            hit_at_10: f[1].parse().map_err(|_| bad(no, "hit10"))?,
                            mean_rank: f[2].parse().map_err(|_| bad(no, "mean_rank"))?,
                            queries: f[3].parse().map_err(|_| bad(no, "queries"))?,
                        },
                    );
                }
                "records" => {
                    let f: Vec<&str> = line.split('\t').collect();
                    if f.len() != 5 {
                        return Err(bad(no, "record needs 5 fields"));
                    }
                    records.push(QueryRecord {
                        item: f[0].parse().map_err(|_| bad(no, "item"))?,
                        rel_type: RelTypeId::new(f[1]),
                        fold: if f[2] == "-" {
                            None
                        } else {
                            Some(f[2].parse().map_err(|_| bad(no, "fold"))?)
                        },
                        role: RoleId::new(f[3]),
                        rank: f[4].parse().map_err(|_| bad(no, "rank"))?,
                    });
                }
                _ => return Err(bad(no, "content outside a section")),
            },
        }
    }
    let (label, dim, hit_at_10, mean_rank) =
        summary.ok_or_else(|| Error::Data("report has no summary row".into()))?;
    Ok(ExportedReport {
        label,
        dim,
        hit_at_10,
        mean_rank,
        per_fold,
        records,
    })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::model::{EmbeddingTable, MTransHParams, RelationModel};

    /// 1-d embeddings on a line, relation "x_a - x_b = 0": the truth is the
    /// unique zero-cost candidate.
    fn line_model(values: &[(&str, f64)]) -> CostModel {
        let mut table = EmbeddingTable::new(2);
        for (name, v) in values {
            table.insert(EntityId::new(name), &[*v, 0.0]).unwrap();
        }
        CostModel::new(
            ModelKind::MTransH,
            table,
            vec![RelationModel {
                rel_type: RelTypeId::new("Same"),
                roles: vec![RoleId::new("a"), RoleId::new("b")],
                params: RelationParams::MTransH(MTransHParams {
                    normal: vec![0.0, 1.0],
                    bias: vec![0.0, 0.0],
                    weights: vec![1.0, -1.0],
                }),
            }],
            BTreeSet::new(),
        )
        .unwrap()
    }

    fn names(model: &CostModel) -> Vec<EntityId> {
        model.embedding().names().to_vec()
    }

    #[test]
    fn unique_minimum_ranks_first() {
        let model = line_model(&[("p", 0.0), ("q", 1.0), ("r", 2.0)]);
        let t = Instance::from_names("Same", &[("a", "q"), ("b", "q")]).unwrap();
        let rank = rank_entity(&model, Protocol::Instance, &t, &RoleId::new("a"), &names(&model), TieRule::Optimistic)
            .unwrap();
        assert_eq!(rank, 1);
    }

    #[test]
    fn constant_cost_ties() {
        let model = line_model(&[("p", 0.0), ("q", 0.0), ("r", 0.0)]);
        let t = Instance::from_names("Same", &[("a", "r"), ("b", "p")]).unwrap();
        let role = RoleId::new("a");
        let c = names(&model);
        assert_eq!(rank_entity(&model, Protocol::Instance, &t, &role, &c, TieRule::Optimistic).unwrap(), 1);
        assert_eq!(rank_entity(&model, Protocol::Instance, &t, &role, &c, TieRule::Pessimistic).unwrap(), 3);
    }

    #[test]
    fn truth_must_be_candidate() {
        let model = line_model(&[("p", 0.0), ("q", 1.0)]);
        let t = Instance::from_names("Same", &[("a", "q"), ("b", "q")]).unwrap();
        let err = rank_entity(&model, Protocol::Instance, &t, &RoleId::new("a"), &[EntityId::new("p")], TieRule::Optimistic);
        assert!(matches!(err, Err(Error::TruthNotCandidate(_))));
    }

    #[test]
    fn rank_from_costs_rules() {
        let costs = [0.5, 0.1, 0.5, 0.9];
        assert_eq!(rank_from_costs(&costs, 0, TieRule::Optimistic), 2);
        assert_eq!(rank_from_costs(&costs, 0, TieRule::Pessimistic), 3);
        assert_eq!(rank_from_costs(&costs, 1, TieRule::Pessimistic), 1);
    }

    #[test]
    fn perfect_model_scores_full_marks() {
        let model = line_model(&[("p", 0.0), ("q", 1.0), ("r", 2.0)]);
        let test = InstanceRepresentation::from_instances([
            Instance::from_names("Same", &[("a", "q"), ("b", "q")]).unwrap(),
        ])
        .unwrap();
        let report = evaluate(&model, &test, Protocol::Instance, &EvalOptions::default()).unwrap();
        assert_eq!(report.hit_at_10, 1.0);
        assert_eq!(report.mean_rank, 1.0);
        assert_eq!(report.records.len(), 2);
        assert_eq!(report.label, "m-TransH");
    }

    #[test]
    fn protocol_mismatch_rejected() {
        let model = line_model(&[("p", 0.0), ("q", 1.0)]);
        let test = InstanceRepresentation::new();
        assert!(matches!(
            evaluate(&model, &test, Protocol::Triple, &EvalOptions::default()),
            Err(Error::Incompatible(_))
        ));
    }

    #[test]
    fn labels() {
        assert_eq!(experiment_label(ModelKind::TransH, Protocol::Triple).unwrap(), "TransH:triple");
        assert_eq!(experiment_label(ModelKind::TransH, Protocol::Instance).unwrap(), "TransH:inst");
        assert_eq!(experiment_label(ModelKind::MTransH, Protocol::Instance).unwrap(), "m-TransH");
        assert_eq!(experiment_label(ModelKind::MTransHId, Protocol::InstanceId).unwrap(), "m-TransH:ID");
        assert!(experiment_label(ModelKind::MTransH, Protocol::Triple).is_err());
    }

    #[test]
    fn binary_only_breakdown_equals_overall() {
        let model = line_model(&[("p", 0.0), ("q", 1.0), ("r", 2.0), ("s", 2.5)]);
        let test = InstanceRepresentation::from_instances([
            Instance::from_names("Same", &[("a", "q"), ("b", "r")]).unwrap(),
            Instance::from_names("Same", &[("a", "p"), ("b", "p")]).unwrap(),
        ])
        .unwrap();
        let report = evaluate(&model, &test, Protocol::Instance, &EvalOptions::default()).unwrap();
        let folds = breakdown_by_fold(&report).unwrap();
        assert_eq!(folds.len(), 1);
        assert_eq!(folds[&2].hit_at_10, report.hit_at_10);
        assert_eq!(folds[&2].mean_rank, report.mean_rank);
    }

    #[test]
    fn missing_provenance_is_error() {
        let report = RankingReport {
            label: "TransH:triple",
            protocol: Protocol::Triple,
            dim: 2,
            tie: TieRule::Optimistic,
            sampling: None,
            candidate_count: 3,
            records: vec![QueryRecord {
                item: 0,
                rel_type: RelTypeId::new("R.a.b"),
                fold: None,
                role: RoleId::new("a"),
                rank: 1,
            }],
            hit_at_10: 1.0,
            mean_rank: 1.0,
        };
        assert!(matches!(breakdown_by_fold(&report), Err(Error::MissingProvenance(_))));
    }

    #[test]
    fn export_round_trips() {
        let model = line_model(&[("p", 0.0), ("q", 1.0), ("r", 2.0)]);
        let test = InstanceRepresentation::from_instances([
            Instance::from_names("Same", &[("a", "q"), ("b", "r")]).unwrap(),
        ])
        .unwrap();
        let report = evaluate(&model, &test, Protocol::Instance, &EvalOptions::default()).unwrap();
        let parsed = parse_export(&report.export()).unwrap();
        assert_eq!(parsed.records, report.records);
        assert_eq!(parsed.hit_at_10, report.hit_at_10);
        assert_eq!(parsed.mean_rank, report.mean_rank);
        assert_eq!(parsed.per_fold, breakdown_by_fold(&report).unwrap());
    }
}
