//! Embedding tables, relation parameters and the cost model.

pub mod cost;
pub mod grad;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::convert::triple_type;
use crate::error::{Error, Result};
use crate::kb::Instance;
use crate::symbol::{EntityId, RelTypeId, RoleId};

pub use cost::{
    constraint_penalty, decomposed_cost, mtransh_cost, mtransh_penalty, project, relation_penalty,
    transh_cost, transh_penalty,
};
pub use grad::{
    decomposed_gradient, mtransh_gradient, mtransh_penalty_gradient, transh_gradient,
    transh_penalty_gradient, MTransHGradient, TransHGradient,
};

/// Entity embeddings stored row-major in one buffer.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    dim: usize,
    names: Vec<EntityId>,
    index: HashMap<EntityId, usize>,
    data: Vec<f64>,
}

impl EmbeddingTable {
    pub fn new(dim: usize) -> Self {
        EmbeddingTable {
            dim,
            names: Vec::new(),
            index: HashMap::new(),
            data: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Appends (or overwrites) an entity's vector; returns its row.
    pub fn insert(&mut self, entity: EntityId, vector: &[f64]) -> Result<usize> {
        cost::check_dim(self.dim, vector.len())?;
        if let Some(bad) = vector.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("embedding of `{entity}` has {bad}")));
        }
        if let Some(&row) = self.index.get(&entity) {
            self.row_mut(row).copy_from_slice(vector);
            return Ok(row);
        }
        let row = self.names.len();
        self.index.insert(entity.clone(), row);
        self.names.push(entity);
        self.data.extend_from_slice(vector);
        Ok(row)
    }

    pub fn index_of(&self, entity: &EntityId) -> Option<usize> {
        self.index.get(entity).copied()
    }

    pub fn get(&self, entity: &EntityId) -> Option<&[f64]> {
        self.index_of(entity).map(|row| self.row(row))
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.dim..(row + 1) * self.dim]
    }

    pub fn row_mut(&mut self, row: usize) -> &mut [f64] {
        &mut self.data[row * self.dim..(row + 1) * self.dim]
    }

    pub fn name(&self, row: usize) -> &EntityId {
        &self.names[row]
    }

    pub fn names(&self) -> &[EntityId] {
        &self.names
    }
}

/// TransH parameters: hyperplane normal and in-plane translation.
#[derive(Debug, Clone, PartialEq)]
pub struct TransHParams {
    pub normal: Vec<f64>,
    pub translation: Vec<f64>,
}

/// m-TransH parameters: normal, bias and one weight per role.
#[derive(Debug, Clone, PartialEq)]
pub struct MTransHParams {
    pub normal: Vec<f64>,
    pub bias: Vec<f64>,
    /// Aligned with the relation's roles in canonical order.
    pub weights: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RelationParams {
    TransH(TransHParams),
    MTransH(MTransHParams),
}

impl RelationParams {
    pub fn normal(&self) -> &[f64] {
        match self {
            RelationParams::TransH(p) => &p.normal,
            RelationParams::MTransH(p) => &p.normal,
        }
    }

    /// `d_r` for TransH, `b_r` for m-TransH.
    pub fn offset(&self) -> &[f64] {
        match self {
            RelationParams::TransH(p) => &p.translation,
            RelationParams::MTransH(p) => &p.bias,
        }
    }

    /// Deviation from unit length of the normal, `|‖n‖ - 1|`.
    pub fn unit_deviation(&self) -> f64 {
        (cost::squared_norm(self.normal()).sqrt() - 1.0).abs()
    }

    /// `|nᵀd|` or `|nᵀb|`.
    pub fn orthogonality_deviation(&self) -> f64 {
        cost::dot(self.normal(), self.offset()).abs()
    }

    fn parts_mut(&mut self) -> (&mut Vec<f64>, &mut Vec<f64>, Option<&mut Vec<f64>>) {
        match self {
            RelationParams::TransH(p) => (&mut p.normal, &mut p.translation, None),
            RelationParams::MTransH(p) => (&mut p.normal, &mut p.bias, Some(&mut p.weights)),
        }
    }

    /// Hard version of the soft constraints: unit normal, offset orthogonal to
    /// it, and (m-TransH) unit bias.
    pub fn enforce_constraints(&mut self) {
        let is_mtransh = matches!(self, RelationParams::MTransH(_));
        let (normal, offset, _) = self.parts_mut();
        normalize(normal);
        let s = cost::dot(offset, normal);
        for (o, n) in offset.iter_mut().zip(normal.iter()) {
            *o -= s * n;
        }
        if is_mtransh {
            normalize(offset);
        }
    }

    fn is_finite(&self) -> bool {
        match self {
            RelationParams::TransH(p) => p.normal.iter().chain(&p.translation).all(|v| v.is_finite()),
            RelationParams::MTransH(p) => p
                .normal
                .iter()
                .chain(&p.bias)
                .chain(&p.weights)
                .all(|v| v.is_finite()),
        }
    }
}

pub(crate) fn normalize(v: &mut [f64]) {
    let norm = cost::squared_norm(v).sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationModel {
    pub rel_type: RelTypeId,
    /// Canonical role order; parameter vectors that are per-role follow it.
    pub roles: Vec<RoleId>,
    pub params: RelationParams,
}

/// Which of the model families a [`CostModel`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelKind {
    /// Binary TransH on triples (also scored per instance via decomposition).
    TransH,
    /// m-TransH on instances without fact IDs.
    MTransH,
    /// m-TransH on ID-tagged instances; FACT-ID is an ordinary role.
    MTransHId,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::TransH => "transh",
            ModelKind::MTransH => "m-transh",
            ModelKind::MTransHId => "m-transh-id",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "transh" => Some(ModelKind::TransH),
            "m-transh" => Some(ModelKind::MTransH),
            "m-transh-id" => Some(ModelKind::MTransHId),
            _ => None,
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An instance resolved to dense indices: relation row plus one entity row
/// per role, in the relation's role order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DenseItem {
    pub relation: usize,
    pub entities: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParamGradient {
    pub normal: Vec<f64>,
    /// Gradient w.r.t. `d_r` (TransH) or `b_r` (m-TransH).
    pub offset: Vec<f64>,
    /// m-TransH only.
    pub weights: Option<Vec<f64>>,
}

impl ParamGradient {
    fn zeros(params: &RelationParams) -> Self {
        let dim = params.normal().len();
        ParamGradient {
            normal: vec![0.0; dim],
            offset: vec![0.0; dim],
            weights: match params {
                RelationParams::TransH(_) => None,
                RelationParams::MTransH(p) => Some(vec![0.0; p.weights.len()]),
            },
        }
    }

    fn is_zero(&self) -> bool {
        self.normal
            .iter()
            .chain(&self.offset)
            .chain(self.weights.iter().flatten())
            .all(|v| *v == 0.0)
    }
}

/// Gradient of one item's cost; entities or relations whose gradient is
/// identically zero are left out.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SparseGradient {
    pub entities: BTreeMap<EntityId, Vec<f64>>,
    pub relations: BTreeMap<RelTypeId, ParamGradient>,
}

/// Accumulates gradients by dense row.
#[derive(Debug, Default)]
pub struct GradBuffer {
    pub(crate) entities: HashMap<usize, Vec<f64>>,
    pub(crate) relations: HashMap<usize, ParamGradient>,
}

impl GradBuffer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn clear(&mut self) {
        self.entities.clear();
        self.relations.clear();
    }

    pub fn is_empty(&self) -> bool {
        self.entities.is_empty() && self.relations.is_empty()
    }

    fn entity(&mut self, row: usize, dim: usize) -> &mut Vec<f64> {
        self.entities.entry(row).or_insert_with(|| vec![0.0; dim])
    }

    fn relation(&mut self, row: usize, params: &RelationParams) -> &mut ParamGradient {
        self.relations
            .entry(row)
            .or_insert_with(|| ParamGradient::zeros(params))
    }

    pub(crate) fn touched_relations(&self) -> Vec<usize> {
        let mut rows: Vec<usize> = self.relations.keys().copied().collect();
        rows.sort_unstable();
        rows
    }
}

fn axpy(scale: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += scale * xi;
    }
}

/// Entity embeddings plus per-relation parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct CostModel {
    kind: ModelKind,
    embedding: EmbeddingTable,
    relations: Vec<RelationModel>,
    relation_index: HashMap<RelTypeId, usize>,
    fact_ids: BTreeSet<EntityId>,
}

impl CostModel {
    /// Assembles a model. Every relation's parameters must match the kind
    /// (TransH relations binary) and the embedding dimension.
    pub fn new(
        kind: ModelKind,
        embedding: EmbeddingTable,
        relations: Vec<RelationModel>,
        fact_ids: BTreeSet<EntityId>,
    ) -> Result<Self> {
        let dim = embedding.dim();
        let mut relation_index = HashMap::new();
        for (row, rel) in relations.iter().enumerate() {
            cost::check_dim(dim, rel.params.normal().len())?;
            cost::check_dim(dim, rel.params.offset().len())?;
            let mut sorted = rel.roles.clone();
            sorted.sort();
            sorted.dedup();
            if sorted != rel.roles {
                return Err(Error::RoleMismatch {
                    rel: rel.rel_type.to_string(),
                    reason: "roles must be sorted and distinct".into(),
                });
            }
            match (&rel.params, kind) {
                (RelationParams::TransH(_), ModelKind::TransH) => {
                    if rel.roles.len() != 2 {
                        return Err(Error::RoleMismatch {
                            rel: rel.rel_type.to_string(),
                            reason: format!("TransH needs 2 roles, got {}", rel.roles.len()),
                        });
                    }
                }
                (RelationParams::MTransH(p), ModelKind::MTransH | ModelKind::MTransHId) => {
                    if p.weights.len() != rel.roles.len() {
                        return Err(Error::RoleMismatch {
                            rel: rel.rel_type.to_string(),
                            reason: format!(
                                "{} weights for {} roles",
                                p.weights.len(),
                                rel.roles.len()
                            ),
                        });
                    }
                }
                _ => {
                    return Err(Error::Incompatible(format!(
                        "relation `{}` parameters do not fit a {kind} model",
                        rel.rel_type
                    )))
                }
            }
            if relation_index.insert(rel.rel_type.clone(), row).is_some() {
                return Err(Error::Data(format!("relation `{}` given twice", rel.rel_type)));
            }
        }
        Ok(CostModel {
            kind,
            embedding,
            relations,
            relation_index,
            fact_ids,
        })
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.embedding.dim()
    }

    pub fn embedding(&self) -> &EmbeddingTable {
        &self.embedding
    }

    pub fn embedding_mut(&mut self) -> &mut EmbeddingTable {
        &mut self.embedding
    }

    pub fn relations(&self) -> &[RelationModel] {
        &self.relations
    }

    /// Parameters may be changed in place; roles and kinds may not.
    pub fn params_mut(&mut self, row: usize) -> &mut RelationParams {
        &mut self.relations[row].params
    }

    pub fn relation_row(&self, rel: &RelTypeId) -> Option<usize> {
        self.relation_index.get(rel).copied()
    }

    pub fn relation(&self, rel: &RelTypeId) -> Option<&RelationModel> {
        self.relation_row(rel).map(|row| &self.relations[row])
    }

    /// Entities that only name facts; they are embedded but never ranked.
    pub fn fact_ids(&self) -> &BTreeSet<EntityId> {
        &self.fact_ids
    }

    /// Rows of all entities that are ranking candidates, in row order.
    pub fn candidate_rows(&self) -> Vec<usize> {
        (0..self.embedding.len())
            .filter(|&row| !self.fact_ids.contains(self.embedding.name(row)))
            .collect()
    }

    pub fn constraint_penalty(&self, weight: f64) -> f64 {
        constraint_penalty(self.relations.iter().map(|r| &r.params), weight)
    }

    pub fn is_finite(&self) -> bool {
        self.relations.iter().all(|r| r.params.is_finite())
            && (0..self.embedding.len()).all(|row| self.embedding.row(row).iter().all(|v| v.is_finite()))
    }

    /// Resolves an instance against the relation's roles and the embedding.
    pub fn densify(&self, item: &Instance) -> Result<DenseItem> {
        let relation = self
            .relation_row(item.rel_type())
            .ok_or_else(|| Error::UnknownRelation(item.rel_type().to_string()))?;
        let rel = &self.relations[relation];
        if item.assignment().len() != rel.roles.len()
            || !item.roles().zip(&rel.roles).all(|(a, b)| a == b)
        {
            return Err(Error::RoleMismatch {
                rel: rel.rel_type.to_string(),
                reason: format!("instance {item} does not cover roles {:?}", rel.roles),
            });
        }
        let entities = item
            .entities()
            .map(|e| {
                self.embedding
                    .index_of(e)
                    .ok_or_else(|| Error::UnknownEntity(e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DenseItem { relation, entities })
    }

    /// Cost of a resolved item under its own relation's parameters.
    pub fn dense_cost(&self, item: &DenseItem) -> f64 {
        match &self.relations[item.relation].params {
            RelationParams::TransH(p) => cost::transh_cost_unchecked(
                p,
                self.embedding.row(item.entities[0]),
                self.embedding.row(item.entities[1]),
            ),
            RelationParams::MTransH(p) => {
                let vectors: Vec<&[f64]> =
                    item.entities.iter().map(|&e| self.embedding.row(e)).collect();
                cost::mtransh_cost_unchecked(p, &vectors)
            }
        }
    }

    /// Adds `scale · ∇cost(item)` to the buffer.
    pub fn accumulate_gradient(&self, item: &DenseItem, scale: f64, buf: &mut GradBuffer) {
        let dim = self.dim();
        let params = &self.relations[item.relation].params;
        match params {
            RelationParams::TransH(p) => {
                let (x, y) = (item.entities[0], item.entities[1]);
                let g = transh_gradient(p, self.embedding.row(x), self.embedding.row(y));
                axpy(scale, &g.x, buf.entity(x, dim));
                axpy(scale, &g.y, buf.entity(y, dim));
                let rg = buf.relation(item.relation, params);
                axpy(scale, &g.normal, &mut rg.normal);
                axpy(scale, &g.translation, &mut rg.offset);
            }
            RelationParams::MTransH(p) => {
                let vectors: Vec<&[f64]> =
                    item.entities.iter().map(|&e| self.embedding.row(e)).collect();
                let g = mtransh_gradient(p, &vectors);
                for (&e, ge) in item.entities.iter().zip(&g.vectors) {
                    axpy(scale, ge, buf.entity(e, dim));
                }
                let rg = buf.relation(item.relation, params);
                axpy(scale, &g.normal, &mut rg.normal);
                axpy(scale, &g.bias, &mut rg.offset);
                if let Some(w) = rg.weights.as_mut() {
                    axpy(scale, &g.weights, w);
                }
            }
        }
    }

    /// Adds `weight · ∇penalty` for one relation.
    pub fn accumulate_penalty_gradient(&self, relation: usize, weight: f64, buf: &mut GradBuffer) {
        let params = &self.relations[relation].params;
        let (gn, go) = match params {
            RelationParams::TransH(p) => transh_penalty_gradient(p),
            RelationParams::MTransH(p) => mtransh_penalty_gradient(p),
        };
        let rg = buf.relation(relation, params);
        axpy(weight, &gn, &mut rg.normal);
        axpy(weight, &go, &mut rg.offset);
    }

    /// Applies `θ -= lr · g` for everything in the buffer. Role weights are
    /// left alone when `freeze_weights` is set. Returns `false` (and leaves
    /// the model untouched) if the step would produce a non-finite value.
    pub fn apply_gradient(&mut self, buf: &GradBuffer, lr: f64, freeze_weights: bool) -> bool {
        let dim = self.dim();
        let step_ok = buf.entities.iter().all(|(&row, g)| {
            self.embedding
                .row(row)
                .iter()
                .zip(g)
                .all(|(v, gi)| (v - lr * gi).is_finite())
        }) && buf.relations.iter().all(|(&row, g)| {
            let params = &self.relations[row].params;
            params.normal().iter().zip(&g.normal).all(|(v, gi)| (v - lr * gi).is_finite())
                && params.offset().iter().zip(&g.offset).all(|(v, gi)| (v - lr * gi).is_finite())
                && match (params, &g.weights) {
                    (RelationParams::MTransH(p), Some(gw)) => {
                        p.weights.iter().zip(gw).all(|(v, gi)| (v - lr * gi).is_finite())
                    }
                    _ => true,
                }
        });
        if !step_ok {
            return false;
        }
        for (&row, g) in &buf.entities {
            axpy(-lr, g, self.embedding.row_mut(row));
        }
        for (&row, g) in &buf.relations {
            let (normal, offset, weights) = self.relations[row].params.parts_mut();
            axpy(-lr, &g.normal, normal);
            axpy(-lr, &g.offset, offset);
            if let (Some(w), Some(gw), false) = (weights, &g.weights, freeze_weights) {
                axpy(-lr, gw, w);
            }
        }
        debug_assert_eq!(self.embedding.dim(), dim);
        true
    }

    /// Cost of an item under the model's native scoring (TransH on triples,
    /// m-TransH on instances).
    pub fn cost(&self, item: &Instance) -> Result<f64> {
        Ok(self.dense_cost(&self.densify(item)?))
    }

    /// Analytic gradient of `sign · cost(item)`.
    pub fn gradients(&self, item: &Instance, sign: f64) -> Result<SparseGradient> {
        let dense = self.densify(item)?;
        let mut buf = GradBuffer::new();
        self.accumulate_gradient(&dense, sign, &mut buf);
        Ok(self.sparse(buf))
    }

    fn sparse(&self, buf: GradBuffer) -> SparseGradient {
        let entities = buf
            .entities
            .into_iter()
            .filter(|(_, g)| g.iter().any(|v| *v != 0.0))
            .map(|(row, g)| (self.embedding.name(row).clone(), g))
            .collect();
        let relations = buf
            .relations
            .into_iter()
            .filter(|(_, g)| !g.is_zero())
            .map(|(row, g)| (self.relations[row].rel_type.clone(), g))
            .collect();
        SparseGradient {
            entities,
            relations,
        }
    }

    /// TransH parameters for the role pair of `rel`, i.e. those of the triple
    /// type S2C produces for that pair.
    pub fn pair_params(&self, rel: &RelTypeId, first: &RoleId, second: &RoleId) -> Option<&TransHParams> {
        let model = self.relation(&triple_type(rel, first, second))?;
        match &model.params {
            RelationParams::TransH(p) => Some(p),
            RelationParams::MTransH(_) => None,
        }
    }

    /// Instance-level cost of a TransH model through the decomposition
    /// framework: the sum of the pair costs over all role pairs.
    pub fn decomposed_cost(&self, item: &Instance) -> Result<f64> {
        if self.kind != ModelKind::TransH {
            return Err(Error::Incompatible(format!(
                "decomposed cost needs a TransH model, not {}",
                self.kind
            )));
        }
        let roles: Vec<RoleId> = item.roles().cloned().collect();
        let vectors = item
            .entities()
            .map(|e| {
                self.embedding
                    .get(e)
                    .ok_or_else(|| Error::UnknownEntity(e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        decomposed_cost(&roles, &vectors, |a, b| self.pair_params(item.rel_type(), a, b)).map_err(
            |err| match err {
                Error::MissingPairParams { first, second, .. } => Error::MissingPairParams {
                    rel: item.rel_type().to_string(),
                    first,
                    second,
                },
                other => other,
            },
        )
    }

    /// Gradient of the decomposed instance cost, spread over the entity
    /// vectors and the parameters of every pair's triple type.
    pub fn decomposed_gradients(&self, item: &Instance, sign: f64) -> Result<SparseGradient> {
        let roles: Vec<RoleId> = item.roles().cloned().collect();
        let names: Vec<&EntityId> = item.entities().collect();
        let vectors = names
            .iter()
            .map(|e| {
                self.embedding
                    .get(e)
                    .ok_or_else(|| Error::UnknownEntity(e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        let (per_vector, pairs) =
            decomposed_gradient(&roles, &vectors, |a, b| self.pair_params(item.rel_type(), a, b))
                .ok_or_else(|| Error::MissingPairParams {
                    rel: item.rel_type().to_string(),
                    first: String::new(),
                    second: String::new(),
                })?;
        let mut out = SparseGradient::default();
        for (name, g) in names.iter().zip(per_vector) {
            let slot = out
                .entities
                .entry((*name).clone())
                .or_insert_with(|| vec![0.0; g.len()]);
            axpy(sign, &g, slot);
        }
        for ((i, j), g) in pairs {
            let ty = triple_type(item.rel_type(), &roles[i], &roles[j]);
            out.relations.insert(
                ty,
                ParamGradient {
                    normal: g.normal.iter().map(|v| sign * v).collect(),
                    offset: g.translation.iter().map(|v| sign * v).collect(),
                    weights: None,
                },
            );
        }
        out.entities.retain(|_, g| g.iter().any(|v| *v != 0.0));
        out.relations.retain(|_, g| !g.is_zero());
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_mtransh() -> CostModel {
        let mut table = EmbeddingTable::new(2);
        table.insert(EntityId::new("x"), &[0.0, 0.0]).unwrap();
        table.insert(EntityId::new("y"), &[1.0, 0.0]).unwrap();
        CostModel::new(
            ModelKind::MTransH,
            table,
            vec![RelationModel {
                rel_type: RelTypeId::new("R"),
                roles: vec![RoleId::new("a"), RoleId::new("b")],
                params: RelationParams::MTransH(MTransHParams {
                    normal: vec![0.0, 1.0],
                    bias: vec![1.0, 0.0],
                    weights: vec![1.0, -1.0],
                }),
            }],
            BTreeSet::new(),
        )
        .unwrap()
    }

    #[test]
    fn model_cost_and_zero_gradient_at_minimum() {
        let model = tiny_mtransh();
        let t = Instance::from_names("R", &[("a", "x"), ("b", "y")]).unwrap();
        assert_eq!(model.cost(&t).unwrap(), 0.0);
        let g = model.gradients(&t, 1.0).unwrap();
        assert!(g.entities.is_empty());
        // weights still have a gradient through P(t)
        assert!(g.relations.values().all(|r| r.normal.iter().all(|v| *v == 0.0)));
    }

    #[test]
    fn unknown_ids_are_errors() {
        let model = tiny_mtransh();
        let t = Instance::from_names("S", &[("a", "x"), ("b", "y")]).unwrap();
        assert!(matches!(model.cost(&t), Err(Error::UnknownRelation(_))));
        let t = Instance::from_names("R", &[("a", "x"), ("b", "zz")]).unwrap();
        assert!(matches!(model.cost(&t), Err(Error::UnknownEntity(_))));
        let t = Instance::from_names("R", &[("a", "x"), ("c", "y")]).unwrap();
        assert!(matches!(model.cost(&t), Err(Error::RoleMismatch { .. })));
    }

    #[test]
    fn kind_mismatch_rejected() {
        let table = EmbeddingTable::new(2);
        let err = CostModel::new(
            ModelKind::TransH,
            table,
            vec![RelationModel {
                rel_type: RelTypeId::new("R"),
                roles: vec![RoleId::new("a"), RoleId::new("b")],
                params: RelationParams::MTransH(MTransHParams {
                    normal: vec![0.0, 1.0],
                    bias: vec![1.0, 0.0],
                    weights: vec![1.0, -1.0],
                }),
            }],
            BTreeSet::new(),
        );
        assert!(matches!(err, Err(Error::Incompatible(_))));
    }

    #[test]
    fn enforce_constraints_normalizes() {
        let mut p = RelationParams::MTransH(MTransHParams {
            normal: vec![2.0, 0.0],
            bias: vec![1.0, 3.0],
            weights: vec![1.0, -1.0],
        });
        p.enforce_constraints();
        assert!(p.unit_deviation() < 1e-12);
        assert!(p.orthogonality_deviation() < 1e-12);
        assert_eq!(p.offset(), &[0.0, 1.0]);
    }

    #[test]
    fn rejected_step_leaves_model_untouched() {
        let mut model = tiny_mtransh();
        let before = model.clone();
        let mut buf = GradBuffer::new();
        buf.entities.insert(0, vec![f64::INFINITY, 0.0]);
        assert!(!model.apply_gradient(&buf, 0.1, false));
        assert_eq!(model, before);
    }
}
