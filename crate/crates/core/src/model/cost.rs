//! Cost functions on raw vectors.
//!
//! These take slices rather than model handles so the same formulas serve the
//! trainer, the evaluator and the tests.

use crate::error::{Error, Result};
use crate::symbol::RoleId;

use super::{MTransHParams, RelationParams, TransHParams};

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn squared_norm(a: &[f64]) -> f64 {
    dot(a, a)
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}

pub(crate) fn project_into(normal: &[f64], z: &[f64], out: &mut [f64]) {
    let s = dot(z, normal);
    for ((o, zi), ni) in out.iter_mut().zip(z).zip(normal) {
        *o = zi - s * ni;
    }
}

/// Projection of `z` onto the hyperplane with normal `normal`:
/// `z - (zᵀn) n`. The normal is used as given; it is only a true orthogonal
/// projection when `‖n‖ = 1`.
pub fn project(normal: &[f64], z: &[f64]) -> Result<Vec<f64>> {
    check_dim(normal.len(), z.len())?;
    let mut out = vec![0.0; z.len()];
    project_into(normal, z, &mut out);
    Ok(out)
}

/// `‖P_n(x) + d - P_n(y)‖²`.
pub fn transh_cost(params: &TransHParams, x: &[f64], y: &[f64]) -> Result<f64> {
    let dim = params.normal.len();
    check_dim(dim, params.translation.len())?;
    check_dim(dim, x.len())?;
    check_dim(dim, y.len())?;
    Ok(transh_cost_unchecked(params, x, y))
}

pub(crate) fn transh_cost_unchecked(params: &TransHParams, x: &[f64], y: &[f64]) -> f64 {
    let n = &params.normal;
    let sx = dot(x, n);
    let sy = dot(y, n);
    let mut total = 0.0;
    for i in 0..n.len() {
        let v = (x[i] - sx * n[i]) + params.translation[i] - (y[i] - sy * n[i]);
        total += v * v;
    }
    total
}

/// `‖Σ_ρ a(ρ) P_n(t(ρ)) + b‖²` with `vectors` aligned to `params.weights`.
pub fn mtransh_cost(params: &MTransHParams, vectors: &[&[f64]]) -> Result<f64> {
    if vectors.len() != params.weights.len() {
        return Err(Error::RoleMismatch {
            rel: String::new(),
            reason: format!(
                "{} role vectors for {} weights",
                vectors.len(),
                params.weights.len()
            ),
        });
    }
    let dim = params.normal.len();
    check_dim(dim, params.bias.len())?;
    for v in vectors {
        check_dim(dim, v.len())?;
    }
    Ok(mtransh_cost_unchecked(params, vectors))
}

pub(crate) fn mtransh_residual(params: &MTransHParams, vectors: &[&[f64]]) -> Vec<f64> {
    let n = &params.normal;
    let mut v = params.bias.clone();
    let mut projected = vec![0.0; n.len()];
    for (t, a) in vectors.iter().zip(&params.weights) {
        project_into(n, t, &mut projected);
        for (vi, pi) in v.iter_mut().zip(&projected) {
            *vi += a * pi;
        }
    }
    v
}

pub(crate) fn mtransh_cost_unchecked(params: &MTransHParams, vectors: &[&[f64]]) -> f64 {
    squared_norm(&mtransh_residual(params, vectors))
}

/// Decomposition-framework cost: the sum of TransH pair costs over every
/// unordered role pair, pairs visited in canonical role order and each pair
/// oriented so the lexicographically smaller role is the head.
///
/// `roles` must be sorted (schema order) and aligned with `vectors`.
pub fn decomposed_cost<'p>(
    roles: &[RoleId],
    vectors: &[&[f64]],
    pair_params: impl Fn(&RoleId, &RoleId) -> Option<&'p TransHParams>,
) -> Result<f64> {
    if roles.len() != vectors.len() {
        return Err(Error::RoleMismatch {
            rel: String::new(),
            reason: format!("{} roles for {} vectors", roles.len(), vectors.len()),
        });
    }
    let mut total = 0.0;
    for i in 0..roles.len() {
        for j in i + 1..roles.len() {
            let params = pair_params(&roles[i], &roles[j]).ok_or_else(|| Error::MissingPairParams {
                rel: String::new(),
                first: roles[i].to_string(),
                second: roles[j].to_string(),
            })?;
            total += transh_cost(params, vectors[i], vectors[j])?;
        }
    }
    Ok(total)
}

/// `(‖n‖²-1)² + (nᵀd)²`.
pub fn transh_penalty(params: &TransHParams) -> f64 {
    let unit = squared_norm(&params.normal) - 1.0;
    let ortho = dot(&params.normal, &params.translation);
    unit * unit + ortho * ortho
}

/// `(‖n‖²-1)² + (nᵀb)² + (‖b‖²-1)²`.
pub fn mtransh_penalty(params: &MTransHParams) -> f64 {
    let unit_n = squared_norm(&params.normal) - 1.0;
    let ortho = dot(&params.normal, &params.bias);
    let unit_b = squared_norm(&params.bias) - 1.0;
    unit_n * unit_n + ortho * ortho + unit_b * unit_b
}

pub fn relation_penalty(params: &RelationParams) -> f64 {
    match params {
        RelationParams::TransH(p) => transh_penalty(p),
        RelationParams::MTransH(p) => mtransh_penalty(p),
    }
}

/// Weighted sum of the soft unit-length and orthogonality penalties.
pub fn constraint_penalty<'a>(
    params: impl IntoIterator<Item = &'a RelationParams>,
    weight: f64,
) -> f64 {
    weight * params.into_iter().map(relation_penalty).sum::<f64>()
}
