//! Analytic gradients of the cost functions in [`super::cost`].
//!
//! With `v` the residual inside the squared norm and `P = I - n nᵀ`:
//! `∂f/∂t = 2 a P v`, `∂f/∂b = 2 v`, `∂f/∂a(ρ) = 2 vᵀ P t(ρ)` and
//! `∂f/∂n = -2 ((vᵀn) w + (wᵀn) v)` where `w` is the (weighted) sum of the
//! raw entity vectors.

use super::cost::{dot, project_into};
use super::{MTransHParams, TransHParams};
use crate::symbol::RoleId;

#[derive(Debug, Clone, PartialEq)]
pub struct TransHGradient {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub normal: Vec<f64>,
    pub translation: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MTransHGradient {
    /// One gradient per role vector, aligned with the input.
    pub vectors: Vec<Vec<f64>>,
    pub normal: Vec<f64>,
    pub bias: Vec<f64>,
    pub weights: Vec<f64>,
}

fn normal_gradient(v: &[f64], w: &[f64], n: &[f64]) -> Vec<f64> {
    let vn = dot(v, n);
    let wn = dot(w, n);
    v.iter()
        .zip(w)
        .map(|(vi, wi)| -2.0 * (vn * wi + wn * vi))
        .collect()
}

fn projected_twice(v: &[f64], n: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; v.len()];
    project_into(n, v, &mut out);
    out.iter_mut().for_each(|g| *g *= 2.0);
    out
}

pub fn transh_gradient(params: &TransHParams, x: &[f64], y: &[f64]) -> TransHGradient {
    let n = &params.normal;
    let z: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    let sz = dot(&z, n);
    let v: Vec<f64> = (0..n.len())
        .map(|i| z[i] - sz * n[i] + params.translation[i])
        .collect();
    let gx = projected_twice(&v, n);
    let gy = gx.iter().map(|g| -g).collect();
    TransHGradient {
        x: gx,
        y: gy,
        normal: normal_gradient(&v, &z, n),
        translation: v.iter().map(|vi| 2.0 * vi).collect(),
    }
}

pub fn mtransh_gradient(params: &MTransHParams, vectors: &[&[f64]]) -> MTransHGradient {
    let n = &params.normal;
    let dim = n.len();
    let mut w = vec![0.0; dim];
    for (t, a) in vectors.iter().zip(&params.weights) {
        for (wi, ti) in w.iter_mut().zip(t.iter()) {
            *wi += a * ti;
        }
    }
    let sw = dot(&w, n);
    let v: Vec<f64> = (0..dim).map(|i| w[i] - sw * n[i] + params.bias[i]).collect();
    let common = projected_twice(&v, n);
    let per_vector = params
        .weights
        .iter()
        .map(|a| common.iter().map(|g| a * g).collect())
        .collect();
    let mut projected = vec![0.0; dim];
    let weights = vectors
        .iter()
        .map(|t| {
            project_into(n, t, &mut projected);
            2.0 * dot(&v, &projected)
        })
        .collect();
    MTransHGradient {
        vectors: per_vector,
        normal: normal_gradient(&v, &w, n),
        bias: v.iter().map(|vi| 2.0 * vi).collect(),
        weights,
    }
}

/// Gradient of the decomposed cost: per-vector gradients plus one TransH
/// parameter gradient per role pair `(i, j)`, `i < j`.
pub fn decomposed_gradient<'p>(
    roles: &[RoleId],
    vectors: &[&[f64]],
    pair_params: impl Fn(&RoleId, &RoleId) -> Option<&'p TransHParams>,
) -> Option<(Vec<Vec<f64>>, Vec<((usize, usize), TransHGradient)>)> {
    let dim = vectors.first().map_or(0, |v| v.len());
    let mut per_vector = vec![vec![0.0; dim]; vectors.len()];
    let mut pairs = Vec::new();
    for i in 0..roles.len() {
        for j in i + 1..roles.len() {
            let params = pair_params(&roles[i], &roles[j])?;
            let g = transh_gradient(params, vectors[i], vectors[j]);
            for k in 0..dim {
                per_vector[i][k] += g.x[k];
                per_vector[j][k] += g.y[k];
            }
            pairs.push(((i, j), g));
        }
    }
    Some((per_vector, pairs))
}

/// Gradients of the TransH penalty w.r.t. `(n, d)`.
pub fn transh_penalty_gradient(params: &TransHParams) -> (Vec<f64>, Vec<f64>) {
    let n = &params.normal;
    let d = &params.translation;
    let unit = dot(n, n) - 1.0;
    let ortho = dot(n, d);
    let gn = n
        .iter()
        .zip(d)
        .map(|(ni, di)| 4.0 * unit * ni + 2.0 * ortho * di)
        .collect();
    let gd = n.iter().map(|ni| 2.0 * ortho * ni).collect();
    (gn, gd)
}

/// Gradients of the m-TransH penalty w.r.t. `(n, b)`.
pub fn mtransh_penalty_gradient(params: &MTransHParams) -> (Vec<f64>, Vec<f64>) {
    let n = &params.normal;
    let b = &params.bias;
    let unit_n = dot(n, n) - 1.0;
    let unit_b = dot(b, b) - 1.0;
    let ortho = dot(n, b);
    let gn = n
        .iter()
        .zip(b)
        .map(|(ni, bi)| 4.0 * unit_n * ni + 2.0 * ortho * bi)
        .collect();
    let gb = n
        .iter()
        .zip(b)
        .map(|(ni, bi)| 4.0 * unit_b * bi + 2.0 * ortho * ni)
        .collect();
    (gn, gb)
}
