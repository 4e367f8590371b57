use std::f64::consts::PI;

use super::PointCloud;
use crate::error::{Error, Result};
use crate::par;

/// Gaussian kernel density estimate
/// `f(q) = (n (2π)^{D/2} h^D)^{-1} Σ_i exp(−‖q − x_i‖² / 2h²)` at every query.
pub fn kde(cloud: &PointCloud, h: f64, queries: &[Vec<f64>]) -> Result<Vec<f64>> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidParameter(format!("bandwidth must be positive, got {h}")));
    }
    let dim = cloud.dim();
    if let Some(q) = queries.iter().find(|q| q.len() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, found: q.len() });
    }
    let norm = 1.0 / (cloud.len() as f64 * (2.0 * PI).powf(dim as f64 / 2.0) * h.powi(dim as i32));
    let inv = 1.0 / (2.0 * h * h);
    Ok(par::map_slice(queries, |q| {
        let s: f64 = cloud
            .points()
            .iter()
            .map(|x| {
                let d2: f64 = x.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum();
                (-d2 * inv).exp()
            })
            .sum();
        norm * s
    }))
}
