//! Point cloud → density bifiltration → slice persistence → vineyard
//! decomposition. Two-parameter only; the representation modules accept any
//! ambient dimension.

mod bifiltration;
mod cloud;
mod kde;
mod persistence;
pub mod synthetic;
mod vineyard;

pub use bifiltration::{build_bifiltration, slice_to_1d, BiFiltration, FilteredComplex1D};
pub use cloud::{load_pointcloud, parse_pointcloud, PointCloud};
pub use kde::kde;
pub use persistence::{persistence_1d, persistence_pairs, PersistencePair};
pub use vineyard::{antidiagonal_basepoints, vineyard_decompose};

use crate::error::{Error, Result};
use crate::model::Decomposition;
use crate::representations::GridSpec;

/// Settings of the end-to-end pipeline.
#[derive(Clone, Debug, PartialEq)]
pub struct PipelineConfig {
    /// Vertices per axis of the triangulated grid.
    pub resolution: [usize; 2],
    /// Gaussian kernel bandwidth.
    pub bandwidth: f64,
    /// Number of diagonal slicing lines.
    pub lines: usize,
    /// Homology degree.
    pub degree: usize,
    /// Margin added around the cloud's bounding box, as a fraction of its extent.
    pub padding: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            resolution: [40, 40],
            bandwidth: 0.1,
            lines: 32,
            degree: 1,
            padding: 0.1,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if self.resolution.iter().any(|&r| r < 2) {
            return Err(Error::InvalidParameter("grid resolution must be at least 2".into()));
        }
        if !(self.bandwidth > 0.0 && self.bandwidth.is_finite()) {
            return Err(Error::InvalidParameter(format!("bandwidth must be positive, got {}", self.bandwidth)));
        }
        if self.lines < 2 {
            return Err(Error::InvalidParameter(format!("at least 2 slicing lines are needed, got {}", self.lines)));
        }
        if !(self.padding >= 0.0 && self.padding.is_finite()) {
            return Err(Error::InvalidParameter("padding must be non-negative".into()));
        }
        Ok(())
    }

    /// Triangulation grid covering the cloud with the configured margin.
    pub fn grid_for(&self, cloud: &PointCloud) -> Result<GridSpec> {
        let (lo, hi) = cloud.bounds();
        let extent = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-9);
        let pad = self.padding * extent;
        // Cell centers sit half a cell inside the bounds; widen so the
        // outermost vertices land on the padded box.
        let span = [hi[0] - lo[0] + 2.0 * pad, hi[1] - lo[1] + 2.0 * pad];
        let half_cell = [
            0.5 * span[0] / (self.resolution[0] - 1) as f64,
            0.5 * span[1] / (self.resolution[1] - 1) as f64,
        ];
        GridSpec::new(
            vec![lo[0] - pad - half_cell[0], lo[1] - pad - half_cell[1]],
            vec![hi[0] + pad + half_cell[0], hi[1] + pad + half_cell[1]],
            self.resolution.to_vec(),
        )
    }
}

/// Runs the whole pipeline on a planar cloud.
pub fn decompose_cloud(cloud: &PointCloud, config: &PipelineConfig) -> Result<Decomposition> {
    config.validate()?;
    let grid = config.grid_for(cloud)?;
    let bif = build_bifiltration(cloud, &grid, config.bandwidth)?;
    vineyard_decompose(&bif, config.degree, config.lines)
}
