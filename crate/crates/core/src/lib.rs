//! # mpcorner
//!
//! Stable, image-valued representations of candidate decompositions of
//! multiparameter persistence modules, computed from the birth and death
//! corners of their interval summands.
//!
//! * [`model`] - corner presentations, restriction to boxes and lines, fibered barcodes.
//! * [`invariants`] - weights, support volumes and the local interval representations φ_δ.
//! * [`representations`] - the generic combinator, the stable representations
//!   `V_{p,δ}` / `V_{∞,δ}`, and multiparameter landscapes on grids.
//! * [`distances`] - interleaving distances of rectangles and bottleneck matchings.
//! * [`pipeline`] - point cloud → density bifiltration → slice barcodes → vineyard decomposition.
//! * [`experiments`] - convergence, runtime and instability harnesses behind the CLI.
//!
//! With the default `parallel` feature, grid evaluation and experiment
//! fan-out run on rayon; results do not depend on the number of workers.

pub mod distances;
pub mod error;
pub mod experiments;
pub mod invariants;
pub mod io;
pub mod model;
pub mod par;
pub mod pipeline;
pub mod representations;

pub use error::{Error, Result};
pub use invariants::{Phi, PhiKind};
pub use model::{AxisBox, Bar, Barcode, Decomposition, IntervalModule, Point};
pub use representations::{GridImage, GridSpec, ImageNorm};
