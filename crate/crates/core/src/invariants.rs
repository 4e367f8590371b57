//! Scalar invariants of interval modules computed directly from corners.

use crate::error::{Error, Result};
use crate::model::{leq, AxisBox, IntervalModule, Point};

/// Which local interval representation to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PhiKind {
    /// `w(M|R) / δ`: largest diagonal segment inside the local box.
    DiagonalLength,
    /// `vol(supp M ∩ R) / (2δ)ⁿ`.
    Volume,
    /// Largest rectangle inside `supp M ∩ R`, over `(2δ)ⁿ`.
    LargestRectangle,
}

impl PhiKind {
    pub const ALL: [PhiKind; 3] = [
        PhiKind::DiagonalLength,
        PhiKind::Volume,
        PhiKind::LargestRectangle,
    ];

    /// Short CLI tag (`a`, `b`, `c`).
    pub fn tag(self) -> &'static str {
        match self {
            PhiKind::DiagonalLength => "a",
            PhiKind::Volume => "b",
            PhiKind::LargestRectangle => "c",
        }
    }

    pub fn from_tag(tag: &str) -> Option<PhiKind> {
        match tag {
            "a" => Some(PhiKind::DiagonalLength),
            "b" => Some(PhiKind::Volume),
            "c" => Some(PhiKind::LargestRectangle),
            _ => None,
        }
    }
}

/// A local representation kind together with its scale `δ > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Phi {
    kind: PhiKind,
    delta: f64,
    volume: VolumeConfig,
}

impl Phi {
    pub fn new(kind: PhiKind, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::InvalidDelta(delta));
        }
        Ok(Phi {
            kind,
            delta,
            volume: VolumeConfig::default(),
        })
    }

    pub fn with_volume_config(mut self, volume: VolumeConfig) -> Self {
        self.volume = volume;
        self
    }

    pub fn kind(&self) -> PhiKind {
        self.kind
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn volume_config(&self) -> VolumeConfig {
        self.volume
    }
}

/// Controls the exact/quadrature switch of [`support_volume`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VolumeConfig {
    /// Above this many corners (births + deaths) inclusion–exclusion is
    /// abandoned for diagonal-line quadrature.
    pub max_exact_corners: usize,
    /// Midpoints per axis of the (n−1)-dimensional offset grid.
    pub quadrature_resolution: usize,
}

impl Default for VolumeConfig {
    fn default() -> Self {
        VolumeConfig {
            max_exact_corners: 16,
            quadrature_resolution: 64,
        }
    }
}

/// Largest pair value `max_{b,d} f(b, d)` over the corners, 0 for the zero module.
fn best_pair(module: &IntervalModule, f: impl Fn(&[f64], &[f64]) -> f64) -> f64 {
    let mut best = 0.0f64;
    for b in module.births() {
        for d in module.deaths() {
            best = best.max(f(b.coords(), d.coords()));
        }
    }
    best
}

#[inline]
fn half_min_side(b: &[f64], d: &[f64]) -> f64 {
    let side = b
        .iter()
        .zip(d)
        .map(|(lo, hi)| hi - lo)
        .fold(f64::INFINITY, f64::min);
    0.5 * side.max(0.0)
}

#[inline]
fn box_volume(b: &[f64], d: &[f64]) -> f64 {
    b.iter()
        .zip(d)
        .map(|(lo, hi)| (hi - lo).max(0.0))
        .product()
}

/// The weight `w(M) = d_I(M, 0) = ½ max_{b,d} min_j (d_j − b_j)₊`.
pub fn weight(module: &IntervalModule) -> f64 {
    best_pair(module, half_min_side)
}

/// Volume of the largest rectangle `[b, d]` inside the support.
pub fn largest_rectangle_volume(module: &IntervalModule) -> f64 {
    best_pair(module, box_volume)
}

/// Exact `vol(supp M ∩ rect)` for small presentations, diagonal-line
/// quadrature beyond `config.max_exact_corners` corners.
pub fn support_volume(module: &IntervalModule, rect: &AxisBox, config: VolumeConfig) -> Result<f64> {
    let restricted = module.restrict_to_box(rect)?;
    let corners = restricted.births().len() + restricted.deaths().len();
    if corners <= config.max_exact_corners {
        Ok(inclusion_exclusion_volume(&restricted))
    } else {
        Ok(diagonal_quadrature_volume(
            &restricted,
            rect,
            config.quadrature_resolution,
        ))
    }
}

/// `vol(supp M ∩ rect)` by inclusion–exclusion over corner subsets.
pub fn support_volume_exact(module: &IntervalModule, rect: &AxisBox) -> Result<f64> {
    Ok(inclusion_exclusion_volume(&module.restrict_to_box(rect)?))
}

/// `vol(supp M ∩ rect)` as the integral of bar lengths over diagonal lines,
/// midpoint rule with `resolution` offsets per axis.
pub fn support_volume_quadrature(
    module: &IntervalModule,
    rect: &AxisBox,
    resolution: usize,
) -> Result<f64> {
    if resolution == 0 {
        return Err(Error::InvalidParameter("quadrature resolution must be positive".into()));
    }
    Ok(diagonal_quadrature_volume(
        &module.restrict_to_box(rect)?,
        rect,
        resolution,
    ))
}

/// Signed subset extrema: for every non-empty subset `S`, the coefficient
/// `(−1)^{|S|+1}` and the componentwise `pick` over `S`, flattened.
fn subset_extrema(corners: &[Point], dim: usize, pick: fn(f64, f64) -> f64) -> (Vec<f64>, Vec<f64>) {
    let mut signs: Vec<f64> = Vec::with_capacity(1 << corners.len());
    let mut coords: Vec<f64> = Vec::with_capacity(dim << corners.len());
    for c in corners {
        let existing = signs.len();
        for s in 0..existing {
            signs.push(-signs[s]);
            for j in 0..dim {
                coords.push(pick(coords[s * dim + j], c.coords()[j]));
            }
        }
        signs.push(1.0);
        coords.extend_from_slice(c.coords());
    }
    (signs, coords)
}

fn inclusion_exclusion_volume(module: &IntervalModule) -> f64 {
    if module.is_zero() {
        return 0.0;
    }
    let dim = module.dim();
    let (bs, bc) = subset_extrema(module.births(), dim, f64::max);
    let (ds, dc) = subset_extrema(module.deaths(), dim, f64::min);
    let mut total = 0.0;
    for (i, sb) in bs.iter().enumerate() {
        let lo = &bc[i * dim..(i + 1) * dim];
        for (k, sd) in ds.iter().enumerate() {
            let hi = &dc[k * dim..(k + 1) * dim];
            let v = box_volume(lo, hi);
            if v > 0.0 {
                total += sb * sd * v;
            }
        }
    }
    total.max(0.0)
}

/// Bar length of the (already restricted) module along `y + t·1`.
fn line_length(module: &IntervalModule, y: &[f64]) -> f64 {
    module.diagonal_bar(y).map_or(0.0, |bar| bar.length())
}

fn diagonal_quadrature_volume(module: &IntervalModule, rect: &AxisBox, resolution: usize) -> f64 {
    if module.is_zero() {
        return 0.0;
    }
    let n = module.dim();
    if n == 1 {
        return line_length(module, &[0.0]);
    }
    let (m, big_m) = (rect.lower().coords(), rect.upper().coords());
    // Offsets y with y_n = 0; line points are y + t·1, so y_i = x_i − x_n.
    let lo: Vec<f64> = (0..n - 1).map(|i| m[i] - big_m[n - 1]).collect();
    let step: Vec<f64> = (0..n - 1)
        .map(|i| (big_m[i] - m[n - 1] - lo[i]) / resolution as f64)
        .collect();
    let cell: f64 = step.iter().product();
    let total_points = resolution.pow((n - 1) as u32);
    let mut y = vec![0.0; n];
    let mut sum = 0.0;
    for flat in 0..total_points {
        let mut rest = flat;
        for i in (0..n - 1).rev() {
            let idx = rest % resolution;
            rest /= resolution;
            y[i] = lo[i] + (idx as f64 + 0.5) * step[i];
        }
        sum += line_length(module, &y);
    }
    sum * cell
}

/// Evaluates `φ_δ(M)(x)`; always within `[0, 1]`.
pub fn phi(module: &IntervalModule, x: &Point, phi: Phi) -> Result<f64> {
    let rect = AxisBox::centered(x, phi.delta)?;
    if rect.dim() != module.dim() {
        return Err(Error::DimensionMismatch {
            expected: module.dim(),
            found: rect.dim(),
        });
    }
    Ok(phi_in_box(module, &rect, phi))
}

/// `φ_δ(M)` on a prebuilt local box `R_{x,δ}` (dimensions assumed equal).
pub fn phi_in_box(module: &IntervalModule, rect: &AxisBox, phi: Phi) -> f64 {
    let delta = phi.delta;
    let norm = (2.0 * delta).powi(module.dim() as i32);
    let raw = match phi.kind {
        PhiKind::DiagonalLength => restricted_best_pair(module, rect, SideAggregate::HalfMin) / delta,
        PhiKind::LargestRectangle => restricted_best_pair(module, rect, SideAggregate::Product) / norm,
        PhiKind::Volume => {
            support_volume(module, rect, phi.volume).unwrap_or(0.0) / norm
        }
    };
    raw.clamp(0.0, 1.0)
}

/// Aggregate of the side lengths `s_j = d_j − b_j` of a corner pair.
#[derive(Clone, Copy)]
enum SideAggregate {
    HalfMin,
    Product,
}

impl SideAggregate {
    #[inline]
    fn apply(self, sides: impl Iterator<Item = f64>) -> f64 {
        match self {
            SideAggregate::HalfMin => 0.5 * sides.fold(f64::INFINITY, f64::min).max(0.0),
            SideAggregate::Product => sides.map(|s| s.max(0.0)).product(),
        }
    }
}

/// `best_pair` on the restriction to `rect` without materializing it.
/// Dominated corners never win the maximum, so canonicalization is skipped.
fn restricted_best_pair(module: &IntervalModule, rect: &AxisBox, agg: SideAggregate) -> f64 {
    let (m, big_m) = (rect.lower().coords(), rect.upper().coords());
    let mut best = 0.0f64;
    for b in module.births().iter().filter(|b| leq(b.coords(), big_m)) {
        for d in module.deaths().iter().filter(|d| leq(m, d.coords())) {
            let sides = (0..m.len())
                .map(|j| d.coords()[j].min(big_m[j]) - b.coords()[j].max(m[j]));
            best = best.max(agg.apply(sides));
        }
    }
    best
}
