//! Image-valued representations of decompositions, rasterized on grids.
//!
//! All of them share one shape: per grid point `x`, combine the values
//! `w(M_i)·φ(M_i)(x)` of the summands with a permutation-invariant operator.
//! Grid points are independent and are evaluated through [`crate::par`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariants::{phi_in_box, weight, Phi, PhiKind};
use crate::model::{AxisBox, Decomposition, IntervalModule, Point};
use crate::par;

/// Regular grid of cell centers over `[lower, upper]`.
///
/// Flat index is row-major: the last axis varies fastest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    lower: Vec<f64>,
    upper: Vec<f64>,
    resolution: Vec<usize>,
}

impl GridSpec {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>, resolution: Vec<usize>) -> Result<Self> {
        let n = lower.len();
        if n == 0 || upper.len() != n || resolution.len() != n {
            return Err(Error::InvalidGrid("axis count mismatch".into()));
        }
        if lower.iter().chain(&upper).any(|v| !v.is_finite()) {
            return Err(Error::InvalidGrid("non-finite bounds".into()));
        }
        if lower.iter().zip(&upper).any(|(l, u)| l >= u) {
            return Err(Error::InvalidGrid("lower bound not below upper bound".into()));
        }
        if resolution.contains(&0) {
            return Err(Error::InvalidGrid("zero resolution".into()));
        }
        Ok(GridSpec {
            lower,
            upper,
            resolution,
        })
    }

    /// Square grid helper for the common two-parameter case.
    pub fn square2(lower: [f64; 2], upper: [f64; 2], res: usize) -> Result<Self> {
        GridSpec::new(lower.to_vec(), upper.to_vec(), vec![res, res])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn resolution(&self) -> &[usize] {
        &self.resolution
    }

    pub fn len(&self) -> usize {
        self.resolution.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn cell_sizes(&self) -> Vec<f64> {
        (0..self.dim())
            .map(|i| (self.upper[i] - self.lower[i]) / self.resolution[i] as f64)
            .collect()
    }

    pub fn cell_area(&self) -> f64 {
        self.cell_sizes().iter().product()
    }

    /// Per-axis indices of the flat index `flat`.
    pub fn unravel(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim()];
        for i in (0..self.dim()).rev() {
            idx[i] = flat % self.resolution[i];
            flat /= self.resolution[i];
        }
        idx
    }

    /// Cell center at the flat index `flat`.
    pub fn point(&self, flat: usize) -> Vec<f64> {
        let sizes = self.cell_sizes();
        self.unravel(flat)
            .into_iter()
            .enumerate()
            .map(|(i, k)| self.lower[i] + (k as f64 + 0.5) * sizes[i])
            .collect()
    }

    pub fn points(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|i| self.point(i)).collect()
    }
}

/// Description of how an image was produced; written next to exports.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ImageMeta {
    pub degree: Option<usize>,
    pub representation: String,
    pub p: Option<f64>,
    pub delta: Option<f64>,
    pub kind: Option<String>,
    pub op: Option<String>,
    pub k: Option<usize>,
}

/// Scalar field sampled on a [`GridSpec`].
#[derive(Clone, Debug, PartialEq)]
pub struct GridImage {
    grid: GridSpec,
    values: Vec<f64>,
    meta: ImageMeta,
}

impl GridImage {
    pub fn new(grid: GridSpec, values: Vec<f64>, meta: ImageMeta) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "{} values for {} grid points",
                values.len(),
                grid.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("image"));
        }
        Ok(GridImage { grid, values, meta })
    }

    pub fn zeros(grid: GridSpec, meta: ImageMeta) -> Self {
        let values = vec![0.0; grid.len()];
        GridImage { grid, values, meta }
    }

    pub fn grid(&self) -> &GridSpec {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn meta(&self) -> &ImageMeta {
        &self.meta
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Permutation-invariant aggregation over summands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Sum,
    Mean,
    Max,
    Min,
    /// k-th largest value (1-based); 0 when fewer than `k` summands.
    KthMax(usize),
}

impl Op {
    fn apply(self, values: &mut [f64]) -> f64 {
        if values.is_empty() {
            return 0.0;
        }
        match self {
            Op::Sum => values.iter().sum(),
            Op::Mean => values.iter().sum::<f64>() / values.len() as f64,
            Op::Max => values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            Op::Min => values.iter().copied().fold(f64::INFINITY, f64::min),
            Op::KthMax(k) => kth_largest(values, k),
        }
    }

    fn name(self) -> String {
        match self {
            Op::Sum => "sum".into(),
            Op::Mean => "mean".into(),
            Op::Max => "max".into(),
            Op::Min => "min".into(),
            Op::KthMax(k) => format!("kth_max({k})"),
        }
    }
}

fn kth_largest(values: &mut [f64], k: usize) -> f64 {
    if k == 0 || k > values.len() {
        return 0.0;
    }
    let (_, kth, _) = values.select_nth_unstable_by(k - 1, |a, b| b.total_cmp(a));
    *kth
}

type WeightFn<'a> = dyn Fn(&IntervalModule) -> f64 + Sync + 'a;
type LocalFn<'a> = dyn Fn(&IntervalModule, &[f64]) -> f64 + Sync + 'a;

/// Parameters of the generic combinator `op({ w(M_i)·φ(M_i)(x) })`.
pub struct TcdrParams<'a> {
    pub op: Op,
    pub weight: &'a WeightFn<'a>,
    pub phi: &'a LocalFn<'a>,
    /// Divide the weights by their total before combining.
    pub normalize: bool,
}

/// Generic decomposition representation on a grid.
pub fn tcdr(decomp: &Decomposition, params: &TcdrParams<'_>, grid: &GridSpec) -> Result<GridImage> {
    check_grid(decomp, grid)?;
    let meta = ImageMeta {
        degree: Some(decomp.degree()),
        representation: "tcdr".into(),
        op: Some(params.op.name()),
        ..ImageMeta::default()
    };
    if decomp.is_empty() {
        return Ok(GridImage::zeros(grid.clone(), meta));
    }
    let mut weights: Vec<f64> = decomp.intervals().iter().map(|m| (params.weight)(m)).collect();
    if params.normalize {
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::Degenerate("all summand weights are zero".into()));
        }
        weights.iter_mut().for_each(|w| *w /= total);
    }
    let values = par::map_range(grid.len(), |i| {
        let x = grid.point(i);
        let mut terms: Vec<f64> = decomp
            .intervals()
            .iter()
            .zip(&weights)
            .map(|(m, w)| w * (params.phi)(m, &x))
            .collect();
        params.op.apply(&mut terms)
    });
    GridImage::new(grid.clone(), values, meta)
}

/// A summand with the data reused at every grid point.
struct Prepared<'a> {
    module: &'a IntervalModule,
    lo: Vec<f64>,
    hi: Vec<f64>,
}

fn prepare(decomp: &Decomposition) -> Vec<Prepared<'_>> {
    decomp
        .intervals()
        .iter()
        .filter_map(|m| m.hull().map(|(lo, hi)| Prepared { module: m, lo, hi }))
        .collect()
}

impl Prepared<'_> {
    /// True when the local box can only meet the support in measure zero,
    /// in which case every φ kind is 0.
    #[inline]
    fn misses(&self, rect: &AxisBox) -> bool {
        let (m, big_m) = (rect.lower().coords(), rect.upper().coords());
        (0..m.len()).any(|j| self.hi[j] <= m[j] || self.lo[j] >= big_m[j])
    }

    #[inline]
    fn phi(&self, rect: &AxisBox, phi: Phi) -> f64 {
        if self.misses(rect) {
            0.0
        } else {
            phi_in_box(self.module, rect, phi)
        }
    }
}

fn local_box(x: Vec<f64>, delta: f64) -> AxisBox {
    let lower = Point::new(x.iter().map(|c| c - delta).collect()).expect("finite grid point");
    let upper = Point::new(x.iter().map(|c| c + delta).collect()).expect("finite grid point");
    AxisBox::new(lower, upper).expect("delta > 0")
}

fn check_grid(decomp: &Decomposition, grid: &GridSpec) -> Result<()> {
    if decomp.dim() != grid.dim() {
        return Err(Error::DimensionMismatch {
            expected: decomp.dim(),
            found: grid.dim(),
        });
    }
    Ok(())
}

fn scdr_meta(decomp: &Decomposition, phi: Phi, representation: &str, p: Option<f64>) -> ImageMeta {
    ImageMeta {
        degree: Some(decomp.degree()),
        representation: representation.into(),
        p,
        delta: Some(phi.delta()),
        kind: Some(phi.kind().tag().into()),
        op: Some(if p.is_some() { "sum" } else { "sup" }.into()),
        k: None,
    }
}

/// Normalized weighted sum `Σ_i [w_i^p / Σ_j w_j^p] φ_δ(M_i)`.
///
/// `p = 0` uses uniform weights `1/m` (with `0⁰ = 1`).
pub fn scdr_p(decomp: &Decomposition, p: f64, phi: Phi, grid: &GridSpec) -> Result<GridImage> {
    check_grid(decomp, grid)?;
    if !(p >= 0.0 && p.is_finite()) {
        return Err(Error::InvalidParameter(format!("p must be a finite non-negative number, got {p}")));
    }
    if decomp.is_empty() {
        return Err(Error::Degenerate("empty decomposition".into()));
    }
    let raw: Vec<f64> = decomp
        .intervals()
        .iter()
        .map(|m| if p == 0.0 { 1.0 } else { weight(m).powf(p) })
        .collect();
    let total: f64 = raw.iter().sum();
    if total <= 0.0 {
        return Err(Error::Degenerate("all summand weights are zero".into()));
    }
    let prepared: Vec<(Prepared<'_>, f64)> = decomp
        .intervals()
        .iter()
        .zip(&raw)
        .filter(|(_, w)| **w > 0.0)
        .filter_map(|(m, w)| m.hull().map(|(lo, hi)| (Prepared { module: m, lo, hi }, w / total)))
        .collect();
    let values = par::map_range(grid.len(), |i| {
        let rect = local_box(grid.point(i), phi.delta());
        prepared.iter().map(|(m, c)| c * m.phi(&rect, phi)).sum()
    });
    GridImage::new(grid.clone(), values, scdr_meta(decomp, phi, "scdr_p", Some(p)))
}

/// Pointwise supremum `sup_i φ_δ(M_i)`; zero image for an empty decomposition.
pub fn scdr_sup(decomp: &Decomposition, phi: Phi, grid: &GridSpec) -> Result<GridImage> {
    check_grid(decomp, grid)?;
    let prepared = prepare(decomp);
    let values = par::map_range(grid.len(), |i| {
        let rect = local_box(grid.point(i), phi.delta());
        prepared
            .iter()
            .map(|m| m.phi(&rect, phi))
            .fold(0.0, f64::max)
    });
    GridImage::new(grid.clone(), values, scdr_meta(decomp, phi, "scdr_sup", None))
}

/// k-th multiparameter persistence landscape evaluated through corner
/// slicing: at `x`, the k-th largest tent value of the summands' bars on the
/// diagonal line through `x`.
pub fn mpl(decomp: &Decomposition, k: usize, grid: &GridSpec) -> Result<GridImage> {
    check_grid(decomp, grid)?;
    if k == 0 {
        return Err(Error::InvalidParameter("landscape index k must be at least 1".into()));
    }
    let values = par::map_range(grid.len(), |i| {
        let x = grid.point(i);
        let mut tents: Vec<f64> = decomp
            .intervals()
            .iter()
            .filter_map(|m| m.diagonal_bar(&x))
            .map(|bar| (-bar.birth).min(bar.death).max(0.0))
            .collect();
        kth_largest(&mut tents, k)
    });
    let meta = ImageMeta {
        degree: Some(decomp.degree()),
        representation: "mpl".into(),
        op: Some(Op::KthMax(k).name()),
        k: Some(k),
        ..ImageMeta::default()
    };
    GridImage::new(grid.clone(), values, meta)
}

/// Norm used to compare two images on the same grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ImageNorm {
    LInf,
    /// Cell-area-weighted sum of squared differences.
    L2Squared,
}

pub fn image_distance(a: &GridImage, b: &GridImage, norm: ImageNorm) -> Result<f64> {
    if a.grid != b.grid {
        return Err(Error::GridMismatch);
    }
    let diffs = a.values.iter().zip(&b.values).map(|(x, y)| (x - y).abs());
    Ok(match norm {
        ImageNorm::LInf => diffs.fold(0.0, f64::max),
        ImageNorm::L2Squared => a.grid.cell_area() * diffs.map(|d| d * d).sum::<f64>(),
    })
}

/// Dense baseline for `V_{∞,δ}` with φ kind (b): every local volume is
/// re-estimated by testing membership on a `samples`ⁿ lattice of the local
/// box. Used only for benchmarking against the corner formulas.
pub fn scdr_sup_volume_dense(
    decomp: &Decomposition,
    delta: f64,
    samples: usize,
    grid: &GridSpec,
) -> Result<GridImage> {
    check_grid(decomp, grid)?;
    let phi = Phi::new(PhiKind::Volume, delta)?;
    let n = decomp.dim();
    let prepared = prepare(decomp);
    let per_box = samples.pow(n as u32);
    let values = par::map_range(grid.len(), |i| {
        let x = grid.point(i);
        let rect = local_box(x.clone(), delta);
        let mut y = vec![0.0; n];
        let mut best = 0.0f64;
        for m in prepared.iter().filter(|m| !m.misses(&rect)) {
            let mut hits = 0usize;
            for flat in 0..per_box {
                let mut rest = flat;
                for j in (0..n).rev() {
                    let k = rest % samples;
                    rest /= samples;
                    y[j] = x[j] - delta + (k as f64 + 0.5) * 2.0 * delta / samples as f64;
                }
                hits += usize::from(m.module.covers(&y));
            }
            best = best.max(hits as f64 / per_box as f64);
        }
        best
    });
    GridImage::new(grid.clone(), values, scdr_meta(decomp, phi, "scdr_sup_dense", None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::phi as phi_at;

    fn p(c: &[f64]) -> Point {
        Point::from_slice(c)
    }

    fn rect(lo: &[f64], hi: &[f64]) -> IntervalModule {
        IntervalModule::rectangle(p(lo), p(hi)).unwrap()
    }

    fn decomp(ms: Vec<IntervalModule>) -> Decomposition {
        Decomposition::new(2, 1, ms).unwrap()
    }

    fn grid() -> GridSpec {
        GridSpec::square2([-1.0, -1.0], [4.0, 4.0], 10).unwrap()
    }

    #[test]
    fn grid_points_are_cell_centers_row_major() {
        let g = GridSpec::square2([0.0, 0.0], [2.0, 2.0], 2).unwrap();
        assert_eq!(g.points(), vec![vec![0.5, 0.5], vec![0.5, 1.5], vec![1.5, 0.5], vec![1.5, 1.5]]);
        assert_eq!(g.cell_area(), 1.0);
        assert!(GridSpec::square2([0.0, 0.0], [0.0, 1.0], 2).is_err());
        assert!(GridSpec::square2([0.0, 0.0], [1.0, 1.0], 0).is_err());
    }

    #[test]
    fn tcdr_examples() {
        let one: &WeightFn<'_> = &|_| 1.0;
        let vol = Phi::new(PhiKind::Volume, 0.5).unwrap();
        let local: &LocalFn<'_> = &move |m, x| phi_at(m, &Point::from_slice(x), vol).unwrap();
        let params = TcdrParams {
            op: Op::Sum,
            weight: one,
            phi: local,
            normalize: false,
        };
        let g = grid();
        let empty = tcdr(&decomp(vec![]), &params, &g).unwrap();
        assert!(empty.values().iter().all(|v| *v == 0.0));

        let r = rect(&[0.0, 0.0], &[2.0, 2.0]);
        let single = tcdr(&decomp(vec![r.clone()]), &params, &g).unwrap();
        for (i, v) in single.values().iter().enumerate() {
            assert_eq!(*v, phi_at(&r, &p(&g.point(i)), vol).unwrap());
        }
        let double = tcdr(&decomp(vec![r.clone(), r]), &params, &g).unwrap();
        for (a, b) in single.values().iter().zip(double.values()) {
            assert_eq!(2.0 * a, *b);
        }
    }

    #[test]
    fn scdr_p_examples() {
        let g = grid();
        let vol = Phi::new(PhiKind::Volume, 0.5).unwrap();
        let r = rect(&[0.0, 0.0], &[2.0, 2.0]);
        let single = decomp(vec![r.clone()]);
        let sup = scdr_sup(&single, vol, &g).unwrap();
        for q in [0.0, 1.0, 2.5] {
            assert_eq!(scdr_p(&single, q, vol, &g).unwrap().values(), sup.values());
        }
        let mean = scdr_p(&decomp(vec![r.clone(), r]), 0.0, vol, &g).unwrap();
        for (a, b) in mean.values().iter().zip(sup.values()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn scdr_p_weighted_example() {
        // w = 1 and w = 3; at x = (1,1) with δ = 0.5 the first covers the box,
        // the second is far away: value = ¼·1 + ¾·0.
        let a = rect(&[0.0, 0.0], &[2.0, 2.0]);
        let b = rect(&[10.0, 10.0], &[16.0, 16.0]);
        let g = GridSpec::square2([0.5, 0.5], [1.5, 1.5], 1).unwrap();
        let vol = Phi::new(PhiKind::Volume, 0.5).unwrap();
        let img = scdr_p(&decomp(vec![a, b]), 1.0, vol, &g).unwrap();
        assert_eq!(img.values(), &[0.25]);
    }

    #[test]
    fn scdr_p_degenerate_inputs() {
        let g = grid();
        let vol = Phi::new(PhiKind::Volume, 0.5).unwrap();
        let zero = decomp(vec![IntervalModule::zero(2)]);
        assert!(matches!(scdr_p(&zero, 1.0, vol, &g), Err(Error::Degenerate(_))));
        assert!(scdr_p(&decomp(vec![]), 0.0, vol, &g).is_err());
        assert!(scdr_p(&zero, 0.0, vol, &g).is_ok());
    }

    #[test]
    fn scdr_sup_examples() {
        let g = grid();
        let vol = Phi::new(PhiKind::Volume, 0.5).unwrap();
        let a = rect(&[0.0, 0.0], &[1.0, 1.0]);
        let b = rect(&[2.5, 2.5], &[3.5, 3.5]);
        let ia = scdr_sup(&decomp(vec![a.clone()]), vol, &g).unwrap();
        let ib = scdr_sup(&decomp(vec![b.clone()]), vol, &g).unwrap();
        let both = scdr_sup(&decomp(vec![a.clone(), b]), vol, &g).unwrap();
        for i in 0..g.len() {
            assert_eq!(both.values()[i], ia.values()[i].max(ib.values()[i]));
        }
        let dup = scdr_sup(&decomp(vec![a.clone(), a]), vol, &g).unwrap();
        assert_eq!(dup.values(), ia.values());
        assert!(scdr_sup(&decomp(vec![]), vol, &g)
            .unwrap()
            .values()
            .iter()
            .all(|v| *v == 0.0));
    }

    #[test]
    fn mpl_examples() {
        let r = decomp(vec![rect(&[0.0, 0.0], &[2.0, 2.0])]);
        let g = GridSpec::square2([0.5, 0.5], [1.5, 1.5], 1).unwrap();
        assert_eq!(mpl(&r, 1, &g).unwrap().values(), &[1.0]);
        assert!(mpl(&r, 2, &grid()).unwrap().values().iter().all(|v| *v == 0.0));
        assert!(mpl(&decomp(vec![]), 1, &grid())
            .unwrap()
            .values()
            .iter()
            .all(|v| *v == 0.0));
        assert!(mpl(&r, 0, &g).is_err());
    }

    #[test]
    fn image_distance_examples() {
        let g = GridSpec::square2([0.0, 0.0], [1.0, 1.0], 2).unwrap();
        let a = GridImage::new(g.clone(), vec![0.0; 4], ImageMeta::default()).unwrap();
        assert_eq!(image_distance(&a, &a, ImageNorm::LInf).unwrap(), 0.0);
        let c = GridImage::new(g.clone(), vec![0.3; 4], ImageMeta::default()).unwrap();
        assert_eq!(image_distance(&a, &c, ImageNorm::LInf).unwrap(), 0.3);
        let d = GridImage::new(g.clone(), vec![1.0, 0.0, 0.0, 0.0], ImageMeta::default()).unwrap();
        assert_eq!(image_distance(&a, &d, ImageNorm::L2Squared).unwrap(), 0.25);
        let other = GridImage::zeros(GridSpec::square2([0.0, 0.0], [1.0, 1.0], 3).unwrap(), ImageMeta::default());
        assert!(matches!(image_distance(&a, &other, ImageNorm::LInf), Err(Error::GridMismatch)));
    }

    #[test]
    fn dense_baseline_tracks_corner_volume() {
        let d = decomp(vec![rect(&[0.0, 0.0], &[2.0, 1.5]), rect(&[1.0, 1.0], &[3.0, 3.0])]);
        let g = grid();
        let exact = scdr_sup(&d, Phi::new(PhiKind::Volume, 0.5).unwrap(), &g).unwrap();
        let dense = scdr_sup_volume_dense(&d, 0.5, 40, &g).unwrap();
        assert!(image_distance(&exact, &dense, ImageNorm::LInf).unwrap() < 0.06);
    }
}
