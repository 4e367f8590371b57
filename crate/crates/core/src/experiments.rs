//! Experiment harnesses (convergence, runtime, instability), their CSV
//! reports, and the `key = value` configuration format shared with the CLI.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::invariants::{support_volume, Phi, PhiKind, VolumeConfig};
use crate::model::{AxisBox, Decomposition, Point};
use crate::par;
use crate::pipeline::synthetic::{annulus_nonuniform, bridged_squares, circle_with_outliers, random_decomposition};
use crate::pipeline::{build_bifiltration, vineyard_decompose, PipelineConfig, PointCloud};
use crate::representations::{image_distance, mpl, scdr_p, scdr_sup, scdr_sup_volume_dense, GridSpec, ImageNorm};

/// Flat `key = value` settings. `#` starts a comment; values may be quoted.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConfigMap {
    entries: BTreeMap<String, (usize, String)>,
}

impl ConfigMap {
    pub fn parse(text: &str) -> Result<ConfigMap> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((k, v)) = line.split_once('=') else {
                return Err(Error::Config { line: i + 1, msg: format!("expected `key = value`, got `{line}`") });
            };
            let key = k.trim();
            if key.is_empty() {
                return Err(Error::Config { line: i + 1, msg: "empty key".into() });
            }
            let value = v.trim().trim_matches('"').to_string();
            if entries.insert(key.to_string(), (i + 1, value)).is_some() {
                return Err(Error::Config { line: i + 1, msg: format!("duplicate key `{key}`") });
            }
        }
        Ok(ConfigMap { entries })
    }

    /// Sets `key` as if it appeared in the file (flag overrides).
    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.entries.insert(key.to_string(), (0, value.into()));
    }

    /// Rejects keys outside `known`.
    pub fn check_keys(&self, known: &[&str]) -> Result<()> {
        match self.entries.iter().find(|(k, _)| !known.contains(&k.as_str())) {
            Some((k, (line, _))) => Err(Error::Config { line: *line, msg: format!("unknown key `{k}`") }),
            None => Ok(()),
        }
    }

    pub fn get_str(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(_, v)| v.as_str())
    }

    pub fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        let Some((line, v)) = self.entries.get(key) else {
            return Ok(None);
        };
        v.parse()
            .map(Some)
            .map_err(|_| Error::Config { line: *line, msg: format!("bad value `{v}` for `{key}`") })
    }

    /// Comma-separated list.
    pub fn get_list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>> {
        let Some((line, v)) = self.entries.get(key) else {
            return Ok(None);
        };
        v.split(',')
            .map(|s| s.trim().parse())
            .collect::<std::result::Result<Vec<T>, _>>()
            .map(Some)
            .map_err(|_| Error::Config { line: *line, msg: format!("bad list `{v}` for `{key}`") })
    }
}

/// One measurement of an experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    /// What the row is indexed by (`n`, `epsilon`, `case`, ...).
    pub key: String,
    pub key_value: String,
    pub metric: String,
    pub value: f64,
    pub repetition: Option<usize>,
}

/// Result of a least-squares fit of `log y` against `log x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SlopeFit {
    Fit { slope: f64, intercept: f64 },
    /// Some distance was zero or non-finite, or fewer than two distinct `x`.
    NotAFit,
}

impl SlopeFit {
    pub fn slope(&self) -> Option<f64> {
        match self {
            SlopeFit::Fit { slope, .. } => Some(*slope),
            SlopeFit::NotAFit => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentReport {
    pub experiment: String,
    pub seed: u64,
    pub rows: Vec<ReportRow>,
    /// Named slope fits, e.g. `linf`.
    pub fits: Vec<(String, SlopeFit)>,
}

impl ExperimentReport {
    fn new(experiment: &str, seed: u64) -> Self {
        ExperimentReport {
            experiment: experiment.into(),
            seed,
            rows: Vec::new(),
            fits: Vec::new(),
        }
    }

    fn push(&mut self, key: &str, key_value: impl ToString, metric: impl Into<String>, value: f64, repetition: Option<usize>) {
        self.rows.push(ReportRow {
            key: key.into(),
            key_value: key_value.to_string(),
            metric: metric.into(),
            value,
            repetition,
        });
    }

    /// Values of `metric`, in row order.
    pub fn values(&self, metric: &str) -> Vec<f64> {
        self.rows.iter().filter(|r| r.metric == metric).map(|r| r.value).collect()
    }

    pub fn fit(&self, name: &str) -> Option<SlopeFit> {
        self.fits.iter().find(|(n, _)| n == name).map(|(_, f)| *f)
    }

    /// `experiment,key,key_value,metric,value,repetition,seed`; fits are
    /// appended as `fit` rows whose value is the slope (`NaN` when not a fit).
    pub fn to_csv(&self) -> String {
        let mut out = String::from("experiment,key,key_value,metric,value,repetition,seed\n");
        for r in &self.rows {
            let rep = r.repetition.map(|k| k.to_string()).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                self.experiment, r.key, r.key_value, r.metric, r.value, rep, self.seed
            );
        }
        for (name, fit) in &self.fits {
            let (status, slope) = match fit {
                SlopeFit::Fit { slope, .. } => ("ok", *slope),
                SlopeFit::NotAFit => ("not_a_fit", f64::NAN),
            };
            let _ = writeln!(out, "{},fit,{status},slope_{name},{slope},,{}", self.experiment, self.seed);
        }
        out
    }
}

/// Least-squares slope of `log y` against `log x`.
pub fn fit_loglog_slope(xs: &[f64], ys: &[f64]) -> SlopeFit {
    let ok = xs.len() == ys.len()
        && xs.len() >= 2
        && xs.iter().chain(ys).all(|v| v.is_finite() && *v > 0.0);
    if !ok {
        return SlopeFit::NotAFit;
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx <= 0.0 {
        return SlopeFit::NotAFit;
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    SlopeFit::Fit { slope, intercept: my - slope * mx }
}

/// Image grid covering `decomp` with a margin of `delta`, or `[0,1]ⁿ` when
/// the decomposition is empty.
pub fn grid_around(decomp: &Decomposition, delta: f64, resolution: &[usize]) -> Result<GridSpec> {
    let n = decomp.dim();
    let (lo, hi) = decomp.hull().unwrap_or_else(|| (vec![0.0; n], vec![1.0; n]));
    GridSpec::new(
        lo.iter().map(|v| v - delta).collect(),
        hi.iter().map(|v| v + delta).collect(),
        resolution.to_vec(),
    )
}

/// Point-cloud generators available to the convergence harness.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    Annulus,
    CircleOutliers,
    /// Every point at the origin; yields empty degree-1 decompositions.
    Constant,
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "annulus" => Ok(Generator::Annulus),
            "circle" => Ok(Generator::CircleOutliers),
            "constant" => Ok(Generator::Constant),
            _ => Err(Error::InvalidParameter(format!("unknown generator `{s}`"))),
        }
    }
}

impl Generator {
    pub fn generate(self, n: usize, seed: u64) -> PointCloud {
        match self {
            Generator::Annulus => annulus_nonuniform(n, seed),
            Generator::CircleOutliers => circle_with_outliers(n, n / 40, seed),
            Generator::Constant => PointCloud::new(vec![vec![0.0, 0.0]; n.max(1)]).expect("non-empty"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceConfig {
    pub generator: Generator,
    /// Size of the full cloud; the target representation is computed on it.
    pub base_size: usize,
    /// Subsample sizes, ascending.
    pub n_list: Vec<usize>,
    pub reps: usize,
    pub seed: u64,
    pub delta: f64,
    pub kind: PhiKind,
    pub image_resolution: [usize; 2],
    pub pipeline: PipelineConfig,
}

impl Default for ConvergenceConfig {
    fn default() -> Self {
        ConvergenceConfig {
            generator: Generator::Annulus,
            base_size: 5000,
            n_list: vec![125, 250, 500, 1000, 2000],
            reps: 5,
            seed: 0,
            delta: 0.1,
            kind: PhiKind::Volume,
            image_resolution: [50, 50],
            pipeline: PipelineConfig::default(),
        }
    }
}

/// Distances of subsampled `V_{∞,δ}` images to the image of the full cloud,
/// with log-log slopes of the mean distances (`linf`, `l2sq`).
///
/// All runs share the triangulation grid of the full cloud, so images differ
/// only through the sample.
pub fn cmd_convergence(cfg: &ConvergenceConfig) -> Result<ExperimentReport> {
    if cfg.n_list.len() < 4 || cfg.n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("n_list must hold at least 4 ascending sizes".into()));
    }
    if cfg.n_list.iter().any(|&n| n == 0 || n > cfg.base_size) || cfg.reps == 0 {
        return Err(Error::InvalidParameter("subsample sizes must lie in 1..=base_size and reps ≥ 1".into()));
    }
    cfg.pipeline.validate()?;
    let phi = Phi::new(cfg.kind, cfg.delta)?;
    let base = cfg.generator.generate(cfg.base_size, cfg.seed);
    let tri_grid = cfg.pipeline.grid_for(&base)?;
    let run = |cloud: &PointCloud| -> Result<Decomposition> {
        let bif = build_bifiltration(cloud, &tri_grid, cfg.pipeline.bandwidth)?;
        vineyard_decompose(&bif, cfg.pipeline.degree, cfg.pipeline.lines)
    };
    let target = run(&base)?;
    let grid = grid_around(&target, cfg.delta, &cfg.image_resolution)?;
    let target_img = scdr_sup(&target, phi, &grid)?;

    let tasks: Vec<(usize, usize)> = (0..cfg.n_list.len())
        .flat_map(|i| (0..cfg.reps).map(move |r| (i, r)))
        .collect();
    let results = par::map_slice(&tasks, |&(i, rep)| -> Result<(f64, f64)> {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(((i as u64) << 32) | rep as u64);
        let idx = sample(&mut rng, cfg.base_size, cfg.n_list[i]).into_vec();
        let img = scdr_sup(&run(&base.subset(&idx)?)?, phi, &grid)?;
        Ok((
            image_distance(&img, &target_img, ImageNorm::LInf)?,
            image_distance(&img, &target_img, ImageNorm::L2Squared)?,
        ))
    });

    let mut report = ExperimentReport::new("convergence", cfg.seed);
    let mut means = vec![(0.0, 0.0); cfg.n_list.len()];
    for (&(i, rep), res) in tasks.iter().zip(results) {
        let (linf, l2) = res?;
        let n = cfg.n_list[i];
        report.push("n", n, "linf", linf, Some(rep));
        report.push("n", n, "l2sq", l2, Some(rep));
        means[i].0 += linf / cfg.reps as f64;
        means[i].1 += l2 / cfg.reps as f64;
    }
    for (&n, &(linf, l2)) in cfg.n_list.iter().zip(&means) {
        report.push("n", n, "mean_linf", linf, None);
        report.push("n", n, "mean_l2sq", l2, None);
    }
    let xs: Vec<f64> = cfg.n_list.iter().map(|&n| n as f64).collect();
    let linf: Vec<f64> = means.iter().map(|m| m.0).collect();
    let l2: Vec<f64> = means.iter().map(|m| m.1).collect();
    report.fits.push(("linf".into(), fit_loglog_slope(&xs, &linf)));
    report.fits.push(("l2sq".into(), fit_loglog_slope(&xs, &l2)));
    Ok(report)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchConfig {
    /// Numbers of summands.
    pub sizes: Vec<usize>,
    /// Grid resolutions per axis.
    pub grids: Vec<usize>,
    pub delta: f64,
    pub seed: u64,
    /// Lattice points per axis of the dense baseline; defaults to the
    /// quadrature resolution of the volume fallback so both target the same
    /// accuracy.
    pub dense_samples: usize,
    /// Each timing is the minimum over this many runs.
    pub repeats: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            sizes: vec![1, 50, 500],
            grids: vec![2, 50],
            delta: 0.05,
            seed: 0,
            dense_samples: VolumeConfig::default().quadrature_resolution,
            repeats: 3,
        }
    }
}

/// Decomposition used by the runtime benchmark: `m` staircases with at most
/// four corners per side in `[0, 1.3]²`.
pub fn bench_decomposition(m: usize, seed: u64) -> Decomposition {
    random_decomposition(m, 2, 4, 0.15, seed)
}

fn time_min<T>(repeats: usize, mut f: impl FnMut() -> Result<T>) -> Result<f64> {
    let mut best = f64::INFINITY;
    for _ in 0..repeats.max(1) {
        let t = Instant::now();
        f()?;
        best = best.min(t.elapsed().as_secs_f64());
    }
    Ok(best)
}

/// Wall times (seconds) of the corner-based representations and of the
/// dense `V_{∞,δ}` volume baseline, with the baseline-over-corner ratio.
pub fn cmd_bench(cfg: &BenchConfig) -> Result<ExperimentReport> {
    if cfg.dense_samples == 0 {
        return Err(Error::InvalidParameter("dense_samples must be positive".into()));
    }
    let mut report = ExperimentReport::new("bench", cfg.seed);
    for &m in &cfg.sizes {
        let decomp = bench_decomposition(m, cfg.seed);
        for &res in &cfg.grids {
            let grid = GridSpec::square2([0.0, 0.0], [1.3, 1.3], res)?;
            let case = format!("m={m};grid={res}x{res}");
            let mut corner_volume = 0.0;
            for kind in PhiKind::ALL {
                let phi = Phi::new(kind, cfg.delta)?;
                let t = time_min(cfg.repeats, || scdr_sup(&decomp, phi, &grid))?;
                if kind == PhiKind::Volume {
                    corner_volume = t;
                }
                report.push("case", &case, format!("time_sup_{}", kind.tag()), t, None);
                if !decomp.is_empty() {
                    for p in [0.0, 1.0] {
                        let t = time_min(cfg.repeats, || scdr_p(&decomp, p, phi, &grid))?;
                        report.push("case", &case, format!("time_p{p}_{}", kind.tag()), t, None);
                    }
                }
            }
            let t = time_min(cfg.repeats, || mpl(&decomp, 1, &grid))?;
            report.push("case", &case, "time_mpl_k1", t, None);
            let dense = time_min(cfg.repeats, || scdr_sup_volume_dense(&decomp, cfg.delta, cfg.dense_samples, &grid))?;
            report.push("case", &case, "time_dense_sup_b", dense, None);
            report.push("case", &case, "speedup_sup_b", dense / corner_volume.max(1e-9), None);
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq)]
pub struct InstabilityConfig {
    pub eps_list: Vec<f64>,
    pub delta: f64,
    pub resolution: usize,
}

impl Default for InstabilityConfig {
    fn default() -> Self {
        InstabilityConfig {
            eps_list: vec![0.0, 0.01, 0.02, 0.05, 0.1],
            delta: 0.1,
            resolution: 60,
        }
    }
}

/// Largest unnormalized support volume among the summands.
pub fn max_summand_volume(decomp: &Decomposition) -> Result<f64> {
    let mut best = 0.0f64;
    for m in decomp.intervals() {
        if let Some((lo, hi)) = m.hull() {
            let rect = AxisBox::new(Point::new(lo)?, Point::new(hi)?)?;
            best = best.max(support_volume(m, &rect, VolumeConfig::default())?);
        }
    }
    Ok(best)
}

/// Bridged versus unbridged squares: the volume-weight proxy discrepancy
/// `mpi_proxy` and the sup-norm distances of `V_{∞,δ}` for every φ kind.
pub fn cmd_instability(cfg: &InstabilityConfig) -> Result<ExperimentReport> {
    if cfg.eps_list.iter().any(|e| !(e.is_finite() && (0.0..1.0).contains(e))) {
        return Err(Error::InvalidParameter("bridge widths must lie in [0, 1)".into()));
    }
    let grid = GridSpec::square2([-0.25, -0.25], [2.25, 2.25], cfg.resolution)?;
    let reference = bridged_squares(0.0);
    let ref_volume = max_summand_volume(&reference)?;
    let phis = PhiKind::ALL
        .iter()
        .map(|&k| Phi::new(k, cfg.delta))
        .collect::<Result<Vec<_>>>()?;
    let ref_images = phis
        .iter()
        .map(|&phi| scdr_sup(&reference, phi, &grid))
        .collect::<Result<Vec<_>>>()?;

    let mut report = ExperimentReport::new("instability", 0);
    for &eps in &cfg.eps_list {
        let bridged = bridged_squares(eps);
        report.push("epsilon", eps, "mpi_proxy", (max_summand_volume(&bridged)? - ref_volume).abs(), None);
        for (&phi, ref_img) in phis.iter().zip(&ref_images) {
            let img = scdr_sup(&bridged, phi, &grid)?;
            let d = image_distance(&img, ref_img, ImageNorm::LInf)?;
            report.push("epsilon", eps, format!("scdr_sup_linf_{}", phi.kind().tag()), d, None);
        }
    }
    Ok(report)
}
