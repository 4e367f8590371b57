use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mpcorner::distances::bottleneck;
use mpcorner::experiments::{
    cmd_bench, cmd_convergence, cmd_instability, grid_around, BenchConfig, ConfigMap, ConvergenceConfig,
    ExperimentReport, Generator, InstabilityConfig,
};
use mpcorner::io::{read_decomposition, write_decomposition, write_image_csv, write_image_pgm, DecompositionMeta, INFINITE_SENTINEL};
use mpcorner::pipeline::{decompose_cloud, load_pointcloud, PipelineConfig};
use mpcorner::representations::{image_distance, mpl, scdr_p, scdr_sup, GridImage, GridSpec, ImageNorm};
use mpcorner::{par, Decomposition, Error, Phi, PhiKind, Result};

#[derive(Parser)]
#[command(name = "mpcorner", version, about = "Corner-based representations of multiparameter persistence decompositions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

/// Flags shared by every command; each overrides the key of the same name in
/// the `--config` file.
#[derive(Args)]
struct Common {
    /// `key = value` settings file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true)]
    delta: Option<f64>,
    /// φ kind: a (weight), b (volume) or c (largest rectangle).
    #[arg(long, global = true)]
    phi: Option<String>,
    /// Weight exponent, or `sup`.
    #[arg(long, global = true)]
    p: Option<String>,
    /// Grid resolution `WxH` (image grid; triangulation grid for `decompose`).
    #[arg(long, global = true)]
    grid: Option<String>,
    #[arg(long, global = true)]
    bandwidth: Option<f64>,
    #[arg(long, global = true)]
    lines: Option<usize>,
    #[arg(long, global = true)]
    degree: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Point-cloud CSV → decomposition JSON.
    Decompose {
        input: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Decomposition JSON → image (`<out>.csv`, plus `<out>.pgm` in 2-D).
    Represent {
        input: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        /// Emit the k-th landscape instead of an SCDR.
        #[arg(long)]
        landscape: Option<usize>,
    },
    /// Image distances between two decompositions, plus the bottleneck
    /// distance when both consist of rectangles.
    Distance { a: PathBuf, b: PathBuf },
    /// Subsampling convergence experiment.
    Convergence {
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Runtime of corner formulas versus dense sampling.
    Bench {
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Bridged versus unbridged squares.
    Instability {
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

const KNOWN_KEYS: &[&str] = &[
    "seed", "workers", "delta", "phi", "p", "grid", "bandwidth", "lines", "degree", "padding", "bounds",
    "norm", "generator", "base_size", "n_list", "reps", "sizes", "grids", "dense_samples", "repeats",
    "eps_list",
];

fn load_config(common: &Common) -> Result<ConfigMap> {
    let mut cfg = match &common.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Error::Config {
                line: 0,
                msg: format!("{}: {e}", path.display()),
            })?;
            ConfigMap::parse(&text)?
        }
        None => ConfigMap::default(),
    };
    cfg.check_keys(KNOWN_KEYS)?;
    let overrides = [
        ("seed", common.seed.map(|v| v.to_string())),
        ("workers", common.workers.map(|v| v.to_string())),
        ("delta", common.delta.map(|v| v.to_string())),
        ("phi", common.phi.clone()),
        ("p", common.p.clone()),
        ("grid", common.grid.clone()),
        ("bandwidth", common.bandwidth.map(|v| v.to_string())),
        ("lines", common.lines.map(|v| v.to_string())),
        ("degree", common.degree.map(|v| v.to_string())),
    ];
    for (key, value) in overrides {
        if let Some(v) = value {
            cfg.set(key, v);
        }
    }
    Ok(cfg)
}

fn parse_grid(cfg: &ConfigMap, default: [usize; 2]) -> Result<[usize; 2]> {
    let Some(text) = cfg.get_str("grid") else {
        return Ok(default);
    };
    let bad = || Error::InvalidParameter(format!("grid must look like WxH, got `{text}`"));
    let (w, h) = text.split_once(['x', 'X']).ok_or_else(bad)?;
    Ok([w.trim().parse().map_err(|_| bad())?, h.trim().parse().map_err(|_| bad())?])
}

fn parse_phi(cfg: &ConfigMap, default_delta: f64) -> Result<Phi> {
    let tag = cfg.get_str("phi").unwrap_or("b");
    let kind = PhiKind::from_tag(tag).ok_or_else(|| Error::InvalidParameter(format!("phi must be a, b or c, got `{tag}`")))?;
    Phi::new(kind, cfg.get("delta")?.unwrap_or(default_delta))
}

/// `None` means the supremum representation.
fn parse_p(cfg: &ConfigMap) -> Result<Option<f64>> {
    match cfg.get_str("p") {
        None | Some("sup") | Some("inf") => Ok(None),
        Some(v) => v
            .parse()
            .map(Some)
            .map_err(|_| Error::InvalidParameter(format!("p must be a number or `sup`, got `{v}`"))),
    }
}

fn pipeline_config(cfg: &ConfigMap) -> Result<PipelineConfig> {
    let d = PipelineConfig::default();
    let pc = PipelineConfig {
        resolution: parse_grid(cfg, d.resolution)?,
        bandwidth: cfg.get("bandwidth")?.unwrap_or(d.bandwidth),
        lines: cfg.get("lines")?.unwrap_or(d.lines),
        degree: cfg.get("degree")?.unwrap_or(d.degree),
        padding: cfg.get("padding")?.unwrap_or(d.padding),
    };
    pc.validate()?;
    Ok(pc)
}

/// Image grid from `bounds = x0,y0,…,x1,y1,…` or, by default, the corners'
/// hull widened by δ. Sentinel coordinates standing for `+∞` are ignored.
fn image_grid(cfg: &ConfigMap, decomp: &Decomposition, delta: f64) -> Result<GridSpec> {
    let n = decomp.dim();
    let res = if n == 2 { parse_grid(cfg, [50, 50])?.to_vec() } else { vec![20; n] };
    if let Some(b) = cfg.get_list::<f64>("bounds")? {
        if b.len() != 2 * n {
            return Err(Error::InvalidParameter(format!("bounds needs {} numbers", 2 * n)));
        }
        return GridSpec::new(b[..n].to_vec(), b[n..].to_vec(), res);
    }
    let mut lo = vec![f64::INFINITY; n];
    let mut hi = vec![f64::NEG_INFINITY; n];
    for m in decomp.intervals() {
        for p in m.births().iter().chain(m.deaths()) {
            for (j, &c) in p.coords().iter().enumerate() {
                if c.abs() < 0.5 * INFINITE_SENTINEL {
                    lo[j] = lo[j].min(c);
                    hi[j] = hi[j].max(c);
                }
            }
        }
    }
    if lo.iter().zip(&hi).all(|(l, h)| l < h) {
        GridSpec::new(lo.iter().map(|v| v - delta).collect(), hi.iter().map(|v| v + delta).collect(), res)
    } else {
        grid_around(decomp, delta, &res)
    }
}

fn representation(cfg: &ConfigMap, decomp: &Decomposition, landscape: Option<usize>) -> Result<GridImage> {
    let phi = parse_phi(cfg, 0.1)?;
    let grid = image_grid(cfg, decomp, phi.delta())?;
    match (landscape, parse_p(cfg)?) {
        (Some(k), _) => mpl(decomp, k, &grid),
        (None, Some(p)) => scdr_p(decomp, p, phi, &grid),
        (None, None) => scdr_sup(decomp, phi, &grid),
    }
}

fn with_extension(path: &Path, ext: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

fn emit(report: &ExperimentReport, out: Option<&Path>) -> Result<()> {
    let csv = report.to_csv();
    match out {
        Some(path) => fs::write(path, csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let cfg = load_config(&cli.common)?;
    let seed: u64 = cfg.get("seed")?.unwrap_or(0);
    let workers: usize = cfg.get("workers")?.unwrap_or(0);
    par::with_workers(workers, || match cli.command {
        Command::Decompose { input, out } => {
            let pc = pipeline_config(&cfg)?;
            let cloud = load_pointcloud(&input)?;
            let decomp = decompose_cloud(&cloud, &pc)?;
            let meta = DecompositionMeta {
                infinite_sentinel: None,
                axes: vec!["distance".into(), "codensity".into()],
                seed: Some(seed),
            };
            write_decomposition(&out, &decomp, &meta)
        }
        Command::Represent { input, out, landscape } => {
            let (decomp, _) = read_decomposition(&input)?;
            let image = representation(&cfg, &decomp, landscape)?;
            write_image_csv(&image, fs::File::create(with_extension(&out, "csv"))?)?;
            if image.grid().dim() == 2 {
                write_image_pgm(&image, &with_extension(&out, "pgm"))?;
            }
            Ok(())
        }
        Command::Distance { a, b } => {
            let (da, _) = read_decomposition(&a)?;
            let (db, _) = read_decomposition(&b)?;
            if da.dim() != db.dim() {
                return Err(Error::DimensionMismatch { expected: da.dim(), found: db.dim() });
            }
            let phi = parse_phi(&cfg, 0.1)?;
            let union = Decomposition::new(da.dim(), da.degree(), [da.intervals(), db.intervals()].concat())?;
            let grid = image_grid(&cfg, &union, phi.delta())?;
            let (ia, ib) = match parse_p(&cfg)? {
                Some(p) => (scdr_p(&da, p, phi, &grid)?, scdr_p(&db, p, phi, &grid)?),
                None => (scdr_sup(&da, phi, &grid)?, scdr_sup(&db, phi, &grid)?),
            };
            println!("metric,value");
            println!("image_linf,{}", image_distance(&ia, &ib, ImageNorm::LInf)?);
            println!("image_l2sq,{}", image_distance(&ia, &ib, ImageNorm::L2Squared)?);
            if da.intervals().iter().chain(db.intervals()).all(|m| m.is_rectangle()) {
                println!("bottleneck,{}", bottleneck(&da, &db)?.cost);
            }
            Ok(())
        }
        Command::Convergence { out } => {
            let d = ConvergenceConfig::default();
            let phi = parse_phi(&cfg, d.delta)?;
            let image = parse_grid(&cfg, d.image_resolution)?;
            let mut pipeline = PipelineConfig {
                bandwidth: cfg.get("bandwidth")?.unwrap_or(d.pipeline.bandwidth),
                lines: cfg.get("lines")?.unwrap_or(d.pipeline.lines),
                degree: cfg.get("degree")?.unwrap_or(d.pipeline.degree),
                ..d.pipeline.clone()
            };
            pipeline.padding = cfg.get("padding")?.unwrap_or(pipeline.padding);
            let c = ConvergenceConfig {
                generator: cfg.get::<Generator>("generator")?.unwrap_or(d.generator),
                base_size: cfg.get("base_size")?.unwrap_or(d.base_size),
                n_list: cfg.get_list("n_list")?.unwrap_or(d.n_list),
                reps: cfg.get("reps")?.unwrap_or(d.reps),
                seed,
                delta: phi.delta(),
                kind: phi.kind(),
                image_resolution: image,
                pipeline,
            };
            emit(&cmd_convergence(&c)?, out.as_deref())
        }
        Command::Bench { out } => {
            let d = BenchConfig::default();
            let c = BenchConfig {
                sizes: cfg.get_list("sizes")?.unwrap_or(d.sizes),
                grids: cfg.get_list("grids")?.unwrap_or(d.grids),
                delta: cfg.get("delta")?.unwrap_or(d.delta),
                seed,
                dense_samples: cfg.get("dense_samples")?.unwrap_or(d.dense_samples),
                repeats: cfg.get("repeats")?.unwrap_or(d.repeats),
            };
            emit(&cmd_bench(&c)?, out.as_deref())
        }
        Command::Instability { out } => {
            let d = InstabilityConfig::default();
            let res = parse_grid(&cfg, [d.resolution, d.resolution])?;
            if res[0] != res[1] {
                return Err(Error::InvalidParameter("instability uses a square grid".into()));
            }
            let c = InstabilityConfig {
                eps_list: cfg.get_list("eps_list")?.unwrap_or(d.eps_list),
                delta: cfg.get("delta")?.unwrap_or(d.delta),
                resolution: res[0],
            };
            emit(&cmd_instability(&c)?, out.as_deref())
        }
    })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.tag());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
