//! File formats: decomposition JSON, image CSV and 16-bit PGM.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Decomposition, IntervalModule, Point};
use crate::representations::GridImage;

/// Coordinate written in place of `+∞` (essential classes).
pub const INFINITE_SENTINEL: f64 = 1e30;

#[derive(Serialize, Deserialize)]
struct IntervalJson {
    births: Vec<Vec<f64>>,
    deaths: Vec<Vec<f64>>,
}

/// Optional bookkeeping carried alongside a decomposition.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DecompositionMeta {
    /// Set when infinite deaths were replaced by a finite coordinate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub infinite_sentinel: Option<f64>,
    /// Axis conventions, e.g. `["distance", "codensity"]`.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub axes: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Serialize, Deserialize)]
struct DecompositionJson {
    dim: usize,
    degree: usize,
    intervals: Vec<IntervalJson>,
    #[serde(default, skip_serializing_if = "is_default_meta")]
    meta: DecompositionMeta,
}

fn is_default_meta(m: &DecompositionMeta) -> bool {
    *m == DecompositionMeta::default()
}

fn points(raw: Vec<Vec<f64>>) -> Result<Vec<Point>> {
    raw.into_iter().map(Point::new).collect()
}

/// Parses the interchange format; corner lists are canonicalized on load.
pub fn decomposition_from_json(text: &str) -> Result<(Decomposition, DecompositionMeta)> {
    let raw: DecompositionJson = serde_json::from_str(text)?;
    let intervals = raw
        .intervals
        .into_iter()
        .map(|iv| IntervalModule::with_dim(raw.dim, points(iv.births)?, points(iv.deaths)?))
        .collect::<Result<Vec<_>>>()?;
    Ok((Decomposition::new(raw.dim, raw.degree, intervals)?, raw.meta))
}

pub fn decomposition_to_json(decomp: &Decomposition, meta: &DecompositionMeta) -> Result<String> {
    let raw = DecompositionJson {
        dim: decomp.dim(),
        degree: decomp.degree(),
        intervals: decomp
            .intervals()
            .iter()
            .map(|m| IntervalJson {
                births: m.births().iter().map(|p| p.coords().to_vec()).collect(),
                deaths: m.deaths().iter().map(|p| p.coords().to_vec()).collect(),
            })
            .collect(),
        meta: meta.clone(),
    };
    Ok(serde_json::to_string_pretty(&raw)?)
}

pub fn read_decomposition(path: &Path) -> Result<(Decomposition, DecompositionMeta)> {
    decomposition_from_json(&fs::read_to_string(path)?)
}

pub fn write_decomposition(path: &Path, decomp: &Decomposition, meta: &DecompositionMeta) -> Result<()> {
    fs::write(path, decomposition_to_json(decomp, meta)? + "\n")?;
    Ok(())
}

/// One row per grid point: coordinates `x0,…,x{n-1}` then `value`.
pub fn write_image_csv<W: Write>(image: &GridImage, mut out: W) -> Result<()> {
    let grid = image.grid();
    let header: Vec<String> = (0..grid.dim()).map(|i| format!("x{i}")).collect();
    writeln!(out, "{},value", header.join(","))?;
    for (i, v) in image.values().iter().enumerate() {
        let coords: Vec<String> = grid.point(i).iter().map(f64::to_string).collect();
        writeln!(out, "{},{}", coords.join(","), v)?;
    }
    Ok(())
}

/// Binary 16-bit PGM (`P5`, maxval 65535, big-endian) of a 2-D image with
/// min-max scaling. Rows run from the largest second coordinate downwards.
/// The scaling and the image metadata are written to `<path>.txt`.
pub fn write_image_pgm(image: &GridImage, path: &Path) -> Result<()> {
    let grid = image.grid();
    if grid.dim() != 2 {
        return Err(Error::InvalidGrid("PGM export needs a 2-D grid".into()));
    }
    let (nx, ny) = (grid.resolution()[0], grid.resolution()[1]);
    let (lo, hi) = (image.min(), image.max());
    let span = hi - lo;
    let mut bytes = format!("P5\n{nx} {ny}\n65535\n").into_bytes();
    for row in (0..ny).rev() {
        for col in 0..nx {
            let v = image.values()[col * ny + row];
            let scaled = if span > 0.0 { (v - lo) / span } else { 0.0 };
            let level = (scaled * 65535.0).round() as u16;
            bytes.extend_from_slice(&level.to_be_bytes());
        }
    }
    fs::write(path, bytes)?;

    let meta = image.meta();
    let mut side = String::new();
    side.push_str(&format!("min = {lo}\nmax = {hi}\n"));
    side.push_str("scaling = (value - min) / (max - min) * 65535\n");
    side.push_str(&format!("lower = {:?}\nupper = {:?}\nresolution = {:?}\n", grid.lower(), grid.upper(), grid.resolution()));
    side.push_str(&format!("representation = {}\n", meta.representation));
    if let Some(d) = meta.degree {
        side.push_str(&format!("degree = {d}\n"));
    }
    if let Some(p) = meta.p {
        side.push_str(&format!("p = {p}\n"));
    }
    if let Some(d) = meta.delta {
        side.push_str(&format!("delta = {d}\n"));
    }
    if let Some(k) = &meta.kind {
        side.push_str(&format!("phi = {k}\n"));
    }
    if let Some(op) = &meta.op {
        side.push_str(&format!("op = {op}\n"));
    }
    let mut sidecar = path.as_os_str().to_owned();
    sidecar.push(".txt");
    fs::write(sidecar, side)?;
    Ok(())
}
