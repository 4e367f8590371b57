use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// A finite point cloud in ℝ^D.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    points: Vec<Vec<f64>>,
    labels: Option<Vec<String>>,
}

impl PointCloud {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let dim = points.first().map(Vec::len).ok_or_else(|| Error::Degenerate("empty point cloud".into()))?;
        if dim == 0 {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        for p in &points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: p.len() });
            }
            if p.iter().any(|c| !c.is_finite()) {
                return Err(Error::NonFinite("point cloud"));
            }
        }
        Ok(PointCloud { points, labels: None })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.points.len() {
            return Err(Error::InvalidParameter("one label per point is required".into()));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.points[0].len()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Coordinatewise bounding box.
    pub fn bounds(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = self.points[0].clone();
        let mut hi = self.points[0].clone();
        for p in &self.points {
            for (j, c) in p.iter().enumerate() {
                lo[j] = lo[j].min(*c);
                hi[j] = hi[j].max(*c);
            }
        }
        (lo, hi)
    }

    /// The points at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Result<PointCloud> {
        PointCloud::new(indices.iter().map(|&i| self.points[i].clone()).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for p in &self.points {
            let row: Vec<String> = p.iter().map(f64::to_string).collect();
            s.push_str(&row.join(","));
            s.push('\n');
        }
        s
    }
}

/// Parses CSV text, one point per row. A first row that does not parse as
/// numbers is taken as a header; a header column named `label` is read as
/// per-point labels.
pub fn parse_pointcloud(text: &str, path: &Path) -> Result<PointCloud> {
    let err = |line: usize, msg: String| Error::Parse { path: path.to_path_buf(), line, msg };
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    let mut label_col: Option<usize> = None;
    let mut first = true;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = trimmed.split(',').map(str::trim).collect();
        if first {
            first = false;
            let numeric = fields.iter().all(|f| f.parse::<f64>().is_ok());
            if !numeric {
                label_col = fields.iter().position(|f| f.eq_ignore_ascii_case("label"));
                continue;
            }
        }
        let mut coords = Vec::with_capacity(fields.len());
        for (col, f) in fields.iter().enumerate() {
            if Some(col) == label_col {
                labels.push(f.to_string());
                continue;
            }
            let v: f64 = f.parse().map_err(|_| err(line, format!("not a number: {f:?}")))?;
            if !v.is_finite() {
                return Err(err(line, format!("non-finite value {f:?}")));
            }
            coords.push(v);
        }
        if let Some(prev) = rows.first().map(|r: &Vec<f64>| r.len()) {
            if prev != coords.len() {
                return Err(err(line, format!("expected {prev} coordinates, found {}", coords.len())));
            }
        }
        rows.push(coords);
    }
    if rows.is_empty() {
        return Err(err(0, "no points".into()));
    }
    let cloud = PointCloud::new(rows)?;
    if label_col.is_some() {
        cloud.with_labels(labels)
    } else {
        Ok(cloud)
    }
}

pub fn load_pointcloud(path: &Path) -> Result<PointCloud> {
    parse_pointcloud(&fs::read_to_string(path)?, path)
}
