use std::collections::HashMap;

use super::{kde, PointCloud};
use crate::error::{Error, Result};
use crate::par;
use crate::representations::GridSpec;

/// A simplicial complex whose simplices carry values in ℝ², with every face
/// present and no face valued above any of its cofaces.
#[derive(Clone, Debug, PartialEq)]
pub struct BiFiltration {
    /// Sorted vertex lists.
    simplices: Vec<Vec<usize>>,
    values: Vec<[f64; 2]>,
    /// Indices of the codimension-1 faces of each simplex.
    boundaries: Vec<Vec<usize>>,
    /// Planar position of each vertex when the complex comes from a grid.
    positions: Vec<[f64; 2]>,
}

/// Indices of the codimension-1 faces of `simplex` (empty for vertices).
fn faces_of(simplex: &[usize], index: &HashMap<Vec<usize>, usize>) -> Option<Vec<usize>> {
    if simplex.len() < 2 {
        return Some(Vec::new());
    }
    (0..simplex.len())
        .map(|skip| {
            let face: Vec<usize> = simplex
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != skip)
                .map(|(_, v)| *v)
                .collect();
            index.get(&face).copied()
        })
        .collect()
}

impl BiFiltration {
    /// Builds a bifiltration from `(vertices, value)` pairs in any order.
    /// Fails when a face is missing or valued above one of its cofaces.
    pub fn from_simplices(simplices: Vec<(Vec<usize>, [f64; 2])>) -> Result<Self> {
        let mut verts = Vec::with_capacity(simplices.len());
        let mut values = Vec::with_capacity(simplices.len());
        for (mut s, v) in simplices {
            if s.is_empty() {
                return Err(Error::InvalidParameter("empty simplex".into()));
            }
            if v.iter().any(|c| !c.is_finite()) {
                return Err(Error::NonFinite("filtration value"));
            }
            s.sort_unstable();
            s.dedup();
            verts.push(s);
            values.push(v);
        }
        let index: HashMap<Vec<usize>, usize> =
            verts.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let mut boundaries = Vec::with_capacity(verts.len());
        for (i, s) in verts.iter().enumerate() {
            let faces = faces_of(s, &index).ok_or(Error::FaceOrder(i))?;
            for &f in &faces {
                if values[f][0] > values[i][0] || values[f][1] > values[i][1] {
                    return Err(Error::FaceOrder(i));
                }
            }
            boundaries.push(faces);
        }
        Ok(BiFiltration {
            simplices: verts,
            values,
            boundaries,
            positions: Vec::new(),
        })
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn simplices(&self) -> &[Vec<usize>] {
        &self.simplices
    }

    pub fn values(&self) -> &[[f64; 2]] {
        &self.values
    }

    pub fn boundaries(&self) -> &[Vec<usize>] {
        &self.boundaries
    }

    pub fn positions(&self) -> &[[f64; 2]] {
        &self.positions
    }

    /// Number of simplices of each dimension.
    pub fn counts_by_dim(&self) -> Vec<usize> {
        let top = self.simplices.iter().map(Vec::len).max().unwrap_or(0);
        let mut counts = vec![0; top];
        for s in &self.simplices {
            counts[s.len() - 1] += 1;
        }
        counts
    }

    /// Bounding box of all filtration values.
    pub fn value_bounds(&self) -> Option<([f64; 2], [f64; 2])> {
        let first = *self.values.first()?;
        Some(self.values.iter().fold((first, first), |(lo, hi), v| {
            ([lo[0].min(v[0]), lo[1].min(v[1])], [hi[0].max(v[0]), hi[1].max(v[1])])
        }))
    }
}

/// Freudenthal triangulation of the grid's cell centers, filtered by
/// (distance to the cloud, −density) at the vertices and by the
/// componentwise maximum over vertices for higher simplices.
pub fn build_bifiltration(cloud: &PointCloud, grid: &GridSpec, bandwidth: f64) -> Result<BiFiltration> {
    if cloud.dim() != 2 || grid.dim() != 2 {
        return Err(Error::InvalidParameter("the bifiltration pipeline is planar (D = 2)".into()));
    }
    let (nx, ny) = (grid.resolution()[0], grid.resolution()[1]);
    if nx < 2 || ny < 2 {
        return Err(Error::InvalidGrid("need at least 2×2 vertices".into()));
    }
    let queries = grid.points();
    let density = kde(cloud, bandwidth, &queries)?;
    let distance = par::map_slice(&queries, |q| {
        cloud
            .points()
            .iter()
            .map(|x| ((x[0] - q[0]).powi(2) + (x[1] - q[1]).powi(2)).sqrt())
            .fold(f64::INFINITY, f64::min)
    });
    let vertex_values: Vec<[f64; 2]> = distance.iter().zip(&density).map(|(d, f)| [*d, -*f]).collect();
    let id = |i: usize, j: usize| i * ny + j;
    let mut simplices: Vec<(Vec<usize>, [f64; 2])> = Vec::new();
    let lower_star = |vs: &[usize]| {
        vs.iter().fold([f64::NEG_INFINITY; 2], |acc, &v| {
            [acc[0].max(vertex_values[v][0]), acc[1].max(vertex_values[v][1])]
        })
    };
    for v in 0..nx * ny {
        simplices.push((vec![v], vertex_values[v]));
    }
    for i in 0..nx {
        for j in 0..ny {
            let mut edges = Vec::new();
            if i + 1 < nx {
                edges.push(vec![id(i, j), id(i + 1, j)]);
            }
            if j + 1 < ny {
                edges.push(vec![id(i, j), id(i, j + 1)]);
            }
            if i + 1 < nx && j + 1 < ny {
                edges.push(vec![id(i, j), id(i + 1, j + 1)]);
                for tri in [
                    vec![id(i, j), id(i + 1, j), id(i + 1, j + 1)],
                    vec![id(i, j), id(i, j + 1), id(i + 1, j + 1)],
                ] {
                    let v = lower_star(&tri);
                    simplices.push((tri, v));
                }
            }
            for e in edges {
                let v = lower_star(&e);
                simplices.push((e, v));
            }
        }
    }
    let mut bif = BiFiltration::from_simplices(simplices)?;
    bif.positions = queries.iter().map(|q| [q[0], q[1]]).collect();
    Ok(bif)
}

/// A simplicial complex filtered by one real parameter, stored in filtration
/// order: by value, then dimension, then original index.
#[derive(Clone, Debug, PartialEq)]
pub struct FilteredComplex1D {
    dims: Vec<usize>,
    values: Vec<f64>,
    boundaries: Vec<Vec<usize>>,
}

impl FilteredComplex1D {
    /// Orders the simplices and checks the face condition. `boundaries[i]`
    /// lists the codimension-1 faces of simplex `i` by input index.
    pub fn new(dims: Vec<usize>, values: Vec<f64>, boundaries: Vec<Vec<usize>>) -> Result<Self> {
        let n = dims.len();
        if values.len() != n || boundaries.len() != n {
            return Err(Error::InvalidParameter("simplex arrays differ in length".into()));
        }
        for i in 0..n {
            if values[i].is_nan() {
                return Err(Error::NonFinite("filtration value"));
            }
            let expected = if dims[i] == 0 { 0 } else { dims[i] + 1 };
            if boundaries[i].len() != expected {
                return Err(Error::FaceOrder(i));
            }
            for &f in &boundaries[i] {
                if f >= n || dims[f] + 1 != dims[i] || values[f] > values[i] {
                    return Err(Error::FaceOrder(i));
                }
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| {
            values[a]
                .total_cmp(&values[b])
                .then(dims[a].cmp(&dims[b]))
                .then(a.cmp(&b))
        });
        let mut rank = vec![0; n];
        for (pos, &orig) in order.iter().enumerate() {
            rank[orig] = pos;
        }
        let boundaries = order
            .iter()
            .map(|&orig| {
                let mut b: Vec<usize> = boundaries[orig].iter().map(|&f| rank[f]).collect();
                b.sort_unstable();
                b
            })
            .collect();
        Ok(FilteredComplex1D {
            dims: order.iter().map(|&i| dims[i]).collect(),
            values: order.iter().map(|&i| values[i]).collect(),
            boundaries,
        })
    }

    /// Builds a complex from vertex lists; faces must all be listed.
    pub fn from_simplices(simplices: &[(Vec<usize>, f64)]) -> Result<Self> {
        let sorted: Vec<Vec<usize>> = simplices
            .iter()
            .map(|(s, _)| {
                let mut s = s.clone();
                s.sort_unstable();
                s
            })
            .collect();
        let index: HashMap<Vec<usize>, usize> =
            sorted.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
        let boundaries = sorted
            .iter()
            .enumerate()
            .map(|(i, s)| faces_of(s, &index).ok_or(Error::FaceOrder(i)))
            .collect::<Result<Vec<_>>>()?;
        FilteredComplex1D::new(
            sorted.iter().map(|s| s.len() - 1).collect(),
            simplices.iter().map(|(_, v)| *v).collect(),
            boundaries,
        )
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Faces of each simplex, as positions in filtration order.
    pub fn boundaries(&self) -> &[Vec<usize>] {
        &self.boundaries
    }
}

/// Restriction of a bifiltration to the diagonal line through `basepoint`:
/// each simplex enters at `t(σ) = max_i (f_i(σ) − y_i)`.
pub fn slice_to_1d(bif: &BiFiltration, basepoint: [f64; 2]) -> Result<FilteredComplex1D> {
    let values = bif
        .values
        .iter()
        .map(|v| (v[0] - basepoint[0]).max(v[1] - basepoint[1]))
        .collect();
    FilteredComplex1D::new(
        bif.simplices.iter().map(|s| s.len() - 1).collect(),
        values,
        bif.boundaries.clone(),
    )
}
