//! Standard column reduction over ℤ/2 with the clearing optimization.

use super::FilteredComplex1D;
use crate::error::{Error, Result};
use crate::model::{Bar, Barcode};

/// A persistence pair in filtration positions; `death = None` for essential
/// classes. Zero-length pairs are kept.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PersistencePair {
    pub dim: usize,
    pub birth: usize,
    pub death: Option<usize>,
}

/// `a ← a + b` over ℤ/2 for sorted index columns.
fn add_column(a: &mut Vec<usize>, b: &[usize], scratch: &mut Vec<usize>) {
    scratch.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                scratch.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                scratch.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    scratch.extend_from_slice(&a[i..]);
    scratch.extend_from_slice(&b[j..]);
    std::mem::swap(a, scratch);
}

/// All persistence pairs of the complex, in every dimension.
pub fn persistence_pairs(complex: &FilteredComplex1D) -> Result<Vec<PersistencePair>> {
    let n = complex.len();
    let dims = complex.dims();
    for (j, faces) in complex.boundaries().iter().enumerate() {
        if faces.iter().any(|&f| f >= j) {
            return Err(Error::FaceOrder(j));
        }
    }
    let top = dims.iter().copied().max().unwrap_or(0);
    let mut columns: Vec<Vec<usize>> = complex.boundaries().to_vec();
    let mut pivot_owner = vec![usize::MAX; n];
    let mut cleared = vec![false; n];
    let mut scratch = Vec::new();
    let mut pairs = Vec::new();

    for d in (1..=top).rev() {
        for j in (0..n).filter(|&j| dims[j] == d) {
            if cleared[j] {
                columns[j].clear();
                continue;
            }
            let mut col = std::mem::take(&mut columns[j]);
            while let Some(&low) = col.last() {
                let owner = pivot_owner[low];
                if owner == usize::MAX {
                    break;
                }
                add_column(&mut col, &columns[owner], &mut scratch);
            }
            if let Some(&low) = col.last() {
                pivot_owner[low] = j;
                cleared[low] = true;
                pairs.push(PersistencePair {
                    dim: d - 1,
                    birth: low,
                    death: Some(j),
                });
            }
            columns[j] = col;
        }
    }
    // Positive simplices that never became a pivot are essential.
    for i in 0..n {
        let positive = columns[i].is_empty();
        if positive && pivot_owner[i] == usize::MAX {
            pairs.push(PersistencePair {
                dim: dims[i],
                birth: i,
                death: None,
            });
        }
    }
    Ok(pairs)
}

/// Barcode in degree `degree`; essential classes die at `+∞`, empty bars
/// are dropped.
pub fn persistence_1d(complex: &FilteredComplex1D, degree: usize) -> Result<Barcode> {
    let values = complex.values();
    let mut bars: Barcode = persistence_pairs(complex)?
        .into_iter()
        .filter(|p| p.dim == degree)
        .filter_map(|p| {
            let death = p.death.map_or(f64::INFINITY, |d| values[d]);
            Bar::new(values[p.birth], death)
        })
        .collect();
    crate::model::sort_barcode(&mut bars);
    Ok(bars)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hollow_triangle(with_face: bool) -> FilteredComplex1D {
        let mut s = vec![
            (vec![0], 0.0),
            (vec![1], 0.0),
            (vec![2], 0.0),
            (vec![0, 1], 1.0),
            (vec![1, 2], 2.0),
            (vec![0, 2], 3.0),
        ];
        if with_face {
            s.push((vec![0, 1, 2], 4.0));
        }
        FilteredComplex1D::from_simplices(&s).unwrap()
    }

    fn bars(pairs: &[(f64, f64)]) -> Barcode {
        pairs.iter().map(|&(b, d)| Bar { birth: b, death: d }).collect()
    }

    #[test]
    fn hollow_triangle_barcodes() {
        let c = hollow_triangle(false);
        let inf = f64::INFINITY;
        assert_eq!(persistence_1d(&c, 0).unwrap(), bars(&[(0.0, 1.0), (0.0, 2.0), (0.0, inf)]));
        assert_eq!(persistence_1d(&c, 1).unwrap(), bars(&[(3.0, inf)]));
    }

    #[test]
    fn filled_triangle_kills_the_cycle() {
        let c = hollow_triangle(true);
        assert_eq!(persistence_1d(&c, 1).unwrap(), bars(&[(3.0, 4.0)]));
    }

    #[test]
    fn single_vertex() {
        let c = FilteredComplex1D::from_simplices(&[(vec![0], 0.0)]).unwrap();
        assert_eq!(persistence_1d(&c, 0).unwrap(), bars(&[(0.0, f64::INFINITY)]));
        assert!(persistence_1d(&c, 1).unwrap().is_empty());
    }

    #[test]
    fn empty_complex_has_no_bars() {
        let c = FilteredComplex1D::from_simplices(&[]).unwrap();
        assert!(persistence_1d(&c, 0).unwrap().is_empty());
    }
}
