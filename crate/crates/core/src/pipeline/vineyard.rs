//! Candidate decomposition by tracking bars across a family of parallel
//! diagonal slices.
//!
//! Each slicing line `y + t·(1,1)` yields a barcode; consecutive barcodes are
//! matched with a bottleneck matching, and every maximal chain of matched bars
//! becomes one interval summand whose birth (death) corners are the bars'
//! birth (death) points in the plane.

use super::{persistence_1d, slice_to_1d, BiFiltration};
use crate::distances::bottleneck_assignment;
use crate::error::{Error, Result};
use crate::model::{Decomposition, IntervalModule, Point};
use crate::par;

/// `count` basepoints evenly spaced on the antidiagonal of `[lo, hi]`, from
/// `(lo₀, hi₁)` to `(hi₀, lo₁)`.
pub fn antidiagonal_basepoints(lo: [f64; 2], hi: [f64; 2], count: usize) -> Vec<[f64; 2]> {
    (0..count)
        .map(|l| {
            let s = if count > 1 { l as f64 / (count - 1) as f64 } else { 0.0 };
            [lo[0] + s * (hi[0] - lo[0]), hi[1] - s * (hi[1] - lo[1])]
        })
        .collect()
}

/// A bar of one slice, as points of the plane.
#[derive(Clone, Debug)]
struct PlanarBar {
    birth: [f64; 2],
    death: [f64; 2],
    /// Length in the line parameter.
    length: f64,
}

fn sup_dist(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).abs().max((a[1] - b[1]).abs())
}

fn slice_bars(bif: &BiFiltration, degree: usize, y: [f64; 2], hi: [f64; 2]) -> Result<Vec<PlanarBar>> {
    let complex = slice_to_1d(bif, y)?;
    // Essential classes end where the line has swept the whole value box.
    let t_end = (hi[0] - y[0]).max(hi[1] - y[1]);
    let mut bars: Vec<PlanarBar> = persistence_1d(&complex, degree)?
        .into_iter()
        .filter_map(|bar| {
            let death = if bar.is_essential() { t_end } else { bar.death };
            (death > bar.birth).then(|| PlanarBar {
                birth: [y[0] + bar.birth, y[1] + bar.birth],
                death: [y[0] + death, y[1] + death],
                length: death - bar.birth,
            })
        })
        .collect();
    // Longest bars first: they claim matches before short ones on ties.
    bars.sort_by(|a, b| {
        b.length
            .total_cmp(&a.length)
            .then(a.birth[0].total_cmp(&b.birth[0]))
            .then(a.birth[1].total_cmp(&b.birth[1]))
    });
    Ok(bars)
}

/// Pairs `(i, j)` of bars kept as continuations from `left` to `right`.
fn match_slices(left: &[PlanarBar], right: &[PlanarBar]) -> Vec<(usize, usize)> {
    let lu: Vec<f64> = left.iter().map(|b| 0.5 * b.length).collect();
    let ru: Vec<f64> = right.iter().map(|b| 0.5 * b.length).collect();
    let pair_cost = |i: usize, j: usize| {
        sup_dist(left[i].birth, right[j].birth).max(sup_dist(left[i].death, right[j].death))
    };
    let matching = bottleneck_assignment(&lu, &ru, pair_cost);
    matching
        .pairs
        .into_iter()
        .filter(|&(i, j)| {
            let c = pair_cost(i, j);
            c < lu[i] && c < ru[j]
        })
        .collect()
}

/// Vineyard approximation of the degree-`degree` module of `bif` using
/// `num_lines ≥ 2` diagonal slices.
pub fn vineyard_decompose(bif: &BiFiltration, degree: usize, num_lines: usize) -> Result<Decomposition> {
    if num_lines < 2 {
        return Err(Error::InvalidParameter(format!("at least 2 slicing lines are needed, got {num_lines}")));
    }
    let Some((lo, hi)) = bif.value_bounds() else {
        return Ok(Decomposition::empty(2, degree));
    };
    let basepoints = antidiagonal_basepoints(lo, hi, num_lines);
    let slices: Vec<Vec<PlanarBar>> = par::map_slice(&basepoints, |y| slice_bars(bif, degree, *y, hi))
        .into_iter()
        .collect::<Result<_>>()?;

    let mut chains: Vec<(Vec<[f64; 2]>, Vec<[f64; 2]>)> = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    for (l, bars) in slices.iter().enumerate() {
        let mut next = vec![usize::MAX; bars.len()];
        if l > 0 {
            for (i, j) in match_slices(&slices[l - 1], bars) {
                next[j] = active[i];
            }
        }
        for (j, bar) in bars.iter().enumerate() {
            if next[j] == usize::MAX {
                next[j] = chains.len();
                chains.push((Vec::new(), Vec::new()));
            }
            chains[next[j]].0.push(bar.birth);
            chains[next[j]].1.push(bar.death);
        }
        active = next;
    }

    let to_points = |v: Vec<[f64; 2]>| v.into_iter().map(|p| Point::new(p.to_vec())).collect::<Result<Vec<_>>>();
    let intervals = chains
        .into_iter()
        .map(|(b, d)| IntervalModule::with_dim(2, to_points(b)?, to_points(d)?))
        .collect::<Result<Vec<_>>>()?;
    Decomposition::new(2, degree, intervals)
}
