//! Interleaving and bottleneck distances.
//!
//! Exact distances between summands are restricted to rectangle modules; the
//! distance of any staircase to the zero module is available in closed form.

use crate::error::{Error, Result};
use crate::invariants::weight;
use crate::model::{Decomposition, IntervalModule, Point};

/// An optimal matching between two families and its bottleneck cost.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MatchingResult {
    pub cost: f64,
    pub pairs: Vec<(usize, usize)>,
    pub unmatched_left: Vec<usize>,
    pub unmatched_right: Vec<usize>,
}

/// `d_I(M, 0)`, equal to the weight of the module.
pub fn interleaving_to_zero(module: &IntervalModule) -> f64 {
    weight(module)
}

fn rectangle_corners(m: &IntervalModule) -> Result<(&Point, &Point)> {
    if m.is_rectangle() {
        Ok((&m.births()[0], &m.deaths()[0]))
    } else {
        Err(Error::NotRectangle)
    }
}

fn sup_dist(a: &Point, b: &Point) -> f64 {
    a.coords()
        .iter()
        .zip(b.coords())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Interleaving distance between two rectangle modules:
/// `min(max(‖b − b′‖∞, ‖d − d′‖∞), max(w, w′))`.
///
/// The zero module is accepted on either side and treated as the empty
/// rectangle.
pub fn interleaving_rect(a: &IntervalModule, b: &IntervalModule) -> Result<f64> {
    match (a.is_zero(), b.is_zero()) {
        (true, true) => return Ok(0.0),
        (true, false) => return rectangle_corners(b).map(|_| weight(b)),
        (false, true) => return rectangle_corners(a).map(|_| weight(a)),
        _ => {}
    }
    let (ba, da) = rectangle_corners(a)?;
    let (bb, db) = rectangle_corners(b)?;
    if ba.dim() != bb.dim() {
        return Err(Error::DimensionMismatch {
            expected: ba.dim(),
            found: bb.dim(),
        });
    }
    let shift = sup_dist(ba, bb).max(sup_dist(da, db));
    Ok(shift.min(weight(a).max(weight(b))))
}

/// Whether two rectangle modules are `ε`-interleaved: either both are
/// `ε`-interleaved with zero, or both corner pairs are within `ε` in ℓ∞.
pub fn interleaving_oracle_rect(a: &IntervalModule, b: &IntervalModule, epsilon: f64) -> Result<bool> {
    let (wa, wb) = (weight(a), weight(b));
    let to_zero = wa <= epsilon && wb <= epsilon;
    if a.is_zero() || b.is_zero() {
        for m in [a, b] {
            if !m.is_zero() {
                rectangle_corners(m)?;
            }
        }
        return Ok(to_zero);
    }
    let (ba, da) = rectangle_corners(a)?;
    let (bb, db) = rectangle_corners(b)?;
    Ok(to_zero || (sup_dist(ba, bb) <= epsilon && sup_dist(da, db) <= epsilon))
}

/// Bottleneck distance between two decompositions made of rectangles.
pub fn bottleneck(a: &Decomposition, b: &Decomposition) -> Result<MatchingResult> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    for m in a.intervals().iter().chain(b.intervals()) {
        if !m.is_zero() && !m.is_rectangle() {
            return Err(Error::NotRectangle);
        }
    }
    let left: Vec<f64> = a.intervals().iter().map(weight).collect();
    let right: Vec<f64> = b.intervals().iter().map(weight).collect();
    let mut cost = vec![0.0; left.len() * right.len()];
    for (i, ma) in a.intervals().iter().enumerate() {
        for (j, mb) in b.intervals().iter().enumerate() {
            cost[i * right.len() + j] = interleaving_rect(ma, mb)?;
        }
    }
    Ok(bottleneck_assignment(&left, &right, |i, j| cost[i * right.len() + j]))
}

/// Bottleneck matching between two families, where item `i` of the left
/// family may stay unmatched at cost `left_unmatched[i]` (similarly on the
/// right) and a pair costs `pair_cost(i, j)`.
///
/// Binary search over the sorted candidate costs, with a perfect-matching
/// feasibility test on the usual augmented bipartite graph (each side padded
/// with one "zero" copy per item of the other side).
pub fn bottleneck_assignment(
    left_unmatched: &[f64],
    right_unmatched: &[f64],
    pair_cost: impl Fn(usize, usize) -> f64,
) -> MatchingResult {
    let (m, k) = (left_unmatched.len(), right_unmatched.len());
    if m == 0 && k == 0 {
        return MatchingResult::default();
    }
    let costs: Vec<f64> = (0..m * k).map(|idx| pair_cost(idx / k, idx % k)).collect();
    let mut candidates: Vec<f64> = costs
        .iter()
        .chain(left_unmatched)
        .chain(right_unmatched)
        .copied()
        .chain(std::iter::once(0.0))
        .collect();
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();

    let graph = Augmented {
        m,
        k,
        costs: &costs,
        left_unmatched,
        right_unmatched,
    };
    // The largest candidate is always feasible (everything unmatched).
    let (mut lo, mut hi) = (0usize, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if graph.perfect_matching(candidates[mid]).is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let threshold = candidates[lo];
    let matching = graph
        .perfect_matching(threshold)
        .expect("largest candidate is feasible");

    let mut result = MatchingResult::default();
    let mut cost = 0.0f64;
    for i in 0..m {
        let r = matching[i];
        if r < k {
            result.pairs.push((i, r));
            cost = cost.max(costs[i * k + r]);
        } else {
            result.unmatched_left.push(i);
            cost = cost.max(left_unmatched[i]);
        }
    }
    let matched_right: Vec<bool> = {
        let mut v = vec![false; k];
        for &(_, j) in &result.pairs {
            v[j] = true;
        }
        v
    };
    for (j, used) in matched_right.iter().enumerate() {
        if !used {
            result.unmatched_right.push(j);
            cost = cost.max(right_unmatched[j]);
        }
    }
    result.cost = cost;
    result
}

/// Left vertices: `0..m` real items, `m..m+k` zero copies of right items.
/// Right vertices: `0..k` real items, `k..k+m` zero copies of left items.
struct Augmented<'a> {
    m: usize,
    k: usize,
    costs: &'a [f64],
    left_unmatched: &'a [f64],
    right_unmatched: &'a [f64],
}

impl Augmented<'_> {
    fn neighbors(&self, u: usize, tau: f64) -> Vec<usize> {
        let (m, k) = (self.m, self.k);
        if u < m {
            let mut real: Vec<usize> = (0..k).filter(|&j| self.costs[u * k + j] <= tau).collect();
            real.sort_by(|&x, &y| self.costs[u * k + x].total_cmp(&self.costs[u * k + y]));
            if self.left_unmatched[u] <= tau {
                real.push(k + u);
            }
            real
        } else {
            let j = u - m;
            let mut v = Vec::with_capacity(m + 1);
            if self.right_unmatched[j] <= tau {
                v.push(j);
            }
            v.extend(k..k + m);
            v
        }
    }

    /// Perfect matching of the thresholded graph, as `left → right`, if any.
    fn perfect_matching(&self, tau: f64) -> Option<Vec<usize>> {
        let n = self.m + self.k;
        let adj: Vec<Vec<usize>> = (0..n).map(|u| self.neighbors(u, tau)).collect();
        let mut match_left = vec![usize::MAX; n];
        let mut match_right = vec![usize::MAX; n];
        // Greedy start, then augmenting paths.
        for u in 0..n {
            if let Some(&r) = adj[u].iter().find(|&&r| match_right[r] == usize::MAX) {
                match_left[u] = r;
                match_right[r] = u;
            }
        }
        let mut seen = vec![0usize; n];
        let mut stamp = 0usize;
        for u in 0..n {
            if match_left[u] != usize::MAX {
                continue;
            }
            stamp += 1;
            if !augment(u, &adj, &mut match_left, &mut match_right, &mut seen, stamp) {
                return None;
            }
        }
        Some(match_left)
    }
}

fn augment(
    root: usize,
    adj: &[Vec<usize>],
    match_left: &mut [usize],
    match_right: &mut [usize],
    seen: &mut [usize],
    stamp: usize,
) -> bool {
    // Iterative DFS over alternating paths; `stack` holds (left vertex, next edge).
    let mut stack: Vec<(usize, usize)> = vec![(root, 0)];
    let mut path: Vec<usize> = Vec::new();
    while let Some(&mut (u, ref mut next)) = stack.last_mut() {
        if *next >= adj[u].len() {
            stack.pop();
            path.pop();
            continue;
        }
        let r = adj[u][*next];
        *next += 1;
        if seen[r] == stamp {
            continue;
        }
        seen[r] = stamp;
        path.push(r);
        let owner = match_right[r];
        if owner == usize::MAX {
            // Flip the alternating path.
            for (depth, &(lu, _)) in stack.iter().enumerate() {
                let rr = path[depth];
                match_left[lu] = rr;
                match_right[rr] = lu;
            }
            return true;
        }
        stack.push((owner, 0));
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[f64]) -> Point {
        Point::from_slice(c)
    }

    fn rect(lo: &[f64], hi: &[f64]) -> IntervalModule {
        IntervalModule::rectangle(p(lo), p(hi)).unwrap()
    }

    #[test]
    fn interleaving_to_zero_examples() {
        assert_eq!(interleaving_to_zero(&rect(&[0.0, 0.0], &[2.0, 3.0])), 1.0);
        assert_eq!(interleaving_to_zero(&IntervalModule::zero(2)), 0.0);
        let stair = IntervalModule::new(
            vec![p(&[0.0, 1.0]), p(&[1.0, 0.0])],
            vec![p(&[3.0, 2.0]), p(&[2.0, 3.0])],
        )
        .unwrap();
        assert_eq!(interleaving_to_zero(&stair), 1.0);
    }

    #[test]
    fn interleaving_rect_examples() {
        let a = rect(&[0.0, 0.0], &[2.0, 2.0]);
        assert_eq!(interleaving_rect(&a, &a).unwrap(), 0.0);
        let b = rect(&[0.5, 0.5], &[2.5, 2.5]);
        assert_eq!(interleaving_rect(&a, &b).unwrap(), 0.5);
        let small = rect(&[0.0, 0.0], &[0.2, 0.2]);
        let far = rect(&[10.0, 10.0], &[10.1, 10.1]);
        let d = interleaving_rect(&small, &far).unwrap();
        assert!((d - 0.1).abs() < 1e-12);
    }

    #[test]
    fn interleaving_rect_rejects_staircases() {
        let stair = IntervalModule::new(vec![p(&[0.0, 1.0]), p(&[1.0, 0.0])], vec![p(&[3.0, 3.0])]).unwrap();
        let a = rect(&[0.0, 0.0], &[2.0, 2.0]);
        assert!(matches!(interleaving_rect(&a, &stair), Err(Error::NotRectangle)));
        assert!(interleaving_oracle_rect(&a, &stair, 1.0).is_err());
    }

    #[test]
    fn oracle_examples() {
        let a = rect(&[0.0, 0.0], &[2.0, 2.0]);
        let b = rect(&[0.5, 0.3], &[2.4, 2.5]);
        let d = interleaving_rect(&a, &b).unwrap();
        assert!(interleaving_oracle_rect(&a, &b, d).unwrap());
        assert!(!interleaving_oracle_rect(&a, &b, d - 1e-6).unwrap());
        assert!(interleaving_oracle_rect(&a, &a, 0.0).unwrap());
        let z = IntervalModule::zero(2);
        assert!(interleaving_oracle_rect(&z, &z, 0.0).unwrap());
    }

    #[test]
    fn bottleneck_examples() {
        let a = rect(&[0.0, 0.0], &[2.0, 2.0]);
        let b = rect(&[3.0, 0.0], &[4.0, 1.5]);
        let d = Decomposition::new(2, 0, vec![a.clone(), b.clone()]).unwrap();
        assert_eq!(bottleneck(&d, &d).unwrap().cost, 0.0);

        let one = Decomposition::new(2, 0, vec![a.clone()]).unwrap();
        let none = Decomposition::empty(2, 0);
        let r = bottleneck(&one, &none).unwrap();
        assert_eq!(r.cost, 1.0);
        assert_eq!(r.unmatched_left, vec![0]);

        // Listed in crossed order: the cheap matching pairs 0↔1 and 1↔0.
        let a2 = rect(&[0.1, 0.0], &[2.0, 2.1]);
        let b2 = rect(&[3.0, 0.2], &[4.0, 1.5]);
        let d2 = Decomposition::new(2, 0, vec![b2, a2]).unwrap();
        let r = bottleneck(&d, &d2).unwrap();
        assert!((r.cost - 0.2).abs() < 1e-12, "{r:?}");
        let mut pairs = r.pairs.clone();
        pairs.sort();
        assert_eq!(pairs, vec![(0, 1), (1, 0)]);
    }
}
