//! Brute-force oracles and random instances shared by the integration tests.
#![allow(dead_code)]

use mpcorner::pipeline::synthetic::random_rectangle;
use mpcorner::pipeline::FilteredComplex1D;
use mpcorner::{AxisBox, Bar, Barcode, Decomposition, IntervalModule, Point};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn pt(c: &[f64]) -> Point {
    Point::from_slice(c)
}

/// Endpoints of `supp M ∩ {y + t·1 : t ∈ [t_lo, t_hi]}` from a membership scan
/// with `steps` samples: first and last sample inside.
pub fn scan_line(m: &IntervalModule, y: &[f64], t_lo: f64, t_hi: f64, steps: usize) -> Option<(f64, f64)> {
    let h = (t_hi - t_lo) / steps as f64;
    let mut first = None;
    let mut last = None;
    let mut q = vec![0.0; y.len()];
    for k in 0..=steps {
        let t = t_lo + k as f64 * h;
        for (qi, yi) in q.iter_mut().zip(y) {
            *qi = yi + t;
        }
        if m.covers(&q) {
            first.get_or_insert(t);
            last = Some(t);
        }
    }
    first.zip(last)
}

fn inside_at(m: &IntervalModule, y: &[f64], t: f64) -> bool {
    let q: Vec<f64> = y.iter().map(|v| v + t).collect();
    m.covers(&q)
}

/// Length of `supp M` on the line `y + t·1`, from membership queries only: a
/// coarse scan finds an inside sample, bisection refines both endpoints.
/// Segments shorter than the scan step may be missed (length 0 returned).
fn line_length(m: &IntervalModule, y: &[f64], t_lo: f64, t_hi: f64, coarse: usize, tol: f64) -> f64 {
    let h = (t_hi - t_lo) / coarse as f64;
    let Some(k) = (0..=coarse).find(|&k| inside_at(m, y, t_lo + k as f64 * h)) else {
        return 0.0;
    };
    let inside = t_lo + k as f64 * h;
    // Lower endpoint: bisect between an outside point and `inside`.
    let (mut out, mut inn) = (t_lo - h, inside);
    while inn - out > tol {
        let mid = 0.5 * (out + inn);
        if inside_at(m, y, mid) { inn = mid } else { out = mid }
    }
    let lower = inn;
    let (mut inn, mut out) = (inside, t_hi + h);
    while out - inn > tol {
        let mid = 0.5 * (out + inn);
        if inside_at(m, y, mid) { inn = mid } else { out = mid }
    }
    inn - lower
}

/// Brute-force weight: half the longest diagonal segment inside the support.
///
/// Lines are parametrized by offsets `u ∈ ℝⁿ⁻¹` (`y = (u, 0)`); half the
/// segment length is 1-Lipschitz in `u` for the ℓ∞ norm, so a branch-and-bound
/// over offset cells with bound `value + radius` finds the maximum within
/// `step` once cells shrink below `step`.
pub fn brute_weight(m: &IntervalModule, step_fraction: f64) -> f64 {
    let Some((lo, hi)) = m.hull() else {
        return 0.0;
    };
    let n = m.dim();
    let extent = lo.iter().zip(&hi).map(|(a, b)| b - a).fold(0.0, f64::max).max(1e-12);
    let step = step_fraction * extent;
    let (t_lo, t_hi) = (lo[n - 1], hi[n - 1]);
    let coarse = 64;
    // Half of a missed segment is below half a coarse step.
    let miss = 0.5 * (t_hi - t_lo) / coarse as f64;
    let eval = |u: &[f64]| {
        let mut y = u.to_vec();
        y.push(0.0);
        0.5 * line_length(m, &y, t_lo, t_hi, coarse, 0.1 * step)
    };
    if n == 1 {
        return eval(&[]);
    }
    let cell_lo: Vec<f64> = (0..n - 1).map(|j| lo[j] - hi[n - 1]).collect();
    let cell_hi: Vec<f64> = (0..n - 1).map(|j| hi[j] - lo[n - 1]).collect();
    let mut best = 0.0f64;
    let mut stack = vec![(cell_lo, cell_hi)];
    while let Some((a, b)) = stack.pop() {
        let center: Vec<f64> = a.iter().zip(&b).map(|(x, y)| 0.5 * (x + y)).collect();
        let radius = a.iter().zip(&b).map(|(x, y)| 0.5 * (y - x)).fold(0.0, f64::max);
        let v = eval(&center);
        best = best.max(v);
        let slack = if v == 0.0 { miss } else { 0.0 };
        if v + radius + slack <= best + step || radius <= step {
            continue;
        }
        // Split the widest axis.
        let j = (0..n - 1)
            .max_by(|&i, &k| (b[i] - a[i]).total_cmp(&(b[k] - a[k])))
            .unwrap();
        let mid = center[j];
        let (mut b1, mut a2) = (b.clone(), a.clone());
        b1[j] = mid;
        a2[j] = mid;
        stack.push((a.clone(), b1));
        stack.push((a2, b));
    }
    best
}

/// Monte-Carlo estimate of `vol(supp M ∩ R)` and its standard error.
pub fn monte_carlo_volume(m: &IntervalModule, rect: &AxisBox, samples: usize, rng: &mut impl Rng) -> (f64, f64) {
    let (lo, hi) = (rect.lower().coords(), rect.upper().coords());
    let vol = rect.volume();
    let mut y = vec![0.0; lo.len()];
    let mut hits = 0usize;
    for _ in 0..samples {
        for j in 0..lo.len() {
            y[j] = rng.random_range(lo[j]..hi[j]);
        }
        hits += usize::from(m.covers(&y));
    }
    let p = hits as f64 / samples as f64;
    (p * vol, vol * (p * (1.0 - p) / samples as f64).sqrt())
}

/// Random staircase with at most `max` births and deaths in `[0, 1]ⁿ`.
pub fn random_staircase(rng: &mut impl Rng, n: usize, max: usize) -> IntervalModule {
    let origin = vec![0.0; n];
    mpcorner::pipeline::synthetic::random_staircase(rng, &origin, 0.5, max, max)
}

/// Random decomposition of `m` rectangles with corners in `[0, 2]ⁿ`.
pub fn random_rectangles(rng: &mut impl Rng, n: usize, m: usize) -> Decomposition {
    let intervals = (0..m)
        .map(|_| random_rectangle(rng, &vec![0.0; n], 1.0))
        .collect();
    Decomposition::new(n, 0, intervals).unwrap()
}

/// Moves every corner coordinate by at most `eta`; rectangles that collapse
/// are dropped (their weight was at most `eta`, so the matching to zero
/// stays within `eta`).
pub fn perturb_rectangles(rng: &mut impl Rng, d: &Decomposition, eta: f64) -> Decomposition {
    let mut jitter = |p: &Point| -> Vec<f64> { p.coords().iter().map(|c| c + rng.random_range(-eta..=eta)).collect() };
    let intervals = d
        .intervals()
        .iter()
        .filter_map(|m| {
            let b = jitter(&m.births()[0]);
            let e = jitter(&m.deaths()[0]);
            b.iter().zip(&e).all(|(x, y)| x < y).then(|| IntervalModule::rectangle(pt(&b), pt(&e)).unwrap())
        })
        .collect();
    Decomposition::new(d.dim(), d.degree(), intervals).unwrap()
}

pub fn shuffled(rng: &mut impl Rng, d: &Decomposition) -> Decomposition {
    let mut v = d.intervals().to_vec();
    v.shuffle(rng);
    Decomposition::new(d.dim(), d.degree(), v).unwrap()
}

/// Exhaustive bottleneck cost over all partial matchings.
pub fn exhaustive_bottleneck(left: &[f64], right: &[f64], pair: &dyn Fn(usize, usize) -> f64) -> f64 {
    fn go(i: usize, used: &mut Vec<bool>, left: &[f64], right: &[f64], pair: &dyn Fn(usize, usize) -> f64, acc: f64) -> f64 {
        if i == left.len() {
            return used
                .iter()
                .zip(right)
                .filter(|(u, _)| !**u)
                .fold(acc, |a, (_, w)| a.max(*w));
        }
        let mut best = go(i + 1, used, left, right, pair, acc.max(left[i]));
        for j in 0..right.len() {
            if !used[j] {
                used[j] = true;
                best = best.min(go(i + 1, used, left, right, pair, acc.max(pair(i, j))));
                used[j] = false;
            }
        }
        best
    }
    go(0, &mut vec![false; right.len()], left, right, pair, 0.0)
}

/// A random filtered simplicial complex on at most `max_vertices` vertices
/// with at most `max_simplices` simplices and small integer values (ties are
/// frequent on purpose).
pub fn random_complex(rng: &mut impl Rng, max_vertices: usize, max_simplices: usize) -> Vec<(Vec<usize>, f64)> {
    let nv = rng.random_range(1..=max_vertices);
    let mut simplices: Vec<Vec<usize>> = Vec::new();
    let add = |s: Vec<usize>, simplices: &mut Vec<Vec<usize>>| {
        if !simplices.contains(&s) {
            simplices.push(s);
        }
    };
    for v in 0..nv {
        add(vec![v], &mut simplices);
    }
    for _ in 0..3 * max_simplices {
        let k = rng.random_range(2..=3.min(nv).max(2));
        if nv < 2 {
            break;
        }
        let mut s: Vec<usize> = rand::seq::index::sample(rng, nv, k.min(nv)).into_vec();
        s.sort_unstable();
        // Faces first.
        let mut closure = vec![s.clone()];
        if s.len() == 3 {
            closure.extend([vec![s[0], s[1]], vec![s[0], s[2]], vec![s[1], s[2]]]);
        }
        let new: Vec<Vec<usize>> = closure.into_iter().filter(|f| !simplices.contains(f)).collect();
        if simplices.len() + new.len() > max_simplices {
            continue;
        }
        let mut new = new;
        new.sort_by_key(|f| f.len());
        for f in new {
            add(f, &mut simplices);
        }
    }
    simplices.sort_by_key(|s| s.len());
    let mut values: Vec<f64> = Vec::with_capacity(simplices.len());
    for (i, s) in simplices.iter().enumerate() {
        let face_max = if s.len() == 1 {
            0.0
        } else {
            (0..i)
                .filter(|&j| simplices[j].len() + 1 == s.len() && simplices[j].iter().all(|v| s.contains(v)))
                .map(|j| values[j])
                .fold(0.0, f64::max)
        };
        values.push(face_max + rng.random_range(0..3) as f64);
    }
    simplices.into_iter().zip(values).collect()
}

/// Rank of a set of GF(2) vectors (bitmasks).
fn gf2_rank(mut rows: Vec<u128>) -> usize {
    let mut rank = 0;
    for bit in 0..128 {
        let mask = 1u128 << bit;
        let Some(p) = (rank..rows.len()).find(|&r| rows[r] & mask != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank];
        for r in 0..rows.len() {
            if r != rank && rows[r] & mask != 0 {
                rows[r] ^= pivot;
            }
        }
        rank += 1;
    }
    rank
}

/// Basis of the `k`-cycles of the subcomplex `alive`, as bitmasks over
/// simplex indices.
fn cycle_basis(simplices: &[(Vec<usize>, f64)], alive: &[bool], k: usize) -> Vec<u128> {
    let chains: Vec<usize> = (0..simplices.len()).filter(|&i| alive[i] && simplices[i].0.len() == k + 1).collect();
    let boundary = |i: usize| -> u128 {
        let s = &simplices[i].0;
        if s.len() == 1 {
            return 0;
        }
        (0..s.len())
            .map(|drop| {
                let face: Vec<usize> = s.iter().enumerate().filter(|(j, _)| *j != drop).map(|(_, v)| *v).collect();
                simplices.iter().position(|(f, _)| *f == face).unwrap()
            })
            .fold(0u128, |acc, f| acc | (1u128 << f))
    };
    // Gaussian elimination on (boundary | identity) pairs.
    let mut rows: Vec<(u128, u128)> = chains.iter().map(|&i| (boundary(i), 1u128 << i)).collect();
    let mut r = 0;
    for bit in 0..128 {
        let mask = 1u128 << bit;
        let Some(p) = (r..rows.len()).find(|&x| rows[x].0 & mask != 0) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r];
        for x in 0..rows.len() {
            if x != r && rows[x].0 & mask != 0 {
                rows[x].0 ^= pivot.0;
                rows[x].1 ^= pivot.1;
            }
        }
        r += 1;
    }
    rows.into_iter().filter(|(b, _)| *b == 0).map(|(_, c)| c).collect()
}

fn boundaries_of(simplices: &[(Vec<usize>, f64)], alive: &[bool], k: usize) -> Vec<u128> {
    (0..simplices.len())
        .filter(|&i| alive[i] && simplices[i].0.len() == k + 2)
        .map(|i| {
            let s = &simplices[i].0;
            (0..s.len())
                .map(|drop| {
                    let face: Vec<usize> = s.iter().enumerate().filter(|(j, _)| *j != drop).map(|(_, v)| *v).collect();
                    simplices.iter().position(|(f, _)| *f == face).unwrap()
                })
                .fold(0u128, |acc, f| acc | (1u128 << f))
        })
        .collect()
}

/// Degree-`k` barcode from ranks of the inclusion-induced maps between all
/// pairs of sublevel complexes.
pub fn rank_oracle_barcode(simplices: &[(Vec<usize>, f64)], k: usize) -> Barcode {
    assert!(simplices.len() <= 128);
    let mut levels: Vec<f64> = simplices.iter().map(|s| s.1).collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let alive = |v: f64| -> Vec<bool> { simplices.iter().map(|s| s.1 <= v).collect() };
    // beta[i][j] = rank H_k(K_i) → H_k(K_j), i ≤ j, with index 0 = empty.
    let nl = levels.len();
    let mut beta = vec![vec![0usize; nl + 1]; nl + 1];
    for i in 1..=nl {
        let zi = cycle_basis(simplices, &alive(levels[i - 1]), k);
        for j in i..=nl {
            let bj = boundaries_of(simplices, &alive(levels[j - 1]), k);
            let both: Vec<u128> = zi.iter().chain(&bj).copied().collect();
            beta[i][j] = gf2_rank(both) - gf2_rank(bj);
        }
    }
    let b = |i: usize, j: usize| -> i64 { if i == 0 { 0 } else { beta[i][j] as i64 } };
    let mut bars = Vec::new();
    for i in 1..=nl {
        for j in i + 1..=nl {
            let mult = b(i, j - 1) - b(i, j) - b(i - 1, j - 1) + b(i - 1, j);
            for _ in 0..mult {
                bars.push(Bar::new(levels[i - 1], levels[j - 1]).unwrap());
            }
        }
        let ess = b(i, nl) - b(i - 1, nl);
        for _ in 0..ess {
            bars.push(Bar::new(levels[i - 1], f64::INFINITY).unwrap());
        }
    }
    mpcorner::model::sort_barcode(&mut bars);
    bars
}

pub fn complex(simplices: &[(Vec<usize>, f64)]) -> FilteredComplex1D {
    FilteredComplex1D::from_simplices(simplices).unwrap()
}
