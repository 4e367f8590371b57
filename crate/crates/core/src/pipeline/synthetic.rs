//! Deterministic synthetic inputs.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::PointCloud;
use crate::model::{Decomposition, IntervalModule, Point};

pub const ANNULUS_INNER: f64 = 1.0;
pub const ANNULUS_OUTER: f64 = 1.4;

/// `n` points on the annulus `1 ≤ r ≤ 1.4`, uniform in area radially, with
/// angular density proportional to `1 + 0.8·cos θ`.
pub fn annulus_nonuniform(n: usize, seed: u64) -> PointCloud {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (a2, b2) = (ANNULUS_INNER * ANNULUS_INNER, ANNULUS_OUTER * ANNULUS_OUTER);
    let mut points = Vec::with_capacity(n);
    while points.len() < n {
        let theta = rng.random_range(0.0..2.0 * PI);
        if rng.random::<f64>() * 1.8 > 1.0 + 0.8 * theta.cos() {
            continue;
        }
        let r = (a2 + rng.random::<f64>() * (b2 - a2)).sqrt();
        points.push(vec![r * theta.cos(), r * theta.sin()]);
    }
    PointCloud::new(points).expect("n > 0")
}

/// `n` noisy points on the unit circle (radial noise σ = 0.03) followed by
/// `n_out` outliers uniform in `[−1.2, 1.2]²`.
pub fn circle_with_outliers(n: usize, n_out: usize, seed: u64) -> PointCloud {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = Normal::new(0.0, 0.03).expect("valid sigma");
    let mut points = Vec::with_capacity(n + n_out);
    for _ in 0..n {
        let theta = rng.random_range(0.0..2.0 * PI);
        let r = 1.0 + noise.sample(&mut rng);
        points.push(vec![r * theta.cos(), r * theta.sin()]);
    }
    for _ in 0..n_out {
        points.push(vec![rng.random_range(-1.2..1.2), rng.random_range(-1.2..1.2)]);
    }
    PointCloud::new(points).expect("n + n_out > 0")
}

/// Two unit squares `[0,1]×[1,2]` and `[1,2]×[0,1]` touching at `(1,1)`.
///
/// For `ε = 0` they are two separate summands; for `ε > 0` they form one
/// interval joined by a bridge of side `ε` centered at the contact point.
pub fn bridged_squares(epsilon: f64) -> Decomposition {
    let p = |x: f64, y: f64| Point::new(vec![x, y]).expect("finite");
    let intervals = if epsilon <= 0.0 {
        vec![
            IntervalModule::rectangle(p(0.0, 1.0), p(1.0, 2.0)).expect("valid"),
            IntervalModule::rectangle(p(1.0, 0.0), p(2.0, 1.0)).expect("valid"),
        ]
    } else {
        let h = 0.5 * epsilon;
        vec![IntervalModule::new(
            vec![p(0.0, 1.0), p(1.0 - h, 1.0 - h), p(1.0, 0.0)],
            vec![p(1.0, 2.0), p(1.0 + h, 1.0 + h), p(2.0, 1.0)],
        )
        .expect("valid")]
    };
    Decomposition::new(2, 0, intervals).expect("2-D summands")
}

/// A random nonzero staircase interval in `origin + [0, 2·scale]ⁿ`: up to
/// `max_births` births drawn from the lower half-cube and up to `max_deaths`
/// deaths from the upper one, canonicalized.
pub fn random_staircase<R: Rng>(
    rng: &mut R,
    origin: &[f64],
    scale: f64,
    max_births: usize,
    max_deaths: usize,
) -> IntervalModule {
    let dim = origin.len();
    let corners = |rng: &mut R, count: usize, offset: f64| -> Vec<Point> {
        (0..count)
            .map(|_| {
                let c = origin.iter().map(|o| o + scale * (offset + rng.random::<f64>())).collect();
                Point::new(c).expect("finite")
            })
            .collect()
    };
    loop {
        let nb = rng.random_range(1..=max_births.max(1));
        let nd = rng.random_range(1..=max_deaths.max(1));
        let births = corners(rng, nb, 0.0);
        let deaths = corners(rng, nd, 0.5);
        let m = IntervalModule::with_dim(dim, births, deaths).expect("consistent dimension");
        if !m.is_zero() {
            return m;
        }
    }
}

/// A random rectangle `[b, b + s]` with `b ∈ origin + [0, scale]ⁿ` and side
/// lengths in `[0.1, 1]·scale`.
pub fn random_rectangle<R: Rng>(rng: &mut R, origin: &[f64], scale: f64) -> IntervalModule {
    let lower: Vec<f64> = origin.iter().map(|o| o + scale * rng.random::<f64>()).collect();
    let upper: Vec<f64> = lower.iter().map(|l| l + scale * rng.random_range(0.1..1.0)).collect();
    IntervalModule::rectangle(Point::new(lower).expect("finite"), Point::new(upper).expect("finite"))
        .expect("lower < upper")
}

/// `m` random staircases with at most `max_corners` births and deaths each,
/// scattered over `[0, 1]ⁿ` with sizes up to `scale`.
pub fn random_decomposition(m: usize, dim: usize, max_corners: usize, scale: f64, seed: u64) -> Decomposition {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let intervals = (0..m)
        .map(|_| {
            let origin: Vec<f64> = (0..dim).map(|_| rng.random::<f64>()).collect();
            let s = scale * rng.random_range(0.2..1.0);
            random_staircase(&mut rng, &origin, s, max_corners, max_corners)
        })
        .collect();
    Decomposition::new(dim, 0, intervals).expect("consistent dimension")
}
