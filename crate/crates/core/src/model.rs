//! Corner-based data model for interval modules and their direct sums.
//!
//! An interval module is stored through its birth corners (minimal points of
//! the support) and death corners (maximal points). Its support is
//!
//! ```text
//! supp M = { y : ∃ b ∈ births, b ≤ y  and  ∃ d ∈ deaths, y ≤ d }
//! ```
//!
//! where `≤` is the coordinatewise partial order of ℝⁿ. The zero module is
//! represented by empty corner lists.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of the parameter space ℝⁿ with finite coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("point"));
        }
        Ok(Point(coords))
    }

    /// Panics on non-finite input; meant for literals in code and tests.
    pub fn from_slice(coords: &[f64]) -> Self {
        Point::new(coords.to_vec()).expect("finite, non-empty coordinates")
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    /// Coordinatewise `self ≤ other`.
    pub fn leq(&self, other: &Point) -> bool {
        leq(&self.0, &other.0)
    }

    fn lex_cmp(&self, other: &Point) -> Ordering {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.total_cmp(b))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Point::new(v)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.0
    }
}

#[inline]
pub(crate) fn leq(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// Closed axis-aligned box `{ z : lower ≤ z ≤ upper }`.
#[derive(Clone, Debug, PartialEq)]
pub struct AxisBox {
    lower: Point,
    upper: Point,
}

impl AxisBox {
    pub fn new(lower: Point, upper: Point) -> Result<Self> {
        check_dim(lower.dim(), upper.dim())?;
        if !lower.leq(&upper) {
            return Err(Error::InvalidBox);
        }
        Ok(AxisBox { lower, upper })
    }

    /// The hypersquare `R_{x,δ} = { y : x − δ·1 ≤ y ≤ x + δ·1 }`.
    pub fn centered(center: &Point, delta: f64) -> Result<Self> {
        if !(delta > 0.0) || !delta.is_finite() {
            return Err(Error::InvalidDelta(delta));
        }
        let lower = center.coords().iter().map(|c| c - delta).collect();
        let upper = center.coords().iter().map(|c| c + delta).collect();
        AxisBox::new(Point::new(lower)?, Point::new(upper)?)
    }

    pub fn lower(&self) -> &Point {
        &self.lower
    }

    pub fn upper(&self) -> &Point {
        &self.upper
    }

    pub fn dim(&self) -> usize {
        self.lower.dim()
    }

    pub fn contains(&self, y: &[f64]) -> bool {
        leq(self.lower.coords(), y) && leq(y, self.upper.coords())
    }

    pub fn volume(&self) -> f64 {
        self.lower
            .coords()
            .iter()
            .zip(self.upper.coords())
            .map(|(l, u)| u - l)
            .product()
    }
}

/// A bar `[birth, death)` on a line parameter. `death` may be `+∞`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Bar {
    pub birth: f64,
    pub death: f64,
}

impl Bar {
    /// Returns `None` for empty bars (`birth ≥ death`).
    pub fn new(birth: f64, death: f64) -> Option<Bar> {
        (birth < death).then_some(Bar { birth, death })
    }

    pub fn length(&self) -> f64 {
        self.death - self.birth
    }

    pub fn is_essential(&self) -> bool {
        self.death == f64::INFINITY
    }
}

/// Multiset of bars; order carries no meaning.
pub type Barcode = Vec<Bar>;

/// Sorts bars by `(birth, death)` so two barcodes can be compared as multisets.
pub fn sort_barcode(bars: &mut Barcode) {
    bars.sort_by(|a, b| {
        a.birth
            .total_cmp(&b.birth)
            .then_with(|| a.death.total_cmp(&b.death))
    });
}

/// An interval module given by canonical birth and death corners.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalModule {
    dim: usize,
    births: Vec<Point>,
    deaths: Vec<Point>,
}

impl IntervalModule {
    /// Builds and canonicalizes a module. Both lists must be non-empty so the
    /// ambient dimension is known; use [`IntervalModule::zero`] otherwise.
    pub fn new(births: Vec<Point>, deaths: Vec<Point>) -> Result<Self> {
        let dim = births
            .first()
            .or_else(|| deaths.first())
            .map(Point::dim)
            .ok_or(Error::EmptyCorners)?;
        IntervalModule::with_dim(dim, births, deaths)
    }

    /// Like [`IntervalModule::new`] but with an explicit dimension, so empty
    /// lists are accepted and yield the zero module.
    pub fn with_dim(dim: usize, births: Vec<Point>, deaths: Vec<Point>) -> Result<Self> {
        for p in births.iter().chain(&deaths) {
            check_dim(dim, p.dim())?;
        }
        Ok(IntervalModule {
            dim,
            births,
            deaths,
        }
        .canonicalize())
    }

    /// The rectangle module supported on `[lower, upper]`.
    pub fn rectangle(lower: Point, upper: Point) -> Result<Self> {
        IntervalModule::new(vec![lower], vec![upper])
    }

    pub fn zero(dim: usize) -> Self {
        IntervalModule {
            dim,
            births: Vec::new(),
            deaths: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn births(&self) -> &[Point] {
        &self.births
    }

    pub fn deaths(&self) -> &[Point] {
        &self.deaths
    }

    pub fn is_zero(&self) -> bool {
        self.births.is_empty()
    }

    pub fn is_rectangle(&self) -> bool {
        self.births.len() == 1 && self.deaths.len() == 1
    }

    /// Reduces births to minimal and deaths to maximal elements, removes
    /// duplicates, sorts lexicographically, and collapses presentations with
    /// no comparable `(birth, death)` pair to the zero module.
    pub fn canonicalize(&self) -> IntervalModule {
        let births = antichain(&self.births, |a, b| a.leq(b));
        let deaths = antichain(&self.deaths, |a, b| b.leq(a));
        let nonzero = births.iter().any(|b| deaths.iter().any(|d| b.leq(d)));
        if !nonzero {
            return IntervalModule::zero(self.dim);
        }
        IntervalModule {
            dim: self.dim,
            births,
            deaths,
        }
    }

    /// Membership test `y ∈ supp M`.
    pub fn contains(&self, y: &Point) -> Result<bool> {
        check_dim(self.dim, y.dim())?;
        Ok(self.covers(y.coords()))
    }

    /// Unchecked membership on a raw coordinate slice.
    #[inline]
    pub fn covers(&self, y: &[f64]) -> bool {
        self.births.iter().any(|b| leq(b.coords(), y))
            && self.deaths.iter().any(|d| leq(y, d.coords()))
    }

    /// Smallest box containing every corner, or `None` for the zero module.
    pub fn hull(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        if self.is_zero() {
            return None;
        }
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for b in &self.births {
            for (l, c) in lo.iter_mut().zip(b.coords()) {
                *l = l.min(*c);
            }
        }
        for d in &self.deaths {
            for (h, c) in hi.iter_mut().zip(d.coords()) {
                *h = h.max(*c);
            }
        }
        Some((lo, hi))
    }

    /// Restriction to a box by pushing corners onto it: births `b ≤ M` become
    /// `max(b, m)`, deaths `d ≥ m` become `min(d, M)`, everything else is
    /// dropped, and the result is canonicalized.
    pub fn restrict_to_box(&self, rect: &AxisBox) -> Result<IntervalModule> {
        check_dim(self.dim, rect.dim())?;
        let (m, big_m) = (rect.lower().coords(), rect.upper().coords());
        let births = self
            .births
            .iter()
            .filter(|b| leq(b.coords(), big_m))
            .map(|b| Point(b.coords().iter().zip(m).map(|(x, y)| x.max(*y)).collect()))
            .collect();
        let deaths = self
            .deaths
            .iter()
            .filter(|d| leq(m, d.coords()))
            .map(|d| Point(d.coords().iter().zip(big_m).map(|(x, y)| x.min(*y)).collect()))
            .collect();
        Ok(IntervalModule {
            dim: self.dim,
            births,
            deaths,
        }
        .canonicalize())
    }

    /// The bar of the restriction to the diagonal line `y + t·(1,…,1)`, in
    /// the parameter `t`.
    pub fn restrict_to_diagonal_line(&self, basepoint: &Point) -> Result<Option<Bar>> {
        check_dim(self.dim, basepoint.dim())?;
        Ok(self.diagonal_bar(basepoint.coords()))
    }

    /// Unchecked variant of [`IntervalModule::restrict_to_diagonal_line`].
    pub fn diagonal_bar(&self, y: &[f64]) -> Option<Bar> {
        if self.is_zero() {
            return None;
        }
        let birth = self
            .births
            .iter()
            .map(|b| max_offset(b.coords(), y))
            .fold(f64::INFINITY, f64::min);
        let death = self
            .deaths
            .iter()
            .map(|d| min_offset(d.coords(), y))
            .fold(f64::NEG_INFINITY, f64::max);
        Bar::new(birth, death)
    }
}

/// `max_i (p_i − y_i)`: first `t` at which `y + t·1 ≥ p`.
#[inline]
pub(crate) fn max_offset(p: &[f64], y: &[f64]) -> f64 {
    p.iter()
        .zip(y)
        .map(|(a, b)| a - b)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// `min_i (p_i − y_i)`: last `t` at which `y + t·1 ≤ p`.
#[inline]
pub(crate) fn min_offset(p: &[f64], y: &[f64]) -> f64 {
    p.iter()
        .zip(y)
        .map(|(a, b)| a - b)
        .fold(f64::INFINITY, f64::min)
}

/// Keeps the elements not strictly dominated under `below`, deduplicated and
/// sorted lexicographically.
fn antichain(points: &[Point], below: impl Fn(&Point, &Point) -> bool) -> Vec<Point> {
    let mut sorted: Vec<Point> = points.to_vec();
    sorted.sort_by(Point::lex_cmp);
    sorted.dedup();
    sorted
        .iter()
        .filter(|p| !sorted.iter().any(|q| q != *p && below(q, p)))
        .cloned()
        .collect()
}

/// A finite direct sum of interval modules in one homology degree.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    dim: usize,
    degree: usize,
    intervals: Vec<IntervalModule>,
}

impl Decomposition {
    pub fn new(dim: usize, degree: usize, intervals: Vec<IntervalModule>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        for m in &intervals {
            check_dim(dim, m.dim())?;
        }
        Ok(Decomposition {
            dim,
            degree,
            intervals,
        })
    }

    pub fn empty(dim: usize, degree: usize) -> Self {
        Decomposition {
            dim,
            degree,
            intervals: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn intervals(&self) -> &[IntervalModule] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Bars of every summand along the diagonal line through `basepoint`.
    pub fn fibered_barcode(&self, basepoint: &Point) -> Result<Barcode> {
        check_dim(self.dim, basepoint.dim())?;
        Ok(self
            .intervals
            .iter()
            .filter_map(|m| m.diagonal_bar(basepoint.coords()))
            .collect())
    }

    /// Smallest box containing the corners of every summand.
    pub fn hull(&self) -> Option<(Vec<f64>, Vec<f64>)> {
        self.intervals
            .iter()
            .filter_map(IntervalModule::hull)
            .reduce(|(mut lo, mut hi), (l, h)| {
                for i in 0..lo.len() {
                    lo[i] = lo[i].min(l[i]);
                    hi[i] = hi[i].max(h[i]);
                }
                (lo, hi)
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[f64]) -> Point {
        Point::from_slice(c)
    }

    fn module(births: &[&[f64]], deaths: &[&[f64]]) -> IntervalModule {
        IntervalModule::new(
            births.iter().map(|c| p(c)).collect(),
            deaths.iter().map(|c| p(c)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn canonicalize_drops_dominated_corners() {
        let m = module(&[&[0.0, 0.0], &[1.0, 1.0]], &[&[2.0, 2.0]]);
        assert_eq!(m.births(), &[p(&[0.0, 0.0])]);
        assert_eq!(m.deaths(), &[p(&[2.0, 2.0])]);

        let m = module(&[&[1.0, 0.0], &[0.0, 1.0]], &[&[3.0, 3.0]]);
        assert_eq!(m.births(), &[p(&[0.0, 1.0]), p(&[1.0, 0.0])]);

        let m = module(&[&[0.0, 0.0]], &[&[2.0, 2.0], &[1.0, 1.0]]);
        assert_eq!(m.deaths(), &[p(&[2.0, 2.0])]);
    }

    #[test]
    fn canonicalize_rejects_mixed_dimensions() {
        let r = IntervalModule::new(vec![p(&[0.0, 0.0])], vec![p(&[1.0, 1.0, 1.0])]);
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn incomparable_presentation_is_zero() {
        let m = module(&[&[3.0, 3.0]], &[&[2.0, 2.0]]);
        assert!(m.is_zero());
        assert_eq!(m.restrict_to_diagonal_line(&p(&[0.0, 0.0])).unwrap(), None);
    }

    #[test]
    fn contains_examples() {
        let m = module(&[&[0.0, 0.0]], &[&[2.0, 2.0]]);
        assert!(m.contains(&p(&[1.0, 1.0])).unwrap());
        assert!(!m.contains(&p(&[3.0, 1.0])).unwrap());
        assert!(m.contains(&p(&[1.0])).is_err());

        let stair = module(&[&[0.0, 1.0], &[1.0, 0.0]], &[&[3.0, 2.0], &[2.0, 3.0]]);
        assert!(!stair.contains(&p(&[0.5, 0.5])).unwrap());
        assert!(stair.contains(&p(&[1.0, 1.0])).unwrap());
    }

    #[test]
    fn restrict_to_box_examples() {
        let m = module(&[&[0.0, 0.0]], &[&[4.0, 4.0]]);
        let b = AxisBox::new(p(&[1.0, 1.0]), p(&[3.0, 3.0])).unwrap();
        let r = m.restrict_to_box(&b).unwrap();
        assert_eq!(r, module(&[&[1.0, 1.0]], &[&[3.0, 3.0]]));

        let far = AxisBox::new(p(&[5.0, 5.0]), p(&[6.0, 6.0])).unwrap();
        assert!(m.restrict_to_box(&far).unwrap().is_zero());

        let stair = module(&[&[0.0, 2.0], &[2.0, 0.0]], &[&[4.0, 4.0]]);
        let r = stair.restrict_to_box(&b).unwrap();
        assert_eq!(r, module(&[&[1.0, 2.0], &[2.0, 1.0]], &[&[3.0, 3.0]]));
    }

    #[test]
    fn diagonal_line_examples() {
        let m = module(&[&[0.0, 0.0]], &[&[2.0, 2.0]]);
        assert_eq!(
            m.restrict_to_diagonal_line(&p(&[0.0, 0.0])).unwrap(),
            Bar::new(0.0, 2.0)
        );
        assert_eq!(
            m.restrict_to_diagonal_line(&p(&[0.0, 1.0])).unwrap(),
            Bar::new(0.0, 1.0)
        );
    }

    #[test]
    fn fibered_barcode_examples() {
        let y = p(&[0.0, 0.0]);
        assert!(Decomposition::empty(2, 0).fibered_barcode(&y).unwrap().is_empty());

        let d = Decomposition::new(
            2,
            0,
            vec![
                module(&[&[0.0, 0.0]], &[&[1.0, 1.0]]),
                module(&[&[2.0, 2.0]], &[&[3.0, 3.0]]),
            ],
        )
        .unwrap();
        let bars = d.fibered_barcode(&y).unwrap();
        assert_eq!(bars, vec![Bar { birth: 0.0, death: 1.0 }, Bar { birth: 2.0, death: 3.0 }]);

        let one = Decomposition::new(2, 0, vec![module(&[&[0.0, 0.0]], &[&[2.0, 2.0]])]).unwrap();
        assert_eq!(one.fibered_barcode(&y).unwrap(), vec![Bar { birth: 0.0, death: 2.0 }]);
    }

    #[test]
    fn point_rejects_nan() {
        assert!(Point::new(vec![0.0, f64::NAN]).is_err());
        assert!(Point::new(vec![]).is_err());
    }
}
