//! Sign conditions on the real line: partitions by eventual sign of a
//! polynomial in `m` whose coefficients depend on a real parameter `b`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{isolate_real_roots, rat, Rational, RealPoint, Sign, UPoly};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", content = "at", rename_all = "snake_case")]
pub enum Bound {
    Unbounded,
    Open(RealPoint),
    Closed(RealPoint),
}

impl Bound {
    pub fn point(&self) -> Option<&RealPoint> {
        match self {
            Bound::Unbounded => None,
            Bound::Open(p) | Bound::Closed(p) => Some(p),
        }
    }

    pub fn is_closed(&self) -> bool {
        matches!(self, Bound::Closed(_))
    }
}

/// A connected subset of the real line (possibly a single point).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RealInterval {
    pub lower: Bound,
    pub upper: Bound,
}

impl RealInterval {
    pub fn everything() -> Self {
        RealInterval {
            lower: Bound::Unbounded,
            upper: Bound::Unbounded,
        }
    }

    pub fn is_bounded(&self) -> bool {
        self.lower.point().is_some() && self.upper.point().is_some()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let x = RealPoint::Rational(x.clone());
        let above = match &self.lower {
            Bound::Unbounded => true,
            Bound::Open(p) => p.cmp_exact(&x) == Ordering::Less,
            Bound::Closed(p) => p.cmp_exact(&x) != Ordering::Greater,
        };
        let below = match &self.upper {
            Bound::Unbounded => true,
            Bound::Open(p) => x.cmp_exact(p) == Ordering::Less,
            Bound::Closed(p) => x.cmp_exact(p) != Ordering::Greater,
        };
        above && below
    }

    /// `upper - lower == 1` exactly, for a bounded interval.
    pub fn has_unit_length(&self) -> bool {
        match (self.lower.point(), self.upper.point()) {
            (Some(lo), Some(hi)) => lo.shifted(&Rational::one()).cmp_exact(hi) == Ordering::Equal,
            _ => false,
        }
    }

    /// All integers in a bounded interval, ascending; `None` if unbounded.
    pub fn integers(&self) -> Option<Vec<BigInt>> {
        let (lo, hi) = (self.lower.point()?, self.upper.point()?);
        let mut first = lo.ceil();
        if !self.lower.is_closed() && lo.as_rational().is_some_and(|r| r.is_integer()) {
            first += 1;
        }
        let mut last = hi.floor();
        if !self.upper.is_closed() && hi.as_rational().is_some_and(|r| r.is_integer()) {
            last -= 1;
        }
        let mut out = Vec::new();
        let mut k = first;
        while k <= last {
            out.push(k.clone());
            k += 1;
        }
        Some(out)
    }
}

impl fmt::Display for RealInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.lower {
            Bound::Unbounded => write!(f, "(-inf")?,
            Bound::Open(p) => write!(f, "({p}")?,
            Bound::Closed(p) => write!(f, "[{p}")?,
        }
        write!(f, ", ")?;
        match &self.upper {
            Bound::Unbounded => write!(f, "+inf)"),
            Bound::Open(p) => write!(f, "{p})"),
            Bound::Closed(p) => write!(f, "{p}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignRegion {
    #[serde(flatten)]
    pub interval: RealInterval,
    pub sign: Sign,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SignCondition {
    NonPositive,
    NonNegative,
}

impl SignCondition {
    pub fn holds(self, s: Sign) -> bool {
        match self {
            SignCondition::NonPositive => s != Sign::Positive,
            SignCondition::NonNegative => s != Sign::Negative,
        }
    }
}

enum Piece {
    Open {
        lo: Option<RealPoint>,
        hi: Option<RealPoint>,
        sample: Rational,
    },
    Point(RealPoint),
}

impl Piece {
    fn eventual_sign(&self, coeffs: &[UPoly]) -> Sign {
        match self {
            Piece::Open { sample, .. } => {
                eventual_sign_at(coeffs, &RealPoint::Rational(sample.clone()))
            }
            Piece::Point(p) => eventual_sign_at(coeffs, p),
        }
    }
}

/// Sorted, deduplicated real roots of all the nonconstant polynomials.
fn critical_points<'a>(polys: impl IntoIterator<Item = &'a UPoly>) -> Vec<RealPoint> {
    let mut pts: Vec<RealPoint> = Vec::new();
    for p in polys {
        if p.is_constant() {
            continue;
        }
        for r in isolate_real_roots(p).expect("nonzero") {
            let pt = RealPoint::from_box(r.boxed);
            match pts.binary_search_by(|q| q.cmp_exact(&pt)) {
                Ok(_) => {}
                Err(pos) => pts.insert(pos, pt),
            }
        }
    }
    pts
}

fn decompose(points: Vec<RealPoint>) -> Vec<Piece> {
    if points.is_empty() {
        return vec![Piece::Open {
            lo: None,
            hi: None,
            sample: rat(0),
        }];
    }
    let mut out = Vec::with_capacity(2 * points.len() + 1);
    let first_lo = points[0].bounds().0 - rat(1);
    out.push(Piece::Open {
        lo: None,
        hi: Some(points[0].clone()),
        sample: first_lo,
    });
    for (k, p) in points.iter().enumerate() {
        out.push(Piece::Point(p.clone()));
        match points.get(k + 1) {
            Some(next) => out.push(Piece::Open {
                lo: Some(p.clone()),
                hi: Some(next.clone()),
                sample: RealPoint::rational_between(p, next),
            }),
            None => out.push(Piece::Open {
                lo: Some(p.clone()),
                hi: None,
                sample: p.bounds().1 + rat(1),
            }),
        }
    }
    out
}

/// Merge consecutive pieces with equal labels into maximal intervals.
fn runs<T: PartialEq + Clone>(pieces: &[Piece], labels: &[T]) -> Vec<(RealInterval, T)> {
    let mut out: Vec<(RealInterval, T)> = Vec::new();
    for (piece, label) in pieces.iter().zip(labels) {
        let (lower, upper) = match piece {
            Piece::Open { lo, hi, .. } => (
                lo.clone().map_or(Bound::Unbounded, Bound::Open),
                hi.clone().map_or(Bound::Unbounded, Bound::Open),
            ),
            Piece::Point(p) => (Bound::Closed(p.clone()), Bound::Closed(p.clone())),
        };
        match out.last_mut() {
            Some((iv, l)) if l == label => iv.upper = upper,
            _ => out.push((RealInterval { lower, upper }, label.clone())),
        }
    }
    out
}

/// Eventual sign (as `m -> infinity`) of `sum_k coeffs[k](b) m^k` at a
/// point `b`: the sign of the highest coefficient not vanishing at `b`.
pub fn eventual_sign_at(coeffs: &[UPoly], b: &RealPoint) -> Sign {
    for c in coeffs.iter().rev() {
        if c.is_zero() {
            continue;
        }
        let s = b.sign_of(c);
        if s != Sign::Zero {
            return s;
        }
    }
    Sign::Zero
}

/// Partition of the real line into maximal intervals on which the eventual
/// sign of `sum_k coeffs[k](b) m^k` is constant.
pub fn eventual_sign_region(coeffs: &[UPoly]) -> Vec<SignRegion> {
    let pieces = decompose(critical_points(coeffs));
    let labels: Vec<Sign> = pieces.iter().map(|p| p.eventual_sign(coeffs)).collect();
    runs(&pieces, &labels)
        .into_iter()
        .map(|(interval, sign)| SignRegion { interval, sign })
        .collect()
}

/// The set of `b` where every listed polynomial satisfies its eventual sign
/// condition, as a list of disjoint maximal intervals in increasing order.
pub fn feasible_set(conditions: &[(&[UPoly], SignCondition)]) -> Vec<RealInterval> {
    let pieces = decompose(critical_points(
        conditions.iter().flat_map(|(c, _)| c.iter()),
    ));
    let labels: Vec<bool> = pieces
        .iter()
        .map(|p| {
            conditions
                .iter()
                .all(|(coeffs, cond)| cond.holds(p.eventual_sign(coeffs)))
        })
        .collect();
    runs(&pieces, &labels)
        .into_iter()
        .filter(|(_, ok)| *ok)
        .map(|(iv, _)| iv)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::frac;

    fn p(c: &[i64]) -> UPoly {
        UPoly::from_ints(c)
    }

    fn pt(r: Rational) -> RealPoint {
        RealPoint::Rational(r)
    }

    #[test]
    fn linear_constant_term() {
        // c0 = 2b + 1/2
        let c0 = UPoly::new(vec![frac(1, 2), rat(2)]);
        let r = eventual_sign_region(&[c0]);
        assert_eq!(r.len(), 3);
        assert_eq!(r[0].sign, Sign::Negative);
        assert_eq!(r[0].interval.upper, Bound::Open(pt(frac(-1, 4))));
        assert_eq!(r[1].sign, Sign::Zero);
        assert_eq!(r[1].interval.lower, Bound::Closed(pt(frac(-1, 4))));
        assert_eq!(r[1].interval.upper, Bound::Closed(pt(frac(-1, 4))));
        assert_eq!(r[2].sign, Sign::Positive);
        assert_eq!(r[2].interval.upper, Bound::Unbounded);
    }

    #[test]
    fn constant_top_coefficient() {
        // c0 = b, c1 = 0, c2 = 1
        let r = eventual_sign_region(&[p(&[0, 1]), UPoly::zero(), p(&[1])]);
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].sign, Sign::Positive);
        assert_eq!(r[0].interval, RealInterval::everything());
    }

    #[test]
    fn lexicographic_leading_sign() {
        // c0 = b^2, c1 = b: the m-coefficient decides away from 0
        let r = eventual_sign_region(&[p(&[0, 0, 1]), p(&[0, 1])]);
        let signs: Vec<Sign> = r.iter().map(|x| x.sign).collect();
        assert_eq!(signs, vec![Sign::Negative, Sign::Zero, Sign::Positive]);
        assert_eq!(r[1].interval.lower, Bound::Closed(pt(rat(0))));
    }

    #[test]
    fn all_zero_is_single_zero_region() {
        let r = eventual_sign_region(&[UPoly::zero(), UPoly::zero()]);
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].sign, Sign::Zero);
    }

    #[test]
    fn unit_interval_from_two_conditions() {
        // 2b + 1/2 <= 0 and -(2(b+1) + 1/2) <= 0
        let a = UPoly::new(vec![frac(1, 2), rat(2)]);
        let b = UPoly::new(vec![frac(-5, 2), rat(-2)]);
        let set = feasible_set(&[
            (std::slice::from_ref(&a), SignCondition::NonPositive),
            (std::slice::from_ref(&b), SignCondition::NonPositive),
        ]);
        assert_eq!(set.len(), 1);
        let iv = &set[0];
        assert_eq!(iv.lower, Bound::Closed(pt(frac(-5, 4))));
        assert_eq!(iv.upper, Bound::Closed(pt(frac(-1, 4))));
        assert!(iv.has_unit_length());
        assert_eq!(iv.integers(), Some(vec![BigInt::from(-1)]));
        assert!(iv.contains(&rat(-1)) && !iv.contains(&rat(0)));
    }

    #[test]
    fn integers_respect_open_ends() {
        let iv = RealInterval {
            lower: Bound::Open(pt(rat(-1))),
            upper: Bound::Closed(pt(rat(0))),
        };
        assert_eq!(iv.integers(), Some(vec![BigInt::from(0)]));
        let iv = RealInterval {
            lower: Bound::Closed(pt(rat(-1))),
            upper: Bound::Closed(pt(rat(0))),
        };
        assert_eq!(iv.integers().unwrap().len(), 2);
    }
}
