//! Real root isolation by Descartes-rule bisection, and exact comparison of
//! the resulting real algebraic points.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::{approx, rat, Rational, Sign, UPoly};
use crate::error::{Error, Result};

/// An isolating interval `(lo, hi)` for exactly one real root of a
/// square-free polynomial. Endpoints are never roots.
#[derive(Clone, PartialEq, Eq)]
pub struct RootBox {
    poly: UPoly,
    lo: Rational,
    hi: Rational,
    /// Set when the root is known to be rational.
    exact: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RealRoot {
    #[serde(rename = "root")]
    pub boxed: RootBox,
    pub multiplicity: usize,
}

impl RootBox {
    pub fn poly(&self) -> &UPoly {
        &self.poly
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn exact(&self) -> Option<&Rational> {
        self.exact.as_ref()
    }

    /// Halve the box once.
    pub fn bisect(&mut self) {
        if let Some(r) = &self.exact {
            let quarter = self.width() / rat(4);
            self.lo = r - &quarter;
            self.hi = r + &quarter;
            return;
        }
        let mid = (&self.lo + &self.hi) / rat(2);
        let s_lo = self.poly.sign_at(&self.lo);
        let s_mid = self.poly.sign_at(&mid);
        if s_mid == Sign::Zero {
            // the only root in the box is `mid`
            let quarter = self.width() / rat(4);
            self.lo = &mid - &quarter;
            self.hi = &mid + &quarter;
            self.exact = Some(mid);
        } else if s_mid == s_lo {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
    }

    pub fn refine_to(&mut self, width: &Rational) {
        while &self.width() > width {
            self.bisect();
        }
    }

    /// Default display refinement, `2^-32`.
    pub fn refine_default(&mut self) {
        let w = Rational::new(BigInt::one(), BigInt::one() << 32);
        self.refine_to(&w);
    }

    pub fn midpoint(&self) -> Rational {
        match &self.exact {
            Some(r) => r.clone(),
            None => (&self.lo + &self.hi) / rat(2),
        }
    }

    /// Detects a rational root by testing the at most two candidates
    /// `k / lc` inside a box narrower than `1/|lc|`.
    fn detect_rational(&mut self) {
        if self.exact.is_some() {
            return;
        }
        let ints = self.poly.primitive_integer();
        let lc = ints.last().cloned().unwrap_or_else(BigInt::one).abs();
        let limit = Rational::new(BigInt::one(), lc.clone());
        while self.width() >= limit {
            self.bisect();
        }
        let lcr = Rational::from_integer(lc.clone());
        let lo_k = (&self.lo * &lcr).ceil().to_integer();
        let hi_k = (&self.hi * &lcr).floor().to_integer();
        let mut k = lo_k;
        while k <= hi_k {
            let cand = Rational::new(k.clone(), lc.clone());
            if cand > self.lo && cand < self.hi && self.poly.eval(&cand).is_zero() {
                self.exact = Some(cand);
                return;
            }
            k += 1;
        }
    }
}

impl fmt::Debug for RootBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RootBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact {
            Some(r) => write!(f, "{r}"),
            None => write!(
                f,
                "root of {} in ({}, {}) ~ {:.6}",
                self.poly,
                self.lo,
                self.hi,
                approx(&self.midpoint())
            ),
        }
    }
}

impl Serialize for RootBox {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("RootBox", 5)?;
        let coeffs: Vec<String> = self.poly.coeffs().iter().map(|c| c.to_string()).collect();
        st.serialize_field("poly", &coeffs)?;
        st.serialize_field("lo", &self.lo.to_string())?;
        st.serialize_field("hi", &self.hi.to_string())?;
        st.serialize_field("exact", &self.exact.as_ref().map(|r| r.to_string()))?;
        st.serialize_field("approx", &approx(&self.midpoint()))?;
        st.end()
    }
}

/// Isolates every distinct real root of a nonzero polynomial, in increasing
/// order, with multiplicities from the square-free decomposition.
pub fn isolate_real_roots(p: &UPoly) -> Result<Vec<RealRoot>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = Vec::new();
    for (factor, mult) in p.square_free_decomposition() {
        for b in isolate_square_free(&factor) {
            out.push(RealRoot {
                boxed: b,
                multiplicity: mult,
            });
        }
    }
    // factors are coprime, so roots are distinct; sort exactly
    out.sort_by(|a, b| {
        RealPoint::from_box(a.boxed.clone()).cmp_exact(&RealPoint::from_box(b.boxed.clone()))
    });
    for k in 1..out.len() {
        let (left, right) = out.split_at_mut(k);
        let (a, b) = (&mut left[k - 1].boxed, &mut right[0].boxed);
        while a.hi > b.lo {
            if a.width() >= b.width() {
                a.bisect();
            } else {
                b.bisect();
            }
        }
    }
    Ok(out)
}

fn isolate_square_free(f: &UPoly) -> Vec<RootBox> {
    let Some(deg) = f.degree() else {
        return Vec::new();
    };
    if deg == 0 {
        return Vec::new();
    }
    let bound = f.cauchy_bound();
    let mut found = Vec::new();
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((lo, hi)) = stack.pop() {
        match f.descartes_count(&lo, &hi) {
            0 => {}
            1 => found.push(tighten(f, lo, hi)),
            _ => {
                let mid = (&lo + &hi) / rat(2);
                if f.eval(&mid).is_zero() {
                    found.push(exact_box(f, &mid, &(&hi - &lo)));
                }
                stack.push((lo, mid.clone()));
                stack.push((mid, hi));
            }
        }
    }
    for b in &mut found {
        b.detect_rational();
    }
    found.sort_by(|a, b| a.lo.cmp(&b.lo));
    found
}

/// Box around a known rational root containing no other root.
fn exact_box(f: &UPoly, r: &Rational, width: &Rational) -> RootBox {
    let mut delta = width / rat(4);
    loop {
        let lo = r - &delta;
        let hi = r + &delta;
        if !f.eval(&lo).is_zero()
            && !f.eval(&hi).is_zero()
            && f.descartes_count(&lo, &hi) == 1
        {
            return RootBox {
                poly: f.clone(),
                lo,
                hi,
                exact: Some(r.clone()),
            };
        }
        delta /= rat(2);
    }
}

/// Given an open interval holding exactly one root, shrink it until neither
/// endpoint is a root.
fn tighten(f: &UPoly, mut lo: Rational, mut hi: Rational) -> RootBox {
    loop {
        let lo_root = f.eval(&lo).is_zero();
        let hi_root = f.eval(&hi).is_zero();
        if !lo_root && !hi_root {
            return RootBox {
                poly: f.clone(),
                lo,
                hi,
                exact: None,
            };
        }
        let mid = (&lo + &hi) / rat(2);
        if f.eval(&mid).is_zero() {
            return exact_box(f, &mid, &(&hi - &lo));
        }
        if f.descartes_count(&lo, &mid) == 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
}

/// A real number that is either rational or an irrational algebraic number
/// given by an isolating box.
#[derive(Clone, PartialEq, Eq)]
pub enum RealPoint {
    Rational(Rational),
    Algebraic(RootBox),
}

impl RealPoint {
    pub fn from_box(mut b: RootBox) -> RealPoint {
        b.detect_rational();
        match b.exact {
            Some(r) => RealPoint::Rational(r),
            None => RealPoint::Algebraic(b),
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            RealPoint::Rational(r) => Some(r),
            RealPoint::Algebraic(_) => None,
        }
    }

    /// Rational lower and upper bounds (equal for rationals).
    pub fn bounds(&self) -> (Rational, Rational) {
        match self {
            RealPoint::Rational(r) => (r.clone(), r.clone()),
            RealPoint::Algebraic(b) => (b.lo.clone(), b.hi.clone()),
        }
    }

    pub fn approx(&self) -> f64 {
        match self {
            RealPoint::Rational(r) => approx(r),
            RealPoint::Algebraic(b) => {
                let mut b = b.clone();
                b.refine_default();
                approx(&b.midpoint())
            }
        }
    }

    /// `self + c`.
    pub fn shifted(&self, c: &Rational) -> RealPoint {
        match self {
            RealPoint::Rational(r) => RealPoint::Rational(r + c),
            RealPoint::Algebraic(b) => RealPoint::Algebraic(RootBox {
                poly: b.poly.shift(&-c.clone()),
                lo: &b.lo + c,
                hi: &b.hi + c,
                exact: None,
            }),
        }
    }

    fn refine(&mut self) {
        if let RealPoint::Algebraic(b) = self {
            b.bisect();
        }
    }

    /// Exact total order on real points.
    pub fn cmp_exact(&self, other: &RealPoint) -> Ordering {
        match (self, other) {
            (RealPoint::Rational(a), RealPoint::Rational(b)) => a.cmp(b),
            (RealPoint::Rational(r), RealPoint::Algebraic(b)) => cmp_rational_root(r, b),
            (RealPoint::Algebraic(a), RealPoint::Rational(r)) => cmp_rational_root(r, a).reverse(),
            (RealPoint::Algebraic(a), RealPoint::Algebraic(b)) => cmp_roots(a, b),
        }
    }

    /// Exact sign of `q` evaluated at this point.
    pub fn sign_of(&self, q: &UPoly) -> Sign {
        match self {
            RealPoint::Rational(r) => q.sign_at(r),
            RealPoint::Algebraic(b) => sign_at_root(q, b),
        }
    }

    /// Integer floor, exact.
    pub fn floor(&self) -> BigInt {
        match self {
            RealPoint::Rational(r) => r.floor().to_integer(),
            RealPoint::Algebraic(b) => {
                let mut b = b.clone();
                // irrational: never an integer, so shrink until the box
                // holds no integer
                loop {
                    let fl = b.lo.floor();
                    if fl == b.hi.floor() && b.hi != b.hi.floor() {
                        return fl.to_integer();
                    }
                    b.bisect();
                }
            }
        }
    }

    pub fn ceil(&self) -> BigInt {
        match self {
            RealPoint::Rational(r) => r.ceil().to_integer(),
            RealPoint::Algebraic(_) => self.floor() + BigInt::one(),
        }
    }

    /// A rational strictly between `a < b`.
    pub fn rational_between(a: &RealPoint, b: &RealPoint) -> Rational {
        let (mut a, mut b) = (a.clone(), b.clone());
        loop {
            let hi_a = a.bounds().1;
            let lo_b = b.bounds().0;
            if hi_a < lo_b {
                return (hi_a + lo_b) / rat(2);
            }
            // a rational endpoint equal to the other's box bound still
            // leaves room strictly between once the box shrinks
            a.refine();
            b.refine();
        }
    }
}

fn cmp_rational_root(r: &Rational, b: &RootBox) -> Ordering {
    if let Some(e) = &b.exact {
        return r.cmp(e);
    }
    if r <= &b.lo {
        return Ordering::Less;
    }
    if r >= &b.hi {
        return Ordering::Greater;
    }
    // lo < r < hi and r is not a root: the sign change tells the side
    let s_lo = b.poly.sign_at(&b.lo);
    let s_r = b.poly.sign_at(r);
    if s_r == s_lo {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

fn root_of(g: &UPoly, b: &RootBox) -> bool {
    if g.degree().unwrap_or(0) == 0 {
        return false;
    }
    // g divides the square-free defining polynomial, so its roots inside the
    // box are a subset of {root}
    g.sign_at(&b.lo) != g.sign_at(&b.hi)
}

fn cmp_roots(a: &RootBox, b: &RootBox) -> Ordering {
    if let (Some(x), Some(y)) = (&a.exact, &b.exact) {
        return x.cmp(y);
    }
    if let Some(x) = &a.exact {
        return cmp_rational_root(x, b);
    }
    if let Some(y) = &b.exact {
        return cmp_rational_root(y, a).reverse();
    }
    let g = a.poly.gcd(&b.poly);
    let maybe_equal = root_of(&g, a) && root_of(&g, b);
    let (mut a, mut b) = (a.clone(), b.clone());
    loop {
        if a.hi <= b.lo {
            return Ordering::Less;
        }
        if b.hi <= a.lo {
            return Ordering::Greater;
        }
        if maybe_equal {
            let lo = if a.lo < b.lo { &a.lo } else { &b.lo };
            let hi = if a.hi > b.hi { &a.hi } else { &b.hi };
            // both are roots of g; one root of g in the hull means equal
            if !g.eval(lo).is_zero() && !g.eval(hi).is_zero() && g.sturm_count(lo, hi) == 1 {
                return Ordering::Equal;
            }
        }
        if a.width() >= b.width() {
            a.bisect();
        } else {
            b.bisect();
        }
    }
}

fn sign_at_root(q: &UPoly, b: &RootBox) -> Sign {
    if let Some(r) = &b.exact {
        return q.sign_at(r);
    }
    if q.is_zero() {
        return Sign::Zero;
    }
    if q.is_constant() {
        return Sign::of(&q.coeff(0));
    }
    let g = q.gcd(&b.poly);
    if root_of(&g, b) {
        return Sign::Zero;
    }
    let sq = q.square_free_part();
    let mut b = b.clone();
    loop {
        let s_lo = sq.sign_at(&b.lo);
        if s_lo != Sign::Zero
            && sq.sign_at(&b.hi) != Sign::Zero
            && sq.descartes_count(&b.lo, &b.hi) == 0
        {
            return q.sign_at(&b.lo);
        }
        b.bisect();
    }
}

impl PartialOrd for RealPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp_exact(other))
    }
}

impl fmt::Debug for RealPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for RealPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealPoint::Rational(r) => write!(f, "{r}"),
            RealPoint::Algebraic(b) => write!(f, "{b}"),
        }
    }
}

impl Serialize for RealPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            RealPoint::Rational(r) => s.serialize_str(&r.to_string()),
            RealPoint::Algebraic(b) => b.serialize(s),
        }
    }
}

impl From<Rational> for RealPoint {
    fn from(r: Rational) -> Self {
        RealPoint::Rational(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::frac;

    fn roots(p: &UPoly) -> Vec<RealRoot> {
        isolate_real_roots(p).unwrap()
    }

    #[test]
    fn factored_quadratic() {
        // (b - 1)(b + 2)
        let r = roots(&UPoly::from_ints(&[-2, 1, 1]));
        assert_eq!(r.len(), 2);
        assert_eq!(r[0].boxed.exact(), Some(&rat(-2)));
        assert_eq!(r[1].boxed.exact(), Some(&rat(1)));
        assert!(r.iter().all(|x| x.multiplicity == 1));
    }

    #[test]
    fn no_real_roots() {
        assert!(roots(&UPoly::from_ints(&[1, 0, 1])).is_empty());
    }

    #[test]
    fn perfect_square() {
        // (2b + 1)^2
        let r = roots(&UPoly::from_ints(&[1, 4, 4]));
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].boxed.exact(), Some(&frac(-1, 2)));
        assert_eq!(r[0].multiplicity, 2);
    }

    #[test]
    fn zero_rejected() {
        assert_eq!(isolate_real_roots(&UPoly::zero()), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn irrational_roots_compare() {
        // b^2 - 2
        let r = roots(&UPoly::from_ints(&[-2, 0, 1]));
        assert_eq!(r.len(), 2);
        let s2 = RealPoint::from_box(r[1].boxed.clone());
        assert!(matches!(s2, RealPoint::Algebraic(_)));
        assert_eq!(s2.cmp_exact(&RealPoint::Rational(frac(141, 100))), Ordering::Greater);
        assert_eq!(s2.cmp_exact(&RealPoint::Rational(frac(142, 100))), Ordering::Less);
        assert_eq!(s2.floor(), BigInt::from(1));
        // sqrt2 from a different polynomial: (b^2 - 2)(b - 3)
        let r2 = roots(&UPoly::from_ints(&[6, -2, -3, 1]));
        let other = RealPoint::from_box(r2[1].boxed.clone());
        assert_eq!(s2.cmp_exact(&other), Ordering::Equal);
        // sqrt2 + 1 is a root of b^2 - 2b - 1
        let shifted = s2.shifted(&rat(1));
        let r3 = roots(&UPoly::from_ints(&[-1, -2, 1]));
        assert_eq!(shifted.cmp_exact(&RealPoint::from_box(r3[1].boxed.clone())), Ordering::Equal);
        assert_eq!(shifted.sign_of(&UPoly::from_ints(&[-1, -2, 1])), Sign::Zero);
        assert_eq!(s2.sign_of(&UPoly::from_ints(&[-3, 2])), Sign::Negative);
    }

    #[test]
    fn rational_between_points() {
        let r = roots(&UPoly::from_ints(&[-2, 0, 1]));
        let a = RealPoint::from_box(r[0].boxed.clone());
        let b = RealPoint::Rational(rat(0));
        let q = RealPoint::rational_between(&a, &b);
        assert!(a.cmp_exact(&q.clone().into()) == Ordering::Less && q < rat(0));
    }
}
