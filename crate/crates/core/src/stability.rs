//! The stability function `e_Y`, eventual-sign semistability, twistable
//! intervals and the canonical sign criterion.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactnum::{
    binomial, eventual_sign, eventual_sign_region, factorial, feasible_set, Poly, Rational,
    RealInterval, RealPoint, Ring, Sign, SignCondition, SignRegion, UPoly,
};
use crate::par::Exec;
use crate::sncmodel::{ClassExpr, ComponentSet, Configuration};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Minus,
    Plus,
}

impl Mode {
    pub fn condition(self) -> SignCondition {
        match self {
            Mode::Minus => SignCondition::NonPositive,
            Mode::Plus => SignCondition::NonNegative,
        }
    }

    pub fn allows(self, s: Sign) -> bool {
        self.condition().holds(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scope {
    /// Unions that are connected with connected complement.
    ConnectedPairs,
    AllUnions,
}

/// `e_Y(M)` for a class given as a dense basis vector over any ring.
pub fn e_generic<R: Ring>(config: &Configuration, y: ComponentSet, m: &[R]) -> Result<R> {
    if y.is_empty() {
        return Err(Error::EmptyUnion);
    }
    let d = config.dim();
    let yv: Vec<R> = config.union_vector(y);
    let xv: Vec<R> = config.union_vector(config.full());
    let mut series = R::zero();
    for j in 1..=d + 1 {
        let mut args: Vec<&[R]> = vec![m; d + 1 - j];
        args.extend(std::iter::repeat_n(yv.as_slice(), j));
        let term = config.intersect_vectors(&args)?;
        let c = Rational::from_integer(binomial(d + 1, j));
        let c = if j % 2 == 1 { c } else { -c };
        series = series + term.scale(&c);
    }
    let mut args: Vec<&[R]> = vec![m; d];
    args.push(&xv);
    let deg_x = config.intersect_vectors(&args)?;
    let chi_x = config.chi_union_vector(config.full(), m)?;
    let chi_y = config.chi_union_vector(y, m)?;
    let inner = chi_x * series.scale(&Rational::new(One::one(), BigInt::from(d + 1))) - deg_x * chi_y;
    Ok(inner.scale(&Rational::from_integer(factorial(d))))
}

/// Exact value of `e_Y(M)`.
pub fn e_value(config: &Configuration, y: ComponentSet, m: &ClassExpr) -> Result<Rational> {
    let v: Vec<Rational> = config.vector(m)?;
    e_generic(config, y, &v)
}

/// `e_Y(L + mH + bW)` as a polynomial in `m` and `b`.
pub fn e_poly(
    config: &Configuration,
    y: ComponentSet,
    l: &ClassExpr,
    h: &ClassExpr,
    w: ComponentSet,
) -> Result<Poly> {
    if w.is_empty() {
        return Err(Error::EmptyUnion);
    }
    let lv: Vec<Rational> = config.vector(l)?;
    let hv: Vec<Rational> = config.vector(h)?;
    let wv: Vec<Rational> = config.union_vector(w);
    let v: Vec<Poly> = (0..lv.len())
        .map(|s| {
            Poly::constant(lv[s].clone()) + Poly::m().scale(&hv[s]) + Poly::b().scale(&wv[s])
        })
        .collect();
    e_generic(config, y, &v)
}

/// `e_Y(L + mH)` as a polynomial in `m`.
pub fn e_poly_m(config: &Configuration, y: ComponentSet, l: &ClassExpr, h: &ClassExpr) -> Result<UPoly> {
    let lv: Vec<Rational> = config.vector(l)?;
    let hv: Vec<Rational> = config.vector(h)?;
    let v: Vec<UPoly> = lv
        .iter()
        .zip(&hv)
        .map(|(a, b)| UPoly::new(vec![a.clone(), b.clone()]))
        .collect();
    e_generic(config, y, &v)
}

pub fn eventually_nonpositive(config: &Configuration, y: ComponentSet, l: &ClassExpr, h: &ClassExpr) -> Result<bool> {
    Ok(eventual_sign(&e_poly_m(config, y, l, h)?) != Sign::Positive)
}

pub fn eventually_nonnegative(config: &Configuration, y: ComponentSet, l: &ClassExpr, h: &ClassExpr) -> Result<bool> {
    Ok(eventual_sign(&e_poly_m(config, y, l, h)?) != Sign::Negative)
}

pub fn scope_unions(config: &Configuration, scope: Scope) -> Vec<ComponentSet> {
    match scope {
        Scope::ConnectedPairs => config.connected_pairs(),
        Scope::AllUnions => ComponentSet::proper_unions(config.num_components()).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnionCheck {
    #[serde(serialize_with = "ser_union")]
    pub union: ComponentSet,
    /// `e_Y(L + mH)` in `m`.
    #[serde(serialize_with = "ser_upoly")]
    pub e: UPoly,
    pub sign: Sign,
    pub ok: bool,
}

fn ser_union<S: serde::Serializer>(y: &ComponentSet, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(y.iter())
}

fn ser_upoly<S: serde::Serializer>(p: &UPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(p.coeffs().iter().map(|c| c.to_string()))
}

/// Per-union eventual-sign checks, in union order.
pub fn semistability_checks(
    config: &Configuration,
    l: &ClassExpr,
    h: &ClassExpr,
    mode: Mode,
    scope: Scope,
    exec: Exec,
) -> Result<Vec<UnionCheck>> {
    config.vector::<Rational>(l)?;
    config.vector::<Rational>(h)?;
    let unions = scope_unions(config, scope);
    exec.map(&unions, |&y| {
        let e = e_poly_m(config, y, l, h)?;
        let sign = eventual_sign(&e);
        Ok(UnionCheck {
            union: y,
            e,
            sign,
            ok: mode.allows(sign),
        })
    })
    .into_iter()
    .collect()
}

pub fn is_semistable(
    config: &Configuration,
    l: &ClassExpr,
    h: &ClassExpr,
    mode: Mode,
    scope: Scope,
) -> Result<bool> {
    is_semistable_with(config, l, h, mode, scope, Exec::default())
}

pub fn is_semistable_with(
    config: &Configuration,
    l: &ClassExpr,
    h: &ClassExpr,
    mode: Mode,
    scope: Scope,
    exec: Exec,
) -> Result<bool> {
    config.vector::<Rational>(l)?;
    config.vector::<Rational>(h)?;
    let unions = scope_unions(config, scope);
    Ok(exec.all(&unions, |&y| {
        e_poly_m(config, y, l, h)
            .map(|e| mode.allows(eventual_sign(&e)))
            .unwrap_or(false)
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CaseLabel {
    /// `(s - 1, s]`
    Case1,
    /// `[s - 1, s)`
    Case2,
    /// `[s - 1, s]`
    Case3,
    /// Curves: the endpoint is fixed and both ends are included.
    CurveExact,
}

impl CaseLabel {
    /// `(left_closed, right_closed)` predicted by the label.
    pub fn closures(self) -> (bool, bool) {
        match self {
            CaseLabel::Case1 => (false, true),
            CaseLabel::Case2 => (true, false),
            CaseLabel::Case3 | CaseLabel::CurveExact => (true, true),
        }
    }
}

/// Limit data of `e_Y(L + mH + bY)` when its top `m`-coefficient is linear
/// in `b`: `A1 b + A0`, root `s`, and `q(m) = e_Y(L + mH + sY)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitData {
    #[serde(with = "crate::exactnum::rational_str")]
    pub a1: Rational,
    #[serde(with = "crate::exactnum::rational_str")]
    pub a0: Rational,
    #[serde(with = "crate::exactnum::rational_str")]
    pub s: Rational,
    /// Eventual sign of `q`.
    pub q_sign: Sign,
}

pub fn limit_data(p: &Poly) -> Option<LimitData> {
    let top = p.m_coeffs_in_b().pop()?;
    if top.degree() != Some(1) {
        return None;
    }
    let a1 = top.coeff(1);
    let a0 = top.coeff(0);
    let s = -a0.clone() / a1.clone();
    let q_sign = eventual_sign(&p.subst_b(&s));
    Some(LimitData { a1, a0, s, q_sign })
}

/// Endpoint case from the limit analysis, when it applies to `mode`.
pub fn derived_case(limit: &LimitData, mode: Mode) -> Option<CaseLabel> {
    let a1 = Sign::of(&limit.a1);
    let applies = matches!((mode, a1), (Mode::Minus, Sign::Positive) | (Mode::Plus, Sign::Negative));
    if !applies {
        return None;
    }
    Some(if limit.q_sign == Sign::Zero {
        CaseLabel::Case3
    } else if limit.q_sign == a1.flip() {
        CaseLabel::Case1
    } else {
        CaseLabel::Case2
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnitInterval {
    pub interval: RealInterval,
    /// Right endpoint.
    pub s: RealPoint,
    pub left_closed: bool,
    pub right_closed: bool,
    pub case: Option<CaseLabel>,
    /// `Some(true)` when the limit analysis predicts the same endpoint and
    /// closures as the direct computation.
    pub cross_check: Option<bool>,
    pub candidates: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Degenerate {
    pub reason: String,
    pub feasible: Vec<RealInterval>,
    pub y_regions: Vec<SignRegion>,
    pub z_regions: Vec<SignRegion>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IntervalKind {
    UnitInterval(UnitInterval),
    Degenerate(Degenerate),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalReport {
    #[serde(flatten)]
    pub kind: IntervalKind,
    pub e_y: Poly,
    pub e_z: Poly,
    pub limit: Option<LimitData>,
    /// Case predicted by the limit analysis, independent of `kind`.
    pub derived_case: Option<CaseLabel>,
}

impl IntervalReport {
    pub fn unit(&self) -> Option<&UnitInterval> {
        match &self.kind {
            IntervalKind::UnitInterval(u) => Some(u),
            IntervalKind::Degenerate(_) => None,
        }
    }

    pub fn degenerate_reason(&self) -> Option<&str> {
        match &self.kind {
            IntervalKind::UnitInterval(_) => None,
            IntervalKind::Degenerate(d) => Some(&d.reason),
        }
    }
}

/// The set of real `b` with `e_Y(L + mH + bY)` and `e_Z(L + mH + bY)`
/// eventually of the sign required by `mode`.
pub fn twistable_interval(
    config: &Configuration,
    y: ComponentSet,
    l: &ClassExpr,
    h: &ClassExpr,
    mode: Mode,
) -> Result<IntervalReport> {
    let n = config.num_components();
    if y.is_empty() {
        return Err(Error::EmptyUnion);
    }
    let z = y.complement(n);
    if z.is_empty() {
        return Err(Error::FullUnion);
    }
    let p = e_poly(config, y, l, h, y)?;
    let q = e_poly(config, z, l, h, y)?;
    let pc = p.m_coeffs_in_b();
    let qc = q.m_coeffs_in_b();
    let cond = mode.condition();
    let feasible = feasible_set(&[(&pc, cond), (&qc, cond)]);
    let limit = limit_data(&p);
    let derived = limit.as_ref().and_then(|lim| derived_case(lim, mode));

    let diagnose = |reason: &str| {
        IntervalKind::Degenerate(Degenerate {
            reason: reason.to_string(),
            feasible: feasible.clone(),
            y_regions: eventual_sign_region(&pc),
            z_regions: eventual_sign_region(&qc),
        })
    };
    let kind = if p.degree_b().unwrap_or(0) == 0 {
        diagnose("constant in b")
    } else if feasible.is_empty() {
        diagnose("empty")
    } else if feasible.len() > 1 {
        diagnose("not connected")
    } else if !feasible[0].is_bounded() {
        diagnose("unbounded")
    } else if !feasible[0].has_unit_length() {
        diagnose("not unit length")
    } else if !feasible[0].lower.is_closed() && !feasible[0].upper.is_closed() {
        diagnose("neither endpoint included")
    } else {
        let iv = feasible[0].clone();
        let s = iv.upper.point().expect("bounded").clone();
        let (left_closed, right_closed) = (iv.lower.is_closed(), iv.upper.is_closed());
        let candidates = iv
            .integers()
            .expect("bounded")
            .into_iter()
            .map(|k| i64::try_from(&k).map_err(|_| Error::Malformed(format!("twist coordinate {k} exceeds i64"))))
            .collect::<Result<Vec<i64>>>()?;
        let cross_check = match (&derived, &limit) {
            (Some(c), Some(lim)) => Some(
                c.closures() == (left_closed, right_closed)
                    && s.cmp_exact(&RealPoint::Rational(lim.s.clone())) == Ordering::Equal,
            ),
            _ => None,
        };
        let case = derived.map(|c| if config.dim() == 1 { CaseLabel::CurveExact } else { c });
        IntervalKind::UnitInterval(UnitInterval {
            interval: iv,
            s,
            left_closed,
            right_closed,
            case,
            cross_check,
            candidates,
        })
    };
    Ok(IntervalReport {
        kind,
        e_y: p,
        e_z: q,
        limit,
        derived_case: derived,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum KxClass {
    MinusTwistable,
    PlusTwistable,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KxReport {
    #[serde(with = "crate::exactnum::rational_str")]
    pub value: Rational,
    pub classification: KxClass,
}

/// `[K^d X] * [K^(d-1) Y Y]` and the twistability it predicts.
pub fn kx_criterion(config: &Configuration, y: ComponentSet) -> Result<KxReport> {
    let k = config.canonical().ok_or(Error::NoCanonical)?;
    if y.is_empty() {
        return Err(Error::EmptyUnion);
    }
    let d = config.dim();
    let mut kv = vec![Rational::zero(); config.num_symbols()];
    kv[k] = Rational::one();
    let yv: Vec<Rational> = config.union_vector(y);
    let xv: Vec<Rational> = config.union_vector(config.full());
    let mut args: Vec<&[Rational]> = vec![&kv; d];
    args.push(&xv);
    let kd = config.intersect_vectors(&args)?;
    let mut args: Vec<&[Rational]> = vec![&kv; d - 1];
    args.push(&yv);
    args.push(&yv);
    let ky2 = config.intersect_vectors(&args)?;
    let value = kd * ky2;
    let classification = if value.is_negative() {
        KxClass::MinusTwistable
    } else if value.is_positive() {
        KxClass::PlusTwistable
    } else {
        KxClass::Inconclusive
    };
    Ok(KxReport { value, classification })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::exactnum::{frac, rat, Bound};
    use crate::sncmodel::curve_builder;

    fn curve(genera: &[u32], l: &[i64]) -> Configuration {
        let deg = BTreeMap::from([("L".to_string(), l.to_vec())]);
        curve_builder(genera, &[(0, 1, 1)], &deg).unwrap()
    }

    fn y1() -> ComponentSet {
        ComponentSet::singleton(0)
    }

    fn class(c: &Configuration, s: &str) -> ClassExpr {
        c.parse_class(s).unwrap()
    }

    #[test]
    fn e_on_small_curves() {
        let c1 = curve(&[2, 1], &[3, 2]);
        assert_eq!(e_value(&c1, y1(), &class(&c1, "L")).unwrap(), frac(1, 2));
        assert_eq!(e_value(&c1, c1.full(), &class(&c1, "L")).unwrap(), rat(0));
        let c2 = curve(&[2, 2], &[1, 2]);
        assert_eq!(e_value(&c2, y1(), &class(&c2, "L")).unwrap(), rat(0));
        assert_eq!(e_value(&c1, ComponentSet::default(), &class(&c1, "L")), Err(Error::EmptyUnion));
    }

    #[test]
    fn e_poly_linear_form() {
        let c = curve(&[2, 1], &[3, 2]);
        let p = e_poly(&c, y1(), &class(&c, "L"), &class(&c, "K"), y1()).unwrap();
        let expected = Poly::b().scale(&rat(2)) + Poly::constant(frac(1, 2));
        assert_eq!(p, expected);
        // substitution agrees with the twisted value
        for b in -3..=3 {
            let twisted = class(&c, "L").plus(&ClassExpr::twist(&[b, 0]));
            assert_eq!(p.eval(&rat(0), &rat(b)), e_value(&c, y1(), &twisted).unwrap());
        }
    }

    #[test]
    fn eventual_signs() {
        let c = curve(&[2, 1], &[3, 2]);
        let k = class(&c, "K");
        assert!(!eventually_nonpositive(&c, y1(), &class(&c, "L"), &k).unwrap());
        assert!(eventually_nonpositive(&c, y1(), &class(&c, "L - Y1"), &k).unwrap());
        assert!(eventually_nonpositive(&c, c.full(), &class(&c, "L"), &k).unwrap());
        assert!(eventually_nonnegative(&c, c.full(), &class(&c, "L"), &k).unwrap());
    }

    #[test]
    fn semistability_of_twists() {
        let c = curve(&[2, 1], &[4, 1]);
        let (l, k) = (class(&c, "L"), class(&c, "K"));
        assert!(is_semistable(&c, &l, &k, Mode::Minus, Scope::AllUnions).unwrap());
        let c = curve(&[2, 1], &[5, 0]);
        assert!(!is_semistable(&c, &class(&c, "L"), &k, Mode::Minus, Scope::AllUnions).unwrap());
        let checks = semistability_checks(&c, &class(&c, "L"), &k, Mode::Minus, Scope::AllUnions, Exec::Sequential).unwrap();
        let bad: Vec<_> = checks.iter().filter(|u| !u.ok).collect();
        assert_eq!(bad.len(), 1);
        assert_eq!(bad[0].union, ComponentSet::singleton(1));
        assert_eq!(bad[0].e.coeff(0), frac(3, 2));
        let single = curve_builder(&[2], &[], &BTreeMap::new()).unwrap();
        assert!(is_semistable(&single, &class(&single, "L"), &class(&single, "K"), Mode::Minus, Scope::AllUnions).unwrap());
    }

    #[test]
    fn interval_two_component_unique() {
        let c = curve(&[2, 1], &[3, 2]);
        let r = twistable_interval(&c, y1(), &class(&c, "L"), &class(&c, "K"), Mode::Minus).unwrap();
        let u = r.unit().expect("unit interval");
        assert_eq!(u.interval.lower, Bound::Closed(RealPoint::Rational(frac(-5, 4))));
        assert_eq!(u.interval.upper, Bound::Closed(RealPoint::Rational(frac(-1, 4))));
        assert_eq!(u.candidates, vec![-1]);
        assert_eq!(u.case, Some(CaseLabel::CurveExact));
        assert_eq!(u.cross_check, Some(true));
    }

    #[test]
    fn interval_two_component_integer_ends() {
        let c = curve(&[2, 2], &[1, 2]);
        let r = twistable_interval(&c, y1(), &class(&c, "L"), &class(&c, "K"), Mode::Minus).unwrap();
        let u = r.unit().unwrap();
        assert!(u.left_closed && u.right_closed);
        assert_eq!(u.candidates, vec![-1, 0]);
    }

    #[test]
    fn genus_one_is_degenerate() {
        let c = curve(&[1, 0], &[2, 1]);
        let r = twistable_interval(&c, y1(), &class(&c, "L"), &class(&c, "K"), Mode::Minus).unwrap();
        assert_eq!(r.degenerate_reason(), Some("constant in b"));
        assert!(twistable_interval(&c, c.full(), &class(&c, "L"), &class(&c, "K"), Mode::Minus).is_err());
    }

    #[test]
    fn canonical_criterion() {
        let c = curve(&[2, 1], &[3, 2]);
        let r = kx_criterion(&c, y1()).unwrap();
        assert_eq!(r.value, rat(-4));
        assert_eq!(r.classification, KxClass::MinusTwistable);
        let c = curve(&[0, 0], &[0, 0]);
        let r = kx_criterion(&c, y1()).unwrap();
        assert_eq!(r.value, rat(2));
        assert_eq!(r.classification, KxClass::PlusTwistable);
        let c = curve(&[1, 0], &[0, 0]);
        assert_eq!(kx_criterion(&c, y1()).unwrap().classification, KxClass::Inconclusive);
    }
}
