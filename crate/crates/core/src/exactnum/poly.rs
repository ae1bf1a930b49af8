//! Sparse polynomials in the two formal variables `m` and `b`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{rational_str, Rational, Ring, UPoly};

/// `sum c_{ij} m^i b^j`, with no zero coefficients stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<(u32, u32), Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyTerm {
    pub m: u32,
    pub b: u32,
    #[serde(with = "rational_str")]
    pub coeff: Rational,
}

impl Poly {
    pub fn m() -> Poly {
        Poly::monomial(1, 0, Rational::one())
    }

    pub fn b() -> Poly {
        Poly::monomial(0, 1, Rational::one())
    }

    pub fn constant(c: Rational) -> Poly {
        Poly::monomial(0, 0, c)
    }

    pub fn monomial(i: u32, j: u32, c: Rational) -> Poly {
        let mut p = Poly::default();
        p.add_term(i, j, c);
        p
    }

    fn add_term(&mut self, i: u32, j: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((i, j)).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rational {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &Rational)> {
        self.terms.iter().map(|(&(i, j), c)| (i, j, c))
    }

    pub fn degree_m(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.0).max()
    }

    pub fn degree_b(&self) -> Option<u32> {
        self.terms.keys().map(|k| k.1).max()
    }

    /// Coefficients of `m^0, m^1, ...` as polynomials in `b`.
    pub fn m_coeffs_in_b(&self) -> Vec<UPoly> {
        let Some(dm) = self.degree_m() else {
            return Vec::new();
        };
        let mut out = vec![Vec::<Rational>::new(); dm as usize + 1];
        for (&(i, j), c) in &self.terms {
            let v = &mut out[i as usize];
            if v.len() <= j as usize {
                v.resize(j as usize + 1, Rational::zero());
            }
            v[j as usize] = c.clone();
        }
        out.into_iter().map(UPoly::new).collect()
    }

    /// Coefficients of `b^0, b^1, ...` as polynomials in `m`.
    pub fn b_coeffs_in_m(&self) -> Vec<UPoly> {
        self.swap().m_coeffs_in_b()
    }

    fn swap(&self) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| ((j, i), c.clone()))
                .collect(),
        }
    }

    /// Substitute a rational for `b`, leaving a polynomial in `m`.
    pub fn subst_b(&self, b: &Rational) -> UPoly {
        let coeffs = self.b_coeffs_in_m();
        let mut acc = UPoly::zero();
        for c in coeffs.iter().rev() {
            acc = acc.scale(b) + c.clone();
        }
        acc
    }

    pub fn eval(&self, m: &Rational, b: &Rational) -> Rational {
        self.terms.iter().fold(Rational::zero(), |acc, (&(i, j), c)| {
            acc + c * num_traits::pow(m.clone(), i as usize) * num_traits::pow(b.clone(), j as usize)
        })
    }

    pub fn to_terms(&self) -> Vec<PolyTerm> {
        self.terms
            .iter()
            .map(|(&(m, b), c)| PolyTerm {
                m,
                b,
                coeff: c.clone(),
            })
            .collect()
    }

    pub fn from_terms(terms: &[PolyTerm]) -> Poly {
        let mut p = Poly::default();
        for t in terms {
            p.add_term(t.m, t.b, t.coeff.clone());
        }
        p
    }
}

impl Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_terms().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(Poly::from_terms(&Vec::<PolyTerm>::deserialize(d)?))
    }
}

impl Zero for Poly {
    fn zero() -> Self {
        Poly::default()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for Poly {
    fn one() -> Self {
        Poly::constant(Rational::one())
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        for ((i, j), c) in rhs.terms {
            self.add_term(i, j, c);
        }
        self
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, rhs: Poly) -> Poly {
        self + (-rhs)
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(mut self) -> Poly {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        let mut out = Poly::default();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &rhs.terms {
                out.add_term(i1 + i2, j1 + j2, c1 * c2);
            }
        }
        out
    }
}

impl Ring for Poly {
    fn from_rational(r: Rational) -> Self {
        Poly::constant(r)
    }

    fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(k, c)| (*k, c * r)).collect(),
        }
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(i, j), c) in self.terms.iter().rev() {
            let (neg, mag) = (c < &Rational::zero(), c.abs());
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            let mut vars = Vec::new();
            match i {
                0 => {}
                1 => vars.push("m".to_string()),
                _ => vars.push(format!("m^{i}")),
            }
            match j {
                0 => {}
                1 => vars.push("b".to_string()),
                _ => vars.push(format!("b^{j}")),
            }
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{frac, rat};

    fn sample() -> Poly {
        // 2b + 1/2 + 3 m^2 b
        Poly::b().scale(&rat(2))
            + Poly::constant(frac(1, 2))
            + Poly::m() * Poly::m() * Poly::b().scale(&rat(3))
    }

    #[test]
    fn coefficient_views() {
        let p = sample();
        assert_eq!(p.degree_m(), Some(2));
        assert_eq!(p.degree_b(), Some(1));
        let by_m = p.m_coeffs_in_b();
        assert_eq!(by_m.len(), 3);
        assert_eq!(by_m[0], UPoly::new(vec![frac(1, 2), rat(2)]));
        assert!(by_m[1].is_zero());
        assert_eq!(by_m[2], UPoly::from_ints(&[0, 3]));
        let by_b = p.b_coeffs_in_m();
        assert_eq!(by_b[0], UPoly::constant(frac(1, 2)));
        assert_eq!(by_b[1], UPoly::from_ints(&[2, 0, 3]));
    }

    #[test]
    fn substitution_matches_eval() {
        let p = sample();
        let q = p.subst_b(&frac(-1, 3));
        for m in -3..4 {
            assert_eq!(q.eval(&rat(m)), p.eval(&rat(m), &frac(-1, 3)));
        }
    }

    #[test]
    fn cancellation_removes_terms() {
        let p = sample();
        assert!((p.clone() - p).is_zero());
    }

    #[test]
    fn json_round_trip() {
        let p = sample();
        let s = serde_json::to_string(&p).unwrap();
        assert!(s.contains("\"coeff\":\"1/2\""));
        let back: Poly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
