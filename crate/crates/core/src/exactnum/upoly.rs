use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{rat, Rational, Ring, Sign};

/// Dense univariate polynomial over the rationals, coefficients stored
/// lowest degree first with no trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UPoly {
    coeffs: Vec<Rational>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| rat(x)).collect())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    /// `x - r`.
    pub fn linear_root(r: &Rational) -> Self {
        Self::new(vec![-r.clone(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn sign_at(&self, x: &Rational) -> Sign {
        Sign::of(&self.eval(x))
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * rat(k as i64))
                .collect(),
        )
    }

    pub fn scale(&self, r: &Rational) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|c| c * r).collect())
    }

    pub fn monic(&self) -> UPoly {
        match self.leading() {
            Some(lc) => self.scale(&lc.recip()),
            None => UPoly::zero(),
        }
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &UPoly) -> (UPoly, UPoly) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lc = divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return (UPoly::zero(), UPoly::zero());
        };
        if nd < dd {
            return (UPoly::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = &rem[k + dd] / &lc;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * dc;
            }
            quot[k] = c;
        }
        (UPoly::new(quot), UPoly::new(rem))
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Yun's square-free decomposition: `self = c * prod f_i^i` with each
    /// `f_i` monic, square-free and pairwise coprime. Returns `(f_i, i)` for
    /// nonconstant factors.
    pub fn square_free_decomposition(&self) -> Vec<(UPoly, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_rem(&a0).0;
        let mut c = df.div_rem(&a0).0;
        let mut d = c - b.derivative();
        let mut i = 1;
        loop {
            let a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            b = b.div_rem(&a).0;
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            c = d.div_rem(&a).0;
            d = c - b.derivative();
            i += 1;
        }
        out
    }

    pub fn square_free_part(&self) -> UPoly {
        if self.is_constant() {
            return self.clone();
        }
        self.div_rem(&self.gcd(&self.derivative())).0.monic()
    }

    /// `p(x + c)`.
    pub fn shift(&self, c: &Rational) -> UPoly {
        let lin = UPoly::new(vec![c.clone(), Rational::one()]);
        let mut acc = UPoly::zero();
        for coeff in self.coeffs.iter().rev() {
            acc = acc * lin.clone() + UPoly::constant(coeff.clone());
        }
        acc
    }

    /// Integer coefficients with content removed and positive leading term.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        if self.is_zero() {
            return Vec::new();
        }
        let lcm = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        let sign = if ints.last().unwrap().is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        ints.into_iter().map(|c| c / &g * &sign).collect()
    }

    /// Strict upper bound on the absolute value of every real root
    /// (`1 + max |a_i / a_n|`). For constants returns 1.
    pub fn cauchy_bound(&self) -> Rational {
        let Some(lc) = self.leading() else {
            return Rational::one();
        };
        let max = self.coeffs[..self.coeffs.len() - 1]
            .iter()
            .map(|c| (c / lc).abs())
            .max()
            .unwrap_or_else(Rational::zero);
        max + Rational::one()
    }

    /// Number of sign variations of the coefficients of
    /// `(1+x)^n p((lo + hi x)/(1+x))`; an upper bound on the number of roots
    /// in the open interval `(lo, hi)` with the same parity, exact when 0 or 1.
    pub fn descartes_count(&self, lo: &Rational, hi: &Rational) -> usize {
        let Some(n) = self.degree() else {
            return 0;
        };
        let num = UPoly::new(vec![lo.clone(), hi.clone()]);
        let den = UPoly::new(vec![Rational::one(), Rational::one()]);
        let mut num_pows = vec![UPoly::constant(Rational::one())];
        let mut den_pows = vec![UPoly::constant(Rational::one())];
        for k in 1..=n {
            num_pows.push(num_pows[k - 1].clone() * num.clone());
            den_pows.push(den_pows[k - 1].clone() * den.clone());
        }
        let mut q = UPoly::zero();
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            q = q + (num_pows[i].clone() * den_pows[n - i].clone()).scale(a);
        }
        sign_variations(q.coeffs())
    }

    /// Distinct real roots in the half-open interval `(lo, hi]`, via a Sturm
    /// sequence of the square-free part.
    pub fn sturm_count(&self, lo: &Rational, hi: &Rational) -> usize {
        if self.is_constant() {
            return 0;
        }
        let seq = self.square_free_part().sturm_sequence();
        let v = |x: &Rational| {
            let signs: Vec<Rational> = seq.iter().map(|p| p.eval(x)).collect();
            sign_variations(&signs)
        };
        v(lo).saturating_sub(v(hi))
    }

    fn sturm_sequence(&self) -> Vec<UPoly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let n = seq.len();
            let r = seq[n - 2].div_rem(&seq[n - 1]).1;
            if r.is_zero() {
                break;
            }
            seq.push(-r);
        }
        seq
    }
}

fn sign_variations(c: &[Rational]) -> usize {
    let mut last = Sign::Zero;
    let mut count = 0;
    for x in c {
        let s = Sign::of(x);
        if s == Sign::Zero {
            continue;
        }
        if last != Sign::Zero && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

impl Zero for UPoly {
    fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for UPoly {
    fn one() -> Self {
        UPoly::constant(Rational::one())
    }
}

impl Add for UPoly {
    type Output = UPoly;
    fn add(self, rhs: UPoly) -> UPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for UPoly {
    type Output = UPoly;
    fn sub(self, rhs: UPoly) -> UPoly {
        self + (-rhs)
    }
}

impl Neg for UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for UPoly {
    type Output = UPoly;
    fn mul(self, rhs: UPoly) -> UPoly {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out)
    }
}

impl Ring for UPoly {
    fn from_rational(r: Rational) -> Self {
        UPoly::constant(r)
    }
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (neg, mag) = (c.is_negative(), c.abs());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if k == 1 {
                        write!(f, "x")?;
                    } else {
                        write!(f, "x^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::frac;

    #[test]
    fn division_and_gcd() {
        // (x-1)(x+2) and (x-1)(x-3)
        let a = UPoly::from_ints(&[-2, 1, 1]);
        let b = UPoly::from_ints(&[3, -4, 1]);
        assert_eq!(a.gcd(&b), UPoly::from_ints(&[-1, 1]));
        let (q, r) = a.div_rem(&UPoly::from_ints(&[-1, 1]));
        assert_eq!(q, UPoly::from_ints(&[2, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn yun_decomposition() {
        // (x-1)^2 (x+1)
        let p = UPoly::from_ints(&[1, -1, -1, 1]);
        let parts = p.square_free_decomposition();
        assert_eq!(
            parts,
            vec![
                (UPoly::from_ints(&[1, 1]), 1),
                (UPoly::from_ints(&[-1, 1]), 2)
            ]
        );
        assert_eq!(p.square_free_part(), UPoly::from_ints(&[-1, 0, 1]));
    }

    #[test]
    fn shift_composes() {
        let p = UPoly::from_ints(&[0, 0, 1]);
        assert_eq!(p.shift(&rat(1)), UPoly::from_ints(&[1, 2, 1]));
    }

    #[test]
    fn root_counts() {
        // (x-1)(x+2): roots -2, 1
        let p = UPoly::from_ints(&[-2, 1, 1]);
        assert_eq!(p.descartes_count(&rat(0), &rat(3)), 1);
        assert_eq!(p.descartes_count(&rat(2), &rat(3)), 0);
        assert_eq!(p.sturm_count(&rat(-5), &rat(5)), 2);
        assert_eq!(p.sturm_count(&rat(-2), &rat(0)), 0);
        assert!(p.cauchy_bound() > rat(2));
    }

    #[test]
    fn primitive_integer_clears_denominators() {
        let p = UPoly::new(vec![frac(-1, 2), frac(-3, 4)]);
        assert_eq!(p.primitive_integer(), vec![BigInt::from(2), BigInt::from(3)]);
    }
}
