//! Dense univariate polynomials over `Q` and reduced rational functions in
//! the counting variable `T`.

use num::rational::BigRational;
use num::{BigInt, One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::{Error, Result};

/// Polynomial with rational coefficients, little-endian.
///
/// Invariant: the top coefficient is nonzero; zero is the empty vector.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(BigRational::from(BigInt::from(n)))
    }

    /// `c x^e`.
    pub fn monomial(e: usize, c: BigRational) -> Self {
        let mut v = vec![BigRational::zero(); e + 1];
        v[e] = c;
        Self::from_coeffs(v)
    }

    /// `a x + b`.
    pub fn linear(a: i64, b: i64) -> Self {
        Self::from_coeffs(vec![
            BigRational::from(BigInt::from(b)),
            BigRational::from(BigInt::from(a)),
        ])
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, e: usize) -> BigRational {
        self.coeffs
            .get(e)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Quotient and remainder with `deg rem < deg d`. Panics on `d = 0`.
    pub fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.leading().unwrap().clone();
        let mut rem = self.clone();
        let mut quot = vec![BigRational::zero(); self.coeffs.len().saturating_sub(dd)];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let f = rem.leading().unwrap() / &lead;
            let shift = rd - dd;
            quot[shift] = f.clone();
            let mut new = rem.coeffs.clone();
            for (i, c) in d.coeffs.iter().enumerate() {
                new[i + shift] = &new[i + shift] - c * &f;
            }
            rem = QPoly::from_coeffs(new);
        }
        (QPoly::from_coeffs(quot), rem)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        match a.leading() {
            Some(l) if !l.is_one() => {
                let inv = l.clone().recip();
                a.scale(&inv)
            }
            _ => a,
        }
    }

    /// Rational content: the positive rational `c` with `self = c * (primitive
    /// integer polynomial)`. Zero polynomial has content zero.
    pub fn content(&self) -> BigRational {
        if self.is_zero() {
            return BigRational::zero();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in &self.coeffs {
            num_gcd = num::integer::gcd(num_gcd, c.numer().abs());
            den_lcm = num::integer::lcm(den_lcm, c.denom().clone());
        }
        BigRational::new(num_gcd, den_lcm)
    }

    /// Power-series coefficients of `1 / self` up to `order`, requiring a
    /// unit constant term.
    pub fn series_inverse(&self, order: usize) -> Result<Vec<BigRational>> {
        let c0 = self.coeff(0);
        if c0.is_zero() {
            return Err(Error::DivisionByZero(
                "series inverse of a polynomial with zero constant term".into(),
            ));
        }
        let mut out = vec![BigRational::zero(); order + 1];
        out[0] = c0.clone().recip();
        for n in 1..=order {
            let mut acc = BigRational::zero();
            for k in 1..=n.min(self.coeffs.len().saturating_sub(1)) {
                acc += &self.coeffs[k] * &out[n - k];
            }
            out[n] = -acc / &c0;
        }
        Ok(out)
    }

    fn fmt_var(&self, f: &mut fmt::Formatter<'_>, var: &str) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let a = c.abs();
            let coeff = if a.is_integer() {
                a.numer().to_string()
            } else {
                format!("{}/{}", a.numer(), a.denom())
            };
            match (e, coeff.as_str()) {
                (0, _) => write!(f, "{coeff}")?,
                (1, "1") => write!(f, "{var}")?,
                (1, _) => write!(f, "{coeff}*{var}")?,
                (_, "1") => write!(f, "{var}^{e}")?,
                _ => write!(f, "{coeff}*{var}^{e}")?,
            }
        }
        Ok(())
    }

    /// Render with an arbitrary variable name.
    pub fn display<'a>(&'a self, var: &'a str) -> impl fmt::Display + 'a {
        struct D<'a>(&'a QPoly, &'a str);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.fmt_var(f, self.1)
            }
        }
        D(self, var)
    }
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(self.coeff(i) + rhs.coeff(i));
        }
        QPoly::from_coeffs(v)
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut v = Vec::with_capacity(n);
        for i in 0..n {
            v.push(self.coeff(i) - rhs.coeff(i));
        }
        QPoly::from_coeffs(v)
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut v = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                v[i + j] = &v[i + j] + a * b;
            }
        }
        QPoly::from_coeffs(v)
    }
}

/// A reduced rational function `num / den` in `T` over `Q`.
///
/// Invariants: `gcd(num, den) = 1`; `den` is scaled so its constant term is
/// `1` when nonzero at `T = 0`, and monic otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunctionT {
    num: QPoly,
    den: QPoly,
}

impl RationalFunctionT {
    pub fn new(num: QPoly, den: QPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero(
                "rational function with zero denominator".into(),
            ));
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_one() || num.is_zero() {
            (num, den)
        } else {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        };
        if num.is_zero() {
            return Ok(Self {
                num,
                den: QPoly::one(),
            });
        }
        let c0 = den.coeff(0);
        let scale = if c0.is_zero() {
            den.leading().unwrap().clone().recip()
        } else {
            c0.recip()
        };
        num = num.scale(&scale);
        den = den.scale(&scale);
        Ok(Self { num, den })
    }

    pub fn zero() -> Self {
        Self {
            num: QPoly::zero(),
            den: QPoly::one(),
        }
    }

    pub fn num(&self) -> &QPoly {
        &self.num
    }

    pub fn den(&self) -> &QPoly {
        &self.den
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        let den = &self.den * &rhs.den;
        Self::new(num, den).expect("nonzero denominators stay nonzero")
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self::new(&self.num * &rhs.num, &self.den * &rhs.den)
            .expect("nonzero denominators stay nonzero")
    }

    /// Power-series coefficients in `T` up to `order`; the denominator must
    /// not vanish at `T = 0`.
    pub fn series(&self, order: usize) -> Result<Vec<BigRational>> {
        let inv = self.den.series_inverse(order)?;
        let mut out = vec![BigRational::zero(); order + 1];
        for n in 0..=order {
            let mut acc = BigRational::zero();
            for k in 0..=n {
                let a = self.num.coeff(k);
                if !a.is_zero() {
                    acc += a * &inv[n - k];
                }
            }
            out[n] = acc;
        }
        Ok(out)
    }

    /// Evaluate at `T = t`; `None` exactly at poles.
    pub fn eval(&self, t: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(t);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(t) / d)
    }
}

impl fmt::Display for RationalFunctionT {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num.display("T"));
        }
        // constants need no parentheses in the numerator
        if self.num.degree().unwrap_or(0) == 0 {
            return write!(f, "{} / ({})", self.num.display("T"), self.den.display("T"));
        }
        write!(
            f,
            "({}) / ({})",
            self.num.display("T"),
            self.den.display("T")
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    #[test]
    fn div_rem_and_gcd() {
        // (x^2 - 1) / (x - 1) = x + 1
        let num = QPoly::from_coeffs(vec![q(-1), q(0), q(1)]);
        let den = QPoly::linear(1, -1);
        let (quot, rem) = num.div_rem(&den);
        assert!(rem.is_zero());
        assert_eq!(quot, QPoly::linear(1, 1));
        let g = num.gcd(&den);
        assert_eq!(g, QPoly::linear(1, -1)); // monic
    }

    #[test]
    fn rational_function_reduces() {
        // (1 - T^2) / (1 - T) = 1 + T
        let num = QPoly::from_coeffs(vec![q(1), q(0), q(-1)]);
        let den = QPoly::from_coeffs(vec![q(1), q(-1)]);
        let r = RationalFunctionT::new(num, den).unwrap();
        assert_eq!(r.num(), &QPoly::from_coeffs(vec![q(1), q(1)]));
        assert!(r.den().is_one());
    }

    #[test]
    fn geometric_series() {
        // 1 / ((1 - T)(1 - 2T)): coefficients 1, 3, 7, 15 (sum of 2^k)
        let den = &QPoly::from_coeffs(vec![q(1), q(-1)]) * &QPoly::from_coeffs(vec![q(1), q(-2)]);
        let r = RationalFunctionT::new(QPoly::one(), den).unwrap();
        let s = r.series(3).unwrap();
        assert_eq!(s, vec![q(1), q(3), q(7), q(15)]);
        assert_eq!(r.to_string(), "1 / (2*T^2 - 3*T + 1)");
    }

    #[test]
    fn series_requires_unit_constant_term() {
        let r = RationalFunctionT::new(QPoly::one(), QPoly::linear(1, 0)).unwrap();
        assert!(r.series(2).is_err());
        assert_eq!(
            r.eval(&q(2)).unwrap(),
            BigRational::new(BigInt::from(1), BigInt::from(2))
        );
        assert!(r.eval(&q(0)).is_none());
    }
}
