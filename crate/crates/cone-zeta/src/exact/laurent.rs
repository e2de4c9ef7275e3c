//! Laurent polynomials in `L` with rational coefficients.

use num::rational::BigRational;
use num::{BigInt, One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub};
use std::str::FromStr;

use crate::{Error, Result};

/// A Laurent polynomial `sum c_e L^e` with `c_e` rational and `e` any integer.
///
/// Invariant: the term map never stores a zero coefficient, so the zero
/// polynomial is the empty map and structural equality is semantic equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigRational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, BigRational::one())
    }

    /// The symbol `L` itself.
    pub fn lefschetz() -> Self {
        Self::monomial(1, BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::monomial(0, c)
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(BigRational::from(BigInt::from(n)))
    }

    pub fn monomial(exp: i64, coeff: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        Self { terms }
    }

    /// `1 - L^-k`, the factor contributed by one coordinate of the
    /// triangular measure normalization.
    pub fn one_minus_l_inv(k: i64) -> Self {
        Self::one() - Self::monomial(-k, BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, exp: i64) -> BigRational {
        self.terms
            .get(&exp)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Largest exponent present, `None` for the zero polynomial.
    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    fn add_term(&mut self, exp: i64, coeff: &BigRational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(BigRational::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    /// Multiply by the monomial `c L^e` in place.
    pub fn mul_monomial(&self, exp: i64, coeff: &BigRational) -> Self {
        if coeff.is_zero() {
            return Self::zero();
        }
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e + exp, c * coeff))
            .collect();
        Self { terms }
    }

    pub fn pow(&self, mut n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Evaluate at `L = p`. Negative exponents require `p != 0`.
    pub fn eval(&self, p: &BigRational) -> Result<BigRational> {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            acc += c * rational_pow(p, *e)?;
        }
        Ok(acc)
    }

    /// Evaluate at `L = 1`; total coefficient sum. This is the Euler
    /// characteristic of a class that is polynomial in `L`.
    pub fn eval_at_one(&self) -> BigRational {
        self.terms.values().sum()
    }

    /// Exact division; `None` if `d` is zero or does not divide `self`.
    pub fn div_exact(&self, d: &LaurentPoly) -> Option<LaurentPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(LaurentPoly::zero());
        }
        // Shift both to ordinary polynomials and long-divide from the top.
        let shift_n = self.min_exp().unwrap();
        let shift_d = d.min_exp().unwrap();
        let mut rem = self.mul_monomial(-shift_n, &BigRational::one());
        let den = d.mul_monomial(-shift_d, &BigRational::one());
        let den_deg = den.max_exp().unwrap();
        let den_lead = den.coeff(den_deg);
        let mut quot = LaurentPoly::zero();
        while !rem.is_zero() {
            let rem_deg = rem.max_exp().unwrap();
            if rem_deg < den_deg {
                return None;
            }
            let factor = rem.coeff(rem_deg) / &den_lead;
            let exp = rem_deg - den_deg;
            quot.add_term(exp, &factor);
            rem = rem - den.mul_monomial(exp, &factor);
        }
        Some(quot.mul_monomial(shift_n - shift_d, &BigRational::one()))
    }
}

pub(crate) fn rational_pow(p: &BigRational, e: i64) -> Result<BigRational> {
    if p.is_zero() && e < 0 {
        return Err(Error::DivisionByZero(format!("0^{e}")));
    }
    if e >= 0 {
        Ok(num::pow::pow(p.clone(), e as usize))
    } else {
        Ok(num::pow::pow(p.recip(), (-e) as usize))
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c);
        }
        out
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: LaurentPoly) -> LaurentPoly {
        &self + &rhs
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (e, c) in &rhs.terms {
            self.add_term(*e, c);
        }
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, &-c.clone());
        }
        out
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: LaurentPoly) -> LaurentPoly {
        &self - &rhs
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        let terms = self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect();
        LaurentPoly { terms }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, &(c1 * c2));
            }
        }
        out
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: LaurentPoly) -> LaurentPoly {
        &self * &rhs
    }
}

impl MulAssign<&LaurentPoly> for LaurentPoly {
    fn mul_assign(&mut self, rhs: &LaurentPoly) {
        *self = &*self * rhs;
    }
}

// ---- canonical text form ----

fn fmt_coeff_abs(c: &BigRational) -> String {
    let a = c.abs();
    if a.is_integer() {
        a.numer().to_string()
    } else {
        format!("{}/{}", a.numer(), a.denom())
    }
}

impl fmt::Display for LaurentPoly {
    /// Canonical form: terms by descending exponent, explicit signs,
    /// `L^e` with the caret omitted for `e = 1` and the symbol omitted
    /// for `e = 0`. Examples: `L^3 - 3*L^2 + 3*L - 1`, `1/2*L^-1`, `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
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
            let coeff = fmt_coeff_abs(c);
            match (*e, coeff.as_str()) {
                (0, _) => write!(f, "{coeff}")?,
                (1, "1") => write!(f, "L")?,
                (1, _) => write!(f, "{coeff}*L")?,
                (_, "1") => write!(f, "L^{e}")?,
                _ => write!(f, "{coeff}*L^{e}")?,
            }
        }
        Ok(())
    }
}

impl FromStr for LaurentPoly {
    type Err = Error;

    /// Parse the canonical text form plus the obvious variants
    /// (tight spacing, leading sign, coefficients like `1/2`).
    fn from_str(s: &str) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidInput(format!("Laurent polynomial {s:?}: {msg}"));
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad("empty"));
        }
        let mut out = LaurentPoly::zero();
        let bytes = compact.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let mut sign = BigRational::one();
            if bytes[i] == b'+' {
                i += 1;
            } else if bytes[i] == b'-' {
                sign = -sign;
                i += 1;
            }
            if i >= bytes.len() {
                return Err(bad("dangling sign"));
            }
            // optional rational coefficient
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let coeff = if i > start {
                let numer: BigInt = compact[start..i].parse().map_err(|_| bad("bad integer"))?;
                let mut c = BigRational::from(numer);
                if i < bytes.len() && bytes[i] == b'/' {
                    i += 1;
                    let dstart = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    if i == dstart {
                        return Err(bad("missing denominator"));
                    }
                    let den: BigInt = compact[dstart..i].parse().map_err(|_| bad("bad integer"))?;
                    if den.is_zero() {
                        return Err(bad("zero denominator"));
                    }
                    c /= BigRational::from(den);
                }
                Some(c)
            } else {
                None
            };
            if i < bytes.len() && bytes[i] == b'*' {
                if coeff.is_none() {
                    return Err(bad("stray '*'"));
                }
                i += 1;
            }
            let exp = if i < bytes.len() && bytes[i] == b'L' {
                i += 1;
                if i < bytes.len() && bytes[i] == b'^' {
                    i += 1;
                    let estart = i;
                    if i < bytes.len() && bytes[i] == b'-' {
                        i += 1;
                    }
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    if i == estart || (i == estart + 1 && bytes[estart] == b'-') {
                        return Err(bad("bad exponent"));
                    }
                    compact[estart..i]
                        .parse::<i64>()
                        .map_err(|_| bad("bad exponent"))?
                } else {
                    1
                }
            } else {
                if coeff.is_none() {
                    return Err(bad("expected coefficient or L"));
                }
                0
            };
            let c = coeff.unwrap_or_else(BigRational::one);
            out.add_term(exp, &(sign * c));
        }
        Ok(out)
    }
}
