//! Rational functions in the real variable `s` whose denominators are
//! products of integer linear factors, the shape taken by topological zeta
//! functions: sums of `euler / prod (A_j s + B_j)` over cone pieces.

use num::rational::BigRational;
use num::{BigInt, One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

use super::qpoly::QPoly;

/// Canonical form `scalar * num(s) / prod (a_i s + b_i)^{m_i}` with
///
/// * every `(a_i, b_i)` primitive and `a_i > 0`,
/// * `num` a primitive integer polynomial with positive leading coefficient,
/// * no factor dividing `num` (fully cancelled),
/// * `scalar` carrying the sign and the rational scale.
///
/// Equality of values is structural equality of the canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunctionS {
    scalar: BigRational,
    num: QPoly,
    den: BTreeMap<(i64, i64), u32>,
}

impl RationalFunctionS {
    pub fn zero() -> Self {
        Self {
            scalar: BigRational::one(),
            num: QPoly::zero(),
            den: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn from_int(n: i64) -> Self {
        Self::new(QPoly::from_int(n), &[])
    }

    /// `num(s) / prod (a s + b)` over the listed factors (repeats allowed).
    /// Factors with `a = 0` are constants and fold into the scalar; `(0, 0)`
    /// panics, as the value would be undefined.
    pub fn new(num: QPoly, factors: &[(i64, i64)]) -> Self {
        let mut scalar = BigRational::one();
        let mut den: BTreeMap<(i64, i64), u32> = BTreeMap::new();
        for &(a, b) in factors {
            if a == 0 {
                assert!(b != 0, "zero linear factor in denominator");
                scalar /= BigRational::from(BigInt::from(b));
                continue;
            }
            let g = num::integer::gcd(a.abs(), b.abs()).max(1) * a.signum();
            scalar /= BigRational::from(BigInt::from(g));
            *den.entry((a / g, b / g)).or_insert(0) += 1;
        }
        Self { scalar, num, den }.normalized()
    }

    /// The topological contribution of one cone piece:
    /// `euler / prod (A_j s + B_j)`.
    pub fn piece_term(euler: &BigRational, factors: &[(i64, i64)]) -> Self {
        Self::new(QPoly::one(), factors).scaled(euler)
    }

    fn normalized(mut self) -> Self {
        if self.num.is_zero() {
            return Self::zero();
        }
        // cancel linear factors that divide the numerator
        let keys: Vec<(i64, i64)> = self.den.keys().copied().collect();
        for (a, b) in keys {
            let root = BigRational::new(BigInt::from(-b), BigInt::from(a));
            let lin = QPoly::linear(a, b);
            while self.den.get(&(a, b)).copied().unwrap_or(0) > 0 && self.num.eval(&root).is_zero()
            {
                let (q, r) = self.num.div_rem(&lin);
                debug_assert!(r.is_zero());
                self.num = q;
                let m = self.den.get_mut(&(a, b)).unwrap();
                *m -= 1;
                if *m == 0 {
                    self.den.remove(&(a, b));
                }
            }
        }
        // pull content and sign out of the numerator
        let mut content = self.num.content();
        if self.num.leading().is_some_and(Signed::is_negative) {
            content = -content;
        }
        self.num = self.num.scale(&content.clone().recip());
        self.scalar *= content;
        self
    }

    pub fn scaled(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut out = self.clone();
        out.scalar *= c;
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        // common denominator: per-factor maximum multiplicity
        let mut union: BTreeMap<(i64, i64), u32> = self.den.clone();
        for (k, m) in &rhs.den {
            let e = union.entry(*k).or_insert(0);
            *e = (*e).max(*m);
        }
        let lift = |r: &Self| -> QPoly {
            let mut n = r.num.scale(&r.scalar);
            for (&(a, b), &m) in &union {
                let have = r.den.get(&(a, b)).copied().unwrap_or(0);
                for _ in have..m {
                    n = &n * &QPoly::linear(a, b);
                }
            }
            n
        };
        let num = &lift(self) + &lift(rhs);
        Self {
            scalar: BigRational::one(),
            num,
            den: union,
        }
        .normalized()
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut den = self.den.clone();
        for (k, m) in &rhs.den {
            *den.entry(*k).or_insert(0) += m;
        }
        Self {
            scalar: &self.scalar * &rhs.scalar,
            num: &self.num * &rhs.num,
            den,
        }
        .normalized()
    }

    /// Evaluate at a rational point; `None` at poles.
    pub fn eval(&self, s: &BigRational) -> Option<BigRational> {
        let mut acc = &self.scalar * self.num.eval(s);
        for (&(a, b), &m) in &self.den {
            let v = BigRational::from(BigInt::from(a)) * s + BigRational::from(BigInt::from(b));
            if v.is_zero() {
                return None;
            }
            for _ in 0..m {
                acc /= v.clone();
            }
        }
        Some(acc)
    }
}

fn fmt_linear(a: i64, b: i64) -> String {
    let mut s = String::from("(");
    if a == 1 {
        s.push('s');
    } else {
        s.push_str(&format!("{a}*s"));
    }
    match b.cmp(&0) {
        std::cmp::Ordering::Greater => s.push_str(&format!(" + {b}")),
        std::cmp::Ordering::Less => s.push_str(&format!(" - {}", -b)),
        std::cmp::Ordering::Equal => {}
    }
    s.push(')');
    s
}

impl fmt::Display for RationalFunctionS {
    /// Canonical text: `[-]p*(num) / (q * (s + b)^m * ...)` with the
    /// positive integers `p, q` from the scalar and factors in sorted order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if self.scalar.is_negative() {
            write!(f, "-")?;
        }
        let p = self.scalar.numer().abs();
        let q = self.scalar.denom().clone();
        // numerator
        match (self.num.is_one(), p.is_one()) {
            (true, _) => write!(f, "{p}")?,
            (false, true) => write!(f, "({})", self.num.display("s"))?,
            (false, false) => write!(f, "{p}*({})", self.num.display("s"))?,
        }
        if self.den.is_empty() && q.is_one() {
            return Ok(());
        }
        let mut items = Vec::new();
        if !q.is_one() {
            items.push(q.to_string());
        }
        for (&(a, b), &m) in &self.den {
            let factor = fmt_linear(a, b);
            items.push(if m > 1 {
                format!("{factor}^{m}")
            } else {
                factor
            });
        }
        if items.len() == 1 {
            write!(f, " / {}", items[0])
        } else {
            write!(f, " / ({})", items.join(" * "))
        }
    }
}
