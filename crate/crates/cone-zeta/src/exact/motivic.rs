//! Sums of products of geometric-series factors with Laurent-polynomial
//! coefficients: the closed form in which cone integrals are assembled.
//!
//! A term is
//!
//! ```text
//! coeff * prod (T^A * L^-B)^m  *  prod [S]^m  *  prod (T^A L^-B / (1 - T^A L^-B))^m
//! ```
//!
//! with `coeff` a Laurent polynomial in `L`, `[S]` opaque named classes, and
//! the final product running over "fraction" factors keyed by the exponent
//! pair `(A, B)`.  The variable `T` abbreviates `L^-s`, so a fraction key
//! `(A, B)` stands for `L^-(As + B) / (1 - L^-(As + B))`.
//!
//! The representation is closed under sum, product and the substitution
//! `s -> s - c` (which maps keys `(A, B) -> (A, B - A*c)`), and supports
//! exact equality testing by clearing denominators, power-series expansion
//! in `T`, and specialization of `L` to a number.

use num::rational::BigRational;
use num::{BigInt, One, Zero};
use std::collections::BTreeMap;
use std::fmt;

use super::laurent::{rational_pow, LaurentPoly};
use super::qpoly::{QPoly, RationalFunctionT};
use crate::{Error, Result};

type FactorMap = BTreeMap<(i64, i64), u32>;
type SymbolMap = BTreeMap<String, u32>;

/// One product term.  Construct with the `with_*` builders and combine into
/// a [`MotivicRational`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MotivicTerm {
    coeff: LaurentPoly,
    plain: FactorMap,
    fractions: FactorMap,
    symbols: SymbolMap,
}

impl MotivicTerm {
    pub fn new() -> Self {
        Self {
            coeff: LaurentPoly::one(),
            plain: BTreeMap::new(),
            fractions: BTreeMap::new(),
            symbols: BTreeMap::new(),
        }
    }

    pub fn from_coeff(coeff: LaurentPoly) -> Self {
        Self {
            coeff,
            ..Self::new()
        }
    }

    pub fn with_coeff(mut self, coeff: LaurentPoly) -> Self {
        self.coeff = &self.coeff * &coeff;
        self
    }

    /// Multiply by `(T^a L^-b)^m`.
    pub fn with_plain(mut self, a: i64, b: i64, m: u32) -> Self {
        if m > 0 && !(a == 0 && b == 0) {
            *self.plain.entry((a, b)).or_insert(0) += m;
        }
        self
    }

    /// Multiply by `(T^a L^-b / (1 - T^a L^-b))^m`.
    pub fn with_fraction(mut self, a: i64, b: i64, m: u32) -> Self {
        assert!(
            !(a == 0 && b == 0),
            "fraction factor (0, 0) is the ill-defined 1/(1-1)"
        );
        if m > 0 {
            *self.fractions.entry((a, b)).or_insert(0) += m;
        }
        self
    }

    /// Multiply by the named class `[name]^m`.
    pub fn with_symbol(mut self, name: &str, m: u32) -> Self {
        if m > 0 {
            *self.symbols.entry(name.to_string()).or_insert(0) += m;
        }
        self
    }

    pub fn coeff(&self) -> &LaurentPoly {
        &self.coeff
    }

    pub fn plain(&self) -> &FactorMap {
        &self.plain
    }

    pub fn fractions(&self) -> &FactorMap {
        &self.fractions
    }

    pub fn symbols(&self) -> &SymbolMap {
        &self.symbols
    }

    /// Total multiplicity of fraction factors, the order of the pole at
    /// `L = 1` contributed by the denominators.
    pub fn fraction_count(&self) -> u32 {
        self.fractions.values().sum()
    }

    fn shape(&self) -> (&FactorMap, &FactorMap, &SymbolMap) {
        (&self.plain, &self.fractions, &self.symbols)
    }

    fn mul(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        out.coeff = &out.coeff * &rhs.coeff;
        for (k, m) in &rhs.plain {
            *out.plain.entry(*k).or_insert(0) += m;
        }
        for (k, m) in &rhs.fractions {
            *out.fractions.entry(*k).or_insert(0) += m;
        }
        for (k, m) in &rhs.symbols {
            *out.symbols.entry(k.clone()).or_insert(0) += m;
        }
        out
    }

    fn shift_s(&self, c: i64) -> Self {
        let remap = |map: &FactorMap| -> FactorMap {
            map.iter()
                .map(|(&(a, b), &m)| ((a, b - a * c), m))
                .collect()
        };
        Self {
            coeff: self.coeff.clone(),
            plain: remap(&self.plain),
            fractions: remap(&self.fractions),
            symbols: self.symbols.clone(),
        }
    }
}

impl Default for MotivicTerm {
    fn default() -> Self {
        Self::new()
    }
}

/// A finite sum of [`MotivicTerm`]s, kept sorted by factor shape with like
/// terms merged and zero terms dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MotivicRational {
    terms: Vec<MotivicTerm>,
}

impl MotivicRational {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_term(MotivicTerm::new())
    }

    pub fn constant(coeff: LaurentPoly) -> Self {
        Self::from_term(MotivicTerm::from_coeff(coeff))
    }

    pub fn from_term(term: MotivicTerm) -> Self {
        Self::from_terms(vec![term])
    }

    pub fn from_terms(terms: Vec<MotivicTerm>) -> Self {
        let mut out = Self { terms };
        out.normalize();
        out
    }

    /// `1 / (1 - T^a L^-b)`, as `1 +` the corresponding fraction factor.
    pub fn geometric_inverse_factor(a: i64, b: i64) -> Self {
        Self::from_terms(vec![
            MotivicTerm::new(),
            MotivicTerm::new().with_fraction(a, b, 1),
        ])
    }

    /// `1 - T^a L^-b`.
    pub fn one_minus_monomial(a: i64, b: i64) -> Self {
        Self::from_terms(vec![
            MotivicTerm::new(),
            MotivicTerm::from_coeff(-LaurentPoly::one()).with_plain(a, b, 1),
        ])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[MotivicTerm] {
        &self.terms
    }

    fn normalize(&mut self) {
        self.terms.sort_by(|x, y| x.shape().cmp(&y.shape()));
        let mut merged: Vec<MotivicTerm> = Vec::with_capacity(self.terms.len());
        for term in self.terms.drain(..) {
            match merged.last_mut() {
                Some(last) if last.shape() == term.shape() => {
                    last.coeff = &last.coeff + &term.coeff;
                }
                _ => merged.push(term),
            }
        }
        merged.retain(|t| !t.coeff.is_zero());
        self.terms = merged;
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(rhs.terms.iter().cloned());
        Self::from_terms(terms)
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| {
                    let mut t = t.clone();
                    t.coeff = -&t.coeff;
                    t
                })
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for a in &self.terms {
            for b in &rhs.terms {
                terms.push(a.mul(b));
            }
        }
        Self::from_terms(terms)
    }

    pub fn scale(&self, c: &LaurentPoly) -> Self {
        self.mul(&Self::constant(c.clone()))
    }

    /// Substitute `s -> s - c`, i.e. remap every factor key
    /// `(A, B) -> (A, B - A*c)`.
    pub fn shift_s(&self, c: i64) -> Self {
        Self::from_terms(self.terms.iter().map(|t| t.shift_s(c)).collect())
    }

    /// Divide every term coefficient exactly by `d`; `None` if any term
    /// coefficient is not divisible.
    pub fn div_coeff_exact(&self, d: &LaurentPoly) -> Option<Self> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let mut t = t.clone();
            t.coeff = t.coeff.div_exact(d)?;
            terms.push(t);
        }
        Some(Self { terms })
    }

    /// Replace named classes by Laurent-polynomial values.
    pub fn substitute_symbols(&self, values: &BTreeMap<String, LaurentPoly>) -> Result<Self> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let mut out = t.clone();
            out.symbols = BTreeMap::new();
            for (name, &m) in &t.symbols {
                let v = values
                    .get(name)
                    .ok_or_else(|| Error::UnvaluedSymbol(name.clone()))?;
                out.coeff = &out.coeff * &v.pow(m);
            }
            terms.push(out);
        }
        Ok(Self::from_terms(terms))
    }

    /// Exact equality as rational functions, decided by clearing every
    /// fraction denominator of both sides and comparing the expansions.
    pub fn equivalent(&self, rhs: &Self) -> bool {
        let mut denom: FactorMap = BTreeMap::new();
        for t in self.terms.iter().chain(&rhs.terms) {
            for (k, m) in &t.fractions {
                let e = denom.entry(*k).or_insert(0);
                *e = (*e).max(*m);
            }
        }
        self.cleared(&denom) == rhs.cleared(&denom)
    }

    /// Expansion of `self * prod_(A,B) (1 - T^A L^-B)^denom[(A,B)]` as a map
    /// from `(T-exponent, symbol multiset)` to the Laurent coefficient in `L`.
    fn cleared(&self, denom: &FactorMap) -> BTreeMap<(i64, SymbolMap), LaurentPoly> {
        let mut out: BTreeMap<(i64, SymbolMap), LaurentPoly> = BTreeMap::new();
        for term in &self.terms {
            // running expansion of this term: (T-exponent, coefficient) pairs
            let mut entries: Vec<(i64, LaurentPoly)> = vec![(0, term.coeff.clone())];
            let bump = |entries: &mut Vec<(i64, LaurentPoly)>, a: i64, b: i64, m: i64| {
                for (t_exp, coeff) in entries.iter_mut() {
                    *t_exp += a * m;
                    *coeff = coeff.mul_monomial(-b * m, &BigRational::one());
                }
            };
            for (&(a, b), &m) in &term.plain {
                bump(&mut entries, a, b, i64::from(m));
            }
            for (&(a, b), &cap) in denom {
                let have = term.fractions.get(&(a, b)).copied().unwrap_or(0);
                debug_assert!(have <= cap);
                // x^have * (1 - x)^(cap - have) with x = T^a L^-b
                bump(&mut entries, a, b, i64::from(have));
                let row = pascal_row(cap - have);
                let mut next = Vec::with_capacity(entries.len() * row.len());
                for (k, binom) in row.iter().enumerate() {
                    let mut c = BigRational::from(binom.clone());
                    if k % 2 == 1 {
                        c = -c;
                    }
                    for (t_exp, coeff) in &entries {
                        next.push((t_exp + a * k as i64, coeff.mul_monomial(-b * k as i64, &c)));
                    }
                }
                entries = next;
            }
            for (t_exp, coeff) in entries {
                let slot = out
                    .entry((t_exp, term.symbols.clone()))
                    .or_insert_with(LaurentPoly::zero);
                *slot = &*slot + &coeff;
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Coefficients of `T^0 .. T^order` as Laurent polynomials in `L`.
    ///
    /// Every fraction factor must have `A >= 1`: a key `(0, B)` is constant
    /// in `T` but not a Laurent polynomial in `L`, so the expansion cannot
    /// be represented.  Named classes must have been substituted away.
    pub fn series(&self, order: usize) -> Result<Vec<LaurentPoly>> {
        let mut acc = vec![LaurentPoly::zero(); order + 1];
        for term in &self.terms {
            if let Some(name) = term.symbols.keys().next() {
                return Err(Error::UnvaluedSymbol(name.clone()));
            }
            let mut t_shift: i64 = 0;
            let mut lead = term.coeff.clone();
            for (&(a, b), &m) in &term.plain {
                if a < 0 {
                    return Err(Error::InvalidInput(format!(
                        "negative T-exponent {a} in series expansion"
                    )));
                }
                t_shift += a * i64::from(m);
                lead = lead.mul_monomial(-b * i64::from(m), &BigRational::one());
            }
            if t_shift > order as i64 {
                continue;
            }
            let mut partial = vec![LaurentPoly::zero(); order + 1];
            partial[t_shift as usize] = lead;
            for (&(a, b), &m) in &term.fractions {
                if a < 1 {
                    return Err(Error::ConstantFraction(format!(
                        "fraction factor with T-exponent {a} (key ({a}, {b})) \
                         has no power series in T"
                    )));
                }
                let factor = fraction_series(a, b, m, order);
                partial = convolve(&partial, &factor, order);
            }
            for (s, p) in acc.iter_mut().zip(partial) {
                *s = &*s + &p;
            }
        }
        Ok(acc)
    }

    /// Specialize `L` to the rational number `p`, producing a rational
    /// function of `T`.  `values` gives the named classes.
    ///
    /// All terms are brought over one common denominator, the union of their
    /// fraction factors at maximal multiplicity, so only a single reduction
    /// runs at the end instead of one per term.
    pub fn specialize(
        &self,
        p: &BigRational,
        values: &BTreeMap<String, LaurentPoly>,
    ) -> Result<RationalFunctionT> {
        let mut caps: FactorMap = BTreeMap::new();
        for term in &self.terms {
            for (&(a, b), &m) in &term.fractions {
                if a != 0 {
                    let e = caps.entry((a, b)).or_insert(0);
                    *e = (*e).max(m);
                }
            }
        }
        let push_t = |t_exp: &mut usize, a: i64, m: u32| -> Result<()> {
            if a < 0 {
                return Err(Error::InvalidInput(format!(
                    "negative T-exponent {a} in specialization"
                )));
            }
            *t_exp += (a as usize) * m as usize;
            Ok(())
        };
        let mut num_acc = QPoly::zero();
        for term in &self.terms {
            let mut scalar = term.coeff.eval(p)?;
            for (name, &m) in &term.symbols {
                let v = values
                    .get(name)
                    .ok_or_else(|| Error::UnvaluedSymbol(name.clone()))?;
                scalar *= rational_pow(&v.eval(p)?, i64::from(m))?;
            }
            let mut t_exp: usize = 0;
            for (&(a, b), &m) in &term.plain {
                push_t(&mut t_exp, a, m)?;
                scalar *= rational_pow(p, -b * i64::from(m))?;
            }
            for (&(a, b), &m) in &term.fractions {
                let x0 = rational_pow(p, -b)?;
                if a == 0 {
                    let d = BigRational::one() - &x0;
                    if d.is_zero() {
                        return Err(Error::DivisionByZero(format!(
                            "fraction factor (0, {b}) specializes to 1/(1-1)"
                        )));
                    }
                    scalar *= rational_pow(&(x0 / d), i64::from(m))?;
                    continue;
                }
                push_t(&mut t_exp, a, m)?;
                scalar *= rational_pow(&x0, i64::from(m))?;
            }
            if scalar.is_zero() {
                continue;
            }
            let mut num = QPoly::monomial(t_exp, scalar);
            for (&(a, b), &cap) in &caps {
                let have = term.fractions.get(&(a, b)).copied().unwrap_or(0);
                if have < cap {
                    let f = one_minus_x_t(&rational_pow(p, -b)?, a as usize);
                    for _ in have..cap {
                        num = &num * &f;
                    }
                }
            }
            num_acc = &num_acc + &num;
        }
        // peel off whole denominator factors first; the final constructor
        // only has to reduce whatever shared irreducibles remain
        let mut den = QPoly::one();
        for (&(a, b), &cap) in &caps {
            let f = one_minus_x_t(&rational_pow(p, -b)?, a as usize);
            for _ in 0..cap {
                if !num_acc.is_zero() {
                    let (q, r) = num_acc.div_rem(&f);
                    if r.is_zero() {
                        num_acc = q;
                        continue;
                    }
                }
                den = &den * &f;
            }
        }
        RationalFunctionT::new(num_acc, den)
    }

    /// Evaluate at concrete rational `L = l`, `T = t`.
    pub fn eval_numeric(
        &self,
        l: &BigRational,
        t: &BigRational,
        values: &BTreeMap<String, LaurentPoly>,
    ) -> Result<BigRational> {
        let mut total = BigRational::zero();
        for term in &self.terms {
            let mut v = term.coeff.eval(l)?;
            for (name, &m) in &term.symbols {
                let s = values
                    .get(name)
                    .ok_or_else(|| Error::UnvaluedSymbol(name.clone()))?;
                v *= rational_pow(&s.eval(l)?, i64::from(m))?;
            }
            for (&(a, b), &m) in &term.plain {
                v *= rational_pow(&(rational_pow(t, a)? * rational_pow(l, -b)?), i64::from(m))?;
            }
            for (&(a, b), &m) in &term.fractions {
                let x = rational_pow(t, a)? * rational_pow(l, -b)?;
                let d = BigRational::one() - &x;
                if d.is_zero() {
                    return Err(Error::DivisionByZero(format!(
                        "fraction factor ({a}, {b}) has vanishing denominator at the \
                         evaluation point"
                    )));
                }
                v *= rational_pow(&(x / d), i64::from(m))?;
            }
            total += v;
        }
        Ok(total)
    }
}

/// Row `n` of Pascal's triangle: `C(n, 0) .. C(n, n)`.
fn pascal_row(n: u32) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for k in 0..n {
        let next = row.last().unwrap() * BigInt::from(n - k) / BigInt::from(k + 1);
        row.push(next);
    }
    row
}

/// `1 - x0 * T^a` as a polynomial in `T`.
fn one_minus_x_t(x0: &BigRational, a: usize) -> QPoly {
    let mut coeffs = vec![BigRational::zero(); a + 1];
    coeffs[0] = BigRational::one();
    coeffs[a] = -x0.clone();
    QPoly::from_coeffs(coeffs)
}

/// Series of `(T^a L^-b / (1 - T^a L^-b))^m` up to `T^order`:
/// `sum_{k >= m} C(k-1, m-1) T^(a k) L^(-b k)`.
fn fraction_series(a: i64, b: i64, m: u32, order: usize) -> Vec<LaurentPoly> {
    let mut out = vec![LaurentPoly::zero(); order + 1];
    let mut binom = BigInt::one(); // C(k-1, m-1) at k = m
    let mut k = i64::from(m);
    while a * k <= order as i64 {
        out[(a * k) as usize] = LaurentPoly::monomial(-b * k, BigRational::from(binom.clone()));
        // C(k, m-1) = C(k-1, m-1) * k / (k - m + 1)
        binom = binom * BigInt::from(k) / BigInt::from(k - i64::from(m) + 1);
        k += 1;
    }
    out
}

fn convolve(a: &[LaurentPoly], b: &[LaurentPoly], order: usize) -> Vec<LaurentPoly> {
    let mut out = vec![LaurentPoly::zero(); order + 1];
    for (i, ai) in a.iter().enumerate().take(order + 1) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(order + 1 - i) {
            if bj.is_zero() {
                continue;
            }
            out[i + j] = &out[i + j] + &(ai * bj);
        }
    }
    out
}

fn monomial_str(a: i64, b: i64) -> String {
    let mut parts = Vec::new();
    match a {
        0 => {}
        1 => parts.push("T".to_string()),
        _ => parts.push(format!("T^{a}")),
    }
    match -b {
        0 => {}
        1 => parts.push("L".to_string()),
        e => parts.push(format!("L^{e}")),
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

impl fmt::Display for MotivicTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut factors: Vec<String> = Vec::new();
        let coeff_str = self.coeff.to_string();
        let has_factors =
            !self.plain.is_empty() || !self.fractions.is_empty() || !self.symbols.is_empty();
        if !self.coeff.is_one() || !has_factors {
            if coeff_str.contains(" + ") || coeff_str.contains(" - ") {
                factors.push(format!("({coeff_str})"));
            } else {
                factors.push(coeff_str);
            }
        }
        for (&(a, b), &m) in &self.plain {
            let base = monomial_str(a, b);
            factors.push(if m == 1 {
                base
            } else {
                format!("({base})^{m}")
            });
        }
        for (name, &m) in &self.symbols {
            factors.push(if m == 1 {
                format!("[{name}]")
            } else {
                format!("[{name}]^{m}")
            });
        }
        for (&(a, b), &m) in &self.fractions {
            let x = monomial_str(a, b);
            let base = format!("[{x}/(1 - {x})]");
            factors.push(if m == 1 { base } else { format!("{base}^{m}") });
        }
        write!(f, "{}", factors.join(" * "))
    }
}

impl fmt::Display for MotivicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|t| t.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Exact equality of two factored expressions as rational functions.
pub fn mr_equal(a: &MotivicRational, b: &MotivicRational) -> bool {
    a.equivalent(b)
}

/// Power-series coefficients of `T^0 .. T^order`, exact in `L`.
pub fn mr_series(r: &MotivicRational, order: usize) -> Result<Vec<LaurentPoly>> {
    r.series(order)
}

/// Specialize `L` to a number, yielding a reduced rational function of `T`.
pub fn mr_specialize(
    r: &MotivicRational,
    p: &BigRational,
    values: &BTreeMap<String, LaurentPoly>,
) -> Result<RationalFunctionT> {
    r.specialize(p, values)
}
