//! The cone-integral engine: monomial integrand data, identity resolutions,
//! per-edge pole constants, assembly of the geometric sum over the pieces of
//! a cone decomposition, and the normalizations that turn the geometric form
//! into the counting series.
//!
//! Conventions. An exponent vector `e` of length `m` denotes the monomial
//! `prod_j x_j^(e_j)`. A condition pair `(f, g)` denotes the valuation
//! inequality `v(x^f) <= v(x^g)`, which on valuation vectors is the linear
//! inequality `<f, a> <= <g, a>`. The integrand is
//! `|x^f0|^s * |x^g0|`, so a lattice point `a` of the cone contributes
//! `L^(-<1,a>) * L^(-<g0,a>) * T^(<f0,a>)` with `T = L^-s`.

use std::collections::BTreeSet;
use std::fmt;

use num::{BigRational, One, Zero};

use crate::cone::{decompose, ConeSpec, Decomposition, Piece};
use crate::exact::{rational_pow, LaurentPoly, MotivicRational, MotivicTerm};
use crate::{Error, Result};

fn weighted_dot(edge: &[i64], weights: &[u32]) -> i64 {
    let mut acc: i128 = 0;
    for (x, w) in edge.iter().zip(weights) {
        acc += i128::from(*x) * i128::from(*w);
    }
    i64::try_from(acc).expect("edge pairing overflow")
}

fn l_minus_one_pow(k: u32) -> LaurentPoly {
    (&LaurentPoly::monomial(1, BigRational::one()) - &LaurentPoly::one()).pow(k)
}

/// `{1,3}`-style label for a divisor index subset, 1-based, for messages.
pub(crate) fn subset_label(set: &BTreeSet<usize>) -> String {
    let inner: Vec<String> = set.iter().map(|i| (i + 1).to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

/// Monomial integrand and condition data: the machine form of the domain
/// `{a : v(x^f_i) <= v(x^g_i) for all i}` with integrand `|x^f0|^s |x^g0|`.
///
/// Conditions that resisted reduction to monomial pairs may be carried as
/// free-text records in `symbolic_conditions`; they document the input but
/// disable every operation that needs monomial data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeIntegralData {
    variables: Vec<String>,
    f0: Vec<u32>,
    g0: Vec<u32>,
    conditions: Vec<(Vec<u32>, Vec<u32>)>,
    symbolic_conditions: Vec<String>,
}

impl ConeIntegralData {
    pub fn new(
        variables: Vec<String>,
        f0: Vec<u32>,
        g0: Vec<u32>,
        conditions: Vec<(Vec<u32>, Vec<u32>)>,
    ) -> Result<Self> {
        let m = variables.len();
        if m == 0 {
            return Err(Error::InvalidInput(
                "cone integral data needs at least one variable".into(),
            ));
        }
        let mut seen = BTreeSet::new();
        for v in &variables {
            if !seen.insert(v.clone()) {
                return Err(Error::InvalidInput(format!("duplicate variable name {v}")));
            }
        }
        for (what, vec) in [("f0", &f0), ("g0", &g0)] {
            if vec.len() != m {
                return Err(Error::InvalidInput(format!(
                    "{what} has {} exponents for {m} variables",
                    vec.len()
                )));
            }
        }
        for (i, (f, g)) in conditions.iter().enumerate() {
            if f.len() != m || g.len() != m {
                return Err(Error::InvalidInput(format!(
                    "condition {} does not match the variable count {m}",
                    i + 1
                )));
            }
        }
        Ok(Self {
            variables,
            f0,
            g0,
            conditions,
            symbolic_conditions: Vec::new(),
        })
    }

    /// Attach free-text records of conditions that are not monomial pairs.
    pub fn with_symbolic_conditions(mut self, records: Vec<String>) -> Self {
        self.symbolic_conditions = records;
        self
    }

    pub fn num_vars(&self) -> usize {
        self.variables.len()
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn f0(&self) -> &[u32] {
        &self.f0
    }

    pub fn g0(&self) -> &[u32] {
        &self.g0
    }

    pub fn conditions(&self) -> &[(Vec<u32>, Vec<u32>)] {
        &self.conditions
    }

    pub fn symbolic_conditions(&self) -> &[String] {
        &self.symbolic_conditions
    }

    /// True when every part of the data is an honest monomial, i.e. no
    /// condition had to be carried symbolically.
    pub fn is_monomial(&self) -> bool {
        self.symbolic_conditions.is_empty()
    }
}

/// The class of a stratum: a Laurent polynomial in `L`, or a named symbol
/// for classes that are not polynomial in `L` (these take part in exact
/// arithmetic as opaque factors and need user-supplied values to evaluate).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StratumClass {
    Poly(LaurentPoly),
    Symbol(String),
}

impl fmt::Display for StratumClass {
    /// Classes print factored through `(L - 1)` so the decomposition table
    /// matches the usual co-cardinality shape, e.g. `(L - 1)^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StratumClass::Symbol(name) => write!(f, "[{name}]"),
            StratumClass::Poly(p) => {
                let lm1 = &LaurentPoly::monomial(1, BigRational::one()) - &LaurentPoly::one();
                let mut k = 0u32;
                let mut rest = p.clone();
                while let Some(q) = rest.div_exact(&lm1) {
                    if q.is_zero() {
                        break;
                    }
                    rest = q;
                    k += 1;
                }
                match (k, rest.is_one()) {
                    (0, _) => write!(f, "{p}"),
                    (1, true) => write!(f, "L - 1"),
                    (_, true) => write!(f, "(L - 1)^{k}"),
                    (1, false) => write!(f, "(L - 1) * ({rest})"),
                    (_, false) => write!(f, "(L - 1)^{k} * ({rest})"),
                }
            }
        }
    }
}

/// One stratum record: its class and (optionally) its Euler number. For a
/// polynomial class the Euler number is the value at `L = 1` and need not
/// be stored; a stored value must agree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratum {
    class: StratumClass,
    euler: Option<i64>,
}

impl Stratum {
    pub fn new(class: StratumClass, euler: Option<i64>) -> Result<Self> {
        if let (StratumClass::Poly(p), Some(e)) = (&class, euler) {
            let at_one = p.eval_at_one();
            if at_one != BigRational::from_integer(e.into()) {
                return Err(Error::InvalidInput(format!(
                    "stratum class {p} evaluates to {at_one} at L = 1, but euler = {e} was supplied"
                )));
            }
        }
        Ok(Self { class, euler })
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        Self {
            class: StratumClass::Poly(p),
            euler: None,
        }
    }

    pub fn class(&self) -> &StratumClass {
        &self.class
    }

    /// Euler number: the stored value, or the class evaluated at `L = 1`.
    pub fn euler(&self) -> Option<BigRational> {
        match (&self.class, self.euler) {
            (_, Some(e)) => Some(BigRational::from_integer(e.into())),
            (StratumClass::Poly(p), None) => Some(p.eval_at_one()),
            (StratumClass::Symbol(_), None) => None,
        }
    }
}

/// Numerical resolution data over a set of `t` divisors: multiplicities of
/// the integrand and condition monomials along each divisor, the divisor
/// weights `nu`, and the classes of the strata cut out by divisor subsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResolutionData {
    t: usize,
    ambient_dim: usize,
    /// `nf[j][i]` = multiplicity of `f_i` along divisor `j`; column 0 is `f0`.
    nf: Vec<Vec<u32>>,
    ng: Vec<Vec<u32>>,
    nu: Vec<u32>,
    strata: std::collections::BTreeMap<BTreeSet<usize>, Stratum>,
}

impl ResolutionData {
    pub fn new(
        ambient_dim: usize,
        nf: Vec<Vec<u32>>,
        ng: Vec<Vec<u32>>,
        nu: Vec<u32>,
        strata: std::collections::BTreeMap<BTreeSet<usize>, Stratum>,
    ) -> Result<Self> {
        let t = nf.len();
        if t == 0 {
            return Err(Error::InvalidInput(
                "resolution data needs t >= 1 divisors".into(),
            ));
        }
        if ng.len() != t || nu.len() != t {
            return Err(Error::InvalidInput(
                "nf, ng, nu must all have one entry per divisor".into(),
            ));
        }
        let cols = nf[0].len();
        if cols == 0 {
            return Err(Error::InvalidInput(
                "multiplicity rows need at least the integrand column".into(),
            ));
        }
        if nf.iter().any(|r| r.len() != cols) || ng.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidInput(
                "ragged multiplicity rows in resolution data".into(),
            ));
        }
        if nu.iter().any(|&v| v == 0) {
            return Err(Error::InvalidInput(
                "divisor weights nu must be positive".into(),
            ));
        }
        for key in strata.keys() {
            if key.iter().any(|&j| j >= t) {
                return Err(Error::InvalidInput(format!(
                    "stratum key {} references a divisor out of range 1..{t}",
                    subset_label(key)
                )));
            }
        }
        Ok(Self {
            t,
            ambient_dim,
            nf,
            ng,
            nu,
            strata,
        })
    }

    pub fn num_divisors(&self) -> usize {
        self.t
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Number of condition pairs (multiplicity columns beyond the integrand).
    pub fn num_conditions(&self) -> usize {
        self.nf[0].len() - 1
    }

    pub fn nf(&self) -> &[Vec<u32>] {
        &self.nf
    }

    pub fn ng(&self) -> &[Vec<u32>] {
        &self.ng
    }

    pub fn nu(&self) -> &[u32] {
        &self.nu
    }

    pub fn strata(&self) -> &std::collections::BTreeMap<BTreeSet<usize>, Stratum> {
        &self.strata
    }

    pub fn stratum(&self, key: &BTreeSet<usize>) -> Option<&Stratum> {
        self.strata.get(key)
    }
}

/// The identity resolution of monomial data: the divisors are the coordinate
/// hyperplanes themselves, multiplicities read off the exponent vectors,
/// every weight is 1, and the stratum of a subset `I` is a torus of
/// dimension `m - |I|` with class `(L - 1)^(m - |I|)`.
pub fn monomial_resolution(data: &ConeIntegralData) -> Result<ResolutionData> {
    if !data.is_monomial() {
        return Err(Error::InvalidInput(
            "resolution by coordinate divisors needs monomial data".into(),
        ));
    }
    let m = data.num_vars();
    if m > 16 {
        return Err(Error::InvalidInput(format!(
            "explicit stratum table for {m} variables would have 2^{m} entries; \
             monomial data is limited to 16 variables"
        )));
    }
    let mut nf = Vec::with_capacity(m);
    let mut ng = Vec::with_capacity(m);
    for j in 0..m {
        let mut frow = vec![data.f0()[j]];
        let mut grow = vec![data.g0()[j]];
        for (f, g) in data.conditions() {
            frow.push(f[j]);
            grow.push(g[j]);
        }
        nf.push(frow);
        ng.push(grow);
    }
    let mut strata = std::collections::BTreeMap::new();
    for mask in 0u32..(1 << m) {
        let set: BTreeSet<usize> = (0..m).filter(|j| mask & (1 << j) != 0).collect();
        let co = (m - set.len()) as u32;
        strata.insert(set, Stratum::from_poly(l_minus_one_pow(co)));
    }
    ResolutionData::new(m, nf, ng, vec![1; m], strata)
}

/// The closed cone of the condition inequalities: one row `Ng_i - Nf_i`
/// per condition, over the nonnegative orthant of valuation vectors.
pub fn cone_of(r: &ResolutionData) -> Result<ConeSpec> {
    let mut rows = Vec::with_capacity(r.num_conditions());
    for i in 1..=r.num_conditions() {
        let row: Vec<i64> = (0..r.num_divisors())
            .map(|j| i64::from(r.ng[j][i]) - i64::from(r.nf[j][i]))
            .collect();
        rows.push(row);
    }
    ConeSpec::new(r.num_divisors(), rows)
}

/// Pole constants per primitive edge generator: `A = <e, N(f0)>` and
/// `B = <e, N(g0) + nu>`, so the edge contributes the factor
/// `T^A L^-B / (1 - T^A L^-B)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeConstants {
    map: std::collections::BTreeMap<Vec<i64>, (i64, i64)>,
}

impl EdgeConstants {
    pub fn get(&self, edge: &[i64]) -> Option<(i64, i64)> {
        self.map.get(edge).copied()
    }

    /// Edges with their constants, sorted by generator vector.
    pub fn iter(&self) -> impl Iterator<Item = (&Vec<i64>, (i64, i64))> {
        self.map.iter().map(|(e, &c)| (e, c))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// The multiset of constants for one piece, aligned with its generators.
    pub fn constants_for(&self, piece: &Piece) -> Result<Vec<(i64, i64)>> {
        piece
            .generators()
            .iter()
            .map(|g| {
                self.get(g).ok_or_else(|| {
                    Error::Internal(format!("no edge constants computed for generator {g:?}"))
                })
            })
            .collect()
    }
}

pub fn edge_constants(r: &ResolutionData, d: &Decomposition) -> Result<EdgeConstants> {
    let nf0: Vec<u32> = r.nf.iter().map(|row| row[0]).collect();
    let ngnu: Vec<u32> =
        r.ng.iter()
            .zip(&r.nu)
            .map(|(row, &nu)| row[0] + nu)
            .collect();
    let mut map = std::collections::BTreeMap::new();
    for piece in d.pieces() {
        for edge in piece.generators() {
            if edge.len() != r.num_divisors() {
                return Err(Error::InvalidInput(format!(
                    "decomposition lives in dimension {}, resolution has {} divisors",
                    edge.len(),
                    r.num_divisors()
                )));
            }
            map.entry(edge.clone())
                .or_insert_with(|| (weighted_dot(edge, &nf0), weighted_dot(edge, &ngnu)));
        }
    }
    Ok(EdgeConstants { map })
}

/// One piece's contribution to the geometric sum, with the structural data
/// (support, pole constants, stratum class) that the topological limit and
/// the decomposition table need.
#[derive(Clone, Debug)]
pub struct GeomPiece {
    piece_index: usize,
    generators: Vec<Vec<i64>>,
    support: BTreeSet<usize>,
    constants: Vec<(i64, i64)>,
    class: StratumClass,
    euler: Option<BigRational>,
    term: MotivicTerm,
}

impl GeomPiece {
    pub fn piece_index(&self) -> usize {
        self.piece_index
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    /// The divisor support `I` of the piece (0-based indices).
    pub fn support(&self) -> &BTreeSet<usize> {
        &self.support
    }

    /// Pole constants `(A_j, B_j)`, aligned with `generators`.
    pub fn constants(&self) -> &[(i64, i64)] {
        &self.constants
    }

    pub fn class(&self) -> &StratumClass {
        &self.class
    }

    pub fn euler(&self) -> Option<&BigRational> {
        self.euler.as_ref()
    }

    pub fn term(&self) -> &MotivicTerm {
        &self.term
    }
}

/// The assembled geometric sum together with its per-piece breakdown.
#[derive(Clone, Debug)]
pub struct GeomAssembly {
    ambient_dim: usize,
    pieces: Vec<GeomPiece>,
    value: MotivicRational,
}

impl GeomAssembly {
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn pieces(&self) -> &[GeomPiece] {
        &self.pieces
    }

    pub fn value(&self) -> &MotivicRational {
        &self.value
    }
}

/// Assemble the geometric sum over the pieces of the decomposition:
///
/// ```text
/// Z(s) = sum_k (L-1)^|I_k| * L^-m * [E_I_k] * prod_{j in M_k} x_j/(1 - x_j)
/// ```
///
/// with `x_j = T^(A_j) L^(-B_j)` and m the ambient dimension. Every lattice
/// point of the cone lands in exactly one piece, and on a piece the sum of
/// `L^(-<1+g0, a>) T^(<f0, a>)` over its lattice points is exactly the
/// product of the edge geometric series times the stratum weight.
pub fn assemble_geom(
    r: &ResolutionData,
    d: &Decomposition,
    e: &EdgeConstants,
) -> Result<GeomAssembly> {
    let m = r.ambient_dim();
    let mut pieces = Vec::with_capacity(d.pieces().len());
    let mut terms = Vec::with_capacity(d.pieces().len());
    for (idx, piece) in d.pieces().iter().enumerate() {
        let support = piece.support();
        if support.len() < piece.dim() {
            return Err(Error::Internal(format!(
                "piece {idx} has support {} smaller than its dimension {}",
                subset_label(&support),
                piece.dim()
            )));
        }
        let stratum = r
            .stratum(&support)
            .ok_or_else(|| Error::MissingStratum(subset_label(&support)))?;
        let constants = e.constants_for(piece)?;
        let mut coeff = l_minus_one_pow(support.len() as u32);
        coeff = coeff.mul_monomial(-(m as i64), &BigRational::one());
        let mut term = MotivicTerm::from_coeff(coeff);
        match stratum.class() {
            StratumClass::Poly(p) => term = term.with_coeff(p.clone()),
            StratumClass::Symbol(name) => term = term.with_symbol(name, 1),
        }
        for &(a, b) in &constants {
            term = term.with_fraction(a, b, 1);
        }
        terms.push(term.clone());
        pieces.push(GeomPiece {
            piece_index: idx,
            generators: piece.generators().to_vec(),
            support,
            constants,
            class: stratum.class().clone(),
            euler: stratum.euler(),
            term,
        });
    }
    Ok(GeomAssembly {
        ambient_dim: m,
        pieces,
        value: MotivicRational::from_terms(terms),
    })
}

/// Multiply by `(1 - L^-k)^-1`. Exact coefficient division when every term
/// coefficient is divisible (the usual case along the monomial pipeline);
/// otherwise the inverse stays as an explicit constant geometric factor
/// `(0, k)`, which blocks series expansion but not equality testing.
fn div_one_minus_l_inv(z: &MotivicRational, k: i64) -> MotivicRational {
    match z.div_coeff_exact(&LaurentPoly::one_minus_l_inv(k)) {
        Some(q) => q,
        None => z.mul(&MotivicRational::geometric_inverse_factor(0, k)),
    }
}

/// Account for the triangular matrix parametrization: the raw cone sum
/// weighs each subobject by its coset of triangular unit matrices, and the
/// printed geometric zeta multiplies by `prod_{i=1..d} (1 - L^-i)` and
/// divides by `(1 - L^-1)^d`.
pub fn apply_geom_prefactor(raw: &MotivicRational, rank: usize) -> MotivicRational {
    let mut num = LaurentPoly::one();
    for i in 1..=rank as i64 {
        num = &num * &LaurentPoly::one_minus_l_inv(i);
    }
    let mut out = raw.scale(&num);
    for _ in 0..rank {
        out = div_one_minus_l_inv(&out, 1);
    }
    out
}

/// The counting series from the geometric zeta of a rank-`d` input:
/// substitute `s -> s - d` and multiply by `prod_{i=1..d} (1 - L^-i)^-1`.
/// The `T^n` coefficient of the result is the class of the codimension-`n`
/// subobject set.
pub fn zeta_from_geom(z: &MotivicRational, rank: usize) -> MotivicRational {
    let mut out = z.shift_s(rank as i64);
    for i in 1..=rank as i64 {
        out = div_one_minus_l_inv(&out, i);
    }
    out
}

/// The counting series straight from the raw (prefactor-free) cone sum:
/// `P(T) = (1 - L^-1)^-d * Z(s - d)`. Equal to
/// `zeta_from_geom(apply_geom_prefactor(raw, d), d)` but keeps every
/// division inside term coefficients.
pub fn counting_zeta(raw: &MotivicRational, rank: usize) -> MotivicRational {
    let mut out = raw.shift_s(rank as i64);
    for _ in 0..rank {
        out = div_one_minus_l_inv(&out, 1);
    }
    out
}

/// Truncated numeric evaluation of the cone sum at `L = p` by direct
/// lattice enumeration over `0 <= a_j <= cap`: returns the coefficients of
/// `T^0..T^order` of
/// `sum_a (1 - p^-1)^m p^(-<1 + g0, a>) T^(<f0, a>)`.
///
/// Truncation error: every omitted point has some `a_j > cap`, hence
/// contributes at most `p^-cap`, and the count of omitted points with
/// `<f0, a> = n` grows polynomially in `cap`, so each returned coefficient
/// is within `O(cap^(m-1) * p^-cap)` of the exact value; coefficients with
/// `n < cap * min_+(f0)` whose fiber is finite are exact.
pub fn direct_eval(
    data: &ConeIntegralData,
    p: &BigRational,
    order: usize,
    cap: u32,
) -> Result<Vec<BigRational>> {
    if !data.is_monomial() {
        return Err(Error::InvalidInput(
            "direct evaluation needs monomial data".into(),
        ));
    }
    if p.is_zero() {
        return Err(Error::DivisionByZero("direct evaluation at p = 0".into()));
    }
    let m = data.num_vars();
    let points = (u128::from(cap) + 1).checked_pow(m as u32);
    match points {
        Some(n) if n <= 100_000_000 => {}
        _ => {
            return Err(Error::InvalidInput(format!(
                "lattice enumeration of (cap+1)^m = {}^{m} points is too large",
                cap + 1
            )))
        }
    }
    let f0: Vec<i64> = data.f0().iter().map(|&x| i64::from(x)).collect();
    let wt: Vec<i64> = data.g0().iter().map(|&x| i64::from(x) + 1).collect();
    let conds: Vec<(Vec<i64>, Vec<i64>)> = data
        .conditions()
        .iter()
        .map(|(f, g)| {
            (
                f.iter().map(|&x| i64::from(x)).collect(),
                g.iter().map(|&x| i64::from(x)).collect(),
            )
        })
        .collect();
    // Aggregate integer exponent counts first; form rationals once per
    // distinct (T-degree, L-exponent) pair.
    let mut counts: std::collections::HashMap<(usize, i64), u64> = std::collections::HashMap::new();
    let mut a = vec![0i64; m];
    'points: loop {
        let deg: i64 = f0.iter().zip(&a).map(|(c, x)| c * x).sum();
        if deg <= order as i64 {
            let ok = conds.iter().all(|(f, g)| {
                let lhs: i64 = f.iter().zip(&a).map(|(c, x)| c * x).sum();
                let rhs: i64 = g.iter().zip(&a).map(|(c, x)| c * x).sum();
                lhs <= rhs
            });
            if ok {
                let w: i64 = wt.iter().zip(&a).map(|(c, x)| c * x).sum();
                *counts.entry((deg as usize, w)).or_insert(0) += 1;
            }
        }
        for j in 0..=m {
            if j == m {
                break 'points;
            }
            if a[j] < i64::from(cap) {
                a[j] += 1;
                break;
            }
            a[j] = 0;
        }
    }
    let unit_mass = {
        let f = BigRational::one() - rational_pow(p, -1)?;
        let mut acc = BigRational::one();
        for _ in 0..m {
            acc *= &f;
        }
        acc
    };
    let mut coeffs = vec![BigRational::zero(); order + 1];
    for ((deg, w), n) in counts {
        coeffs[deg] += rational_pow(p, -w)? * BigRational::from_integer(n.into());
    }
    for c in &mut coeffs {
        *c *= &unit_mass;
    }
    Ok(coeffs)
}

/// The full symbolic pipeline for one input: resolution, cone, decomposition,
/// edge constants, and assembled geometric sum, plus the rank bookkeeping
/// needed to normalize down to the counting series.
#[derive(Clone, Debug)]
pub struct ZetaPipeline {
    data: Option<ConeIntegralData>,
    resolution: ResolutionData,
    cone: ConeSpec,
    decomposition: Decomposition,
    edges: EdgeConstants,
    assembly: GeomAssembly,
    rank: Option<usize>,
}

impl ZetaPipeline {
    /// Run the pipeline on monomial data. `rank` is the rank of the algebra
    /// the data came from, when there is one; it drives the prefactor and
    /// the `s - d` shift.
    pub fn from_monomial_data(data: ConeIntegralData, rank: Option<usize>) -> Result<Self> {
        let resolution = monomial_resolution(&data)?;
        let mut pipe = Self::from_resolution(resolution, rank)?;
        pipe.data = Some(data);
        Ok(pipe)
    }

    /// Run the pipeline on user-supplied resolution data.
    pub fn from_resolution(resolution: ResolutionData, rank: Option<usize>) -> Result<Self> {
        let cone = cone_of(&resolution)?;
        let decomposition = decompose(&cone)?;
        let edges = edge_constants(&resolution, &decomposition)?;
        let assembly = assemble_geom(&resolution, &decomposition, &edges)?;
        Ok(Self {
            data: None,
            resolution,
            cone,
            decomposition,
            edges,
            assembly,
            rank,
        })
    }

    pub fn data(&self) -> Option<&ConeIntegralData> {
        self.data.as_ref()
    }

    pub fn resolution(&self) -> &ResolutionData {
        &self.resolution
    }

    pub fn cone(&self) -> &ConeSpec {
        &self.cone
    }

    pub fn decomposition(&self) -> &Decomposition {
        &self.decomposition
    }

    pub fn edges(&self) -> &EdgeConstants {
        &self.edges
    }

    pub fn assembly(&self) -> &GeomAssembly {
        &self.assembly
    }

    pub fn rank(&self) -> Option<usize> {
        self.rank
    }

    /// The raw cone sum, before any rank normalization.
    pub fn geom_raw(&self) -> &MotivicRational {
        self.assembly.value()
    }

    /// The geometric zeta in printed normalization: the raw sum with the
    /// triangular prefactor when a rank is present, the raw sum otherwise.
    pub fn geom(&self) -> MotivicRational {
        match self.rank {
            Some(d) => apply_geom_prefactor(self.geom_raw(), d),
            None => self.geom_raw().clone(),
        }
    }

    /// The counting series `P(T)`; needs a rank.
    pub fn counting(&self) -> Result<MotivicRational> {
        let d = self.rank.ok_or_else(|| {
            Error::InvalidInput("counting series needs a rank (algebra input)".into())
        })?;
        Ok(counting_zeta(self.geom_raw(), d))
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::exact::{mr_equal, mr_series, mr_specialize};
    use num::{BigInt, Signed};

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    pub(crate) fn heisenberg_data() -> ConeIntegralData {
        ConeIntegralData::new(
            vec!["x".into(), "y".into(), "z".into()],
            vec![1, 1, 1],
            vec![2, 1, 0],
            vec![(vec![0, 0, 1], vec![1, 1, 0])],
        )
        .unwrap()
    }

    fn abelian_data(d: usize) -> ConeIntegralData {
        let vars = (1..=d).map(|i| format!("x{i}")).collect();
        let g0 = (1..=d).map(|i| (d - i) as u32).collect();
        ConeIntegralData::new(vars, vec![1; d], g0, vec![]).unwrap()
    }

    /// Printed closed form of the Heisenberg geometric zeta.
    fn heisenberg_geom_printed() -> MotivicRational {
        let mut coeff = LaurentPoly::one();
        for i in 1..=3 {
            coeff = &coeff * &LaurentPoly::one_minus_l_inv(i);
        }
        let mut z = MotivicRational::constant(coeff);
        z = z.mul(&MotivicRational::one_minus_monomial(3, 6));
        for (a, b) in [(1, 3), (1, 2), (2, 4), (2, 3)] {
            z = z.mul(&MotivicRational::geometric_inverse_factor(a, b));
        }
        z
    }

    /// Printed closed form of the Heisenberg counting series.
    fn heisenberg_p_printed() -> MotivicRational {
        let mut z = MotivicRational::one_minus_monomial(3, -3);
        for (a, b) in [(1, 0), (1, -1), (2, -2), (2, -3)] {
            z = z.mul(&MotivicRational::geometric_inverse_factor(a, b));
        }
        z
    }

    #[test]
    fn identity_resolution_reads_off_exponents() {
        let one_line = ConeIntegralData::new(vec!["x".into()], vec![1], vec![0], vec![]).unwrap();
        let r = monomial_resolution(&one_line).unwrap();
        assert_eq!(r.num_divisors(), 1);
        assert_eq!(r.nf(), &[vec![1]]);
        assert_eq!(r.ng(), &[vec![0]]);
        assert_eq!(r.nu(), &[1]);
        let empty: BTreeSet<usize> = BTreeSet::new();
        let full: BTreeSet<usize> = [0].into_iter().collect();
        assert_eq!(
            r.stratum(&empty).unwrap().class(),
            &StratumClass::Poly(l_minus_one_pow(1))
        );
        assert_eq!(
            r.stratum(&full).unwrap().class(),
            &StratumClass::Poly(LaurentPoly::one())
        );

        let h = monomial_resolution(&heisenberg_data()).unwrap();
        assert_eq!(h.nf(), &[vec![1, 0], vec![1, 0], vec![1, 1]]);
        assert_eq!(h.ng(), &[vec![2, 1], vec![1, 1], vec![0, 0]]);
        assert_eq!(h.nu(), &[1, 1, 1]);
        for (key, s) in h.strata() {
            let co = (3 - key.len()) as u32;
            assert_eq!(s.class(), &StratumClass::Poly(l_minus_one_pow(co)));
            let expect_euler = if key.len() == 3 { rat(1) } else { rat(0) };
            assert_eq!(s.euler().unwrap(), expect_euler);
        }

        let two = ConeIntegralData::new(
            vec!["x1".into(), "x2".into()],
            vec![1, 1],
            vec![0, 1],
            vec![],
        )
        .unwrap();
        let r2 = monomial_resolution(&two).unwrap();
        assert_eq!(r2.nf(), &[vec![1], vec![1]]);
        assert_eq!(r2.ng(), &[vec![0], vec![1]]);
    }

    #[test]
    fn cone_rows_and_edge_constants_match_heisenberg() {
        let r = monomial_resolution(&heisenberg_data()).unwrap();
        let cone = cone_of(&r).unwrap();
        assert_eq!(cone.inequalities(), &[vec![1, 1, -1]]);
        let d = decompose(&cone).unwrap();
        let e = edge_constants(&r, &d).unwrap();
        let got: Vec<(Vec<i64>, (i64, i64))> = e.iter().map(|(v, c)| (v.clone(), c)).collect();
        assert_eq!(
            got,
            vec![
                (vec![0, 1, 0], (1, 2)),
                (vec![0, 1, 1], (2, 3)),
                (vec![1, 0, 0], (1, 3)),
                (vec![1, 0, 1], (2, 4)),
            ]
        );
    }

    #[test]
    fn empty_cone_of_gives_orthant() {
        let r = monomial_resolution(&abelian_data(2)).unwrap();
        let cone = cone_of(&r).unwrap();
        assert!(cone.inequalities().is_empty());
        assert_eq!(cone.dim(), 2);
    }

    #[test]
    fn single_ray_assembles_to_geometric_series() {
        // f0 = x, g0 = 1 over the full ray: direct summation over n >= 0 of
        // (1 - L^-1) L^-n T^n gives (1 - L^-1) / (1 - L^-1 T).
        let data = ConeIntegralData::new(vec!["x".into()], vec![1], vec![0], vec![]).unwrap();
        let pipe = ZetaPipeline::from_monomial_data(data, None).unwrap();
        let expected = MotivicRational::constant(LaurentPoly::one_minus_l_inv(1))
            .mul(&MotivicRational::geometric_inverse_factor(1, 1));
        assert!(mr_equal(pipe.geom_raw(), &expected));
    }

    #[test]
    fn heisenberg_matches_printed_forms() {
        let pipe = ZetaPipeline::from_monomial_data(heisenberg_data(), Some(3)).unwrap();
        assert_eq!(pipe.decomposition().pieces().len(), 12);
        assert!(mr_equal(&pipe.geom(), &heisenberg_geom_printed()));
        let p = pipe.counting().unwrap();
        assert!(mr_equal(&p, &heisenberg_p_printed()));
        let series = mr_series(&p, 2).unwrap();
        assert_eq!(series[0], LaurentPoly::one());
        assert_eq!(series[1], "L + 1".parse().unwrap());
        assert_eq!(series[2], "L^3 + 2*L^2 + L + 1".parse().unwrap());
    }

    #[test]
    fn abelian_ranks_match_printed_forms() {
        for d in 1..=3usize {
            let pipe = ZetaPipeline::from_monomial_data(abelian_data(d), Some(d)).unwrap();
            // Printed geometric form: prod_i (1 - L^-i) / (1 - L^(-s-i)).
            let mut geom = MotivicRational::one();
            for i in 1..=d as i64 {
                geom = geom.scale(&LaurentPoly::one_minus_l_inv(i));
                geom = geom.mul(&MotivicRational::geometric_inverse_factor(1, i));
            }
            assert!(mr_equal(&pipe.geom(), &geom));
            // Counting series: prod_{i=0..d-1} (1 - L^i T)^-1.
            let mut p = MotivicRational::one();
            for i in 0..d as i64 {
                p = p.mul(&MotivicRational::geometric_inverse_factor(1, -i));
            }
            assert!(mr_equal(&pipe.counting().unwrap(), &p));
        }
    }

    #[test]
    fn normalization_paths_agree() {
        let pipe = ZetaPipeline::from_monomial_data(heisenberg_data(), Some(3)).unwrap();
        let via_geom = zeta_from_geom(&pipe.geom(), 3);
        let direct = pipe.counting().unwrap();
        assert!(mr_equal(&via_geom, &direct));
        // Rank 0 is the identity.
        let raw = pipe.geom_raw();
        assert!(mr_equal(&zeta_from_geom(raw, 0), raw));
    }

    #[test]
    fn direct_eval_single_variable_is_geometric() {
        let data = ConeIntegralData::new(vec!["x".into()], vec![1], vec![0], vec![]).unwrap();
        let p = rat(2);
        let coeffs = direct_eval(&data, &p, 10, 10).unwrap();
        for (n, c) in coeffs.iter().enumerate() {
            let expect =
                (BigRational::one() - rat(1) / rat(2)) * rational_pow(&p, -(n as i64)).unwrap();
            assert_eq!(c, &expect, "coefficient of T^{n}");
        }
    }

    #[test]
    fn direct_eval_splits_as_product_for_independent_variables() {
        let data =
            ConeIntegralData::new(vec!["x".into(), "y".into()], vec![1, 1], vec![0, 2], vec![])
                .unwrap();
        let left = ConeIntegralData::new(vec!["x".into()], vec![1], vec![0], vec![]).unwrap();
        let right = ConeIntegralData::new(vec!["y".into()], vec![1], vec![2], vec![]).unwrap();
        let p = rat(3);
        let both = direct_eval(&data, &p, 6, 12).unwrap();
        let a = direct_eval(&left, &p, 6, 12).unwrap();
        let b = direct_eval(&right, &p, 6, 12).unwrap();
        for n in 0..=6usize {
            let conv: BigRational = (0..=n).map(|k| &a[k] * &b[n - k]).sum();
            assert_eq!(both[n], conv, "coefficient of T^{n}");
        }
    }

    #[test]
    fn direct_eval_agrees_with_specialized_assembly() {
        let data = heisenberg_data();
        let pipe = ZetaPipeline::from_monomial_data(data.clone(), Some(3)).unwrap();
        let p = rat(3);
        let spec = mr_specialize(pipe.geom_raw(), &p, &Default::default()).unwrap();
        let series = spec.series(4).unwrap();
        let numeric = direct_eval(&data, &p, 4, 12).unwrap();
        let tol = rational_pow(&p, -8).unwrap();
        for n in 0..=4usize {
            let diff = (&series[n] - &numeric[n]).abs();
            assert!(
                diff <= tol,
                "coefficient of T^{n}: symbolic {} vs direct {}",
                series[n],
                numeric[n]
            );
        }
    }

    #[test]
    fn missing_stratum_is_reported() {
        let data = heisenberg_data();
        let mut r = monomial_resolution(&data).unwrap();
        let full: BTreeSet<usize> = [0, 1, 2].into_iter().collect();
        r.strata.remove(&full);
        let cone = cone_of(&r).unwrap();
        let d = decompose(&cone).unwrap();
        let e = edge_constants(&r, &d).unwrap();
        match assemble_geom(&r, &d, &e) {
            Err(Error::MissingStratum(s)) => assert_eq!(s, "{1,2,3}"),
            other => panic!("expected missing stratum, got {other:?}"),
        }
    }

    #[test]
    fn symbolic_conditions_block_the_monomial_pipeline() {
        let data = ConeIntegralData::new(vec!["x".into()], vec![1], vec![0], vec![])
            .unwrap()
            .with_symbolic_conditions(vec!["v(x) <= v(x^2 + 1)".into()]);
        assert!(!data.is_monomial());
        assert!(matches!(
            monomial_resolution(&data),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            direct_eval(&data, &rat(2), 3, 5),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn stratum_euler_consistency_is_enforced() {
        assert!(Stratum::new(StratumClass::Poly(l_minus_one_pow(2)), Some(0)).is_ok());
        assert!(Stratum::new(StratumClass::Poly(l_minus_one_pow(2)), Some(1)).is_err());
        let sym = Stratum::new(StratumClass::Symbol("EllCurve".into()), Some(0)).unwrap();
        assert_eq!(sym.euler().unwrap(), rat(0));
        let unsupplied = Stratum::new(StratumClass::Symbol("EllCurve".into()), None).unwrap();
        assert!(unsupplied.euler().is_none());
    }

    #[test]
    fn class_display_is_factored() {
        assert_eq!(
            StratumClass::Poly(l_minus_one_pow(3)).to_string(),
            "(L - 1)^3"
        );
        assert_eq!(StratumClass::Poly(l_minus_one_pow(1)).to_string(), "L - 1");
        assert_eq!(StratumClass::Poly(LaurentPoly::one()).to_string(), "1");
        assert_eq!(
            StratumClass::Symbol("EllCurve".into()).to_string(),
            "[EllCurve]"
        );
        let mixed = &l_minus_one_pow(1) * &"L + 1".parse::<LaurentPoly>().unwrap();
        assert_eq!(StratumClass::Poly(mixed).to_string(), "(L - 1) * (L + 1)");
    }
}
