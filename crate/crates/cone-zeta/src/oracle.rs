//! Brute-force counting, independent of the symbolic pipeline: sublattices
//! of Z^d of index p^n enumerated through canonical upper-triangular bases
//! (one matrix per sublattice), filtered by bracket closure with exact
//! integer arithmetic, plus an F_q[[t]]-submodule counter over small finite
//! fields. Everything here is deliberately first-principles so its counts
//! can serve as ground truth for the closed forms.

use crate::lie::{BracketMode, LieAlgebraZ};
use crate::{Error, Result};

/// Canonical basis matrix of a finite-index sublattice of Z^d: rows span
/// the lattice, the matrix is upper triangular with positive diagonal, and
/// every entry above the diagonal is reduced modulo the diagonal entry of
/// its column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HnfMatrix {
    rows: Vec<Vec<i64>>,
}

impl HnfMatrix {
    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// The index of the lattice in Z^d: the product of the diagonal.
    pub fn index(&self) -> u64 {
        let mut acc: u128 = 1;
        for (i, row) in self.rows.iter().enumerate() {
            acc *= row[i] as u128;
        }
        u64::try_from(acc).expect("lattice index overflow")
    }

    /// Membership of an integer vector: forward substitution against the
    /// triangular rows, exact division only.
    pub fn contains(&self, v: &[i64]) -> bool {
        debug_assert_eq!(v.len(), self.rows.len());
        let mut rem: Vec<i128> = v.iter().map(|&x| i128::from(x)).collect();
        for (i, row) in self.rows.iter().enumerate() {
            let pivot = i128::from(row[i]);
            if rem[i] % pivot != 0 {
                return false;
            }
            let coeff = rem[i] / pivot;
            if coeff != 0 {
                for (r, &m) in rem.iter_mut().zip(row).skip(i) {
                    *r -= coeff * i128::from(m);
                }
            }
        }
        true
    }
}

/// Compositions of n into d nonnegative parts, ascending lexicographic.
fn compositions(d: usize, n: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; d];
    cur[d - 1] = n;
    loop {
        out.push(cur.clone());
        let Some(j) = (0..d).rev().find(|&j| cur[j] > 0) else {
            break;
        };
        if j == 0 {
            break;
        }
        let v = cur[j];
        cur[j] = 0;
        cur[j - 1] += 1;
        cur[d - 1] = v - 1;
    }
    out
}

/// All canonical matrices with the given diagonal exponent sequence, in
/// ascending lexicographic order of the above-diagonal digit vector
/// (row-major slots).
struct CompositionMatrices {
    diag: Vec<i64>,
    slots: Vec<(usize, usize)>,
    radix: Vec<i64>,
    digits: Vec<i64>,
    done: bool,
}

impl CompositionMatrices {
    fn new(p: i64, comp: &[u32]) -> Self {
        let d = comp.len();
        let diag: Vec<i64> = comp.iter().map(|&a| p.pow(a)).collect();
        let mut slots = Vec::new();
        for i in 0..d {
            for j in (i + 1)..d {
                slots.push((i, j));
            }
        }
        let radix: Vec<i64> = slots.iter().map(|&(_, j)| diag[j]).collect();
        Self {
            diag,
            digits: vec![0; slots.len()],
            slots,
            radix,
            done: false,
        }
    }
}

impl Iterator for CompositionMatrices {
    type Item = HnfMatrix;

    fn next(&mut self) -> Option<HnfMatrix> {
        if self.done {
            return None;
        }
        let d = self.diag.len();
        let mut rows = vec![vec![0i64; d]; d];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = self.diag[i];
        }
        for (slot, &(i, j)) in self.slots.iter().enumerate() {
            rows[i][j] = self.digits[slot];
        }
        // advance the odometer, rightmost digit fastest
        self.done = true;
        for slot in (0..self.slots.len()).rev() {
            if self.digits[slot] + 1 < self.radix[slot] {
                self.digits[slot] += 1;
                self.done = false;
                break;
            }
            self.digits[slot] = 0;
        }
        Some(HnfMatrix { rows })
    }
}

pub(crate) fn is_small_prime(p: i64) -> bool {
    if p < 2 {
        return false;
    }
    let mut k = 2;
    while k * k <= p {
        if p % k == 0 {
            return false;
        }
        k += 1;
    }
    true
}

fn require_prime(p: i64) -> Result<()> {
    if is_small_prime(p) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("p = {p} is not prime")))
    }
}

/// Every index-p^n sublattice of Z^d exactly once, in deterministic order:
/// diagonal exponent sequences ascending lexicographically, then
/// above-diagonal digits ascending.
pub fn enumerate_sublattices(d: usize, p: i64, n: u32) -> Result<impl Iterator<Item = HnfMatrix>> {
    if d == 0 {
        return Err(Error::InvalidInput("rank must be positive".into()));
    }
    require_prime(p)?;
    Ok(compositions(d, n)
        .into_iter()
        .flat_map(move |comp| CompositionMatrices::new(p, &comp)))
}

fn closed_under_bracket(a: &LieAlgebraZ, m: &HnfMatrix, mode: BracketMode) -> bool {
    let d = a.dim();
    match mode {
        BracketMode::Subalgebra => {
            for i in 0..d {
                for j in (i + 1)..d {
                    let v = a.bracket_of(&m.rows()[i], &m.rows()[j]);
                    if !m.contains(&v) {
                        return false;
                    }
                }
            }
        }
        BracketMode::Ideal => {
            let mut basis = vec![0i64; d];
            for i in 0..d {
                basis[i] = 1;
                for row in m.rows() {
                    let v = a.bracket_of(&basis, row);
                    if !m.contains(&v) {
                        return false;
                    }
                }
                basis[i] = 0;
            }
        }
    }
    true
}

/// Number of index-p^n subalgebras (or ideals) of the Lie ring a ⊗ Z_p:
/// enumerate canonical sublattice bases, keep those closed under the
/// bracket (subalgebra mode: brackets of basis rows; ideal mode: brackets
/// of the ambient basis against the rows).
pub fn count_subalgebras(a: &LieAlgebraZ, p: i64, n: u32, mode: BracketMode) -> Result<u64> {
    require_prime(p)?;
    let mut count = 0;
    for m in enumerate_sublattices(a.dim(), p, n)? {
        if closed_under_bracket(a, &m, mode) {
            count += 1;
        }
    }
    Ok(count)
}

/// Same count, with the diagonal-sequence partitions distributed over the
/// given number of threads round-robin. The partition sums are combined by
/// addition, so the result never depends on the schedule.
pub fn count_subalgebras_threaded(
    a: &LieAlgebraZ,
    p: i64,
    n: u32,
    mode: BracketMode,
    threads: usize,
) -> Result<u64> {
    require_prime(p)?;
    let comps = compositions(a.dim(), n);
    let threads = threads.clamp(1, comps.len().max(1));
    if threads == 1 {
        return count_subalgebras(a, p, n, mode);
    }
    let total = std::thread::scope(|scope| {
        let mut handles = Vec::with_capacity(threads);
        for t in 0..threads {
            let comps = &comps;
            handles.push(scope.spawn(move || {
                let mut local = 0u64;
                for comp in comps.iter().skip(t).step_by(threads) {
                    for m in CompositionMatrices::new(p, comp) {
                        if closed_under_bracket(a, &m, mode) {
                            local += 1;
                        }
                    }
                }
                local
            }));
        }
        handles
            .into_iter()
            .map(|h| h.join().expect("counting thread panicked"))
            .sum()
    });
    Ok(total)
}

/// The desk-scale budget this crate guarantees: d <= 3, n <= 4, p <= 5.
/// Larger requests still run; callers surface this warning.
pub fn budget_warning(d: usize, p: i64, n: u32) -> Option<String> {
    if d > 3 || n > 4 || p > 5 {
        Some(format!(
            "request (d = {d}, p = {p}, n = {n}) exceeds the tested budget d <= 3, n <= 4, p <= 5; \
             counting proceeds but may be slow"
        ))
    } else {
        None
    }
}

/// Arithmetic tables for a small finite field F_q, q = p^e with e <= 3.
/// Elements are encoded as integers in 0..q via base-p digit vectors over a
/// monic irreducible polynomial found by root exclusion (valid for e <= 3).
struct Fq {
    q: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
}

impl Fq {
    fn new(q: usize) -> Result<Self> {
        let (p, e) = match (2..=q as i64).find(|&p| {
            is_small_prime(p) && {
                let mut m = q as i64;
                while m % p == 0 {
                    m /= p;
                }
                m == 1
            }
        }) {
            Some(p) => {
                let mut e = 0;
                let mut m = q as i64;
                while m > 1 {
                    m /= p;
                    e += 1;
                }
                (p as usize, e)
            }
            None => return Err(Error::InvalidInput(format!("q = {q} is not a prime power"))),
        };
        if e > 3 {
            return Err(Error::InvalidInput(format!(
                "q = {q} needs an irreducibility test beyond degree 3"
            )));
        }
        let digits = |mut x: usize| -> Vec<usize> {
            (0..e)
                .map(|_| {
                    let d = x % p;
                    x /= p;
                    d
                })
                .collect()
        };
        let undigits = |v: &[usize]| -> usize { v.iter().rev().fold(0, |acc, &d| acc * p + d) };
        // monic irreducible of degree e: no roots in F_p (enough for e <= 3)
        let modulus: Vec<usize> = if e == 1 {
            vec![0]
        } else {
            let mut found = None;
            'search: for tail in 0..p.pow(e as u32) {
                let coeffs = digits(tail); // low-degree coefficients, leading 1 implicit
                for x in 0..p {
                    let mut val = 1usize; // x^e term
                    for c in coeffs.iter().rev() {
                        val = (val * x + c) % p;
                    }
                    if val == 0 {
                        continue 'search;
                    }
                }
                found = Some(coeffs);
                break;
            }
            found.expect("an irreducible polynomial exists over every F_p")
        };
        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        for a in 0..q {
            for b in 0..q {
                let (da, db) = (digits(a), digits(b));
                let sum: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = undigits(&sum) as u16;
                // polynomial product reduced modulo the irreducible
                let mut prod = vec![0usize; 2 * e - 1];
                for (i, &x) in da.iter().enumerate() {
                    for (j, &y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                for i in (e..2 * e - 1).rev() {
                    let c = prod[i];
                    if c == 0 {
                        continue;
                    }
                    prod[i] = 0;
                    // x^i = x^(i-e) * (-modulus tail)
                    for (k, &mc) in modulus.iter().enumerate() {
                        let idx = i - e + k;
                        prod[idx] = (prod[idx] + c * (p - mc % p)) % p;
                    }
                }
                mul[a * q + b] = undigits(&prod[..e]) as u16;
            }
        }
        let neg: Vec<u16> = (0..q)
            .map(|a| {
                (0..q)
                    .find(|&b| add[a * q + b] == 0)
                    .expect("additive inverse exists") as u16
            })
            .collect();
        Ok(Self { q, add, mul, neg })
    }

    fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.q + b] as usize
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.q + b] as usize
    }

    fn sub(&self, a: usize, b: usize) -> usize {
        self.add(a, self.neg[b] as usize)
    }
}

/// Number of F_q[[t]]-submodules of index q^n in the free module
/// (F_q[[t]])^2. Every such submodule contains t^n·(F_q[[t]])^2, so they
/// correspond to t-stable F_q-subspaces of dimension n in
/// (F_q[t]/t^n)^2 ≅ F_q^{2n}; these are enumerated as reduced echelon
/// bases and filtered by the t-stability check.
pub fn count_submodules_fqt(q: usize, n: u32) -> Result<u64> {
    if n == 0 {
        // the only index-1 submodule is the module itself
        Fq::new(q)?;
        return Ok(1);
    }
    let fq = Fq::new(q)?;
    let n = n as usize;
    let dim = 2 * n;
    // t shifts within each of the two blocks of coordinates and kills the top
    let shift = |v: &[usize]| -> Vec<usize> {
        let mut out = vec![0usize; dim];
        for block in 0..2 {
            for i in 0..n - 1 {
                out[block * n + i + 1] = v[block * n + i];
            }
        }
        out
    };

    let mut total = 0u64;
    let mut pivots: Vec<usize> = (0..n).collect();
    loop {
        // free slots: non-pivot columns to the right of each row's pivot
        let mut free = Vec::new();
        for (r, &pc) in pivots.iter().enumerate() {
            for c in (pc + 1)..dim {
                if !pivots.contains(&c) {
                    free.push((r, c));
                }
            }
        }
        let mut digits = vec![0usize; free.len()];
        loop {
            let mut rows = vec![vec![0usize; dim]; n];
            for (r, &pc) in pivots.iter().enumerate() {
                rows[r][pc] = 1;
            }
            for (slot, &(r, c)) in free.iter().enumerate() {
                rows[r][c] = digits[slot];
            }
            // t-stability: reduce the shift of each row against the basis
            let stable = rows.iter().all(|row| {
                let mut v = shift(row);
                for (r, &pc) in pivots.iter().enumerate() {
                    let c = v[pc];
                    if c != 0 {
                        for (x, &b) in v.iter_mut().zip(&rows[r]) {
                            *x = fq.sub(*x, fq.mul(c, b));
                        }
                    }
                }
                v.iter().all(|&x| x == 0)
            });
            if stable {
                total += 1;
            }
            let mut advanced = false;
            for slot in (0..digits.len()).rev() {
                if digits[slot] + 1 < q {
                    digits[slot] += 1;
                    advanced = true;
                    break;
                }
                digits[slot] = 0;
            }
            if !advanced {
                break;
            }
        }
        // next pivot-column combination in ascending order
        let mut k = n;
        while k > 0 {
            k -= 1;
            if pivots[k] + 1 <= dim - (n - k) {
                pivots[k] += 1;
                for i in k + 1..n {
                    pivots[i] = pivots[i - 1] + 1;
                }
                break;
            }
            if k == 0 {
                return Ok(total);
            }
        }
    }
}
