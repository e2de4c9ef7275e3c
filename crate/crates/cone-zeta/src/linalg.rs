//! Small exact linear algebra over the integers and rationals: primitive
//! vectors, rank, solving inside a span, and diagonalization of an integer
//! row lattice with a tracked row transform.

use num::integer::Integer;
use num::rational::BigRational;
use num::{BigInt, One, Signed, Zero};

pub fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| num::integer::gcd(g, x.abs()))
}

/// Divide out the gcd of the entries, preserving orientation.
pub fn primitive(v: &[i64]) -> Vec<i64> {
    let g = gcd_all(v);
    if g <= 1 {
        return v.to_vec();
    }
    v.iter().map(|&x| x / g).collect()
}

/// Exact dot product with a wide accumulator.
pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    debug_assert_eq!(a.len(), b.len());
    let acc: i128 = a
        .iter()
        .zip(b)
        .map(|(&x, &y)| i128::from(x) * i128::from(y))
        .sum();
    i64::try_from(acc).expect("dot product exceeds i64")
}

fn to_rational_rows(rows: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    rows.iter()
        .map(|r| {
            r.iter()
                .map(|&x| BigRational::from(BigInt::from(x)))
                .collect()
        })
        .collect()
}

/// Rank over the rationals.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    let mut a = to_rational_rows(rows);
    let nrows = a.len();
    let ncols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        for i in 0..nrows {
            if i != r && !a[i][c].is_zero() {
                let f = &a[i][c] / &a[r][c];
                for j in c..ncols {
                    let s = &a[r][j] * &f;
                    a[i][j] -= s;
                }
            }
        }
        r += 1;
        if r == nrows {
            break;
        }
    }
    r
}

/// Coefficients `x` with `sum_j x[j] * cols[j] = target`, if `target` lies in
/// the span of the columns.  Free coefficients are set to zero.
pub fn solve_in_span(cols: &[Vec<i64>], target: &[BigRational]) -> Option<Vec<BigRational>> {
    let k = cols.len();
    let n = target.len();
    debug_assert!(cols.iter().all(|c| c.len() == n));
    // augmented rows of the n x (k+1) system
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = cols
                .iter()
                .map(|c| BigRational::from(BigInt::from(c[i])))
                .collect();
            row.push(target[i].clone());
            row
        })
        .collect();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; k];
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..n).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].clone().recip();
        for j in c..=k {
            a[r][j] *= &inv;
        }
        for i in 0..n {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..=k {
                    let s = &a[r][j] * &f;
                    a[i][j] -= s;
                }
            }
        }
        pivot_of_col[c] = Some(r);
        r += 1;
        if r == n {
            break;
        }
    }
    // consistency: a row with zero coefficients must have zero target
    for row in a.iter().skip(r) {
        if !row[k].is_zero() {
            return None;
        }
    }
    let mut x = vec![BigRational::zero(); k];
    for (c, p) in pivot_of_col.iter().enumerate() {
        if let Some(p) = p {
            x[c] = a[*p][k].clone();
        }
    }
    Some(x)
}

/// Diagonalization `U * M * V = diag(divisors)` of the row lattice of `M`
/// by unimodular transforms, with only the row transform `U` kept.
///
/// The divisors are positive and pair with the rows of `U`: the saturation
/// `span_R(M) ∩ Z^n` is generated, modulo the row lattice of `M`, by the
/// classes of `(U[i] / divisors[i]) * M`, of order `divisors[i]`.  The
/// divisors are not normalized into a divisibility chain; their product is
/// the index of the row lattice in its saturation, and the lattice is
/// saturated (primitive) exactly when every divisor is 1.
pub struct LatticeDiag {
    pub divisors: Vec<BigInt>,
    pub row_transform: Vec<Vec<BigInt>>,
}

impl LatticeDiag {
    pub fn index(&self) -> BigInt {
        self.divisors.iter().product()
    }

    pub fn is_unimodular_basis(&self, expected_rank: usize) -> bool {
        self.divisors.len() == expected_rank && self.divisors.iter().all(One::is_one)
    }
}

/// Rounded quotient minimizing the remainder's absolute value.
fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut q, r) = a.div_mod_floor(b);
    let doubled = &r + &r;
    if doubled.magnitude() > b.magnitude() {
        q += 1;
    }
    q
}

pub fn lattice_diagonalize(rows: &[Vec<i64>]) -> LatticeDiag {
    let k = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut u: Vec<Vec<BigInt>> = (0..k)
        .map(|i| (0..k).map(|j| BigInt::from(u8::from(i == j))).collect())
        .collect();
    let mut t = 0;
    while t < k.min(n) {
        // smallest nonzero entry of the trailing block becomes the pivot
        let mut pivot: Option<(usize, usize)> = None;
        for i in t..k {
            for j in t..n {
                if !a[i][j].is_zero()
                    && pivot.is_none_or(|(pi, pj)| a[i][j].magnitude() < a[pi][pj].magnitude())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        a.swap(t, pi);
        u.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut shrunk = false;
            for i in t + 1..k {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = div_round(&a[i][t], &a[t][t]);
                if !q.is_zero() {
                    for j in 0..n {
                        let s = &a[t][j] * &q;
                        a[i][j] -= s;
                    }
                    for j in 0..k {
                        let s = &u[t][j] * &q;
                        u[i][j] -= s;
                    }
                }
                if !a[i][t].is_zero() {
                    a.swap(t, i);
                    u.swap(t, i);
                    shrunk = true;
                }
            }
            if shrunk {
                continue;
            }
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = div_round(&a[t][j], &a[t][t]);
                if !q.is_zero() {
                    for row in a.iter_mut() {
                        let s = &row[t] * &q;
                        row[j] -= s;
                    }
                }
                if !a[t][j].is_zero() {
                    for row in a.iter_mut() {
                        row.swap(t, j);
                    }
                    shrunk = true;
                }
            }
            if !shrunk {
                break;
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
            for x in u[t].iter_mut() {
                *x = -&*x;
            }
        }
        t += 1;
    }
    LatticeDiag {
        divisors: (0..t).map(|i| a[i][i].clone()).collect(),
        row_transform: u,
    }
}

/// `true` when the rational number is an integer.
pub fn is_integer(x: &BigRational) -> bool {
    x.denom().is_one()
}

/// One nonzero rational vector in the kernel of the integer row system
/// (`rows * x = 0`), or `None` when the kernel is trivial.
pub fn kernel_vector(rows: &[Vec<i64>], dim: usize) -> Option<Vec<BigRational>> {
    let mut a = to_rational_rows(rows);
    let nrows = a.len();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for c in 0..dim {
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].clone().recip();
        for j in 0..dim {
            a[r][j] *= &inv;
        }
        for i in 0..nrows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..dim {
                    let s = &a[r][j] * &f;
                    a[i][j] -= s;
                }
            }
        }
        pivots.push((r, c));
        r += 1;
        if r == nrows {
            break;
        }
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let free = (0..dim).find(|c| !pivot_cols.contains(c))?;
    let mut x = vec![BigRational::zero(); dim];
    x[free] = BigRational::one();
    for &(pr, pc) in &pivots {
        x[pc] = -a[pr][free].clone();
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from(BigInt::from(n))
    }

    fn det(m: &[Vec<BigInt>]) -> BigInt {
        match m.len() {
            0 => BigInt::one(),
            1 => m[0][0].clone(),
            k => (0..k)
                .map(|j| {
                    let minor: Vec<Vec<BigInt>> = (1..k)
                        .map(|i| {
                            (0..k)
                                .filter(|&c| c != j)
                                .map(|c| m[i][c].clone())
                                .collect()
                        })
                        .collect();
                    let s = if j % 2 == 0 { 1 } else { -1 };
                    &m[0][j] * det(&minor) * BigInt::from(s)
                })
                .sum(),
        }
    }

    #[test]
    fn primitive_and_rank() {
        assert_eq!(primitive(&[-2, 4, -6]), vec![-1, 2, -3]);
        assert_eq!(primitive(&[0, 0]), vec![0, 0]);
        assert_eq!(rank(&[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 0]]), 2);
        assert_eq!(rank(&[vec![0, 0], vec![0, 0]]), 0);
    }

    #[test]
    fn span_solving() {
        let cols = vec![vec![1, 1, 0], vec![0, 1, 1]];
        let x = solve_in_span(&cols, &[q(1), q(2), q(1)]).unwrap();
        assert_eq!(x, vec![q(1), q(1)]);
        assert!(solve_in_span(&cols, &[q(1), q(0), q(0)]).is_none());
    }

    #[test]
    fn kernel_vectors() {
        // kernel of (1, 1, 1), (0, 1, 2) contains (1, -2, 1)
        let v = kernel_vector(&[vec![1, 1, 1], vec![0, 1, 2]], 3).unwrap();
        assert!(v.iter().any(|c| !c.is_zero()));
        assert!((&v[0] + &v[1] + &v[2]).is_zero());
        assert!((&v[1] + &v[2] + &v[2]).is_zero());
        assert!(kernel_vector(&[vec![1, 0], vec![0, 1]], 2).is_none());
        let e = kernel_vector(&[], 2).unwrap();
        assert!(!e.iter().all(Zero::is_zero));
    }

    #[test]
    fn diagonalization_divisors() {
        let d = lattice_diagonalize(&[vec![1, 0], vec![0, 1]]);
        assert!(d.is_unimodular_basis(2));
        let d = lattice_diagonalize(&[vec![2, 1], vec![1, 2]]);
        assert_eq!(d.index(), BigInt::from(3));
        let d = lattice_diagonalize(&[vec![2, 0], vec![0, 3]]);
        assert_eq!(d.index(), BigInt::from(6));
        assert!(!d.is_unimodular_basis(2));
    }

    #[test]
    fn row_transform_tracks_quotient_generators() {
        // rows (1,1), (1,-1) have index 2 in their saturation Z^2
        let rows = vec![vec![1, 1], vec![1, -1]];
        let d = lattice_diagonalize(&rows);
        assert_eq!(d.index(), BigInt::from(2));
        let ud = det(&d.row_transform);
        assert!(ud == BigInt::one() || ud == -BigInt::one());
        // (U[i] / d_i) * M must be an integer vector for every i
        for (i, div) in d.divisors.iter().enumerate() {
            for l in 0..2 {
                let s: BigInt = (0..2)
                    .map(|j| &d.row_transform[i][j] * BigInt::from(rows[j][l]))
                    .sum();
                assert!(
                    (&s % div).is_zero(),
                    "row {i} of the transform is not a quotient generator"
                );
            }
        }
    }
}
