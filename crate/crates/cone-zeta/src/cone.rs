//! Rational polyhedral cones inside the nonnegative orthant: extreme rays
//! by the double description method, pulling triangulation, subdivision
//! into unimodular simplicial cones, and the resulting partition of the
//! closed cone into relatively open pieces.

use num::rational::BigRational;
use num::{BigInt, Signed, Zero};
use std::collections::BTreeSet;

use crate::linalg;
use crate::{Error, Result};

/// A cone `{x >= 0 : <a, x> >= 0 for every inequality a}`.  The ambient
/// nonnegative orthant is implicit; `inequalities` holds only the extra
/// homogeneous constraints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeSpec {
    dim: usize,
    inequalities: Vec<Vec<i64>>,
}

impl ConeSpec {
    pub fn new(dim: usize, inequalities: Vec<Vec<i64>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput(
                "cone dimension must be positive".into(),
            ));
        }
        if let Some(row) = inequalities.iter().find(|r| r.len() != dim) {
            return Err(Error::InvalidInput(format!(
                "inequality {row:?} has length {} in dimension {dim}",
                row.len()
            )));
        }
        Ok(Self { dim, inequalities })
    }

    /// The full nonnegative orthant.
    pub fn orthant(dim: usize) -> Self {
        Self {
            dim,
            inequalities: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn inequalities(&self) -> &[Vec<i64>] {
        &self.inequalities
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        x.len() == self.dim
            && x.iter().all(|&c| c >= 0)
            && self.inequalities.iter().all(|a| linalg::dot(a, x) >= 0)
    }
}

/// Extreme rays as primitive integer vectors, in the deterministic order in
/// which the double description method discovers them (unit rays of the
/// orthant first, in coordinate order).
pub fn extreme_rays(cone: &ConeSpec) -> Vec<Vec<i64>> {
    let dim = cone.dim;
    // constraint list: orthant rows, then the extra inequalities
    let mut constraints: Vec<Vec<i64>> = (0..dim)
        .map(|i| (0..dim).map(|j| i64::from(i == j)).collect())
        .collect();
    constraints.extend(cone.inequalities.iter().cloned());

    let mut rays: Vec<Vec<i64>> = (0..dim)
        .map(|i| (0..dim).map(|j| i64::from(i == j)).collect())
        .collect();

    for step in dim..constraints.len() {
        let a = constraints[step].clone();
        let vals: Vec<i64> = rays.iter().map(|r| linalg::dot(&a, r)).collect();
        if vals.iter().all(|&v| v >= 0) {
            continue;
        }
        // tight sets over the constraints processed so far
        let tight: Vec<BTreeSet<usize>> = rays
            .iter()
            .map(|r| {
                (0..step)
                    .filter(|&c| linalg::dot(&constraints[c], r) == 0)
                    .collect()
            })
            .collect();
        let mut created: Vec<Vec<i64>> = Vec::new();
        for (ip, &vp) in vals.iter().enumerate() {
            if vp <= 0 {
                continue;
            }
            for (in_, &vn) in vals.iter().enumerate() {
                if vn >= 0 {
                    continue;
                }
                // combinatorial adjacency: no third ray is tight on the
                // common tight set of the pair
                let common: BTreeSet<usize> =
                    tight[ip].intersection(&tight[in_]).copied().collect();
                let blocked =
                    (0..rays.len()).any(|k| k != ip && k != in_ && common.is_subset(&tight[k]));
                if blocked {
                    continue;
                }
                let combo: Vec<i64> = rays[ip]
                    .iter()
                    .zip(&rays[in_])
                    .map(|(&p, &n)| {
                        i64::try_from(
                            i128::from(vp) * i128::from(n) - i128::from(vn) * i128::from(p),
                        )
                        .expect("ray combination exceeds i64")
                    })
                    .collect();
                let combo = linalg::primitive(&combo);
                if !created.contains(&combo) {
                    created.push(combo);
                }
            }
        }
        let mut next: Vec<Vec<i64>> = rays
            .iter()
            .zip(&vals)
            .filter(|&(_, &v)| v >= 0)
            .map(|(r, _)| r.clone())
            .collect();
        for c in created {
            if !next.contains(&c) {
                next.push(c);
            }
        }
        rays = next;
    }
    rays
}

/// A relatively open simplicial cone `{sum l_i g_i : l_i > 0}` on linearly
/// independent primitive generators, kept lexicographically sorted.  The
/// empty generator list is the origin.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Piece {
    generators: Vec<Vec<i64>>,
}

impl Piece {
    fn new(mut generators: Vec<Vec<i64>>) -> Self {
        generators.sort();
        Self { generators }
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn is_origin(&self) -> bool {
        self.generators.is_empty()
    }

    /// Union of the coordinate supports of the generators: the set of
    /// coordinates that are positive somewhere on the piece.
    pub fn support(&self) -> BTreeSet<usize> {
        let mut s = BTreeSet::new();
        for g in &self.generators {
            for (i, &c) in g.iter().enumerate() {
                if c != 0 {
                    s.insert(i);
                }
            }
        }
        s
    }
}

/// A partition of a closed cone into relatively open unimodular simplicial
/// pieces (the faces, of every dimension, of a conforming simplicial fan).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    ambient_dim: usize,
    pieces: Vec<Piece>,
}

impl Decomposition {
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Piece counts by dimension, `counts[d]` = number of `d`-dimensional
    /// pieces.
    pub fn counts_by_dim(&self) -> Vec<usize> {
        let top = self.pieces.iter().map(Piece::dim).max().unwrap_or(0);
        let mut counts = vec![0usize; top + 1];
        for p in &self.pieces {
            counts[p.dim()] += 1;
        }
        counts
    }
}

/// Pulling triangulation of `cone(rays)`: recursively pull the ray of
/// smallest priority and cone over the triangulated facets avoiding it.
/// Returns index sets into `rays`.
fn triangulate(all: &[Vec<i64>], subset: &[usize], priority: &[usize]) -> Result<Vec<Vec<usize>>> {
    let vecs: Vec<Vec<i64>> = subset.iter().map(|&i| all[i].clone()).collect();
    let d = linalg::rank(&vecs);
    if subset.len() == d {
        return Ok(vec![subset.to_vec()]);
    }
    let &pulled = subset
        .iter()
        .min_by_key(|&&i| (priority[i], i))
        .expect("nonempty subset");
    let mut out = Vec::new();
    for facet in facets(all, subset, d)? {
        if facet.contains(&pulled) {
            continue;
        }
        for mut simplex in triangulate(all, &facet, priority)? {
            simplex.push(pulled);
            simplex.sort_unstable();
            out.push(simplex);
        }
    }
    Ok(out)
}

/// Facets of `cone(subset)` as tight-ray index sets: supporting hyperplanes
/// within the span whose tight set has rank `d - 1`.
fn facets(all: &[Vec<i64>], subset: &[usize], d: usize) -> Result<Vec<Vec<usize>>> {
    let vecs: Vec<Vec<i64>> = subset.iter().map(|&i| all[i].clone()).collect();
    let ambient = vecs.first().map_or(0, Vec::len);
    // a basis of the span, taken greedily from the rays themselves
    let mut basis: Vec<Vec<i64>> = Vec::new();
    for v in &vecs {
        if basis.len() == d {
            break;
        }
        let mut trial = basis.clone();
        trial.push(v.clone());
        if linalg::rank(&trial) > basis.len() {
            basis = trial;
        }
    }
    debug_assert_eq!(basis.len(), d);

    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut out: Vec<Vec<usize>> = Vec::new();
    for combo in subsets_of_size(subset.len(), d - 1) {
        let chosen: Vec<Vec<i64>> = combo.iter().map(|&k| vecs[k].clone()).collect();
        if linalg::rank(&chosen) + 1 != d {
            continue;
        }
        // a normal within the span: y = c * basis with y orthogonal to the
        // chosen rays
        let system: Vec<Vec<i64>> = chosen
            .iter()
            .map(|v| basis.iter().map(|b| linalg::dot(v, b)).collect())
            .collect();
        let Some(c) = linalg::kernel_vector(&system, d) else {
            continue;
        };
        let y: Vec<BigRational> = (0..ambient)
            .map(|j| {
                c.iter()
                    .zip(&basis)
                    .map(|(ci, b)| ci * BigRational::from(BigInt::from(b[j])))
                    .sum()
            })
            .collect();
        let dots: Vec<BigRational> = vecs
            .iter()
            .map(|v| {
                v.iter()
                    .zip(&y)
                    .map(|(&vi, yj)| yj * BigRational::from(BigInt::from(vi)))
                    .sum()
            })
            .collect();
        let supporting_pos = dots.iter().all(|x| !x.is_negative());
        let supporting_neg = dots.iter().all(|x| !x.is_positive());
        if !supporting_pos && !supporting_neg {
            continue;
        }
        let tight: Vec<usize> = dots
            .iter()
            .enumerate()
            .filter(|(_, x)| x.is_zero())
            .map(|(k, _)| subset[k])
            .collect();
        let tight_vecs: Vec<Vec<i64>> = dots
            .iter()
            .enumerate()
            .filter(|(_, x)| x.is_zero())
            .map(|(k, _)| vecs[k].clone())
            .collect();
        if linalg::rank(&tight_vecs) != d - 1 {
            continue;
        }
        if seen.insert(tight.clone()) {
            out.push(tight);
        }
    }
    if out.is_empty() {
        return Err(Error::Internal(
            "cone has no facets; ray set may be degenerate".into(),
        ));
    }
    Ok(out)
}

fn subsets_of_size(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            rec(i + 1, n, k, current, out);
            current.pop();
        }
    }
    rec(0, n, k, &mut current, &mut out);
    out
}

/// Smallest nonzero lattice point of the half-open fundamental box of the
/// simplex, in generator coordinates; `None` when the simplex is already
/// unimodular.
fn box_witness(gens: &[Vec<i64>]) -> Result<Option<Vec<i64>>> {
    let k = gens.len();
    let diag = linalg::lattice_diagonalize(gens);
    if diag.divisors.len() != k {
        return Err(Error::Internal(
            "simplex generators are linearly dependent".into(),
        ));
    }
    if diag.is_unimodular_basis(k) {
        return Ok(None);
    }
    let index = diag.index();
    if index > BigInt::from(1_000_000u32) {
        return Err(Error::Internal(format!(
            "simplex index {index} too large for box enumeration"
        )));
    }
    let radices: Vec<i64> = diag
        .divisors
        .iter()
        .map(|d| i64::try_from(d.clone()).expect("divisor fits i64"))
        .collect();
    let mut counter = vec![0i64; k];
    let mut best: Option<(BigRational, Vec<BigRational>)> = None;
    'outer: loop {
        // advance the mixed-radix counter; the all-zero residue is skipped
        for i in 0..k {
            counter[i] += 1;
            if counter[i] < radices[i] {
                break;
            }
            counter[i] = 0;
            if i == k - 1 {
                break 'outer;
            }
        }
        // lambda = sum_i (c_i / d_i) * U_i, fractional parts
        let lambda: Vec<BigRational> = (0..k)
            .map(|j| {
                let s: BigRational = (0..k)
                    .map(|i| {
                        BigRational::new(
                            BigInt::from(counter[i]) * &diag.row_transform[i][j],
                            diag.divisors[i].clone(),
                        )
                    })
                    .sum();
                &s - s.floor()
            })
            .collect();
        if lambda.iter().all(Zero::is_zero) {
            continue;
        }
        let total: BigRational = lambda.iter().sum();
        let better = match &best {
            None => true,
            Some((t, l)) => (&total, &lambda) < (t, l),
        };
        if better {
            best = Some((total, lambda));
        }
    }
    let (_, lambda) = best.expect("non-unimodular simplex has a box point");
    let ambient = gens[0].len();
    let mut point: Vec<i64> = Vec::with_capacity(ambient);
    for l in 0..ambient {
        let x: BigRational = lambda
            .iter()
            .zip(gens)
            .map(|(lj, g)| lj * BigRational::from(BigInt::from(g[l])))
            .sum();
        if !linalg::is_integer(&x) {
            return Err(Error::Internal(format!(
                "box point coordinate {x} is not integral"
            )));
        }
        point.push(i64::try_from(x.to_integer()).expect("box point fits i64"));
    }
    debug_assert_eq!(linalg::primitive(&point), point);
    Ok(Some(point))
}

/// Star subdivision at box witnesses until every simplex is unimodular.
fn unimodularize(mut simplices: Vec<Vec<Vec<i64>>>) -> Result<Vec<Vec<Vec<i64>>>> {
    for s in &mut simplices {
        s.sort();
    }
    let mut rounds = 0;
    loop {
        rounds += 1;
        if rounds > 10_000 {
            return Err(Error::Internal(
                "unimodular subdivision did not converge".into(),
            ));
        }
        simplices.sort();
        simplices.dedup();
        let mut witness: Option<Vec<i64>> = None;
        for s in &simplices {
            if let Some(w) = box_witness(s)? {
                witness = Some(w);
                break;
            }
        }
        let Some(x) = witness else {
            return Ok(simplices);
        };
        let target: Vec<BigRational> = x
            .iter()
            .map(|&c| BigRational::from(BigInt::from(c)))
            .collect();
        let mut next: Vec<Vec<Vec<i64>>> = Vec::with_capacity(simplices.len() + 2);
        for s in simplices {
            let coords = linalg::solve_in_span(&s, &target);
            let inside = coords
                .as_ref()
                .is_some_and(|c| c.iter().all(|v| !v.is_negative()));
            if !inside {
                next.push(s);
                continue;
            }
            let coords = coords.unwrap();
            for (j, v) in coords.iter().enumerate() {
                if v.is_positive() {
                    let mut child: Vec<Vec<i64>> = s
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != j)
                        .map(|(_, g)| g.clone())
                        .collect();
                    child.push(x.clone());
                    child.sort();
                    next.push(child);
                }
            }
        }
        simplices = next;
    }
}

/// Decompose the cone into relatively open unimodular simplicial pieces
/// whose union is exactly the closed cone, using the default ray order.
pub fn decompose(cone: &ConeSpec) -> Result<Decomposition> {
    let rays = extreme_rays(cone);
    let priorities: Vec<usize> = (0..rays.len()).collect();
    decompose_rays(cone.dim, rays, &priorities)
}

/// Like [`decompose`], but pulling rays by the given priority permutation
/// (one entry per extreme ray, in discovery order).  Different priorities
/// give different, equally valid partitions of the same cone.
pub fn decompose_with_order(cone: &ConeSpec, priorities: &[usize]) -> Result<Decomposition> {
    let rays = extreme_rays(cone);
    if priorities.len() != rays.len() {
        return Err(Error::InvalidInput(format!(
            "{} priorities supplied for {} extreme rays",
            priorities.len(),
            rays.len()
        )));
    }
    let mut sorted: Vec<usize> = priorities.to_vec();
    sorted.sort_unstable();
    if sorted != (0..rays.len()).collect::<Vec<_>>() {
        return Err(Error::InvalidInput(
            "priorities must be a permutation of 0..rays".into(),
        ));
    }
    decompose_rays(cone.dim, rays, priorities)
}

fn decompose_rays(
    ambient_dim: usize,
    rays: Vec<Vec<i64>>,
    priorities: &[usize],
) -> Result<Decomposition> {
    let mut pieces: BTreeSet<Piece> = BTreeSet::new();
    pieces.insert(Piece::new(Vec::new()));
    if !rays.is_empty() {
        let indices: Vec<usize> = (0..rays.len()).collect();
        let maximal = triangulate(&rays, &indices, priorities)?;
        let simplices: Vec<Vec<Vec<i64>>> = maximal
            .into_iter()
            .map(|s| s.into_iter().map(|i| rays[i].clone()).collect())
            .collect();
        for simplex in unimodularize(simplices)? {
            // every subset of the generators spans a face of the fan
            let k = simplex.len();
            for mask in 1u32..(1 << k) {
                let face: Vec<Vec<i64>> = (0..k)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| simplex[i].clone())
                    .collect();
                pieces.insert(Piece::new(face));
            }
        }
    }
    let mut pieces: Vec<Piece> = pieces.into_iter().collect();
    pieces.sort_by(|a, b| (a.dim(), a.generators()).cmp(&(b.dim(), b.generators())));
    Ok(Decomposition {
        ambient_dim,
        pieces,
    })
}

/// Index of the unique piece whose relative interior contains the lattice
/// point, together with the (strictly positive) generator coordinates.
pub fn lattice_membership(
    decomp: &Decomposition,
    point: &[i64],
) -> Result<(usize, Vec<BigRational>)> {
    if point.len() != decomp.ambient_dim {
        return Err(Error::InvalidInput(format!(
            "point has dimension {}, cone has {}",
            point.len(),
            decomp.ambient_dim
        )));
    }
    let target: Vec<BigRational> = point
        .iter()
        .map(|&c| BigRational::from(BigInt::from(c)))
        .collect();
    for (idx, piece) in decomp.pieces.iter().enumerate() {
        if piece.is_origin() {
            if point.iter().all(|&c| c == 0) {
                return Ok((idx, Vec::new()));
            }
            continue;
        }
        if let Some(coords) = linalg::solve_in_span(piece.generators(), &target) {
            if coords.iter().all(Signed::is_positive) {
                return Ok((idx, coords));
            }
        }
    }
    Err(Error::OutsideCone(format!(
        "{point:?} lies in no piece of the decomposition"
    )))
}
