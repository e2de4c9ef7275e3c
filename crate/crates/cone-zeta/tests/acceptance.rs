//! Acceptance gate: one test per criterion. Every target value is entered
//! here independently (closed-form series via in-test long division, piece
//! tables and edge constants as literals) so a regression in the library's
//! own series or display code cannot mask a pipeline regression.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use num::{BigInt, BigRational, One, Signed, Zero};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use cone_zeta::cone::{decompose, decompose_with_order, extreme_rays, ConeSpec};
use cone_zeta::exact::{mr_equal, mr_series, mr_specialize, LaurentPoly, QPoly};
use cone_zeta::integral::{
    assemble_geom, cone_of, direct_eval, edge_constants, monomial_resolution, ConeIntegralData,
    ResolutionData, Stratum, ZetaPipeline,
};
use cone_zeta::io;
use cone_zeta::lie::{to_cone_data, BracketMode};
use cone_zeta::oracle::{count_subalgebras, count_submodules_fqt};
use cone_zeta::reference;
use cone_zeta::topological::{top_zeta_direct, top_zeta_limit};

const SEED: u64 = 0x00C0FFEE;

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

// ---- independent series oracle: polynomial long division over Q ----

type Poly = Vec<BigRational>;

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `1 - c*T^e`.
fn one_minus(c: BigRational, e: usize) -> Poly {
    let mut p = vec![BigRational::zero(); e + 1];
    p[0] = BigRational::one();
    p[e] = -c;
    p
}

/// Coefficients of `num/den` up to `T^order`.
fn series_quotient(num: &Poly, den: &Poly, order: usize) -> Poly {
    assert!(!den[0].is_zero());
    let mut rem = num.clone();
    rem.resize(order + den.len() + 1, BigRational::zero());
    let mut out = vec![BigRational::zero(); order + 1];
    for k in 0..=order {
        let c = &rem[k] / &den[0];
        for (j, d) in den.iter().enumerate() {
            let step = &c * d;
            rem[k + j] -= step;
        }
        out[k] = c;
    }
    out
}

/// Series of `prod_{i=0..d-1} (1 - p^i T)^-1`.
fn abelian_series(d: usize, p: i64, order: usize) -> Poly {
    let mut den = vec![BigRational::one()];
    for i in 0..d as u32 {
        den = poly_mul(&den, &one_minus(rat(p.pow(i)), 1));
    }
    series_quotient(&[BigRational::one()].to_vec(), &den, order)
}

/// Series of `(1 - p^3 T^3) / ((1 - T)(1 - pT)(1 - p^2 T^2)(1 - p^3 T^2))`.
fn heisenberg_series(p: i64, order: usize) -> Poly {
    let num = one_minus(rat(p.pow(3)), 3);
    let mut den = one_minus(rat(1), 1);
    den = poly_mul(&den, &one_minus(rat(p), 1));
    den = poly_mul(&den, &one_minus(rat(p.pow(2)), 2));
    den = poly_mul(&den, &one_minus(rat(p.pow(3)), 2));
    series_quotient(&num, &den, order)
}

/// Series of `(1 - p T^3) / ((1 - T)(1 - pT)(1 - p^2 T^2)(1 - p T^2))`;
/// counts subalgebras for odd p.
fn sl2_series(p: i64, order: usize) -> Poly {
    let num = one_minus(rat(p), 3);
    let mut den = one_minus(rat(1), 1);
    den = poly_mul(&den, &one_minus(rat(p), 1));
    den = poly_mul(&den, &one_minus(rat(p.pow(2)), 2));
    den = poly_mul(&den, &one_minus(rat(p), 2));
    series_quotient(&num, &den, order)
}

fn pipeline_for(name: &str, rank: usize) -> ZetaPipeline {
    let a = io::builtin_algebra(name).unwrap();
    let data = to_cone_data(&a, BracketMode::Subalgebra).unwrap();
    ZetaPipeline::from_monomial_data(data, Some(rank)).unwrap()
}

#[test]
fn criterion_1_abelian_closed_forms() {
    let start = Instant::now();
    let top_strings = [
        "1 / (s + 1)",
        "1 / ((s + 1) * (s + 2))",
        "1 / ((s + 1) * (s + 2) * (s + 3))",
    ];
    for d in 1..=3usize {
        let pipe = pipeline_for(&format!("abelian_{d}"), d);
        assert!(
            mr_equal(&pipe.counting().unwrap(), &reference::abelian_counting(d)),
            "P(T) does not match the closed form at d = {d}"
        );
        assert!(
            mr_equal(&pipe.geom(), &reference::abelian_geom(d)),
            "Z_geom does not match the closed form at d = {d}"
        );
        let top = top_zeta_direct(pipe.resolution(), pipe.decomposition(), pipe.edges()).unwrap();
        assert_eq!(top, reference::abelian_top(d), "Z_top mismatch at d = {d}");
        assert_eq!(
            top.to_string(),
            top_strings[d - 1],
            "Z_top display at d = {d}"
        );
    }
    assert!(
        start.elapsed().as_secs_f64() < 1.0,
        "criterion 1 exceeded its 1 s budget"
    );
}

#[test]
fn criterion_2_heisenberg_decomposition_and_closed_forms() {
    let start = Instant::now();
    let pipe = pipeline_for("heisenberg", 3);

    // (a) the twelve-piece table as a multiset of (|I_k|, |M_k|, class),
    // with the third edge generator (0,1,1)
    let mut got: Vec<(usize, usize, String)> = pipe
        .assembly()
        .pieces()
        .iter()
        .map(|p| {
            (
                p.support().len(),
                p.generators().len(),
                p.class().to_string(),
            )
        })
        .collect();
    got.sort();
    let mut want: Vec<(usize, usize, String)> = [
        (0, 0, "(L - 1)^3"),
        (1, 1, "(L - 1)^2"),
        (1, 1, "(L - 1)^2"),
        (2, 1, "L - 1"),
        (2, 1, "L - 1"),
        (2, 2, "L - 1"),
        (2, 2, "L - 1"),
        (2, 2, "L - 1"),
        (3, 2, "1"),
        (3, 2, "1"),
        (3, 3, "1"),
        (3, 3, "1"),
    ]
    .into_iter()
    .map(|(i, m, c)| (i, m, c.to_string()))
    .collect();
    want.sort();
    assert_eq!(got, want, "twelve-piece table mismatch");

    // (b) edge constants per generator, and as the bare constant set
    let got_edges: BTreeSet<(Vec<i64>, (i64, i64))> =
        pipe.edges().iter().map(|(e, ab)| (e.clone(), ab)).collect();
    let want_edges: BTreeSet<(Vec<i64>, (i64, i64))> = [
        (vec![0, 1, 0], (1, 2)),
        (vec![0, 1, 1], (2, 3)),
        (vec![1, 0, 0], (1, 3)),
        (vec![1, 0, 1], (2, 4)),
    ]
    .into_iter()
    .collect();
    assert_eq!(got_edges, want_edges, "edge constant mismatch");
    let constants: BTreeSet<(i64, i64)> = got_edges.iter().map(|(_, ab)| *ab).collect();
    let expected: BTreeSet<(i64, i64)> = [(2, 4), (1, 3), (2, 3), (1, 2)].into_iter().collect();
    assert_eq!(constants, expected);

    // (c) closed forms
    assert!(mr_equal(
        &pipe.counting().unwrap(),
        &reference::heisenberg_counting()
    ));
    assert!(mr_equal(&pipe.geom(), &reference::heisenberg_geom()));
    let top = top_zeta_direct(pipe.resolution(), pipe.decomposition(), pipe.edges()).unwrap();
    assert_eq!(top.to_string(), "3 / (2 * (s + 2) * (s + 3) * (2*s + 3))");
    assert_eq!(top, reference::heisenberg_top());

    assert!(
        start.elapsed().as_secs_f64() < 1.0,
        "criterion 2 exceeded its 1 s budget"
    );
}

#[test]
fn criterion_3_sl2_topological_zeta_and_oracle() {
    let start = Instant::now();
    let r = io::builtin_resolution("sl2").unwrap().unwrap();
    let pipe = ZetaPipeline::from_resolution(r, Some(3)).unwrap();
    let top = top_zeta_direct(pipe.resolution(), pipe.decomposition(), pipe.edges()).unwrap();
    assert_eq!(
        top.to_string(),
        "(3*s + 8) / (2 * (s + 2)^2 * (s + 3) * (2*s + 5))"
    );
    assert_eq!(top, reference::sl2_top());

    let a = io::builtin_algebra("sl2").unwrap();
    for p in [3i64, 5] {
        let series = sl2_series(p, 3);
        for n in 0..=3u32 {
            let count = count_subalgebras(&a, p, n, BracketMode::Subalgebra).unwrap();
            assert_eq!(
                rat(count as i64),
                series[n as usize],
                "sl2 subalgebra count disagrees with the series at p = {p}, n = {n}"
            );
        }
    }
    assert!(
        start.elapsed().as_secs() < 300,
        "criterion 3 exceeded its 5 min budget"
    );
}

#[test]
fn criterion_4_oracle_cross_checks() {
    for p in [2i64, 3, 5] {
        for d in 1..=3usize {
            let a = io::builtin_algebra(&format!("abelian_{d}")).unwrap();
            let series = abelian_series(d, p, 4);
            for n in 0..=4u32 {
                let count = count_subalgebras(&a, p, n, BracketMode::Subalgebra).unwrap();
                assert_eq!(
                    rat(count as i64),
                    series[n as usize],
                    "abelian_{d} count disagrees at p = {p}, n = {n}"
                );
            }
        }
        let h = io::builtin_algebra("heisenberg").unwrap();
        let series = heisenberg_series(p, 4);
        for n in 0..=4u32 {
            let count = count_subalgebras(&h, p, n, BracketMode::Subalgebra).unwrap();
            assert_eq!(
                rat(count as i64),
                series[n as usize],
                "heisenberg count disagrees at p = {p}, n = {n}"
            );
        }
    }
    for q in [2usize, 3, 4] {
        for n in 0..=3u32 {
            let want: u64 = (0..=n).map(|i| (q as u64).pow(i)).sum();
            assert_eq!(
                count_submodules_fqt(q, n).unwrap(),
                want,
                "submodule count over F_{q}[[t]] disagrees at n = {n}"
            );
        }
    }
}

// ---- criterion 5: property suites (fixed seed, >= 200 cases each) ----

/// k-subsets of 0..n in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + (i - 1) {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn det_i128(m: &[Vec<i128>]) -> i128 {
    match m.len() {
        0 => 1,
        1 => m[0][0],
        k => {
            let mut out = 0i128;
            for i in 0..k {
                if m[i][0] == 0 {
                    continue;
                }
                let sub: Vec<Vec<i128>> = m
                    .iter()
                    .enumerate()
                    .filter(|(r, _)| *r != i)
                    .map(|(_, row)| row[1..].to_vec())
                    .collect();
                let sign = if i % 2 == 0 { 1 } else { -1 };
                out += sign * m[i][0] * det_i128(&sub);
            }
            out
        }
    }
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Exact membership test for the relative interior of a simplicial cone:
/// solve `sum_j c_j g_j = x` over Q by row reduction and demand positive
/// integer coordinates. Independent of the crate's own membership solver.
fn in_open_piece(gens: &[Vec<i64>], x: &[i64]) -> bool {
    let k = gens.len();
    let t = x.len();
    if k == 0 {
        return x.iter().all(|&v| v == 0);
    }
    let mut m: Vec<Vec<BigRational>> = (0..t)
        .map(|r| {
            gens.iter()
                .map(|g| rat(g[r]))
                .chain(std::iter::once(rat(x[r])))
                .collect()
        })
        .collect();
    let mut pivot_row = 0usize;
    for col in 0..k {
        let Some(pr) = (pivot_row..t).find(|&r| !m[r][col].is_zero()) else {
            return false;
        };
        m.swap(pivot_row, pr);
        let inv = m[pivot_row][col].clone();
        for c in col..=k {
            m[pivot_row][c] = &m[pivot_row][c] / &inv;
        }
        for r in 0..t {
            if r != pivot_row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=k {
                    let step = &f * &m[pivot_row][c];
                    m[r][c] -= step;
                }
            }
        }
        pivot_row += 1;
    }
    for row in m.iter().skip(pivot_row) {
        if !row[k].is_zero() {
            return false;
        }
    }
    (0..k).all(|i| m[i][k].is_integer() && m[i][k].is_positive())
}

fn suite_cone_partition_and_unimodularity(rng: &mut StdRng) {
    for case in 0..200 {
        let t = rng.random_range(1..=4usize);
        let nrows = rng.random_range(0..=2usize);
        let rows: Vec<Vec<i64>> = (0..nrows)
            .map(|_| (0..t).map(|_| rng.random_range(-3..=3i64)).collect())
            .collect();
        let cone = ConeSpec::new(t, rows).unwrap();
        let dec = decompose(&cone).unwrap();

        let origins = dec.pieces().iter().filter(|p| p.is_origin()).count();
        assert_eq!(origins, 1, "case {case}: expected exactly one origin piece");

        for piece in dec.pieces() {
            let k = piece.generators().len();
            assert!(k <= t, "case {case}: piece dimension exceeds the ambient");
            if k == 0 {
                continue;
            }
            // unimodularity: the gcd of all maximal minors of the generator
            // matrix is 1, computed here by direct i128 cofactor expansion
            let mut g = 0i128;
            for cols in combinations(t, k) {
                let minor: Vec<Vec<i128>> = piece
                    .generators()
                    .iter()
                    .map(|row| cols.iter().map(|&c| i128::from(row[c])).collect())
                    .collect();
                g = gcd_i128(g, det_i128(&minor));
            }
            assert_eq!(
                g,
                1,
                "case {case}: piece {:?} is not unimodular",
                piece.generators()
            );
        }

        // partition: every sampled lattice point of the cone lies in exactly
        // one open piece; points outside the cone lie in none
        for _ in 0..40 {
            let x: Vec<i64> = (0..t).map(|_| rng.random_range(0..=6i64)).collect();
            if x.iter().all(|&v| v == 0) {
                continue;
            }
            let claims = dec
                .pieces()
                .iter()
                .filter(|p| !p.is_origin() && in_open_piece(p.generators(), &x))
                .count();
            let expected = usize::from(cone.contains(&x));
            assert_eq!(
                claims, expected,
                "case {case}: point {x:?} claimed by {claims} pieces"
            );
        }
    }
}

fn random_monomial_data(rng: &mut StdRng, max_m: usize, max_cond: usize) -> ConeIntegralData {
    let m = rng.random_range(1..=max_m);
    let variables = (1..=m).map(|i| format!("x{i}")).collect();
    // strictly positive f0 keeps every T-exponent positive, so series
    // expansions and exact truncation both apply
    let f0 = (0..m).map(|_| rng.random_range(1..=3u32)).collect();
    let g0 = (0..m).map(|_| rng.random_range(0..=3u32)).collect();
    let ncond = rng.random_range(0..=max_cond);
    let conditions = (0..ncond)
        .map(|_| {
            (
                (0..m).map(|_| rng.random_range(0..=3u32)).collect(),
                (0..m).map(|_| rng.random_range(0..=3u32)).collect(),
            )
        })
        .collect();
    ConeIntegralData::new(variables, f0, g0, conditions).unwrap()
}

fn suite_decomposition_invariance(rng: &mut StdRng) {
    let mut distinct_partitions = 0usize;
    for case in 0..200 {
        // exact-equality checking expands over the union of both partitions'
        // fraction factors, so keep the ambient dimension moderate
        let data = random_monomial_data(rng, 3, 1);
        let r = monomial_resolution(&data).unwrap();
        let cone = cone_of(&r).unwrap();
        let nrays = extreme_rays(&cone).len();
        let forward: Vec<usize> = (0..nrays).collect();
        let mut shuffled = forward.clone();
        shuffled.shuffle(rng);
        let d1 = decompose_with_order(&cone, &forward).unwrap();
        let d2 = decompose_with_order(&cone, &shuffled).unwrap();
        let g1 = assemble_geom(&r, &d1, &edge_constants(&r, &d1).unwrap()).unwrap();
        let g2 = assemble_geom(&r, &d2, &edge_constants(&r, &d2).unwrap()).unwrap();
        assert!(
            mr_equal(g1.value(), g2.value()),
            "case {case}: assembled sums differ across ray orders"
        );
        if d1.pieces() != d2.pieces() {
            distinct_partitions += 1;
        }
    }
    assert!(
        distinct_partitions > 0,
        "no case produced distinct partitions; the suite checked nothing"
    );
}

fn random_class(rng: &mut StdRng) -> LaurentPoly {
    let lm1 = &LaurentPoly::lefschetz() - &LaurentPoly::one();
    let mut class = lm1.pow(rng.random_range(0..=2u32));
    class = class.mul_monomial(rng.random_range(0..=2i64), &BigRational::one());
    if rng.random_range(0..3u32) == 0 {
        let lp1: LaurentPoly = "L + 1".parse().unwrap();
        class = &class * &lp1;
    }
    class
}

fn random_resolution(rng: &mut StdRng) -> ResolutionData {
    let t = rng.random_range(1..=3usize);
    let ncond = rng.random_range(0..=2usize);
    // first column is the integrand multiplicity N(f0): strictly positive
    // so every edge constant A is positive
    let nf: Vec<Vec<u32>> = (0..t)
        .map(|_| {
            let mut row = vec![rng.random_range(1..=3u32)];
            row.extend((0..ncond).map(|_| rng.random_range(0..=3u32)));
            row
        })
        .collect();
    let ng: Vec<Vec<u32>> = (0..t)
        .map(|_| (0..=ncond).map(|_| rng.random_range(0..=3u32)).collect())
        .collect();
    let nu: Vec<u32> = (0..t).map(|_| rng.random_range(1..=2u32)).collect();
    let ambient = rng.random_range(t..=t + 2);
    let mut strata = BTreeMap::new();
    for mask in 0u32..(1 << t) {
        let set: BTreeSet<usize> = (0..t).filter(|i| mask & (1 << i) != 0).collect();
        strata.insert(set, Stratum::from_poly(random_class(rng)));
    }
    ResolutionData::new(ambient, nf, ng, nu, strata).unwrap()
}

fn suite_limit_matches_direct(rng: &mut StdRng) {
    for case in 0..200 {
        let r = random_resolution(rng);
        let cone = cone_of(&r).unwrap();
        let dec = decompose(&cone).unwrap();
        let e = edge_constants(&r, &dec).unwrap();
        let g = assemble_geom(&r, &dec, &e).unwrap();
        let direct = top_zeta_direct(&r, &dec, &e).unwrap();
        let limit = top_zeta_limit(&g).unwrap();
        assert_eq!(
            direct, limit,
            "case {case}: L -> 1 limit differs from the direct formula"
        );
    }
}

fn suite_direct_eval_agreement(rng: &mut StdRng) {
    let order = 4usize;
    for case in 0..200 {
        let data = random_monomial_data(rng, 4, 2);
        let pipe = ZetaPipeline::from_monomial_data(data.clone(), None).unwrap();
        let symbolic = mr_series(pipe.geom_raw(), order).unwrap();
        for p in [2i64, 3] {
            let series: Vec<BigRational> =
                symbolic.iter().map(|c| c.eval(&rat(p)).unwrap()).collect();
            // with f0 >= 1 entrywise, every lattice point of T-degree <= order
            // has all coordinates <= order, so cap = order enumerates the
            // fibers exhaustively and the comparison is exact, not truncated
            let direct = direct_eval(&data, &rat(p), order, order as u32).unwrap();
            assert_eq!(
                series, direct,
                "case {case}: direct evaluation differs at p = {p}"
            );
        }
    }
}

#[test]
fn criterion_5_property_suites() {
    let mut rng = StdRng::seed_from_u64(SEED);
    suite_cone_partition_and_unimodularity(&mut rng);
    suite_decomposition_invariance(&mut rng);
    suite_limit_matches_direct(&mut rng);
    suite_direct_eval_agreement(&mut rng);
}

#[test]
fn criterion_6_rationality_is_structural() {
    // The general rationality statements are covered structurally: every
    // assembled output is a finite sum whose fraction factors are drawn
    // from the decomposition's edge constants, so any specialization is a
    // rational function whose denominator divides prod (1 - p^-B T^A).
    let mut rng = StdRng::seed_from_u64(SEED ^ 0x51);
    let mut pipelines = vec![
        pipeline_for("abelian_3", 3),
        pipeline_for("heisenberg", 3),
        ZetaPipeline::from_resolution(io::builtin_resolution("sl2").unwrap().unwrap(), Some(3))
            .unwrap(),
    ];
    for _ in 0..20 {
        let data = random_monomial_data(&mut rng, 3, 1);
        pipelines.push(ZetaPipeline::from_monomial_data(data, None).unwrap());
    }
    for pipe in &pipelines {
        let edge_keys: BTreeSet<(i64, i64)> = pipe.edges().iter().map(|(_, ab)| ab).collect();
        for term in pipe.geom_raw().terms() {
            for key in term.fractions().keys() {
                assert!(
                    edge_keys.contains(key),
                    "fraction factor {key:?} is not an edge constant"
                );
            }
        }
        if let Some(d) = pipe.rank() {
            let shifted: BTreeSet<(i64, i64)> = edge_keys
                .iter()
                .map(|&(a, b)| (a, b - a * d as i64))
                .collect();
            for term in pipe.counting().unwrap().terms() {
                for key in term.fractions().keys() {
                    assert!(
                        shifted.contains(key),
                        "counting factor {key:?} is not a shifted edge constant"
                    );
                }
            }
        }
        // a piece carrying the same constant on several generators yields a
        // repeated factor, so the bound needs per-key multiplicities
        let mut caps: BTreeMap<(i64, i64), u32> = BTreeMap::new();
        for piece in pipe.assembly().pieces() {
            let mut local: BTreeMap<(i64, i64), u32> = BTreeMap::new();
            for &ab in piece.constants() {
                *local.entry(ab).or_insert(0) += 1;
            }
            for (k, m) in local {
                let e = caps.entry(k).or_insert(0);
                *e = (*e).max(m);
            }
        }
        for p in [2i64, 3] {
            let value = mr_specialize(pipe.geom_raw(), &rat(p), &BTreeMap::new()).unwrap();
            let mut product = QPoly::one();
            for (&(a, b), &m) in &caps {
                let mut coeffs = vec![BigRational::zero(); a as usize + 1];
                coeffs[0] = BigRational::one();
                coeffs[a as usize] =
                    -BigRational::new(BigInt::one(), BigInt::from(p).pow(b as u32));
                let factor = QPoly::from_coeffs(coeffs);
                for _ in 0..m {
                    product = &product * &factor;
                }
            }
            let (_, rem) = product.div_rem(value.den());
            assert!(
                rem.is_zero(),
                "specialized denominator does not divide the edge-constant product"
            );
        }
    }
}
