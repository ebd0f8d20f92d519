//! Reference computations written independently of the library: direct
//! products over explicit strategy tables, exact elimination over `Ratio`,
//! and dense matrices through nalgebra.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use bellforge::{BellInequality, Rational, Scenario};
use nalgebra::{DMatrix, SymmetricEigen};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use rand::Rng;

pub type Q = Ratio<i64>;

/// Every ±1 assignment, `table[p][s]` for setting `s` (0-based) of party `p`.
pub fn all_tables(settings: &[usize]) -> Vec<Vec<Vec<i64>>> {
    let total: usize = settings.iter().sum();
    (0..1u64 << total)
        .map(|bits| {
            let mut k = 0;
            settings
                .iter()
                .map(|&m| {
                    (0..m)
                        .map(|_| {
                            let v = if bits >> k & 1 == 1 { -1 } else { 1 };
                            k += 1;
                            v
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// Setting tuples (0 = unmeasured) with every party measured.
pub fn full_tuples(settings: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &m in settings {
        out = out
            .into_iter()
            .flat_map(|t: Vec<usize>| {
                (1..=m).map(move |s| {
                    let mut t = t.clone();
                    t.push(s);
                    t
                })
            })
            .collect();
    }
    out
}

/// Setting tuples with at least one measured party.
pub fn all_tuples(settings: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &m in settings {
        out = out
            .into_iter()
            .flat_map(|t: Vec<usize>| {
                (0..=m).map(move |s| {
                    let mut t = t.clone();
                    t.push(s);
                    t
                })
            })
            .collect();
    }
    out.retain(|t| t.iter().any(|&s| s != 0));
    out
}

pub fn product(table: &[Vec<i64>], tuple: &[usize]) -> i64 {
    tuple
        .iter()
        .enumerate()
        .filter(|(_, &s)| s != 0)
        .map(|(p, &s)| table[p][s - 1])
        .product()
}

/// Distinct coordinate vectors over `tuples`.
pub fn distinct_points(settings: &[usize], tuples: &[Vec<usize>]) -> BTreeSet<Vec<i64>> {
    all_tables(settings)
        .iter()
        .map(|t| tuples.iter().map(|tu| product(t, tu)).collect())
        .collect()
}

/// `I(table)` computed straight from the term list.
pub fn value(ineq: &BellInequality, table: &[Vec<i64>]) -> Rational {
    ineq.terms()
        .iter()
        .map(|(t, c)| c * Rational::from_integer(BigInt::from(product(table, t))))
        .fold(Rational::zero(), |a, b| a + b)
}

pub fn brute_bounds(ineq: &BellInequality) -> (Rational, Rational) {
    let values: Vec<Rational> = all_tables(ineq.scenario().settings())
        .iter()
        .map(|t| value(ineq, t))
        .collect();
    (
        values.iter().min().unwrap().clone(),
        values.iter().max().unwrap().clone(),
    )
}

/// Row-reduces `m` in place and returns the pivot columns.
pub fn rref(m: &mut [Vec<Q>]) -> Vec<usize> {
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = Q::one() / m[row][col];
        for x in m[row].iter_mut() {
            *x *= inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col];
                for c in 0..cols {
                    let sub = f * m[row][c];
                    m[r][c] -= sub;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    pivots
}

pub fn rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|&x| Q::from(x)).collect()).collect();
    rref(&mut m).len()
}

/// One-dimensional null space of `m`, scaled to coprime integers, or `None`
/// when the null space has another dimension.
pub fn null_line(rows: &[Vec<i64>]) -> Option<Vec<i64>> {
    let cols = rows[0].len();
    let mut m: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|&x| Q::from(x)).collect()).collect();
    let pivots = rref(&mut m);
    if pivots.len() + 1 != cols {
        return None;
    }
    let free = (0..cols).find(|c| !pivots.contains(c)).unwrap();
    let mut v = vec![Q::zero(); cols];
    v[free] = Q::one();
    for (r, &p) in pivots.iter().enumerate() {
        v[p] = -m[r][free];
    }
    let lcm = v.iter().fold(1i64, |a, x| num_integer::lcm(a, *x.denom()));
    let ints: Vec<i64> = v.iter().map(|x| (x * Q::from(lcm)).to_integer()).collect();
    let g = ints.iter().fold(0i64, |a, &x| num_integer::gcd(a, x));
    Some(ints.iter().map(|x| x / g).collect())
}

/// All facets of the convex hull of `points` (full-dimensional in the affine
/// sense), as `(b, a)` with `b + a.x >= 0` valid and tight, found by trying
/// every `dim`-subset of points.
pub fn facets_by_subsets(points: &[Vec<i64>]) -> BTreeSet<Vec<i64>> {
    let dim = points[0].len();
    let n = points.len();
    let mut found = BTreeSet::new();
    let mut idx: Vec<usize> = (0..dim).collect();
    loop {
        let rows: Vec<Vec<i64>> = idx
            .iter()
            .map(|&i| std::iter::once(1).chain(points[i].iter().copied()).collect())
            .collect();
        if let Some(normal) = null_line(&rows) {
            let eval = |p: &Vec<i64>| normal[0] + normal[1..].iter().zip(p).map(|(a, x)| a * x).sum::<i64>();
            let values: Vec<i64> = points.iter().map(eval).collect();
            if values.iter().all(|&v| v >= 0) {
                found.insert(normal.clone());
            } else if values.iter().all(|&v| v <= 0) {
                found.insert(normal.iter().map(|x| -x).collect());
            }
        }
        // next combination
        let mut i = dim;
        loop {
            if i == 0 {
                return found;
            }
            i -= 1;
            if idx[i] != i + n - dim {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..dim {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Random integer-coefficient inequality over every tuple (constant
/// included), coefficients in `-range..=range`, shifted so that its local
/// minimum is zero.
pub fn random_ch_inequality<R: Rng>(rng: &mut R, settings: &[usize], range: i64, name: &str) -> BellInequality {
    loop {
        let mut terms: Vec<(Vec<usize>, Rational)> = Vec::new();
        let mut tuples = all_tuples(settings);
        tuples.push(vec![0; settings.len()]);
        for t in tuples {
            let c = rng.random_range(-range..=range);
            if c != 0 {
                terms.push((t, Rational::from_integer(BigInt::from(c))));
            }
        }
        let Ok(ineq) = BellInequality::new(name, Scenario::new(settings.to_vec()).unwrap(), terms, None, None) else {
            continue;
        };
        let (lo, hi) = brute_bounds(&ineq);
        if lo == hi {
            continue;
        }
        let mut shifted: BTreeMap<Vec<usize>, Rational> = ineq.terms().clone();
        *shifted.entry(vec![0; settings.len()]).or_insert_with(Rational::zero) -= &lo;
        return BellInequality::new(
            name,
            ineq.scenario().clone(),
            shifted,
            Some(Rational::zero()),
            Some(hi - lo),
        )
        .unwrap();
    }
}

pub fn is_nonnegative(r: &Rational) -> bool {
    !r.is_negative()
}

// ---- dense quantum oracle ----

pub type CMat = DMatrix<Complex64>;

pub fn pauli(i: usize) -> CMat {
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let z = c(0.0, 0.0);
    match i {
        0 => CMat::from_row_slice(2, 2, &[c(1.0, 0.0), z, z, c(1.0, 0.0)]),
        1 => CMat::from_row_slice(2, 2, &[z, c(1.0, 0.0), c(1.0, 0.0), z]),
        2 => CMat::from_row_slice(2, 2, &[z, c(0.0, -1.0), c(0.0, 1.0), z]),
        3 => CMat::from_row_slice(2, 2, &[c(1.0, 0.0), z, z, c(-1.0, 0.0)]),
        _ => unreachable!(),
    }
}

pub fn bloch_matrix(n: [f64; 3]) -> CMat {
    pauli(1) * Complex64::from(n[0]) + pauli(2) * Complex64::from(n[1]) + pauli(3) * Complex64::from(n[2])
}

/// `sum_t c_t (x)_p O_p(t_p)` with `obs[p][s - 1]` the Bloch vector of
/// setting `s`.
pub fn dense_operator(ineq: &BellInequality, obs: &[Vec<[f64; 3]>]) -> CMat {
    let n = ineq.scenario().parties();
    let dim = 1 << n;
    let mut out = CMat::zeros(dim, dim);
    for (t, c) in ineq.terms() {
        let mut m = CMat::identity(1, 1);
        for (p, &s) in t.iter().enumerate() {
            let local = if s == 0 { pauli(0) } else { bloch_matrix(obs[p][s - 1]) };
            m = m.kronecker(&local);
        }
        out += m * Complex64::from(bellforge::rational::to_f64(c));
    }
    out
}

pub fn expectation(op: &CMat, psi: &[Complex64]) -> f64 {
    let v = nalgebra::DVector::from_column_slice(psi);
    (v.adjoint() * op * &v)[(0, 0)].re
}

/// Largest eigenvalue of a real symmetric matrix.
pub fn max_eigenvalue_real(op: &CMat) -> f64 {
    let real = op.map(|z| z.re);
    assert!(op.iter().all(|z| z.im.abs() < 1e-12), "operator is not real");
    SymmetricEigen::new(real).eigenvalues.max()
}
