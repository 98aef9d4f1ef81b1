//! Independent oracles and generators for the integration tests.
#![allow(dead_code)]

use discrete_homotopy::rips::IntMatrix;
use discrete_homotopy::{QuadRat, UniformModel};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Rank over the rationals by plain Gaussian elimination.
pub fn rational_rank(m: &IntMatrix) -> usize {
    let mut a: Vec<Vec<BigRational>> = (0..m.rows)
        .map(|i| (0..m.cols).map(|j| BigRational::from_integer(m.get(i, j).clone())).collect())
        .collect();
    let mut rank = 0;
    for col in 0..m.cols {
        let Some(p) = (rank..m.rows).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(rank, p);
        for r in 0..m.rows {
            if r != rank && !a[r][col].is_zero() {
                let f = &a[r][col] / &a[rank][col];
                for c in col..m.cols {
                    let v = &f * &a[rank][c];
                    a[r][c] -= v;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Determinant over the rationals.
pub fn determinant(m: &IntMatrix) -> BigRational {
    assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let mut a: Vec<Vec<BigRational>> =
        (0..n).map(|i| (0..n).map(|j| BigRational::from_integer(m.get(i, j).clone())).collect()).collect();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else { return BigRational::zero() };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        det *= a[col][col].clone();
        for r in col + 1..n {
            let f = &a[r][col] / &a[col][col];
            for c in col..n {
                let v = &f * &a[col][c];
                a[r][c] -= v;
            }
        }
    }
    det
}

pub fn is_unimodular(m: &IntMatrix) -> bool {
    let d = determinant(m);
    d.is_integer() && d.abs().is_one()
}

/// Is `z` in the rational column span of `m`?
pub fn in_column_span(m: &IntMatrix, z: &[BigInt]) -> bool {
    let mut aug = IntMatrix::zeros(m.rows, m.cols + 1);
    for i in 0..m.rows {
        for j in 0..m.cols {
            *aug.get_mut(i, j) = m.get(i, j).clone();
        }
        *aug.get_mut(i, m.cols) = z[i].clone();
    }
    rational_rank(&aug) == rational_rank(m)
}

pub fn int(v: i64) -> QuadRat {
    QuadRat::from_ints(v, 0, 3).unwrap()
}

/// 5 to 7 distinct grid points in the plane with a two-scale metric ladder;
/// the fine scale is the least threshold that keeps the points chain connected.
pub fn random_model(seed: u64) -> UniformModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(5..=7);
    let mut pts: Vec<(i64, i64)> = Vec::new();
    while pts.len() < n {
        let p = (rng.gen_range(0..5), rng.gen_range(0..5));
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    let d2 = |a: (i64, i64), b: (i64, i64)| (a.0 - b.0).pow(2) + (a.1 - b.1).pow(2);
    let mut vals: Vec<i64> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| d2(pts[i], pts[j])).collect();
    vals.sort_unstable();
    vals.dedup();
    let connected = |t: i64| {
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut stack = vec![0];
        while let Some(u) = stack.pop() {
            for v in 0..n {
                if !seen[v] && d2(pts[u], pts[v]) <= t {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.iter().all(|&s| s)
    };
    let fine = vals.iter().position(|&t| connected(t)).unwrap();
    let coarse = if fine + 1 < vals.len() { rng.gen_range(fine + 1..vals.len()) } else { fine };
    let points = pts.iter().enumerate().map(|(i, &(x, y))| (format!("p{i}"), [int(x), int(y), int(0)])).collect();
    let mut scales = vec![("coarse".to_string(), int(vals[coarse]))];
    if coarse != fine {
        scales.push(("fine".to_string(), int(vals[fine])));
    }
    UniformModel::from_euclidean(3, points, scales).unwrap()
}
