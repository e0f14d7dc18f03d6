//! Independent oracles shared by the integration tests. Nothing here calls
//! the library's reflection, group or matrix code.

#![allow(dead_code)]

use ybe_reflect::{FiniteSolution, MapOnX};

/// `r k₂ r k₂ = k₂ r k₂ r`, by composing the four maps pointwise.
pub fn oracle_is_reflection(sol: &FiniteSolution, k: &MapOnX) -> bool {
    let n = sol.n();
    let r = |(x, y): (usize, usize)| sol.apply(x, y);
    let k2 = |(x, y): (usize, usize)| (x, k.get(y));
    (0..n).all(|x| {
        (0..n).all(|y| {
            // maps compose right to left
            let lhs = r(k2(r(k2((x, y)))));
            let rhs = k2(r(k2(r((x, y)))));
            lhs == rhs
        })
    })
}

/// Every map `X → X` in lexicographic one-line order.
pub fn all_maps(n: usize) -> impl Iterator<Item = MapOnX> {
    let total = n.pow(n as u32);
    (0..total).map(move |mut code| {
        let mut images = vec![0; n];
        for slot in images.iter_mut().rev() {
            *slot = code % n;
            code /= n;
        }
        MapOnX::new(images).unwrap()
    })
}

/// Brute-force list of reflections as one-line strings.
pub fn oracle_reflections(sol: &FiniteSolution) -> Vec<String> {
    all_maps(sol.n())
        .filter(|k| oracle_is_reflection(sol, k))
        .map(|k| k.to_string())
        .collect()
}

pub fn strings(items: &[&str]) -> Vec<String> {
    let mut v: Vec<String> = items.iter().map(|s| s.to_string()).collect();
    v.sort();
    v
}

/// Index of `Σ cᵢ b^{i+1}` in `ℤ_p[b]/(bⁿ)`.
pub fn trunc_index(p: usize, coeffs: &[usize]) -> usize {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c % p)
}

/// Dense integer evaluation of `r` as a permutation matrix on `V ⊗ V`.
pub fn int_r(sol: &FiniteSolution) -> Vec<Vec<i64>> {
    let n = sol.n();
    let mut m = vec![vec![0; n * n]; n * n];
    for x in 0..n {
        for y in 0..n {
            let (a, b) = sol.apply(x, y);
            m[a * n + b][x * n + y] = 1;
        }
    }
    m
}

pub fn int_identity(d: usize) -> Vec<Vec<i64>> {
    (0..d).map(|i| (0..d).map(|j| (i == j) as i64).collect()).collect()
}

pub fn int_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let d = a.len();
    let mut out = vec![vec![0; d]; d];
    for i in 0..d {
        for k in 0..d {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..d {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn int_affine(base: &[Vec<i64>], t: i64) -> Vec<Vec<i64>> {
    let d = base.len();
    (0..d)
        .map(|i| (0..d).map(|j| (i == j) as i64 + t * base[i][j]).collect())
        .collect()
}

pub fn int_kron(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let (da, db) = (a.len(), b.len());
    let mut out = vec![vec![0; da * db]; da * db];
    for i1 in 0..da {
        for j1 in 0..da {
            for i2 in 0..db {
                for j2 in 0..db {
                    out[i1 * db + i2][j1 * db + j2] = a[i1][j1] * b[i2][j2];
                }
            }
        }
    }
    out
}

/// The parameter YBE evaluated at integer points `(u, v)`.
pub fn int_param_ybe_holds(sol: &FiniteSolution, u: i64, v: i64) -> bool {
    let r = int_r(sol);
    let id = int_identity(sol.n());
    let rf = |t: i64| int_affine(&r, t);
    let left = |t: i64| int_kron(&rf(t), &id);
    let right = |t: i64| int_kron(&id, &rf(t));
    let lhs = int_mul(&int_mul(&left(u), &right(u + v)), &left(v));
    let rhs = int_mul(&int_mul(&right(v), &left(u + v)), &right(u));
    lhs == rhs
}
