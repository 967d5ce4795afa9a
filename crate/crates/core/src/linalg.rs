//! Exact dense linear algebra over ℚ.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::rational::Rational;

pub type Matrix = Vec<Vec<Rational>>;

/// Inverse of a square rational matrix by fraction-free (Bareiss)
/// elimination followed by rational back substitution. `None` if singular.
pub fn inverse(a: &[Vec<Rational>]) -> Option<Matrix> {
    let n = a.len();
    if n == 0 {
        return Some(Vec::new());
    }
    // Clear denominators row by row: (S A) X = S with S diagonal.
    let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for (i, row) in a.iter().enumerate() {
        assert_eq!(row.len(), n, "matrix must be square");
        let lcm = row.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let mut ints: Vec<BigInt> = row.iter().map(|r| r.numer() * (&lcm / r.denom())).collect();
        ints.extend((0..n).map(|j| if j == i { lcm.clone() } else { BigInt::zero() }));
        m.push(ints);
    }
    let width = 2 * n;
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = (k..n).find(|&r| !m[r][k].is_zero())?;
        m.swap(k, pivot);
        for i in k + 1..n {
            for j in k + 1..width {
                let v = (&m[k][k] * &m[i][j] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    // Back substitution on the upper triangular integer system.
    let mut x: Matrix = alloc::vec![alloc::vec![Rational::zero(); n]; n];
    for col in 0..n {
        for i in (0..n).rev() {
            let mut acc = Rational::from_integer(m[i][n + col].clone());
            for j in i + 1..n {
                if !m[i][j].is_zero() {
                    acc -= Rational::from_integer(m[i][j].clone()) * &x[j][col];
                }
            }
            x[i][col] = acc / Rational::from_integer(m[i][i].clone());
        }
    }
    Some(x)
}

pub fn mul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Matrix {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, Vec::len);
    let mut out = alloc::vec![alloc::vec![Rational::zero(); m]; n];
    for i in 0..n {
        for (l, brow) in b.iter().enumerate().take(k) {
            if a[i][l].is_zero() {
                continue;
            }
            for j in 0..m {
                if !brow[j].is_zero() {
                    out[i][j] += &a[i][l] * &brow[j];
                }
            }
        }
    }
    out
}

/// Rank of a set of row vectors.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    echelon_basis(rows).len()
}

/// A row-echelon basis of the span of `rows`.
pub fn echelon_basis(rows: &[Vec<Rational>]) -> Matrix {
    let mut basis: Matrix = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for row in rows {
        let mut r = row.clone();
        for (b, &p) in basis.iter().zip(&pivots) {
            if !r[p].is_zero() {
                let f = &r[p] / &b[p];
                for (x, y) in r.iter_mut().zip(b) {
                    *x -= &f * y;
                }
            }
        }
        if let Some(p) = r.iter().position(|v| !v.is_zero()) {
            for b in basis.iter_mut() {
                if !b[p].is_zero() {
                    let f = &b[p] / &r[p];
                    for (x, y) in b.iter_mut().zip(&r) {
                        *x -= &f * y;
                    }
                }
            }
            basis.push(r);
            pivots.push(p);
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn identity(n: usize) -> Matrix {
        (0..n)
            .map(|i| (0..n).map(|j| if i == j { int(1) } else { int(0) }).collect())
            .collect()
    }

    #[test]
    fn inverse_needs_pivoting() {
        let a = alloc::vec![
            alloc::vec![int(0), rat(1, 2), int(1)],
            alloc::vec![int(2), int(0), rat(-1, 3)],
            alloc::vec![int(1), int(1), int(1)],
        ];
        let inv = inverse(&a).unwrap();
        assert_eq!(mul(&a, &inv), identity(3));
        assert_eq!(mul(&inv, &a), identity(3));
    }

    #[test]
    fn singular_is_detected() {
        let a = alloc::vec![alloc::vec![int(1), int(2)], alloc::vec![int(2), int(4)]];
        assert!(inverse(&a).is_none());
        assert_eq!(rank(&a), 1);
    }
}
