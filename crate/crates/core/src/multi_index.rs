//! Multi-indices α ∈ ℕ₀ⁿ with length |α| and homogeneous degree [α].

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::rational::factorial;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        Self(entries)
    }

    pub fn zero(n: usize) -> Self {
        Self(vec![0; n])
    }

    pub fn unit(n: usize, j: usize) -> Self {
        let mut v = vec![0; n];
        v[j] = 1;
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, j: usize) -> u32 {
        self.0[j]
    }

    /// |α| = Σ α_j.
    pub fn length(&self) -> u32 {
        self.0.iter().sum()
    }

    /// [α] = Σ υ_j α_j.
    pub fn homogeneous_degree(&self, weights: &[u32]) -> u32 {
        debug_assert_eq!(weights.len(), self.0.len());
        self.0.iter().zip(weights).map(|(a, w)| a * w).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    /// α! = Π α_j!.
    pub fn factorial(&self) -> BigInt {
        self.0
            .iter()
            .fold(BigInt::one(), |acc, &a| acc * factorial(a))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Self)
    }

    pub fn with_incremented(&self, j: usize) -> Self {
        let mut v = self.0.clone();
        v[j] += 1;
        Self(v)
    }

    pub fn with_decremented(&self, j: usize) -> Option<Self> {
        let mut v = self.0.clone();
        v[j] = v[j].checked_sub(1)?;
        Some(Self(v))
    }

    /// Index of the first nonzero entry.
    pub fn first_nonzero(&self) -> Option<usize> {
        self.0.iter().position(|&a| a > 0)
    }

    /// Index of the last nonzero entry.
    pub fn last_nonzero(&self) -> Option<usize> {
        self.0.iter().rposition(|&a| a > 0)
    }

    /// The ordered word X₁^{α₁}···Xₙ^{αₙ} as a sequence of generator indices
    /// (leftmost generator first).
    pub fn word(&self) -> Vec<usize> {
        let mut w = Vec::with_capacity(self.length() as usize);
        for (j, &a) in self.0.iter().enumerate() {
            w.extend(core::iter::repeat(j).take(a as usize));
        }
        w
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

/// All α with [α] = `degree`, ordered lexicographically descending
/// (so x₁² precedes x₁x₂ precedes x₂²).
pub fn of_degree(weights: &[u32], degree: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut current = vec![0u32; weights.len()];
    fill(weights, 0, degree, &mut current, &mut out);
    out
}

fn fill(weights: &[u32], pos: usize, remaining: u32, current: &mut [u32], out: &mut Vec<MultiIndex>) {
    if pos == weights.len() {
        if remaining == 0 {
            out.push(MultiIndex(current.to_vec()));
        }
        return;
    }
    let w = weights[pos];
    let max = remaining / w;
    for a in (0..=max).rev() {
        current[pos] = a;
        fill(weights, pos + 1, remaining - a * w, current, out);
    }
    current[pos] = 0;
}

/// All α with [α] ≤ `max_degree`, graded by [α] then lexicographically
/// descending.
pub fn up_to_degree(weights: &[u32], max_degree: u32) -> Vec<MultiIndex> {
    (0..=max_degree).flat_map(|d| of_degree(weights, d)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heisenberg_degrees() {
        let w = [1, 1, 2];
        assert_eq!(MultiIndex::zero(3).homogeneous_degree(&w), 0);
        assert_eq!(MultiIndex::new(vec![0, 0, 1]).homogeneous_degree(&w), 2);
        assert_eq!(MultiIndex::new(vec![1, 1, 1]).homogeneous_degree(&w), 4);
    }

    #[test]
    fn enumeration_order_and_count() {
        let d2 = of_degree(&[1, 1, 2], 2);
        let got: Vec<_> = d2.iter().map(|a| a.entries().to_vec()).collect();
        assert_eq!(got, vec![vec![2, 0, 0], vec![1, 1, 0], vec![0, 2, 0], vec![0, 0, 1]]);
        // weights (1,1,1,1,2), degree 6: Σ_k C(6-2k+3, 3) = 84 + 35 + 10 + 1
        assert_eq!(of_degree(&[1, 1, 1, 1, 2], 6).len(), 130);
        assert_eq!(up_to_degree(&[1, 3], 3).len(), 5);
    }

    #[test]
    fn word_is_ordered() {
        assert_eq!(MultiIndex::new(vec![2, 0, 1]).word(), vec![0, 0, 2]);
    }
}
