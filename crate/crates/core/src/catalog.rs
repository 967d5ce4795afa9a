//! Built-in groups: `abelian:<n>`, `heisenberg:<n>`, `engel`.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::lie::{Bracket, GradedLieAlgebraSpec};
use crate::rational::int;

/// ℝⁿ with unit weights and no brackets.
pub fn abelian_spec(n: usize) -> GradedLieAlgebraSpec {
    GradedLieAlgebraSpec {
        name: format!("abelian:{n}"),
        dim: n,
        weights: vec![1; n],
        brackets: Vec::new(),
    }
}

/// Hⁿ: weights (1,…,1,2), [X_i, X_{n+i}] = X_{2n+1}.
pub fn heisenberg_spec(n: usize) -> GradedLieAlgebraSpec {
    let dim = 2 * n + 1;
    let mut weights = vec![1; 2 * n];
    weights.push(2);
    let brackets = (0..n).map(|i| Bracket::new(i, n + i, 2 * n, int(1))).collect();
    GradedLieAlgebraSpec { name: format!("heisenberg:{n}"), dim, weights, brackets }
}

/// Engel algebra: weights (1,1,2,3), [X₁,X₂] = X₃, [X₁,X₃] = X₄.
pub fn engel_spec() -> GradedLieAlgebraSpec {
    GradedLieAlgebraSpec {
        name: String::from("engel"),
        dim: 4,
        weights: vec![1, 1, 2, 3],
        brackets: vec![Bracket::new(0, 1, 2, int(1)), Bracket::new(0, 2, 3, int(1))],
    }
}

/// Resolves a catalog reference; `None` if `name` is not of catalog form.
pub fn lookup(name: &str) -> Option<Result<GradedLieAlgebraSpec>> {
    let parse_n = |rest: &str| -> Result<usize> {
        match rest.parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(Error::Parse(format!("invalid size in group reference {name:?}"))),
        }
    };
    if name == "engel" {
        return Some(Ok(engel_spec()));
    }
    if let Some(rest) = name.strip_prefix("abelian:") {
        return Some(parse_n(rest).map(abelian_spec));
    }
    if let Some(rest) = name.strip_prefix("heisenberg:") {
        return Some(parse_n(rest).map(heisenberg_spec));
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookup_forms() {
        assert_eq!(lookup("heisenberg:2").unwrap().unwrap().dim, 5);
        assert_eq!(lookup("abelian:3").unwrap().unwrap().weights, vec![1, 1, 1]);
        assert_eq!(lookup("engel").unwrap().unwrap().weights, vec![1, 1, 2, 3]);
        assert!(lookup("heisenberg:x").unwrap().is_err());
        assert!(lookup("abelian:0").unwrap().is_err());
        assert!(lookup("foo.json").is_none());
    }
}
