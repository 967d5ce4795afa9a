//! Group references: catalog names or JSON/TOML spec files.
//!
//! A spec file carries `name`, `dim`, `weights` and `brackets`, each bracket
//! `{i, j, k, c}` meaning [X_i, X_j] += c X_k with 1-based indices and c a
//! rational string such as "1" or "-3/2".

use std::path::Path;

use serde::{Deserialize, Serialize};

use nilcalc_core::rational::{fmt_rational, parse_rational};
use nilcalc_core::{catalog, Bracket, GradedGroup, GradedLieAlgebraSpec};

use crate::error::{NumError, NumResult};

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct BracketFile {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub c: String,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SpecFile {
    pub name: String,
    pub dim: usize,
    pub weights: Vec<u32>,
    #[serde(default)]
    pub brackets: Vec<BracketFile>,
}

impl SpecFile {
    pub fn into_spec(self) -> NumResult<GradedLieAlgebraSpec> {
        let mut brackets = Vec::with_capacity(self.brackets.len());
        for b in &self.brackets {
            for (label, v) in [("i", b.i), ("j", b.j), ("k", b.k)] {
                if v == 0 || v > self.dim {
                    return Err(NumError::Config(format!(
                        "bracket index {label} = {v} out of range 1..={}",
                        self.dim
                    )));
                }
            }
            let c = parse_rational(&b.c).map_err(|e| NumError::Config(format!("bracket coefficient {:?}: {e}", b.c)))?;
            brackets.push(Bracket::new(b.i - 1, b.j - 1, b.k - 1, c));
        }
        Ok(GradedLieAlgebraSpec { name: self.name, dim: self.dim, weights: self.weights, brackets })
    }

    pub fn from_spec(spec: &GradedLieAlgebraSpec) -> Self {
        Self {
            name: spec.name.clone(),
            dim: spec.dim,
            weights: spec.weights.clone(),
            brackets: spec
                .brackets
                .iter()
                .map(|b| BracketFile { i: b.i + 1, j: b.j + 1, k: b.k + 1, c: fmt_rational(&b.coeff) })
                .collect(),
        }
    }
}

pub fn parse_json(text: &str) -> NumResult<GradedLieAlgebraSpec> {
    serde_json::from_str::<SpecFile>(text)
        .map_err(|e| NumError::Config(format!("spec file: {e}")))?
        .into_spec()
}

pub fn parse_toml(text: &str) -> NumResult<GradedLieAlgebraSpec> {
    toml::from_str::<SpecFile>(text)
        .map_err(|e| NumError::Config(format!("spec file: {e}")))?
        .into_spec()
}

pub fn load_spec_file(path: &Path) -> NumResult<GradedLieAlgebraSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| NumError::Config(format!("cannot read group spec {}: {e}", path.display())))?;
    match path.extension().and_then(|e| e.to_str()) {
        Some("toml") => parse_toml(&text),
        Some("json") => parse_json(&text),
        _ => parse_json(&text).or_else(|_| parse_toml(&text)),
    }
}

/// Catalog name (`abelian:<n>`, `heisenberg:<n>`, `engel`) or a file path.
pub fn resolve_spec(reference: &str) -> NumResult<GradedLieAlgebraSpec> {
    if let Some(r) = catalog::lookup(reference) {
        return r.map_err(|e| NumError::Config(e.to_string()));
    }
    let path = Path::new(reference);
    if !path.exists() {
        return Err(NumError::Config(format!(
            "unknown group {reference:?}: not a catalog name and no such file"
        )));
    }
    load_spec_file(path)
}

/// Resolves and validates a group reference.
pub fn resolve_group(reference: &str) -> NumResult<GradedGroup> {
    Ok(GradedGroup::new(resolve_spec(reference)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heisenberg_from_both_formats() {
        let json = r#"{"name":"h1","dim":3,"weights":[1,1,2],"brackets":[{"i":1,"j":2,"k":3,"c":"1"}]}"#;
        let toml = "name = \"h1\"\ndim = 3\nweights = [1, 1, 2]\n[[brackets]]\ni = 1\nj = 2\nk = 3\nc = \"1\"\n";
        let a = parse_json(json).unwrap();
        let b = parse_toml(toml).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.brackets, catalog::heisenberg_spec(1).brackets);
        let back = SpecFile::from_spec(&a);
        assert_eq!(back.brackets[0].i, 1);
    }

    #[test]
    fn bad_index_and_rational() {
        let j = r#"{"name":"x","dim":2,"weights":[1,1],"brackets":[{"i":0,"j":2,"k":1,"c":"1"}]}"#;
        assert!(matches!(parse_json(j), Err(NumError::Config(_))));
        let j = r#"{"name":"x","dim":2,"weights":[1,1],"brackets":[{"i":1,"j":2,"k":1,"c":"a/b"}]}"#;
        assert!(matches!(parse_json(j), Err(NumError::Config(_))));
        assert!(resolve_spec("/no/such/file.json").is_err());
    }
}
