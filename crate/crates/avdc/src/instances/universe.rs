use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::core::{AvdcError, Result};

/// A finite collection of named finite sets with named elements; the ambient
/// world for matrix, span and relation instances.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FinSetUniverse {
    pub name: String,
    pub sets: Vec<(String, Vec<String>)>,
}

impl FinSetUniverse {
    pub fn new(name: impl Into<String>, sets: Vec<(String, Vec<String>)>) -> Result<Self> {
        let u = FinSetUniverse { name: name.into(), sets };
        let mut seen = HashSet::new();
        for (s, elems) in &u.sets {
            if !seen.insert(s.clone()) {
                return Err(AvdcError::Load(format!(
                    "universe {}: duplicate set name {s}",
                    u.name
                )));
            }
            let mut es = HashSet::new();
            for e in elems {
                if !es.insert(e.clone()) {
                    return Err(AvdcError::Load(format!(
                        "universe {}: duplicate element {e} in set {s}",
                        u.name
                    )));
                }
            }
        }
        Ok(u)
    }

    /// Sets named s0, s1, … with the given sizes and elements x0, x1, ….
    pub fn sized(name: impl Into<String>, sizes: &[usize]) -> Self {
        let sets = sizes
            .iter()
            .enumerate()
            .map(|(i, &n)| {
                (format!("s{i}"), (0..n).map(|j| format!("x{j}")).collect())
            })
            .collect();
        FinSetUniverse::new(name, sets).expect("generated names are distinct")
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn size(&self, i: usize) -> usize {
        self.sets[i].1.len()
    }

    pub fn set_name(&self, i: usize) -> &str {
        &self.sets[i].0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.sets.iter().position(|(n, _)| n == name)
    }
}
