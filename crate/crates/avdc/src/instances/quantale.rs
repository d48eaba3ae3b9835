use serde::{Deserialize, Serialize};

use crate::core::{AvdcError, Result};

/// A finite quantale: a finite complete lattice with a join-preserving
/// associative unital tensor. Finiteness makes completeness equivalent to
/// having a bottom and all binary joins, which is what `new` verifies.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FinQuantale {
    pub name: String,
    pub elems: Vec<String>,
    /// `leq[a][b]` iff a ≤ b.
    pub leq: Vec<Vec<bool>>,
    /// Row-major tensor table.
    pub tensor: Vec<Vec<u32>>,
    pub unit: u32,
    #[serde(skip)]
    joins: Vec<Vec<u32>>,
    #[serde(skip)]
    pub bottom: u32,
}

impl FinQuantale {
    pub fn new(
        name: impl Into<String>,
        elems: Vec<String>,
        leq: Vec<Vec<bool>>,
        tensor: Vec<Vec<u32>>,
        unit: u32,
    ) -> Result<FinQuantale> {
        let mut q = FinQuantale {
            name: name.into(),
            elems,
            leq,
            tensor,
            unit,
            joins: Vec::new(),
            bottom: 0,
        };
        q.validate()?;
        Ok(q)
    }

    /// Revalidates a deserialized value and recomputes the cached joins.
    pub fn revalidate(&mut self) -> Result<()> {
        self.validate()
    }

    fn validate(&mut self) -> Result<()> {
        let n = self.elems.len();
        let bad = |msg: String| AvdcError::Load(format!("quantale {}: {}", self.name, msg));
        if n == 0 {
            return Err(bad("needs at least one element".into()));
        }
        if self.leq.len() != n || self.leq.iter().any(|r| r.len() != n) {
            return Err(bad("order table must be square".into()));
        }
        if self.tensor.len() != n || self.tensor.iter().any(|r| r.len() != n) {
            return Err(bad("tensor table must be square".into()));
        }
        if self.tensor.iter().flatten().any(|&v| v as usize >= n) {
            return Err(bad("tensor entry out of range".into()));
        }
        if self.unit as usize >= n {
            return Err(bad("unit out of range".into()));
        }
        for a in 0..n {
            if !self.leq[a][a] {
                return Err(bad(format!("order not reflexive at {}", self.elems[a])));
            }
            for b in 0..n {
                if a != b && self.leq[a][b] && self.leq[b][a] {
                    return Err(bad(format!(
                        "order not antisymmetric on {}, {}",
                        self.elems[a], self.elems[b]
                    )));
                }
                for c in 0..n {
                    if self.leq[a][b] && self.leq[b][c] && !self.leq[a][c] {
                        return Err(bad("order not transitive".into()));
                    }
                }
            }
        }

        let mut bottom = None;
        for a in 0..n {
            if (0..n).all(|b| self.leq[a][b]) {
                bottom = Some(a as u32);
            }
        }
        let bottom = bottom.ok_or_else(|| bad("no bottom element".into()))?;

        let mut joins = vec![vec![0u32; n]; n];
        for a in 0..n {
            for b in 0..n {
                let uppers: Vec<usize> =
                    (0..n).filter(|&c| self.leq[a][c] && self.leq[b][c]).collect();
                let least = uppers
                    .iter()
                    .copied()
                    .find(|&c| uppers.iter().all(|&d| self.leq[c][d]));
                match least {
                    Some(c) => joins[a][b] = c as u32,
                    None => {
                        return Err(bad(format!(
                            "no join of {} and {}",
                            self.elems[a], self.elems[b]
                        )))
                    }
                }
            }
        }
        self.joins = joins;
        self.bottom = bottom;

        let t = |a: u32, b: u32| self.tensor[a as usize][b as usize];
        for a in 0..n as u32 {
            if t(self.unit, a) != a || t(a, self.unit) != a {
                return Err(bad(format!("unit law fails at {}", self.elems[a as usize])));
            }
            for b in 0..n as u32 {
                for c in 0..n as u32 {
                    if t(t(a, b), c) != t(a, t(b, c)) {
                        return Err(bad("tensor not associative".into()));
                    }
                    let join = self.joins[b as usize][c as usize];
                    if t(a, join) != self.joins[t(a, b) as usize][t(a, c) as usize] {
                        return Err(bad("tensor does not preserve joins on the right".into()));
                    }
                    if t(join, a) != self.joins[t(b, a) as usize][t(c, a) as usize] {
                        return Err(bad("tensor does not preserve joins on the left".into()));
                    }
                }
                if t(a, bottom) != bottom || t(bottom, a) != bottom {
                    return Err(bad("tensor does not preserve the empty join".into()));
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.elems.len()
    }

    pub fn le(&self, a: u32, b: u32) -> bool {
        self.leq[a as usize][b as usize]
    }

    pub fn t(&self, a: u32, b: u32) -> u32 {
        self.tensor[a as usize][b as usize]
    }

    pub fn unit(&self) -> u32 {
        self.unit
    }

    pub fn join(&self, a: u32, b: u32) -> u32 {
        self.joins[a as usize][b as usize]
    }

    pub fn sup(&self, xs: impl IntoIterator<Item = u32>) -> u32 {
        xs.into_iter().fold(self.bottom, |a, b| self.join(a, b))
    }

    /// Tensor over a sequence, from the left; empty sequence gives the unit.
    pub fn tensor_all(&self, xs: impl IntoIterator<Item = u32>) -> u32 {
        xs.into_iter().fold(self.unit, |a, b| self.t(a, b))
    }

    /// The two-element Boolean quantale: false < true, tensor = and,
    /// unit = true.
    pub fn bool2() -> FinQuantale {
        FinQuantale::new(
            "bool",
            vec!["false".into(), "true".into()],
            vec![vec![true, true], vec![false, true]],
            vec![vec![0, 0], vec![0, 1]],
            1,
        )
        .expect("the Boolean quantale is valid")
    }

    /// The n-element chain 0 < 1 < … < n-1 with minimum as tensor and the
    /// top as unit.
    pub fn chain(n: usize) -> FinQuantale {
        assert!(n >= 1);
        let elems = (0..n).map(|i| i.to_string()).collect();
        let leq = (0..n).map(|a| (0..n).map(|b| a <= b).collect()).collect();
        let tensor = (0..n)
            .map(|a| (0..n).map(|b| a.min(b) as u32).collect())
            .collect();
        FinQuantale::new(format!("chain{n}"), elems, leq, tensor, (n - 1) as u32)
            .expect("chains with min are valid quantales")
    }
}
