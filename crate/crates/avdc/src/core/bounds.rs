use serde::{Deserialize, Serialize};

/// Search bounds. Every verdict produced under a bound is a statement about
/// configurations within that bound only.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Bounds {
    /// Maximum length of any horizontal source path that is enumerated.
    pub max_src_len: usize,
    /// Global step budget for one check. A step is one enumerated
    /// configuration (typically one candidate cell or one composite).
    pub budget: u64,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { max_src_len: 3, budget: 2_000_000 }
    }
}

impl Bounds {
    pub fn new(max_src_len: usize, budget: u64) -> Self {
        Bounds { max_src_len, budget }
    }

    pub fn meter(&self) -> Meter {
        Meter { left: self.budget, used: 0, exhausted: false }
    }
}

/// A step counter charged against a budget. Once exhausted, enumeration stops
/// and the surrounding check reports itself as incomplete.
#[derive(Clone, Debug)]
pub struct Meter {
    left: u64,
    pub used: u64,
    pub exhausted: bool,
}

impl Meter {
    pub fn with_budget(budget: u64) -> Meter {
        Meter { left: budget, used: 0, exhausted: false }
    }

    /// Charge one step. Returns false (and latches `exhausted`) once the
    /// budget is gone.
    pub fn tick(&mut self) -> bool {
        if self.left == 0 {
            self.exhausted = true;
            false
        } else {
            self.left -= 1;
            self.used += 1;
            true
        }
    }

    pub fn ok(&self) -> bool {
        !self.exhausted
    }
}
