use serde::{Deserialize, Serialize};

use super::ids::VertId;
use super::path::Path;

/// The boundary of a cell: vertical source `f`, vertical target `g`,
/// horizontal source path `src` and horizontal target path `tgt`.
///
/// Invariants (enforced by `AvdcExt::validate_frame`):
/// dom(f) = start(src), dom(g) = end(src), cod(f) = start(tgt),
/// cod(g) = end(tgt), and `tgt` has length at most one.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Frame {
    pub f: VertId,
    pub g: VertId,
    pub src: Path,
    pub tgt: Path,
}

impl Frame {
    /// (source length, target length); cells of arity (n,1) are unary, (n,0)
    /// nullary, (0,0) vertical.
    pub fn arity(&self) -> (usize, usize) {
        (self.src.len(), self.tgt.len())
    }
}
