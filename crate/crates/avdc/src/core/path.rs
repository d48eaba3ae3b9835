use serde::{Deserialize, Serialize};

use super::ids::{HorId, ObjId};

/// A horizontal path. The empty path must remember its basepoint: an empty
/// path at `A` and one at `B` are different boundaries.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Path {
    Empty(ObjId),
    Edges(Vec<HorId>),
}

impl Path {
    /// Normalising constructor: an empty edge list becomes `Empty(at)`.
    pub fn from_edges(at: ObjId, edges: Vec<HorId>) -> Path {
        if edges.is_empty() {
            Path::Empty(at)
        } else {
            Path::Edges(edges)
        }
    }

    pub fn single(edge: HorId) -> Path {
        Path::Edges(vec![edge])
    }

    pub fn edges(&self) -> &[HorId] {
        match self {
            Path::Empty(_) => &[],
            Path::Edges(es) => es,
        }
    }

    pub fn len(&self) -> usize {
        self.edges().len()
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Path::Empty(_))
    }
}
