use serde::{Deserialize, Serialize};

use super::frame::Frame;

/// Instance-specific content of a cell. Equality of cells is equality of
/// frame and datum, so instances must pick one canonical datum per cell.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Datum {
    /// Locally thin instances: at most one cell per frame.
    Thin,
    /// A function table. Spans and profunctors use this: entry `i` is the
    /// value on the `i`-th element of the cell's source in the instance's
    /// canonical enumeration order.
    Table(Vec<u32>),
    /// A single generator index, e.g. a 2-cell of a finite 2-category.
    Atom(u32),
}

/// A cell value: a frame plus the instance-specific datum.
///
/// Wrapper instances (duals, unitalizations, `Mod`, representables) keep the
/// datum of the underlying cell unchanged and translate only the frame, so
/// cell equality is preserved along the wrapping.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct CellVal {
    pub frame: Frame,
    pub datum: Datum,
}

impl CellVal {
    pub fn new(frame: Frame, datum: Datum) -> Self {
        CellVal { frame, datum }
    }

    pub fn thin(frame: Frame) -> Self {
        CellVal { frame, datum: Datum::Thin }
    }
}
