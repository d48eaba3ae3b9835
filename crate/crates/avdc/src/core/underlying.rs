use std::any::Any;
use std::sync::Arc;

use super::avdc::{Avdc, AvdcExt, Instance};
use super::cell::CellVal;
use super::error::{AvdcError, Result};
use super::frame::Frame;
use super::ids::{HorId, VertId};
use super::skeleton::Skeleton;

/// The underlying virtual double category of an instance: same objects,
/// vertical and horizontal morphisms, but the only nullary cells kept are the
/// vertical identity cells. Unary cells and their composites are untouched.
pub struct UnderlyingVdc {
    name: String,
    base: Instance,
    skel: Skeleton,
}

pub fn underlying_vdc(base: Instance) -> Arc<UnderlyingVdc> {
    let skel = base.skeleton().clone();
    Arc::new(UnderlyingVdc { name: format!("U({})", base.name()), base, skel })
}

impl UnderlyingVdc {
    pub fn base(&self) -> &Instance {
        &self.base
    }
}

impl Avdc for UnderlyingVdc {
    fn name(&self) -> &str {
        &self.name
    }

    fn skeleton(&self) -> &Skeleton {
        &self.skel
    }

    fn cells(&self, frame: &Frame) -> Vec<CellVal> {
        if self.validate_frame(frame).is_err() {
            return Vec::new();
        }
        if frame.tgt.len() == 1 {
            return self.base.cells(frame);
        }
        // Nullary frames carry only vertical identities.
        if frame.src.is_empty() && frame.f == frame.g {
            vec![self.base.identity_vert(frame.f)]
        } else {
            Vec::new()
        }
    }

    fn cell_valid(&self, cell: &CellVal) -> bool {
        if self.validate_frame(&cell.frame).is_err() {
            return false;
        }
        if cell.frame.tgt.len() == 1 {
            return self.base.cell_valid(cell);
        }
        cell.frame.f == cell.frame.g
            && cell.frame.src.is_empty()
            && *cell == self.base.identity_vert(cell.frame.f)
    }

    fn compose(&self, bottom: &CellVal, tops: &[CellVal]) -> Result<CellVal> {
        if !self.cell_valid(bottom) {
            return Err(AvdcError::InvalidCell(format!(
                "bottom is not a cell of {}: {}",
                self.name,
                self.cell_name(bottom)
            )));
        }
        for t in tops {
            if !self.cell_valid(t) {
                return Err(AvdcError::InvalidCell(format!(
                    "top is not a cell of {}: {}",
                    self.name,
                    self.cell_name(t)
                )));
            }
        }
        // Composites of unary-and-identity cells stay unary-and-identity.
        self.base.compose(bottom, tops)
    }

    fn identity_hor(&self, j: HorId) -> CellVal {
        self.base.identity_hor(j)
    }

    fn identity_vert(&self, f: VertId) -> CellVal {
        self.base.identity_vert(f)
    }

    fn cells_per_frame_bound(&self, max_src_len: usize) -> u64 {
        self.base.cells_per_frame_bound(max_src_len)
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}
