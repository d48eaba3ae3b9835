use std::any::Any;
use std::sync::Arc;

use super::avdc::{Avdc, AvdcExt, Instance};
use super::cell::CellVal;
use super::error::Result;
use super::frame::Frame;
use super::ids::{HorId, VertId};
use super::path::Path;
use super::skeleton::{Skeleton, SkeletonBuilder};

/// The horizontal dual: horizontal morphisms are reversed, cells keep their
/// data but their horizontal source order and their vertical boundary roles
/// swap. Ids of objects, verticals and horizontals are shared with the base,
/// so applying the construction twice gives the base back on the nose.
pub struct DualInstance {
    name: String,
    base: Instance,
    skel: Skeleton,
}

/// Builds K^co.
pub fn horizontal_dual(base: Instance) -> Result<Arc<DualInstance>> {
    let bs = base.skeleton();
    let mut b = SkeletonBuilder::new();
    for name in &bs.objects {
        b.add_object(name.clone());
    }
    for v in &bs.verts {
        b.add_vert(v.name.clone(), v.dom, v.cod);
    }
    for h in &bs.hors {
        b.add_hor(format!("co({})", h.name), h.tgt, h.src);
    }
    for (i, _) in bs.objects.iter().enumerate() {
        b.set_identity(super::ids::ObjId::from(i), bs.identities[i]);
    }
    for g in 0..bs.verts.len() {
        for f in 0..bs.verts.len() {
            let (g, f) = (VertId::from(g), VertId::from(f));
            if let Some(gf) = bs.compose_verts(g, f) {
                b.set_composite(g, f, gf);
            }
        }
    }
    let skel = b.finish()?;
    Ok(Arc::new(DualInstance { name: format!("co({})", base.name()), base, skel }))
}

impl DualInstance {
    pub fn base(&self) -> &Instance {
        &self.base
    }

    fn co_path(&self, p: &Path) -> Path {
        match p {
            Path::Empty(a) => Path::Empty(*a),
            Path::Edges(es) => {
                let mut es = es.clone();
                es.reverse();
                Path::Edges(es)
            }
        }
    }

    /// Frame translation between the dual and the base; an involution.
    pub fn co_frame(&self, fr: &Frame) -> Frame {
        Frame {
            f: fr.g,
            g: fr.f,
            src: self.co_path(&fr.src),
            tgt: self.co_path(&fr.tgt),
        }
    }

    pub fn co_cell(&self, c: &CellVal) -> CellVal {
        CellVal { frame: self.co_frame(&c.frame), datum: c.datum.clone() }
    }
}

impl Avdc for DualInstance {
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
        self.base
            .cells(&self.co_frame(frame))
            .into_iter()
            .map(|c| self.co_cell(&c))
            .collect()
    }

    fn cell_valid(&self, cell: &CellVal) -> bool {
        self.validate_frame(&cell.frame).is_ok() && self.base.cell_valid(&self.co_cell(cell))
    }

    fn compose(&self, bottom: &CellVal, tops: &[CellVal]) -> Result<CellVal> {
        let base_bottom = self.co_cell(bottom);
        let mut base_tops: Vec<CellVal> = tops.iter().map(|t| self.co_cell(t)).collect();
        base_tops.reverse();
        let res = self.base.compose(&base_bottom, &base_tops)?;
        Ok(self.co_cell(&res))
    }

    fn identity_hor(&self, j: HorId) -> CellVal {
        self.co_cell(&self.base.identity_hor(j))
    }

    fn identity_vert(&self, f: VertId) -> CellVal {
        self.co_cell(&self.base.identity_vert(f))
    }

    fn cells_per_frame_bound(&self, max_src_len: usize) -> u64 {
        self.base.cells_per_frame_bound(max_src_len)
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}
