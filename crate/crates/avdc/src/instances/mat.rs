use std::any::Any;
use std::collections::HashMap;
use std::sync::Arc;

use crate::core::{
    AvdcError, Avdc, AvdcExt, CellVal, Frame, HorId, ObjId, Path, Result, Skeleton,
    SkeletonBuilder, VertId,
};

use super::quantale::FinQuantale;
use super::universe::FinSetUniverse;
use super::util::{all_tables, build_func_base, digits, tuples};

/// Matrices over a finite quantale: objects are the universe's sets,
/// vertical morphisms are all functions between them, horizontal morphisms
/// are all matrices valued in the quantale. There is at most one cell per
/// frame: a unary frame carries a cell exactly when every tuple along the
/// source path satisfies the tensor inequality, and the only nullary cells
/// are vertical identities.
pub struct MatInstance {
    name: String,
    skel: Skeleton,
    q: FinQuantale,
    sets: Vec<Vec<String>>,
    func_tables: Vec<Vec<u32>>,
    mat_tables: Vec<Vec<u32>>,
    vert_lookup: HashMap<(ObjId, ObjId, Vec<u32>), VertId>,
    hor_lookup: HashMap<(ObjId, ObjId, Vec<u32>), HorId>,
}

pub fn mat_quantale(q: FinQuantale, u: &FinSetUniverse) -> Result<Arc<MatInstance>> {
    let mut b = SkeletonBuilder::new();
    let base = build_func_base(&mut b, u);

    let mut mat_tables = Vec::new();
    let mut hor_lookup = HashMap::new();
    for s in 0..base.sets.len() {
        for t in 0..base.sets.len() {
            let (s, t) = (ObjId::from(s), ObjId::from(t));
            let cells = base.sets[s.idx()].len() * base.sets[t.idx()].len();
            for table in all_tables(cells, q.n()) {
                let name =
                    format!("{}~{}:{}", base.names[s.idx()], base.names[t.idx()], digits(&table));
                let h = b.add_hor(name, s, t);
                hor_lookup.insert((s, t, table.clone()), h);
                mat_tables.push(table);
            }
        }
    }

    let skel = b.finish()?;
    Ok(Arc::new(MatInstance {
        name: format!("mat({}, {})", q.name, u.name),
        skel,
        q,
        sets: base.sets,
        func_tables: base.func_tables,
        mat_tables,
        vert_lookup: base.vert_lookup,
        hor_lookup,
    }))
}

impl MatInstance {
    pub fn quantale(&self) -> &FinQuantale {
        &self.q
    }

    pub fn set_elems(&self, a: ObjId) -> &[String] {
        &self.sets[a.idx()]
    }

    pub fn func_table(&self, f: VertId) -> &[u32] {
        &self.func_tables[f.idx()]
    }

    pub fn mat_table(&self, j: HorId) -> &[u32] {
        &self.mat_tables[j.idx()]
    }

    pub fn mat_entry(&self, j: HorId, x: u32, y: u32) -> u32 {
        let cols = self.sets[self.hor_tgt(j).idx()].len();
        self.mat_tables[j.idx()][x as usize * cols + y as usize]
    }

    pub fn vert_of_table(&self, d: ObjId, c: ObjId, table: Vec<u32>) -> Option<VertId> {
        self.vert_lookup.get(&(d, c, table)).copied()
    }

    pub fn hor_of_table(&self, s: ObjId, t: ObjId, table: Vec<u32>) -> Option<HorId> {
        self.hor_lookup.get(&(s, t, table)).copied()
    }

    pub fn apply(&self, f: VertId, x: u32) -> u32 {
        self.func_tables[f.idx()][x as usize]
    }

    /// Whether the thin cell condition holds for a unary frame: every tuple
    /// along the source path satisfies tensor ≤ target entry.
    fn unary_condition(&self, frame: &Frame) -> bool {
        let kk = frame.tgt.edges()[0];
        let objs = self.path_objects(&frame.src);
        let sizes: Vec<usize> = objs.iter().map(|a| self.sets[a.idx()].len()).collect();
        for tup in tuples(&sizes) {
            let prod = self.q.tensor_all(
                frame
                    .src
                    .edges()
                    .iter()
                    .enumerate()
                    .map(|(i, &j)| self.mat_entry(j, tup[i], tup[i + 1])),
            );
            let fx = self.apply(frame.f, tup[0]);
            let gy = self.apply(frame.g, *tup.last().unwrap());
            if !self.q.le(prod, self.mat_entry(kk, fx, gy)) {
                return false;
            }
        }
        true
    }

    /// The objects along a path, length = edges + 1 (or the basepoint once).
    fn path_objects(&self, p: &Path) -> Vec<ObjId> {
        match p {
            Path::Empty(a) => vec![*a],
            Path::Edges(es) => {
                let mut o = vec![self.hor_src(es[0])];
                for &e in es {
                    o.push(self.hor_tgt(e));
                }
                o
            }
        }
    }
}

impl Avdc for MatInstance {
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
        match frame.arity() {
            (_, 1) => {
                if self.unary_condition(frame) {
                    vec![CellVal::thin(frame.clone())]
                } else {
                    Vec::new()
                }
            }
            (0, 0) if frame.f == frame.g => vec![CellVal::thin(frame.clone())],
            _ => Vec::new(),
        }
    }

    fn cell_valid(&self, cell: &CellVal) -> bool {
        cell.datum == crate::core::Datum::Thin && !self.cells(&cell.frame).is_empty()
    }

    fn compose(&self, bottom: &CellVal, tops: &[CellVal]) -> Result<CellVal> {
        if !self.cell_valid(bottom) {
            return Err(AvdcError::InvalidCell(format!(
                "bottom is not a cell: {}",
                self.cell_name(bottom)
            )));
        }
        for t in tops {
            if !self.cell_valid(t) {
                return Err(AvdcError::InvalidCell(format!(
                    "top is not a cell: {}",
                    self.cell_name(t)
                )));
            }
        }
        let top_frames: Vec<&Frame> = tops.iter().map(|t| &t.frame).collect();
        let frame = crate::core::composite_frame(self, &bottom.frame, &top_frames)?;
        let result = CellVal::thin(frame);
        if !self.cell_valid(&result) {
            return Err(AvdcError::Internal(format!(
                "composite frame carries no cell: {}",
                self.frame_name(&result.frame)
            )));
        }
        Ok(result)
    }

    fn identity_hor(&self, j: HorId) -> CellVal {
        CellVal::thin(Frame {
            f: self.identity_of(self.hor_src(j)),
            g: self.identity_of(self.hor_tgt(j)),
            src: Path::single(j),
            tgt: Path::single(j),
        })
    }

    fn identity_vert(&self, f: VertId) -> CellVal {
        CellVal::thin(Frame {
            f,
            g: f,
            src: Path::Empty(self.vert_dom(f)),
            tgt: Path::Empty(self.vert_cod(f)),
        })
    }

    fn cells_per_frame_bound(&self, _max_src_len: usize) -> u64 {
        1
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}
