use std::any::Any;
use std::collections::HashMap;
use std::sync::Arc;

use crate::core::{
    Avdc, AvdcError, AvdcExt, CellVal, Datum, Frame, HorId, ObjId, Path, Result, Skeleton,
    SkeletonBuilder, VertId,
};

use super::universe::FinSetUniverse;
use super::util::{all_tables, build_func_base, digits};

/// Relations of finite sets: objects are the universe's sets, vertical
/// morphisms are all functions between them, horizontal morphisms are all
/// subsets of the product, stored as 0/1 tables. The instance is locally
/// thin: a unary frame carries its single cell exactly when every related
/// chain along the source lands in the target relation, and a nullary frame
/// exactly when the two verticals agree on every related chain.
pub struct RelInstance {
    name: String,
    skel: Skeleton,
    sets: Vec<Vec<String>>,
    func_tables: Vec<Vec<u32>>,
    rel_tables: Vec<Vec<u32>>,
    vert_lookup: HashMap<(ObjId, ObjId, Vec<u32>), VertId>,
    hor_lookup: HashMap<(ObjId, ObjId, Vec<u32>), HorId>,
}

pub fn rel_finset(u: &FinSetUniverse) -> Result<Arc<RelInstance>> {
    let mut b = SkeletonBuilder::new();
    let base = build_func_base(&mut b, u);

    let mut rel_tables = Vec::new();
    let mut hor_lookup = HashMap::new();
    for s in 0..base.sets.len() {
        for t in 0..base.sets.len() {
            let (s, t) = (ObjId::from(s), ObjId::from(t));
            let cells = base.sets[s.idx()].len() * base.sets[t.idx()].len();
            for table in all_tables(cells, 2) {
                let name =
                    format!("{}#{}:{}", base.names[s.idx()], base.names[t.idx()], digits(&table));
                let h = b.add_hor(name, s, t);
                hor_lookup.insert((s, t, table.clone()), h);
                rel_tables.push(table);
            }
        }
    }

    let skel = b.finish()?;
    Ok(Arc::new(RelInstance {
        name: format!("rel({})", u.name),
        skel,
        sets: base.sets,
        func_tables: base.func_tables,
        rel_tables,
        vert_lookup: base.vert_lookup,
        hor_lookup,
    }))
}

impl RelInstance {
    pub fn set_elems(&self, a: ObjId) -> &[String] {
        &self.sets[a.idx()]
    }

    pub fn func_table(&self, f: VertId) -> &[u32] {
        &self.func_tables[f.idx()]
    }

    pub fn rel_table(&self, j: HorId) -> &[u32] {
        &self.rel_tables[j.idx()]
    }

    pub fn apply(&self, f: VertId, x: u32) -> u32 {
        self.func_tables[f.idx()][x as usize]
    }

    pub fn related(&self, j: HorId, x: u32, y: u32) -> bool {
        let cols = self.sets[self.hor_tgt(j).idx()].len();
        self.rel_tables[j.idx()][x as usize * cols + y as usize] == 1
    }

    pub fn vert_of_table(&self, d: ObjId, c: ObjId, table: Vec<u32>) -> Option<VertId> {
        self.vert_lookup.get(&(d, c, table)).copied()
    }

    pub fn hor_of_table(&self, s: ObjId, t: ObjId, table: Vec<u32>) -> Option<HorId> {
        self.hor_lookup.get(&(s, t, table)).copied()
    }

    /// The related pairs of a relation, lexicographically.
    pub fn pairs(&self, j: HorId) -> Vec<(u32, u32)> {
        let rows = self.sets[self.hor_src(j).idx()].len() as u32;
        let cols = self.sets[self.hor_tgt(j).idx()].len() as u32;
        let mut out = Vec::new();
        for x in 0..rows {
            for y in 0..cols {
                if self.related(j, x, y) {
                    out.push((x, y));
                }
            }
        }
        out
    }

    /// The relation containing exactly the given pairs.
    pub fn rel_of_pairs(&self, s: ObjId, t: ObjId, pairs: &[(u32, u32)]) -> HorId {
        let cols = self.sets[t.idx()].len();
        let mut table = vec![0u32; self.sets[s.idx()].len() * cols];
        for &(x, y) in pairs {
            table[x as usize * cols + y as usize] = 1;
        }
        self.hor_lookup[&(s, t, table)]
    }

    /// The diagonal relation on A, which is the horizontal unit.
    pub fn diagonal_rel(&self, a: ObjId) -> HorId {
        let n = self.sets[a.idx()].len() as u32;
        self.rel_of_pairs(a, a, &(0..n).map(|x| (x, x)).collect::<Vec<_>>())
    }

    /// The relational composite of a path: pairs joined by a related chain.
    pub fn compose_rels(&self, p: &Path) -> HorId {
        let (s, t) = (self.path_start(p), self.path_end(p));
        let pairs: Vec<(u32, u32)> = self
            .chains(p)
            .into_iter()
            .map(|c| (c[0], *c.last().unwrap()))
            .collect();
        self.rel_of_pairs(s, t, &pairs)
    }

    /// The restriction relation K(f, g): pairs whose images under f and g
    /// are related by K.
    pub fn restriction_rel(&self, k: HorId, f: VertId, g: VertId) -> HorId {
        let (a, b) = (self.vert_dom(f), self.vert_dom(g));
        let mut pairs = Vec::new();
        for x in 0..self.sets[a.idx()].len() as u32 {
            for y in 0..self.sets[b.idx()].len() as u32 {
                if self.related(k, self.apply(f, x), self.apply(g, y)) {
                    pairs.push((x, y));
                }
            }
        }
        self.rel_of_pairs(a, b, &pairs)
    }

    /// The graph of f: A -> C as a relation A # C, which is the companion.
    pub fn graph_rel(&self, f: VertId) -> HorId {
        let a = self.vert_dom(f);
        let pairs: Vec<(u32, u32)> = (0..self.sets[a.idx()].len() as u32)
            .map(|x| (x, self.apply(f, x)))
            .collect();
        self.rel_of_pairs(a, self.vert_cod(f), &pairs)
    }

    /// Chains x_0, ..., x_n with consecutive entries related along the path,
    /// lexicographically. An empty path at A gives the one-element chains.
    pub fn chains(&self, p: &Path) -> Vec<Vec<u32>> {
        match p {
            Path::Empty(a) => (0..self.sets[a.idx()].len() as u32).map(|x| vec![x]).collect(),
            Path::Edges(es) => {
                let start = self.sets[self.hor_src(es[0]).idx()].len() as u32;
                let mut chains: Vec<Vec<u32>> = (0..start).map(|x| vec![x]).collect();
                for &e in es {
                    let next = self.sets[self.hor_tgt(e).idx()].len() as u32;
                    let mut grown = Vec::new();
                    for c in chains {
                        let x = *c.last().unwrap();
                        for y in 0..next {
                            if self.related(e, x, y) {
                                let mut c2 = c.clone();
                                c2.push(y);
                                grown.push(c2);
                            }
                        }
                    }
                    chains = grown;
                }
                chains
            }
        }
    }

    fn unary_condition(&self, frame: &Frame) -> bool {
        let k = frame.tgt.edges()[0];
        self.chains(&frame.src).iter().all(|c| {
            self.related(k, self.apply(frame.f, c[0]), self.apply(frame.g, *c.last().unwrap()))
        })
    }

    fn nullary_condition(&self, frame: &Frame) -> bool {
        self.chains(&frame.src)
            .iter()
            .all(|c| self.apply(frame.f, c[0]) == self.apply(frame.g, *c.last().unwrap()))
    }
}

impl Avdc for RelInstance {
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
        let ok = if frame.tgt.len() == 1 {
            self.unary_condition(frame)
        } else {
            self.nullary_condition(frame)
        };
        if ok {
            vec![CellVal::thin(frame.clone())]
        } else {
            Vec::new()
        }
    }

    fn cell_valid(&self, cell: &CellVal) -> bool {
        cell.datum == Datum::Thin && !self.cells(&cell.frame).is_empty()
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
