use std::any::Any;
use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use crate::core::{
    Avdc, AvdcError, AvdcExt, CellVal, Datum, Frame, HorId, ObjId, Path, Result, Skeleton,
    SkeletonBuilder, VertId,
};

use super::universe::FinSetUniverse;
use super::util::{all_tables, build_func_base, choices, digits};

/// A span between two universe sets: an apex size and two leg tables,
/// `left[s]` in the source set and `right[s]` in the target set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SpanLegs {
    pub apex: usize,
    pub left: Vec<u32>,
    pub right: Vec<u32>,
}

/// Spans of finite sets: objects are the universe's sets, vertical morphisms
/// are all functions between them, horizontal morphisms are all spans whose
/// apex size is drawn from a fixed pool. A unary cell is a function from the
/// wide pullback of its source path into the target apex commuting with the
/// frame's verticals; the wide pullback of an empty path is the basepoint
/// set itself. A nullary cell exists exactly when the two vertical legs
/// agree on every pullback tuple, and carries no data.
pub struct SpanInstance {
    name: String,
    skel: Skeleton,
    sets: Vec<Vec<String>>,
    apexes: Vec<usize>,
    func_tables: Vec<Vec<u32>>,
    spans: Vec<SpanLegs>,
    vert_lookup: HashMap<(ObjId, ObjId, Vec<u32>), VertId>,
    hor_lookup: HashMap<(ObjId, ObjId, SpanLegs), HorId>,
}

/// Spans over the universe with apexes ranging over the universe's own
/// set sizes.
pub fn span_finset(u: &FinSetUniverse) -> Result<Arc<SpanInstance>> {
    span_finset_with_apexes(u, &[])
}

/// Spans over the universe with apexes ranging over the universe's set
/// sizes together with the extra sizes given. Object sizes are always
/// included so that unit spans and companions exist.
pub fn span_finset_with_apexes(u: &FinSetUniverse, extra: &[usize]) -> Result<Arc<SpanInstance>> {
    let mut apexes: Vec<usize> = u.sets.iter().map(|(_, es)| es.len()).collect();
    apexes.extend_from_slice(extra);
    apexes.sort_unstable();
    apexes.dedup();

    let mut b = SkeletonBuilder::new();
    let base = build_func_base(&mut b, u);

    let mut spans = Vec::new();
    let mut hor_lookup = HashMap::new();
    for s in 0..base.sets.len() {
        for t in 0..base.sets.len() {
            let (s, t) = (ObjId::from(s), ObjId::from(t));
            for &apex in &apexes {
                for left in all_tables(apex, base.sets[s.idx()].len()) {
                    for right in all_tables(apex, base.sets[t.idx()].len()) {
                        let legs = SpanLegs { apex, left: left.clone(), right };
                        let name = format!(
                            "{}<{}:{}|{}>{}",
                            base.names[s.idx()],
                            apex,
                            digits(&legs.left),
                            digits(&legs.right),
                            base.names[t.idx()]
                        );
                        let h = b.add_hor(name, s, t);
                        hor_lookup.insert((s, t, legs.clone()), h);
                        spans.push(legs);
                    }
                }
            }
        }
    }

    let skel = b.finish()?;
    Ok(Arc::new(SpanInstance {
        name: format!("span({})", u.name),
        skel,
        sets: base.sets,
        apexes,
        func_tables: base.func_tables,
        spans,
        vert_lookup: base.vert_lookup,
        hor_lookup,
    }))
}

impl SpanInstance {
    pub fn set_elems(&self, a: ObjId) -> &[String] {
        &self.sets[a.idx()]
    }

    pub fn apex_sizes(&self) -> &[usize] {
        &self.apexes
    }

    pub fn func_table(&self, f: VertId) -> &[u32] {
        &self.func_tables[f.idx()]
    }

    pub fn span(&self, j: HorId) -> &SpanLegs {
        &self.spans[j.idx()]
    }

    pub fn apply(&self, f: VertId, x: u32) -> u32 {
        self.func_tables[f.idx()][x as usize]
    }

    pub fn vert_of_table(&self, d: ObjId, c: ObjId, table: Vec<u32>) -> Option<VertId> {
        self.vert_lookup.get(&(d, c, table)).copied()
    }

    pub fn hor_of_span(&self, s: ObjId, t: ObjId, legs: SpanLegs) -> Option<HorId> {
        self.hor_lookup.get(&(s, t, legs)).copied()
    }

    /// The unit span on A: identity legs on A itself.
    pub fn unit_span(&self, a: ObjId) -> HorId {
        let n = self.sets[a.idx()].len();
        let id: Vec<u32> = (0..n as u32).collect();
        self.hor_lookup[&(a, a, SpanLegs { apex: n, left: id.clone(), right: id })]
    }

    /// The companion span of f: A -> C, with identity left leg and f as
    /// right leg.
    pub fn companion_span(&self, f: VertId) -> HorId {
        let a = self.vert_dom(f);
        let id: Vec<u32> = (0..self.sets[a.idx()].len() as u32).collect();
        let legs = SpanLegs { apex: id.len(), left: id, right: self.func_tables[f.idx()].clone() };
        self.hor_lookup[&(a, self.vert_cod(f), legs)]
    }

    /// The conjoint span of f: A -> C, with f as left leg and identity
    /// right leg.
    pub fn conjoint_span(&self, f: VertId) -> HorId {
        let a = self.vert_dom(f);
        let id: Vec<u32> = (0..self.sets[a.idx()].len() as u32).collect();
        let legs = SpanLegs { apex: id.len(), left: self.func_tables[f.idx()].clone(), right: id };
        self.hor_lookup[&(self.vert_cod(f), a, legs)]
    }

    /// Whether the two legs of the span are jointly injective, which is the
    /// membership condition for the relation sub-instance.
    pub fn is_jointly_monic(&self, j: HorId) -> bool {
        let legs = &self.spans[j.idx()];
        let mut seen = HashSet::new();
        (0..legs.apex).all(|s| seen.insert((legs.left[s], legs.right[s])))
    }

    /// Tuples of the wide pullback along a path, one apex element per edge
    /// with adjacent legs matching, in lexicographic order. An empty path at
    /// A contributes the single-element tuples ranging over A.
    pub fn pullback_tuples(&self, p: &Path) -> Vec<Vec<u32>> {
        match p {
            Path::Empty(a) => {
                (0..self.sets[a.idx()].len() as u32).map(|x| vec![x]).collect()
            }
            Path::Edges(es) => {
                let mut out = Vec::new();
                let mut cur: Vec<u32> = Vec::with_capacity(es.len());
                self.pullback_dfs(es, &mut cur, &mut out);
                out
            }
        }
    }

    fn pullback_dfs(&self, es: &[HorId], cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == es.len() {
            out.push(cur.clone());
            return;
        }
        let legs = &self.spans[es[cur.len()].idx()];
        for s in 0..legs.apex as u32 {
            if let Some(&prev) = cur.last() {
                let prev_legs = &self.spans[es[cur.len() - 1].idx()];
                if prev_legs.right[prev as usize] != legs.left[s as usize] {
                    continue;
                }
            }
            cur.push(s);
            self.pullback_dfs(es, cur, out);
            cur.pop();
        }
    }

    /// Left boundary of a pullback tuple, an element of the path's start set.
    pub fn tuple_start(&self, p: &Path, tup: &[u32]) -> u32 {
        match p {
            Path::Empty(_) => tup[0],
            Path::Edges(es) => self.spans[es[0].idx()].left[tup[0] as usize],
        }
    }

    /// Right boundary of a pullback tuple, an element of the path's end set.
    pub fn tuple_end(&self, p: &Path, tup: &[u32]) -> u32 {
        match p {
            Path::Empty(_) => tup[0],
            Path::Edges(es) => {
                self.spans[es[es.len() - 1].idx()].right[*tup.last().unwrap() as usize]
            }
        }
    }

    /// The pullback span of a whole path: its tuples with the two boundary
    /// projections as legs. This is the composite the instance's cocartesian
    /// cells point at, when a horizontal with these legs exists.
    pub fn composite_span(&self, p: &Path) -> SpanLegs {
        let tuples = self.pullback_tuples(p);
        SpanLegs {
            apex: tuples.len(),
            left: tuples.iter().map(|t| self.tuple_start(p, t)).collect(),
            right: tuples.iter().map(|t| self.tuple_end(p, t)).collect(),
        }
    }

    /// Elements of the wide pullback of A -f-> C <-K-> D <-g- B as triples
    /// (a, s, b), lexicographically.
    pub fn restriction_tuples(&self, k: HorId, f: VertId, g: VertId) -> Vec<(u32, u32, u32)> {
        let legs = &self.spans[k.idx()];
        let fa = &self.func_tables[f.idx()];
        let gb = &self.func_tables[g.idx()];
        let mut out = Vec::new();
        for a in 0..fa.len() as u32 {
            for s in 0..legs.apex as u32 {
                if fa[a as usize] != legs.left[s as usize] {
                    continue;
                }
                for b in 0..gb.len() as u32 {
                    if legs.right[s as usize] == gb[b as usize] {
                        out.push((a, s, b));
                    }
                }
            }
        }
        out
    }

    /// Elements of the pullback of A -f-> C <-g- B as pairs (a, b).
    pub fn cospan_tuples(&self, f: VertId, g: VertId) -> Vec<(u32, u32)> {
        let fa = &self.func_tables[f.idx()];
        let gb = &self.func_tables[g.idx()];
        let mut out = Vec::new();
        for a in 0..fa.len() as u32 {
            for b in 0..gb.len() as u32 {
                if fa[a as usize] == gb[b as usize] {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Direct test for the universal property of restriction: the cell is
    /// cartesian exactly when the induced map from its source pullback to
    /// the wide pullback of its target under its verticals is a bijection.
    pub fn cartesian_oracle(&self, cell: &CellVal) -> Result<bool> {
        if !self.cell_valid(cell) {
            return Err(AvdcError::Precondition("oracle needs a valid cell".into()));
        }
        let tuples = self.pullback_tuples(&cell.frame.src);
        Ok(match (&cell.frame.tgt, &cell.datum) {
            (Path::Edges(es), Datum::Table(t)) => {
                let w = self.restriction_tuples(es[0], cell.frame.f, cell.frame.g);
                let images: HashSet<(u32, u32, u32)> = tuples
                    .iter()
                    .enumerate()
                    .map(|(i, tup)| {
                        (
                            self.tuple_start(&cell.frame.src, tup),
                            t[i],
                            self.tuple_end(&cell.frame.src, tup),
                        )
                    })
                    .collect();
                images.len() == tuples.len() && images.len() == w.len()
            }
            (Path::Empty(_), Datum::Thin) => {
                let w = self.cospan_tuples(cell.frame.f, cell.frame.g);
                let images: HashSet<(u32, u32)> = tuples
                    .iter()
                    .map(|tup| {
                        (
                            self.tuple_start(&cell.frame.src, tup),
                            self.tuple_end(&cell.frame.src, tup),
                        )
                    })
                    .collect();
                images.len() == tuples.len() && images.len() == w.len()
            }
            _ => false,
        })
    }

    /// Direct test for weak cocartesianness of a horizontal unary cell: it
    /// holds exactly when the underlying function from the source pullback
    /// to the target apex is a bijection.
    pub fn weakly_cocartesian_oracle(&self, cell: &CellVal) -> Result<bool> {
        if !self.cell_valid(cell) {
            return Err(AvdcError::Precondition("oracle needs a valid cell".into()));
        }
        if !self.is_horizontal_cell(cell) || cell.frame.tgt.len() != 1 {
            return Err(AvdcError::Precondition(
                "oracle applies to horizontal cells with a unary target".into(),
            ));
        }
        let table = match &cell.datum {
            Datum::Table(t) => t,
            _ => return Ok(false),
        };
        let apex = self.spans[cell.frame.tgt.edges()[0].idx()].apex;
        let distinct: HashSet<u32> = table.iter().copied().collect();
        Ok(table.len() == apex && distinct.len() == apex)
    }

    /// Allowed apex values per pullback tuple for a unary frame, from the
    /// requirement that the cell commutes with the frame's verticals.
    fn unary_choices(&self, frame: &Frame, tuples: &[Vec<u32>]) -> Vec<Vec<u32>> {
        let legs = &self.spans[frame.tgt.edges()[0].idx()];
        tuples
            .iter()
            .map(|tup| {
                let fa = self.apply(frame.f, self.tuple_start(&frame.src, tup));
                let gb = self.apply(frame.g, self.tuple_end(&frame.src, tup));
                (0..legs.apex as u32)
                    .filter(|&s| legs.left[s as usize] == fa && legs.right[s as usize] == gb)
                    .collect()
            })
            .collect()
    }

    fn nullary_condition(&self, frame: &Frame, tuples: &[Vec<u32>]) -> bool {
        tuples.iter().all(|tup| {
            self.apply(frame.f, self.tuple_start(&frame.src, tup))
                == self.apply(frame.g, self.tuple_end(&frame.src, tup))
        })
    }

    /// Evaluates the pasting of `tops` into a unary `bottom` on one pullback
    /// tuple of the concatenated source: each unary top maps its block of
    /// the tuple into the bottom's source pullback, nullary tops are skipped,
    /// and a bottom with empty source receives the boundary image instead.
    fn eval_tuple(
        &self,
        src: &Path,
        tup: &[u32],
        tops: &[CellVal],
        top_tuple_index: &[HashMap<Vec<u32>, usize>],
        bottom_src_empty: bool,
    ) -> Vec<u32> {
        if bottom_src_empty {
            return vec![self.apply(tops[0].frame.f, self.tuple_start(src, tup))];
        }
        let mut mid = Vec::new();
        let mut off = 0;
        for (i, top) in tops.iter().enumerate() {
            let n = top.frame.src.len();
            let block: Vec<u32> = if n == 0 {
                // An empty source block sits at the junction element, which
                // is the boundary of the neighbouring block or the whole
                // tuple's basepoint when every block is empty.
                let at = if off < tup.len() {
                    self.tuple_start_at(src, tup, off)
                } else {
                    self.tuple_end(src, tup)
                };
                vec![at]
            } else {
                tup[off..off + n].to_vec()
            };
            off += n;
            if top.frame.tgt.len() == 1 {
                let pos = top_tuple_index[i][&block];
                match &top.datum {
                    Datum::Table(t) => mid.push(t[pos]),
                    _ => unreachable!("unary span cells carry tables"),
                }
            }
        }
        mid
    }

    /// The left boundary element at edge position `off` of the path, or the
    /// tuple's end when `off` runs past the last edge.
    fn tuple_start_at(&self, p: &Path, tup: &[u32], off: usize) -> u32 {
        match p {
            Path::Empty(_) => tup[0],
            Path::Edges(es) => {
                if off < es.len() {
                    self.spans[es[off].idx()].left[tup[off] as usize]
                } else {
                    self.tuple_end(p, tup)
                }
            }
        }
    }
}

impl Avdc for SpanInstance {
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
        let tuples = self.pullback_tuples(&frame.src);
        if frame.tgt.len() == 1 {
            choices(&self.unary_choices(frame, &tuples))
                .into_iter()
                .map(|t| CellVal::new(frame.clone(), Datum::Table(t)))
                .collect()
        } else if self.nullary_condition(frame, &tuples) {
            vec![CellVal::thin(frame.clone())]
        } else {
            Vec::new()
        }
    }

    fn cell_valid(&self, cell: &CellVal) -> bool {
        if self.validate_frame(&cell.frame).is_err() {
            return false;
        }
        let tuples = self.pullback_tuples(&cell.frame.src);
        if cell.frame.tgt.len() == 1 {
            let table = match &cell.datum {
                Datum::Table(t) => t,
                _ => return false,
            };
            table.len() == tuples.len()
                && self
                    .unary_choices(&cell.frame, &tuples)
                    .iter()
                    .zip(table)
                    .all(|(allowed, v)| allowed.contains(v))
        } else {
            cell.datum == Datum::Thin && self.nullary_condition(&cell.frame, &tuples)
        }
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

        let result = if bottom.frame.tgt.len() == 0 {
            CellVal::thin(frame)
        } else {
            let top_tuple_index: Vec<HashMap<Vec<u32>, usize>> = tops
                .iter()
                .map(|t| {
                    self.pullback_tuples(&t.frame.src)
                        .into_iter()
                        .enumerate()
                        .map(|(i, tup)| (tup, i))
                        .collect()
                })
                .collect();
            let bottom_index: HashMap<Vec<u32>, usize> = self
                .pullback_tuples(&bottom.frame.src)
                .into_iter()
                .enumerate()
                .map(|(i, tup)| (tup, i))
                .collect();
            let bottom_table = match &bottom.datum {
                Datum::Table(t) => t,
                _ => {
                    return Err(AvdcError::InvalidCell("unary bottom without a table".into()));
                }
            };
            let src_empty = bottom.frame.src.is_empty();
            let table: Vec<u32> = self
                .pullback_tuples(&frame.src)
                .iter()
                .map(|tup| {
                    let mid = self.eval_tuple(&frame.src, tup, tops, &top_tuple_index, src_empty);
                    bottom_table[bottom_index[&mid]]
                })
                .collect();
            CellVal::new(frame, Datum::Table(table))
        };
        if !self.cell_valid(&result) {
            return Err(AvdcError::Internal(format!(
                "composite frame carries no cell: {}",
                self.frame_name(&result.frame)
            )));
        }
        Ok(result)
    }

    fn identity_hor(&self, j: HorId) -> CellVal {
        let apex = self.spans[j.idx()].apex;
        CellVal::new(
            Frame {
                f: self.identity_of(self.hor_src(j)),
                g: self.identity_of(self.hor_tgt(j)),
                src: Path::single(j),
                tgt: Path::single(j),
            },
            Datum::Table((0..apex as u32).collect()),
        )
    }

    fn identity_vert(&self, f: VertId) -> CellVal {
        CellVal::thin(Frame {
            f,
            g: f,
            src: Path::Empty(self.vert_dom(f)),
            tgt: Path::Empty(self.vert_cod(f)),
        })
    }

    fn cells_per_frame_bound(&self, max_src_len: usize) -> u64 {
        let apex = *self.apexes.iter().max().unwrap_or(&1) as u64;
        let set = self.sets.iter().map(|s| s.len()).max().unwrap_or(1) as u64;
        let pullback = apex.saturating_pow(max_src_len as u32).max(set);
        apex.max(1).saturating_pow(pullback.min(u32::MAX as u64) as u32)
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}
