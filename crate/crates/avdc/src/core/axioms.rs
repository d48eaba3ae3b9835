//! Bounded verification of the axioms of an augmented virtual double
//! category on a finitely presented instance.
//!
//! The axioms quantify over all pasting configurations; here every
//! configuration whose horizontal source paths fit within
//! `Bounds::max_src_len` is enumerated, subject to a step budget per axiom.
//! A passing line therefore means "no violation within the stated bounds".

use std::collections::HashMap;

use super::avdc::{Avdc, AvdcExt};
use super::bounds::{Bounds, Meter};
use super::cell::CellVal;
use super::frame::Frame;
use super::ids::{HorId, ObjId, VertId};
use super::ops::hcompose;
use super::path::Path;
use super::report::{Report, Status};

type Violation = String;

struct Ax<'k> {
    k: &'k dyn Avdc,
    max_src: usize,
    paths_by_start: Vec<Vec<Path>>,
}

/// How many cells a row may have beyond the edges it must cover; allows
/// nullary cells between, before and after the unary ones.
const EXTRA_ROW_CELLS: usize = 2;

/// Memory cap when a check has to materialize two-layer configurations.
const CONFIG_CAP: usize = 4000;

impl<'k> Ax<'k> {
    fn new(k: &'k dyn Avdc, max_src: usize) -> Self {
        let n = k.skeleton().object_count();
        let mut paths_by_start = Vec::with_capacity(n);
        for a in 0..n {
            paths_by_start.push(k.paths_from(ObjId::from(a), max_src));
        }
        Ax { k, max_src, paths_by_start }
    }

    /// All cells whose source length is within bounds, one frame at a time.
    fn for_each_cell(
        &self,
        m: &mut Meter,
        cb: &mut dyn FnMut(&CellVal, &mut Meter) -> Option<Violation>,
    ) -> Option<Violation> {
        let k = self.k;
        let skel = k.skeleton();
        for paths in &self.paths_by_start {
            for p in paths {
                let (s, e) = (k.path_start(p), k.path_end(p));
                for &f in skel.verts_out(s) {
                    for &g in skel.verts_out(e) {
                        for tgt in k.target_paths(k.vert_cod(f), k.vert_cod(g)) {
                            if !m.tick() {
                                return None;
                            }
                            let frame = Frame { f, g, src: p.clone(), tgt };
                            for cell in k.cells(&frame) {
                                if !m.tick() {
                                    return None;
                                }
                                if let Some(v) = cb(&cell, m) {
                                    return Some(v);
                                }
                            }
                        }
                    }
                }
            }
        }
        None
    }

    /// Cells with the exact target path `tgt`, vertical source `anchor` when
    /// given, and source length at most `max_src_here`.
    fn cells_constrained(
        &self,
        anchor: Option<VertId>,
        tgt: &Path,
        max_src_here: usize,
        m: &mut Meter,
    ) -> Vec<CellVal> {
        let k = self.k;
        let skel = k.skeleton();
        let ts = k.path_start(tgt);
        let te = k.path_end(tgt);
        let mut out = Vec::new();
        let mut visit = |f: VertId, p: &Path, m: &mut Meter| {
            for &g in skel.verts_between(k.path_end(p), te) {
                if !m.tick() {
                    return;
                }
                let frame = Frame { f, g, src: p.clone(), tgt: tgt.clone() };
                for cell in k.cells(&frame) {
                    if !m.tick() {
                        return;
                    }
                    out.push(cell);
                }
            }
        };
        match anchor {
            Some(v) => {
                if k.vert_cod(v) != ts {
                    return out;
                }
                for p in &self.paths_by_start[k.vert_dom(v).idx()] {
                    if p.len() > max_src_here {
                        continue;
                    }
                    visit(v, p, m);
                    if m.exhausted {
                        break;
                    }
                }
            }
            None => {
                'outer: for paths in &self.paths_by_start {
                    for p in paths {
                        if p.len() > max_src_here {
                            continue;
                        }
                        for &f in skel.verts_between(k.path_start(p), ts) {
                            visit(f, p, m);
                            if m.exhausted {
                                break 'outer;
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Enumerates nonempty rows of cells whose targets concatenate to exactly
    /// the path given by `edges` (based at `base` when empty). `anchor`
    /// constrains the vertical source of the first cell.
    #[allow(clippy::too_many_arguments)]
    fn rows_dfs(
        &self,
        edges: &[HorId],
        base: ObjId,
        pos: usize,
        anchor: Option<VertId>,
        src_left: usize,
        max_row: usize,
        row: &mut Vec<CellVal>,
        m: &mut Meter,
        cb: &mut dyn FnMut(&[CellVal], &mut Meter) -> Option<Violation>,
    ) -> Option<Violation> {
        if pos == edges.len() && !row.is_empty() {
            if let Some(v) = cb(row, m) {
                return Some(v);
            }
        }
        if row.len() >= max_row || m.exhausted {
            return None;
        }
        let at = if edges.is_empty() {
            base
        } else if pos == edges.len() {
            self.k.hor_tgt(edges[pos - 1])
        } else {
            self.k.hor_src(edges[pos])
        };
        let next_anchor = row.last().map(|c| c.frame.g).or(anchor);

        for cell in self.cells_constrained(next_anchor, &Path::Empty(at), src_left, m) {
            let used = cell.frame.src.len();
            row.push(cell);
            let v = self.rows_dfs(
                edges,
                base,
                pos,
                anchor,
                src_left - used,
                max_row,
                row,
                m,
                cb,
            );
            row.pop();
            if v.is_some() {
                return v;
            }
        }
        if pos < edges.len() {
            let tgt = Path::single(edges[pos]);
            for cell in self.cells_constrained(next_anchor, &tgt, src_left, m) {
                let used = cell.frame.src.len();
                row.push(cell);
                let v = self.rows_dfs(
                    edges,
                    base,
                    pos + 1,
                    anchor,
                    src_left - used,
                    max_row,
                    row,
                    m,
                    cb,
                );
                row.pop();
                if v.is_some() {
                    return v;
                }
            }
        }
        None
    }

    /// Enumerates pairs (bottom, top row) forming a composable two-layer
    /// configuration within bounds.
    fn for_each_two_layer(
        &self,
        m: &mut Meter,
        cb: &mut dyn FnMut(&CellVal, &[CellVal], &mut Meter) -> Option<Violation>,
    ) -> Option<Violation> {
        let k = self.k;
        let skel = k.skeleton();
        for paths in &self.paths_by_start {
            for p in paths {
                let (s, e) = (k.path_start(p), k.path_end(p));
                for &f in skel.verts_out(s) {
                    for &g in skel.verts_out(e) {
                        for tgt in k.target_paths(k.vert_cod(f), k.vert_cod(g)) {
                            if !m.tick() {
                                return None;
                            }
                            let frame = Frame { f, g, src: p.clone(), tgt };
                            for bottom in k.cells(&frame) {
                                if !m.tick() {
                                    return None;
                                }
                                let edges = bottom.frame.src.edges().to_vec();
                                let base = k.path_start(&bottom.frame.src);
                                let max_row = edges.len() + EXTRA_ROW_CELLS;
                                let mut row = Vec::new();
                                let mut inner =
                                    |r: &[CellVal], m: &mut Meter| cb(&bottom, r, m);
                                let v = self.rows_dfs(
                                    &edges,
                                    base,
                                    0,
                                    None,
                                    self.max_src,
                                    max_row,
                                    &mut row,
                                    m,
                                    &mut inner,
                                );
                                if v.is_some() {
                                    return v;
                                }
                                if m.exhausted {
                                    return None;
                                }
                            }
                        }
                    }
                }
            }
        }
        None
    }
}

fn expect_eq(k: &dyn Avdc, what: &str, got: &CellVal, want: &CellVal) -> Option<Violation> {
    if got == want {
        None
    } else {
        Some(format!(
            "{what}: got {}, expected {}",
            k.cell_name(got),
            k.cell_name(want)
        ))
    }
}

fn line_identity_cells(ax: &Ax, m: &mut Meter) -> Option<Violation> {
    let k = ax.k;
    let skel = k.skeleton();
    for j in 0..skel.hor_count() {
        if !m.tick() {
            return None;
        }
        let j = HorId::from(j);
        let cell = k.identity_hor(j);
        let want = Frame {
            f: k.identity_of(k.hor_src(j)),
            g: k.identity_of(k.hor_tgt(j)),
            src: Path::single(j),
            tgt: Path::single(j),
        };
        if cell.frame != want {
            return Some(format!(
                "identity cell of {} has frame {}",
                k.hor_name(j),
                k.frame_name(&cell.frame)
            ));
        }
        if !k.cell_valid(&cell) {
            return Some(format!("identity cell of {} is not valid", k.hor_name(j)));
        }
    }
    for f in 0..skel.vert_count() {
        if !m.tick() {
            return None;
        }
        let f = VertId::from(f);
        let cell = k.identity_vert(f);
        let want = Frame {
            f,
            g: f,
            src: Path::Empty(k.vert_dom(f)),
            tgt: Path::Empty(k.vert_cod(f)),
        };
        if cell.frame != want {
            return Some(format!(
                "identity cell of {} has frame {}",
                k.vert_name(f),
                k.frame_name(&cell.frame)
            ));
        }
        if !k.cell_valid(&cell) {
            return Some(format!("identity cell of {} is not valid", k.vert_name(f)));
        }
    }
    None
}

fn line_identity_composition(ax: &Ax, m: &mut Meter) -> Option<Violation> {
    let k = ax.k;
    let skel = k.skeleton();
    for h in 0..skel.vert_count() {
        let h = VertId::from(h);
        for f in 0..skel.vert_count() {
            let f = VertId::from(f);
            let Some(hf) = skel.compose_verts(h, f) else { continue };
            if !m.tick() {
                return None;
            }
            let got = match k.compose(&k.identity_vert(h), &[k.identity_vert(f)]) {
                Ok(c) => c,
                Err(e) => {
                    return Some(format!(
                        "identity cells of {} and {} fail to compose: {e}",
                        k.vert_name(h),
                        k.vert_name(f)
                    ))
                }
            };
            if let Some(v) = expect_eq(
                k,
                &format!(
                    "composite of identity cells of {} and {}",
                    k.vert_name(h),
                    k.vert_name(f)
                ),
                &got,
                &k.identity_vert(hf),
            ) {
                return Some(v);
            }
        }
    }
    None
}

fn line_unit_bottom(ax: &Ax, m: &mut Meter) -> Option<Violation> {
    let k = ax.k;
    ax.for_each_cell(m, &mut |cell, m| {
        let bottom = match &cell.frame.tgt {
            Path::Edges(es) => k.identity_hor(es[0]),
            Path::Empty(c) => k.identity_obj(*c),
        };
        if !m.tick() {
            return None;
        }
        match k.compose(&bottom, &[cell.clone()]) {
            Ok(got) => expect_eq(
                k,
                &format!("identity bottom under {}", k.cell_name(cell)),
                &got,
                cell,
            ),
            Err(e) => Some(format!(
                "identity bottom under {} fails to compose: {e}",
                k.cell_name(cell)
            )),
        }
    })
}

fn line_unit_tops(ax: &Ax, m: &mut Meter) -> Option<Violation> {
    let k = ax.k;
    ax.for_each_cell(m, &mut |cell, m| {
        let tops: Vec<CellVal> = match &cell.frame.src {
            Path::Edges(es) => es.iter().map(|&j| k.identity_hor(j)).collect(),
            Path::Empty(a) => vec![k.identity_obj(*a)],
        };
        if !m.tick() {
            return None;
        }
        match k.compose(cell, &tops) {
            Ok(got) => expect_eq(
                k,
                &format!("identity tops over {}", k.cell_name(cell)),
                &got,
                cell,
            ),
            Err(e) => Some(format!(
                "identity tops over {} fail to compose: {e}",
                k.cell_name(cell)
            )),
        }
    })
}

fn line_unit_insertion(ax: &Ax, m: &mut Meter) -> Option<Violation> {
    let k = ax.k;
    ax.for_each_two_layer(m, &mut |bottom, row, m| {
        if !m.tick() {
            return None;
        }
        let base = match k.compose(bottom, row) {
            Ok(c) => c,
            Err(e) => return Some(format!("two-layer configuration fails to compose: {e}")),
        };
        for i in 0..=row.len() {
            let fi = if i == 0 { row[0].frame.f } else { row[i - 1].frame.g };
            let mut row2 = row.to_vec();
            row2.insert(i, k.identity_vert(fi));
            if !m.tick() {
                return None;
            }
            match k.compose(bottom, &row2) {
                Ok(got) => {
                    if got != base {
                        return Some(format!(
                            "inserting the identity cell of {} at slot {} under {} changes the composite",
                            k.vert_name(fi),
                            i,
                            k.cell_name(bottom)
                        ));
                    }
                }
                Err(e) => {
                    return Some(format!(
                        "inserting the identity cell of {} at slot {} makes the row non-composable: {e}",
                        k.vert_name(fi),
                        i
                    ))
                }
            }
        }
        None
    })
}

fn line_interchange_middle(ax: &Ax, m: &mut Meter) -> Option<Violation> {
    let k = ax.k;
    ax.for_each_two_layer(m, &mut |bottom, row, m| {
        if row.len() < 2 {
            return None;
        }
        for i in 1..row.len() {
            let (l, r) = (&row[i - 1], &row[i]);
            if l.frame.tgt.len() + r.frame.tgt.len() > 1 {
                continue;
            }
            if !m.tick() {
                return None;
            }
            let merged = match hcompose(k, l, r) {
                Ok(c) => c,
                Err(e) => return Some(format!("horizontal composite in a row failed: {e}")),
            };
            let mut row2 = row.to_vec();
            row2.splice(i - 1..=i, [merged]);
            let lhs = match k.compose(bottom, &row2) {
                Ok(c) => c,
                Err(e) => {
                    return Some(format!(
                        "row with horizontally merged cells fails to compose: {e}"
                    ))
                }
            };
            let rhs = match k.compose(bottom, row) {
                Ok(c) => c,
                Err(e) => return Some(format!("two-layer configuration fails to compose: {e}")),
            };
            if lhs != rhs {
                return Some(format!(
                    "merging cells {} and {} of a row under {} changes the composite",
                    i - 1,
                    i,
                    k.cell_name(bottom)
                ));
            }
        }
        None
    })
}

struct Config {
    bottom: CellVal,
    row: Vec<CellVal>,
}

fn collect_configs(ax: &Ax, m: &mut Meter) -> Vec<Config> {
    let mut configs = Vec::new();
    ax.for_each_two_layer(m, &mut |bottom, row, _m| {
        if configs.len() < CONFIG_CAP {
            configs.push(Config { bottom: bottom.clone(), row: row.to_vec() });
        }
        None
    });
    configs
}

fn line_interchange_outer(ax: &Ax, m: &mut Meter) -> Option<Violation> {
    let k = ax.k;
    let configs = collect_configs(ax, m);
    let mut by_start: HashMap<(VertId, VertId), Vec<usize>> = HashMap::new();
    for (i, c) in configs.iter().enumerate() {
        by_start
            .entry((c.bottom.frame.f, c.row[0].frame.f))
            .or_default()
            .push(i);
    }
    for left in &configs {
        let key = (left.bottom.frame.g, left.row.last().unwrap().frame.g);
        let Some(bucket) = by_start.get(&key) else { continue };
        for &ri in bucket {
            let right = &configs[ri];
            if left.bottom.frame.tgt.len() + right.bottom.frame.tgt.len() > 1 {
                continue;
            }
            if !m.tick() {
                return None;
            }
            let run = || -> Result<(CellVal, CellVal), super::error::AvdcError> {
                let lc = k.compose(&left.bottom, &left.row)?;
                let rc = k.compose(&right.bottom, &right.row)?;
                let lhs = hcompose(k, &lc, &rc)?;
                let merged_bottom = hcompose(k, &left.bottom, &right.bottom)?;
                let mut full = left.row.clone();
                full.extend(right.row.iter().cloned());
                let rhs = k.compose(&merged_bottom, &full)?;
                Ok((lhs, rhs))
            };
            match run() {
                Ok((lhs, rhs)) => {
                    if lhs != rhs {
                        return Some(format!(
                            "side-by-side composites under {} and {} disagree with composing the merged configuration",
                            k.cell_name(&left.bottom),
                            k.cell_name(&right.bottom)
                        ));
                    }
                }
                Err(e) => {
                    return Some(format!(
                        "side-by-side configuration fails to compose: {e}"
                    ))
                }
            }
        }
    }
    None
}

fn line_associativity(ax: &Ax, m: &mut Meter) -> Option<Violation> {
    ax.for_each_two_layer(m, &mut |chi, mid, m| {
        let mut blocks: Vec<Vec<CellVal>> = Vec::new();
        blocks_dfs(ax, chi, mid, 0, ax.max_src, &mut blocks, m)
    })
}

fn blocks_dfs(
    ax: &Ax,
    chi: &CellVal,
    mid: &[CellVal],
    j: usize,
    src_left: usize,
    blocks: &mut Vec<Vec<CellVal>>,
    m: &mut Meter,
) -> Option<Violation> {
    let k = ax.k;
    if j == mid.len() {
        if !m.tick() {
            return None;
        }
        let run = || -> Result<(CellVal, CellVal), super::error::AvdcError> {
            let mut comps = Vec::with_capacity(mid.len());
            for (psi, blk) in mid.iter().zip(blocks.iter()) {
                comps.push(k.compose(psi, blk)?);
            }
            let lhs = k.compose(chi, &comps)?;
            let cm = k.compose(chi, mid)?;
            let full: Vec<CellVal> = blocks.iter().flatten().cloned().collect();
            let rhs = k.compose(&cm, &full)?;
            Ok((lhs, rhs))
        };
        return match run() {
            Ok((lhs, rhs)) => {
                if lhs != rhs {
                    Some(format!(
                        "three-layer pasting under {} evaluates differently layer-by-layer and merged",
                        k.cell_name(chi)
                    ))
                } else {
                    None
                }
            }
            Err(e) => Some(format!("three-layer configuration fails to compose: {e}")),
        };
    }
    if m.exhausted {
        return None;
    }
    let anchor = blocks.last().map(|b| b.last().unwrap().frame.g);
    let tgt = &mid[j].frame.src;
    let edges = tgt.edges().to_vec();
    let base = k.path_start(tgt);
    let max_row = edges.len() + EXTRA_ROW_CELLS;
    let mut rowbuf = Vec::new();
    let mut cb = |row: &[CellVal], m: &mut Meter| {
        let used: usize = row.iter().map(|c| c.frame.src.len()).sum();
        if used > src_left {
            return None;
        }
        blocks.push(row.to_vec());
        let v = blocks_dfs(ax, chi, mid, j + 1, src_left - used, blocks, m);
        blocks.pop();
        v
    };
    ax.rows_dfs(&edges, base, 0, anchor, src_left, max_row, &mut rowbuf, m, &mut cb)
}

/// Checks the axioms of an augmented virtual double category on `k` within
/// bounds `b`: well-formed identity cells, the unit laws of vertical
/// pasting, the two interchange laws of horizontal composition, and
/// associativity of pasting. The step budget is split across the checks.
pub fn check_axioms(k: &dyn Avdc, b: &Bounds) -> Report {
    let ax = Ax::new(k, b.max_src_len);
    let mut rep = Report::new("axiom check", k.name(), *b);

    type LineFn = fn(&Ax, &mut Meter) -> Option<Violation>;
    let lines: [(&str, u64, LineFn); 8] = [
        ("identity cells are well-formed", 1, line_identity_cells),
        ("identity cells compose to identity cells", 1, line_identity_composition),
        ("pasting onto an identity bottom is neutral", 3, line_unit_bottom),
        ("pasting identity tops is neutral", 3, line_unit_tops),
        ("inserting a vertical identity cell into a row is neutral", 4, line_unit_insertion),
        ("rows may be merged horizontally before pasting", 4, line_interchange_middle),
        ("horizontal and vertical pasting interchange", 4, line_interchange_outer),
        ("vertical pasting is associative", 4, line_associativity),
    ];
    let total_weight: u64 = lines.iter().map(|l| l.1).sum();
    for (label, weight, body) in lines {
        let mut meter = Meter::with_budget((b.budget * weight / total_weight).max(1));
        let status = match body(&ax, &mut meter) {
            Some(detail) => Status::Fail { detail },
            None => Status::Pass,
        };
        rep.push(label, status, meter.used, meter.ok());
    }
    rep
}
