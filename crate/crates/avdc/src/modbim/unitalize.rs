use std::any::Any;
use std::sync::Arc;

use crate::core::{
    composite_frame, underlying_vdc, Avdc, AvdcError, AvdcExt, Bounds, CellVal, Frame, HorId,
    Instance, Meter, ObjId, Path, Result, Skeleton, VertId,
};

use super::construction::mod_construction;

/// A chosen horizontal unit for every object of a unital virtual double
/// category: cell `a` is the cocartesian cell into the unit of object `a`,
/// with identity vertical boundaries and empty source.
#[derive(Clone, Debug)]
pub struct ChosenUnits {
    cells: Vec<CellVal>,
}

impl ChosenUnits {
    pub fn new(cells: Vec<CellVal>) -> ChosenUnits {
        ChosenUnits { cells }
    }

    pub fn cell(&self, a: ObjId) -> &CellVal {
        &self.cells[a.idx()]
    }

    pub fn unit_hor(&self, a: ObjId) -> HorId {
        self.cells[a.idx()].frame.tgt.edges()[0]
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }
}

/// The augmentation of a unital virtual double category by chosen units:
/// same objects, verticals, horizontals and unary cells, and a nullary cell
/// into an object `C` for every unary cell into the chosen unit of `C`.
/// Composition inserts the chosen unit cells under nullary tops via the
/// unique factorization that makes the units cocartesian.
pub struct UnitalizedInstance {
    name: String,
    base: Instance,
    skel: Skeleton,
    units: ChosenUnits,
    vert_ids: Vec<CellVal>,
}

/// The objects a path visits: position 0 is the start, position `len` the
/// end.
fn path_objects(k: &dyn Avdc, p: &Path) -> Vec<ObjId> {
    let mut out = vec![k.path_start(p)];
    for &e in p.edges() {
        out.push(k.hor_tgt(e));
    }
    out
}

/// Checks that the unit cell on `a` has the required frame and that every
/// unary cell whose source passes through `a` factors uniquely through it,
/// for sources of length below `bounds.max_src_len`.
fn check_unit_cocartesian(
    k: &dyn Avdc,
    a: ObjId,
    eta: &CellVal,
    bounds: &Bounds,
    m: &mut Meter,
) -> Result<()> {
    let id_a = k.identity_of(a);
    let shape_ok = eta.frame.f == id_a
        && eta.frame.g == id_a
        && eta.frame.src == Path::Empty(a)
        && eta.frame.tgt.len() == 1
        && k.cell_valid(eta);
    if !shape_ok {
        return Err(AvdcError::Precondition(format!(
            "chosen unit on object '{}' is not a cell () => (unit) over identities",
            k.object_name(a)
        )));
    }
    let unit = eta.frame.tgt.edges()[0];
    if k.hor_src(unit) != a || k.hor_tgt(unit) != a {
        return Err(AvdcError::Precondition(format!(
            "chosen unit on object '{}' does not target an endo-morphism",
            k.object_name(a)
        )));
    }

    let skel = k.skeleton();
    let max_base = bounds.max_src_len.saturating_sub(1);
    for src in k.all_paths(max_base) {
        let visits = path_objects(k, &src);
        for pos in 0..visits.len() {
            if visits[pos] != a {
                continue;
            }
            let mut inflated = src.edges().to_vec();
            inflated.insert(pos, unit);
            let inflated = Path::Edges(inflated);
            let mut row: Vec<CellVal> =
                src.edges().iter().map(|&e| k.identity_hor(e)).collect();
            row.insert(pos, eta.clone());
            let start = visits[0];
            let end = *visits.last().unwrap();
            for &f in skel.verts_out(start) {
                for &g in skel.verts_between(end, k.vert_cod(f)) {
                    for &tgt in skel.hors_between(k.vert_cod(f), k.vert_cod(g)) {
                        if !m.tick() {
                            return Err(AvdcError::TooLarge(format!(
                                "cocartesian check on object '{}' exceeded the step budget",
                                k.object_name(a)
                            )));
                        }
                        let frame = Frame { f, g, src: src.clone(), tgt: Path::single(tgt) };
                        let phis = k.cells(&frame);
                        if phis.is_empty() {
                            continue;
                        }
                        let over =
                            Frame { f, g, src: inflated.clone(), tgt: Path::single(tgt) };
                        let cands = k.cells(&over);
                        for phi in phis {
                            if !m.tick() {
                                return Err(AvdcError::TooLarge(format!(
                                    "cocartesian check on object '{}' exceeded the step budget",
                                    k.object_name(a)
                                )));
                            }
                            let mut hits = 0usize;
                            for cand in &cands {
                                if k.compose(cand, &row)? == phi {
                                    hits += 1;
                                }
                            }
                            if hits != 1 {
                                return Err(AvdcError::Precondition(format!(
                                    "chosen unit on object '{}' is not cocartesian: {} has {} \
                                     factorizations through it",
                                    k.object_name(a),
                                    k.cell_name(&phi),
                                    hits
                                )));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

pub fn unitalize(
    base: Instance,
    units: ChosenUnits,
    bounds: &Bounds,
) -> Result<Arc<UnitalizedInstance>> {
    let skel = base.skeleton().clone();
    if units.len() != skel.object_count() {
        return Err(AvdcError::Precondition(format!(
            "expected one chosen unit per object, got {} for {} objects",
            units.len(),
            skel.object_count()
        )));
    }
    let mut meter = Meter::with_budget(bounds.budget);
    for a in 0..skel.object_count() {
        let a = ObjId::from(a);
        check_unit_cocartesian(base.as_ref(), a, units.cell(a), bounds, &mut meter)?;
    }

    // id_f is the unit cell of cod(f) composed onto the vertical identity.
    let mut vert_ids = Vec::with_capacity(skel.vert_count());
    for f in 0..skel.vert_count() {
        let f = VertId::from(f);
        let under = base.compose(units.cell(base.vert_cod(f)), &[base.identity_vert(f)])?;
        vert_ids.push(CellVal::new(
            Frame {
                f,
                g: f,
                src: Path::Empty(base.vert_dom(f)),
                tgt: Path::Empty(base.vert_cod(f)),
            },
            under.datum,
        ));
    }

    let name = format!("N({})", base.name());
    Ok(Arc::new(UnitalizedInstance { name, base, skel, units, vert_ids }))
}

/// Monoids, monoid morphisms and bimodules of a virtual double category as
/// an augmented virtual double category: the unitalization of Mod at its
/// canonical units, where the unit of a monoid is the monoid itself and the
/// cocartesian cell into it is the monoid's unit cell. Inputs with nullary
/// cells are first cut down to their underlying virtual double category.
pub fn prof_of(k: Instance, bounds: &Bounds) -> Result<Arc<UnitalizedInstance>> {
    let m = mod_construction(underlying_vdc(k), bounds)?;
    let units = ChosenUnits::new(m.canonical_unit_cells());
    unitalize(m, units, bounds)
}

impl UnitalizedInstance {
    pub fn base(&self) -> &Instance {
        &self.base
    }

    pub fn units(&self) -> &ChosenUnits {
        &self.units
    }

    /// The chosen cocartesian unit cell of `a`, read as a nullary cell.
    pub fn unit_cell(&self, a: ObjId) -> CellVal {
        let id = self.identity_of(a);
        CellVal::new(
            Frame { f: id, g: id, src: Path::Empty(a), tgt: Path::Empty(a) },
            self.units.cell(a).datum.clone(),
        )
    }

    fn base_frame(&self, fr: &Frame) -> Frame {
        match &fr.tgt {
            Path::Empty(c) => Frame {
                f: fr.f,
                g: fr.g,
                src: fr.src.clone(),
                tgt: Path::single(self.units.unit_hor(*c)),
            },
            Path::Edges(_) => fr.clone(),
        }
    }

    fn to_base(&self, c: &CellVal) -> CellVal {
        CellVal::new(self.base_frame(&c.frame), c.datum.clone())
    }
}

impl Avdc for UnitalizedInstance {
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
        let bf = self.base_frame(frame);
        self.base
            .cells(&bf)
            .into_iter()
            .map(|c| CellVal::new(frame.clone(), c.datum))
            .collect()
    }

    fn cell_valid(&self, cell: &CellVal) -> bool {
        if self.validate_frame(&cell.frame).is_err() {
            return false;
        }
        self.base.cell_valid(&self.to_base(cell))
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
        let top_frames: Vec<&Frame> = tops.iter().map(|t| &t.frame).collect();
        let frame = composite_frame(self, &bottom.frame, &top_frames)?;

        let chi = self.to_base(bottom);
        let avatars: Vec<CellVal> = tops.iter().map(|t| self.to_base(t)).collect();
        let prime = if tops.iter().all(|t| !t.frame.tgt.is_empty()) {
            chi
        } else {
            // Rewrite the bottom on the source with units inserted under the
            // nullary tops; it is the unique cell composing with the unit
            // rows back to the bottom.
            let mut inflated = Vec::new();
            let mut row = Vec::new();
            for t in tops {
                match &t.frame.tgt {
                    Path::Edges(es) => {
                        inflated.extend_from_slice(es);
                        row.extend(es.iter().map(|&e| self.base.identity_hor(e)));
                    }
                    Path::Empty(c) => {
                        inflated.push(self.units.unit_hor(*c));
                        row.push(self.units.cell(*c).clone());
                    }
                }
            }
            let over = Frame {
                f: chi.frame.f,
                g: chi.frame.g,
                src: Path::Edges(inflated),
                tgt: chi.frame.tgt.clone(),
            };
            let mut found = None;
            for cand in self.base.cells(&over) {
                if self.base.compose(&cand, &row)? == chi {
                    if found.is_some() {
                        return Err(AvdcError::Internal(format!(
                            "factorization through the chosen units is not unique for {}",
                            self.base.cell_name(&chi)
                        )));
                    }
                    found = Some(cand);
                }
            }
            found.ok_or_else(|| {
                AvdcError::Internal(format!(
                    "no factorization through the chosen units for {}",
                    self.base.cell_name(&chi)
                ))
            })?
        };
        let out = self.base.compose(&prime, &avatars)?;
        Ok(CellVal::new(frame, out.datum))
    }

    fn identity_hor(&self, j: HorId) -> CellVal {
        self.base.identity_hor(j)
    }

    fn identity_vert(&self, f: VertId) -> CellVal {
        self.vert_ids[f.idx()].clone()
    }

    fn cells_per_frame_bound(&self, max_src_len: usize) -> u64 {
        self.base.cells_per_frame_bound(max_src_len)
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}
