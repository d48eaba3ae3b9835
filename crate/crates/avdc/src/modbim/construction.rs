use std::any::Any;
use std::collections::HashSet;
use std::sync::Arc;

use crate::core::{
    composite_frame, Avdc, AvdcError, AvdcExt, Bounds, CellVal, Frame, HorId, Instance, Meter,
    ObjId, Path, Result, Skeleton, SkeletonBuilder, VertId,
};

use super::monoid::{
    enumerate_bimodules, enumerate_monoid_morphisms, enumerate_monoids, Bimodule, Monoid,
    MonoidMorphism,
};

/// Monoids, monoid morphisms and bimodules in a virtual double category,
/// with cells the underlying cells that are equivariant for the actions.
/// The input must have no nullary cells besides vertical identities; the
/// output is again of that shape, and every monoid carries a horizontal unit
/// (its own multiplication acting on itself).
pub struct ModInstance {
    name: String,
    base: Instance,
    skel: Skeleton,
    monoids: Vec<Monoid>,
    morphs: Vec<(ObjId, ObjId, MonoidMorphism)>,
    bims: Vec<(ObjId, ObjId, Bimodule)>,
    unit_bims: Vec<HorId>,
    // Cells validated once at build time (identities and unit cells), so the
    // hot validation path can skip the equivariance recheck for them.
    trusted: HashSet<CellVal>,
}

fn scan_err(what: &str) -> AvdcError {
    AvdcError::TooLarge(format!("Mod construction: {what} exceeded the step budget"))
}

/// Checks that every nullary cell of `k` with source length at most 1 is a
/// vertical identity cell, which is the input shape Mod requires.
fn check_vdc_shape(k: &dyn Avdc, m: &mut Meter) -> Result<()> {
    let skel = k.skeleton();
    for f in 0..skel.vert_count() {
        let f = VertId::from(f);
        for &g in skel.verts_between(k.vert_dom(f), k.vert_cod(f)) {
            if !m.tick() {
                return Err(scan_err("the nullary cell scan"));
            }
            let frame = Frame {
                f,
                g,
                src: Path::Empty(k.vert_dom(f)),
                tgt: Path::Empty(k.vert_cod(f)),
            };
            let cells = k.cells(&frame);
            let want: Vec<CellVal> =
                if f == g { vec![k.identity_vert(f)] } else { Vec::new() };
            if cells != want {
                return Err(AvdcError::Precondition(format!(
                    "input has a non-identity nullary cell on {}",
                    k.frame_name(&frame)
                )));
            }
        }
    }
    for j in 0..skel.hor_count() {
        let j = HorId::from(j);
        for &f in skel.verts_out(k.hor_src(j)) {
            for &g in skel.verts_between(k.hor_tgt(j), k.vert_cod(f)) {
                if !m.tick() {
                    return Err(scan_err("the nullary cell scan"));
                }
                let frame = Frame {
                    f,
                    g,
                    src: Path::single(j),
                    tgt: Path::Empty(k.vert_cod(f)),
                };
                if !k.cells(&frame).is_empty() {
                    return Err(AvdcError::Precondition(format!(
                        "input has a nullary cell with nonempty source on {}",
                        k.frame_name(&frame)
                    )));
                }
            }
        }
    }
    Ok(())
}

pub fn mod_construction(base: Instance, bounds: &Bounds) -> Result<Arc<ModInstance>> {
    let mut meter = Meter::with_budget(bounds.budget);
    check_vdc_shape(base.as_ref(), &mut meter)?;

    let mut monoids = Vec::new();
    for a in 0..base.skeleton().object_count() {
        monoids.extend(enumerate_monoids(base.as_ref(), ObjId::from(a), bounds.budget)?);
    }

    let mut morphs: Vec<(ObjId, ObjId, MonoidMorphism)> = Vec::new();
    let mut bims: Vec<(ObjId, ObjId, Bimodule)> = Vec::new();
    for (ai, a) in monoids.iter().enumerate() {
        for (ci, c) in monoids.iter().enumerate() {
            let (ai, ci) = (ObjId::from(ai), ObjId::from(ci));
            for mm in enumerate_monoid_morphisms(base.as_ref(), a, c, bounds.budget)? {
                if !meter.tick() {
                    return Err(scan_err("morphism collection"));
                }
                morphs.push((ai, ci, mm));
            }
            for bm in enumerate_bimodules(base.as_ref(), a, c, bounds.budget)? {
                if !meter.tick() {
                    return Err(scan_err("bimodule collection"));
                }
                bims.push((ai, ci, bm));
            }
        }
    }

    let mut b = SkeletonBuilder::new();
    for (i, mon) in monoids.iter().enumerate() {
        b.add_object(format!("mon{i}({})", base.hor_name(mon.alpha)));
    }
    for (i, (a, c, mm)) in morphs.iter().enumerate() {
        b.add_vert(format!("mm{i}({})", base.vert_name(mm.f)), *a, *c);
    }
    for (i, (a, c, bm)) in bims.iter().enumerate() {
        b.add_hor(format!("bm{i}({})", base.hor_name(bm.j)), *a, *c);
    }

    let find_morph = |a: ObjId, c: ObjId, f: VertId, structure: &CellVal| {
        morphs
            .iter()
            .position(|(a2, c2, mm)| {
                *a2 == a && *c2 == c && mm.f == f && mm.structure == *structure
            })
            .map(VertId::from)
    };
    for (i, mon) in monoids.iter().enumerate() {
        let idv = base.identity_of(mon.carrier);
        let idc = base.identity_hor(mon.alpha);
        let id_morph = find_morph(ObjId::from(i), ObjId::from(i), idv, &idc).ok_or_else(|| {
            AvdcError::Internal(format!("identity monoid morphism missing on monoid {i}"))
        })?;
        b.set_identity(ObjId::from(i), id_morph);
    }
    for (i2, (a2, c2, m2)) in morphs.iter().enumerate() {
        for (i1, (a1, c1, m1)) in morphs.iter().enumerate() {
            if c1 != a2 {
                continue;
            }
            if !meter.tick() {
                return Err(scan_err("composition closure"));
            }
            let f = base.vert_compose(m2.f, m1.f)?;
            let structure = base.compose(&m2.structure, &[m1.structure.clone()])?;
            let comp = find_morph(*a1, *c2, f, &structure).ok_or_else(|| {
                AvdcError::Internal(format!(
                    "monoid morphisms are not closed under composition at ({i2}, {i1})"
                ))
            })?;
            b.set_composite(VertId::from(i2), VertId::from(i1), comp);
        }
    }

    let mut unit_bims = Vec::with_capacity(monoids.len());
    for (i, mon) in monoids.iter().enumerate() {
        let i = ObjId::from(i);
        let pos = bims
            .iter()
            .position(|(a, c, bm)| {
                *a == i && *c == i
                    && bm.j == mon.alpha
                    && bm.lact == mon.mult
                    && bm.ract == mon.mult
            })
            .ok_or_else(|| {
                AvdcError::Internal(format!(
                    "unit bimodule missing on monoid {}",
                    i.idx()
                ))
            })?;
        unit_bims.push(HorId::from(pos));
    }

    let name = format!("Mod({})", base.name());
    let mut inst = ModInstance {
        name,
        base,
        skel: b.finish()?,
        monoids,
        morphs,
        bims,
        unit_bims,
        trusted: HashSet::new(),
    };
    let mut trusted = HashSet::new();
    for j in 0..inst.bims.len() {
        trusted.insert(inst.identity_hor(HorId::from(j)));
    }
    for f in 0..inst.morphs.len() {
        trusted.insert(inst.identity_vert(VertId::from(f)));
    }
    trusted.extend(inst.canonical_unit_cells());
    inst.trusted = trusted;
    Ok(Arc::new(inst))
}

impl ModInstance {
    pub fn base(&self) -> &Instance {
        &self.base
    }

    pub fn monoid(&self, a: ObjId) -> &Monoid {
        &self.monoids[a.idx()]
    }

    pub fn monoid_count(&self) -> usize {
        self.monoids.len()
    }

    pub fn morphism(&self, f: VertId) -> &MonoidMorphism {
        &self.morphs[f.idx()].2
    }

    pub fn bimodule(&self, j: HorId) -> &Bimodule {
        &self.bims[j.idx()].2
    }

    /// The unit bimodule of a monoid: the monoid acting on itself by
    /// multiplication on both sides.
    pub fn unit_bim(&self, a: ObjId) -> HorId {
        self.unit_bims[a.idx()]
    }

    /// The monoid object whose data matches, if any.
    pub fn monoid_of(&self, m: &Monoid) -> Option<ObjId> {
        self.monoids.iter().position(|x| x == m).map(ObjId::from)
    }

    /// For each monoid, its unit cell read as a cell into the unit bimodule;
    /// these are the canonical cocartesian unit cells of the construction.
    pub fn canonical_unit_cells(&self) -> Vec<CellVal> {
        (0..self.monoids.len())
            .map(|i| {
                let a = ObjId::from(i);
                let id = self.identity_of(a);
                CellVal::new(
                    Frame {
                        f: id,
                        g: id,
                        src: Path::Empty(a),
                        tgt: Path::single(self.unit_bims[i]),
                    },
                    self.monoids[i].unit.datum.clone(),
                )
            })
            .collect()
    }

    fn base_path(&self, p: &Path) -> Path {
        match p {
            Path::Empty(a) => Path::Empty(self.monoids[a.idx()].carrier),
            Path::Edges(es) => {
                let start = self.monoids[self.path_start(p).idx()].carrier;
                Path::from_edges(start, es.iter().map(|e| self.bims[e.idx()].2.j).collect())
            }
        }
    }

    fn base_frame(&self, fr: &Frame) -> Frame {
        Frame {
            f: self.morphs[fr.f.idx()].2.f,
            g: self.morphs[fr.g.idx()].2.f,
            src: self.base_path(&fr.src),
            tgt: self.base_path(&fr.tgt),
        }
    }

    fn to_base(&self, c: &CellVal) -> CellVal {
        CellVal::new(self.base_frame(&c.frame), c.datum.clone())
    }

    /// The external and internal equivariance conditions for an underlying
    /// cell on the translated frame.
    fn equivariant(&self, fr: &Frame, phi: &CellVal) -> Result<bool> {
        let b = &*self.base;
        let fmor = &self.morphs[fr.f.idx()].2;
        let gmor = &self.morphs[fr.g.idx()].2;
        let kbim = &self.bims[fr.tgt.edges()[0].idx()].2;
        let jbims: Vec<&Bimodule> =
            fr.src.edges().iter().map(|e| &self.bims[e.idx()].2).collect();

        let left = b.compose(&kbim.lact, &[fmor.structure.clone(), phi.clone()])?;
        let right = b.compose(&kbim.ract, &[phi.clone(), gmor.structure.clone()])?;
        if jbims.is_empty() {
            return Ok(left == right);
        }
        let ids = || -> Vec<CellVal> { jbims.iter().map(|bm| b.identity_hor(bm.j)).collect() };
        let n = jbims.len();
        let mut row = ids();
        row[0] = jbims[0].lact.clone();
        if left != b.compose(phi, &row)? {
            return Ok(false);
        }
        let mut row = ids();
        row[n - 1] = jbims[n - 1].ract.clone();
        if right != b.compose(phi, &row)? {
            return Ok(false);
        }
        for i in 0..n - 1 {
            let mut rowl = ids();
            rowl[i] = jbims[i].ract.clone();
            let mut rowr = ids();
            rowr[i + 1] = jbims[i + 1].lact.clone();
            if b.compose(phi, &rowl)? != b.compose(phi, &rowr)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl Avdc for ModInstance {
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
        if frame.tgt.is_empty() {
            // The output is again a virtual double category: nullary cells
            // are vertical identities only.
            return if frame.src.is_empty() && frame.f == frame.g {
                vec![self.identity_vert(frame.f)]
            } else {
                Vec::new()
            };
        }
        let bf = self.base_frame(frame);
        self.base
            .cells(&bf)
            .into_iter()
            .filter(|c| self.equivariant(frame, c).unwrap_or(false))
            .map(|c| CellVal::new(frame.clone(), c.datum))
            .collect()
    }

    fn cell_valid(&self, cell: &CellVal) -> bool {
        if self.trusted.contains(cell) {
            return true;
        }
        if self.validate_frame(&cell.frame).is_err() {
            return false;
        }
        if cell.frame.tgt.is_empty() {
            return cell.frame.src.is_empty()
                && cell.frame.f == cell.frame.g
                && *cell == self.identity_vert(cell.frame.f);
        }
        let bc = self.to_base(cell);
        self.base.cell_valid(&bc) && self.equivariant(&cell.frame, &bc).unwrap_or(false)
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
        let bb = self.to_base(bottom);
        let bt: Vec<CellVal> = tops.iter().map(|t| self.to_base(t)).collect();
        let out = self.base.compose(&bb, &bt)?;
        let result = CellVal::new(frame, out.datum);
        if !self.cell_valid(&result) {
            return Err(AvdcError::Internal(
                "composite of equivariant cells fails equivariance".into(),
            ));
        }
        Ok(result)
    }

    fn identity_hor(&self, j: HorId) -> CellVal {
        CellVal::new(
            Frame {
                f: self.identity_of(self.hor_src(j)),
                g: self.identity_of(self.hor_tgt(j)),
                src: Path::single(j),
                tgt: Path::single(j),
            },
            self.base.identity_hor(self.bims[j.idx()].2.j).datum,
        )
    }

    fn identity_vert(&self, f: VertId) -> CellVal {
        let (a, c, mm) = &self.morphs[f.idx()];
        CellVal::new(
            Frame { f, g: f, src: Path::Empty(*a), tgt: Path::Empty(*c) },
            self.base.identity_vert(mm.f).datum,
        )
    }

    fn cells_per_frame_bound(&self, max_src_len: usize) -> u64 {
        self.base.cells_per_frame_bound(max_src_len)
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}
