use std::collections::HashMap;

use super::error::{AvdcError, Result};
use super::ids::{HorId, ObjId, VertId};

#[derive(Clone, Debug)]
pub struct VertInfo {
    pub name: String,
    pub dom: ObjId,
    pub cod: ObjId,
}

#[derive(Clone, Debug)]
pub struct HorInfo {
    pub name: String,
    pub src: ObjId,
    pub tgt: ObjId,
}

/// The finite structural part of an instance: objects with names, the
/// vertical category as explicit tables, and the horizontal graph. Cells are
/// not stored here; instances produce them per frame.
#[derive(Clone, Debug)]
pub struct Skeleton {
    pub objects: Vec<String>,
    pub verts: Vec<VertInfo>,
    pub hors: Vec<HorInfo>,
    /// Identity vertical of each object.
    pub identities: Vec<VertId>,
    /// `vcomp[(g, f)] = g after f`, defined exactly when cod f = dom g.
    vcomp: HashMap<(VertId, VertId), VertId>,
    verts_out: Vec<Vec<VertId>>,
    verts_in: Vec<Vec<VertId>>,
    verts_between: HashMap<(ObjId, ObjId), Vec<VertId>>,
    hors_out: Vec<Vec<HorId>>,
    hors_in: Vec<Vec<HorId>>,
    hors_between: HashMap<(ObjId, ObjId), Vec<HorId>>,
}

impl Skeleton {
    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn vert_count(&self) -> usize {
        self.verts.len()
    }

    pub fn hor_count(&self) -> usize {
        self.hors.len()
    }

    pub fn identity(&self, a: ObjId) -> VertId {
        self.identities[a.idx()]
    }

    pub fn is_identity(&self, f: VertId) -> bool {
        self.identities[self.verts[f.idx()].dom.idx()] == f
    }

    pub fn compose_verts(&self, g: VertId, f: VertId) -> Option<VertId> {
        self.vcomp.get(&(g, f)).copied()
    }

    pub fn verts_out(&self, a: ObjId) -> &[VertId] {
        &self.verts_out[a.idx()]
    }

    pub fn verts_in(&self, a: ObjId) -> &[VertId] {
        &self.verts_in[a.idx()]
    }

    pub fn verts_between(&self, a: ObjId, b: ObjId) -> &[VertId] {
        self.verts_between.get(&(a, b)).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn hors_out(&self, a: ObjId) -> &[HorId] {
        &self.hors_out[a.idx()]
    }

    pub fn hors_in(&self, a: ObjId) -> &[HorId] {
        &self.hors_in[a.idx()]
    }

    pub fn hors_between(&self, a: ObjId, b: ObjId) -> &[HorId] {
        self.hors_between.get(&(a, b)).map(|v| v.as_slice()).unwrap_or(&[])
    }
}

/// Builds and validates a skeleton. Ordering of objects, verticals and
/// horizontals is the order of insertion; instances insert in a canonical
/// order so that enumeration is deterministic.
pub struct SkeletonBuilder {
    objects: Vec<String>,
    verts: Vec<VertInfo>,
    hors: Vec<HorInfo>,
    identities: Vec<Option<VertId>>,
    vcomp: HashMap<(VertId, VertId), VertId>,
}

impl SkeletonBuilder {
    pub fn new() -> SkeletonBuilder {
        SkeletonBuilder {
            objects: Vec::new(),
            verts: Vec::new(),
            hors: Vec::new(),
            identities: Vec::new(),
            vcomp: HashMap::new(),
        }
    }

    pub fn add_object(&mut self, name: impl Into<String>) -> ObjId {
        self.objects.push(name.into());
        self.identities.push(None);
        ObjId::from(self.objects.len() - 1)
    }

    pub fn add_vert(&mut self, name: impl Into<String>, dom: ObjId, cod: ObjId) -> VertId {
        self.verts.push(VertInfo { name: name.into(), dom, cod });
        VertId::from(self.verts.len() - 1)
    }

    pub fn add_hor(&mut self, name: impl Into<String>, src: ObjId, tgt: ObjId) -> HorId {
        self.hors.push(HorInfo { name: name.into(), src, tgt });
        HorId::from(self.hors.len() - 1)
    }

    pub fn set_identity(&mut self, a: ObjId, f: VertId) {
        self.identities[a.idx()] = Some(f);
    }

    pub fn set_composite(&mut self, g: VertId, f: VertId, gf: VertId) {
        self.vcomp.insert((g, f), gf);
    }

    /// Validates the vertical category (totality of composition on
    /// composable pairs, identity and associativity laws) and freezes the
    /// lookup tables.
    pub fn finish(self) -> Result<Skeleton> {
        let n_obj = self.objects.len();
        let mut identities = Vec::with_capacity(n_obj);
        for (i, id) in self.identities.iter().enumerate() {
            let f = id.ok_or_else(|| {
                AvdcError::Load(format!("object {} has no identity vertical", self.objects[i]))
            })?;
            let info = &self.verts[f.idx()];
            if info.dom.idx() != i || info.cod.idx() != i {
                return Err(AvdcError::Load(format!(
                    "identity of object {} has wrong boundary",
                    self.objects[i]
                )));
            }
            identities.push(f);
        }

        let vname = |f: VertId| self.verts[f.idx()].name.clone();
        for g in 0..self.verts.len() {
            for f in 0..self.verts.len() {
                let (g, f) = (VertId::from(g), VertId::from(f));
                let composable = self.verts[f.idx()].cod == self.verts[g.idx()].dom;
                match self.vcomp.get(&(g, f)) {
                    None if composable => {
                        return Err(AvdcError::Load(format!(
                            "missing vertical composite {} after {}",
                            vname(g),
                            vname(f)
                        )))
                    }
                    Some(_) if !composable => {
                        return Err(AvdcError::Load(format!(
                            "composite defined for non-composable pair {} after {}",
                            vname(g),
                            vname(f)
                        )))
                    }
                    Some(&gf) => {
                        let fi = &self.verts[f.idx()];
                        let gi = &self.verts[g.idx()];
                        let c = &self.verts[gf.idx()];
                        if c.dom != fi.dom || c.cod != gi.cod {
                            return Err(AvdcError::Load(format!(
                                "composite {} after {} has wrong boundary",
                                vname(g),
                                vname(f)
                            )));
                        }
                    }
                    None => {}
                }
            }
        }

        for (f_idx, info) in self.verts.iter().enumerate() {
            let f = VertId::from(f_idx);
            let idl = identities[info.cod.idx()];
            let idr = identities[info.dom.idx()];
            if self.vcomp.get(&(idl, f)) != Some(&f) || self.vcomp.get(&(f, idr)) != Some(&f) {
                return Err(AvdcError::Load(format!(
                    "identity law fails for vertical {}",
                    info.name
                )));
            }
        }

        // Associativity over all composable triples.
        for h in 0..self.verts.len() {
            let h = VertId::from(h);
            for g in 0..self.verts.len() {
                let g = VertId::from(g);
                let Some(&hg) = self.vcomp.get(&(h, g)) else { continue };
                for f in 0..self.verts.len() {
                    let f = VertId::from(f);
                    let Some(&gf) = self.vcomp.get(&(g, f)) else { continue };
                    if self.vcomp.get(&(h, gf)) != self.vcomp.get(&(hg, f)) {
                        return Err(AvdcError::Load(format!(
                            "vertical composition not associative on {}, {}, {}",
                            vname(h),
                            vname(g),
                            vname(f)
                        )));
                    }
                }
            }
        }

        let mut verts_out = vec![Vec::new(); n_obj];
        let mut verts_in = vec![Vec::new(); n_obj];
        let mut verts_between: HashMap<(ObjId, ObjId), Vec<VertId>> = HashMap::new();
        for (i, info) in self.verts.iter().enumerate() {
            let f = VertId::from(i);
            verts_out[info.dom.idx()].push(f);
            verts_in[info.cod.idx()].push(f);
            verts_between.entry((info.dom, info.cod)).or_default().push(f);
        }
        let mut hors_out = vec![Vec::new(); n_obj];
        let mut hors_in = vec![Vec::new(); n_obj];
        let mut hors_between: HashMap<(ObjId, ObjId), Vec<HorId>> = HashMap::new();
        for (i, info) in self.hors.iter().enumerate() {
            let j = HorId::from(i);
            hors_out[info.src.idx()].push(j);
            hors_in[info.tgt.idx()].push(j);
            hors_between.entry((info.src, info.tgt)).or_default().push(j);
        }

        Ok(Skeleton {
            objects: self.objects,
            verts: self.verts,
            hors: self.hors,
            identities,
            vcomp: self.vcomp,
            verts_out,
            verts_in,
            verts_between,
            hors_out,
            hors_in,
            hors_between,
        })
    }
}

impl Default for SkeletonBuilder {
    fn default() -> Self {
        SkeletonBuilder::new()
    }
}
