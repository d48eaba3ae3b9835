use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::avdc::{Avdc, AvdcExt};
use super::cell::CellVal;
use super::error::{AvdcError, Result};
use super::frame::Frame;
use super::ids::VertId;
use super::ops::hcompose;
use super::path::Path;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OneCellInfo {
    pub name: String,
    pub dom: usize,
    pub cod: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TwoCellInfo {
    pub name: String,
    /// Source and target 1-cells; always parallel.
    pub src: usize,
    pub tgt: usize,
}

/// A finite strict 2-category given by explicit tables.
///
/// `vcomp` composes 2-cells along a shared 1-cell (α: j ⇒ k then β: k ⇒ l);
/// `hcomp` composes them along a shared object (the Godement product). In
/// the double-categorical drawing, where 1-cells run down the page, `vcomp`
/// runs across the page and `hcomp` down it.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FinTwoCat {
    pub name: String,
    pub objects: Vec<String>,
    pub ones: Vec<OneCellInfo>,
    /// Identity 1-cell of each object.
    pub one_identities: Vec<usize>,
    /// `(g, f) -> g∘f` for cod f = dom g.
    pub one_comp: HashMap<(usize, usize), usize>,
    pub twos: Vec<TwoCellInfo>,
    /// Identity 2-cell of each 1-cell.
    pub two_identities: Vec<usize>,
    /// `(b, a) -> b·a` for tgt a = src b (composition along a 1-cell).
    pub vcomp: HashMap<(usize, usize), usize>,
    /// `(b, a) -> b*a` for a over dom-cod (A,B) and b over (B,C); the result
    /// runs from dom(b src ∘ a src) over (A,C).
    pub hcomp: HashMap<(usize, usize), usize>,
}

impl FinTwoCat {
    /// The 2-category with only identity 2-cells over the given 1-cell data.
    pub fn locally_discrete(
        name: impl Into<String>,
        objects: Vec<String>,
        ones: Vec<OneCellInfo>,
        one_identities: Vec<usize>,
        one_comp: HashMap<(usize, usize), usize>,
    ) -> FinTwoCat {
        let twos: Vec<TwoCellInfo> = ones
            .iter()
            .enumerate()
            .map(|(f, info)| TwoCellInfo { name: format!("id[{}]", info.name), src: f, tgt: f })
            .collect();
        let vcomp = (0..twos.len()).map(|t| ((t, t), t)).collect();
        let hcomp = one_comp.iter().map(|(&(g, f), &gf)| ((g, f), gf)).collect();
        FinTwoCat {
            name: name.into(),
            objects,
            ones,
            one_identities,
            one_comp,
            two_identities: (0..twos.len()).collect(),
            twos,
            vcomp,
            hcomp,
        }
    }

    /// The 2-category with the direction of its 2-cells reversed.
    pub fn co(&self) -> FinTwoCat {
        FinTwoCat {
            name: format!("co({})", self.name),
            objects: self.objects.clone(),
            ones: self.ones.clone(),
            one_identities: self.one_identities.clone(),
            one_comp: self.one_comp.clone(),
            twos: self
                .twos
                .iter()
                .map(|t| TwoCellInfo { name: t.name.clone(), src: t.tgt, tgt: t.src })
                .collect(),
            two_identities: self.two_identities.clone(),
            vcomp: self.vcomp.iter().map(|(&(b, a), &v)| ((a, b), v)).collect(),
            hcomp: self.hcomp.clone(),
        }
    }

    pub fn one_comp(&self, g: usize, f: usize) -> Option<usize> {
        self.one_comp.get(&(g, f)).copied()
    }

    pub fn vcomp(&self, b: usize, a: usize) -> Option<usize> {
        self.vcomp.get(&(b, a)).copied()
    }

    pub fn hcomp(&self, b: usize, a: usize) -> Option<usize> {
        self.hcomp.get(&(b, a)).copied()
    }

    pub fn two_dom_obj(&self, t: usize) -> usize {
        self.ones[self.twos[t].src].dom
    }

    pub fn two_cod_obj(&self, t: usize) -> usize {
        self.ones[self.twos[t].src].cod
    }

    /// Checks the strict 2-category laws exhaustively.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(AvdcError::Load(format!("2-category {}: {}", self.name, msg)));

        if self.one_identities.len() != self.objects.len() {
            return bad("one identity 1-cell required per object".into());
        }
        for (a, &i) in self.one_identities.iter().enumerate() {
            let info = &self.ones[i];
            if info.dom != a || info.cod != a {
                return bad(format!("identity 1-cell of {} has wrong boundary", self.objects[a]));
            }
        }
        for (g, gi) in self.ones.iter().enumerate() {
            for (f, fi) in self.ones.iter().enumerate() {
                let composable = fi.cod == gi.dom;
                match self.one_comp(g, f) {
                    None if composable => {
                        return bad(format!("missing 1-composite {} after {}", gi.name, fi.name))
                    }
                    Some(_) if !composable => {
                        return bad(format!(
                            "1-composite defined on non-composable {} after {}",
                            gi.name, fi.name
                        ))
                    }
                    Some(gf) => {
                        let c = &self.ones[gf];
                        if c.dom != fi.dom || c.cod != gi.cod {
                            return bad(format!(
                                "1-composite {} after {} has wrong boundary",
                                gi.name, fi.name
                            ));
                        }
                    }
                    None => {}
                }
            }
        }
        for (f, fi) in self.ones.iter().enumerate() {
            let idl = self.one_identities[fi.cod];
            let idr = self.one_identities[fi.dom];
            if self.one_comp(idl, f) != Some(f) || self.one_comp(f, idr) != Some(f) {
                return bad(format!("1-cell identity law fails on {}", fi.name));
            }
        }
        for h in 0..self.ones.len() {
            for g in 0..self.ones.len() {
                let Some(hg) = self.one_comp(h, g) else { continue };
                for f in 0..self.ones.len() {
                    let Some(gf) = self.one_comp(g, f) else { continue };
                    if self.one_comp(h, gf) != self.one_comp(hg, f) {
                        return bad("1-cell composition not associative".into());
                    }
                }
            }
        }

        for t in &self.twos {
            let s = &self.ones[t.src];
            let g = &self.ones[t.tgt];
            if s.dom != g.dom || s.cod != g.cod {
                return bad(format!("2-cell {} is not between parallel 1-cells", t.name));
            }
        }
        if self.two_identities.len() != self.ones.len() {
            return bad("one identity 2-cell required per 1-cell".into());
        }
        for (f, &i) in self.two_identities.iter().enumerate() {
            if self.twos[i].src != f || self.twos[i].tgt != f {
                return bad(format!("identity 2-cell of {} has wrong boundary", self.ones[f].name));
            }
        }

        for (b, bi) in self.twos.iter().enumerate() {
            for (a, ai) in self.twos.iter().enumerate() {
                let chain = ai.tgt == bi.src;
                match self.vcomp(b, a) {
                    None if chain => {
                        return bad(format!("missing vcomp {} after {}", bi.name, ai.name))
                    }
                    Some(_) if !chain => {
                        return bad(format!(
                            "vcomp defined on non-chainable {} after {}",
                            bi.name, ai.name
                        ))
                    }
                    Some(ba) => {
                        if self.twos[ba].src != ai.src || self.twos[ba].tgt != bi.tgt {
                            return bad(format!(
                                "vcomp {} after {} has wrong boundary",
                                bi.name, ai.name
                            ));
                        }
                    }
                    None => {}
                }
                let hcomposable = self.two_cod_obj(a) == self.two_dom_obj(b);
                match self.hcomp(b, a) {
                    None if hcomposable => {
                        return bad(format!("missing hcomp {} beside {}", bi.name, ai.name))
                    }
                    Some(_) if !hcomposable => {
                        return bad(format!(
                            "hcomp defined on non-composable {} beside {}",
                            bi.name, ai.name
                        ))
                    }
                    Some(ba) => {
                        let want_src = self.one_comp(bi.src, ai.src).unwrap();
                        let want_tgt = self.one_comp(bi.tgt, ai.tgt).unwrap();
                        if self.twos[ba].src != want_src || self.twos[ba].tgt != want_tgt {
                            return bad(format!(
                                "hcomp {} beside {} has wrong boundary",
                                bi.name, ai.name
                            ));
                        }
                    }
                    None => {}
                }
            }
        }

        for (a, ai) in self.twos.iter().enumerate() {
            let idl = self.two_identities[ai.tgt];
            let idr = self.two_identities[ai.src];
            if self.vcomp(idl, a) != Some(a) || self.vcomp(a, idr) != Some(a) {
                return bad(format!("2-cell vertical identity law fails on {}", ai.name));
            }
            let hidl = self.two_identities[self.one_identities[self.two_cod_obj(a)]];
            let hidr = self.two_identities[self.one_identities[self.two_dom_obj(a)]];
            if self.hcomp(hidl, a) != Some(a) || self.hcomp(a, hidr) != Some(a) {
                return bad(format!("2-cell horizontal identity law fails on {}", ai.name));
            }
        }
        for c in 0..self.twos.len() {
            for b in 0..self.twos.len() {
                for a in 0..self.twos.len() {
                    if let Some(ba) = self.vcomp(b, a) {
                        if let Some(cb) = self.vcomp(c, b) {
                            if self.vcomp(c, ba) != self.vcomp(cb, a) {
                                return bad("vcomp not associative".into());
                            }
                        }
                    }
                    if let Some(ba) = self.hcomp(b, a) {
                        if let Some(cb) = self.hcomp(c, b) {
                            if self.hcomp(c, ba) != self.hcomp(cb, a) {
                                return bad("hcomp not associative".into());
                            }
                        }
                    }
                }
            }
        }
        // Interchange: a,c parallel-composable over (A,B); b,d over (B,C).
        for a in 0..self.twos.len() {
            for c in 0..self.twos.len() {
                let Some(ca) = self.vcomp(c, a) else { continue };
                for b in 0..self.twos.len() {
                    let Some(ba) = self.hcomp(b, a) else { continue };
                    for d in 0..self.twos.len() {
                        let Some(db) = self.vcomp(d, b) else { continue };
                        let Some(dc) = self.hcomp(d, c) else { continue };
                        if self.vcomp(dc, ba) != self.hcomp(db, ca) {
                            return bad("interchange law fails".into());
                        }
                    }
                }
            }
        }
        // Identity 2-cells of composite 1-cells.
        for g in 0..self.ones.len() {
            for f in 0..self.ones.len() {
                if let Some(gf) = self.one_comp(g, f) {
                    let want = self.two_identities[gf];
                    if self.hcomp(self.two_identities[g], self.two_identities[f]) != Some(want) {
                        return bad("identity 2-cell of a composite 1-cell mismatch".into());
                    }
                }
            }
        }
        Ok(())
    }
}

/// Extracts the vertical 2-category of an instance: objects, vertical
/// morphisms, and cells with empty horizontal source and target. Returns the
/// 2-category together with the cell that each 2-cell index denotes.
pub fn vertical_2cat(k: &dyn Avdc) -> Result<(FinTwoCat, Vec<CellVal>)> {
    let skel = k.skeleton();
    let ones: Vec<OneCellInfo> = skel
        .verts
        .iter()
        .map(|v| OneCellInfo { name: v.name.clone(), dom: v.dom.idx(), cod: v.cod.idx() })
        .collect();
    let mut one_comp = HashMap::new();
    for g in 0..ones.len() {
        for f in 0..ones.len() {
            if let Some(gf) = skel.compose_verts(VertId::from(g), VertId::from(f)) {
                one_comp.insert((g, f), gf.idx());
            }
        }
    }

    let mut twos = Vec::new();
    let mut cells: Vec<CellVal> = Vec::new();
    let mut index: HashMap<CellVal, usize> = HashMap::new();
    for f in 0..ones.len() {
        let fi = VertId::from(f);
        let (a, c) = (k.vert_dom(fi), k.vert_cod(fi));
        for &gi in skel.verts_between(a, c) {
            let frame =
                Frame { f: fi, g: gi, src: Path::Empty(a), tgt: Path::Empty(c) };
            for cell in k.cells(&frame) {
                let idx = cells.len();
                twos.push(TwoCellInfo {
                    name: format!("v{}", idx),
                    src: f,
                    tgt: gi.idx(),
                });
                index.insert(cell.clone(), idx);
                cells.push(cell);
            }
        }
    }

    let find = |c: &CellVal| -> Result<usize> {
        index.get(c).copied().ok_or_else(|| {
            AvdcError::Internal(format!(
                "composite of vertical cells is not a listed vertical cell: {}",
                k.cell_name(c)
            ))
        })
    };

    let mut two_identities = Vec::with_capacity(ones.len());
    for f in 0..ones.len() {
        two_identities.push(find(&k.identity_vert(VertId::from(f)))?);
    }

    let mut vcomp = HashMap::new();
    let mut hcomp = HashMap::new();
    for (b, bi) in twos.iter().enumerate() {
        for (a, ai) in twos.iter().enumerate() {
            if ai.tgt == bi.src {
                let comp = hcompose(k, &cells[a], &cells[b])?;
                vcomp.insert((b, a), find(&comp)?);
            }
            if ones[ai.src].cod == ones[bi.src].dom {
                let comp = k.compose(&cells[b], &[cells[a].clone()])?;
                hcomp.insert((b, a), find(&comp)?);
            }
        }
    }

    let cat = FinTwoCat {
        name: format!("V({})", k.name()),
        objects: skel.objects.clone(),
        ones,
        one_identities: skel.identities.iter().map(|f| f.idx()).collect(),
        one_comp,
        twos,
        two_identities,
        vcomp,
        hcomp,
    };
    cat.validate()?;
    Ok((cat, cells))
}
