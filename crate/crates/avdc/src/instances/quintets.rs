use std::any::Any;
use std::sync::Arc;

use crate::core::{
    composite_frame, Avdc, AvdcError, AvdcExt, CellVal, Datum, FinTwoCat, Frame, HorId, ObjId,
    Path, Result, Skeleton, SkeletonBuilder, VertId,
};

/// Quintets of a finite 2-category K: objects are those of K, and both the
/// vertical and the horizontal morphisms are its 1-morphisms. A cell from
/// (j_1, ..., j_n) to k over (f, g) is a 2-cell k∘f ⇒ g∘j_n∘...∘j_1 of K;
/// for a nullary target, k is the identity. Vertical and horizontal ids of
/// a 1-morphism share their index, so VertId and HorId translate directly.
pub struct QuintetInstance {
    name: String,
    skel: Skeleton,
    cat: FinTwoCat,
}

pub fn quintets(cat: FinTwoCat) -> Result<Arc<QuintetInstance>> {
    cat.validate()?;
    let mut b = SkeletonBuilder::new();
    for o in &cat.objects {
        b.add_object(o.clone());
    }
    for one in &cat.ones {
        b.add_vert(one.name.clone(), ObjId::from(one.dom), ObjId::from(one.cod));
    }
    for (a, &i) in cat.one_identities.iter().enumerate() {
        b.set_identity(ObjId::from(a), VertId::from(i));
    }
    for (&(g, f), &gf) in &cat.one_comp {
        b.set_composite(VertId::from(g), VertId::from(f), VertId::from(gf));
    }
    for one in &cat.ones {
        b.add_hor(one.name.clone(), ObjId::from(one.dom), ObjId::from(one.cod));
    }
    let name = format!("quintets({})", cat.name);
    Ok(Arc::new(QuintetInstance { name, skel: b.finish()?, cat }))
}

impl QuintetInstance {
    pub fn two_cat(&self) -> &FinTwoCat {
        &self.cat
    }

    pub fn hor_of_vert(&self, f: VertId) -> HorId {
        HorId::from(f.idx())
    }

    pub fn vert_of_hor(&self, j: HorId) -> VertId {
        VertId::from(j.idx())
    }

    /// The 1-morphism a path composes to, `j_n∘...∘j_1`, the identity for an
    /// empty path.
    pub fn path_one(&self, p: &Path) -> Result<usize> {
        match p {
            Path::Empty(a) => Ok(self.cat.one_identities[a.idx()]),
            Path::Edges(es) => {
                let mut acc = es[0].idx();
                for e in &es[1..] {
                    acc = self
                        .cat
                        .one_comp(e.idx(), acc)
                        .ok_or_else(|| AvdcError::Internal("path edges not composable".into()))?;
                }
                Ok(acc)
            }
        }
    }

    /// The parallel pair of 1-morphisms (k∘f, g∘j_n∘...∘j_1) that the
    /// frame's cells run between as 2-cells of the underlying 2-category.
    pub fn frame_ones(&self, frame: &Frame) -> Result<(usize, usize)> {
        let comp = |g: usize, f: usize| {
            self.cat
                .one_comp(g, f)
                .ok_or_else(|| AvdcError::Internal("frame boundary not composable".into()))
        };
        let src_one = comp(self.path_one(&frame.tgt)?, frame.f.idx())?;
        let tgt_one = comp(frame.g.idx(), self.path_one(&frame.src)?)?;
        Ok((src_one, tgt_one))
    }

    /// The cell carrying a given 2-cell on a frame, if its boundary fits.
    pub fn cell_of_two(&self, frame: Frame, two: usize) -> Option<CellVal> {
        let cell = CellVal::new(frame, Datum::Atom(two as u32));
        self.cell_valid(&cell).then_some(cell)
    }

    fn two_of(&self, cell: &CellVal) -> Result<usize> {
        match cell.datum {
            Datum::Atom(t) => Ok(t as usize),
            _ => Err(AvdcError::InvalidCell("quintet cells carry a 2-cell index".into())),
        }
    }
}

impl Avdc for QuintetInstance {
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
        let Ok((src_one, tgt_one)) = self.frame_ones(frame) else {
            return Vec::new();
        };
        self.cat
            .twos
            .iter()
            .enumerate()
            .filter(|(_, info)| info.src == src_one && info.tgt == tgt_one)
            .map(|(t, _)| CellVal::new(frame.clone(), Datum::Atom(t as u32)))
            .collect()
    }

    fn cell_valid(&self, cell: &CellVal) -> bool {
        if self.validate_frame(&cell.frame).is_err() {
            return false;
        }
        let (Datum::Atom(t), Ok((src_one, tgt_one))) =
            (&cell.datum, self.frame_ones(&cell.frame))
        else {
            return false;
        };
        match self.cat.twos.get(*t as usize) {
            Some(info) => info.src == src_one && info.tgt == tgt_one,
            None => false,
        }
    }

    /// Pasting: whisker the bottom by the first top's left boundary, then
    /// stack each top whiskered by the already-consumed suffix of the
    /// bottom's source on one side and the tops already passed on the other.
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
        let frame = composite_frame(self, &bottom.frame, &top_frames)?;

        let c = &self.cat;
        let internal = |what: &str| AvdcError::Internal(format!("quintet pasting: {what}"));
        let comp =
            |g: usize, f: usize| c.one_comp(g, f).ok_or_else(|| internal("1-cell composite"));
        let hc = |b: usize, a: usize| c.hcomp(b, a).ok_or_else(|| internal("whiskering"));
        let vc = |b: usize, a: usize| c.vcomp(b, a).ok_or_else(|| internal("stacking"));
        let id2 = |f: usize| c.two_identities[f];

        // suffix[i] = g'∘k_m∘...∘k_{i+1} where the k's are the bottom's
        // source edges and g' its right boundary.
        let ks: Vec<usize> = bottom.frame.src.edges().iter().map(|e| e.idx()).collect();
        let mut suffix = vec![0usize; ks.len() + 1];
        suffix[ks.len()] = bottom.frame.g.idx();
        for i in (0..ks.len()).rev() {
            suffix[i] = comp(suffix[i + 1], ks[i])?;
        }

        let f1 = tops[0].frame.f.idx();
        let mut curr = hc(self.two_of(bottom)?, id2(f1))?;
        let mut right = c.one_identities[self.vert_dom(tops[0].frame.f).idx()];
        let mut consumed = 0;
        for top in tops {
            let left = if top.frame.tgt.len() == 1 {
                consumed += 1;
                suffix[consumed]
            } else {
                suffix[consumed]
            };
            let step = hc(id2(left), hc(self.two_of(top)?, id2(right))?)?;
            curr = vc(step, curr)?;
            right = comp(self.path_one(&top.frame.src)?, right)?;
        }

        let result = CellVal::new(frame, Datum::Atom(curr as u32));
        if !self.cell_valid(&result) {
            return Err(internal("result boundary"));
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
            Datum::Atom(self.cat.two_identities[j.idx()] as u32),
        )
    }

    fn identity_vert(&self, f: VertId) -> CellVal {
        CellVal::new(
            Frame {
                f,
                g: f,
                src: Path::Empty(self.vert_dom(f)),
                tgt: Path::Empty(self.vert_cod(f)),
            },
            Datum::Atom(self.cat.two_identities[f.idx()] as u32),
        )
    }

    fn cells_per_frame_bound(&self, _max_src_len: usize) -> u64 {
        self.cat.twos.len().max(1) as u64
    }

    fn as_any(&self) -> &dyn Any {
        self
    }
}
