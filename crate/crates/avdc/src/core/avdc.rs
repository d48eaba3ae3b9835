use std::any::Any;
use std::sync::Arc;

use super::cell::CellVal;
use super::error::{AvdcError, Result};
use super::frame::Frame;
use super::ids::{HorId, ObjId, VertId};
use super::path::Path;
use super::skeleton::Skeleton;

/// A finitely presented augmented virtual double category.
///
/// The structural part (objects, vertical category, horizontal graph) is a
/// materialized [`Skeleton`]. Cells are produced lazily per frame and are
/// never materialized globally; every enumeration in this crate walks frames
/// and asks the instance for the cells of each.
pub trait Avdc: Send + Sync {
    fn name(&self) -> &str;

    fn skeleton(&self) -> &Skeleton;

    /// All cells with exactly this frame, in a deterministic order that
    /// depends only on the instance presentation. An invalid frame yields an
    /// empty list.
    fn cells(&self, frame: &Frame) -> Vec<CellVal>;

    /// Whether the value is a cell of this instance (frame valid and datum
    /// well-formed for that frame).
    fn cell_valid(&self, cell: &CellVal) -> bool;

    /// Vertical composition: pastes a nonempty path of cells `tops` onto
    /// `bottom`. Consecutive top cells must share their vertical boundary,
    /// the horizontal targets of the tops must concatenate to exactly the
    /// horizontal source of `bottom`, and all cells must be valid.
    fn compose(&self, bottom: &CellVal, tops: &[CellVal]) -> Result<CellVal>;

    /// The identity cell of a horizontal morphism: frame
    /// `(id, id, (j), (j))`.
    fn identity_hor(&self, j: HorId) -> CellVal;

    /// The identity cell of a vertical morphism `f`: frame
    /// `(f, f, empty at dom f, empty at cod f)`.
    fn identity_vert(&self, f: VertId) -> CellVal;

    /// Upper bound on the number of cells any single frame within the given
    /// source length can carry. Used for one-shot sizing before a search.
    fn cells_per_frame_bound(&self, max_src_len: usize) -> u64;

    fn as_any(&self) -> &dyn Any;
}

/// Shared handle to an instance.
pub type Instance = Arc<dyn Avdc>;

/// Structural helpers derived from the skeleton.
pub trait AvdcExt: Avdc {
    fn object_name(&self, a: ObjId) -> &str {
        &self.skeleton().objects[a.idx()]
    }

    fn vert_name(&self, f: VertId) -> &str {
        &self.skeleton().verts[f.idx()].name
    }

    fn hor_name(&self, j: HorId) -> &str {
        &self.skeleton().hors[j.idx()].name
    }

    fn vert_dom(&self, f: VertId) -> ObjId {
        self.skeleton().verts[f.idx()].dom
    }

    fn vert_cod(&self, f: VertId) -> ObjId {
        self.skeleton().verts[f.idx()].cod
    }

    fn hor_src(&self, j: HorId) -> ObjId {
        self.skeleton().hors[j.idx()].src
    }

    fn hor_tgt(&self, j: HorId) -> ObjId {
        self.skeleton().hors[j.idx()].tgt
    }

    fn identity_of(&self, a: ObjId) -> VertId {
        self.skeleton().identity(a)
    }

    fn is_identity_vert(&self, f: VertId) -> bool {
        self.skeleton().is_identity(f)
    }

    /// The identity cell of an object: the identity cell of its identity
    /// vertical morphism.
    fn identity_obj(&self, a: ObjId) -> CellVal {
        self.identity_vert(self.identity_of(a))
    }

    fn vert_compose(&self, g: VertId, f: VertId) -> Result<VertId> {
        self.skeleton().compose_verts(g, f).ok_or_else(|| {
            AvdcError::NotComposable(format!(
                "vertical {} after {}: cod/dom mismatch",
                self.vert_name(g),
                self.vert_name(f)
            ))
        })
    }

    fn path_valid(&self, p: &Path) -> Result<()> {
        match p {
            Path::Empty(a) => {
                if a.idx() >= self.skeleton().object_count() {
                    return Err(AvdcError::UnknownId { kind: "object", id: a.0 });
                }
            }
            Path::Edges(es) => {
                if es.is_empty() {
                    return Err(AvdcError::BadPath(
                        "edge list form of a path must be nonempty".into(),
                    ));
                }
                for e in es {
                    if e.idx() >= self.skeleton().hor_count() {
                        return Err(AvdcError::UnknownId { kind: "horizontal", id: e.0 });
                    }
                }
                for w in es.windows(2) {
                    if self.hor_tgt(w[0]) != self.hor_src(w[1]) {
                        return Err(AvdcError::BadPath(format!(
                            "edges {} and {} do not share an endpoint",
                            self.hor_name(w[0]),
                            self.hor_name(w[1])
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    fn path_start(&self, p: &Path) -> ObjId {
        match p {
            Path::Empty(a) => *a,
            Path::Edges(es) => self.hor_src(es[0]),
        }
    }

    fn path_end(&self, p: &Path) -> ObjId {
        match p {
            Path::Empty(a) => *a,
            Path::Edges(es) => self.hor_tgt(*es.last().unwrap()),
        }
    }

    fn path_name(&self, p: &Path) -> String {
        match p {
            Path::Empty(a) => format!("()@{}", self.object_name(*a)),
            Path::Edges(es) => {
                es.iter().map(|e| self.hor_name(*e)).collect::<Vec<_>>().join(" , ")
            }
        }
    }

    fn frame_name(&self, fr: &Frame) -> String {
        format!(
            "[{} => {} over ({}, {})]",
            self.path_name(&fr.src),
            self.path_name(&fr.tgt),
            self.vert_name(fr.f),
            self.vert_name(fr.g)
        )
    }

    fn cell_name(&self, c: &CellVal) -> String {
        let datum = match &c.datum {
            super::cell::Datum::Thin => String::new(),
            super::cell::Datum::Table(t) => format!(
                " tab({})",
                t.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
            ),
            super::cell::Datum::Atom(a) => format!(" atom({a})"),
        };
        format!("{}{}", self.frame_name(&c.frame), datum)
    }

    /// Frame invariant check: boundaries of the four constituents agree and
    /// the target has length at most one.
    fn validate_frame(&self, fr: &Frame) -> Result<()> {
        if fr.f.idx() >= self.skeleton().vert_count() {
            return Err(AvdcError::UnknownId { kind: "vertical", id: fr.f.0 });
        }
        if fr.g.idx() >= self.skeleton().vert_count() {
            return Err(AvdcError::UnknownId { kind: "vertical", id: fr.g.0 });
        }
        self.path_valid(&fr.src)?;
        self.path_valid(&fr.tgt)?;
        if fr.tgt.len() > 1 {
            return Err(AvdcError::BadFrame(format!(
                "target path has length {}, at most 1 allowed",
                fr.tgt.len()
            )));
        }
        let checks = [
            (self.vert_dom(fr.f), self.path_start(&fr.src), "dom(f) = start(src)"),
            (self.vert_dom(fr.g), self.path_end(&fr.src), "dom(g) = end(src)"),
            (self.vert_cod(fr.f), self.path_start(&fr.tgt), "cod(f) = start(tgt)"),
            (self.vert_cod(fr.g), self.path_end(&fr.tgt), "cod(g) = end(tgt)"),
        ];
        for (x, y, law) in checks {
            if x != y {
                return Err(AvdcError::BadFrame(format!(
                    "{} fails on {}",
                    law,
                    self.frame_name(fr)
                )));
            }
        }
        Ok(())
    }

    /// Whether both boundary verticals of the cell are identities.
    fn is_horizontal_cell(&self, c: &CellVal) -> bool {
        self.is_identity_vert(c.frame.f) && self.is_identity_vert(c.frame.g)
    }

    /// All paths from `a` to `b` of length `0..=max_len`, ordered by length
    /// then lexicographically by edge ids.
    fn paths_between(&self, a: ObjId, b: ObjId, max_len: usize) -> Vec<Path> {
        let mut out = Vec::new();
        if a == b {
            out.push(Path::Empty(a));
        }
        let mut layer: Vec<Vec<HorId>> = vec![Vec::new()];
        for _ in 1..=max_len {
            let mut next = Vec::new();
            for partial in &layer {
                let at = if partial.is_empty() {
                    a
                } else {
                    self.hor_tgt(*partial.last().unwrap())
                };
                for &j in self.skeleton().hors_out(at) {
                    let mut p = partial.clone();
                    p.push(j);
                    next.push(p);
                }
            }
            for p in &next {
                if self.hor_tgt(*p.last().unwrap()) == b {
                    out.push(Path::Edges(p.clone()));
                }
            }
            layer = next;
        }
        out
    }

    /// All paths starting at `a` of length `0..=max_len`, ordered by length
    /// then lexicographically.
    fn paths_from(&self, a: ObjId, max_len: usize) -> Vec<Path> {
        let mut out = vec![Path::Empty(a)];
        let mut layer: Vec<Vec<HorId>> = vec![Vec::new()];
        for _ in 1..=max_len {
            let mut next = Vec::new();
            for partial in &layer {
                let at = if partial.is_empty() {
                    a
                } else {
                    self.hor_tgt(*partial.last().unwrap())
                };
                for &j in self.skeleton().hors_out(at) {
                    let mut p = partial.clone();
                    p.push(j);
                    out.push(Path::Edges(p.clone()));
                    next.push(p);
                }
            }
            layer = next;
        }
        out
    }

    /// All paths of length `0..=max_len` anywhere in the instance, ordered by
    /// start object, then length, then lexicographically.
    fn all_paths(&self, max_len: usize) -> Vec<Path> {
        let mut out = Vec::new();
        for a in 0..self.skeleton().object_count() {
            out.extend(self.paths_from(ObjId::from(a), max_len));
        }
        out
    }

    /// The possible horizontal targets for a frame with cod(f) = `c` and
    /// cod(g) = `d`: the empty path when `c == d`, then each edge from `c`
    /// to `d`.
    fn target_paths(&self, c: ObjId, d: ObjId) -> Vec<Path> {
        let mut out = Vec::new();
        if c == d {
            out.push(Path::Empty(c));
        }
        for &j in self.skeleton().hors_between(c, d) {
            out.push(Path::single(j));
        }
        out
    }
}

impl<T: Avdc + ?Sized> AvdcExt for T {}
