use super::avdc::{Avdc, AvdcExt};
use super::cell::CellVal;
use super::error::{AvdcError, Result};
use super::frame::Frame;
use super::path::Path;

/// Concatenates paths, checking that consecutive endpoints glue.
pub fn concat_paths<'a>(
    k: &dyn Avdc,
    parts: impl IntoIterator<Item = &'a Path>,
) -> Result<Path> {
    let mut edges = Vec::new();
    let mut at: Option<super::ids::ObjId> = None;
    let mut start = None;
    for p in parts {
        let s = k.path_start(p);
        if let Some(prev_end) = at {
            if prev_end != s {
                return Err(AvdcError::BadPath(format!(
                    "paths do not glue: one ends at {} but the next starts at {}",
                    k.object_name(prev_end),
                    k.object_name(s)
                )));
            }
        } else {
            start = Some(s);
        }
        edges.extend_from_slice(p.edges());
        at = Some(k.path_end(p));
    }
    let start = start.ok_or_else(|| {
        AvdcError::BadPath("cannot concatenate an empty family of paths".into())
    })?;
    Ok(Path::from_edges(start, edges))
}

/// The frame of the vertical composite of a nonempty row of top frames pasted
/// onto a bottom frame. Checks every composability condition and reports the
/// first failure.
pub fn composite_frame(k: &dyn Avdc, bottom: &Frame, tops: &[&Frame]) -> Result<Frame> {
    if tops.is_empty() {
        return Err(AvdcError::NotComposable(
            "a vertical composite needs at least one cell in the top row".into(),
        ));
    }
    for (i, w) in tops.windows(2).enumerate() {
        if w[0].g != w[1].f {
            return Err(AvdcError::NotComposable(format!(
                "top cells {} and {} do not share a vertical boundary: {} vs {}",
                i,
                i + 1,
                k.vert_name(w[0].g),
                k.vert_name(w[1].f)
            )));
        }
    }
    let tgt_concat = concat_paths(k, tops.iter().map(|t| &t.tgt))?;
    if tgt_concat != bottom.src {
        return Err(AvdcError::NotComposable(format!(
            "top targets concatenate to {} but the bottom source is {}",
            k.path_name(&tgt_concat),
            k.path_name(&bottom.src)
        )));
    }
    let src = concat_paths(k, tops.iter().map(|t| &t.src))?;
    let f = k.vert_compose(bottom.f, tops[0].f)?;
    let g = k.vert_compose(bottom.g, tops.last().unwrap().g)?;
    Ok(Frame { f, g, src, tgt: bottom.tgt.clone() })
}

/// Horizontal composition of two cells, defined as pasting the pair onto the
/// identity cell of the concatenated target. Requires the combined target to
/// have length at most one; when both targets are empty the identity cell of
/// the shared target object is used.
pub fn hcompose(k: &dyn Avdc, left: &CellVal, right: &CellVal) -> Result<CellVal> {
    if left.frame.g != right.frame.f {
        return Err(AvdcError::NotComposable(format!(
            "cells do not share a vertical boundary: {} vs {}",
            k.vert_name(left.frame.g),
            k.vert_name(right.frame.f)
        )));
    }
    let total = left.frame.tgt.len() + right.frame.tgt.len();
    let bottom = match total {
        0 => k.identity_obj(k.path_start(&left.frame.tgt)),
        1 => {
            let edge = left
                .frame
                .tgt
                .edges()
                .first()
                .or_else(|| right.frame.tgt.edges().first())
                .copied()
                .unwrap();
            k.identity_hor(edge)
        }
        _ => {
            return Err(AvdcError::NotComposable(
                "horizontal composition needs combined target length at most 1".into(),
            ))
        }
    };
    k.compose(&bottom, &[left.clone(), right.clone()])
}

/// Left whiskering of a cell row by a vertical morphism: `h ∘ (tops)` is the
/// composite of the row onto the identity cell of `h`. The row's targets must
/// concatenate to the empty path at dom h.
pub fn whisker_left(k: &dyn Avdc, h: super::ids::VertId, tops: &[CellVal]) -> Result<CellVal> {
    k.compose(&k.identity_vert(h), tops)
}

/// Right whiskering: `cell ∘ f` pastes the identity cell of `f` under-run by
/// nothing onto `cell`; defined when `cell` has empty horizontal source based
/// at cod f.
pub fn whisker_right(k: &dyn Avdc, cell: &CellVal, f: super::ids::VertId) -> Result<CellVal> {
    k.compose(cell, &[k.identity_vert(f)])
}
