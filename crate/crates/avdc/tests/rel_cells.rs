use std::sync::Arc;

use avdc::core::{Avdc, AvdcExt, Datum, Frame, ObjId, Path};
use avdc::instances::{mat_quantale, rel_finset, FinQuantale, FinSetUniverse, RelInstance};

fn inst() -> Arc<RelInstance> {
    rel_finset(&FinSetUniverse::sized("u", &[1, 2]))
        .unwrap()
}

/// Relations over a universe are Boolean matrices over the same universe,
/// built by a separate code path with identical enumeration order. Unary
/// cells must agree frame for frame, and the matrix instance's nullary
/// cells (vertical identities) must all exist here too.
#[test]
fn cells_agree_with_boolean_matrices() {
    let u = FinSetUniverse::sized("u", &[1, 2]);
    let r = rel_finset(&u).unwrap();
    let m = mat_quantale(FinQuantale::bool2(), &u).unwrap();
    assert_eq!(r.skeleton().vert_count(), m.skeleton().vert_count());
    assert_eq!(r.skeleton().hor_count(), m.skeleton().hor_count());
    for j in 0..r.skeleton().hor_count() {
        assert_eq!(r.rel_table(j.into()), m.mat_table(j.into()));
    }

    let mut frames = 0u32;
    for a in 0..r.skeleton().object_count() {
        for src in r.paths_from(ObjId::from(a), 2) {
            let b = r.path_end(&src);
            for &f in r.skeleton().verts_out(ObjId::from(a)) {
                for &g in r.skeleton().verts_out(b) {
                    for tgt in r.target_paths(r.vert_cod(f), r.vert_cod(g)) {
                        let frame = Frame { f, g, src: src.clone(), tgt };
                        let rc = r.cells(&frame).len();
                        let mc = m.cells(&frame).len();
                        if frame.tgt.len() == 1 {
                            assert_eq!(rc, mc, "unary frame {}", r.frame_name(&frame));
                        } else {
                            // Relations admit nullary cells beyond vertical
                            // identities, matrices do not.
                            assert!(rc >= mc, "nullary frame {}", r.frame_name(&frame));
                        }
                        frames += 1;
                    }
                }
            }
        }
    }
    assert!(frames > 2000, "census too small: {frames}");
}

#[test]
fn relational_composition_of_singletons() {
    let u = FinSetUniverse::sized("u", &[2]);
    let r = rel_finset(&u).unwrap();
    let a = ObjId::from(0usize);
    let r1 = r.rel_of_pairs(a, a, &[(0, 0)]);
    let r2 = r.rel_of_pairs(a, a, &[(0, 1)]);
    let comp = r.compose_rels(&Path::from_edges(a, vec![r1, r2]));
    assert_eq!(r.pairs(comp), vec![(0, 1)]);
}

#[test]
fn diagonal_is_the_unit_relation() {
    let r = inst();
    let s1 = ObjId::from(1usize);
    let diag = r.diagonal_rel(s1);
    assert_eq!(r.pairs(diag), vec![(0, 0), (1, 1)]);
    // Composing with the diagonal on either side changes nothing.
    for j in r.skeleton().hors_between(s1, s1) {
        let left = r.compose_rels(&Path::from_edges(s1, vec![diag, *j]));
        let right = r.compose_rels(&Path::from_edges(s1, vec![*j, diag]));
        assert_eq!(left, *j);
        assert_eq!(right, *j);
    }
}

#[test]
fn parallel_cells_are_equal() {
    let r = inst();
    for a in 0..r.skeleton().object_count() {
        for src in r.paths_from(ObjId::from(a), 2) {
            let b = r.path_end(&src);
            for &f in r.skeleton().verts_out(ObjId::from(a)) {
                for &g in r.skeleton().verts_out(b) {
                    for tgt in r.target_paths(r.vert_cod(f), r.vert_cod(g)) {
                        let frame = Frame { f, g, src: src.clone(), tgt };
                        let cells = r.cells(&frame);
                        assert!(cells.len() <= 1, "frame {}", r.frame_name(&frame));
                        if let Some(c) = cells.first() {
                            assert_eq!(c.datum, Datum::Thin);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn restriction_and_graph_relations() {
    let u = FinSetUniverse::sized("u", &[1, 2]);
    let r = rel_finset(&u).unwrap();
    let (s0, s1) = (ObjId::from(0usize), ObjId::from(1usize));
    let f = r.vert_of_table(s0, s1, vec![1]).unwrap();
    assert_eq!(r.pairs(r.graph_rel(f)), vec![(0, 1)]);

    let k = r.rel_of_pairs(s1, s1, &[(1, 0), (1, 1)]);
    let g = r.identity_of(s1);
    // K(f, g) relates x to y when (f x, g y) lies in K.
    assert_eq!(r.pairs(r.restriction_rel(k, f, g)), vec![(0, 0), (0, 1)]);
}

#[test]
fn nullary_cells_need_agreeing_boundaries() {
    let u = FinSetUniverse::sized("u", &[2]);
    let r = rel_finset(&u).unwrap();
    let a = ObjId::from(0usize);
    let id = r.identity_of(a);
    let swap = r.vert_of_table(a, a, vec![1, 0]).unwrap();
    let empty = r.rel_of_pairs(a, a, &[]);
    let full = r.rel_of_pairs(a, a, &[(0, 0), (0, 1), (1, 0), (1, 1)]);

    // Over the empty relation every chain condition is vacuous.
    let vac = Frame { f: id, g: swap, src: Path::single(empty), tgt: Path::Empty(a) };
    assert_eq!(r.cells(&vac).len(), 1);
    // Over the full relation the two verticals would have to agree on all
    // pairs, which id and swap do not.
    let clash = Frame { f: id, g: swap, src: Path::single(full), tgt: Path::Empty(a) };
    assert!(r.cells(&clash).is_empty());
    // A (0,0) frame needs equal verticals.
    let par = Frame { f: id, g: swap, src: Path::Empty(a), tgt: Path::Empty(a) };
    assert!(r.cells(&par).is_empty());
    let ok = Frame { f: swap, g: swap, src: Path::Empty(a), tgt: Path::Empty(a) };
    assert_eq!(r.cells(&ok).len(), 1);
}
