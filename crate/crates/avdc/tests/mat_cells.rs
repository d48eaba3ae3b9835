//! Cell existence in the matrix instance against a direct recomputation of
//! the tensor inequality, plus basic engine behavior on a locally thin
//! instance.

use avdc::core::{Avdc, AvdcExt, Frame, ObjId, Path};
use avdc::instances::{mat_quantale, FinQuantale, FinSetUniverse, MatInstance};

/// Recomputes whether a unary frame carries a cell, walking tuples in a
/// different order (last component outermost) than the instance does.
fn oracle_unary(inst: &MatInstance, frame: &Frame) -> bool {
    let q = inst.quantale();
    let edges = frame.src.edges();
    let objs: Vec<ObjId> = {
        let mut o = vec![inst.path_start(&frame.src)];
        for &e in edges {
            o.push(inst.hor_tgt(e));
        }
        o
    };
    let sizes: Vec<usize> = objs.iter().map(|&a| inst.set_elems(a).len()).collect();
    let total: usize = sizes.iter().product();
    let target = frame.tgt.edges()[0];
    for mut code in 0..total {
        let mut tup = vec![0u32; sizes.len()];
        for i in (0..sizes.len()).rev() {
            tup[i] = (code % sizes[i]) as u32;
            code /= sizes[i];
        }
        let mut prod = q.unit;
        for (i, &e) in edges.iter().enumerate() {
            prod = q.t(prod, inst.mat_entry(e, tup[i], tup[i + 1]));
        }
        let fx = inst.apply(frame.f, tup[0]);
        let gy = inst.apply(frame.g, *tup.last().unwrap());
        if !q.le(prod, inst.mat_entry(target, fx, gy)) {
            return false;
        }
    }
    true
}

fn small_mat() -> std::sync::Arc<MatInstance> {
    let u = FinSetUniverse::sized("u12", &[1, 2]);
    mat_quantale(FinQuantale::bool2(), &u).unwrap()
}

#[test]
fn unary_cells_match_direct_recomputation() {
    let inst = small_mat();
    let skel = inst.skeleton();
    let mut frames = 0usize;
    let mut populated = 0usize;
    for a in 0..skel.object_count() {
        for b in 0..skel.object_count() {
            for src in inst.paths_between(ObjId::from(a), ObjId::from(b), 2) {
                for &f in skel.verts_out(inst.path_start(&src)) {
                    for &g in skel.verts_out(inst.path_end(&src)) {
                        for &t in skel.hors_between(inst.vert_cod(f), inst.vert_cod(g)) {
                            let frame =
                                Frame { f, g, src: src.clone(), tgt: Path::single(t) };
                            let got = inst.cells(&frame).len();
                            let want = usize::from(oracle_unary(&inst, &frame));
                            assert_eq!(
                                got,
                                want,
                                "cell count mismatch on {}",
                                inst.frame_name(&frame)
                            );
                            frames += 1;
                            populated += got;
                        }
                    }
                }
            }
        }
    }
    assert!(frames > 1000, "expected a substantial frame census, got {frames}");
    assert!(populated > 0, "some frames must carry cells");
    assert!(populated < frames, "some frames must be empty");
}

#[test]
fn nullary_cells_are_exactly_vertical_identities() {
    let inst = small_mat();
    let skel = inst.skeleton();
    for fi in 0..skel.vert_count() {
        for gi in 0..skel.vert_count() {
            let (f, g) = (avdc::core::VertId::from(fi), avdc::core::VertId::from(gi));
            if inst.vert_dom(f) != inst.vert_dom(g) || inst.vert_cod(f) != inst.vert_cod(g) {
                continue;
            }
            let frame = Frame {
                f,
                g,
                src: Path::Empty(inst.vert_dom(f)),
                tgt: Path::Empty(inst.vert_cod(f)),
            };
            let cells = inst.cells(&frame);
            if f == g {
                assert_eq!(cells.len(), 1);
                assert_eq!(cells[0], inst.identity_vert(f));
            } else {
                assert!(cells.is_empty(), "no vertical cells between distinct functions");
            }
        }
    }
}

#[test]
fn invalid_frames_carry_no_cells() {
    let inst = small_mat();
    // Mismatched boundary: f out of s0 but source path based at s1.
    let f = inst.skeleton().verts_out(ObjId(0))[0];
    let frame = Frame {
        f,
        g: f,
        src: Path::Empty(ObjId(1)),
        tgt: Path::Empty(inst.vert_cod(f)),
    };
    assert!(inst.cells(&frame).is_empty());
    assert!(inst.validate_frame(&frame).is_err());
}

#[test]
fn local_thinness() {
    let inst = small_mat();
    assert_eq!(inst.cells_per_frame_bound(3), 1);
}
