//! Unitalization: prof_of on matrices as profunctors between preorders,
//! chosen-unit validation, composition through unit factorizations, and the
//! round trip back to the underlying virtual double category.

use std::sync::Arc;

use avdc::core::{
    check_axioms, underlying_vdc, Avdc, AvdcExt, Bounds, CellVal, Datum, Frame, Instance, ObjId,
    Path, UnderlyingVdc,
};
use avdc::instances::{mat_quantale, span_finset, FinQuantale, FinSetUniverse, MatInstance};
use avdc::modbim::{
    mod_construction, prof_of, unitalize, ChosenUnits, ModInstance, UnitalizedInstance,
};

fn mat12() -> Arc<MatInstance> {
    mat_quantale(FinQuantale::bool2(), &FinSetUniverse::sized("u12", &[1, 2])).unwrap()
}

fn prof12() -> Arc<UnitalizedInstance> {
    prof_of(mat12(), &Bounds::new(3, 50_000_000)).unwrap()
}

fn downcast_mod(p: &UnitalizedInstance) -> &ModInstance {
    p.base().as_any().downcast_ref::<ModInstance>().expect("prof_of is built on Mod")
}

#[test]
fn prof_of_mat2_passes_the_axioms() {
    let p = prof12();
    let rep = check_axioms(p.as_ref(), &Bounds::new(3, 1_000_000));
    assert!(rep.pass, "{}", rep.render());
}

#[test]
fn horizontal_unit_of_a_preorder_is_its_order_relation() {
    let p = prof12();
    let m = downcast_mod(&p);
    let mat = mat12();
    for a in 0..p.skeleton().object_count() {
        let a = ObjId::from(a);
        let unit = p.units().unit_hor(a);
        let mon = m.monoid(a);
        assert_eq!(m.bimodule(unit).j, mon.alpha);
        assert_eq!(
            mat.mat_table(m.bimodule(unit).j),
            mat.mat_table(mon.alpha),
            "unit of {}",
            p.object_name(a)
        );
    }
}

#[test]
fn identity_of_an_identity_vertical_is_the_unit_cell() {
    let p = prof12();
    for a in 0..p.skeleton().object_count() {
        let a = ObjId::from(a);
        assert_eq!(p.identity_vert(p.identity_of(a)), p.unit_cell(a));
    }
}

#[test]
fn underlying_of_unitalized_matches_the_original() {
    let p = prof12();
    let m = downcast_mod(&p);
    let u = underlying_vdc(p.clone());
    assert_eq!(u.skeleton().object_count(), m.skeleton().object_count());
    assert_eq!(u.skeleton().vert_count(), m.skeleton().vert_count());
    assert_eq!(u.skeleton().hor_count(), m.skeleton().hor_count());

    let mut unary = 0usize;
    let mut nullary = 0usize;
    for src in m.all_paths(1) {
        let (s, e) = (m.path_start(&src), m.path_end(&src));
        for &f in m.skeleton().verts_out(s) {
            for &g in m.skeleton().verts_between(e, m.vert_cod(f)) {
                for tgt in m.target_paths(m.vert_cod(f), m.vert_cod(g)) {
                    let frame = Frame { f, g, src: src.clone(), tgt };
                    let left = u.cells(&frame);
                    let right = m.cells(&frame);
                    assert_eq!(left, right, "{}", m.frame_name(&frame));
                    if frame.tgt.is_empty() {
                        nullary += left.len();
                    } else {
                        unary += left.len();
                    }
                }
            }
        }
    }
    assert!(unary > 200, "only {unary} unary cells compared");
    assert!(nullary > 10, "only {nullary} nullary cells compared");
}

#[test]
fn unitalized_has_nullary_cells_the_underlying_drops() {
    let p = prof12();
    let u = underlying_vdc(p.clone());
    let a = (0..p.skeleton().object_count())
        .map(ObjId::from)
        .find(|&a| p.skeleton().hors_between(a, a).contains(&p.units().unit_hor(a)))
        .unwrap();
    let id = p.identity_of(a);
    let frame = Frame {
        f: id,
        g: id,
        src: Path::single(p.units().unit_hor(a)),
        tgt: Path::Empty(a),
    };
    assert!(!p.cells(&frame).is_empty(), "the counit of the unit is a nullary cell");
    assert!(u.cells(&frame).is_empty(), "the underlying instance must drop it");
}

#[test]
fn prof_of_a_one_object_input_is_the_monoid_instance() {
    let k = mat_quantale(FinQuantale::bool2(), &FinSetUniverse::sized("u2", &[2])).unwrap();
    let p = prof_of(k, &Bounds::new(3, 50_000_000)).unwrap();
    assert_eq!(p.skeleton().object_count(), 4);
    for a in 0..4 {
        let a = ObjId::from(a);
        assert!(p.object_name(a).starts_with("mon"));
    }
}

#[test]
fn unitalize_rejects_a_non_cocartesian_unit() {
    let mat = mat12();
    let m = mod_construction(underlying_vdc(mat.clone()), &Bounds::new(3, 1_000_000)).unwrap();
    // Find the discrete two-element preorder and the full relation on it.
    let disc = (0..m.skeleton().object_count())
        .map(ObjId::from)
        .find(|&a| mat.mat_table(m.monoid(a).alpha) == [1, 0, 0, 1])
        .unwrap();
    let full = *m
        .skeleton()
        .hors_between(disc, disc)
        .iter()
        .find(|&&h| mat.mat_table(m.bimodule(h).j) == [1, 1, 1, 1])
        .unwrap();
    let mut cells: Vec<CellVal> = m.canonical_unit_cells();
    let id = m.identity_of(disc);
    let bad = CellVal::new(
        Frame { f: id, g: id, src: Path::Empty(disc), tgt: Path::single(full) },
        Datum::Thin,
    );
    assert!(m.cell_valid(&bad), "the corrupted unit must still be a cell");
    cells[disc.idx()] = bad;
    let err = unitalize(m, ChosenUnits::new(cells), &Bounds::new(3, 50_000_000))
        .err()
        .expect("the full relation is not a unit for the discrete preorder");
    let msg = err.to_string();
    assert!(msg.contains("not cocartesian"), "unexpected message: {msg}");
}

/// Recomputes every small nullary-top composite by hand: enumerate the
/// factorization candidates directly, insist there is exactly one, paste it
/// and compare with the engine's answer.
#[test]
fn factorizations_recomputed_two_ways_agree() {
    let s = span_finset(&FinSetUniverse::sized("pt2", &[1, 2])).unwrap();
    let m: Instance =
        mod_construction(underlying_vdc(s), &Bounds::new(3, 30_000_000)).unwrap();
    let units = ChosenUnits::new(
        m.as_any().downcast_ref::<ModInstance>().unwrap().canonical_unit_cells(),
    );
    let p = unitalize(m.clone(), units, &Bounds::new(2, 80_000_000)).unwrap();

    let mut configs = 0usize;
    for c in 0..p.skeleton().object_count() {
        let c = ObjId::from(c);
        // Nullary tops into c over identity boundaries.
        let sigma_frame = Frame {
            f: p.identity_of(c),
            g: p.identity_of(c),
            src: Path::single(p.units().unit_hor(c)),
            tgt: Path::Empty(c),
        };
        let sigmas = p.cells(&sigma_frame);
        // Bottoms whose source is empty at c.
        for tgt in p.target_paths(c, c) {
            let bottom_frame = Frame {
                f: p.identity_of(c),
                g: p.identity_of(c),
                src: Path::Empty(c),
                tgt,
            };
            for bottom in p.cells(&bottom_frame) {
                for sigma in &sigmas {
                    let engine = p.compose(&bottom, std::slice::from_ref(sigma)).unwrap();

                    // By hand: bottom reads as a cell into the unit, the
                    // candidate must compose with the unit cell back to it.
                    let unit = p.units().unit_hor(c);
                    let chi = CellVal::new(
                        Frame {
                            f: bottom.frame.f,
                            g: bottom.frame.g,
                            src: Path::Empty(c),
                            tgt: if bottom.frame.tgt.is_empty() {
                                Path::single(unit)
                            } else {
                                bottom.frame.tgt.clone()
                            },
                        },
                        bottom.datum.clone(),
                    );
                    let over = Frame {
                        f: chi.frame.f,
                        g: chi.frame.g,
                        src: Path::single(unit),
                        tgt: chi.frame.tgt.clone(),
                    };
                    let eta = m
                        .as_any()
                        .downcast_ref::<ModInstance>()
                        .unwrap()
                        .canonical_unit_cells()[c.idx()]
                    .clone();
                    let matches: Vec<CellVal> = m
                        .cells(&over)
                        .into_iter()
                        .filter(|cand| {
                            m.compose(cand, std::slice::from_ref(&eta)).unwrap() == chi
                        })
                        .collect();
                    assert_eq!(matches.len(), 1, "factorization must be unique");
                    let avatar = CellVal::new(
                        Frame {
                            f: sigma.frame.f,
                            g: sigma.frame.g,
                            src: sigma.frame.src.clone(),
                            tgt: Path::single(unit),
                        },
                        sigma.datum.clone(),
                    );
                    let by_hand = m.compose(&matches[0], std::slice::from_ref(&avatar)).unwrap();
                    assert_eq!(engine.datum, by_hand.datum);
                    assert_eq!(engine.frame.f, by_hand.frame.f);
                    assert_eq!(engine.frame.g, by_hand.frame.g);
                    assert_eq!(engine.frame.src, by_hand.frame.src);
                    configs += 1;
                }
            }
        }
    }
    assert!(configs >= 4, "only {configs} configurations were exercised");
}
