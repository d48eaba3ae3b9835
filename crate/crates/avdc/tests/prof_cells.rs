use std::sync::Arc;

use avdc::core::{Avdc, AvdcError, AvdcExt, Bounds, CellVal, Datum, Frame, ObjId, Path};
use avdc::instances::{
    all_functors, compose_functors, fin_prof, hom_prof, identity_functor, is_functor,
    validate_prof, FinCat, FunctorTables, ProfData, ProfInstance,
};

fn walking_arrow() -> FinCat {
    FinCat::poset(
        "arr",
        vec!["a".into(), "b".into()],
        &[vec![true, true], vec![false, true]],
    )
    .unwrap()
}

fn point() -> FinCat {
    FinCat::discrete("pt", vec!["*".into()])
}

/// One object, morphisms {1, e} with e . e = e.
fn idem() -> FinCat {
    FinCat::new(
        "idem",
        vec!["*".into()],
        vec![vec![vec!["1".into(), "e".into()]]],
        vec![0],
        vec![vec![vec![vec![0, 1, 1, 1]]]],
    )
    .unwrap()
}

/// P : arr -|-> pt with P(a, *) = {p0, p1}, P(b, *) = {q0} and the arrow
/// acting by q0 |-> p0.
fn prof_p() -> ProfData {
    ProfData {
        name: "P".into(),
        src: 0,
        tgt: 1,
        fib: vec![vec![vec!["p0".into(), "p1".into()]], vec![vec!["q0".into()]]],
        lam: vec![
            vec![vec![vec![0, 1]], vec![vec![0]]],
            vec![vec![vec![]], vec![vec![0]]],
        ],
        rho: vec![vec![vec![vec![0, 1]]], vec![vec![vec![0]]]],
    }
}

/// Q : pt -|-> arr with Q(*, a) = {r0}, Q(*, b) = {s0, s1} and the arrow
/// acting by r0 |-> s0.
fn prof_q() -> ProfData {
    ProfData {
        name: "Q".into(),
        src: 1,
        tgt: 0,
        fib: vec![vec![vec!["r0".into()], vec!["s0".into(), "s1".into()]]],
        lam: vec![vec![vec![vec![0], vec![0, 1]]]],
        rho: vec![vec![
            vec![vec![0], vec![0]],
            vec![vec![], vec![0, 1]],
        ]],
    }
}

/// A profunctor over the one-object discrete category is just a set.
fn set_prof(name: &str, k: usize) -> ProfData {
    let fib: Vec<String> = (0..k).map(|i| format!("{name}{i}")).collect();
    let idtab: Vec<u32> = (0..k as u32).collect();
    ProfData {
        name: name.into(),
        src: 0,
        tgt: 0,
        fib: vec![vec![fib]],
        lam: vec![vec![vec![idtab.clone()]]],
        rho: vec![vec![vec![idtab]]],
    }
}

fn arrow_pt_instance() -> Arc<ProfInstance> {
    fin_prof(vec![walking_arrow(), point()], vec![prof_p(), prof_q()]).unwrap()
}

fn const_a_tables() -> FunctorTables {
    FunctorTables {
        obj: vec![0, 0],
        mor: vec![vec![vec![0], vec![0]], vec![vec![], vec![0]]],
    }
}

fn vert_of(inst: &ProfInstance, dom: usize, cod: usize, t: &FunctorTables) -> avdc::VertId {
    inst.vert_of_tables(ObjId::from(dom), ObjId::from(cod), t)
        .expect("functor should be enumerated")
}

fn table(cell: &CellVal) -> &Vec<u32> {
    match &cell.datum {
        Datum::Table(t) => t,
        other => panic!("expected a table, got {other:?}"),
    }
}

#[test]
fn functor_enumeration_counts() {
    let (arr, pt, id2) = (walking_arrow(), point(), idem());
    assert_eq!(all_functors(&arr, &arr).len(), 3);
    assert_eq!(all_functors(&arr, &pt).len(), 1);
    assert_eq!(all_functors(&pt, &arr).len(), 2);
    assert_eq!(all_functors(&pt, &pt).len(), 1);
    // Monoid maps {1, e} -> {1, e}: e goes to either idempotent.
    assert_eq!(all_functors(&id2, &id2).len(), 2);
    for t in all_functors(&id2, &id2) {
        assert!(is_functor(&id2, &id2, &t));
    }
    let idf = identity_functor(&arr);
    assert_eq!(compose_functors(&idf, &const_a_tables()), const_a_tables());
    assert_eq!(compose_functors(&const_a_tables(), &idf), const_a_tables());
}

#[test]
fn hom_profunctor_tables() {
    let arr = walking_arrow();
    let h = hom_prof(&arr, 0);
    assert_eq!(h.name, "hom:arr");
    let sizes: Vec<Vec<usize>> =
        h.fib.iter().map(|r| r.iter().map(|f| f.len()).collect()).collect();
    assert_eq!(sizes, vec![vec![1, 1], vec![0, 1]]);
    validate_prof(&arr, &arr, &h).unwrap();
    validate_prof(&walking_arrow(), &point(), &prof_p()).unwrap();
    validate_prof(&point(), &walking_arrow(), &prof_q()).unwrap();
}

#[test]
fn invalid_profunctors_are_refused() {
    let (arr, pt) = (walking_arrow(), point());
    // Break unitality of the left action on P(a, *).
    let mut bad = prof_p();
    bad.lam[0][0][0] = vec![1, 0];
    match validate_prof(&arr, &pt, &bad) {
        Err(AvdcError::Load(msg)) => assert!(msg.contains("unital"), "{msg}"),
        other => panic!("expected a load error, got {other:?}"),
    }
    // Truncate an action table.
    let mut bad = prof_p();
    bad.rho[0][0][0] = vec![0];
    assert!(matches!(validate_prof(&arr, &pt, &bad), Err(AvdcError::Load(_))));
    // Dangling category index.
    let mut bad = prof_p();
    bad.tgt = 7;
    assert!(matches!(
        fin_prof(vec![walking_arrow(), point()], vec![bad]),
        Err(AvdcError::Load(_))
    ));
    // Duplicate names.
    assert!(matches!(
        fin_prof(vec![point(), point()], vec![]),
        Err(AvdcError::Load(_))
    ));
    assert!(matches!(
        fin_prof(vec![walking_arrow(), point()], vec![prof_p(), prof_p()]),
        Err(AvdcError::Load(_))
    ));
}

#[test]
fn identity_cells_are_valid_and_unique_when_thin() {
    let inst = fin_prof(vec![walking_arrow()], vec![]).unwrap();
    let j = inst.hom_hor(0);
    let id = inst.identity_hor(j);
    assert!(inst.cell_valid(&id));
    // Every fibre of the hom profunctor of a poset is at most a singleton,
    // so the identity frame admits exactly the identity cell.
    let found = inst.cells(&id.frame);
    assert_eq!(found.len(), 1);
    assert_eq!(found[0], id);
    for v in 0..inst.skeleton().vert_count() {
        let cell = inst.identity_vert(v.into());
        assert!(inst.cell_valid(&cell), "identity of vertical {v}");
    }
}

#[test]
fn cells_are_exactly_the_equivariant_families() {
    // Over the idempotent monoid, cells hom => hom along identities are the
    // bimodule endomaps of the monoid: u |-> u and u |-> e.u.
    let inst = fin_prof(vec![idem()], vec![]).unwrap();
    let j = inst.hom_hor(0);
    let frame = Frame {
        f: inst.identity_of(ObjId::from(0)),
        g: inst.identity_of(ObjId::from(0)),
        src: Path::single(j),
        tgt: Path::single(j),
    };
    let tables: Vec<Vec<u32>> = inst.cells(&frame).iter().map(|c| table(c).clone()).collect();
    assert_eq!(tables, vec![vec![0, 1], vec![1, 1]]);

    // On the arrow fixture, cells P => P along identities: the value at
    // (b, q0) is forced, its arrow image pins the value at (a, p0), and the
    // value at (a, p1) is free.
    let inst = arrow_pt_instance();
    let p = inst.hor_named("P").unwrap();
    let frame = Frame {
        f: inst.identity_of(ObjId::from(0)),
        g: inst.identity_of(ObjId::from(1)),
        src: Path::single(p),
        tgt: Path::single(p),
    };
    let tables: Vec<Vec<u32>> = inst.cells(&frame).iter().map(|c| table(c).clone()).collect();
    assert_eq!(tables, vec![vec![0, 0, 0], vec![0, 1, 0]]);
    for c in inst.cells(&frame) {
        assert!(inst.cell_valid(&c));
    }
}

#[test]
fn nullary_cells_are_natural_families() {
    // Families over objects of idem valued in its homs, natural in the
    // object: both elements are central, so both qualify.
    let inst = fin_prof(vec![idem()], vec![]).unwrap();
    let id_v = inst.identity_of(ObjId::from(0));
    let frame = Frame {
        f: id_v,
        g: id_v,
        src: Path::Empty(ObjId::from(0)),
        tgt: Path::single(inst.hom_hor(0)),
    };
    let tables: Vec<Vec<u32>> = inst.cells(&frame).iter().map(|c| table(c).clone()).collect();
    assert_eq!(tables, vec![vec![0], vec![1]]);
    let cells = inst.cells(&frame);
    assert!(inst.cartesian_oracle(&cells[0]).unwrap());
    assert!(!inst.cartesian_oracle(&cells[1]).unwrap());
}

#[test]
fn cartesian_oracle_detects_bijective_components() {
    let inst = arrow_pt_instance();
    let p = inst.hor_named("P").unwrap();
    assert!(inst.cartesian_oracle(&inst.identity_hor(p)).unwrap());
    let frame = Frame {
        f: inst.identity_of(ObjId::from(0)),
        g: inst.identity_of(ObjId::from(1)),
        src: Path::single(p),
        tgt: Path::single(p),
    };
    let cells = inst.cells(&frame);
    assert_eq!(cells.len(), 2);
    // [0, 0, 0] collapses the fibre over a; [0, 1, 0] is the identity.
    assert!(!inst.cartesian_oracle(&cells[0]).unwrap());
    assert!(inst.cartesian_oracle(&cells[1]).unwrap());
}

#[test]
fn compose_matches_hand_computation() {
    let inst = arrow_pt_instance();
    let p = inst.hor_named("P").unwrap();
    let idp = inst.identity_hor(p);
    assert_eq!(inst.compose(&idp, &[idp.clone()]).unwrap(), idp);

    // psi: a natural family over (const_a, id) picking the unique arrow
    // a -> x at each x.
    let id_arr = inst.identity_of(ObjId::from(0));
    let const_a = vert_of(&inst, 0, 0, &const_a_tables());
    let psi = CellVal::new(
        Frame {
            f: const_a,
            g: id_arr,
            src: Path::Empty(ObjId::from(0)),
            tgt: Path::Empty(ObjId::from(0)),
        },
        Datum::Table(vec![0, 0]),
    );
    assert!(inst.cell_valid(&psi));

    // Pasting psi beside the identity of P restricts P along const_a: on the
    // point over b the value moves to the fibre over a along the arrow.
    let composite = inst.compose(&idp, &[psi.clone(), idp.clone()]).unwrap();
    assert_eq!(composite.frame.f, const_a);
    assert_eq!(composite.frame.g, inst.identity_of(ObjId::from(1)));
    assert_eq!(table(&composite), &vec![0, 1, 0]);
    assert!(inst.cell_valid(&composite));

    // A purely vertical paste: psi2 over (id, const_b) picks x -> b; the
    // composite over (const_a, const_b) is the constant family at a -> b.
    let const_b = vert_of(
        &inst,
        0,
        0,
        &FunctorTables {
            obj: vec![1, 1],
            mor: vec![vec![vec![0], vec![0]], vec![vec![], vec![0]]],
        },
    );
    let psi2 = CellVal::new(
        Frame {
            f: id_arr,
            g: const_b,
            src: Path::Empty(ObjId::from(0)),
            tgt: Path::Empty(ObjId::from(0)),
        },
        Datum::Table(vec![0, 0]),
    );
    assert!(inst.cell_valid(&psi2));
    let all_nullary = inst.compose(&psi2, &[psi.clone()]).unwrap();
    assert_eq!(all_nullary.frame.f, const_a);
    assert_eq!(all_nullary.frame.g, const_b);
    assert_eq!(all_nullary.frame.src, Path::Empty(ObjId::from(0)));
    assert_eq!(table(&all_nullary), &vec![0, 0]);
}

#[test]
fn coend_composites_match_hand_computation() {
    let inst = arrow_pt_instance();
    let arr_hom = inst.hom_hor(0);
    let p = inst.hor_named("P").unwrap();

    // hom . hom over the arrow collapses back to hom.
    let path = Path::from_edges(ObjId::from(0), vec![arr_hom, arr_hom]);
    let c = inst.coend_composite(&path, "HH").unwrap();
    let sizes: Vec<Vec<usize>> =
        c.prof.fib.iter().map(|r| r.iter().map(|f| f.len()).collect()).collect();
    assert_eq!(sizes, vec![vec![1, 1], vec![0, 1]]);
    assert_eq!(c.cocart, vec![0, 0, 0, 0]);
    validate_prof(&walking_arrow(), &walking_arrow(), &c.prof).unwrap();

    // hom . P collapses to P: the two points over (a, *) that differ by
    // sliding the arrow across the junction fall into one class.
    let path = Path::from_edges(ObjId::from(0), vec![arr_hom, p]);
    let c = inst.coend_composite(&path, "HP").unwrap();
    let sizes: Vec<Vec<usize>> =
        c.prof.fib.iter().map(|r| r.iter().map(|f| f.len()).collect()).collect();
    assert_eq!(sizes, vec![vec![2], vec![1]]);
    assert_eq!(c.cocart, vec![0, 1, 0, 0]);
    assert_eq!(c.prof.lam[0][1][0], vec![0]);
    validate_prof(&walking_arrow(), &point(), &c.prof).unwrap();

    // The empty path composes to the hom profunctor with identity classes.
    let c = inst.coend_composite(&Path::Empty(ObjId::from(0)), "E").unwrap();
    assert_eq!(c.cocart, vec![0, 0]);
    let sizes: Vec<Vec<usize>> =
        c.prof.fib.iter().map(|r| r.iter().map(|f| f.len()).collect()).collect();
    assert_eq!(sizes, vec![vec![1, 1], vec![0, 1]]);

    // Over the discrete point, profunctors are sets and the coend of two of
    // them is their product: nothing is identified.
    let sets = fin_prof(vec![point_at_zero()], vec![set_prof("j", 2), set_prof("k", 2)])
        .unwrap();
    let (j, k) = (sets.hor_named("j").unwrap(), sets.hor_named("k").unwrap());
    let c = sets
        .coend_composite(&Path::from_edges(ObjId::from(0), vec![j, k]), "JK")
        .unwrap();
    assert_eq!(c.prof.fib[0][0].len(), 4);
    assert_eq!(c.cocart, vec![0, 1, 2, 3]);
}

fn point_at_zero() -> FinCat {
    FinCat::discrete("pt", vec!["*".into()])
}

#[test]
fn coend_universal_table_is_a_cell() {
    // Rebuild the instance with the computed composite as a new horizontal:
    // the class map over identities must then be a genuine cell onto it.
    let inst = arrow_pt_instance();
    let arr_hom = inst.hom_hor(0);
    let p = inst.hor_named("P").unwrap();
    let path = Path::from_edges(ObjId::from(0), vec![arr_hom, p]);
    let c = inst.coend_composite(&path, "HP").unwrap();

    let inst2 = fin_prof(vec![walking_arrow(), point()], vec![prof_p(), c.prof]).unwrap();
    let frame = Frame {
        f: inst2.identity_of(ObjId::from(0)),
        g: inst2.identity_of(ObjId::from(1)),
        src: Path::from_edges(
            ObjId::from(0),
            vec![inst2.hom_hor(0), inst2.hor_named("P").unwrap()],
        ),
        tgt: Path::single(inst2.hor_named("HP").unwrap()),
    };
    let univ = CellVal::new(frame, Datum::Table(c.cocart));
    assert!(inst2.cell_valid(&univ));
}

#[test]
fn restriction_reindexes_fibres() {
    let inst = arrow_pt_instance();
    let p = inst.hor_named("P").unwrap();
    let const_a = vert_of(&inst, 0, 0, &const_a_tables());
    let id_pt = inst.identity_of(ObjId::from(1));
    let r = inst.restriction_prof(p, const_a, id_pt, "R").unwrap();
    let sizes: Vec<Vec<usize>> =
        r.fib.iter().map(|row| row.iter().map(|f| f.len()).collect()).collect();
    assert_eq!(sizes, vec![vec![2], vec![2]]);
    // The arrow now acts through const_a, hence by the identity of P(a, *).
    assert_eq!(r.lam[0][1][0], vec![0, 1]);
    validate_prof(&walking_arrow(), &point(), &r).unwrap();

    // Restricting along functors with the wrong codomain is refused.
    let bang = vert_of(
        &inst,
        0,
        1,
        &FunctorTables { obj: vec![0, 0], mor: vec![vec![vec![0], vec![0]], vec![vec![], vec![0]]] },
    );
    assert!(matches!(
        inst.restriction_prof(p, bang, id_pt, "bad"),
        Err(AvdcError::Precondition(_))
    ));
}

#[test]
fn graph_of_path_structure() {
    let inst = arrow_pt_instance();

    // Graph of the arrow's hom: elements of hom glued into the chain of
    // length three.
    let g = inst.graph_of_path(&Path::single(inst.hom_hor(0)), "g-hom").unwrap();
    assert_eq!(g.cat.n_objects(), 3);
    assert_eq!(
        g.cat.objects,
        vec!["a|a<=a|a".to_string(), "a|a<=b|b".to_string(), "b|b<=b|b".to_string()]
    );
    let sizes: Vec<Vec<usize>> = (0..3)
        .map(|x| (0..3).map(|y| g.cat.hom_size(x, y)).collect())
        .collect();
    assert_eq!(sizes, vec![vec![1, 1, 1], vec![0, 1, 1], vec![0, 0, 1]]);
    assert_eq!(g.projections[0].obj, vec![0, 0, 1]);
    assert_eq!(g.projections[1].obj, vec![0, 1, 1]);
    assert_eq!(g.proj_tables, vec![vec![0, 0, 0]]);
    for t in &g.projections {
        assert!(is_functor(&g.cat, &walking_arrow(), t));
    }

    // Graph of P: p0 sits under q0, p1 is incomparable to it.
    let g = inst.graph_of_path(&Path::single(inst.hor_named("P").unwrap()), "g-p").unwrap();
    assert_eq!(
        g.cat.objects,
        vec!["a|p0|*".to_string(), "a|p1|*".to_string(), "b|q0|*".to_string()]
    );
    let sizes: Vec<Vec<usize>> = (0..3)
        .map(|x| (0..3).map(|y| g.cat.hom_size(x, y)).collect())
        .collect();
    assert_eq!(sizes, vec![vec![1, 0, 1], vec![0, 1, 0], vec![0, 0, 1]]);

    let err = inst.graph_of_path(&Path::Empty(ObjId::from(0)), "g-e");
    assert!(matches!(err, Err(AvdcError::Precondition(_))));
}

#[test]
fn graph_extension_yields_projection_cells() {
    let inst = arrow_pt_instance();
    let p = inst.hor_named("P").unwrap();
    let ext = inst.extend_with_graph(&Path::single(p), "gr").unwrap();
    assert_eq!(ext.inst.cats().len(), 3);
    assert_eq!(ext.projection_cells.len(), 1);
    let cell = &ext.projection_cells[0];
    assert!(ext.inst.cell_valid(cell));
    assert_eq!(cell.frame.src, Path::Empty(ext.graph_obj));
    assert_eq!(table(cell), &vec![0, 1, 0]);

    // A two-edge path produces a composable pair of projection cells.
    let path = Path::from_edges(ObjId::from(0), vec![inst.hom_hor(0), p]);
    let ext = inst.extend_with_graph(&path, "gr2").unwrap();
    assert_eq!(ext.projection_cells.len(), 2);
    assert_eq!(ext.projection_cells[0].frame.g, ext.projection_cells[1].frame.f);
    for cell in &ext.projection_cells {
        assert!(ext.inst.cell_valid(cell));
    }
}

#[test]
fn oversized_or_misnamed_instances_are_refused() {
    // A 25-element set as a profunctor over the point: candidate families
    // for a single edge already overflow the budget.
    let err = fin_prof(vec![point_at_zero()], vec![set_prof("big", 25)]).err();
    assert!(matches!(err, Some(AvdcError::TooLarge(_))), "{err:?}");

    // Too many functors between large discrete categories.
    let names: Vec<String> = (0..6).map(|i| format!("x{i}")).collect();
    let err = fin_prof(vec![FinCat::discrete("d6", names)], vec![]).err();
    assert!(matches!(err, Some(AvdcError::TooLarge(_))), "{err:?}");
}

#[test]
fn axioms_hold_on_profunctor_instances() {
    let inst = arrow_pt_instance();
    let report = avdc::core::check_axioms(inst.as_ref(), &Bounds::new(2, 400_000));
    assert!(report.pass, "{}", report.render());

    let inst = fin_prof(vec![idem()], vec![]).unwrap();
    let report = avdc::core::check_axioms(inst.as_ref(), &Bounds::new(3, 150_000));
    assert!(report.pass, "{}", report.render());
}
