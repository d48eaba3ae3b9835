use std::collections::HashMap;

use avdc::core::{
    vertical_2cat, Avdc, AvdcExt, Bounds, CellVal, Datum, FinTwoCat, Frame, HorId, ObjId,
    OneCellInfo, Path, TwoCellInfo, VertId,
};
use avdc::instances::quintets;

fn ones_xy() -> Vec<OneCellInfo> {
    vec![
        OneCellInfo { name: "idX".into(), dom: 0, cod: 0 },
        OneCellInfo { name: "idY".into(), dom: 1, cod: 1 },
        OneCellInfo { name: "u".into(), dom: 0, cod: 1 },
    ]
}

fn table(entries: &[((usize, usize), usize)]) -> HashMap<(usize, usize), usize> {
    entries.iter().copied().collect()
}

/// Two objects and one arrow between them, with identity 2-cells only.
fn chain2() -> FinTwoCat {
    FinTwoCat::locally_discrete(
        "chain2",
        vec!["X".into(), "Y".into()],
        ones_xy(),
        vec![0, 1],
        table(&[((0, 0), 0), ((1, 1), 1), ((2, 0), 2), ((1, 2), 2)]),
    )
}

/// chain2 with an idempotent 2-cell e: u => u.
fn idem2() -> FinTwoCat {
    FinTwoCat {
        name: "idem2".into(),
        objects: vec!["X".into(), "Y".into()],
        ones: ones_xy(),
        one_identities: vec![0, 1],
        one_comp: table(&[((0, 0), 0), ((1, 1), 1), ((2, 0), 2), ((1, 2), 2)]),
        twos: vec![
            TwoCellInfo { name: "id[idX]".into(), src: 0, tgt: 0 },
            TwoCellInfo { name: "id[idY]".into(), src: 1, tgt: 1 },
            TwoCellInfo { name: "id[u]".into(), src: 2, tgt: 2 },
            TwoCellInfo { name: "e".into(), src: 2, tgt: 2 },
        ],
        two_identities: vec![0, 1, 2],
        vcomp: table(&[
            ((0, 0), 0),
            ((1, 1), 1),
            ((2, 2), 2),
            ((3, 2), 3),
            ((2, 3), 3),
            ((3, 3), 3),
        ]),
        hcomp: table(&[((0, 0), 0), ((1, 1), 1), ((2, 0), 2), ((3, 0), 3), ((1, 2), 2), ((1, 3), 3)]),
    }
}

/// One object, its identity 1-cell, and an idempotent 2-cell on it; both
/// compositions of 2-cells are "e absorbs identities".
fn mono2() -> FinTwoCat {
    FinTwoCat {
        name: "mono2".into(),
        objects: vec!["*".into()],
        ones: vec![OneCellInfo { name: "id*".into(), dom: 0, cod: 0 }],
        one_identities: vec![0],
        one_comp: table(&[((0, 0), 0)]),
        twos: vec![
            TwoCellInfo { name: "id[id*]".into(), src: 0, tgt: 0 },
            TwoCellInfo { name: "e".into(), src: 0, tgt: 0 },
        ],
        two_identities: vec![0],
        vcomp: table(&[((0, 0), 0), ((0, 1), 1), ((1, 0), 1), ((1, 1), 1)]),
        hcomp: table(&[((0, 0), 0), ((0, 1), 1), ((1, 0), 1), ((1, 1), 1)]),
    }
}

/// Two parallel arrows u, v: X -> Y and a single 2-cell alpha: u => v.
fn alpha2() -> FinTwoCat {
    let mut ones = ones_xy();
    ones.push(OneCellInfo { name: "v".into(), dom: 0, cod: 1 });
    FinTwoCat {
        name: "alpha2".into(),
        objects: vec!["X".into(), "Y".into()],
        ones,
        one_identities: vec![0, 1],
        one_comp: table(&[
            ((0, 0), 0),
            ((1, 1), 1),
            ((2, 0), 2),
            ((3, 0), 3),
            ((1, 2), 2),
            ((1, 3), 3),
        ]),
        twos: vec![
            TwoCellInfo { name: "id[idX]".into(), src: 0, tgt: 0 },
            TwoCellInfo { name: "id[idY]".into(), src: 1, tgt: 1 },
            TwoCellInfo { name: "id[u]".into(), src: 2, tgt: 2 },
            TwoCellInfo { name: "id[v]".into(), src: 3, tgt: 3 },
            TwoCellInfo { name: "alpha".into(), src: 2, tgt: 3 },
        ],
        two_identities: vec![0, 1, 2, 3],
        vcomp: table(&[
            ((0, 0), 0),
            ((1, 1), 1),
            ((2, 2), 2),
            ((3, 3), 3),
            ((4, 2), 4),
            ((3, 4), 4),
        ]),
        hcomp: table(&[
            ((0, 0), 0),
            ((1, 1), 1),
            ((2, 0), 2),
            ((3, 0), 3),
            ((4, 0), 4),
            ((1, 2), 2),
            ((1, 3), 3),
            ((1, 4), 4),
        ]),
    }
}

fn atoms(cells: &[CellVal]) -> Vec<u32> {
    cells
        .iter()
        .map(|c| match c.datum {
            Datum::Atom(t) => t,
            _ => panic!("quintet cell should carry an atom"),
        })
        .collect()
}

#[test]
fn fixtures_are_strict_2_categories() {
    chain2().validate().unwrap();
    idem2().validate().unwrap();
    alpha2().validate().unwrap();
    assert_eq!(chain2().twos.len(), 3);
}

#[test]
fn cell_reversal_swaps_2_cell_boundaries() {
    let co = alpha2().co();
    co.validate().unwrap();
    assert_eq!((co.twos[4].src, co.twos[4].tgt), (3, 2));
    assert_eq!(co.vcomp[&(2, 4)], 4);
    assert_eq!(co.vcomp[&(4, 3)], 4);
}

#[test]
fn skeleton_mirrors_the_2_category() {
    let q = quintets(idem2()).unwrap();
    let skel = q.skeleton();
    assert_eq!(q.name(), "quintets(idem2)");
    assert_eq!(skel.objects.len(), 2);
    assert_eq!(skel.verts.len(), 3);
    assert_eq!(skel.hors.len(), 3);
    assert_eq!(q.identity_of(ObjId::from(0usize)), VertId::from(0usize));
    assert_eq!(
        skel.compose_verts(VertId::from(1usize), VertId::from(2usize)),
        Some(VertId::from(2usize))
    );
}

#[test]
fn unary_cells_are_2_cells_with_matching_boundary() {
    let q = quintets(alpha2()).unwrap();
    let fr = |src: usize, tgt: usize| Frame {
        f: VertId::from(0usize),
        g: VertId::from(1usize),
        src: Path::single(HorId::from(src)),
        tgt: Path::single(HorId::from(tgt)),
    };
    // A cell from the path (v) to u is a 2-cell u => v.
    assert_eq!(atoms(&q.cells(&fr(3, 2))), vec![4]);
    assert_eq!(atoms(&q.cells(&fr(2, 3))), Vec::<u32>::new());
    assert_eq!(atoms(&q.cells(&fr(2, 2))), vec![2]);
}

#[test]
fn nullary_cells_compare_against_the_identity_target() {
    let q = quintets(alpha2()).unwrap();
    let fr = |f: usize, g: usize| Frame {
        f: VertId::from(f),
        g: VertId::from(g),
        src: Path::Empty(ObjId::from(0usize)),
        tgt: Path::Empty(ObjId::from(1usize)),
    };
    assert_eq!(atoms(&q.cells(&fr(2, 3))), vec![4]);
    assert_eq!(atoms(&q.cells(&fr(3, 2))), Vec::<u32>::new());
}

#[test]
fn identity_cells_carry_identity_2_cells() {
    let q = quintets(idem2()).unwrap();
    let ih = q.identity_hor(HorId::from(2usize));
    let iv = q.identity_vert(VertId::from(2usize));
    assert!(q.cell_valid(&ih));
    assert!(q.cell_valid(&iv));
    assert_eq!(ih.datum, Datum::Atom(2));
    assert_eq!(iv.datum, Datum::Atom(2));
}

#[test]
fn pasting_follows_the_2_category() {
    let q = quintets(idem2()).unwrap();
    let bottom_frame = Frame {
        f: VertId::from(0usize),
        g: VertId::from(1usize),
        src: Path::from_edges(ObjId::from(0usize), vec![HorId::from(0usize), HorId::from(2usize)]),
        tgt: Path::single(HorId::from(2usize)),
    };
    let top_frame = Frame {
        f: VertId::from(0usize),
        g: VertId::from(1usize),
        src: Path::single(HorId::from(2usize)),
        tgt: Path::single(HorId::from(2usize)),
    };
    let e_bottom = q.cell_of_two(bottom_frame.clone(), 3).unwrap();
    let id_bottom = q.cell_of_two(bottom_frame, 2).unwrap();
    let e_top = q.cell_of_two(top_frame.clone(), 3).unwrap();
    let id_top = q.cell_of_two(top_frame, 2).unwrap();
    let id_left = q.identity_hor(HorId::from(0usize));

    // An e anywhere in the pasting diagram survives to the composite.
    let c1 = q.compose(&e_bottom, &[id_left.clone(), id_top.clone()]).unwrap();
    assert_eq!(c1.datum, Datum::Atom(3));
    assert_eq!(c1.frame.f, VertId::from(0usize));
    assert_eq!(c1.frame.g, VertId::from(1usize));
    assert_eq!(c1.frame.src.len(), 2);
    let c2 = q.compose(&id_bottom, &[id_left.clone(), e_top]).unwrap();
    assert_eq!(c2.datum, Datum::Atom(3));
    let c3 = q.compose(&id_bottom, &[id_left, id_top]).unwrap();
    assert_eq!(c3.datum, Datum::Atom(2));
}

#[test]
fn nullary_tops_paste_by_whiskering() {
    let q = quintets(alpha2()).unwrap();
    // sigma: (v) => [] over (u, idY) is alpha read as a nullary quintet.
    let sigma = q
        .cell_of_two(
            Frame {
                f: VertId::from(2usize),
                g: VertId::from(1usize),
                src: Path::single(HorId::from(3usize)),
                tgt: Path::Empty(ObjId::from(1usize)),
            },
            4,
        )
        .unwrap();
    let psi = q.identity_vert(VertId::from(1usize));
    let out = q.compose(&psi, &[sigma]).unwrap();
    assert_eq!(out.datum, Datum::Atom(4));
    assert_eq!(out.frame.f, VertId::from(2usize));
    assert_eq!(out.frame.g, VertId::from(1usize));
    assert_eq!(out.frame.tgt.len(), 0);
}

#[test]
fn paths_compose_to_1_morphisms() {
    let q = quintets(idem2()).unwrap();
    assert_eq!(q.path_one(&Path::Empty(ObjId::from(1usize))).unwrap(), 1);
    assert_eq!(q.path_one(&Path::single(HorId::from(2usize))).unwrap(), 2);
    let p = Path::from_edges(ObjId::from(0usize), vec![HorId::from(0usize), HorId::from(2usize)]);
    assert_eq!(q.path_one(&p).unwrap(), 2);
}

#[test]
fn reversing_2_cells_reverses_quintet_orientation() {
    let q = quintets(alpha2().co()).unwrap();
    let fr = |src: usize, tgt: usize| Frame {
        f: VertId::from(0usize),
        g: VertId::from(1usize),
        src: Path::single(HorId::from(src)),
        tgt: Path::single(HorId::from(tgt)),
    };
    assert_eq!(atoms(&q.cells(&fr(2, 3))), vec![4]);
    assert_eq!(atoms(&q.cells(&fr(3, 2))), Vec::<u32>::new());
}

#[test]
fn vertical_2_category_recovers_the_input() {
    let q = quintets(alpha2()).unwrap();
    let (v2, _) = vertical_2cat(q.as_ref()).unwrap();
    v2.validate().unwrap();
    assert_eq!(v2.ones.len(), 4);
    assert_eq!(v2.twos.len(), 5);
}

#[test]
fn axioms_hold_at_length_3_within_budget() {
    for cat in [mono2(), idem2(), alpha2()] {
        cat.validate().unwrap();
        let q = quintets(cat).unwrap();
        let report = avdc::core::check_axioms(q.as_ref(), &Bounds::new(3, 2_000_000));
        assert!(report.pass, "{}", report.render());
    }
}
