use std::collections::HashSet;
use std::sync::Arc;

use avdc::core::{Avdc, AvdcExt, CellVal, Datum, Frame, ObjId, Path};
use avdc::instances::{span_finset, span_finset_with_apexes, FinSetUniverse, SpanInstance};

fn inst() -> Arc<SpanInstance> {
    let u = FinSetUniverse::sized("u", &[1, 2]);
    span_finset_with_apexes(&u, &[0]).unwrap()
}

/// Independent pullback enumeration: filter the full product of apex
/// ranges by the leg-matching conditions, in lexicographic order.
fn oracle_pullback(k: &SpanInstance, p: &Path) -> Vec<Vec<u32>> {
    let edges = match p {
        Path::Empty(a) => {
            return (0..k.set_elems(*a).len() as u32).map(|x| vec![x]).collect();
        }
        Path::Edges(es) => es,
    };
    let sizes: Vec<usize> = edges.iter().map(|&e| k.span(e).apex).collect();
    let mut out = vec![Vec::new()];
    for s in sizes {
        let mut next = Vec::new();
        for prefix in &out {
            for v in 0..s as u32 {
                let mut p2 = prefix.clone();
                p2.push(v);
                next.push(p2);
            }
        }
        out = next;
    }
    out.into_iter()
        .filter(|tup| {
            (1..tup.len()).all(|i| {
                k.span(edges[i - 1]).right[tup[i - 1] as usize]
                    == k.span(edges[i]).left[tup[i] as usize]
            })
        })
        .collect()
}

fn frame_census(k: &SpanInstance, max_len: usize) -> Vec<Frame> {
    let mut out = Vec::new();
    for a in 0..k.skeleton().object_count() {
        for src in k.paths_from(ObjId::from(a), max_len) {
            let b = k.path_end(&src);
            for &f in k.skeleton().verts_out(ObjId::from(a)) {
                for &g in k.skeleton().verts_out(b) {
                    for tgt in k.target_paths(k.vert_cod(f), k.vert_cod(g)) {
                        out.push(Frame { f, g, src: src.clone(), tgt });
                    }
                }
            }
        }
    }
    out
}

#[test]
fn unary_cells_match_direct_table_filter() {
    let k = inst();
    let mut frames = 0u32;
    let mut populated = 0u32;
    for frame in frame_census(&k, 2) {
        if frame.tgt.len() != 1 {
            continue;
        }
        frames += 1;
        let legs = k.span(frame.tgt.edges()[0]);
        let tuples = oracle_pullback(&k, &frame.src);
        // Every assignment of apex values to tuples, kept when it commutes
        // with the frame's verticals on each tuple.
        let mut tables = vec![Vec::new()];
        for tup in &tuples {
            let fa = k.apply(frame.f, k.tuple_start(&frame.src, tup));
            let gb = k.apply(frame.g, k.tuple_end(&frame.src, tup));
            let mut next = Vec::new();
            for prefix in &tables {
                for s in 0..legs.apex as u32 {
                    if legs.left[s as usize] == fa && legs.right[s as usize] == gb {
                        let mut p2: Vec<u32> = prefix.clone();
                        p2.push(s);
                        next.push(p2);
                    }
                }
            }
            tables = next;
        }
        let expected: Vec<CellVal> = tables
            .into_iter()
            .map(|t| CellVal::new(frame.clone(), Datum::Table(t)))
            .collect();
        if !expected.is_empty() {
            populated += 1;
        }
        assert_eq!(k.cells(&frame), expected, "frame {}", k.frame_name(&frame));
    }
    assert!(frames > 500, "census too small: {frames}");
    assert!(populated > 0 && populated < frames);
}

#[test]
fn nullary_cells_iff_boundary_squares_commute() {
    let k = inst();
    for frame in frame_census(&k, 2) {
        if frame.tgt.len() != 0 {
            continue;
        }
        let commutes = oracle_pullback(&k, &frame.src).iter().all(|tup| {
            k.apply(frame.f, k.tuple_start(&frame.src, tup))
                == k.apply(frame.g, k.tuple_end(&frame.src, tup))
        });
        let cells = k.cells(&frame);
        assert_eq!(cells.len(), usize::from(commutes), "frame {}", k.frame_name(&frame));
        if commutes {
            assert_eq!(cells[0].datum, Datum::Thin);
        }
    }
}

#[test]
fn compose_agrees_with_direct_evaluation() {
    let k = inst();
    // Sweep two-layer configurations whose tops are unary cells on single
    // edges, comparing against by-hand evaluation: split the tuple, map each
    // block through its top's table, look the image up in the bottom's
    // source pullback.
    let mut checked = 0u32;
    'outer: for frame in frame_census(&k, 2) {
        if frame.src.len() == 0 || frame.tgt.len() != 1 {
            continue;
        }
        for bottom in k.cells(&frame).into_iter().take(2) {
            let edge_cells: Vec<Vec<CellVal>> = frame
                .src
                .edges()
                .iter()
                .map(|&e| {
                    let f = Frame {
                        f: k.identity_of(k.hor_src(e)),
                        g: k.identity_of(k.hor_tgt(e)),
                        src: Path::single(e),
                        tgt: Path::single(e),
                    };
                    k.cells(&f)
                })
                .collect();
            let tops: Vec<CellVal> =
                edge_cells.iter().map(|cs| cs.last().unwrap().clone()).collect();
            let got = k.compose(&bottom, &tops).unwrap();

            let src_tuples = oracle_pullback(&k, &got.frame.src);
            let bottom_tuples = oracle_pullback(&k, &bottom.frame.src);
            let expected: Vec<u32> = src_tuples
                .iter()
                .map(|tup| {
                    let mid: Vec<u32> = tup
                        .iter()
                        .zip(&tops)
                        .map(|(&s, t)| match &t.datum {
                            Datum::Table(tt) => tt[s as usize],
                            _ => unreachable!(),
                        })
                        .collect();
                    let pos = bottom_tuples.iter().position(|b| *b == mid).unwrap();
                    match &bottom.datum {
                        Datum::Table(bt) => bt[pos],
                        _ => unreachable!(),
                    }
                })
                .collect();
            assert_eq!(got.datum, Datum::Table(expected));
            checked += 1;
            if checked > 400 {
                break 'outer;
            }
        }
    }
    assert!(checked > 50, "sweep too small: {checked}");
}

#[test]
fn swap_spans_compose_to_the_diagonal() {
    // On A = {0, 1}: pasting two copies of the swap-graph span into the
    // identity cell of the diagonal span gives the table [0, 1] on the
    // two-element pullback {(0,1), (1,0)}.
    let u = FinSetUniverse::sized("u", &[2]);
    let k = span_finset(&u).unwrap();
    let a = ObjId::from(0usize);
    let swap = k
        .hor_of_span(a, a, avdc::instances::SpanLegs {
            apex: 2,
            left: vec![0, 1],
            right: vec![1, 0],
        })
        .unwrap();
    let diag = k.unit_span(a);
    let path = Path::from_edges(a, vec![swap, swap]);
    assert_eq!(
        k.pullback_tuples(&path),
        vec![vec![0u32, 1], vec![1, 0]],
        "pullback of swap;swap"
    );
    let phi_frame = Frame {
        f: k.identity_of(a),
        g: k.identity_of(a),
        src: path,
        tgt: Path::single(diag),
    };
    let cells = k.cells(&phi_frame);
    assert_eq!(cells.len(), 1);
    let phi = &cells[0];
    assert_eq!(phi.datum, Datum::Table(vec![0, 1]));
    assert!(k.weakly_cocartesian_oracle(phi).unwrap());

    let got = k.compose(&k.identity_hor(diag), std::slice::from_ref(phi)).unwrap();
    assert_eq!(got.datum, Datum::Table(vec![0, 1]));
}

#[test]
fn oracles_on_identity_and_collapse_cells() {
    let u = FinSetUniverse::sized("u", &[2]);
    let k = span_finset(&u).unwrap();
    let a = ObjId::from(0usize);
    let diag = k.unit_span(a);
    let id_cell = k.identity_hor(diag);
    assert!(k.weakly_cocartesian_oracle(&id_cell).unwrap());
    assert!(k.cartesian_oracle(&id_cell).unwrap());

    // Two points sitting over (0, 0), collapsed into the diagonal: a valid
    // cell whose underlying function is neither injective nor surjective.
    let flat = k
        .hor_of_span(a, a, avdc::instances::SpanLegs {
            apex: 2,
            left: vec![0, 0],
            right: vec![0, 0],
        })
        .unwrap();
    let chi_frame = Frame {
        f: k.identity_of(a),
        g: k.identity_of(a),
        src: Path::single(flat),
        tgt: Path::single(diag),
    };
    let cells = k.cells(&chi_frame);
    assert_eq!(cells.len(), 1);
    assert_eq!(cells[0].datum, Datum::Table(vec![0, 0]));
    assert!(!k.weakly_cocartesian_oracle(&cells[0]).unwrap());
    assert!(!k.cartesian_oracle(&cells[0]).unwrap());
}

#[test]
fn companion_conjoint_and_unit_spans() {
    let u = FinSetUniverse::sized("u", &[1, 2]);
    let k = span_finset(&u).unwrap();
    let (s0, s1) = (ObjId::from(0usize), ObjId::from(1usize));
    // The constant-0 function s1 -> s1 alongside identities.
    let f = k.vert_of_table(s1, s1, vec![0, 0]).unwrap();
    let comp = k.span(k.companion_span(f));
    assert_eq!((comp.apex, comp.left.clone(), comp.right.clone()), (2, vec![0, 1], vec![0, 0]));
    let conj = k.span(k.conjoint_span(f));
    assert_eq!((conj.apex, conj.left.clone(), conj.right.clone()), (2, vec![0, 0], vec![0, 1]));
    assert!(k.is_jointly_monic(k.companion_span(f)));
    assert!(k.is_jointly_monic(k.conjoint_span(f)));

    let unit = k.span(k.unit_span(s0));
    assert_eq!((unit.apex, unit.left.clone(), unit.right.clone()), (1, vec![0], vec![0]));

    // A two-point span over the singleton is not jointly monic.
    let fat = k
        .hor_of_span(s0, s0, avdc::instances::SpanLegs {
            apex: 2,
            left: vec![0, 0],
            right: vec![0, 0],
        })
        .unwrap();
    assert!(!k.is_jointly_monic(fat));
}

#[test]
fn empty_source_tops_thread_the_junction_element() {
    let u = FinSetUniverse::sized("u", &[2]);
    let k = span_finset(&u).unwrap();
    let a = ObjId::from(0usize);
    let diag = k.unit_span(a);
    let swap = k.vert_of_table(a, a, vec![1, 0]).unwrap();

    // Bottom with empty source fed by a vertical identity: the composite's
    // table must be indexed by the basepoint set.
    let bottom_frame = Frame {
        f: k.identity_of(a),
        g: k.identity_of(a),
        src: Path::Empty(a),
        tgt: Path::single(diag),
    };
    let unit_cell = k
        .cells(&bottom_frame)
        .into_iter()
        .find(|c| c.datum == Datum::Table(vec![0, 1]))
        .unwrap();
    let got = k.compose(&unit_cell, &[k.identity_vert(swap)]).unwrap();
    assert_eq!(got.frame.f, swap);
    assert_eq!(got.frame.g, swap);
    // Composite table sends x to the diagonal point at swap(x).
    assert_eq!(got.datum, Datum::Table(vec![1, 0]));

    // A unary top with empty source in the middle of a row picks up the
    // junction element between its neighbours.
    let id_cell = k.identity_hor(diag);
    let two = Frame {
        f: k.identity_of(a),
        g: k.identity_of(a),
        src: Path::from_edges(a, vec![diag, diag]),
        tgt: Path::single(diag),
    };
    let mult = k
        .cells(&two)
        .into_iter()
        .find(|c| c.datum == Datum::Table(vec![0, 1]))
        .unwrap();
    let wide = k
        .compose(&mult, &[id_cell.clone(), unit_cell.clone()])
        .unwrap();
    // Pasting the unit cell on the right of an identity top is neutral on
    // the table.
    assert_eq!(wide.frame.src, Path::single(diag));
    assert_eq!(wide.datum, Datum::Table(vec![0, 1]));
}

#[test]
fn invalid_inputs_are_rejected() {
    let k = inst();
    let (s0, s1) = (ObjId::from(0usize), ObjId::from(1usize));
    let j = k.unit_span(s1);
    let good = k.identity_hor(j);
    let mut bad = good.clone();
    bad.datum = Datum::Table(vec![9; k.span(j).apex]);
    assert!(!k.cell_valid(&bad));
    assert!(k.compose(&bad, &[good.clone()]).is_err());
    assert!(k.compose(&good, &[bad]).is_err());

    // Frames whose boundaries do not line up carry no cells.
    let f10 = k.skeleton().verts_between(s1, s0)[0];
    let broken = Frame {
        f: f10,
        g: k.identity_of(s1),
        src: Path::single(j),
        tgt: Path::single(j),
    };
    assert!(k.cells(&broken).is_empty());
}

#[test]
fn restriction_tuples_are_the_wide_pullback() {
    let u = FinSetUniverse::sized("u", &[1, 2]);
    let k = span_finset(&u).unwrap();
    let (s0, s1) = (ObjId::from(0usize), ObjId::from(1usize));
    // K the diagonal on s1, f: s0 -> s1 picking 1, g = id on s1.
    let f = k.vert_of_table(s0, s1, vec![1]).unwrap();
    let g = k.identity_of(s1);
    let diag = k.unit_span(s1);
    assert_eq!(k.restriction_tuples(diag, f, g), vec![(0, 1, 1)]);
    assert_eq!(k.cospan_tuples(f, g), vec![(0, 1)]);
    // Composite span of the empty path at s1 is the unit span.
    let c = k.composite_span(&Path::Empty(s1));
    assert_eq!((c.apex, c.left, c.right), (2, vec![0, 1], vec![0, 1]));

    let mut seen = HashSet::new();
    for tup in k.pullback_tuples(&Path::from_edges(s1, vec![diag, diag])) {
        assert!(seen.insert(tup));
    }
    assert_eq!(seen.len(), 2);
}
