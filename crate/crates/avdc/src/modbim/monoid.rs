use crate::core::{
    Avdc, AvdcError, AvdcExt, Bounds, CellVal, Frame, HorId, Meter, ObjId, Path, Report, Result,
    Status, VertId,
};

/// A monoid in an instance: an endo horizontal morphism `alpha` on the
/// carrier with a multiplication cell (alpha, alpha) => alpha and a unit cell
/// () => alpha, both over identity verticals.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Monoid {
    pub carrier: ObjId,
    pub alpha: HorId,
    pub mult: CellVal,
    pub unit: CellVal,
}

/// A morphism of monoids: a vertical morphism between the carriers together
/// with a structure cell alpha => gamma over (f, f) commuting with
/// multiplications and units.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MonoidMorphism {
    pub f: VertId,
    pub structure: CellVal,
}

/// A bimodule between two monoids: a horizontal morphism with a left action
/// of the source monoid and a right action of the target monoid.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Bimodule {
    pub j: HorId,
    pub lact: CellVal,
    pub ract: CellVal,
}

pub(crate) fn mult_frame(k: &dyn Avdc, carrier: ObjId, alpha: HorId) -> Frame {
    let id = k.identity_of(carrier);
    Frame {
        f: id,
        g: id,
        src: Path::from_edges(carrier, vec![alpha, alpha]),
        tgt: Path::single(alpha),
    }
}

pub(crate) fn unit_frame(k: &dyn Avdc, carrier: ObjId, alpha: HorId) -> Frame {
    let id = k.identity_of(carrier);
    Frame { f: id, g: id, src: Path::Empty(carrier), tgt: Path::single(alpha) }
}

fn eq_line(k: &dyn Avdc, lhs: Result<CellVal>, rhs: Result<CellVal>) -> Status {
    match (lhs, rhs) {
        (Ok(l), Ok(r)) => {
            if l == r {
                Status::Pass
            } else {
                Status::Fail {
                    detail: format!("{} differs from {}", k.cell_name(&l), k.cell_name(&r)),
                }
            }
        }
        (Err(e), _) | (_, Err(e)) => Status::Fail { detail: format!("side fails to paste: {e}") },
    }
}

fn skip_rest(rep: &mut Report, labels: &[&str]) {
    for l in labels {
        rep.push(*l, Status::Skipped { reason: "structure cells are ill-formed".into() }, 0, true);
    }
}

/// Verifies the monoid axioms by cell equality: well-formed structure cells,
/// associativity of multiplication, and the two unit laws.
pub fn check_monoid(k: &dyn Avdc, m: &Monoid) -> Report {
    let mut rep = Report::new("monoid check", k.name(), Bounds::default());
    let endo = m.alpha.idx() < k.skeleton().hor_count()
        && k.hor_src(m.alpha) == m.carrier
        && k.hor_tgt(m.alpha) == m.carrier;
    let mult_ok = endo
        && m.mult.frame == mult_frame(k, m.carrier, m.alpha)
        && k.cell_valid(&m.mult);
    rep.push(
        "multiplication cell is (alpha, alpha) => alpha over identities",
        if mult_ok {
            Status::Pass
        } else {
            Status::Fail { detail: format!("got {}", k.cell_name(&m.mult)) }
        },
        1,
        true,
    );
    let unit_ok = endo
        && m.unit.frame == unit_frame(k, m.carrier, m.alpha)
        && k.cell_valid(&m.unit);
    rep.push(
        "unit cell is () => alpha over identities",
        if unit_ok {
            Status::Pass
        } else {
            Status::Fail { detail: format!("got {}", k.cell_name(&m.unit)) }
        },
        1,
        true,
    );
    if !mult_ok || !unit_ok {
        skip_rest(&mut rep, &["associativity", "left unit law", "right unit law"]);
        return rep;
    }

    let ida = k.identity_hor(m.alpha);
    rep.push(
        "associativity",
        eq_line(
            k,
            k.compose(&m.mult, &[m.mult.clone(), ida.clone()]),
            k.compose(&m.mult, &[ida.clone(), m.mult.clone()]),
        ),
        1,
        true,
    );
    rep.push(
        "left unit law",
        eq_line(k, k.compose(&m.mult, &[m.unit.clone(), ida.clone()]), Ok(ida.clone())),
        1,
        true,
    );
    rep.push(
        "right unit law",
        eq_line(k, k.compose(&m.mult, &[ida.clone(), m.unit.clone()]), Ok(ida)),
        1,
        true,
    );
    rep
}

/// Verifies that `mm` is a morphism of monoids from `a` to `c`: structure
/// cell alpha => gamma over (f, f), compatible with multiplication and unit.
pub fn check_monoid_morphism(k: &dyn Avdc, a: &Monoid, c: &Monoid, mm: &MonoidMorphism) -> Report {
    let mut rep = Report::new("monoid morphism check", k.name(), Bounds::default());
    let f_ok = mm.f.idx() < k.skeleton().vert_count()
        && k.vert_dom(mm.f) == a.carrier
        && k.vert_cod(mm.f) == c.carrier;
    let want = Frame {
        f: mm.f,
        g: mm.f,
        src: Path::single(a.alpha),
        tgt: Path::single(c.alpha),
    };
    let st_ok = f_ok && mm.structure.frame == want && k.cell_valid(&mm.structure);
    rep.push(
        "structure cell is alpha => gamma over (f, f)",
        if st_ok {
            Status::Pass
        } else {
            Status::Fail { detail: format!("got {}", k.cell_name(&mm.structure)) }
        },
        1,
        true,
    );
    if !st_ok {
        skip_rest(&mut rep, &["multiplication is preserved", "unit is preserved"]);
        return rep;
    }
    rep.push(
        "multiplication is preserved",
        eq_line(
            k,
            k.compose(&c.mult, &[mm.structure.clone(), mm.structure.clone()]),
            k.compose(&mm.structure, &[a.mult.clone()]),
        ),
        1,
        true,
    );
    rep.push(
        "unit is preserved",
        eq_line(
            k,
            k.compose(&c.unit, &[k.identity_vert(mm.f)]),
            k.compose(&mm.structure, &[a.unit.clone()]),
        ),
        1,
        true,
    );
    rep
}

pub(crate) fn lact_frame(k: &dyn Avdc, a: &Monoid, b: &Monoid, j: HorId) -> Frame {
    Frame {
        f: k.identity_of(a.carrier),
        g: k.identity_of(b.carrier),
        src: Path::from_edges(a.carrier, vec![a.alpha, j]),
        tgt: Path::single(j),
    }
}

pub(crate) fn ract_frame(k: &dyn Avdc, a: &Monoid, b: &Monoid, j: HorId) -> Frame {
    Frame {
        f: k.identity_of(a.carrier),
        g: k.identity_of(b.carrier),
        src: Path::from_edges(a.carrier, vec![j, b.alpha]),
        tgt: Path::single(j),
    }
}

/// Verifies the bimodule axioms for `bim` between monoids `a` and `b`:
/// well-formed action cells, associativity of each action, compatibility of
/// the two, and both unit laws.
pub fn check_bimodule(k: &dyn Avdc, a: &Monoid, b: &Monoid, bim: &Bimodule) -> Report {
    let mut rep = Report::new("bimodule check", k.name(), Bounds::default());
    let j_ok = bim.j.idx() < k.skeleton().hor_count()
        && k.hor_src(bim.j) == a.carrier
        && k.hor_tgt(bim.j) == b.carrier;
    let l_ok = j_ok && bim.lact.frame == lact_frame(k, a, b, bim.j) && k.cell_valid(&bim.lact);
    let r_ok = j_ok && bim.ract.frame == ract_frame(k, a, b, bim.j) && k.cell_valid(&bim.ract);
    rep.push(
        "left action is (alpha, j) => j over identities",
        if l_ok {
            Status::Pass
        } else {
            Status::Fail { detail: format!("got {}", k.cell_name(&bim.lact)) }
        },
        1,
        true,
    );
    rep.push(
        "right action is (j, gamma) => j over identities",
        if r_ok {
            Status::Pass
        } else {
            Status::Fail { detail: format!("got {}", k.cell_name(&bim.ract)) }
        },
        1,
        true,
    );
    if !l_ok || !r_ok {
        skip_rest(
            &mut rep,
            &[
                "left action is associative",
                "right action is associative",
                "actions commute",
                "left unit law",
                "right unit law",
            ],
        );
        return rep;
    }

    let idj = k.identity_hor(bim.j);
    let ida = k.identity_hor(a.alpha);
    let idg = k.identity_hor(b.alpha);
    rep.push(
        "left action is associative",
        eq_line(
            k,
            k.compose(&bim.lact, &[a.mult.clone(), idj.clone()]),
            k.compose(&bim.lact, &[ida.clone(), bim.lact.clone()]),
        ),
        1,
        true,
    );
    rep.push(
        "right action is associative",
        eq_line(
            k,
            k.compose(&bim.ract, &[bim.ract.clone(), idg.clone()]),
            k.compose(&bim.ract, &[idj.clone(), b.mult.clone()]),
        ),
        1,
        true,
    );
    rep.push(
        "actions commute",
        eq_line(
            k,
            k.compose(&bim.ract, &[bim.lact.clone(), idg.clone()]),
            k.compose(&bim.lact, &[ida, bim.ract.clone()]),
        ),
        1,
        true,
    );
    rep.push(
        "left unit law",
        eq_line(k, k.compose(&bim.lact, &[a.unit.clone(), idj.clone()]), Ok(idj.clone())),
        1,
        true,
    );
    rep.push(
        "right unit law",
        eq_line(k, k.compose(&bim.ract, &[idj.clone(), b.unit.clone()]), Ok(idj)),
        1,
        true,
    );
    rep
}

fn budget_err(what: &str) -> AvdcError {
    AvdcError::TooLarge(format!("{what} exceeded its step budget"))
}

/// All monoids on the carrier, ordered by endo-morphism id and then by the
/// enumeration order of candidate multiplication and unit cells.
pub fn enumerate_monoids(k: &dyn Avdc, carrier: ObjId, budget: u64) -> Result<Vec<Monoid>> {
    let mut m = Meter::with_budget(budget);
    let mut out = Vec::new();
    for &alpha in k.skeleton().hors_between(carrier, carrier) {
        let mults = k.cells(&mult_frame(k, carrier, alpha));
        let units = k.cells(&unit_frame(k, carrier, alpha));
        for mult in &mults {
            for unit in &units {
                if !m.tick() {
                    return Err(budget_err("monoid enumeration"));
                }
                let cand = Monoid {
                    carrier,
                    alpha,
                    mult: mult.clone(),
                    unit: unit.clone(),
                };
                if check_monoid(k, &cand).pass {
                    out.push(cand);
                }
            }
        }
    }
    Ok(out)
}

/// All monoid morphisms from `a` to `c`, ordered by vertical id and then by
/// structure cell enumeration order.
pub fn enumerate_monoid_morphisms(
    k: &dyn Avdc,
    a: &Monoid,
    c: &Monoid,
    budget: u64,
) -> Result<Vec<MonoidMorphism>> {
    let mut m = Meter::with_budget(budget);
    let mut out = Vec::new();
    for &f in k.skeleton().verts_between(a.carrier, c.carrier) {
        let frame = Frame {
            f,
            g: f,
            src: Path::single(a.alpha),
            tgt: Path::single(c.alpha),
        };
        for structure in k.cells(&frame) {
            if !m.tick() {
                return Err(budget_err("monoid morphism enumeration"));
            }
            let cand = MonoidMorphism { f, structure };
            if check_monoid_morphism(k, a, c, &cand).pass {
                out.push(cand);
            }
        }
    }
    Ok(out)
}

/// All bimodules from `a` to `b`, ordered by horizontal id and then by action
/// cell enumeration order.
pub fn enumerate_bimodules(
    k: &dyn Avdc,
    a: &Monoid,
    b: &Monoid,
    budget: u64,
) -> Result<Vec<Bimodule>> {
    let mut m = Meter::with_budget(budget);
    let mut out = Vec::new();
    for &j in k.skeleton().hors_between(a.carrier, b.carrier) {
        let lacts = k.cells(&lact_frame(k, a, b, j));
        let racts = k.cells(&ract_frame(k, a, b, j));
        for lact in &lacts {
            for ract in &racts {
                if !m.tick() {
                    return Err(budget_err("bimodule enumeration"));
                }
                let cand = Bimodule { j, lact: lact.clone(), ract: ract.clone() };
                if check_bimodule(k, a, b, &cand).pass {
                    out.push(cand);
                }
            }
        }
    }
    Ok(out)
}
