use std::any::Any;
use std::collections::HashMap;
use std::sync::Arc;

use crate::core::{
    composite_frame, Avdc, AvdcError, AvdcExt, CellVal, Datum, Frame, HorId, ObjId, Path,
    Result, Skeleton, SkeletonBuilder, VertId,
};

use super::category::{
    all_functors, compose_functors, identity_functor, FinCat, FunctorTables,
};
use super::util::{digits, tuples};

/// A profunctor between two categories of a [`ProfInstance`], presented by
/// element tables. `fib[x][y]` lists the elements of `J(x, y)` for `x` an
/// object of the source category and `y` one of the target category.
///
/// The left action of the source category is tabulated as
/// `lam[xp][x][y][a * |fib[x][y]| + u]`, the element `lambda(a, u)` of
/// `fib[xp][y]` for `a : xp -> x`; the right action of the target category as
/// `rho[x][y][yp][u * |hom(y, yp)| + b]`, the element `rho(u, b)` of
/// `fib[x][yp]` for `b : y -> yp`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProfData {
    pub name: String,
    pub src: usize,
    pub tgt: usize,
    pub fib: Vec<Vec<Vec<String>>>,
    pub lam: Vec<Vec<Vec<Vec<u32>>>>,
    pub rho: Vec<Vec<Vec<Vec<u32>>>>,
}

impl ProfData {
    pub fn fib_size(&self, x: u32, y: u32) -> usize {
        self.fib[x as usize][y as usize].len()
    }

    /// `lambda(a, u)` for `a : xp -> x` in the source category.
    pub fn act_left(&self, xp: u32, x: u32, y: u32, a: u32, u: u32) -> u32 {
        let w = self.fib_size(x, y);
        self.lam[xp as usize][x as usize][y as usize][a as usize * w + u as usize]
    }

    /// `rho(u, b)` for `b : y -> yp` in the target category, where `width`
    /// is the hom-set size `|hom(y, yp)|`.
    pub fn act_right(&self, x: u32, y: u32, yp: u32, u: u32, b: u32, width: usize) -> u32 {
        self.rho[x as usize][y as usize][yp as usize][u as usize * width + b as usize]
    }
}

/// The hom profunctor of a category over itself: fibres are the hom-sets and
/// the actions are composition on either side.
pub fn hom_prof(c: &FinCat, cat_idx: usize) -> ProfData {
    let n = c.n_objects();
    let fib = c.hom_names().clone();
    let mut lam = vec![vec![vec![Vec::new(); n]; n]; n];
    let mut rho = vec![vec![vec![Vec::new(); n]; n]; n];
    for xp in 0..n {
        for x in 0..n {
            for y in 0..n {
                let mut t = Vec::with_capacity(c.hom_size(xp, x) * c.hom_size(x, y));
                for a in 0..c.hom_size(xp, x) as u32 {
                    for u in 0..c.hom_size(x, y) as u32 {
                        t.push(c.compose(xp, x, y, u, a));
                    }
                }
                lam[xp][x][y] = t;
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            for yp in 0..n {
                let mut t = Vec::with_capacity(c.hom_size(x, y) * c.hom_size(y, yp));
                for u in 0..c.hom_size(x, y) as u32 {
                    for b in 0..c.hom_size(y, yp) as u32 {
                        t.push(c.compose(x, y, yp, b, u));
                    }
                }
                rho[x][y][yp] = t;
            }
        }
    }
    ProfData { name: format!("hom:{}", c.name), src: cat_idx, tgt: cat_idx, fib, lam, rho }
}

/// Checks the shape and the bimodule axioms of a profunctor presentation:
/// both actions are unital and functorial and they commute with each other.
pub fn validate_prof(a: &FinCat, b: &FinCat, p: &ProfData) -> Result<()> {
    let (na, nb) = (a.n_objects(), b.n_objects());
    let err = |what: String| Err(AvdcError::Load(format!("profunctor {}: {what}", p.name)));
    if p.fib.len() != na || p.fib.iter().any(|r| r.len() != nb) {
        return err("fibre table has the wrong shape".into());
    }
    if p.lam.len() != na
        || p.lam.iter().any(|r| r.len() != na || r.iter().any(|c| c.len() != nb))
    {
        return err("left action table has the wrong shape".into());
    }
    if p.rho.len() != na
        || p.rho.iter().any(|r| r.len() != nb || r.iter().any(|c| c.len() != nb))
    {
        return err("right action table has the wrong shape".into());
    }
    for xp in 0..na {
        for x in 0..na {
            for y in 0..nb {
                let t = &p.lam[xp][x][y];
                if t.len() != a.hom_size(xp, x) * p.fib[x][y].len() {
                    return err(format!(
                        "left action over ({xp}, {x}, {y}) has {} entries",
                        t.len()
                    ));
                }
                if t.iter().any(|&v| v as usize >= p.fib[xp][y].len()) {
                    return err(format!("left action over ({xp}, {x}, {y}) is out of range"));
                }
            }
        }
    }
    for x in 0..na {
        for y in 0..nb {
            for yp in 0..nb {
                let t = &p.rho[x][y][yp];
                if t.len() != p.fib[x][y].len() * b.hom_size(y, yp) {
                    return err(format!(
                        "right action over ({x}, {y}, {yp}) has {} entries",
                        t.len()
                    ));
                }
                if t.iter().any(|&v| v as usize >= p.fib[x][yp].len()) {
                    return err(format!("right action over ({x}, {y}, {yp}) is out of range"));
                }
            }
        }
    }
    for x in 0..na {
        for y in 0..nb {
            for u in 0..p.fib[x][y].len() as u32 {
                if p.act_left(x as u32, x as u32, y as u32, a.id_of(x), u) != u {
                    return err(format!("left action is not unital at ({x}, {y})"));
                }
                if p.act_right(x as u32, y as u32, y as u32, u, b.id_of(y), b.hom_size(y, y))
                    != u
                {
                    return err(format!("right action is not unital at ({x}, {y})"));
                }
            }
        }
    }
    // lambda(a2 . a1, u) = lambda(a1, lambda(a2, u)) for x1 -a1-> x2 -a2-> x3.
    for x1 in 0..na {
        for x2 in 0..na {
            for x3 in 0..na {
                for y in 0..nb {
                    for a1 in 0..a.hom_size(x1, x2) as u32 {
                        for a2 in 0..a.hom_size(x2, x3) as u32 {
                            let a21 = a.compose(x1, x2, x3, a2, a1);
                            for u in 0..p.fib[x3][y].len() as u32 {
                                let lhs =
                                    p.act_left(x1 as u32, x3 as u32, y as u32, a21, u);
                                let mid = p.act_left(x2 as u32, x3 as u32, y as u32, a2, u);
                                let rhs =
                                    p.act_left(x1 as u32, x2 as u32, y as u32, a1, mid);
                                if lhs != rhs {
                                    return err(format!(
                                        "left action is not functorial at ({x1}, {x2}, {x3}, {y})"
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    // rho(u, b2 . b1) = rho(rho(u, b1), b2) for y1 -b1-> y2 -b2-> y3.
    for x in 0..na {
        for y1 in 0..nb {
            for y2 in 0..nb {
                for y3 in 0..nb {
                    for b1 in 0..b.hom_size(y1, y2) as u32 {
                        for b2 in 0..b.hom_size(y2, y3) as u32 {
                            let b21 = b.compose(y1, y2, y3, b2, b1);
                            for u in 0..p.fib[x][y1].len() as u32 {
                                let lhs = p.act_right(
                                    x as u32, y1 as u32, y3 as u32, u, b21,
                                    b.hom_size(y1, y3),
                                );
                                let mid = p.act_right(
                                    x as u32, y1 as u32, y2 as u32, u, b1,
                                    b.hom_size(y1, y2),
                                );
                                let rhs = p.act_right(
                                    x as u32, y2 as u32, y3 as u32, mid, b2,
                                    b.hom_size(y2, y3),
                                );
                                if lhs != rhs {
                                    return err(format!(
                                        "right action is not functorial at ({x}, {y1}, {y2}, {y3})"
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    // rho(lambda(a, u), b) = lambda(a, rho(u, b)).
    for xp in 0..na {
        for x in 0..na {
            for y in 0..nb {
                for yp in 0..nb {
                    for aa in 0..a.hom_size(xp, x) as u32 {
                        for bb in 0..b.hom_size(y, yp) as u32 {
                            for u in 0..p.fib[x][y].len() as u32 {
                                let lu = p.act_left(xp as u32, x as u32, y as u32, aa, u);
                                let lhs = p.act_right(
                                    xp as u32, y as u32, yp as u32, lu, bb,
                                    b.hom_size(y, yp),
                                );
                                let ub = p.act_right(
                                    x as u32, y as u32, yp as u32, u, bb,
                                    b.hom_size(y, yp),
                                );
                                let rhs =
                                    p.act_left(xp as u32, x as u32, yp as u32, aa, ub);
                                if lhs != rhs {
                                    return err(format!(
                                        "actions do not commute at ({xp}, {x}, {y}, {yp})"
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Profunctors between finite categories. Objects are the given categories,
/// vertical morphisms are all functors between them, horizontal morphisms
/// are the hom profunctor of every category followed by the supplied
/// profunctors, and cells are component families satisfying the external and
/// internal equivariance conditions.
pub struct ProfInstance {
    name: String,
    skel: Skeleton,
    cats: Vec<FinCat>,
    functors: Vec<FunctorTables>,
    profs: Vec<ProfData>,
    user_profs: Vec<ProfData>,
    vert_lookup: HashMap<(ObjId, ObjId, FunctorTables), VertId>,
    hor_by_name: HashMap<String, HorId>,
}

/// Hard limits guarding enumeration: verticals, composable paths inspected by
/// the sizing pass, domain points per frame, and candidate families per
/// frame estimated from unconstrained points.
const VERT_GUARD: usize = 5000;
const PATH_GUARD: usize = 20000;
const POINT_GUARD: usize = 4096;
const FAMILY_GUARD: u64 = 1 << 20;

pub fn fin_prof(cats: Vec<FinCat>, profs: Vec<ProfData>) -> Result<Arc<ProfInstance>> {
    if cats.is_empty() {
        return Err(AvdcError::Load("an instance needs at least one category".into()));
    }
    {
        let mut seen = HashMap::new();
        for (i, c) in cats.iter().enumerate() {
            if let Some(_prev) = seen.insert(c.name.clone(), i) {
                return Err(AvdcError::Load(format!("duplicate category name {}", c.name)));
            }
        }
    }
    for p in &profs {
        if p.src >= cats.len() || p.tgt >= cats.len() {
            return Err(AvdcError::Load(format!(
                "profunctor {} refers to a category that is not in the instance",
                p.name
            )));
        }
        validate_prof(&cats[p.src], &cats[p.tgt], p)?;
    }

    let mut b = SkeletonBuilder::new();
    let objs: Vec<ObjId> = cats.iter().map(|c| b.add_object(c.name.clone())).collect();

    let mut functors = Vec::new();
    let mut vert_bounds = Vec::new();
    let mut vert_lookup = HashMap::new();
    for (ai, a) in cats.iter().enumerate() {
        for (ci, c) in cats.iter().enumerate() {
            for t in all_functors(a, c) {
                let name = format!(
                    "{}>{}:{}.{}",
                    a.name,
                    c.name,
                    digits(&t.obj),
                    digits(&t.mor.iter().flatten().flatten().copied().collect::<Vec<_>>())
                );
                let v = b.add_vert(name, objs[ai], objs[ci]);
                vert_lookup.insert((objs[ai], objs[ci], t.clone()), v);
                functors.push(t);
                vert_bounds.push((objs[ai], objs[ci]));
                if functors.len() > VERT_GUARD {
                    return Err(AvdcError::TooLarge(format!(
                        "more than {VERT_GUARD} functors; shrink the categories"
                    )));
                }
            }
        }
    }
    for (ai, a) in cats.iter().enumerate() {
        let t = identity_functor(a);
        let v = vert_lookup[&(objs[ai], objs[ai], t)];
        b.set_identity(objs[ai], v);
    }
    // Composition: the composite of two functor tables is again a functor,
    // so it appears in the enumeration and the lookup always succeeds.
    for (gi, g) in functors.iter().enumerate() {
        for (fi, f) in functors.iter().enumerate() {
            let (f_dom, f_cod) = vert_bounds[fi];
            let (g_dom, g_cod) = vert_bounds[gi];
            if f_cod != g_dom {
                continue;
            }
            let gf = compose_functors(g, f);
            let &v = vert_lookup.get(&(f_dom, g_cod, gf)).ok_or_else(|| {
                AvdcError::Internal("composite functor missing from enumeration".into())
            })?;
            b.set_composite(VertId::from(gi), VertId::from(fi), v);
        }
    }

    let mut all_profs: Vec<ProfData> =
        cats.iter().enumerate().map(|(i, c)| hom_prof(c, i)).collect();
    all_profs.extend(profs.iter().cloned());
    let mut hor_by_name = HashMap::new();
    for p in &all_profs {
        let j = b.add_hor(p.name.clone(), objs[p.src], objs[p.tgt]);
        if hor_by_name.insert(p.name.clone(), j).is_some() {
            return Err(AvdcError::Load(format!("duplicate profunctor name {}", p.name)));
        }
    }

    let inst = ProfInstance {
        name: "fin_prof".into(),
        skel: b.finish()?,
        cats,
        functors,
        profs: all_profs,
        user_profs: profs,
        vert_lookup,
        hor_by_name,
    };
    inst.sizing_guard(3)?;
    Ok(Arc::new(inst))
}

/// The horizontal target of a frame: a profunctor fibre or, for nullary
/// frames, a hom-set of the common codomain category.
#[derive(Clone, Copy)]
enum Tgt {
    Edge(usize),
    Hom(usize),
}

/// Precomputed view of one frame: the categories along the source path, the
/// profunctor of each edge, and the enumerated domain points. A domain point
/// pairs an object tuple (one object per node) with an element tuple (one
/// fibre element per edge); points are ordered by object tuple, then element
/// tuple, and this order is the canonical index order of cell tables.
struct Ctx {
    node_cats: Vec<usize>,
    edges: Vec<usize>,
    tgt: Option<Tgt>,
    f: Option<FunctorTables>,
    g: Option<FunctorTables>,
    points: Vec<(Vec<u32>, Vec<u32>)>,
    index: HashMap<(Vec<u32>, Vec<u32>), usize>,
}

/// One equivariance condition `act_p(v(p)) == act_q(v(q))` between the
/// values at two domain points; a missing table is the identity.
struct Constraint {
    p: usize,
    q: usize,
    act_p: Option<Vec<u32>>,
    act_q: Option<Vec<u32>>,
}

impl ProfInstance {
    pub fn cats(&self) -> &[FinCat] {
        &self.cats
    }

    pub fn cat(&self, a: ObjId) -> &FinCat {
        &self.cats[a.idx()]
    }

    pub fn functor(&self, v: VertId) -> &FunctorTables {
        &self.functors[v.idx()]
    }

    pub fn prof(&self, j: HorId) -> &ProfData {
        &self.profs[j.idx()]
    }

    pub fn user_profs(&self) -> &[ProfData] {
        &self.user_profs
    }

    /// The hom profunctor of a category, always horizontal number `cat_idx`.
    pub fn hom_hor(&self, cat_idx: usize) -> HorId {
        HorId::from(cat_idx)
    }

    pub fn hor_named(&self, name: &str) -> Option<HorId> {
        self.hor_by_name.get(name).copied()
    }

    pub fn vert_of_tables(&self, dom: ObjId, cod: ObjId, t: &FunctorTables) -> Option<VertId> {
        self.vert_lookup.get(&(dom, cod, t.clone())).copied()
    }

    fn path_nodes(&self, p: &Path) -> (Vec<usize>, Vec<usize>) {
        match p {
            Path::Empty(a) => (vec![a.idx()], Vec::new()),
            Path::Edges(es) => {
                let mut nodes = vec![self.hor_src(es[0]).idx()];
                let mut edges = Vec::new();
                for &e in es {
                    nodes.push(self.hor_tgt(e).idx());
                    edges.push(e.idx());
                }
                (nodes, edges)
            }
        }
    }

    fn build_points(
        &self,
        node_cats: &[usize],
        edges: &[usize],
    ) -> (Vec<(Vec<u32>, Vec<u32>)>, HashMap<(Vec<u32>, Vec<u32>), usize>) {
        let sizes: Vec<usize> = node_cats.iter().map(|&c| self.cats[c].n_objects()).collect();
        let mut points = Vec::new();
        for xs in tuples(&sizes) {
            let fibs: Vec<usize> = edges
                .iter()
                .enumerate()
                .map(|(i, &e)| self.profs[e].fib_size(xs[i], xs[i + 1]))
                .collect();
            for us in tuples(&fibs) {
                points.push((xs.clone(), us));
            }
        }
        let index = points
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect::<HashMap<_, _>>();
        (points, index)
    }

    fn ctx_for_frame(&self, fr: &Frame) -> Option<Ctx> {
        if self.validate_frame(fr).is_err() {
            return None;
        }
        let (node_cats, edges) = self.path_nodes(&fr.src);
        let tgt = match &fr.tgt {
            Path::Empty(c) => Tgt::Hom(c.idx()),
            Path::Edges(es) => Tgt::Edge(es[0].idx()),
        };
        let (points, index) = self.build_points(&node_cats, &edges);
        Some(Ctx {
            node_cats,
            edges,
            tgt: Some(tgt),
            f: Some(self.functors[fr.f.idx()].clone()),
            g: Some(self.functors[fr.g.idx()].clone()),
            points,
            index,
        })
    }

    /// Frame-free view of a path, used by the sizing pass: no target and no
    /// boundary functors, so constraints carry no action tables.
    fn ctx_probe(&self, node_cats: Vec<usize>, edges: Vec<usize>) -> Ctx {
        let (points, index) = self.build_points(&node_cats, &edges);
        Ctx { node_cats, edges, tgt: None, f: None, g: None, points, index }
    }

    fn tgt_fiber(&self, ctx: &Ctx, c: u32, d: u32) -> usize {
        match ctx.tgt.expect("target required") {
            Tgt::Edge(k) => self.profs[k].fib_size(c, d),
            Tgt::Hom(ci) => self.cats[ci].hom_size(c as usize, d as usize),
        }
    }

    /// Left action of the target: a morphism `a : c1 -> c2` of the target's
    /// source category carries fibre `(c2, d)` to fibre `(c1, d)`.
    fn tgt_left(&self, ctx: &Ctx, c1: u32, c2: u32, d: u32, a: u32, v: u32) -> u32 {
        match ctx.tgt.expect("target required") {
            Tgt::Edge(k) => self.profs[k].act_left(c1, c2, d, a, v),
            Tgt::Hom(ci) => self.cats[ci].compose(c1 as usize, c2 as usize, d as usize, v, a),
        }
    }

    /// Right action of the target: `b : d1 -> d2` carries fibre `(c, d1)` to
    /// fibre `(c, d2)`.
    fn tgt_right(&self, ctx: &Ctx, c: u32, d1: u32, d2: u32, v: u32, b: u32) -> u32 {
        match ctx.tgt.expect("target required") {
            Tgt::Edge(k) => {
                let w = self.cats[self.profs[k].tgt].hom_size(d1 as usize, d2 as usize);
                self.profs[k].act_right(c, d1, d2, v, b, w)
            }
            Tgt::Hom(ci) => self.cats[ci].compose(c as usize, d1 as usize, d2 as usize, b, v),
        }
    }

    fn tgt_pair(&self, ctx: &Ctx, point: &(Vec<u32>, Vec<u32>)) -> (u32, u32) {
        let f = ctx.f.as_ref().expect("boundaries required");
        let g = ctx.g.as_ref().expect("boundaries required");
        (f.obj[point.0[0] as usize], g.obj[*point.0.last().unwrap() as usize])
    }

    /// The generating identifications between domain points at inner
    /// junctions: acting on the left element with `s` versus acting on the
    /// right element, with the junction object moved along `s`.
    fn junction_pairs(&self, ctx: &Ctx) -> Vec<(usize, usize)> {
        let n = ctx.edges.len();
        let mut out = Vec::new();
        let sizes: Vec<usize> =
            ctx.node_cats.iter().map(|&c| self.cats[c].n_objects()).collect();
        for t in 1..n {
            let (le, re) = (ctx.edges[t - 1], ctx.edges[t]);
            let jc = ctx.node_cats[t];
            for xs in tuples(&sizes) {
                for xp in 0..self.cats[jc].n_objects() as u32 {
                    for s in 0..self.cats[jc].hom_size(xs[t] as usize, xp as usize) as u32 {
                        // Element slots: edge t-1 holds u, edge t holds up
                        // (based at the moved junction), the rest range over
                        // their usual fibres.
                        let mut slot_sizes: Vec<usize> = (0..n)
                            .map(|e| self.profs[ctx.edges[e]].fib_size(xs[e], xs[e + 1]))
                            .collect();
                        slot_sizes[t] = self.profs[re].fib_size(xp, xs[t + 1]);
                        for us in tuples(&slot_sizes) {
                            let (u, up) = (us[t - 1], us[t]);
                            let mut xs1 = xs.clone();
                            xs1[t] = xp;
                            let mut us1 = us.clone();
                            us1[t - 1] = self.profs[le].act_right(
                                xs[t - 1],
                                xs[t],
                                xp,
                                u,
                                s,
                                self.cats[jc].hom_size(xs[t] as usize, xp as usize),
                            );
                            let mut us2 = us.clone();
                            us2[t] = self.profs[re].act_left(xs[t], xp, xs[t + 1], s, up);
                            let p1 = ctx.index[&(xs1, us1)];
                            let p2 = ctx.index[&(xs.clone(), us2)];
                            out.push((p1, p2));
                        }
                    }
                }
            }
        }
        out
    }

    fn constraints(&self, ctx: &Ctx) -> Vec<Constraint> {
        let n = ctx.edges.len();
        let with_acts = ctx.tgt.is_some();
        let mut out = Vec::new();
        if n == 0 {
            // A family over objects of a single category: naturality says
            // acting on the right by g(a) equals acting on the left by f(a).
            let ac = ctx.node_cats[0];
            for (pi, (xs, _)) in ctx.points.iter().enumerate() {
                let x = xs[0];
                for xp in 0..self.cats[ac].n_objects() as u32 {
                    for a in 0..self.cats[ac].hom_size(x as usize, xp as usize) as u32 {
                        let qi = ctx.index[&(vec![xp], Vec::new())];
                        let (act_p, act_q) = if with_acts {
                            let f = ctx.f.as_ref().unwrap();
                            let g = ctx.g.as_ref().unwrap();
                            let fa = f.mor[x as usize][xp as usize][a as usize];
                            let ga = g.mor[x as usize][xp as usize][a as usize];
                            let (fc, fcp) = (f.obj[x as usize], f.obj[xp as usize]);
                            let (gc, gcp) = (g.obj[x as usize], g.obj[xp as usize]);
                            let tp = (0..self.tgt_fiber(ctx, fc, gc) as u32)
                                .map(|v| self.tgt_right(ctx, fc, gc, gcp, v, ga))
                                .collect();
                            let tq = (0..self.tgt_fiber(ctx, fcp, gcp) as u32)
                                .map(|v| self.tgt_left(ctx, fc, fcp, gcp, fa, v))
                                .collect();
                            (Some(tp), Some(tq))
                        } else {
                            (None, None)
                        };
                        out.push(Constraint { p: pi, q: qi, act_p, act_q });
                    }
                }
            }
            return out;
        }
        let last = ctx.node_cats.len() - 1;
        for (pi, (xs, us)) in ctx.points.iter().enumerate() {
            // External left: precomposing the first element with a.
            let ac = ctx.node_cats[0];
            for xp in 0..self.cats[ac].n_objects() as u32 {
                for a in 0..self.cats[ac].hom_size(xp as usize, xs[0] as usize) as u32 {
                    let mut xs1 = xs.clone();
                    xs1[0] = xp;
                    let mut us1 = us.clone();
                    us1[0] = self.profs[ctx.edges[0]].act_left(xp, xs[0], xs[1], a, us[0]);
                    let qi = ctx.index[&(xs1, us1)];
                    let act_p = with_acts.then(|| {
                        let f = ctx.f.as_ref().unwrap();
                        let fa = f.mor[xp as usize][xs[0] as usize][a as usize];
                        let (c1, c2) = (f.obj[xp as usize], f.obj[xs[0] as usize]);
                        let d = ctx.g.as_ref().unwrap().obj[xs[last] as usize];
                        (0..self.tgt_fiber(ctx, c2, d) as u32)
                            .map(|v| self.tgt_left(ctx, c1, c2, d, fa, v))
                            .collect()
                    });
                    out.push(Constraint { p: pi, q: qi, act_p, act_q: None });
                }
            }
            // External right: postcomposing the last element with b.
            let bc = ctx.node_cats[last];
            for yp in 0..self.cats[bc].n_objects() as u32 {
                for bm in 0..self.cats[bc].hom_size(xs[last] as usize, yp as usize) as u32 {
                    let mut xs1 = xs.clone();
                    xs1[last] = yp;
                    let mut us1 = us.clone();
                    let e = ctx.edges[n - 1];
                    us1[n - 1] = self.profs[e].act_right(
                        xs[last - 1],
                        xs[last],
                        yp,
                        us[n - 1],
                        bm,
                        self.cats[bc].hom_size(xs[last] as usize, yp as usize),
                    );
                    let qi = ctx.index[&(xs1, us1)];
                    let act_p = with_acts.then(|| {
                        let g = ctx.g.as_ref().unwrap();
                        let gb = g.mor[xs[last] as usize][yp as usize][bm as usize];
                        let (d1, d2) = (g.obj[xs[last] as usize], g.obj[yp as usize]);
                        let c = ctx.f.as_ref().unwrap().obj[xs[0] as usize];
                        (0..self.tgt_fiber(ctx, c, d1) as u32)
                            .map(|v| self.tgt_right(ctx, c, d1, d2, v, gb))
                            .collect()
                    });
                    out.push(Constraint { p: pi, q: qi, act_p, act_q: None });
                }
            }
        }
        for (p1, p2) in self.junction_pairs(ctx) {
            out.push(Constraint { p: p1, q: p2, act_p: None, act_q: None });
        }
        out
    }

    fn enumerate_families(&self, ctx: &Ctx) -> Vec<Vec<u32>> {
        let sizes: Vec<usize> = ctx
            .points
            .iter()
            .map(|pt| {
                let (c, d) = self.tgt_pair(ctx, pt);
                self.tgt_fiber(ctx, c, d)
            })
            .collect();
        let cons = self.constraints(ctx);
        let mut attach: Vec<Vec<usize>> = vec![Vec::new(); sizes.len()];
        for (ci, c) in cons.iter().enumerate() {
            attach[c.p.max(c.q)].push(ci);
        }
        let mut out = Vec::new();
        let mut vals = vec![0u32; sizes.len()];
        fn apply(t: &Option<Vec<u32>>, v: u32) -> u32 {
            t.as_ref().map_or(v, |t| t[v as usize])
        }
        fn rec(
            k: usize,
            sizes: &[usize],
            cons: &[Constraint],
            attach: &[Vec<usize>],
            vals: &mut Vec<u32>,
            out: &mut Vec<Vec<u32>>,
        ) {
            if k == sizes.len() {
                out.push(vals.clone());
                return;
            }
            'next: for v in 0..sizes[k] as u32 {
                vals[k] = v;
                for &ci in &attach[k] {
                    let c = &cons[ci];
                    if apply(&c.act_p, vals[c.p]) != apply(&c.act_q, vals[c.q]) {
                        continue 'next;
                    }
                }
                rec(k + 1, sizes, cons, attach, vals, out);
            }
        }
        rec(0, &sizes, &cons, &attach, &mut vals, &mut out);
        out
    }

    /// Refuses instances whose search space is out of reach: for every
    /// composable path up to the given length, domain points not tied to an
    /// earlier point by any constraint each multiply the candidate family
    /// count by a fibre size, and that estimate must stay within budget.
    fn sizing_guard(&self, max_len: usize) -> Result<()> {
        let max_fib: u64 = self
            .profs
            .iter()
            .flat_map(|p| p.fib.iter().flatten().map(|f| f.len() as u64))
            .max()
            .unwrap_or(0)
            .max(1);
        let mut paths: Vec<Vec<usize>> = vec![Vec::new()];
        let mut all: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for p in &paths {
                for (ei, prof) in self.profs.iter().enumerate() {
                    let ok = match p.last() {
                        None => true,
                        Some(&prev) => self.profs[prev].tgt == prof.src,
                    };
                    if ok {
                        let mut q = p.clone();
                        q.push(ei);
                        next.push(q);
                    }
                }
            }
            all.extend(next.iter().cloned());
            if all.len() > PATH_GUARD {
                return Err(AvdcError::TooLarge(format!(
                    "more than {PATH_GUARD} composable paths up to length {max_len}"
                )));
            }
            paths = next;
        }
        for path in &all {
            let node_cats: Vec<usize> = if path.is_empty() {
                continue;
            } else {
                let mut v = vec![self.profs[path[0]].src];
                v.extend(path.iter().map(|&e| self.profs[e].tgt));
                v
            };
            self.guard_path(&node_cats, path, max_fib)?;
        }
        for c in 0..self.cats.len() {
            self.guard_path(&[c], &[], max_fib)?;
        }
        Ok(())
    }

    fn guard_path(&self, node_cats: &[usize], edges: &[usize], max_fib: u64) -> Result<()> {
        let ctx = self.ctx_probe(node_cats.to_vec(), edges.to_vec());
        if ctx.points.len() > POINT_GUARD {
            return Err(AvdcError::TooLarge(format!(
                "a path of {} edges has {} domain points (limit {POINT_GUARD})",
                edges.len(),
                ctx.points.len()
            )));
        }
        let cons = self.constraints(&ctx);
        let mut tied = vec![false; ctx.points.len()];
        for c in &cons {
            let (lo, hi) = (c.p.min(c.q), c.p.max(c.q));
            if lo < hi {
                tied[hi] = true;
            }
        }
        let free = tied.iter().filter(|&&t| !t).count() as u32;
        let bound = max_fib.saturating_pow(free);
        if bound > FAMILY_GUARD {
            return Err(AvdcError::TooLarge(format!(
                "a path of {} edges admits up to {bound} candidate families \
                 (limit {FAMILY_GUARD}); shrink the fibres or add arrows",
                edges.len()
            )));
        }
        Ok(())
    }

    /// Wide-pullback-free description of a restriction: fibre `(x, y)` of
    /// `K(f, g)` is fibre `(fx, gy)` of `K`, with the actions precomposed
    /// with `f` and `g`.
    pub fn restriction_prof(
        &self,
        k: HorId,
        f: VertId,
        g: VertId,
        name: impl Into<String>,
    ) -> Result<ProfData> {
        let kp = &self.profs[k.idx()];
        if self.vert_cod(f).idx() != kp.src || self.vert_cod(g).idx() != kp.tgt {
            return Err(AvdcError::Precondition(format!(
                "restriction of {} needs functors into its boundary categories",
                kp.name
            )));
        }
        let (ai, bi) = (self.vert_dom(f).idx(), self.vert_dom(g).idx());
        let (a, bcat) = (&self.cats[ai], &self.cats[bi]);
        let ft = &self.functors[f.idx()];
        let gt = &self.functors[g.idx()];
        let (na, nb) = (a.n_objects(), bcat.n_objects());
        let fib: Vec<Vec<Vec<String>>> = (0..na)
            .map(|x| {
                (0..nb)
                    .map(|y| {
                        kp.fib[ft.obj[x] as usize][gt.obj[y] as usize].clone()
                    })
                    .collect()
            })
            .collect();
        let mut lam = vec![vec![vec![Vec::new(); nb]; na]; na];
        for xp in 0..na {
            for x in 0..na {
                for y in 0..nb {
                    let mut t = Vec::new();
                    for am in 0..a.hom_size(xp, x) as u32 {
                        let fa = ft.mor[xp][x][am as usize];
                        for u in 0..fib[x][y].len() as u32 {
                            t.push(kp.act_left(ft.obj[xp], ft.obj[x], gt.obj[y], fa, u));
                        }
                    }
                    lam[xp][x][y] = t;
                }
            }
        }
        let mut rho = vec![vec![vec![Vec::new(); nb]; nb]; na];
        let kc = &self.cats[kp.tgt];
        for x in 0..na {
            for y in 0..nb {
                for yp in 0..nb {
                    let mut t = Vec::new();
                    for u in 0..fib[x][y].len() as u32 {
                        for bm in 0..bcat.hom_size(y, yp) as u32 {
                            let gb = gt.mor[y][yp][bm as usize];
                            let w =
                                kc.hom_size(gt.obj[y] as usize, gt.obj[yp] as usize);
                            t.push(kp.act_right(ft.obj[x], gt.obj[y], gt.obj[yp], u, gb, w));
                        }
                    }
                    rho[x][y][yp] = t;
                }
            }
        }
        Ok(ProfData { name: name.into(), src: ai, tgt: bi, fib, lam, rho })
    }

    /// The composite of a path by finite coend: middle tuples, quotiented by
    /// the identifications generated at each junction, with actions on the
    /// outer elements. Also returns the table of the universal cell
    /// `path => composite` over identities, indexed by domain point.
    pub fn coend_composite(&self, p: &Path, name: impl Into<String>) -> Result<CoendData> {
        let name = name.into();
        let (node_cats, edges) = self.path_nodes(p);
        self.path_valid(p)?;
        if edges.is_empty() {
            let c = node_cats[0];
            let mut prof = hom_prof(&self.cats[c], c);
            prof.name = name;
            let cocart = (0..self.cats[c].n_objects())
                .map(|x| self.cats[c].id_of(x))
                .collect();
            return Ok(CoendData { prof, cocart });
        }
        let ctx = self.ctx_probe(node_cats.clone(), edges.clone());
        let mut uf = UnionFind::new(ctx.points.len());
        for (p1, p2) in self.junction_pairs(&ctx) {
            uf.union(p1, p2);
        }
        let (ai, bi) = (node_cats[0], *node_cats.last().unwrap());
        let (na, nb) = (self.cats[ai].n_objects(), self.cats[bi].n_objects());
        // Class numbering: per endpoint fibre, in point enumeration order.
        let mut class_of_root: HashMap<(u32, u32, usize), u32> = HashMap::new();
        let mut reps: HashMap<(u32, u32), Vec<usize>> = HashMap::new();
        let mut cocart = Vec::with_capacity(ctx.points.len());
        for (pi, (xs, _)) in ctx.points.iter().enumerate() {
            let key = (xs[0], *xs.last().unwrap());
            let root = uf.find(pi);
            let next = reps.get(&key).map(|v| v.len() as u32).unwrap_or(0);
            let cid = *class_of_root.entry((key.0, key.1, root)).or_insert_with(|| {
                reps.entry(key).or_default().push(pi);
                next
            });
            cocart.push(cid);
        }
        let fib: Vec<Vec<Vec<String>>> = (0..na as u32)
            .map(|x| {
                (0..nb as u32)
                    .map(|y| {
                        let k = reps.get(&(x, y)).map(|v| v.len()).unwrap_or(0);
                        (0..k).map(|i| format!("c{i}")).collect()
                    })
                    .collect()
            })
            .collect();
        let class_at = |pt_idx: usize| cocart[pt_idx];
        let mut lam = vec![vec![vec![Vec::new(); nb]; na]; na];
        for xp in 0..na as u32 {
            for x in 0..na as u32 {
                for y in 0..nb as u32 {
                    let mut t = Vec::new();
                    for am in 0..self.cats[ai].hom_size(xp as usize, x as usize) as u32 {
                        for r in reps.get(&(x, y)).map(|v| v.as_slice()).unwrap_or(&[]) {
                            let (xs, us) = &ctx.points[*r];
                            let mut xs1 = xs.clone();
                            xs1[0] = xp;
                            let mut us1 = us.clone();
                            us1[0] =
                                self.profs[edges[0]].act_left(xp, x, xs[1], am, us[0]);
                            t.push(class_at(ctx.index[&(xs1, us1)]));
                        }
                    }
                    lam[xp as usize][x as usize][y as usize] = t;
                }
            }
        }
        let mut rho = vec![vec![vec![Vec::new(); nb]; nb]; na];
        let last_e = *edges.last().unwrap();
        for x in 0..na as u32 {
            for y in 0..nb as u32 {
                for yp in 0..nb as u32 {
                    let mut t = Vec::new();
                    for r in reps.get(&(x, y)).map(|v| v.as_slice()).unwrap_or(&[]) {
                        for bm in 0..self.cats[bi].hom_size(y as usize, yp as usize) as u32 {
                            let (xs, us) = &ctx.points[*r];
                            let mut xs1 = xs.clone();
                            let ln = xs1.len();
                            xs1[ln - 1] = yp;
                            let mut us1 = us.clone();
                            let un = us1.len();
                            us1[un - 1] = self.profs[last_e].act_right(
                                xs[ln - 2],
                                y,
                                yp,
                                us[un - 1],
                                bm,
                                self.cats[bi].hom_size(y as usize, yp as usize),
                            );
                            t.push(class_at(ctx.index[&(xs1, us1)]));
                        }
                    }
                    rho[x as usize][y as usize][yp as usize] = t;
                }
            }
        }
        Ok(CoendData { prof: ProfData { name, src: ai, tgt: bi, fib, lam, rho }, cocart })
    }

    /// A cell with source and target of length at most one is cartesian
    /// exactly when every component is a bijection onto the target fibre.
    /// For a unary source the component at `(x, y)` is the table itself;
    /// for an empty source the source acts as the hom profunctor, and the
    /// component at `(a, ap)` sends `h : a -> ap` to the right action of
    /// `g(h)` on the value at `a`.
    pub fn cartesian_oracle(&self, cell: &CellVal) -> Result<bool> {
        if !self.cell_valid(cell) {
            return Err(AvdcError::Precondition("not a cell of this instance".into()));
        }
        if cell.frame.src.len() > 1 {
            return Err(AvdcError::Precondition(
                "the bijection criterion applies to frames with source length at most one"
                    .into(),
            ));
        }
        let ctx = self.ctx_for_frame(&cell.frame).expect("validated");
        let table = match &cell.datum {
            Datum::Table(t) => t,
            _ => return Err(AvdcError::Precondition("expected a table datum".into())),
        };
        let f = ctx.f.clone().unwrap();
        let g = ctx.g.clone().unwrap();
        if ctx.node_cats.len() == 1 {
            let a_cat = &self.cats[ctx.node_cats[0]];
            let n = a_cat.n_objects();
            for a in 0..n {
                for ap in 0..n {
                    let (c, d) = (f.obj[a], g.obj[ap]);
                    let size = self.tgt_fiber(&ctx, c, d);
                    if a_cat.hom_size(a, ap) != size {
                        return Ok(false);
                    }
                    let va = table[ctx.index[&(vec![a as u32], Vec::new())]];
                    let mut hit = vec![false; size];
                    for h in 0..a_cat.hom_size(a, ap) as u32 {
                        let gh = g.mor[a][ap][h as usize];
                        let v = self.tgt_right(&ctx, c, g.obj[a], d, va, gh);
                        if hit[v as usize] {
                            return Ok(false);
                        }
                        hit[v as usize] = true;
                    }
                }
            }
            return Ok(true);
        }
        // Group points by component: the pair of boundary objects.
        let mut seen: HashMap<(u32, u32), Vec<u32>> = HashMap::new();
        for (pi, pt) in ctx.points.iter().enumerate() {
            let key = (pt.0[0], *pt.0.last().unwrap());
            seen.entry(key).or_default().push(table[pi]);
        }
        let first = self.cats[ctx.node_cats[0]].n_objects();
        let lastn = self.cats[*ctx.node_cats.last().unwrap()].n_objects();
        for x in 0..first as u32 {
            for y in 0..lastn as u32 {
                let vals = seen.get(&(x, y)).cloned().unwrap_or_default();
                let (c, d) = (f.obj[x as usize], g.obj[y as usize]);
                let size = self.tgt_fiber(&ctx, c, d);
                if vals.len() != size {
                    return Ok(false);
                }
                let mut hit = vec![false; size];
                for v in vals {
                    if hit[v as usize] {
                        return Ok(false);
                    }
                    hit[v as usize] = true;
                }
            }
        }
        Ok(true)
    }

    /// The graph of a nonempty path: objects are alternating tuples of
    /// objects and fibre elements, morphisms are componentwise morphism
    /// tuples compatible with the actions, projections pick out one slot
    /// each, and `proj_tables[i]` is the element family of the projection
    /// cell into edge `i`.
    pub fn graph_of_path(&self, p: &Path, name: impl Into<String>) -> Result<GraphData> {
        self.path_valid(p)?;
        let (node_cats, edges) = self.path_nodes(p);
        let n = edges.len();
        if n == 0 {
            return Err(AvdcError::Precondition(
                "the graph construction needs a nonempty path".into(),
            ));
        }
        let ctx = self.ctx_probe(node_cats.clone(), edges.clone());
        let objects: Vec<String> = ctx
            .points
            .iter()
            .map(|(xs, us)| {
                let mut parts = Vec::new();
                for i in 0..xs.len() {
                    parts.push(self.cats[node_cats[i]].objects[xs[i] as usize].clone());
                    if i < us.len() {
                        let e = edges[i];
                        parts.push(
                            self.profs[e].fib[xs[i] as usize][xs[i + 1] as usize]
                                [us[i] as usize]
                                .clone(),
                        );
                    }
                }
                parts.join("|")
            })
            .collect();
        let np = ctx.points.len();
        // hom[p][q]: the morphism tuples, each one morphism per node.
        let mut hom_tuples: Vec<Vec<Vec<Vec<u32>>>> = vec![vec![Vec::new(); np]; np];
        for (pi, (xs, us)) in ctx.points.iter().enumerate() {
            for (qi, (xsq, usq)) in ctx.points.iter().enumerate() {
                let opts: Vec<Vec<u32>> = (0..node_cats.len())
                    .map(|i| {
                        (0..self.cats[node_cats[i]]
                            .hom_size(xs[i] as usize, xsq[i] as usize)
                            as u32)
                            .collect()
                    })
                    .collect();
                for tuple in super::util::choices(&opts) {
                    let ok = (0..n).all(|i| {
                        let e = edges[i];
                        let lhs = self.profs[e].act_left(
                            xs[i],
                            xsq[i],
                            xsq[i + 1],
                            tuple[i],
                            usq[i],
                        );
                        let rhs = self.profs[e].act_right(
                            xs[i],
                            xs[i + 1],
                            xsq[i + 1],
                            us[i],
                            tuple[i + 1],
                            self.cats[node_cats[i + 1]]
                                .hom_size(xs[i + 1] as usize, xsq[i + 1] as usize),
                        );
                        lhs == rhs
                    });
                    if ok {
                        hom_tuples[pi][qi].push(tuple);
                    }
                }
            }
        }
        let hom: Vec<Vec<Vec<String>>> = hom_tuples
            .iter()
            .map(|row| {
                row.iter()
                    .map(|ts| ts.iter().map(|t| format!("s{}", digits(t))).collect())
                    .collect()
            })
            .collect();
        let mut id = Vec::with_capacity(np);
        for (pi, (xs, _)) in ctx.points.iter().enumerate() {
            let idt: Vec<u32> = (0..node_cats.len())
                .map(|i| self.cats[node_cats[i]].id_of(xs[i] as usize))
                .collect();
            let pos = hom_tuples[pi][pi].iter().position(|t| *t == idt).ok_or_else(|| {
                AvdcError::Internal("identity tuple missing from graph homs".into())
            })?;
            id.push(pos as u32);
        }
        let mut comp = vec![vec![vec![Vec::new(); np]; np]; np];
        for x in 0..np {
            for y in 0..np {
                for z in 0..np {
                    let mut t =
                        Vec::with_capacity(hom_tuples[y][z].len() * hom_tuples[x][y].len());
                    for gt in &hom_tuples[y][z] {
                        for ftp in &hom_tuples[x][y] {
                            let mut c = Vec::with_capacity(node_cats.len());
                            for i in 0..node_cats.len() {
                                let (xi, yi, zi) = (
                                    ctx.points[x].0[i] as usize,
                                    ctx.points[y].0[i] as usize,
                                    ctx.points[z].0[i] as usize,
                                );
                                c.push(self.cats[node_cats[i]].compose(
                                    xi, yi, zi, gt[i], ftp[i],
                                ));
                            }
                            let pos =
                                hom_tuples[x][z].iter().position(|u| *u == c).ok_or_else(
                                    || {
                                        AvdcError::Internal(
                                            "graph homs are not closed under composition"
                                                .into(),
                                        )
                                    },
                                )?;
                            t.push(pos as u32);
                        }
                    }
                    comp[x][y][z] = t;
                }
            }
        }
        let cat = FinCat::new(name, objects, hom, id, comp)?;
        let projections: Vec<FunctorTables> = (0..node_cats.len())
            .map(|i| FunctorTables {
                obj: ctx.points.iter().map(|(xs, _)| xs[i]).collect(),
                mor: (0..np)
                    .map(|pi| {
                        (0..np)
                            .map(|qi| hom_tuples[pi][qi].iter().map(|t| t[i]).collect())
                            .collect()
                    })
                    .collect(),
            })
            .collect();
        let proj_tables: Vec<Vec<u32>> =
            (0..n).map(|i| ctx.points.iter().map(|(_, us)| us[i]).collect()).collect();
        Ok(GraphData { cat, node_cats, projections, proj_tables })
    }

    /// Rebuilds the instance with the graph of `p` appended as a new
    /// category and returns the projection cells in the new instance.
    pub fn extend_with_graph(&self, p: &Path, name: &str) -> Result<GraphExtension> {
        let data = self.graph_of_path(p, name)?;
        let mut cats = self.cats.clone();
        cats.push(data.cat.clone());
        let inst = fin_prof(cats, self.user_profs.clone())?;
        let graph_obj = ObjId::from(inst.cats.len() - 1);
        let edges: Vec<HorId> = match p {
            Path::Empty(_) => unreachable!("graph needs edges"),
            Path::Edges(es) => es
                .iter()
                .map(|e| {
                    inst.hor_named(self.hor_name(*e))
                        .ok_or_else(|| AvdcError::Internal("edge lost in rebuild".into()))
                })
                .collect::<Result<_>>()?,
        };
        let path = Path::from_edges(inst.hor_src(edges[0]), edges.clone());
        let mut proj_verts = Vec::new();
        for (i, t) in data.projections.iter().enumerate() {
            let cod = ObjId::from(data.node_cats[i]);
            let v = inst.vert_of_tables(graph_obj, cod, t).ok_or_else(|| {
                AvdcError::Internal("projection functor missing from enumeration".into())
            })?;
            proj_verts.push(v);
        }
        let projection_cells: Vec<CellVal> = (0..edges.len())
            .map(|i| {
                CellVal::new(
                    Frame {
                        f: proj_verts[i],
                        g: proj_verts[i + 1],
                        src: Path::Empty(graph_obj),
                        tgt: Path::single(edges[i]),
                    },
                    Datum::Table(data.proj_tables[i].clone()),
                )
            })
            .collect();
        Ok(GraphExtension { inst, graph_obj, path, projection_cells })
    }
}

/// A path composite computed by coend, with the table of its universal cell.
pub struct CoendData {
    pub prof: ProfData,
    pub cocart: Vec<u32>,
}

/// The graph category of a path with its projection functors and the element
/// tables of the projection cells.
pub struct GraphData {
    pub cat: FinCat,
    pub node_cats: Vec<usize>,
    pub projections: Vec<FunctorTables>,
    pub proj_tables: Vec<Vec<u32>>,
}

/// The result of appending a graph category to an instance.
pub struct GraphExtension {
    pub inst: Arc<ProfInstance>,
    pub graph_obj: ObjId,
    pub path: Path,
    pub projection_cells: Vec<CellVal>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

impl Avdc for ProfInstance {
    fn name(&self) -> &str {
        &self.name
    }

    fn skeleton(&self) -> &Skeleton {
        &self.skel
    }

    fn cells(&self, frame: &Frame) -> Vec<CellVal> {
        let Some(ctx) = self.ctx_for_frame(frame) else {
            return Vec::new();
        };
        self.enumerate_families(&ctx)
            .into_iter()
            .map(|t| CellVal::new(frame.clone(), Datum::Table(t)))
            .collect()
    }

    fn cell_valid(&self, cell: &CellVal) -> bool {
        let Some(ctx) = self.ctx_for_frame(&cell.frame) else {
            return false;
        };
        let Datum::Table(t) = &cell.datum else {
            return false;
        };
        if t.len() != ctx.points.len() {
            return false;
        }
        for (pi, pt) in ctx.points.iter().enumerate() {
            let (c, d) = self.tgt_pair(&ctx, pt);
            if t[pi] as usize >= self.tgt_fiber(&ctx, c, d) {
                return false;
            }
        }
        self.constraints(&ctx).iter().all(|c| {
            let ap = c.act_p.as_ref().map_or(t[c.p], |tb| tb[t[c.p] as usize]);
            let aq = c.act_q.as_ref().map_or(t[c.q], |tb| tb[t[c.q] as usize]);
            ap == aq
        })
    }

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
        let result_frame = composite_frame(self, &bottom.frame, &top_frames)?;
        let rctx = self.ctx_for_frame(&result_frame).ok_or_else(|| {
            AvdcError::Internal("composite frame failed validation".into())
        })?;
        let bctx = self.ctx_for_frame(&bottom.frame).expect("validated");
        let tctx: Vec<Ctx> = tops
            .iter()
            .map(|t| self.ctx_for_frame(&t.frame).expect("validated"))
            .collect();
        let btable = match &bottom.datum {
            Datum::Table(t) => t,
            _ => unreachable!("prof cells carry tables"),
        };
        let mut table = Vec::with_capacity(rctx.points.len());
        for (xs, us) in &rctx.points {
            // Split the point into per-top blocks and evaluate each top.
            let mut off = 0usize;
            // Unary values: (element, left object, right object) in the
            // bottom's source fibres. Nullary values are morphisms pending
            // absorption: (hom element, category, from, to).
            let mut mids: Vec<(u32, u32, u32)> = Vec::new();
            let mut mid_edges: Vec<usize> = Vec::new();
            let mut pending: Option<(u32, usize, u32, u32)> = None;
            for (w, top) in tops.iter().enumerate() {
                let nw = top.frame.src.len();
                let block_xs = xs[off..=off + nw].to_vec();
                let block_us = us[off..off + nw].to_vec();
                let ttable = match &top.datum {
                    Datum::Table(t) => t,
                    _ => unreachable!("prof cells carry tables"),
                };
                let idx = tctx[w].index[&(block_xs.clone(), block_us)];
                let v = ttable[idx];
                let ft = &self.functors[top.frame.f.idx()];
                let gt = &self.functors[top.frame.g.idx()];
                let c = ft.obj[block_xs[0] as usize];
                let d = gt.obj[*block_xs.last().unwrap() as usize];
                match &top.frame.tgt {
                    Path::Edges(es) => {
                        let e = es[0].idx();
                        let (mut v, mut c) = (v, c);
                        if let Some((h, hcat, hc, hd)) = pending.take() {
                            debug_assert_eq!(hd, c);
                            let _ = hcat;
                            v = self.profs[e].act_left(hc, c, d, h, v);
                            c = hc;
                        }
                        mids.push((v, c, d));
                        mid_edges.push(e);
                    }
                    Path::Empty(bobj) => {
                        let bcat = bobj.idx();
                        pending = Some(match pending.take() {
                            None => (v, bcat, c, d),
                            Some((h, hcat, hc, hd)) => {
                                debug_assert_eq!(hd, c);
                                let h2 = self.cats[hcat].compose(
                                    hc as usize,
                                    hd as usize,
                                    d as usize,
                                    v,
                                    h,
                                );
                                (h2, hcat, hc, d)
                            }
                        });
                    }
                }
                off += nw;
            }
            let value = if mids.is_empty() {
                // Every top is nullary: evaluate the bottom at the chain's
                // start and push it along the image of the chain.
                let (h, hcat, hc, hd) = pending.take().expect("at least one top");
                let _ = hcat;
                let bidx = bctx.index[&(vec![hc], Vec::new())];
                let v0 = btable[bidx];
                let g = bctx.g.as_ref().unwrap();
                let gh = g.mor[hc as usize][hd as usize][h as usize];
                let f = bctx.f.as_ref().unwrap();
                self.tgt_right(&bctx, f.obj[hc as usize], g.obj[hc as usize], g.obj[hd as usize], v0, gh)
            } else {
                if let Some((h, _hcat, _hc, hd)) = pending.take() {
                    // Trailing nullary tops: absorb into the last unary value
                    // by the right action.
                    let lastm = mids.last_mut().unwrap();
                    let e = *mid_edges.last().unwrap();
                    let bcat_t = self.profs[e].tgt;
                    let w = self.cats[bcat_t].hom_size(lastm.2 as usize, hd as usize);
                    lastm.0 = self.profs[e].act_right(lastm.1, lastm.2, hd, lastm.0, h, w);
                    lastm.2 = hd;
                }
                let mut ys = vec![mids[0].1];
                ys.extend(mids.iter().map(|m| m.2));
                let ts: Vec<u32> = mids.iter().map(|m| m.0).collect();
                let bidx = bctx.index[&(ys, ts)];
                btable[bidx]
            };
            table.push(value);
        }
        let out = CellVal::new(result_frame, Datum::Table(table));
        if !self.cell_valid(&out) {
            return Err(AvdcError::Internal(format!(
                "composite is not a cell: {}",
                self.cell_name(&out)
            )));
        }
        Ok(out)
    }

    fn identity_hor(&self, j: HorId) -> CellVal {
        let (s, t) = (self.hor_src(j), self.hor_tgt(j));
        let frame = Frame {
            f: self.identity_of(s),
            g: self.identity_of(t),
            src: Path::single(j),
            tgt: Path::single(j),
        };
        let ctx = self.ctx_for_frame(&frame).expect("identity frame is valid");
        let table = ctx.points.iter().map(|(_, us)| us[0]).collect();
        CellVal::new(frame, Datum::Table(table))
    }

    fn identity_vert(&self, f: VertId) -> CellVal {
        let (a, c) = (self.vert_dom(f), self.vert_cod(f));
        let frame = Frame { f, g: f, src: Path::Empty(a), tgt: Path::Empty(c) };
        let ft = &self.functors[f.idx()];
        let table = (0..self.cats[a.idx()].n_objects())
            .map(|x| self.cats[c.idx()].id_of(ft.obj[x] as usize))
            .collect();
        CellVal::new(frame, Datum::Table(table))
    }

    fn cells_per_frame_bound(&self, max_src_len: usize) -> u64 {
        let max_fib: u64 = self
            .profs
            .iter()
            .flat_map(|p| p.fib.iter().flatten().map(|f| f.len() as u64))
            .max()
            .unwrap_or(0)
            .max(1);
        let max_obj: u64 =
            self.cats.iter().map(|c| c.n_objects() as u64).max().unwrap_or(1);
        let points = max_obj
            .saturating_pow(max_src_len as u32 + 1)
            .saturating_mul(max_fib.saturating_pow(max_src_len as u32));
        max_fib.saturating_pow(points.min(u32::MAX as u64) as u32)
    }

    fn as_any(&self) -> &dyn Any {
        self as &dyn Any
    }
}
