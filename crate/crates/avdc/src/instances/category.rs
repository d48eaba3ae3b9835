use crate::core::{AvdcError, Result};

use super::util::all_tables;

/// A finite category presented by explicit hom-sets and composition tables.
///
/// `hom[x][y]` lists the names of the morphisms from `x` to `y`; a morphism
/// is referred to by its index in that list. `comp[x][y][z]` tabulates
/// composition `hom[y][z] x hom[x][y] -> hom[x][z]` with entry
/// `g * |hom[x][y]| + f` holding `g after f`. Construction checks the
/// category laws, so a value of this type is always a category.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FinCat {
    pub name: String,
    pub objects: Vec<String>,
    hom: Vec<Vec<Vec<String>>>,
    id: Vec<u32>,
    comp: Vec<Vec<Vec<Vec<u32>>>>,
}

impl FinCat {
    pub fn new(
        name: impl Into<String>,
        objects: Vec<String>,
        hom: Vec<Vec<Vec<String>>>,
        id: Vec<u32>,
        comp: Vec<Vec<Vec<Vec<u32>>>>,
    ) -> Result<FinCat> {
        let name = name.into();
        let n = objects.len();
        let shape_err = |what: &str| {
            Err(AvdcError::Load(format!("category {name}: {what}")))
        };
        if hom.len() != n || hom.iter().any(|row| row.len() != n) {
            return shape_err("hom table is not an n by n grid");
        }
        if id.len() != n {
            return shape_err("identity list length differs from object count");
        }
        if comp.len() != n
            || comp.iter().any(|r| r.len() != n || r.iter().any(|c| c.len() != n))
        {
            return shape_err("composition table is not an n by n by n grid");
        }
        let c = FinCat { name, objects, hom, id, comp };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<()> {
        let n = self.objects.len();
        let err = |what: String| Err(AvdcError::Load(format!("category {}: {what}", self.name)));
        for x in 0..n {
            if self.id[x] as usize >= self.hom[x][x].len() {
                return err(format!("identity of {} is out of range", self.objects[x]));
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let table = &self.comp[x][y][z];
                    let pairs = self.hom[y][z].len() * self.hom[x][y].len();
                    if table.len() != pairs {
                        return err(format!(
                            "composition table over ({}, {}, {}) has {} entries, expected {}",
                            self.objects[x],
                            self.objects[y],
                            self.objects[z],
                            table.len(),
                            pairs
                        ));
                    }
                    if pairs > 0 && self.hom[x][z].is_empty() {
                        return err(format!(
                            "morphisms {} -> {} -> {} have no composite",
                            self.objects[x], self.objects[y], self.objects[z]
                        ));
                    }
                    for &v in table {
                        if v as usize >= self.hom[x][z].len() {
                            return err(format!(
                                "composition entry out of range over ({}, {}, {})",
                                self.objects[x], self.objects[y], self.objects[z]
                            ));
                        }
                    }
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for m in 0..self.hom[x][y].len() as u32 {
                    if self.compose(x, y, y, self.id[y], m) != m
                        || self.compose(x, x, y, m, self.id[x]) != m
                    {
                        return err(format!(
                            "identity law fails on {}",
                            self.mor_name(x, y, m)
                        ));
                    }
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    for w in 0..n {
                        for f in 0..self.hom[x][y].len() as u32 {
                            for g in 0..self.hom[y][z].len() as u32 {
                                for h in 0..self.hom[z][w].len() as u32 {
                                    let gf = self.compose(x, y, z, g, f);
                                    let hg = self.compose(y, z, w, h, g);
                                    if self.compose(x, z, w, h, gf)
                                        != self.compose(x, y, w, hg, f)
                                    {
                                        return err(format!(
                                            "associativity fails on {}, {}, {}",
                                            self.mor_name(x, y, f),
                                            self.mor_name(y, z, g),
                                            self.mor_name(z, w, h)
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

    /// The thin category of a reflexive transitive relation: one morphism
    /// `x -> y` exactly when `leq[x][y]`.
    pub fn poset(
        name: impl Into<String>,
        objects: Vec<String>,
        leq: &[Vec<bool>],
    ) -> Result<FinCat> {
        let n = objects.len();
        let name = name.into();
        if leq.len() != n || leq.iter().any(|r| r.len() != n) {
            return Err(AvdcError::Load(format!(
                "category {name}: order table is not an n by n grid"
            )));
        }
        let mut hom = vec![vec![Vec::new(); n]; n];
        for x in 0..n {
            for y in 0..n {
                if leq[x][y] {
                    hom[x][y].push(format!("{}<={}", objects[x], objects[y]));
                }
            }
        }
        let mut comp = vec![vec![vec![Vec::new(); n]; n]; n];
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if leq[x][y] && leq[y][z] {
                        if !leq[x][z] {
                            return Err(AvdcError::Load(format!(
                                "category {name}: order is not transitive at \
                                 {}, {}, {}",
                                objects[x], objects[y], objects[z]
                            )));
                        }
                        comp[x][y][z].push(0);
                    }
                }
            }
        }
        FinCat::new(name, objects, hom, vec![0; n], comp)
    }

    pub fn discrete(name: impl Into<String>, objects: Vec<String>) -> FinCat {
        let n = objects.len();
        let leq: Vec<Vec<bool>> = (0..n).map(|x| (0..n).map(|y| x == y).collect()).collect();
        FinCat::poset(name, objects, &leq).expect("a discrete order is a preorder")
    }

    pub fn n_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn hom_size(&self, x: usize, y: usize) -> usize {
        self.hom[x][y].len()
    }

    pub fn mor_name(&self, x: usize, y: usize, m: u32) -> String {
        format!("{}:{}>{}", self.hom[x][y][m as usize], self.objects[x], self.objects[y])
    }

    pub fn id_of(&self, x: usize) -> u32 {
        self.id[x]
    }

    /// `g after f` for `f` in `hom[x][y]` and `g` in `hom[y][z]`.
    pub fn compose(&self, x: usize, y: usize, z: usize, g: u32, f: u32) -> u32 {
        self.comp[x][y][z][g as usize * self.hom[x][y].len() + f as usize]
    }

    pub fn hom_names(&self) -> &Vec<Vec<Vec<String>>> {
        &self.hom
    }
}

/// A functor between two finite categories as lookup tables: `obj[x]` is the
/// image object and `mor[x][y][m]` the image of morphism `m` in `hom[x][y]`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FunctorTables {
    pub obj: Vec<u32>,
    pub mor: Vec<Vec<Vec<u32>>>,
}

pub fn is_functor(a: &FinCat, c: &FinCat, t: &FunctorTables) -> bool {
    let n = a.n_objects();
    if t.obj.len() != n || t.obj.iter().any(|&o| (o as usize) >= c.n_objects()) {
        return false;
    }
    if t.mor.len() != n || t.mor.iter().any(|r| r.len() != n) {
        return false;
    }
    for x in 0..n {
        for y in 0..n {
            let (fx, fy) = (t.obj[x] as usize, t.obj[y] as usize);
            if t.mor[x][y].len() != a.hom_size(x, y) {
                return false;
            }
            if t.mor[x][y].iter().any(|&m| (m as usize) >= c.hom_size(fx, fy)) {
                return false;
            }
        }
    }
    for x in 0..n {
        if t.mor[x][x][a.id_of(x) as usize] != c.id_of(t.obj[x] as usize) {
            return false;
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let (fx, fy, fz) = (t.obj[x] as usize, t.obj[y] as usize, t.obj[z] as usize);
                for f in 0..a.hom_size(x, y) as u32 {
                    for g in 0..a.hom_size(y, z) as u32 {
                        let gf = a.compose(x, y, z, g, f);
                        let lhs = t.mor[x][z][gf as usize];
                        let rhs =
                            c.compose(fx, fy, fz, t.mor[y][z][g as usize], t.mor[x][y][f as usize]);
                        if lhs != rhs {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

/// Every functor from `a` to `c`, ordered by object table then by the
/// morphism tables in hom-pair order. Assembles morphism tables pair by pair
/// and prunes as soon as an identity or a fully assigned composition triple
/// fails, so empty hom-sets in `c` cut the search early.
pub fn all_functors(a: &FinCat, c: &FinCat) -> Vec<FunctorTables> {
    let n = a.n_objects();
    let mut out = Vec::new();
    let obj_maps = all_tables(n, c.n_objects());
    for obj in obj_maps {
        let mut mor: Vec<Vec<Vec<u32>>> = vec![vec![Vec::new(); n]; n];
        assign_pair(a, c, &obj, &mut mor, 0, &mut out);
    }
    out
}

fn assign_pair(
    a: &FinCat,
    c: &FinCat,
    obj: &[u32],
    mor: &mut Vec<Vec<Vec<u32>>>,
    pair: usize,
    out: &mut Vec<FunctorTables>,
) {
    let n = a.n_objects();
    if pair == n * n {
        out.push(FunctorTables { obj: obj.to_vec(), mor: mor.clone() });
        return;
    }
    let (x, y) = (pair / n, pair % n);
    let (fx, fy) = (obj[x] as usize, obj[y] as usize);
    for cand in all_tables(a.hom_size(x, y), c.hom_size(fx, fy)) {
        if x == y && cand[a.id_of(x) as usize] != c.id_of(fx) {
            continue;
        }
        mor[x][y] = cand;
        if pair_consistent(a, c, obj, mor, pair) {
            assign_pair(a, c, obj, mor, pair + 1, out);
        }
        mor[x][y] = Vec::new();
    }
}

/// Checks every composition triple all three of whose hom-pairs are assigned,
/// where pairs `0..=pair` are assigned in row-major order.
fn pair_consistent(
    a: &FinCat,
    c: &FinCat,
    obj: &[u32],
    mor: &[Vec<Vec<u32>>],
    pair: usize,
) -> bool {
    let n = a.n_objects();
    let assigned = |x: usize, y: usize| x * n + y <= pair;
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if !(assigned(x, y) && assigned(y, z) && assigned(x, z)) {
                    continue;
                }
                let (fx, fy, fz) = (obj[x] as usize, obj[y] as usize, obj[z] as usize);
                for f in 0..a.hom_size(x, y) as u32 {
                    for g in 0..a.hom_size(y, z) as u32 {
                        let gf = a.compose(x, y, z, g, f);
                        let lhs = mor[x][z][gf as usize];
                        let rhs =
                            c.compose(fx, fy, fz, mor[y][z][g as usize], mor[x][y][f as usize]);
                        if lhs != rhs {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

pub fn identity_functor(a: &FinCat) -> FunctorTables {
    let n = a.n_objects();
    FunctorTables {
        obj: (0..n as u32).collect(),
        mor: (0..n)
            .map(|x| (0..n).map(|y| (0..a.hom_size(x, y) as u32).collect()).collect())
            .collect(),
    }
}

/// The composite `g after f` of functor tables, where `f` leaves the category
/// indexing `f.mor` and `g` continues from its codomain.
pub fn compose_functors(g: &FunctorTables, f: &FunctorTables) -> FunctorTables {
    let n = f.obj.len();
    FunctorTables {
        obj: f.obj.iter().map(|&x| g.obj[x as usize]).collect(),
        mor: (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| {
                        let (fx, fy) = (f.obj[x] as usize, f.obj[y] as usize);
                        f.mor[x][y].iter().map(|&m| g.mor[fx][fy][m as usize]).collect()
                    })
                    .collect()
            })
            .collect(),
    }
}
