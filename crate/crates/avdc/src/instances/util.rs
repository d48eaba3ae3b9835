use std::collections::HashMap;

use crate::core::{ObjId, SkeletonBuilder, VertId};

use super::universe::FinSetUniverse;

/// All vectors of the given length with entries in `0..base`, in
/// lexicographic order. The empty length gives one empty vector.
pub fn all_tables(len: usize, base: usize) -> Vec<Vec<u32>> {
    if len == 0 {
        return vec![Vec::new()];
    }
    if base == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; len];
    loop {
        out.push(cur.clone());
        let mut i = len;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            cur[i] += 1;
            if (cur[i] as usize) < base {
                break;
            }
            cur[i] = 0;
        }
    }
}

/// All tuples with component `i` drawn from `0..sizes[i]`, lexicographically.
pub fn tuples(sizes: &[usize]) -> Vec<Vec<u32>> {
    if sizes.iter().any(|&s| s == 0) {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; sizes.len()];
    if sizes.is_empty() {
        return vec![Vec::new()];
    }
    loop {
        out.push(cur.clone());
        let mut i = sizes.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            cur[i] += 1;
            if (cur[i] as usize) < sizes[i] {
                break;
            }
            cur[i] = 0;
        }
    }
}

/// One vector per way of picking an entry from each choice list, in
/// lexicographic order with the first position most significant.
pub fn choices(options: &[Vec<u32>]) -> Vec<Vec<u32>> {
    if options.iter().any(|o| o.is_empty()) {
        return Vec::new();
    }
    let mut out = vec![Vec::new()];
    for opts in options {
        let mut next = Vec::with_capacity(out.len() * opts.len());
        for prefix in &out {
            for &o in opts {
                let mut p = prefix.clone();
                p.push(o);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// Digit string for compact canonical names of tables.
pub fn digits(table: &[u32]) -> String {
    table.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("")
}

/// The vertical data shared by the set-based instances: objects are the
/// universe's sets and vertical morphisms are all functions between them,
/// composed by table lookup.
pub struct FuncBase {
    pub names: Vec<String>,
    pub sets: Vec<Vec<String>>,
    pub func_tables: Vec<Vec<u32>>,
    pub vert_lookup: HashMap<(ObjId, ObjId, Vec<u32>), VertId>,
}

/// Populates `b` with the universe's objects and all functions between them,
/// including identities and the full composition table.
pub fn build_func_base(b: &mut SkeletonBuilder, u: &FinSetUniverse) -> FuncBase {
    let sets: Vec<Vec<String>> = u.sets.iter().map(|(_, es)| es.clone()).collect();
    let names: Vec<String> = u.sets.iter().map(|(n, _)| n.clone()).collect();
    for n in &names {
        b.add_object(n.clone());
    }

    let mut func_tables = Vec::new();
    let mut vert_bounds: Vec<(ObjId, ObjId)> = Vec::new();
    let mut vert_lookup = HashMap::new();
    for d in 0..sets.len() {
        for c in 0..sets.len() {
            let (d, c) = (ObjId::from(d), ObjId::from(c));
            for table in all_tables(sets[d.idx()].len(), sets[c.idx()].len()) {
                let name = format!("{}>{}:{}", names[d.idx()], names[c.idx()], digits(&table));
                let v = b.add_vert(name, d, c);
                vert_lookup.insert((d, c, table.clone()), v);
                vert_bounds.push((d, c));
                func_tables.push(table);
            }
        }
    }
    for (a, set) in sets.iter().enumerate() {
        let a = ObjId::from(a);
        let id_table: Vec<u32> = (0..set.len() as u32).collect();
        let f = vert_lookup[&(a, a, id_table)];
        b.set_identity(a, f);
    }
    for gi in 0..func_tables.len() {
        for fi in 0..func_tables.len() {
            let (gd, gc) = vert_bounds[gi];
            let (fd, fc) = vert_bounds[fi];
            if fc != gd {
                continue;
            }
            let comp: Vec<u32> =
                func_tables[fi].iter().map(|&x| func_tables[gi][x as usize]).collect();
            let gf = vert_lookup[&(fd, gc, comp)];
            b.set_composite(VertId::from(gi), VertId::from(fi), gf);
        }
    }

    FuncBase { names, sets, func_tables, vert_lookup }
}
