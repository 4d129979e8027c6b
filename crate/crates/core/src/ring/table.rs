//! Finite rings given by addition and multiplication tables.
//!
//! A finite commutative ring is a finite product of local rings; [`TableRing::new`]
//! checks the ring axioms and splits the ring along its primitive idempotents into
//! local pieces `eR`, each re-indexed as a [`LocalTable`].

use std::sync::Arc;

use crate::error::{Error, Result};

pub const MAX_TABLE_SIZE: usize = 64;

/// A local ring `eR` cut out of a table ring by a primitive idempotent `e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalTable {
    pub size: usize,
    pub add: Vec<u16>,
    pub mul: Vec<u16>,
    pub neg: Vec<u16>,
    pub zero: u16,
    pub one: u16,
    pub inv: Vec<Option<u16>>,
    pub nilpotent: Vec<bool>,
    /// `jacobson[x]` iff `1 + x*s` is a unit for every `s`.
    pub jacobson: Vec<bool>,
    pub nil_index: u32,
    /// Index of each local element in the parent table.
    pub global: Vec<u16>,
}

impl LocalTable {
    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        self.add[a as usize * self.size + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.size + b as usize]
    }

    fn from_parts(size: usize, add: Vec<u16>, mul: Vec<u16>, zero: u16, one: u16, global: Vec<u16>) -> Result<Self> {
        let mut neg = vec![0u16; size];
        for a in 0..size {
            neg[a] = (0..size as u16)
                .find(|&b| add[a * size + b as usize] == zero)
                .expect("additive inverses checked by caller");
        }
        let mut inv = vec![None; size];
        for a in 0..size {
            inv[a] = (0..size as u16).find(|&b| mul[a * size + b as usize] == one);
        }
        let mut nilpotent = vec![false; size];
        let mut nil_index = 1;
        for a in 0..size {
            let mut x = a as u16;
            for j in 1..=size as u32 + 1 {
                if x == zero {
                    nilpotent[a] = true;
                    nil_index = nil_index.max(j);
                    break;
                }
                x = mul[x as usize * size + a];
            }
        }
        let mut jacobson = vec![false; size];
        for a in 0..size {
            jacobson[a] = (0..size).all(|s| {
                let prod = mul[a * size + s];
                inv[add[one as usize * size + prod as usize] as usize].is_some()
            });
        }
        let table = LocalTable {
            size,
            add,
            mul,
            neg,
            zero,
            one,
            inv,
            nilpotent,
            jacobson,
            nil_index,
            global,
        };
        // local: the non-units are closed under addition
        for a in 0..size as u16 {
            for b in 0..size as u16 {
                if table.inv[a as usize].is_none()
                    && table.inv[b as usize].is_none()
                    && table.inv[table.add(a, b) as usize].is_some()
                {
                    return Err(Error::InvalidDescriptor(format!(
                        "stalk is not local: non-units {} and {} sum to a unit",
                        table.global[a as usize], table.global[b as usize]
                    )));
                }
            }
        }
        Ok(table)
    }

    /// Tables in local indices, for descriptors of stalk rings.
    pub fn tables(&self) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
        let n = self.size;
        let rows = |t: &[u16]| (0..n).map(|i| t[i * n..(i + 1) * n].iter().map(|&x| x as usize).collect()).collect();
        (rows(&self.add), rows(&self.mul))
    }

    pub fn local_of_global(&self, g: usize) -> Option<u16> {
        self.global.iter().position(|&x| x as usize == g).map(|i| i as u16)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRing {
    pub size: usize,
    pub add: Vec<u16>,
    pub mul: Vec<u16>,
    pub zero: u16,
    pub one: u16,
    pub stalks: Vec<Arc<LocalTable>>,
    /// Global index of each primitive idempotent, one per stalk.
    pub primitive: Vec<u16>,
    /// `to_local[g][i]`: local index of `e_i * g` in stalk `i`.
    pub to_local: Vec<Vec<u16>>,
}

fn non_ring(axiom: &str, a: usize, b: usize, c: usize) -> Error {
    Error::NonRing {
        axiom: axiom.to_string(),
        a,
        b,
        c,
    }
}

impl TableRing {
    pub fn new(add_rows: &[Vec<usize>], mul_rows: &[Vec<usize>]) -> Result<Self> {
        let n = add_rows.len();
        if n > MAX_TABLE_SIZE {
            return Err(Error::UnsupportedSize(n));
        }
        if n < 2 {
            return Err(Error::InvalidDescriptor("table ring needs at least two elements".into()));
        }
        if mul_rows.len() != n
            || add_rows.iter().chain(mul_rows).any(|r| r.len() != n || r.iter().any(|&x| x >= n))
        {
            return Err(Error::InvalidDescriptor(format!("tables must be {n}x{n} with entries below {n}")));
        }
        let add: Vec<u16> = add_rows.iter().flatten().map(|&x| x as u16).collect();
        let mul: Vec<u16> = mul_rows.iter().flatten().map(|&x| x as u16).collect();
        let a = |x: usize, y: usize| add[x * n + y] as usize;
        let m = |x: usize, y: usize| mul[x * n + y] as usize;

        let zero = (0..n).find(|&z| (0..n).all(|x| a(z, x) == x)).ok_or_else(|| non_ring("additive identity", 0, 0, 0))?;
        let one = (0..n).find(|&o| (0..n).all(|x| m(o, x) == x)).ok_or_else(|| non_ring("multiplicative identity", 0, 0, 0))?;
        if zero == one {
            return Err(Error::InvalidDescriptor("zero ring".into()));
        }
        for x in 0..n {
            for y in 0..n {
                if a(x, y) != a(y, x) {
                    return Err(non_ring("additive commutativity", x, y, 0));
                }
                if m(x, y) != m(y, x) {
                    return Err(non_ring("multiplicative commutativity", x, y, 0));
                }
            }
            if !(0..n).any(|y| a(x, y) == zero) {
                return Err(non_ring("additive inverse", x, 0, 0));
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if a(a(x, y), z) != a(x, a(y, z)) {
                        return Err(non_ring("additive associativity", x, y, z));
                    }
                    if m(m(x, y), z) != m(x, m(y, z)) {
                        return Err(non_ring("multiplicative associativity", x, y, z));
                    }
                    if m(x, a(y, z)) != a(m(x, y), m(x, z)) {
                        return Err(non_ring("distributivity", x, y, z));
                    }
                }
            }
        }

        let idempotents: Vec<usize> = (0..n).filter(|&e| m(e, e) == e).collect();
        let primitive: Vec<usize> = idempotents
            .iter()
            .copied()
            .filter(|&e| e != zero && idempotents.iter().all(|&f| m(f, e) == zero || m(f, e) == e))
            .collect();
        let mut total = zero;
        for (i, &e) in primitive.iter().enumerate() {
            for &f in &primitive[i + 1..] {
                if m(e, f) != zero {
                    return Err(non_ring("primitive idempotents orthogonal", e, f, 0));
                }
            }
            total = a(total, e);
        }
        if total != one {
            return Err(non_ring("primitive idempotents sum to one", total, 0, 0));
        }

        let mut stalks = Vec::with_capacity(primitive.len());
        let mut to_local = vec![Vec::with_capacity(primitive.len()); n];
        for &e in &primitive {
            let mut members: Vec<usize> = (0..n).map(|r| m(e, r)).collect();
            members.sort_unstable();
            members.dedup();
            let size = members.len();
            let idx = |g: usize| members.binary_search(&g).expect("eR closed under ring operations") as u16;
            let mut ladd = vec![0u16; size * size];
            let mut lmul = vec![0u16; size * size];
            for (i, &x) in members.iter().enumerate() {
                for (j, &y) in members.iter().enumerate() {
                    ladd[i * size + j] = idx(a(x, y));
                    lmul[i * size + j] = idx(m(x, y));
                }
            }
            let global = members.iter().map(|&g| g as u16).collect();
            let table = LocalTable::from_parts(size, ladd, lmul, idx(zero), idx(e), global)?;
            for (g, row) in to_local.iter_mut().enumerate() {
                row.push(idx(m(e, g)));
            }
            stalks.push(Arc::new(table));
        }
        Ok(TableRing {
            size: n,
            add,
            mul,
            zero: zero as u16,
            one: one as u16,
            stalks,
            primitive: primitive.iter().map(|&e| e as u16).collect(),
            to_local,
        })
    }

    #[inline]
    pub fn add(&self, a: u16, b: u16) -> u16 {
        self.add[a as usize * self.size + b as usize]
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.size + b as usize]
    }

    /// Gluing: the sum of the components, each viewed inside the parent table.
    pub fn glue(&self, locals: &[u16]) -> u16 {
        locals
            .iter()
            .zip(&self.stalks)
            .fold(self.zero, |acc, (&l, st)| self.add(acc, st.global[l as usize]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zmod_tables(n: usize) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
        let add = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let mul = (0..n).map(|a| (0..n).map(|b| (a * b) % n).collect()).collect();
        (add, mul)
    }

    #[test]
    fn z6_splits_into_two_fields() {
        let (add, mul) = zmod_tables(6);
        let t = TableRing::new(&add, &mul).unwrap();
        assert_eq!(t.primitive, vec![3, 4]);
        assert_eq!(t.stalks[0].size, 2);
        assert_eq!(t.stalks[1].size, 3);
        for g in 0..6u16 {
            assert_eq!(t.glue(&t.to_local[g as usize]), g);
        }
    }

    #[test]
    fn rejects_non_distributive() {
        let (add, _) = zmod_tables(3);
        // multiplication table of max(a, b) is commutative and associative but not distributive
        let mul: Vec<Vec<usize>> = (0..3).map(|a| (0..3).map(|b| if a == 1 { b } else if b == 1 { a } else { a.max(b) }).collect()).collect();
        match TableRing::new(&add, &mul) {
            Err(Error::NonRing { axiom, .. }) => assert!(axiom.contains("distributivity") || axiom.contains("associativity")),
            other => panic!("expected NonRing, got {other:?}"),
        }
    }

    #[test]
    fn rejects_oversized() {
        let (add, mul) = zmod_tables(65);
        assert_eq!(TableRing::new(&add, &mul), Err(Error::UnsupportedSize(65)));
    }

    #[test]
    fn z4_is_local_with_nilpotent_two() {
        let (add, mul) = zmod_tables(4);
        let t = TableRing::new(&add, &mul).unwrap();
        assert_eq!(t.stalks.len(), 1);
        let s = &t.stalks[0];
        assert_eq!(s.nilpotent, vec![true, false, true, false]);
        assert_eq!(s.jacobson, vec![true, false, true, false]);
        assert_eq!(s.nil_index, 2);
    }
}
