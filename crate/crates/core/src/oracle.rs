//! Exhaustive oracles: linear systems over the stalks, brute-force strong cleanness and the
//! power-chain test for strong pi-regularity.

use rayon::prelude::*;

use crate::cert::{PiRegularCertificate, StrongCleanCertificate};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ring::{Ring, Stalk, Value};

pub const DEFAULT_BUDGET: u128 = 1_000_000;
const MAX_FLAT: u128 = 1024;

/// A finite ring with its operations tabulated on element indices.
#[derive(Clone, Debug)]
pub struct FlatRing {
    pub size: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    unit: Vec<bool>,
    pub zero: u16,
    pub one: u16,
}

impl FlatRing {
    pub fn new(ring: &Ring) -> Result<FlatRing> {
        let size = ring.order().ok_or(Error::InfiniteRing)?;
        if size > MAX_FLAT {
            return Err(Error::BudgetExceeded {
                needed: size,
                budget: MAX_FLAT,
            });
        }
        let n = size as usize;
        let elems: Vec<_> = ring.elements().collect();
        let mut add = vec![0u16; n * n];
        let mut mul = vec![0u16; n * n];
        for (i, a) in elems.iter().enumerate() {
            for (j, b) in elems.iter().enumerate().skip(i) {
                let s = ring.index_of(&ring.add(a, b)) as u16;
                let p = ring.index_of(&ring.mul(a, b)) as u16;
                add[i * n + j] = s;
                add[j * n + i] = s;
                mul[i * n + j] = p;
                mul[j * n + i] = p;
            }
        }
        let neg = elems.iter().map(|a| ring.index_of(&ring.neg(a)) as u16).collect();
        let unit = elems.iter().map(|a| ring.is_unit(a)).collect();
        Ok(FlatRing {
            size: n,
            add,
            mul,
            neg,
            unit,
            zero: ring.index_of(&ring.zero()) as u16,
            one: ring.index_of(&ring.one()) as u16,
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

    #[inline]
    pub fn sub(&self, a: u16, b: u16) -> u16 {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn is_unit(&self, a: u16) -> bool {
        self.unit[a as usize]
    }

    /// `a * b` for row-major `n x n` index matrices.
    pub fn mat_mul(&self, a: &[u16], b: &[u16], n: usize) -> Vec<u16> {
        let mut out = vec![self.zero; n * n];
        for i in 0..n {
            for k in 0..n {
                let x = a[i * n + k];
                if x == self.zero {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] = self.add(out[i * n + j], self.mul(x, b[k * n + j]));
                }
            }
        }
        out
    }

    /// Determinant by expansion along the first row.
    pub fn det(&self, a: &[u16], n: usize) -> u16 {
        match n {
            1 => a[0],
            2 => self.sub(self.mul(a[0], a[3]), self.mul(a[1], a[2])),
            _ => {
                let mut acc = self.zero;
                let mut minor = vec![self.zero; (n - 1) * (n - 1)];
                for j in 0..n {
                    if a[j] == self.zero {
                        continue;
                    }
                    for r in 1..n {
                        let mut c2 = 0;
                        for c in 0..n {
                            if c != j {
                                minor[(r - 1) * (n - 1) + c2] = a[r * n + c];
                                c2 += 1;
                            }
                        }
                    }
                    let term = self.mul(a[j], self.det(&minor, n - 1));
                    acc = if j % 2 == 0 { self.add(acc, term) } else { self.sub(acc, term) };
                }
                acc
            }
        }
    }
}

fn to_indices(m: &Matrix) -> Vec<u16> {
    m.entries().iter().map(|e| m.ring().index_of(e) as u16).collect()
}

fn from_indices(ring: &Ring, n: usize, idx: &[u16]) -> Matrix {
    Matrix::new(ring, n, n, idx.iter().map(|&i| ring.element_at(i as u128)).collect())
}

/// Exhaustive search for a commuting idempotent `E` with `A - E` a unit, scanning all
/// `|R|^(n^2)` matrices in canonical order (first entry most significant).
pub fn strongly_clean_bruteforce(a: &Matrix, budget: u128) -> Result<Option<StrongCleanCertificate>> {
    let ring = a.ring();
    let size = ring.order().ok_or(Error::InfiniteRing)?;
    let n = a.n();
    let needed = (0..n * n).fold(1u128, |acc, _| acc.saturating_mul(size));
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let flat = FlatRing::new(ring)?;
    let ai = to_indices(a);
    let decode = |mut idx: u128| {
        let mut e = vec![0u16; n * n];
        for slot in e.iter_mut().rev() {
            *slot = (idx % size) as u16;
            idx /= size;
        }
        e
    };
    let hit = (0..needed).into_par_iter().find_first(|&idx| {
        let e = decode(idx);
        if flat.mat_mul(&e, &ai, n) != flat.mat_mul(&ai, &e, n) || flat.mat_mul(&e, &e, n) != e {
            return false;
        }
        let u: Vec<u16> = ai.iter().zip(&e).map(|(&x, &y)| flat.sub(x, y)).collect();
        flat.is_unit(flat.det(&u, n))
    });
    Ok(hit.map(|idx| {
        let e = from_indices(ring, n, &decode(idx));
        let u = a.sub(&e);
        let u_inv = u.inverse().expect("determinant is a unit");
        StrongCleanCertificate { e, u, u_inv }
    }))
}

/// Some `X` with `A X = B`, solved stalk by stalk, or `None` if the system is inconsistent.
///
/// Chain-ring stalks (`Z/p^k`, `Z_(p)`) use diagonalization with minimal-valuation
/// pivots and free variables set to zero; table stalks are searched exhaustively.
pub fn linear_solve(a: &Matrix, b: &Matrix) -> Result<Option<Matrix>> {
    if a.ring() != b.ring() || a.rows() != b.rows() {
        return Err(Error::RingMismatch);
    }
    let ring = a.ring();
    let mut parts = Vec::with_capacity(ring.stalk_count());
    for i in 0..ring.stalk_count() {
        let (ai, bi) = (a.restrict(i), b.restrict(i));
        let stalk = ring.stalk(i);
        let sol = match stalk {
            Stalk::Table(_) => solve_exhaustive(&ai, &bi)?,
            _ => solve_chain(stalk, &ai, &bi),
        };
        match sol {
            Some(x) => parts.push(x),
            None => return Ok(None),
        }
    }
    Ok(Some(Matrix::glue(ring, &parts)))
}

fn val(stalk: &Stalk, v: &Value) -> u32 {
    stalk.valuation(v).unwrap_or(u32::MAX)
}

fn solve_chain(s: &Stalk, a: &Matrix, b: &Matrix) -> Option<Matrix> {
    let (m, n, q) = (a.rows(), a.cols(), b.cols());
    let v = |x: &crate::ring::Element| x.values()[0].clone();
    let mut am: Vec<Vec<Value>> = (0..m).map(|i| (0..n).map(|j| v(a.get(i, j))).collect()).collect();
    let mut bm: Vec<Vec<Value>> = (0..m).map(|i| (0..q).map(|j| v(b.get(i, j))).collect()).collect();
    let mut qm: Vec<Vec<Value>> = (0..n).map(|i| (0..n).map(|j| if i == j { s.one() } else { s.zero() }).collect()).collect();
    let mut rank = 0;
    for t in 0..m.min(n) {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let vv = val(s, &am[i][j]);
                if vv != u32::MAX && best.is_none_or(|(bv, _, _)| vv < bv) {
                    best = Some((vv, i, j));
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        am.swap(t, pi);
        bm.swap(t, pi);
        for row in am.iter_mut() {
            row.swap(t, pj);
        }
        for row in qm.iter_mut() {
            row.swap(t, pj);
        }
        let pivot = am[t][t].clone();
        for i in t + 1..m {
            if s.is_zero(&am[i][t]) {
                continue;
            }
            let f = s.exact_div(&am[i][t], &pivot).expect("pivot has minimal valuation");
            for j in t..n {
                am[i][j] = s.sub(&am[i][j], &s.mul(&f, &am[t][j]));
            }
            for j in 0..q {
                bm[i][j] = s.sub(&bm[i][j], &s.mul(&f, &bm[t][j]));
            }
        }
        for j in t + 1..n {
            if s.is_zero(&am[t][j]) {
                continue;
            }
            let f = s.exact_div(&am[t][j], &pivot).expect("pivot has minimal valuation");
            am[t][j] = s.zero();
            for row in qm.iter_mut() {
                row[j] = s.sub(&row[j], &s.mul(&f, &row[t]));
            }
        }
        rank = t + 1;
    }
    if (rank..m).any(|i| bm[i].iter().any(|x| !s.is_zero(x))) {
        return None;
    }
    let mut y = vec![vec![s.zero(); q]; n];
    for t in 0..rank {
        for c in 0..q {
            y[t][c] = s.exact_div(&bm[t][c], &am[t][t])?;
        }
    }
    let sr = a.ring();
    Some(Matrix::from_fn(sr, n, q, |i, c| {
        let mut acc = s.zero();
        for (k, yk) in y.iter().enumerate() {
            acc = s.add(&acc, &s.mul(&qm[i][k], &yk[c]));
        }
        sr.from_stalk_values(&[crate::ring::Element(vec![acc])])
    }))
}

fn solve_exhaustive(a: &Matrix, b: &Matrix) -> Result<Option<Matrix>> {
    let ring = a.ring();
    let size = ring.order().ok_or(Error::InfiniteRing)?;
    let (n, q) = (a.cols(), b.cols());
    let needed = (0..n).fold(1u128, |acc, _| acc.saturating_mul(size));
    if needed > DEFAULT_BUDGET {
        return Err(Error::BudgetExceeded {
            needed,
            budget: DEFAULT_BUDGET,
        });
    }
    let mut cols = Vec::with_capacity(q);
    for c in 0..q {
        let target = Matrix::new(ring, b.rows(), 1, b.column(c));
        let found = (0..needed).find_map(|mut idx| {
            let mut x = vec![ring.zero(); n];
            for slot in x.iter_mut().rev() {
                *slot = ring.element_at(idx % size);
                idx /= size;
            }
            let xm = Matrix::new(ring, n, 1, x);
            (a.mul(&xm) == target).then_some(xm)
        });
        match found {
            Some(x) => cols.push(x),
            None => return Ok(None),
        }
    }
    Ok(Some(Matrix::from_fn(ring, n, q, |i, c| cols[c].get(i, 0).clone())))
}

/// First `k` in `1 ..= n * (max nilpotency index)` for which `A^(k+1) X = A^k` and
/// `Y A^(k+1) = A^k` are solvable; `None` after the bound.
pub fn pi_regular_oracle(a: &Matrix) -> Result<Option<PiRegularCertificate>> {
    let ring = a.ring();
    if !ring.is_finite() {
        return Err(Error::InfiniteRing);
    }
    let n = a.n();
    let c = ring.stalks().iter().filter_map(Stalk::nil_index).max().unwrap_or(1);
    let bound = n as u32 * c.max(1);
    let mut ak = a.clone();
    for k in 1..=bound {
        let ak1 = ak.mul(a);
        if let Some(x) = linear_solve(&ak1, &ak)? {
            if let Some(yt) = linear_solve(&ak1.transpose(), &ak.transpose())? {
                return Ok(Some(PiRegularCertificate {
                    k,
                    x,
                    y: yt.transpose(),
                }));
            }
        }
        ak = ak1;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bruteforce_examples() {
        let z2 = Ring::zmod(2).unwrap();
        let a = Matrix::from_ints(&z2, &[&[0, 0], &[1, 1]]);
        let c = strongly_clean_bruteforce(&a, DEFAULT_BUDGET).unwrap().unwrap();
        assert_eq!(c.e, Matrix::from_ints(&z2, &[&[1, 0], &[1, 0]]));
        assert!(c.u.is_identity());

        let z4 = Ring::zmod(4).unwrap();
        let zero = Matrix::zero(&z4, 2, 2);
        let c = strongly_clean_bruteforce(&zero, DEFAULT_BUDGET).unwrap().unwrap();
        assert!(c.e.is_identity());
        assert_eq!(c.u, Matrix::identity(&z4, 2).neg());

        let v = Matrix::from_ints(&z4, &[&[1, 1], &[0, 3]]);
        let c = strongly_clean_bruteforce(&v, DEFAULT_BUDGET).unwrap().unwrap();
        assert!(c.e.is_zero());
        assert_eq!(c.u, v);
    }

    #[test]
    fn bruteforce_errors() {
        let z2 = Ring::zloc(2).unwrap();
        assert_eq!(
            strongly_clean_bruteforce(&Matrix::identity(&z2, 2), DEFAULT_BUDGET).unwrap_err(),
            Error::InfiniteRing
        );
        let z64 = Ring::zmod(64).unwrap();
        assert!(matches!(
            strongly_clean_bruteforce(&Matrix::identity(&z64, 2), DEFAULT_BUDGET),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn linear_examples() {
        let z6 = Ring::zmod(6).unwrap();
        let x = linear_solve(&Matrix::from_ints(&z6, &[&[2]]), &Matrix::from_ints(&z6, &[&[4]])).unwrap().unwrap();
        assert_eq!(x, Matrix::from_ints(&z6, &[&[2]]));

        let q2 = Ring::zloc(2).unwrap();
        assert_eq!(
            linear_solve(&Matrix::from_ints(&q2, &[&[2]]), &Matrix::from_ints(&q2, &[&[3]])).unwrap(),
            None
        );

        let b = Matrix::from_ints(&z6, &[&[1, 5], &[2, 3]]);
        assert_eq!(linear_solve(&Matrix::identity(&z6, 2), &b).unwrap().unwrap(), b);
    }

    #[test]
    fn linear_solve_agrees_with_exhaustive() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for n in [8u64, 9, 12] {
            let r = Ring::zmod(n).unwrap();
            for _ in 0..60 {
                let a = Matrix::new(&r, 2, 2, (0..4).map(|_| r.random_element(&mut rng)).collect());
                let b = Matrix::new(&r, 2, 1, (0..2).map(|_| r.random_element(&mut rng)).collect());
                let fast = linear_solve(&a, &b).unwrap();
                let slow = solve_exhaustive(&a, &b).unwrap();
                assert_eq!(fast.is_some(), slow.is_some(), "{a} {b}");
                if let Some(x) = fast {
                    assert_eq!(a.mul(&x), b);
                }
            }
        }
    }

    #[test]
    fn pi_regular_examples() {
        let z2 = Ring::zmod(2).unwrap();
        let a = Matrix::from_ints(&z2, &[&[0, 0], &[1, 1]]);
        let c = pi_regular_oracle(&a).unwrap().unwrap();
        assert_eq!(c.k, 1);
        assert_eq!(a.pow(2).mul(&c.x), a);

        let z4 = Ring::zmod(4).unwrap();
        let n = Matrix::from_ints(&z4, &[&[0, 1], &[0, 0]]);
        let c = pi_regular_oracle(&n).unwrap().unwrap();
        assert_eq!(c.k, 2);
        assert!(n.pow(2).is_zero());
        assert_eq!(
            pi_regular_oracle(&Matrix::identity(&Ring::zloc(3).unwrap(), 2)).unwrap_err(),
            Error::InfiniteRing
        );
    }
}
