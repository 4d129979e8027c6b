//! Dense matrices over a [`Ring`] and division-free characteristic polynomials.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ring::{Element, Ring};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    ring: Ring,
    rows: usize,
    cols: usize,
    data: Vec<Element>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixClass {
    pub inverse: Option<Matrix>,
    pub is_idempotent: bool,
    pub is_nilpotent: bool,
}

impl Matrix {
    pub fn new(ring: &Ring, rows: usize, cols: usize, data: Vec<Element>) -> Matrix {
        assert_eq!(data.len(), rows * cols);
        Matrix {
            ring: ring.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn from_fn(ring: &Ring, rows: usize, cols: usize, f: impl Fn(usize, usize) -> Element) -> Matrix {
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        Matrix::new(ring, rows, cols, data)
    }

    pub fn from_ints(ring: &Ring, rows: &[&[i64]]) -> Matrix {
        let n = rows.len();
        let m = rows.first().map_or(0, |r| r.len());
        Matrix::from_fn(ring, n, m, |i, j| ring.from_int(rows[i][j]))
    }

    pub fn zero(ring: &Ring, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(ring, rows, cols, |_, _| ring.zero())
    }

    pub fn identity(ring: &Ring, n: usize) -> Matrix {
        Matrix::from_fn(ring, n, n, |i, j| if i == j { ring.one() } else { ring.zero() })
    }

    /// `c * I`.
    pub fn scalar(ring: &Ring, n: usize, c: &Element) -> Matrix {
        Matrix::from_fn(ring, n, n, |i, j| if i == j { c.clone() } else { ring.zero() })
    }

    /// Companion matrix of a monic `h`: ones below the diagonal, `-h_0 .. -h_{n-1}` in
    /// the last column.
    pub fn companion(h: &Poly) -> Matrix {
        let r = h.ring();
        let n = h.deg();
        assert!(n >= 1, "companion matrix needs degree at least 1");
        Matrix::from_fn(r, n, n, |i, j| {
            if j == n - 1 {
                r.neg(&h.coeff(i))
            } else if i == j + 1 {
                r.one()
            } else {
                r.zero()
            }
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Size of a square matrix.
    pub fn n(&self) -> usize {
        debug_assert_eq!(self.rows, self.cols);
        self.rows
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Element] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Element {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Element) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| self.ring.add(a, b)).collect();
        Matrix::new(&self.ring, self.rows, self.cols, data)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| self.ring.sub(a, b)).collect();
        Matrix::new(&self.ring, self.rows, self.cols, data)
    }

    pub fn neg(&self) -> Matrix {
        Matrix::new(&self.ring, self.rows, self.cols, self.data.iter().map(|a| self.ring.neg(a)).collect())
    }

    pub fn scale(&self, c: &Element) -> Matrix {
        Matrix::new(&self.ring, self.rows, self.cols, self.data.iter().map(|a| self.ring.mul(a, c)).collect())
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let r = &self.ring;
        Matrix::from_fn(r, self.rows, other.cols, |i, j| {
            (0..self.cols).fold(r.zero(), |acc, k| r.add(&acc, &r.mul(self.get(i, k), other.get(k, j))))
        })
    }

    pub fn checked_mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.ring != other.ring || self.cols != other.rows {
            return Err(Error::RingMismatch);
        }
        Ok(self.mul(other))
    }

    pub fn pow(&self, mut e: u64) -> Matrix {
        let mut acc = Matrix::identity(&self.ring, self.n());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(&self.ring, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|a| self.ring.is_zero(a))
    }

    pub fn is_identity(&self) -> bool {
        *self == Matrix::identity(&self.ring, self.n())
    }

    pub fn column(&self, j: usize) -> Vec<Element> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// Evaluates a polynomial at this (square) matrix by Horner's rule.
    pub fn eval_poly(&self, f: &Poly) -> Matrix {
        let n = self.n();
        f.coeffs().iter().rev().fold(Matrix::zero(&self.ring, n, n), |acc, c| {
            acc.mul(self).add(&Matrix::scalar(&self.ring, n, c))
        })
    }

    /// Berkowitz coefficient vector, highest degree first: `chi(t) = sum v[i] t^(n-i)`.
    fn berkowitz(&self) -> Vec<Element> {
        let r = &self.ring;
        let n = self.n();
        if n == 0 {
            return vec![r.one()];
        }
        let mut v = vec![r.one(), r.neg(self.get(0, 0))];
        for k in 1..n {
            // leading (k+1)x(k+1) block: [[A_k, S], [R, a]]
            let a = self.get(k, k);
            let row: Vec<Element> = (0..k).map(|j| self.get(k, j).clone()).collect();
            let mut col: Vec<Element> = (0..k).map(|i| self.get(i, k).clone()).collect();
            let mut toeplitz = Vec::with_capacity(k + 2);
            toeplitz.push(r.one());
            toeplitz.push(r.neg(a));
            for _ in 0..k {
                let dot = row.iter().zip(&col).fold(r.zero(), |acc, (x, y)| r.add(&acc, &r.mul(x, y)));
                toeplitz.push(r.neg(&dot));
                col = (0..k)
                    .map(|i| (0..k).fold(r.zero(), |acc, j| r.add(&acc, &r.mul(self.get(i, j), &col[j]))))
                    .collect();
            }
            // v <- T v with T lower triangular Toeplitz of size (k+2) x (k+1)
            v = (0..k + 2)
                .map(|i| {
                    (0..=i.min(k)).fold(r.zero(), |acc, j| r.add(&acc, &r.mul(&toeplitz[i - j], &v[j])))
                })
                .collect();
        }
        v
    }

    /// `det(tI - A)`, computed without division.
    pub fn char_poly(&self) -> Poly {
        let mut v = self.berkowitz();
        v.reverse();
        Poly::new(&self.ring, v)
    }

    pub fn det(&self) -> Element {
        let n = self.n();
        let c0 = self.berkowitz().pop().unwrap();
        if n.is_multiple_of(2) {
            c0
        } else {
            self.ring.neg(&c0)
        }
    }

    /// Adjugate from Cayley-Hamilton: `adj(A) = (-1)^(n-1) (A^(n-1) + c_(n-1) A^(n-2) + ... + c_1 I)`
    /// where `chi(t) = t^n + c_(n-1) t^(n-1) + ... + c_0`.
    pub fn adjugate(&self) -> Matrix {
        let r = &self.ring;
        let n = self.n();
        let chi = self.char_poly();
        let mut b = Matrix::zero(r, n, n);
        for k in (1..=n).rev() {
            b = b.mul(self).add(&Matrix::scalar(r, n, &chi.coeff(k)));
        }
        if n.is_multiple_of(2) {
            b.neg()
        } else {
            b
        }
    }

    pub fn inverse(&self) -> Option<Matrix> {
        let d = self.ring.inverse(&self.det())?;
        Some(self.adjugate().scale(&d))
    }

    pub fn is_unit(&self) -> bool {
        self.ring.is_unit(&self.det())
    }

    pub fn is_idempotent(&self) -> bool {
        self.mul(self) == *self
    }

    /// Nilpotent iff every non-leading coefficient of the characteristic polynomial is
    /// nilpotent.
    pub fn is_nilpotent(&self) -> bool {
        let chi = self.char_poly();
        (0..self.n()).all(|i| self.ring.is_nilpotent(&chi.coeff(i)))
    }

    pub fn classify(&self) -> MatrixClass {
        MatrixClass {
            inverse: self.inverse(),
            is_idempotent: self.is_idempotent(),
            is_nilpotent: self.is_nilpotent(),
        }
    }

    /// Image at stalk `i`.
    pub fn restrict(&self, i: usize) -> Matrix {
        let sr = self.ring.stalk_ring(i);
        Matrix::new(&sr, self.rows, self.cols, self.data.iter().map(|a| self.ring.restrict(a, i)).collect())
    }

    /// The matrix whose restriction to stalk `i` is `parts[i]`.
    pub fn glue(ring: &Ring, parts: &[Matrix]) -> Matrix {
        let (rows, cols) = (parts[0].rows, parts[0].cols);
        Matrix::from_fn(ring, rows, cols, |i, j| {
            let vals: Vec<Element> = parts.iter().map(|p| p.get(i, j).clone()).collect();
            ring.from_stalk_values(&vals)
        })
    }

    /// `companion(h)` conjugated by a seeded random unit matrix.
    pub fn random_with_charpoly(h: &Poly, seed: u64) -> Matrix {
        let r = h.ring();
        let c = Matrix::companion(h);
        let n = c.n();
        if n == 1 {
            return c;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let p = Matrix::new(r, n, n, (0..n * n).map(|_| r.random_element(&mut rng)).collect());
            if let Some(pinv) = p.inverse() {
                return p.mul(&c).mul(&pinv);
            }
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            (0..self.rows)
                .map(|i| serde_json::Value::Array((0..self.cols).map(|j| self.ring.to_json(self.get(i, j))).collect()))
                .collect(),
        )
    }

    pub fn from_json(ring: &Ring, j: &serde_json::Value) -> Result<Matrix> {
        let rows = j
            .as_array()
            .filter(|r| !r.is_empty())
            .ok_or_else(|| Error::Parse("matrix must be a non-empty array of rows".into()))?;
        let cols = rows[0].as_array().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            let row = row
                .as_array()
                .filter(|r| r.len() == cols && cols > 0)
                .ok_or_else(|| Error::Parse("matrix rows must be non-empty arrays of equal length".into()))?;
            for v in row {
                data.push(ring.from_json(v)?);
            }
        }
        Ok(Matrix::new(ring, rows.len(), cols, data))
    }

    pub fn display(&self) -> String {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let cells: Vec<String> = (0..self.cols).map(|j| self.ring.display(self.get(i, j))).collect();
                format!("[{}]", cells.join(", "))
            })
            .collect();
        format!("[{}]", rows.join(", "))
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::RingDescriptor;

    /// det(tI - A) by cofactor expansion over R[t]: independent of the Berkowitz code.
    fn cofactor_charpoly(a: &Matrix) -> Poly {
        let r = a.ring();
        let n = a.n();
        let entry = |i: usize, j: usize| {
            let c = Poly::constant(r, r.neg(a.get(i, j)));
            if i == j {
                c.add(&Poly::monomial(r, 1))
            } else {
                c
            }
        };
        fn det(m: Vec<Vec<Poly>>, r: &Ring) -> Poly {
            let n = m.len();
            if n == 1 {
                return m[0][0].clone();
            }
            let mut acc = Poly::zero(r);
            for j in 0..n {
                let minor: Vec<Vec<Poly>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, p)| p.clone()).collect())
                    .collect();
                let term = m[0][j].mul(&det(minor, r));
                acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
            }
            acc
        }
        det((0..n).map(|i| (0..n).map(|j| entry(i, j)).collect()).collect(), r)
    }

    #[test]
    fn companion_examples() {
        let z8 = Ring::zmod(8).unwrap();
        let h = Poly::from_ints(&z8, &[2, 3, 1]);
        let c = Matrix::companion(&h);
        assert_eq!(c, Matrix::from_ints(&z8, &[&[0, 6], &[1, 5]]));
        assert_eq!(c.char_poly(), h);
        let t = Poly::monomial(&z8, 1);
        assert_eq!(Matrix::companion(&t), Matrix::from_ints(&z8, &[&[0]]));

        let r = Ring::product(vec![RingDescriptor::Zloc { p: 2 }, RingDescriptor::Zloc { p: 2 }]).unwrap();
        let h = Poly::from_json(&r, &serde_json::json!([[2, 3], [3, 1], [1, 1]])).unwrap();
        let c = Matrix::companion(&h);
        assert_eq!(c.to_json(), serde_json::json!([[["0/1", "0/1"], ["-2/1", "-3/1"]], [["1/1", "1/1"], ["-3/1", "-1/1"]]]));
        assert_eq!(c.char_poly(), h);
    }

    #[test]
    fn identity_charpoly() {
        let r = Ring::zmod(12).unwrap();
        assert_eq!(Matrix::identity(&r, 2).char_poly(), Poly::from_ints(&r, &[1, 10, 1]));
    }

    #[test]
    fn berkowitz_matches_cofactor_oracle() {
        let r = Ring::zmod(6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..=4 {
            for _ in 0..40 {
                let a = Matrix::new(&r, n, n, (0..n * n).map(|_| r.random_element(&mut rng)).collect());
                assert_eq!(a.char_poly(), cofactor_charpoly(&a), "{a}");
            }
        }
        let q = Ring::zloc(3).unwrap();
        for _ in 0..20 {
            let a = Matrix::new(&q, 3, 3, (0..9).map(|_| q.random_element(&mut rng)).collect());
            assert_eq!(a.char_poly(), cofactor_charpoly(&a));
        }
    }

    #[test]
    fn adjugate_identity() {
        let r = Ring::zmod(12).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=4 {
            for _ in 0..20 {
                let a = Matrix::new(&r, n, n, (0..n * n).map(|_| r.random_element(&mut rng)).collect());
                let d = Matrix::scalar(&r, n, &a.det());
                assert_eq!(a.mul(&a.adjugate()), d);
                assert_eq!(a.adjugate().mul(&a), d);
            }
        }
    }

    #[test]
    fn classify_examples() {
        let z2 = Ring::zmod(2).unwrap();
        let a = Matrix::from_ints(&z2, &[&[0, 0], &[1, 1]]);
        let c = a.classify();
        assert!(c.is_idempotent && c.inverse.is_none() && !c.is_nilpotent);
        let z4 = Ring::zmod(4).unwrap();
        let n = Matrix::from_ints(&z4, &[&[0, 2], &[0, 0]]);
        assert!(n.classify().is_nilpotent);
        let i = Matrix::identity(&z4, 3).classify();
        assert!(i.is_idempotent && i.inverse == Some(Matrix::identity(&z4, 3)));
    }

    #[test]
    fn random_similar_matrices() {
        let z8 = Ring::zmod(8).unwrap();
        let h = Poly::from_ints(&z8, &[2, 3, 1]);
        let a = Matrix::random_with_charpoly(&h, 1);
        assert_eq!(a.char_poly(), h);
        assert_eq!(a, Matrix::random_with_charpoly(&h, 1));
        let t = Poly::monomial(&z8, 1);
        assert_eq!(Matrix::random_with_charpoly(&t, 9), Matrix::from_ints(&z8, &[&[0]]));
    }
}
