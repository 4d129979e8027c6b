//! Polynomials over a [`Ring`], low degree first.

use std::fmt;

use crate::error::{Error, Result};
use crate::ring::{Element, Ring};

/// A polynomial with trailing zero coefficients trimmed. The zero polynomial has no
/// coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    ring: Ring,
    coeffs: Vec<Element>,
}

impl Poly {
    pub fn new(ring: &Ring, mut coeffs: Vec<Element>) -> Poly {
        while coeffs.last().is_some_and(|c| ring.is_zero(c)) {
            coeffs.pop();
        }
        Poly {
            ring: ring.clone(),
            coeffs,
        }
    }

    /// A polynomial that must be monic.
    pub fn monic(ring: &Ring, coeffs: Vec<Element>) -> Result<Poly> {
        let p = Poly::new(ring, coeffs);
        if p.is_monic() {
            Ok(p)
        } else {
            Err(Error::InvalidInput("polynomial is not monic".into()))
        }
    }

    pub fn from_ints(ring: &Ring, coeffs: &[i64]) -> Poly {
        Poly::new(ring, coeffs.iter().map(|&c| ring.from_int(c)).collect())
    }

    pub fn zero(ring: &Ring) -> Poly {
        Poly::new(ring, Vec::new())
    }

    pub fn constant(ring: &Ring, c: Element) -> Poly {
        Poly::new(ring, vec![c])
    }

    pub fn one(ring: &Ring) -> Poly {
        Poly::constant(ring, ring.one())
    }

    /// `t^d`.
    pub fn monomial(ring: &Ring, d: usize) -> Poly {
        let mut c = vec![ring.zero(); d];
        c.push(ring.one());
        Poly::new(ring, c)
    }

    /// `t - a`.
    pub fn linear(ring: &Ring, a: &Element) -> Poly {
        Poly::new(ring, vec![ring.neg(a), ring.one()])
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn coeffs(&self) -> &[Element] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Element> {
        self.coeffs
    }

    /// Coefficient of `t^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> Element {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree of a monic polynomial.
    pub fn deg(&self) -> usize {
        self.degree().expect("nonzero polynomial")
    }

    pub fn leading(&self) -> Element {
        self.coeffs.last().cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| self.ring.is_one(c))
    }

    /// Leading coefficient equal to the idempotent `e`, every coefficient inside `eR`.
    pub fn is_monic_in_block(&self, e: &Element) -> bool {
        self.coeffs.last() == Some(e) && self.in_block(e)
    }

    pub fn in_block(&self, e: &Element) -> bool {
        self.coeffs.iter().all(|c| self.ring.mul(c, e) == *c)
    }

    fn check(&self, other: &Poly) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(&self.ring, (0..n).map(|i| self.ring.add(&self.coeff(i), &other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(&self.ring, (0..n).map(|i| self.ring.sub(&self.coeff(i), &other.coeff(i))).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly::new(&self.ring, self.coeffs.iter().map(|c| self.ring.neg(c)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.ring);
        }
        let r = &self.ring;
        let mut out = vec![r.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = r.add(&out[i + j], &r.mul(a, b));
            }
        }
        Poly::new(r, out)
    }

    pub fn scale(&self, c: &Element) -> Poly {
        Poly::new(&self.ring, self.coeffs.iter().map(|a| self.ring.mul(a, c)).collect())
    }

    pub fn pow(&self, e: usize) -> Poly {
        (0..e).fold(Poly::one(&self.ring), |acc, _| acc.mul(self))
    }

    pub fn checked_mul(&self, other: &Poly) -> Result<Poly> {
        self.check(other)?;
        Ok(self.mul(other))
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &Element) -> Element {
        let r = &self.ring;
        self.coeffs.iter().rev().fold(r.zero(), |acc, c| r.add(&r.mul(&acc, x), c))
    }

    /// Quotient and remainder by a divisor whose leading coefficient is a unit.
    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        self.check(d)?;
        let r = &self.ring;
        let lead_inv = r.inverse(&d.leading()).ok_or(Error::NonMonicDivisor)?;
        let dd = d.deg();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(r), self.clone()));
        }
        let mut quot = vec![r.zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let q = r.mul(&rem[k + dd], &lead_inv);
            for (j, c) in d.coeffs.iter().enumerate() {
                rem[k + j] = r.sub(&rem[k + j], &r.mul(&q, c));
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        Ok((Poly::new(r, quot), Poly::new(r, rem)))
    }

    /// Division by a monic polynomial, with a flag for exact divisibility.
    pub fn div_monic(&self, d: &Poly) -> Result<(Poly, Poly, bool)> {
        if !d.is_monic() {
            return Err(Error::NonMonicDivisor);
        }
        let (q, rem) = self.div_rem(d)?;
        let exact = rem.is_zero();
        Ok((q, rem, exact))
    }

    /// The exact quotient `self / d`, when `d` is monic and divides `self`.
    pub fn exact_quotient(&self, d: &Poly) -> Option<Poly> {
        match self.div_monic(d) {
            Ok((q, _, true)) => Some(q),
            _ => None,
        }
    }

    /// Division of a block-monic polynomial inside `eR[t]`: the divisor has leading
    /// coefficient `e` and coefficients in `eR`.
    pub fn div_rem_block(&self, d: &Poly, e: &Element) -> (Poly, Poly) {
        let shifted = d.add(&Poly::constant(&self.ring, self.ring.sub(&self.ring.one(), e)).mul(&Poly::monomial(&self.ring, d.deg())));
        let (q, r) = self.div_rem(&shifted).expect("e + (1 - e) = 1 is a unit");
        (q.scale(e), r.scale(e))
    }

    /// Image at stalk `i`, as a polynomial over [`Ring::stalk_ring`].
    pub fn restrict(&self, i: usize) -> Poly {
        let sr = self.ring.stalk_ring(i);
        Poly::new(&sr, self.coeffs.iter().map(|c| self.ring.restrict(c, i)).collect())
    }

    /// Places a stalk polynomial at stalk `i`, zero elsewhere.
    pub fn lift(ring: &Ring, i: usize, p: &Poly) -> Poly {
        Poly::new(ring, p.coeffs.iter().map(|c| ring.lift(i, c)).collect())
    }

    /// The polynomial whose restriction to stalk `i` is `parts[i]`.
    pub fn glue(ring: &Ring, parts: &[Poly]) -> Poly {
        parts
            .iter()
            .enumerate()
            .fold(Poly::zero(ring), |acc, (i, p)| acc.add(&Poly::lift(ring, i, p)))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.coeffs.iter().map(|c| self.ring.to_json(c)).collect())
    }

    pub fn from_json(ring: &Ring, j: &serde_json::Value) -> Result<Poly> {
        let items = j
            .as_array()
            .ok_or_else(|| Error::Parse(format!("polynomial must be a coefficient array, got {j}")))?;
        let coeffs = items.iter().map(|c| ring.from_json(c)).collect::<Result<Vec<_>>>()?;
        Ok(Poly::new(ring, coeffs))
    }

    pub fn display(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let r = &self.ring;
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if r.is_zero(c) {
                continue;
            }
            let var = match i {
                0 => String::new(),
                1 => "t".into(),
                _ => format!("t^{i}"),
            };
            if i > 0 && r.is_one(c) {
                terms.push(var);
            } else if i == 0 {
                terms.push(r.display(c));
            } else {
                terms.push(format!("{}{var}", r.display(c)));
            }
        }
        terms.join(" + ")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_and_divide() {
        let z2 = Ring::zloc(2).unwrap();
        let h = Poly::from_ints(&z2, &[3, 1, 1]);
        let v = h.eval(&z2.one());
        assert_eq!(v, z2.from_int(5));
        assert!(z2.is_unit(&v));

        let z8 = Ring::zmod(8).unwrap();
        let h = Poly::from_ints(&z8, &[2, 3, 1]);
        let (q, r, exact) = h.div_monic(&Poly::from_ints(&z8, &[1, 1])).unwrap();
        assert!(exact && r.is_zero());
        assert_eq!(q, Poly::from_ints(&z8, &[2, 1]));

        let t = Poly::monomial(&z8, 1);
        assert_eq!(t.eval(&z8.zero()), z8.zero());
    }

    #[test]
    fn non_monic_divisor_rejected() {
        let z8 = Ring::zmod(8).unwrap();
        let h = Poly::from_ints(&z8, &[2, 3, 1]);
        assert_eq!(h.div_monic(&Poly::from_ints(&z8, &[1, 2])).unwrap_err(), Error::NonMonicDivisor);
    }

    #[test]
    fn restrict_and_glue() {
        let r = Ring::zmod(12).unwrap();
        let h = Poly::from_ints(&r, &[5, 7, 1]);
        let parts: Vec<Poly> = (0..2).map(|i| h.restrict(i)).collect();
        assert_eq!(parts[0], Poly::from_ints(&r.stalk_ring(0), &[1, 3, 1]));
        assert_eq!(Poly::glue(&r, &parts), h);
    }

    #[test]
    fn block_division() {
        let r = Ring::zmod(6).unwrap();
        let e = r.from_int(3);
        // (3t + 3)(3t + 3) = 9t^2 + 18t + 9 = 3t^2 + 3 in 3Z/6
        let f = Poly::new(&r, vec![e.clone(), e.clone()]);
        let h = f.mul(&f);
        let (q, rem) = h.div_rem_block(&f, &e);
        assert!(rem.is_zero());
        assert_eq!(q, f);
    }

    #[test]
    fn json_round_trip() {
        let r = Ring::product(vec![crate::RingDescriptor::Zloc { p: 2 }, crate::RingDescriptor::Zloc { p: 2 }]).unwrap();
        let j: serde_json::Value = serde_json::from_str("[[2,3],[3,1],[1,1]]").unwrap();
        let h = Poly::from_json(&r, &j).unwrap();
        assert!(h.is_monic());
        assert_eq!(Poly::from_json(&r, &h.to_json()).unwrap(), h);
    }
}
