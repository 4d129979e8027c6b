//! Local rings that appear as Pierce stalks: `Z/p^k`, `Z_(p)` and local table rings.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::table::LocalTable;
use crate::arith::{inv_mod, is_square_big, mul_mod, valuation_big};
use crate::error::{Error, Result};

/// The value of an element at one stalk.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    /// Residue in `[0, p^k)`.
    Res(u64),
    /// Reduced fraction with denominator prime to `p`.
    Frac(BigRational),
    /// Local table index.
    Idx(u16),
}

#[derive(Clone, Debug)]
pub enum Stalk {
    PrimePower { p: u64, k: u32, modulus: u64 },
    Localized { p: u64 },
    Table(Arc<LocalTable>),
}

macro_rules! bad_value {
    () => {
        panic!("value does not belong to this stalk")
    };
}

impl Stalk {
    pub fn prime_power(p: u64, k: u32) -> Self {
        Stalk::PrimePower {
            p,
            k,
            modulus: p.pow(k),
        }
    }

    pub fn size(&self) -> Option<u64> {
        match self {
            Stalk::PrimePower { modulus, .. } => Some(*modulus),
            Stalk::Localized { .. } => None,
            Stalk::Table(t) => Some(t.size as u64),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.size().is_some()
    }

    /// Residue characteristic of the maximal ideal, when it is known to be `p`.
    pub fn prime(&self) -> Option<u64> {
        match self {
            Stalk::PrimePower { p, .. } | Stalk::Localized { p } => Some(*p),
            Stalk::Table(_) => None,
        }
    }

    /// Nilpotency index of the maximal ideal (finite stalks only).
    pub fn nil_index(&self) -> Option<u32> {
        match self {
            Stalk::PrimePower { k, .. } => Some(*k),
            Stalk::Localized { .. } => None,
            Stalk::Table(t) => Some(t.nil_index),
        }
    }

    pub fn name(&self) -> String {
        match self {
            Stalk::PrimePower { modulus, .. } => format!("Z/{modulus}"),
            Stalk::Localized { p } => format!("Z_({p})"),
            Stalk::Table(t) => format!("table[{}]", t.size),
        }
    }

    pub fn contains(&self, v: &Value) -> bool {
        match (self, v) {
            (Stalk::PrimePower { modulus, .. }, Value::Res(r)) => r < modulus,
            (Stalk::Localized { p }, Value::Frac(q)) => {
                q.denom().is_positive() && (q.denom() % BigInt::from(*p)).is_positive()
            }
            (Stalk::Table(t), Value::Idx(i)) => (*i as usize) < t.size,
            _ => false,
        }
    }

    pub fn zero(&self) -> Value {
        match self {
            Stalk::PrimePower { .. } => Value::Res(0),
            Stalk::Localized { .. } => Value::Frac(BigRational::zero()),
            Stalk::Table(t) => Value::Idx(t.zero),
        }
    }

    pub fn one(&self) -> Value {
        match self {
            Stalk::PrimePower { modulus, .. } => Value::Res(1 % modulus),
            Stalk::Localized { .. } => Value::Frac(BigRational::one()),
            Stalk::Table(t) => Value::Idx(t.one),
        }
    }

    pub fn from_int(&self, n: &BigInt) -> Value {
        match self {
            Stalk::PrimePower { modulus, .. } => {
                let m = BigInt::from(*modulus);
                let r = ((n % &m) + &m) % &m;
                Value::Res(r.to_u64().expect("residue fits"))
            }
            Stalk::Localized { .. } => Value::Frac(BigRational::from_integer(n.clone())),
            Stalk::Table(t) => {
                // n * 1 by double-and-add in the additive group
                let mut acc = t.zero;
                let mut base = t.one;
                let mut e = n.abs();
                let two = BigInt::from(2);
                while !e.is_zero() {
                    if (&e % &two).is_one() {
                        acc = t.add(acc, base);
                    }
                    base = t.add(base, base);
                    e /= &two;
                }
                if n.is_negative() {
                    acc = t.neg[acc as usize];
                }
                Value::Idx(acc)
            }
        }
    }

    /// Image of `num/den`, when `den` maps to a unit.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Option<Value> {
        if den.is_zero() {
            return None;
        }
        match self {
            Stalk::Localized { p } => {
                let q = BigRational::new(num.clone(), den.clone());
                (q.denom() % BigInt::from(*p)).is_positive().then_some(Value::Frac(q))
            }
            _ => {
                let d = self.from_int(den);
                let inv = self.inverse(&d)?;
                Some(self.mul(&self.from_int(num), &inv))
            }
        }
    }

    pub fn add(&self, a: &Value, b: &Value) -> Value {
        match (self, a, b) {
            (Stalk::PrimePower { modulus, .. }, Value::Res(x), Value::Res(y)) => {
                Value::Res(((*x as u128 + *y as u128) % *modulus as u128) as u64)
            }
            (Stalk::Localized { .. }, Value::Frac(x), Value::Frac(y)) => Value::Frac(x + y),
            (Stalk::Table(t), Value::Idx(x), Value::Idx(y)) => Value::Idx(t.add(*x, *y)),
            _ => bad_value!(),
        }
    }

    pub fn neg(&self, a: &Value) -> Value {
        match (self, a) {
            (Stalk::PrimePower { modulus, .. }, Value::Res(x)) => Value::Res(if *x == 0 { 0 } else { modulus - x }),
            (Stalk::Localized { .. }, Value::Frac(x)) => Value::Frac(-x),
            (Stalk::Table(t), Value::Idx(x)) => Value::Idx(t.neg[*x as usize]),
            _ => bad_value!(),
        }
    }

    pub fn sub(&self, a: &Value, b: &Value) -> Value {
        match (self, a, b) {
            (Stalk::PrimePower { modulus, .. }, Value::Res(x), Value::Res(y)) => {
                Value::Res(if x >= y { x - y } else { modulus - (y - x) })
            }
            (Stalk::Localized { .. }, Value::Frac(x), Value::Frac(y)) => Value::Frac(x - y),
            _ => self.add(a, &self.neg(b)),
        }
    }

    pub fn mul(&self, a: &Value, b: &Value) -> Value {
        match (self, a, b) {
            (Stalk::PrimePower { modulus, .. }, Value::Res(x), Value::Res(y)) => Value::Res(mul_mod(*x, *y, *modulus)),
            (Stalk::Localized { .. }, Value::Frac(x), Value::Frac(y)) => Value::Frac(x * y),
            (Stalk::Table(t), Value::Idx(x), Value::Idx(y)) => Value::Idx(t.mul(*x, *y)),
            _ => bad_value!(),
        }
    }

    pub fn is_zero(&self, a: &Value) -> bool {
        match (self, a) {
            (Stalk::PrimePower { .. }, Value::Res(x)) => *x == 0,
            (Stalk::Localized { .. }, Value::Frac(x)) => x.is_zero(),
            (Stalk::Table(t), Value::Idx(x)) => *x == t.zero,
            _ => bad_value!(),
        }
    }

    pub fn inverse(&self, a: &Value) -> Option<Value> {
        match (self, a) {
            (Stalk::PrimePower { modulus, .. }, Value::Res(x)) => inv_mod(*x, *modulus).map(Value::Res),
            (Stalk::Localized { p }, Value::Frac(x)) => {
                if x.is_zero() || (x.numer() % BigInt::from(*p)).is_zero() {
                    None
                } else {
                    Some(Value::Frac(x.recip()))
                }
            }
            (Stalk::Table(t), Value::Idx(x)) => t.inv[*x as usize].map(Value::Idx),
            _ => bad_value!(),
        }
    }

    pub fn is_unit(&self, a: &Value) -> bool {
        match (self, a) {
            (Stalk::PrimePower { p, .. }, Value::Res(x)) => x % p != 0,
            (Stalk::Localized { p }, Value::Frac(x)) => !(x.numer() % BigInt::from(*p)).is_zero(),
            (Stalk::Table(t), Value::Idx(x)) => t.inv[*x as usize].is_some(),
            _ => bad_value!(),
        }
    }

    /// Membership in the Jacobson radical, which for a local ring is its maximal ideal.
    pub fn in_jacobson(&self, a: &Value) -> bool {
        match (self, a) {
            (Stalk::Table(t), Value::Idx(x)) => t.jacobson[*x as usize],
            _ => !self.is_unit(a),
        }
    }

    pub fn is_nilpotent(&self, a: &Value) -> bool {
        match (self, a) {
            (Stalk::PrimePower { p, .. }, Value::Res(x)) => x % p == 0,
            (Stalk::Localized { .. }, Value::Frac(x)) => x.is_zero(),
            (Stalk::Table(t), Value::Idx(x)) => t.nilpotent[*x as usize],
            _ => bad_value!(),
        }
    }

    /// `v_p` for chain-ring stalks (`Z/p^k`, `Z_(p)`); `None` for zero.
    pub fn valuation(&self, a: &Value) -> Option<u32> {
        match (self, a) {
            (Stalk::PrimePower { p, .. }, Value::Res(x)) => {
                if *x == 0 {
                    return None;
                }
                let mut v = 0;
                let mut y = *x;
                while y % p == 0 {
                    y /= p;
                    v += 1;
                }
                Some(v)
            }
            (Stalk::Localized { p }, Value::Frac(x)) => (!x.is_zero()).then(|| valuation_big(x.numer(), *p)),
            _ => None,
        }
    }

    /// Some `q` with `d * q = a`, in a chain-ring stalk.
    pub fn exact_div(&self, a: &Value, d: &Value) -> Option<Value> {
        match (self, a, d) {
            (Stalk::PrimePower { p, modulus, .. }, Value::Res(x), Value::Res(y)) => {
                if *x == 0 {
                    return Some(Value::Res(0));
                }
                let vd = self.valuation(d)?;
                let va = self.valuation(a)?;
                if va < vd {
                    return None;
                }
                let pv = p.pow(vd);
                let unit = y / pv;
                let uinv = inv_mod(unit, *modulus)?;
                Some(Value::Res(mul_mod(x / pv, uinv, *modulus)))
            }
            (Stalk::Localized { p }, Value::Frac(x), Value::Frac(y)) => {
                if y.is_zero() {
                    return x.is_zero().then(|| Value::Frac(BigRational::zero()));
                }
                let q = x / y;
                (q.denom() % BigInt::from(*p)).is_positive().then_some(Value::Frac(q))
            }
            _ => None,
        }
    }

    /// The `i`-th element in canonical order (finite stalks).
    pub fn element(&self, i: u64) -> Value {
        match self {
            Stalk::PrimePower { .. } => Value::Res(i),
            Stalk::Table(_) => Value::Idx(i as u16),
            Stalk::Localized { .. } => panic!("infinite stalk has no enumeration"),
        }
    }

    pub fn index_of(&self, v: &Value) -> u64 {
        match v {
            Value::Res(r) => *r,
            Value::Idx(i) => *i as u64,
            Value::Frac(_) => panic!("infinite stalk has no enumeration"),
        }
    }

    /// All elements (finite stalks).
    pub fn elements(&self) -> impl Iterator<Item = Value> + '_ {
        let n = self.size().expect("finite stalk");
        (0..n).map(move |i| self.element(i))
    }

    /// Exact square root in a `Z_(p)` stalk, if the value is the square of a fraction.
    pub fn rational_sqrt(&self, a: &Value) -> Option<Value> {
        match a {
            Value::Frac(q) => {
                let n = is_square_big(q.numer())?;
                let d = is_square_big(q.denom())?;
                Some(Value::Frac(BigRational::new(n, d)))
            }
            _ => None,
        }
    }

    pub fn value_to_json(&self, v: &Value) -> serde_json::Value {
        match (self, v) {
            (Stalk::PrimePower { .. }, Value::Res(r)) => serde_json::Value::from(*r),
            (Stalk::Localized { .. }, Value::Frac(q)) => serde_json::Value::from(format!("{}/{}", q.numer(), q.denom())),
            (Stalk::Table(t), Value::Idx(i)) => serde_json::Value::from(t.global[*i as usize]),
            _ => bad_value!(),
        }
    }

    pub fn value_from_json(&self, j: &serde_json::Value) -> Result<Value> {
        if let Stalk::Table(t) = self {
            let g = j
                .as_u64()
                .ok_or_else(|| Error::Parse(format!("table stalk value must be an index, got {j}")))?;
            return t
                .local_of_global(g as usize)
                .map(Value::Idx)
                .ok_or_else(|| Error::Parse(format!("index {g} is not in this stalk")));
        }
        let (num, den) = parse_ratio(j)?;
        self.from_ratio(&num, &den)
            .ok_or_else(|| Error::Parse(format!("{j} is not an element of {}", self.name())))
    }

    pub fn display(&self, v: &Value) -> String {
        match v {
            Value::Res(r) => r.to_string(),
            Value::Frac(q) if q.is_integer() => q.numer().to_string(),
            Value::Frac(q) => format!("{}/{}", q.numer(), q.denom()),
            Value::Idx(i) => match self {
                Stalk::Table(t) => format!("#{}", t.global[*i as usize]),
                _ => format!("#{i}"),
            },
        }
    }
}

/// Parses an integer or an `"a/b"` string.
pub fn parse_ratio(j: &serde_json::Value) -> Result<(BigInt, BigInt)> {
    match j {
        serde_json::Value::Number(n) => {
            let v = n
                .as_i64()
                .map(BigInt::from)
                .or_else(|| n.as_u64().map(BigInt::from))
                .ok_or_else(|| Error::Parse(format!("not an integer: {n}")))?;
            Ok((v, BigInt::one()))
        }
        serde_json::Value::String(s) => {
            let s = s.trim();
            let (a, b) = match s.split_once('/') {
                Some((a, b)) => (a.trim(), b.trim()),
                None => (s, "1"),
            };
            let a: BigInt = a.parse().map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
            let b: BigInt = b.parse().map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
            if b.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok((a, b))
        }
        other => Err(Error::Parse(format!("expected a number or \"a/b\" string, got {other}"))),
    }
}

impl fmt::Display for Stalk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frac(a: i64, b: i64) -> Value {
        Value::Frac(BigRational::new(a.into(), b.into()))
    }

    #[test]
    fn z2_localization_units() {
        let s = Stalk::Localized { p: 2 };
        assert!(s.is_unit(&frac(3, 5)));
        assert_eq!(s.inverse(&frac(3, 5)), Some(frac(5, 3)));
        assert!(!s.is_unit(&frac(2, 1)));
        assert!(s.in_jacobson(&frac(2, 1)));
        assert!(!s.is_nilpotent(&frac(2, 1)));
        assert!(s.from_ratio(&1.into(), &2.into()).is_none());
        assert_eq!(s.exact_div(&frac(3, 1), &frac(2, 1)), None);
    }

    #[test]
    fn prime_power_division() {
        let s = Stalk::prime_power(2, 3);
        // 6 = 2 * 3, so 6 / 2 = 3
        let q = s.exact_div(&Value::Res(6), &Value::Res(2)).unwrap();
        assert_eq!(s.mul(&q, &Value::Res(2)), Value::Res(6));
        assert_eq!(s.exact_div(&Value::Res(2), &Value::Res(4)), None);
        assert_eq!(s.valuation(&Value::Res(4)), Some(2));
        assert_eq!(s.from_int(&BigInt::from(-3)), Value::Res(5));
    }
}
