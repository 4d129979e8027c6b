//! Commutative rings with finitely many idempotents, stored through their Pierce stalks.
//!
//! Every ring is a finite product of local stalks (`Z/p^k`, `Z_(p)`, local table rings).
//! An [`Element`] is the list of its stalk values; idempotents are exactly the 0/1
//! vectors over the stalks. Global forms (a residue mod `n`, a table index) are recovered
//! by gluing the stalk values along the primitive idempotents.

pub mod stalk;
pub mod table;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, inv_mod, is_prime, mul_mod};
use crate::error::{Error, Result};
pub use stalk::{Stalk, Value};
pub use table::{LocalTable, TableRing};

/// JSON ring descriptor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum RingDescriptor {
    Zmod { n: u64 },
    Zloc { p: u64 },
    Product { factors: Vec<RingDescriptor> },
    Table { add: Vec<Vec<usize>>, mul: Vec<Vec<usize>> },
}

impl RingDescriptor {
    pub fn parse(json: &str) -> Result<Self> {
        serde_json::from_str(json).map_err(|e| Error::Parse(format!("ring descriptor: {e}")))
    }
}

/// One leaf of the descriptor, which fixes how global values are written.
#[derive(Debug, Clone)]
enum Component {
    ZMod { n: u64, first: usize, count: usize, idempotents: Vec<u64> },
    ZLoc { stalk: usize },
    Table { table: Arc<TableRing>, first: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element(pub(crate) Vec<Value>);

impl Element {
    pub fn values(&self) -> &[Value] {
        &self.0
    }
}

/// A finite orthogonal family of idempotents summing to 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompleteOrthogonalSet {
    pub idempotents: Vec<Element>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RadicalMembership {
    pub in_jacobson: bool,
    pub in_nil: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElemOp {
    Add,
    Sub,
    Mul,
    Neg,
    Eq,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OpResult {
    Element(Element),
    Truth(bool),
}

#[derive(Debug)]
struct RingInner {
    descriptor: RingDescriptor,
    stalks: Vec<Stalk>,
    components: Vec<Component>,
    stalk_rings: Vec<Ring>,
}

/// A commutative ring in scope. Cheap to clone.
#[derive(Debug, Clone)]
pub struct Ring(Arc<RingInner>);

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.descriptor == other.0.descriptor
    }
}

impl Eq for Ring {}

impl Ring {
    pub fn build(descriptor: &RingDescriptor) -> Result<Ring> {
        let mut stalks = Vec::new();
        let mut components = Vec::new();
        collect(descriptor, &mut stalks, &mut components)?;
        let stalk_rings = if stalks.len() > 1 {
            stalks.iter().map(Ring::from_stalk).collect()
        } else {
            Vec::new()
        };
        Ok(Ring(Arc::new(RingInner {
            descriptor: descriptor.clone(),
            stalks,
            components,
            stalk_rings,
        })))
    }

    pub fn zmod(n: u64) -> Result<Ring> {
        Ring::build(&RingDescriptor::Zmod { n })
    }

    pub fn zloc(p: u64) -> Result<Ring> {
        Ring::build(&RingDescriptor::Zloc { p })
    }

    pub fn product(factors: Vec<RingDescriptor>) -> Result<Ring> {
        Ring::build(&RingDescriptor::Product { factors })
    }

    /// A single-stalk ring.
    fn from_stalk(stalk: &Stalk) -> Ring {
        let descriptor = match stalk {
            Stalk::PrimePower { modulus, .. } => RingDescriptor::Zmod { n: *modulus },
            Stalk::Localized { p } => RingDescriptor::Zloc { p: *p },
            Stalk::Table(t) => {
                let (add, mul) = t.tables();
                RingDescriptor::Table { add, mul }
            }
        };
        let component = match stalk {
            Stalk::PrimePower { modulus, .. } => Component::ZMod {
                n: *modulus,
                first: 0,
                count: 1,
                idempotents: vec![1],
            },
            Stalk::Localized { .. } => Component::ZLoc { stalk: 0 },
            Stalk::Table(t) => {
                let table = TableRing {
                    size: t.size,
                    add: t.add.clone(),
                    mul: t.mul.clone(),
                    zero: t.zero,
                    one: t.one,
                    stalks: vec![Arc::new(LocalTable {
                        global: (0..t.size as u16).collect(),
                        ..(**t).clone()
                    })],
                    primitive: vec![t.one],
                    to_local: (0..t.size as u16).map(|i| vec![i]).collect(),
                };
                Component::Table {
                    table: Arc::new(table),
                    first: 0,
                }
            }
        };
        Ring(Arc::new(RingInner {
            descriptor,
            stalks: vec![stalk.clone()],
            components: vec![component],
            stalk_rings: Vec::new(),
        }))
    }

    pub fn descriptor(&self) -> &RingDescriptor {
        &self.0.descriptor
    }

    pub fn stalks(&self) -> &[Stalk] {
        &self.0.stalks
    }

    pub fn stalk_count(&self) -> usize {
        self.0.stalks.len()
    }

    pub fn stalk(&self, i: usize) -> &Stalk {
        &self.0.stalks[i]
    }

    /// The stalk `R_x` as a ring of its own.
    pub fn stalk_ring(&self, i: usize) -> Ring {
        if self.stalk_count() == 1 {
            assert_eq!(i, 0);
            self.clone()
        } else {
            self.0.stalk_rings[i].clone()
        }
    }

    pub fn is_local(&self) -> bool {
        self.stalk_count() == 1
    }

    pub fn is_finite(&self) -> bool {
        self.stalks().iter().all(Stalk::is_finite)
    }

    /// `|R|`, saturating, for finite rings.
    pub fn order(&self) -> Option<u128> {
        self.stalks()
            .iter()
            .try_fold(1u128, |acc, s| s.size().map(|n| acc.saturating_mul(n as u128)))
    }

    pub fn has_table(&self) -> bool {
        self.stalks().iter().any(|s| matches!(s, Stalk::Table(_)))
    }

    // ---- arithmetic -------------------------------------------------------------

    fn zip(&self, a: &Element, b: &Element, f: impl Fn(&Stalk, &Value, &Value) -> Value) -> Element {
        debug_assert_eq!(a.0.len(), self.stalk_count());
        debug_assert_eq!(b.0.len(), self.stalk_count());
        Element(
            self.stalks()
                .iter()
                .zip(a.0.iter().zip(&b.0))
                .map(|(s, (x, y))| f(s, x, y))
                .collect(),
        )
    }

    pub fn zero(&self) -> Element {
        Element(self.stalks().iter().map(Stalk::zero).collect())
    }

    pub fn one(&self) -> Element {
        Element(self.stalks().iter().map(Stalk::one).collect())
    }

    pub fn from_int(&self, n: i64) -> Element {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> Element {
        Element(self.stalks().iter().map(|s| s.from_int(n)).collect())
    }

    /// Image of `num/den` in R, when `den` is invertible.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Option<Element> {
        self.stalks()
            .iter()
            .map(|s| s.from_ratio(num, den))
            .collect::<Option<Vec<_>>>()
            .map(Element)
    }

    pub fn add(&self, a: &Element, b: &Element) -> Element {
        self.zip(a, b, Stalk::add)
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Element {
        self.zip(a, b, Stalk::sub)
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        self.zip(a, b, Stalk::mul)
    }

    pub fn neg(&self, a: &Element) -> Element {
        Element(self.stalks().iter().zip(&a.0).map(|(s, x)| s.neg(x)).collect())
    }

    pub fn pow(&self, a: &Element, mut e: u64) -> Element {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn is_zero(&self, a: &Element) -> bool {
        self.stalks().iter().zip(&a.0).all(|(s, x)| s.is_zero(x))
    }

    pub fn is_one(&self, a: &Element) -> bool {
        *a == self.one()
    }

    /// The inverse, when every stalk component is a unit.
    pub fn inverse(&self, a: &Element) -> Option<Element> {
        self.stalks()
            .iter()
            .zip(&a.0)
            .map(|(s, x)| s.inverse(x))
            .collect::<Option<Vec<_>>>()
            .map(Element)
    }

    pub fn is_unit(&self, a: &Element) -> bool {
        self.stalks().iter().zip(&a.0).all(|(s, x)| s.is_unit(x))
    }

    pub fn contains(&self, a: &Element) -> bool {
        a.0.len() == self.stalk_count() && self.stalks().iter().zip(&a.0).all(|(s, x)| s.contains(x))
    }

    pub fn check(&self, a: &Element) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::RingMismatch)
        }
    }

    /// Checked elementwise operation; `Neg` ignores `b`.
    pub fn elem_op(&self, op: ElemOp, a: &Element, b: &Element) -> Result<OpResult> {
        self.check(a)?;
        self.check(b)?;
        Ok(match op {
            ElemOp::Add => OpResult::Element(self.add(a, b)),
            ElemOp::Sub => OpResult::Element(self.sub(a, b)),
            ElemOp::Mul => OpResult::Element(self.mul(a, b)),
            ElemOp::Neg => OpResult::Element(self.neg(a)),
            ElemOp::Eq => OpResult::Truth(a == b),
        })
    }

    pub fn checked_inverse(&self, a: &Element) -> Result<Option<Element>> {
        self.check(a)?;
        Ok(self.inverse(a))
    }

    pub fn radical_membership(&self, a: &Element) -> RadicalMembership {
        let mut m = RadicalMembership {
            in_jacobson: true,
            in_nil: true,
        };
        for (s, x) in self.stalks().iter().zip(&a.0) {
            m.in_jacobson &= s.in_jacobson(x);
            m.in_nil &= s.is_nilpotent(x);
        }
        m
    }

    pub fn is_nilpotent(&self, a: &Element) -> bool {
        self.radical_membership(a).in_nil
    }

    // ---- Pierce structure -------------------------------------------------------

    /// The component of `a` at stalk `i`, as an element of [`Ring::stalk_ring`].
    pub fn restrict(&self, a: &Element, i: usize) -> Element {
        Element(vec![a.0[i].clone()])
    }

    /// Places a stalk value at stalk `i` and zero elsewhere.
    pub fn lift(&self, i: usize, v: &Element) -> Element {
        let mut z = self.zero();
        z.0[i] = v.0[0].clone();
        z
    }

    /// Builds an element from one stalk-ring element per stalk.
    pub fn from_stalk_values(&self, parts: &[Element]) -> Element {
        assert_eq!(parts.len(), self.stalk_count());
        Element(parts.iter().map(|p| p.0[0].clone()).collect())
    }

    /// The idempotent that is 1 exactly on the stalks in `mask`.
    pub fn idempotent_from_stalks(&self, on: impl Fn(usize) -> bool) -> Element {
        Element(
            self.stalks()
                .iter()
                .enumerate()
                .map(|(i, s)| if on(i) { s.one() } else { s.zero() })
                .collect(),
        )
    }

    /// All idempotents, as 0/1 stalk vectors in binary counting order (stalk 0 lowest).
    pub fn idempotents(&self) -> Vec<Element> {
        let s = self.stalk_count();
        assert!(s < 20, "too many stalks to enumerate idempotents");
        (0u32..1 << s)
            .map(|mask| self.idempotent_from_stalks(|i| mask >> i & 1 == 1))
            .collect()
    }

    /// One primitive idempotent per stalk.
    pub fn pierce_decomposition(&self) -> CompleteOrthogonalSet {
        CompleteOrthogonalSet {
            idempotents: (0..self.stalk_count())
                .map(|i| self.idempotent_from_stalks(|j| j == i))
                .collect(),
        }
    }

    /// Which stalk a primitive idempotent belongs to.
    pub fn stalk_of_primitive(&self, e: &Element) -> Option<usize> {
        let mut found = None;
        for (i, (s, x)) in self.stalks().iter().zip(&e.0).enumerate() {
            if *x == s.one() {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            } else if !s.is_zero(x) {
                return None;
            }
        }
        found
    }

    pub fn is_complete_orthogonal(&self, set: &[Element]) -> bool {
        let mut sum = self.zero();
        for (i, e) in set.iter().enumerate() {
            if !self.contains(e) || self.mul(e, e) != *e {
                return false;
            }
            for f in &set[i + 1..] {
                if !self.is_zero(&self.mul(e, f)) {
                    return false;
                }
            }
            sum = self.add(&sum, e);
        }
        self.is_one(&sum)
    }

    /// Glues stalk values along primitive idempotents into one element of R.
    pub fn pierce_glue(&self, blocks: &[(Element, Element)]) -> Result<Element> {
        let mut parts: Vec<Option<Value>> = vec![None; self.stalk_count()];
        for (e, v) in blocks {
            let i = self.stalk_of_primitive(e).ok_or(Error::IncompleteCover)?;
            if parts[i].is_some() {
                return Err(Error::IncompleteCover);
            }
            if v.0.len() != 1 || !self.stalk(i).contains(&v.0[0]) {
                return Err(Error::RingMismatch);
            }
            parts[i] = Some(v.0[0].clone());
        }
        parts
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .map(Element)
            .ok_or(Error::IncompleteCover)
    }

    /// Strong clean decomposition `r = e + u` of a single element, scanning idempotents.
    pub fn strongly_clean_element(&self, r: &Element) -> Option<(Element, Element)> {
        self.idempotents().into_iter().find_map(|e| {
            let u = self.sub(r, &e);
            self.is_unit(&u).then_some((e, u))
        })
    }

    // ---- enumeration ------------------------------------------------------------

    /// Element number `idx` in canonical order: mixed radix, stalk 0 most significant.
    pub fn element_at(&self, mut idx: u128) -> Element {
        let sizes: Vec<u64> = self.stalks().iter().map(|s| s.size().expect("finite ring")).collect();
        let mut vals = vec![Value::Res(0); sizes.len()];
        for i in (0..sizes.len()).rev() {
            vals[i] = self.stalk(i).element((idx % sizes[i] as u128) as u64);
            idx /= sizes[i] as u128;
        }
        Element(vals)
    }

    pub fn index_of(&self, a: &Element) -> u128 {
        self.stalks()
            .iter()
            .zip(&a.0)
            .fold(0u128, |acc, (s, v)| acc * s.size().expect("finite ring") as u128 + s.index_of(v) as u128)
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        let n = self.order().expect("finite ring");
        (0..n).map(move |i| self.element_at(i))
    }

    /// A random element; `Z_(p)` components are small fractions.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Element {
        Element(
            self.stalks()
                .iter()
                .map(|s| match s {
                    Stalk::Localized { p } => {
                        let num = BigInt::from(rng.gen_range(-12i64..=12));
                        let den = loop {
                            let d = rng.gen_range(1i64..=5);
                            if !(d as u64).is_multiple_of(*p) {
                                break BigInt::from(d);
                            }
                        };
                        s.from_ratio(&num, &den).expect("denominator prime to p")
                    }
                    _ => s.element(rng.gen_range(0..s.size().unwrap())),
                })
                .collect(),
        )
    }

    // ---- serialization ----------------------------------------------------------

    /// Canonical form: the array of stalk values.
    pub fn to_json(&self, a: &Element) -> serde_json::Value {
        serde_json::Value::Array(self.stalks().iter().zip(&a.0).map(|(s, v)| s.value_to_json(v)).collect())
    }

    /// Accepts a per-stalk array, or a scalar: an integer or `"a/b"` mapped through
    /// `Z -> R` (for a bare table ring, an integer scalar is a table index).
    pub fn from_json(&self, j: &serde_json::Value) -> Result<Element> {
        match j {
            serde_json::Value::Array(items) => {
                if items.len() != self.stalk_count() {
                    return Err(Error::Parse(format!(
                        "element {j} has {} stalk values, ring has {} stalks",
                        items.len(),
                        self.stalk_count()
                    )));
                }
                Ok(Element(
                    self.stalks()
                        .iter()
                        .zip(items)
                        .map(|(s, v)| s.value_from_json(v))
                        .collect::<Result<_>>()?,
                ))
            }
            _ => {
                if let (RingDescriptor::Table { .. }, [Component::Table { table, .. }]) =
                    (self.descriptor(), self.0.components.as_slice())
                {
                    let g = j.as_u64().filter(|&g| (g as usize) < table.size).ok_or_else(|| {
                        Error::Parse(format!("table element must be an index below {}, got {j}", table.size))
                    })?;
                    return Ok(Element(
                        table.to_local[g as usize].iter().map(|&l| Value::Idx(l)).collect(),
                    ));
                }
                let (num, den) = stalk::parse_ratio(j)?;
                self.from_ratio(&num, &den)
                    .ok_or_else(|| Error::Parse(format!("{j} is not an element of this ring")))
            }
        }
    }

    /// Global form of an element: residue mod `n`, table index or fraction, per
    /// descriptor leaf. Computed by gluing along primitive idempotents.
    pub fn global_json(&self, a: &Element) -> serde_json::Value {
        let parts: Vec<serde_json::Value> = self
            .0
            .components
            .iter()
            .map(|c| match c {
                Component::ZMod {
                    n,
                    first,
                    count,
                    idempotents,
                } => {
                    let mut acc = 0u64;
                    for (k, e) in idempotents.iter().enumerate() {
                        let Value::Res(v) = a.0[first + k] else { unreachable!() };
                        acc = ((acc as u128 + mul_mod(v, *e, *n) as u128) % *n as u128) as u64;
                    }
                    debug_assert_eq!(*count, idempotents.len());
                    serde_json::Value::from(acc)
                }
                Component::ZLoc { stalk } => self.stalk(*stalk).value_to_json(&a.0[*stalk]),
                Component::Table { table, first } => {
                    let locals: Vec<u16> = (0..table.stalks.len())
                        .map(|k| match a.0[first + k] {
                            Value::Idx(l) => l,
                            _ => unreachable!(),
                        })
                        .collect();
                    serde_json::Value::from(table.glue(&locals))
                }
            })
            .collect();
        if parts.len() == 1 {
            parts.into_iter().next().unwrap()
        } else {
            serde_json::Value::Array(parts)
        }
    }

    /// Inverse of [`Ring::global_json`]: restriction of a global value to the stalks.
    pub fn from_global_json(&self, j: &serde_json::Value) -> Result<Element> {
        let comps = &self.0.components;
        let items: Vec<&serde_json::Value> = if comps.len() == 1 {
            vec![j]
        } else {
            j.as_array()
                .filter(|a| a.len() == comps.len())
                .ok_or_else(|| Error::Parse(format!("expected {} global components", comps.len())))?
                .iter()
                .collect()
        };
        let mut vals = Vec::with_capacity(self.stalk_count());
        for (c, v) in comps.iter().zip(items) {
            match c {
                Component::ZMod { first, count, .. } => {
                    let (num, den) = stalk::parse_ratio(v)?;
                    for k in 0..*count {
                        let s = self.stalk(first + k);
                        vals.push(s.from_ratio(&num, &den).ok_or_else(|| Error::Parse(format!("{v} not in ring")))?);
                    }
                }
                Component::ZLoc { stalk } => vals.push(self.stalk(*stalk).value_from_json(v)?),
                Component::Table { table, .. } => {
                    let g = v
                        .as_u64()
                        .filter(|&g| (g as usize) < table.size)
                        .ok_or_else(|| Error::Parse(format!("bad table index {v}")))?;
                    vals.extend(table.to_local[g as usize].iter().map(|&l| Value::Idx(l)));
                }
            }
        }
        Ok(Element(vals))
    }

    pub fn display(&self, a: &Element) -> String {
        if self.stalk_count() == 1 {
            return self.stalk(0).display(&a.0[0]);
        }
        let inner: Vec<String> = self.stalks().iter().zip(&a.0).map(|(s, v)| s.display(v)).collect();
        format!("({})", inner.join(","))
    }

    pub fn name(&self) -> String {
        let names: Vec<String> = self.stalks().iter().map(Stalk::name).collect();
        names.join(" x ")
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

fn collect(d: &RingDescriptor, stalks: &mut Vec<Stalk>, components: &mut Vec<Component>) -> Result<()> {
    match d {
        RingDescriptor::Zmod { n } => {
            if *n < 2 {
                return Err(Error::InvalidDescriptor(format!("zmod needs n >= 2, got {n}")));
            }
            if *n > u32::MAX as u64 {
                return Err(Error::InvalidDescriptor(format!("zmod modulus {n} too large")));
            }
            let first = stalks.len();
            let factors = factorize(*n);
            let mut idempotents = Vec::with_capacity(factors.len());
            for &(p, k) in &factors {
                let q = p.pow(k);
                let cof = n / q;
                // e = cof * (cof^{-1} mod q): 1 mod q, 0 mod every other prime power
                let e = mul_mod(cof, inv_mod(cof % q, q).expect("coprime cofactor"), *n);
                idempotents.push(e);
                stalks.push(Stalk::prime_power(p, k));
            }
            components.push(Component::ZMod {
                n: *n,
                first,
                count: factors.len(),
                idempotents,
            });
        }
        RingDescriptor::Zloc { p } => {
            if !is_prime(*p) {
                return Err(Error::NotPrime(*p));
            }
            components.push(Component::ZLoc { stalk: stalks.len() });
            stalks.push(Stalk::Localized { p: *p });
        }
        RingDescriptor::Product { factors } => {
            if factors.is_empty() {
                return Err(Error::InvalidDescriptor("empty product".into()));
            }
            for f in factors {
                collect(f, stalks, components)?;
            }
        }
        RingDescriptor::Table { add, mul } => {
            let table = Arc::new(TableRing::new(add, mul)?);
            components.push(Component::Table {
                table: table.clone(),
                first: stalks.len(),
            });
            stalks.extend(table.stalks.iter().cloned().map(Stalk::Table));
        }
    }
    Ok(())
}

/// Additive and multiplicative tables of `Z/n`, handy for building table rings.
pub fn zmod_tables(n: usize) -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let add = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    let mul = (0..n).map(|a| (0..n).map(|b| (a * b) % n).collect()).collect();
    (add, mul)
}

/// Tables of `F_2[x]/(x^2)` (elements `a + b x` indexed `a + 2b`).
pub fn dual_numbers_f2_tables() -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let dec = |i: usize| (i & 1, i >> 1);
    let enc = |a: usize, b: usize| (a % 2) + 2 * (b % 2);
    let add = (0..4)
        .map(|i| {
            (0..4)
                .map(|j| {
                    let ((a, b), (c, d)) = (dec(i), dec(j));
                    enc(a + c, b + d)
                })
                .collect()
        })
        .collect();
    let mul = (0..4)
        .map(|i| {
            (0..4)
                .map(|j| {
                    let ((a, b), (c, d)) = (dec(i), dec(j));
                    enc(a * c, a * d + b * c)
                })
                .collect()
        })
        .collect();
    (add, mul)
}

/// Tables of `F_4 = F_2[w]/(w^2 + w + 1)` (elements `a + b w` indexed `a + 2b`).
pub fn f4_tables() -> (Vec<Vec<usize>>, Vec<Vec<usize>>) {
    let dec = |i: usize| (i & 1, i >> 1);
    let enc = |a: usize, b: usize| (a % 2) + 2 * (b % 2);
    let add = (0..4)
        .map(|i| (0..4).map(|j| enc(dec(i).0 + dec(j).0, dec(i).1 + dec(j).1)).collect())
        .collect();
    let mul = (0..4)
        .map(|i| {
            (0..4)
                .map(|j| {
                    let ((a, b), (c, d)) = (dec(i), dec(j));
                    // (a + bw)(c + dw) = ac + (ad + bc)w + bd w^2, w^2 = w + 1
                    enc(a * c + b * d, a * d + b * c + b * d)
                })
                .collect()
        })
        .collect();
    (add, mul)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RingClass {
    pub is_local: bool,
    pub is_clean: bool,
    pub is_j_clean: bool,
}

impl Ring {
    pub fn table(add: Vec<Vec<usize>>, mul: Vec<Vec<usize>>) -> Result<Ring> {
        Ring::build(&RingDescriptor::Table { add, mul })
    }

    /// An idempotent `e` with `r e + (1 - e)` a unit and `r (1 - e)` in the Jacobson radical.
    ///
    /// On a product of local stalks take `e_x = 1` where `r_x` is a unit and `0` elsewhere.
    pub fn j_clean_idempotent(&self, r: &Element) -> Option<Element> {
        let e = self.idempotent_from_stalks(|i| self.stalk(i).is_unit(&r.0[i]));
        self.is_j_clean_witness(r, &e).then_some(e)
    }

    pub fn is_j_clean_witness(&self, r: &Element, e: &Element) -> bool {
        let f = self.sub(&self.one(), e);
        self.is_unit(&self.add(&self.mul(r, e), &f)) && self.radical_membership(&self.mul(r, &f)).in_jacobson
    }

    /// Locality, cleanness and J-cleanness.
    ///
    /// Every backend is a finite product of local stalks, which makes it clean and J-clean
    /// stalk by stalk. Table rings are additionally checked element by element.
    pub fn classify(&self) -> RingClass {
        let mut class = RingClass {
            is_local: self.is_local(),
            is_clean: true,
            is_j_clean: true,
        };
        if matches!(self.descriptor(), RingDescriptor::Table { .. }) {
            let idem = self.idempotents();
            for r in self.elements() {
                class.is_clean &= idem.iter().any(|e| self.is_unit(&self.sub(&r, e)));
                class.is_j_clean &= idem.iter().any(|e| self.is_j_clean_witness(&r, e));
            }
        }
        class
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn res(ring: &Ring, n: i64) -> Element {
        ring.from_int(n)
    }

    #[test]
    fn zmod12_stalks_and_idempotents() {
        let r = Ring::zmod(12).unwrap();
        let names: Vec<String> = r.stalks().iter().map(Stalk::name).collect();
        assert_eq!(names, vec!["Z/4", "Z/3"]);
        let prim: Vec<_> = r.pierce_decomposition().idempotents.iter().map(|e| r.global_json(e)).collect();
        assert_eq!(prim, vec![serde_json::json!(9), serde_json::json!(4)]);
        let mut all: Vec<u64> = r.idempotents().iter().map(|e| r.global_json(e).as_u64().unwrap()).collect();
        all.sort();
        assert_eq!(all, vec![0, 1, 4, 9]);
    }

    #[test]
    fn z6_idempotents_and_clean_element() {
        let r = Ring::zmod(6).unwrap();
        let mut all: Vec<u64> = r.idempotents().iter().map(|e| r.global_json(e).as_u64().unwrap()).collect();
        all.sort();
        assert_eq!(all, vec![0, 1, 3, 4]);
        let (e, u) = r.strongly_clean_element(&res(&r, 3)).unwrap();
        assert_eq!(r.global_json(&e), serde_json::json!(4));
        assert_eq!(r.global_json(&u), serde_json::json!(5));
        let (e, u) = r.strongly_clean_element(&r.one()).unwrap();
        assert!(r.is_zero(&e));
        assert!(r.is_one(&u));
    }

    #[test]
    fn units_and_radicals() {
        let r = Ring::zmod(12).unwrap();
        assert_eq!(r.inverse(&res(&r, 5)), Some(res(&r, 5)));
        assert_eq!(r.inverse(&r.zero()), None);
        assert_eq!(
            r.radical_membership(&res(&r, 6)),
            RadicalMembership {
                in_jacobson: true,
                in_nil: true
            }
        );
        assert_eq!(
            r.radical_membership(&r.one()),
            RadicalMembership {
                in_jacobson: false,
                in_nil: false
            }
        );
        let z2 = Ring::zloc(2).unwrap();
        assert_eq!(
            z2.radical_membership(&res(&z2, 2)),
            RadicalMembership {
                in_jacobson: true,
                in_nil: false
            }
        );
    }

    #[test]
    fn glue_examples() {
        let r = Ring::zmod(12).unwrap();
        let prim = r.pierce_decomposition().idempotents;
        let z4 = r.stalk_ring(0);
        let z3 = r.stalk_ring(1);
        let g = r
            .pierce_glue(&[(prim[0].clone(), z4.from_int(2)), (prim[1].clone(), z3.from_int(1))])
            .unwrap();
        assert_eq!(r.global_json(&g), serde_json::json!(10));
        assert_eq!(
            r.pierce_glue(&[(prim[0].clone(), z4.from_int(2))]),
            Err(Error::IncompleteCover)
        );

        let r6 = Ring::zmod(6).unwrap();
        let p6 = r6.pierce_decomposition().idempotents;
        let g = r6
            .pierce_glue(&[
                (p6[0].clone(), r6.stalk_ring(0).from_int(0)),
                (p6[1].clone(), r6.stalk_ring(1).from_int(1)),
            ])
            .unwrap();
        assert_eq!(r6.global_json(&g), serde_json::json!(4));
    }

    #[test]
    fn descriptor_errors() {
        assert_eq!(Ring::zloc(4).unwrap_err(), Error::NotPrime(4));
        assert!(matches!(Ring::zmod(1), Err(Error::InvalidDescriptor(_))));
        let d = RingDescriptor::parse(r#"{"type":"product","factors":[{"type":"zloc","p":2},{"type":"zmod","n":6}]}"#).unwrap();
        let r = Ring::build(&d).unwrap();
        assert_eq!(r.stalk_count(), 3);
        assert!(!r.is_finite());
    }

    #[test]
    fn json_round_trip_and_scalars() {
        let r = Ring::product(vec![RingDescriptor::Zloc { p: 2 }, RingDescriptor::Zloc { p: 2 }]).unwrap();
        let a = r.from_json(&serde_json::json!([3, "1/3"])).unwrap();
        assert_eq!(r.to_json(&a), serde_json::json!(["3/1", "1/3"]));
        assert_eq!(r.from_json(&r.to_json(&a)).unwrap(), a);
        assert!(r.from_json(&serde_json::json!("1/2")).is_err());
        assert_eq!(r.from_json(&serde_json::json!(-1)).unwrap(), r.neg(&r.one()));
    }

    #[test]
    fn table_ring_scalars_are_indices() {
        let (add, mul) = zmod_tables(6);
        let r = Ring::table(add, mul).unwrap();
        let five = r.from_json(&serde_json::json!(5)).unwrap();
        assert_eq!(r.global_json(&five), serde_json::json!(5));
        assert!(r.is_unit(&five));
        assert_eq!(r.to_json(&five), serde_json::json!([3, 2]));
    }

    #[test]
    fn classification() {
        let c = Ring::zmod(12).unwrap().classify();
        assert_eq!((c.is_local, c.is_clean, c.is_j_clean), (false, true, true));
        let c = Ring::zloc(2).unwrap().classify();
        assert_eq!((c.is_local, c.is_clean, c.is_j_clean), (true, true, true));
        let (add, mul) = dual_numbers_f2_tables();
        let c = Ring::table(add, mul).unwrap().classify();
        assert_eq!((c.is_local, c.is_clean, c.is_j_clean), (true, true, true));
        let r = Ring::zmod(12).unwrap();
        for k in 0..12 {
            let a = r.from_int(k);
            let e = r.j_clean_idempotent(&a).unwrap();
            assert!(r.is_j_clean_witness(&a, &e));
        }
    }

    #[test]
    fn elem_op_rejects_foreign_elements() {
        let r = Ring::zmod(12).unwrap();
        let other = Ring::zmod(5).unwrap();
        let a = other.from_int(1);
        assert_eq!(r.elem_op(ElemOp::Add, &a, &r.one()), Err(Error::RingMismatch));
        assert_eq!(
            r.elem_op(ElemOp::Mul, &r.from_int(5), &r.from_int(5)).unwrap(),
            OpResult::Element(r.one())
        );
    }
}
