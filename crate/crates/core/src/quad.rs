//! Arithmetic in `Z[θ]` with `θ^2 = -5`, the ideal `(2, 1 + θ)`, the module
//! `M = 𝔄 ⊕ 𝔄` with its free basis, and the endomorphism `[a, b] -> [a + b, 2b]`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde_json::{json, Value as Json};

use crate::arith::is_square_i128;
use crate::error::{Error, Result};

/// `a + bθ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct QuadInt {
    pub a: i128,
    pub b: i128,
}

pub const THETA: QuadInt = QuadInt { a: 0, b: 1 };

impl QuadInt {
    pub const fn new(a: i128, b: i128) -> Self {
        QuadInt { a, b }
    }

    pub const fn int(a: i128) -> Self {
        QuadInt { a, b: 0 }
    }

    pub const ZERO: QuadInt = QuadInt::int(0);
    pub const ONE: QuadInt = QuadInt::int(1);

    pub fn norm(self) -> i128 {
        self.a * self.a + 5 * self.b * self.b
    }

    pub fn conj(self) -> Self {
        QuadInt::new(self.a, -self.b)
    }

    pub fn is_zero(self) -> bool {
        self == QuadInt::ZERO
    }

    pub fn is_unit(self) -> bool {
        self.norm() == 1
    }

    /// `self / d` when it lies in `Z[θ]`.
    pub fn exact_div(self, d: QuadInt) -> Option<QuadInt> {
        let n = d.norm();
        if n == 0 {
            return None;
        }
        let p = self * d.conj();
        (p.a % n == 0 && p.b % n == 0).then(|| QuadInt::new(p.a / n, p.b / n))
    }

    /// Membership in `(2, 1 + θ)`, by parity.
    pub fn in_ideal(self) -> bool {
        (self.a + self.b).rem_euclid(2) == 0
    }

    pub fn to_json(self) -> Json {
        json!([self.a as i64, self.b as i64])
    }

    pub fn from_json(j: &Json) -> Result<Self> {
        match j {
            Json::Number(n) => n.as_i64().map(|a| QuadInt::int(a as i128)),
            Json::Array(v) if v.len() == 2 => match (v[0].as_i64(), v[1].as_i64()) {
                (Some(a), Some(b)) => Some(QuadInt::new(a as i128, b as i128)),
                _ => None,
            },
            _ => None,
        }
        .ok_or_else(|| Error::Parse(format!("expected an integer or [a, b], got {j}")))
    }
}

/// Membership in `(2, 1 + θ)` by looking for `x = 2u + (1 + θ)v` with `|v_i| <= bound`.
/// Writing `v = v1 + v2 θ`, `u` is forced: `2u = (a - v1 + 5 v2) + (b - v1 - v2)θ`.
pub fn in_ideal_by_search(x: QuadInt, bound: i128) -> Option<(QuadInt, QuadInt)> {
    for v1 in -bound..=bound {
        for v2 in -bound..=bound {
            let v = QuadInt::new(v1, v2);
            let rest = x - QuadInt::new(1, 1) * v;
            if rest.a % 2 == 0 && rest.b % 2 == 0 {
                return Some((QuadInt::new(rest.a / 2, rest.b / 2), v));
            }
        }
    }
    None
}

impl Add for QuadInt {
    type Output = QuadInt;
    fn add(self, o: QuadInt) -> QuadInt {
        QuadInt::new(self.a + o.a, self.b + o.b)
    }
}

impl Sub for QuadInt {
    type Output = QuadInt;
    fn sub(self, o: QuadInt) -> QuadInt {
        QuadInt::new(self.a - o.a, self.b - o.b)
    }
}

impl Neg for QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        QuadInt::new(-self.a, -self.b)
    }
}

impl Mul for QuadInt {
    type Output = QuadInt;
    fn mul(self, o: QuadInt) -> QuadInt {
        QuadInt::new(self.a * o.a - 5 * self.b * o.b, self.a * o.b + self.b * o.a)
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = |b: i128| match b.abs() {
            1 => "θ".to_string(),
            m => format!("{m}θ"),
        };
        match (self.a, self.b) {
            (a, 0) => write!(f, "{a}"),
            (0, b) if b < 0 => write!(f, "-{}", t(b)),
            (0, b) => write!(f, "{}", t(b)),
            (a, b) => write!(f, "{a}{}{}", if b < 0 { "-" } else { "+" }, t(b)),
        }
    }
}

/// An element `[a, b]` of `M`, both entries in the ideal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MElem(pub QuadInt, pub QuadInt);

impl MElem {
    pub fn new(a: QuadInt, b: QuadInt) -> Result<Self> {
        if a.in_ideal() && b.in_ideal() {
            Ok(MElem(a, b))
        } else {
            Err(Error::NotInModule)
        }
    }

    pub fn add(self, o: MElem) -> MElem {
        MElem(self.0 + o.0, self.1 + o.1)
    }

    pub fn scale(self, r: QuadInt) -> MElem {
        MElem(r * self.0, r * self.1)
    }

    pub fn to_json(self) -> Json {
        json!([self.0.to_json(), self.1.to_json()])
    }
}

impl fmt::Display for MElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.0, self.1)
    }
}

pub fn f1() -> MElem {
    MElem(QuadInt::int(-2), QuadInt::new(1, -1))
}

pub fn f2() -> MElem {
    MElem(QuadInt::new(1, 1), QuadInt::int(-2))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BasisCoords {
    pub c1: QuadInt,
    pub c2: QuadInt,
}

impl BasisCoords {
    pub fn eval(self) -> MElem {
        f1().scale(self.c1).add(f2().scale(self.c2))
    }
}

/// Coordinates of `m` in `{f1, f2}`. The basis matrix has determinant `-2`, so Cramer's
/// rule gives `c1 = (-2a - (1 + θ)b) / -2` and `c2 = (-(1 - θ)a - 2b) / -2`.
pub fn basis_coords(m: MElem) -> Result<BasisCoords> {
    let (a, b) = (m.0, m.1);
    let two = QuadInt::int(-2);
    let n1 = two * a - QuadInt::new(1, 1) * b;
    let n2 = -(QuadInt::new(1, -1) * a) + two * b;
    let c = BasisCoords {
        c1: n1.exact_div(two).ok_or(Error::NotInModule)?,
        c2: n2.exact_div(two).ok_or(Error::NotInModule)?,
    };
    if c.eval() != m {
        return Err(Error::NotInModule);
    }
    Ok(c)
}

pub fn phi_apply(m: MElem) -> MElem {
    MElem(m.0 + m.1, m.1 + m.1)
}

/// Square matrix over `Z[θ]`. Row `i` holds the coordinates of the image of `f_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadMatrix(pub Vec<Vec<QuadInt>>);

impl QuadMatrix {
    pub fn identity(n: usize) -> Self {
        QuadMatrix((0..n).map(|i| (0..n).map(|j| QuadInt::int((i == j) as i128)).collect()).collect())
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn add(&self, o: &Self) -> Self {
        QuadMatrix(self.0.iter().zip(&o.0).map(|(r, s)| r.iter().zip(s).map(|(&x, &y)| x + y).collect()).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        QuadMatrix(self.0.iter().zip(&o.0).map(|(r, s)| r.iter().zip(s).map(|(&x, &y)| x - y).collect()).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.n();
        QuadMatrix(
            (0..n)
                .map(|i| (0..n).map(|j| (0..n).fold(QuadInt::ZERO, |s, k| s + self.0[i][k] * o.0[k][j])).collect())
                .collect(),
        )
    }

    pub fn trace(&self) -> QuadInt {
        (0..self.n()).fold(QuadInt::ZERO, |s, i| s + self.0[i][i])
    }

    /// 2x2 only.
    pub fn det(&self) -> QuadInt {
        assert_eq!(self.n(), 2);
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    /// 2x2 inverse when the determinant is a unit.
    pub fn inverse(&self) -> Option<Self> {
        let d = self.det();
        if !d.is_unit() {
            return None;
        }
        let di = d; // units are +-1, their own inverses
        let m = &self.0;
        Some(QuadMatrix(vec![
            vec![di * m[1][1], di * -m[0][1]],
            vec![di * -m[1][0], di * m[0][0]],
        ]))
    }

    pub fn to_json(&self) -> Json {
        Json::Array(self.0.iter().map(|r| Json::Array(r.iter().map(|x| x.to_json()).collect())).collect())
    }

    pub fn display(&self) -> Vec<Vec<String>> {
        self.0.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()
    }
}

/// Matrix of a module map in the basis `{f1, f2}`.
pub fn matrix_of(f: impl Fn(MElem) -> MElem) -> Result<QuadMatrix> {
    let rows = [f1(), f2()]
        .into_iter()
        .map(|b| basis_coords(f(b)).map(|c| vec![c.c1, c.c2]))
        .collect::<Result<Vec<_>>>()?;
    Ok(QuadMatrix(rows))
}

/// Monic quadratic `t^2 + b t + c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Quadratic {
    pub b: QuadInt,
    pub c: QuadInt,
}

impl Quadratic {
    pub fn eval(self, x: QuadInt) -> QuadInt {
        x * x + self.b * x + self.c
    }

    pub fn discriminant(self) -> QuadInt {
        self.b * self.b - QuadInt::int(4) * self.c
    }

    pub fn to_json(self) -> Json {
        json!([self.c.to_json(), self.b.to_json(), [1, 0]])
    }
}

impl fmt::Display for Quadratic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t^2")?;
        for (c, t) in [(self.b, "t"), (self.c, "")] {
            match (c.a, c.b) {
                (0, 0) => {}
                (a, 0) if a < 0 => write!(f, " - {}{t}", if a == -1 && !t.is_empty() { String::new() } else { (-a).to_string() })?,
                (a, 0) => write!(f, " + {}{t}", if a == 1 && !t.is_empty() { String::new() } else { a.to_string() })?,
                _ => write!(f, " + ({c}){t}")?,
            }
        }
        Ok(())
    }
}

/// `phi_matrix` with `t^2 - trace t + det`.
pub fn phi_matrix() -> Result<(QuadMatrix, Quadratic)> {
    let a = matrix_of(phi_apply)?;
    let chi = Quadratic {
        b: -a.trace(),
        c: a.det(),
    };
    Ok((a, chi))
}

/// Every `x` with `x^2 = d`, found through `N(x)^2 = N(d)`.
pub fn square_roots(d: QuadInt) -> Vec<QuadInt> {
    if d.is_zero() {
        return vec![QuadInt::ZERO];
    }
    let Some(m) = is_square_i128(d.norm()) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    let mut v = 0i128;
    while 5 * v * v <= m {
        if let Some(u) = is_square_i128(m - 5 * v * v) {
            for x in [QuadInt::new(u, v), QuadInt::new(-u, v), QuadInt::new(u, -v), QuadInt::new(-u, -v)] {
                if x * x == d && !out.contains(&x) {
                    out.push(x);
                }
            }
        }
        v += 1;
    }
    out.sort();
    out
}

/// An SR factorization `h = f0 f1` of a monic quadratic: `f0` and `f1` as monic
/// coefficient lists, low degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadSr {
    pub f0: Vec<QuadInt>,
    pub f1: Vec<QuadInt>,
}

impl QuadSr {
    pub fn to_json(&self) -> Json {
        let p = |v: &[QuadInt]| Json::Array(v.iter().map(|x| x.to_json()).collect());
        json!({"f0": p(&self.f0), "f1": p(&self.f1)})
    }
}

/// Complete decision for an SR factorization of `t^2 + bt + c` over `Z[θ]`.
pub fn sr_exists_deg2_z5(h: Quadratic) -> (Option<QuadSr>, Vec<String>) {
    let mut log = Vec::new();
    let h1 = h.eval(QuadInt::ONE);
    if h1.is_unit() {
        log.push(format!("d=0: h(1) = {h1} is a unit"));
        return (
            Some(QuadSr {
                f0: vec![QuadInt::ONE],
                f1: vec![h.c, h.b, QuadInt::ONE],
            }),
            log,
        );
    }
    log.push(format!("d=0: h(1) = {h1} has norm {} and is not a unit", h1.norm()));
    if h.c.is_unit() {
        log.push(format!("d=2: h(0) = {} is a unit", h.c));
        return (
            Some(QuadSr {
                f0: vec![h.c, h.b, QuadInt::ONE],
                f1: vec![QuadInt::ONE],
            }),
            log,
        );
    }
    log.push(format!("d=2: h(0) = {} has norm {} and is not a unit", h.c, h.c.norm()));
    let disc = h.discriminant();
    let roots = square_roots(disc);
    match is_square_i128(disc.norm()) {
        None => log.push(format!(
            "d=1: discriminant {disc} has norm {}, not a square integer, so h has no root",
            disc.norm()
        )),
        Some(m) if roots.is_empty() => log.push(format!(
            "d=1: discriminant {disc} has norm {m}^2 but no element of norm {m} squares to it, so h has no root"
        )),
        Some(_) => {}
    }
    for s in &roots {
        let Some(alpha) = (-h.b + *s).exact_div(QuadInt::int(2)) else {
            log.push(format!("d=1: square root {s} of {disc} gives (-b + s)/2 outside Z[θ]"));
            continue;
        };
        let beta = -h.b - alpha;
        // f0 = t - alpha, f1 = t - beta
        let f0_0 = -alpha;
        let f1_1 = QuadInt::ONE - beta;
        if f0_0.is_unit() && f1_1.is_unit() {
            log.push(format!("d=1: roots {alpha}, {beta}: f0 = t - ({alpha}) has f0(0) = {f0_0}, f1 = t - ({beta}) has f1(1) = {f1_1}, both units"));
            return (
                Some(QuadSr {
                    f0: vec![f0_0, QuadInt::ONE],
                    f1: vec![-beta, QuadInt::ONE],
                }),
                log,
            );
        }
        log.push(format!(
            "d=1: roots {alpha}, {beta}: f0(0) = {f0_0} or f1(1) = {f1_1} is not a unit"
        ));
    }
    if !roots.is_empty() {
        log.push("d=1: no ordering of the roots meets both unit conditions".into());
    }
    (None, log)
}

/// Reference decision: every monic linear factor `t + α` with `N(α) <= N(h(0))`.
pub fn sr_exists_deg2_bruteforce(h: Quadratic) -> bool {
    if h.eval(QuadInt::ONE).is_unit() || h.c.is_unit() {
        return true;
    }
    let bound = if h.c.is_zero() { h.b.norm() } else { h.c.norm() };
    let ub = (bound as f64).sqrt() as i128 + 1;
    for a in -ub..=ub {
        for b in -ub..=ub {
            let alpha = QuadInt::new(a, b);
            if alpha.norm() > bound || !h.eval(-alpha).is_zero() {
                continue;
            }
            // t + alpha divides h; the cofactor is t + (b_h - alpha)
            let other = h.b - alpha;
            if alpha.is_unit() && (QuadInt::ONE + other).is_unit() {
                return true;
            }
        }
    }
    false
}

/// `A = E + U` over `Z[θ]` with `E^2 = E`, `EU = UE` and `U U_inv = I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadCertificate {
    pub e: QuadMatrix,
    pub u: QuadMatrix,
    pub u_inv: QuadMatrix,
}

impl QuadCertificate {
    pub fn to_json(&self) -> Json {
        json!({"E": self.e.to_json(), "U": self.u.to_json(), "U_inv": self.u_inv.to_json()})
    }
}

pub fn verify_quad_certificate(a: &QuadMatrix, c: &QuadCertificate) -> Result<()> {
    let fail = |m: &str| Err(Error::VerificationFailed(m.into()));
    let i = QuadMatrix::identity(a.n());
    if c.e.mul(&c.e) != c.e {
        return fail("E^2 != E");
    }
    if c.e.add(&c.u) != *a {
        return fail("E + U != A");
    }
    if c.e.mul(&c.u) != c.u.mul(&c.e) {
        return fail("E and U do not commute");
    }
    if c.u.mul(&c.u_inv) != i || c.u_inv.mul(&c.u) != i {
        return fail("U_inv is not the inverse of U");
    }
    Ok(())
}

/// `M = X ⊕ Y` with `X = {[a, 0]}` and `Y = {[b, b]}`; `E` projects onto `Y` along `X`,
/// i.e. `[a, b] -> [b, b]`.
pub fn projection_onto_y(m: MElem) -> MElem {
    MElem(m.1, m.1)
}

pub fn phi_strong_clean_certificate() -> Result<QuadCertificate> {
    let (a, _) = phi_matrix()?;
    let e = matrix_of(projection_onto_y)?;
    let u = a.sub(&e);
    let u_inv = u
        .inverse()
        .ok_or_else(|| Error::VerificationFailed(format!("det(U) = {} is not a unit", u.det())))?;
    let cert = QuadCertificate { e, u, u_inv };
    verify_quad_certificate(&a, &cert)?;
    Ok(cert)
}

/// Full audit of the example; deterministic JSON.
pub fn z5_audit() -> Result<Json> {
    let q = QuadInt::new;
    let mut failures = Vec::new();

    let printed_conversions = [
        (MElem(q(2, 0), q(0, 0)), q(2, 0), q(1, -1)),
        (MElem(q(1, 1), q(0, 0)), q(1, 1), q(3, 0)),
        (MElem(q(0, 0), q(2, 0)), q(1, 1), q(2, 0)),
        (MElem(q(0, 0), q(1, 1)), q(-2, 1), q(1, 1)),
    ];
    let mut conversions = Vec::new();
    for (m, c1, c2) in printed_conversions {
        let got = basis_coords(m)?;
        let ok = got.c1 == c1 && got.c2 == c2 && got.eval() == m;
        if !ok {
            failures.push(format!("conversion of {m}"));
        }
        conversions.push(json!({
            "element": m.to_string(),
            "printed": [c1.to_string(), c2.to_string()],
            "computed": [got.c1.to_string(), got.c2.to_string()],
            "verified": ok,
        }));
    }

    let basis_ok = {
        let det = QuadInt::int(-2) * QuadInt::int(-2) - QuadInt::new(1, 1) * QuadInt::new(1, -1);
        f1().0.in_ideal() && f1().1.in_ideal() && f2().0.in_ideal() && f2().1.in_ideal() && det == QuadInt::int(-2)
    };
    if !basis_ok {
        failures.push("basis".into());
    }

    let printed_images = [
        (f1(), MElem(q(-1, -1), q(2, -2)), q(5, -1), q(-1, -2)),
        (f2(), MElem(q(-1, 1), q(-4, 0)), q(-3, -1), q(-2, 1)),
    ];
    let mut images = Vec::new();
    for (i, (f, img, c1, c2)) in printed_images.into_iter().enumerate() {
        let got = phi_apply(f);
        let coords = basis_coords(got)?;
        let ok = got == img && coords.c1 == c1 && coords.c2 == c2;
        if !ok {
            failures.push(format!("image of f{}", i + 1));
        }
        images.push(json!({
            "basis_vector": format!("f{}", i + 1),
            "image": got.to_string(),
            "coordinates": [coords.c1.to_string(), coords.c2.to_string()],
            "verified": ok,
        }));
    }

    let (a, chi) = phi_matrix()?;
    let displayed = QuadMatrix(vec![vec![q(5, -1), q(-1, -2)], vec![q(-3, -1), q(-2, 1)]]);
    let matrix_ok = a == displayed;
    if !matrix_ok {
        failures.push("matrix".into());
    }

    let printed_chi = Quadratic { b: q(-3, 0), c: q(2, -8) };
    let printed_disc = q(1, -32);
    let disc = chi.discriminant();

    let (sr, transcript) = sr_exists_deg2_z5(chi);
    let (sr_printed, transcript_printed) = sr_exists_deg2_z5(printed_chi);

    let cert = phi_strong_clean_certificate()?;
    // E kills X and fixes Y, checked on the generators [2, 0] and [2, 2]
    let row = |m: MElem| -> Result<Vec<QuadInt>> {
        let c = basis_coords(m)?;
        Ok(vec![c.c1, c.c2])
    };
    let apply = |m: &QuadMatrix, v: &[QuadInt]| -> Vec<QuadInt> {
        (0..2).map(|j| v[0] * m.0[0][j] + v[1] * m.0[1][j]).collect()
    };
    let x_gen = row(MElem(q(2, 0), q(0, 0)))?;
    let y_gen = row(MElem(q(2, 0), q(2, 0)))?;
    let projection_ok = apply(&cert.e, &x_gen) == vec![QuadInt::ZERO; 2] && apply(&cert.e, &y_gen) == y_gen;
    if !projection_ok {
        failures.push("projection".into());
    }

    let mut discrepancies = Vec::new();
    if chi != printed_chi {
        discrepancies.push(json!({
            "quantity": "characteristic polynomial",
            "printed": printed_chi.to_string(),
            "recomputed": chi.to_string(),
            "detail": format!("trace {} and determinant {} of the verified matrix", a.trace(), a.det()),
        }));
    }
    if disc != printed_disc {
        discrepancies.push(json!({
            "quantity": "discriminant",
            "printed": printed_disc.to_string(),
            "recomputed": disc.to_string(),
            "detail": format!(
                "norms {} and {}; the printed polynomial itself has discriminant {}",
                printed_disc.norm(),
                disc.norm(),
                printed_chi.discriminant()
            ),
        }));
    }
    if sr.is_some() != sr_printed.is_some() {
        discrepancies.push(json!({
            "quantity": "SR factorization of the characteristic polynomial",
            "printed": if sr_printed.is_some() { "exists" } else { "does not exist" },
            "recomputed": if sr.is_some() { "exists" } else { "does not exist" },
            "detail": "the example's claim holds for the printed polynomial but is re-evaluated on the recomputed one",
        }));
    }

    Ok(json!({
        "basis": {
            "f1": f1().to_string(),
            "f2": f2().to_string(),
            "determinant": "-2",
            "verified": basis_ok,
        },
        "conversions": conversions,
        "images": images,
        "matrix": {
            "entries": a.display(),
            "matches_displayed": matrix_ok,
        },
        "characteristic_polynomial": {
            "recomputed": chi.to_string(),
            "coefficients": chi.to_json(),
            "discriminant": disc.to_string(),
            "discriminant_norm": disc.norm().to_string(),
        },
        "sr_decision": {
            "polynomial": chi.to_string(),
            "exists": sr.is_some(),
            "factorization": sr.map(|s| s.to_json()),
            "transcript": transcript,
        },
        "sr_decision_printed_polynomial": {
            "polynomial": printed_chi.to_string(),
            "exists": sr_printed.is_some(),
            "transcript": transcript_printed,
        },
        "strong_clean_certificate": {
            "certificate": cert.to_json(),
            "display": {"E": cert.e.display(), "U": cert.u.display(), "U_inv": cert.u_inv.display()},
            "det_U": cert.u.det().to_string(),
            "projection_verified": projection_ok,
            "verified": true,
        },
        "DISCREPANCY": discrepancies,
        "failures": failures,
        "passed": failures.is_empty(),
    }))
}
