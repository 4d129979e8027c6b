//! Certificate checks by direct multiplication, evaluation and unit tests.
//!
//! Nothing here calls the searches: a certificate is accepted only if its defining
//! identities hold.

use num_rational::BigRational;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::cert::{Blocks, FactorKind, PiRegularCertificate, SpCertificate, SrcCertificate, StrongCleanCertificate};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::poly::Poly;
use crate::ring::{Element, Ring, Stalk, Value};

fn fail<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::VerificationFailed(msg.into()))
}

fn ensure(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        fail(msg)
    }
}

/// `x` is a unit of the block ring `eR`.
fn block_unit(r: &Ring, x: &Element, e: &Element) -> bool {
    r.is_unit(&r.add(x, &r.sub(&r.one(), e)))
}

fn block_monic(p: &Poly, e: &Element, name: &str) -> Result<()> {
    ensure(p.is_monic_in_block(e), &format!("{name} is not monic in its block"))
}

/// SR/SRC certificate for `h e` inside `eR[t]`; use `e = 1` for the whole ring.
pub fn verify_src_block(h: &Poly, c: &SrcCertificate, e: &Element) -> Result<()> {
    let r = h.ring();
    ensure(c.f0.ring() == r && c.f1.ring() == r, "certificate ring differs from h")?;
    block_monic(&c.f0, e, "f0")?;
    block_monic(&c.f1, e, "f1")?;
    ensure(c.f0.mul(&c.f1) == h.scale(e), "f0 * f1 != h")?;
    ensure(block_unit(r, &c.f0.coeff(0), e), "f0(0) is not a unit")?;
    ensure(block_unit(r, &c.f1.eval(e), e), "f1(1) is not a unit")?;
    match (&c.kind, &c.bezout) {
        (FactorKind::Sr, _) => Ok(()),
        (FactorKind::Src, None) => fail("SRC certificate without a Bezout pair"),
        (FactorKind::Src, Some((u, v))) => {
            ensure(u.in_block(e) && v.in_block(e), "Bezout pair leaves the block")?;
            ensure(
                u.mul(&c.f0).add(&v.mul(&c.f1)) == Poly::constant(r, e.clone()),
                "u f0 + v f1 != 1",
            )
        }
    }
}

pub fn verify_src(h: &Poly, c: &SrcCertificate) -> Result<()> {
    verify_src_block(h, c, &h.ring().one())
}

/// SP certificate for `h e` inside `eR[t]`.
pub fn verify_sp_block(h: &Poly, c: &SpCertificate, e: &Element) -> Result<()> {
    let r = h.ring();
    ensure(c.h0.ring() == r && c.p0.ring() == r, "certificate ring differs from h")?;
    block_monic(&c.h0, e, "h0")?;
    block_monic(&c.p0, e, "p0")?;
    ensure(c.h0.mul(&c.p0) == h.scale(e), "h0 * p0 != h")?;
    ensure(block_unit(r, &c.h0.coeff(0), e), "h0(0) is not a unit")?;
    let d = c.p0.deg();
    ensure(
        (0..d).all(|i| r.is_nilpotent(&c.p0.coeff(i))),
        "p0 - t^deg(p0) has a non-nilpotent coefficient",
    )
}

pub fn verify_sp(h: &Poly, c: &SpCertificate) -> Result<()> {
    verify_sp_block(h, c, &h.ring().one())
}

fn verify_blocks<T>(h: &Poly, c: &Blocks<T>, each: impl Fn(&Poly, &T, &Element) -> Result<()>) -> Result<()> {
    let r = h.ring();
    let ids: Vec<Element> = c.blocks.iter().map(|b| b.idempotent.clone()).collect();
    ensure(!ids.is_empty() && r.is_complete_orthogonal(&ids), "block idempotents are not complete orthogonal")?;
    ensure(c.blocks.len() <= h.deg() + 1, "more than deg(h) + 1 blocks")?;
    for b in &c.blocks {
        each(h, &b.cert, &b.idempotent)?;
    }
    Ok(())
}

pub fn verify_gsrc(h: &Poly, c: &Blocks<SrcCertificate>) -> Result<()> {
    verify_blocks(h, c, verify_src_block)
}

pub fn verify_gsp(h: &Poly, c: &Blocks<SpCertificate>) -> Result<()> {
    verify_blocks(h, c, verify_sp_block)
}

pub fn verify_strong_clean(a: &Matrix, c: &StrongCleanCertificate) -> Result<()> {
    let n = a.n();
    let i = Matrix::identity(a.ring(), n);
    for m in [&c.e, &c.u, &c.u_inv] {
        ensure(m.ring() == a.ring() && m.rows() == n && m.cols() == n, "certificate matrix has the wrong shape")?;
    }
    ensure(c.e.mul(&c.e) == c.e, "E^2 != E")?;
    ensure(c.e.add(&c.u) == *a, "E + U != A")?;
    ensure(c.u.mul(&c.u_inv) == i && c.u_inv.mul(&c.u) == i, "U_inv is not the inverse of U")?;
    ensure(c.e.mul(&c.u) == c.u.mul(&c.e), "E and U do not commute")
}

pub fn verify_pi_regular(a: &Matrix, c: &PiRegularCertificate) -> Result<()> {
    ensure(c.k >= 1, "k must be at least 1")?;
    for m in [&c.x, &c.y] {
        ensure(m.ring() == a.ring() && m.rows() == a.n() && m.cols() == a.n(), "certificate matrix has the wrong shape")?;
    }
    let ak = a.pow(c.k as u64);
    let ak1 = ak.mul(a);
    ensure(ak1.mul(&c.x) == ak, "A^(k+1) X != A^k")?;
    ensure(c.y.mul(&ak1) == ak, "Y A^(k+1) != A^k")
}

/// Checks that a monic quadratic over `Z_(p)` has no SR factorization: `h(0)` and `h(1)`
/// are non-units and no ordering of its rational roots meets the unit conditions.
pub fn verify_no_sr_quadratic(h: &Poly) -> Result<()> {
    let r = h.ring();
    let p = match (r.is_local(), r.stalk(0)) {
        (true, Stalk::Localized { p }) => *p,
        _ => return fail("refutation applies to quadratics over Z_(p)"),
    };
    ensure(h.is_monic() && h.deg() == 2, "h is not a monic quadratic")?;
    ensure(!r.is_unit(&h.eval(&r.zero())), "h(0) is a unit")?;
    ensure(!r.is_unit(&h.eval(&r.one())), "h(1) is a unit")?;
    let q = |e: &Element| match &e.values()[0] {
        Value::Frac(x) => x.clone(),
        _ => unreachable!(),
    };
    let (b, c) = (q(&h.coeff(1)), q(&h.coeff(0)));
    let disc = &b * &b - BigRational::from_integer(4.into()) * &c;
    let root = |x: &BigInt| {
        if x.is_negative() {
            return None;
        }
        let s = num_integer::Roots::sqrt(x);
        (&s * &s == *x).then_some(s)
    };
    let Some((sn, sd)) = root(disc.numer()).zip(root(disc.denom())) else {
        return Ok(());
    };
    let s = BigRational::new(sn, sd);
    let two = BigRational::from_integer(2.into());
    let roots = [(-&b + &s) / &two, (-&b - &s) / &two];
    let unit = |x: &BigRational| !(x.numer() % BigInt::from(p)).is_zero() && !x.numer().is_zero();
    let in_ring = |x: &BigRational| !(x.denom() % BigInt::from(p)).is_zero();
    for (i, alpha) in roots.iter().enumerate() {
        let beta = &roots[1 - i];
        if in_ring(alpha) && in_ring(beta) && unit(alpha) && unit(&(BigRational::from_integer(1.into()) - beta)) {
            return fail("a root ordering gives an SR factorization");
        }
    }
    Ok(())
}
