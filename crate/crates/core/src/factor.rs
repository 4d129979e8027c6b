//! Factorization searches: SR/SRC and SP splittings over local stalks, and their
//! block-wise assemblies over a whole ring.
//!
//! Over a finite stalk every split degree is searched exhaustively. Over `Z_(p)` the
//! degree 0, 1, `n - 1` and `n` splits are decided in closed form (unit tests and
//! rational roots); other degrees get a bounded-height search and may come back
//! [`Search::Incomplete`].

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::arith::divisors_big;
use crate::cert::{Block, Blocks, FactorKind, GspCertificate, GsrcCertificate, SpCertificate, SrcCertificate};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::poly::Poly;
use crate::ring::{Element, Ring, Stalk, Value};

/// Candidate budget per split degree on a finite stalk.
pub const SEARCH_BUDGET: u128 = 2_000_000;
/// Coefficient height for the bounded `Z_(p)` search at middle degrees.
const HEIGHT: i64 = 3;
const DIVISOR_LIMIT: u64 = 1_000_000;

/// Three-valued search outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Search<T> {
    Found(T),
    Absent,
    Incomplete(String),
}

impl<T> Search<T> {
    pub fn found(&self) -> Option<&T> {
        match self {
            Search::Found(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_found(&self) -> bool {
        matches!(self, Search::Found(_))
    }

    pub fn is_absent(&self) -> bool {
        matches!(self, Search::Absent)
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Search<U> {
        match self {
            Search::Found(t) => Search::Found(f(t)),
            Search::Absent => Search::Absent,
            Search::Incomplete(r) => Search::Incomplete(r),
        }
    }

    /// `Err(IncompleteSearch)` for an incomplete search.
    pub fn into_option(self) -> Result<Option<T>> {
        match self {
            Search::Found(t) => Ok(Some(t)),
            Search::Absent => Ok(None),
            Search::Incomplete(r) => Err(Error::IncompleteSearch(r)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Sr,
    Src,
}

/// Human-readable record of the branches a search went through.
pub type Transcript = Vec<String>;

// ---- comaximality ---------------------------------------------------------------

/// Sylvester-type matrix whose columns are `t^i f0` (`i < deg f1`) and `t^j f1`
/// (`j < deg f0`), coefficients low degree first. Its determinant is the resultant up
/// to sign.
fn sylvester(f0: &Poly, f1: &Poly) -> Matrix {
    let r = f0.ring();
    let (m, k) = (f0.deg(), f1.deg());
    let n = m + k;
    Matrix::from_fn(r, n, n, |row, col| {
        let (f, shift) = if col < k { (f0, col) } else { (f1, col - k) };
        if row >= shift {
            f.coeff(row - shift)
        } else {
            r.zero()
        }
    })
}

/// The resultant `Res(f0, f1)` of two monic polynomials.
pub fn resultant(f0: &Poly, f1: &Poly) -> Element {
    if f0.deg() + f1.deg() == 0 {
        return f0.ring().one();
    }
    sylvester(f0, f1).det()
}

/// A Bezout pair `u f0 + v f1 = 1` when the resultant is a unit, `None` otherwise.
pub fn comaximality(f0: &Poly, f1: &Poly) -> Result<Option<(Poly, Poly)>> {
    if f0.ring() != f1.ring() {
        return Err(Error::RingMismatch);
    }
    if !f0.is_monic() || !f1.is_monic() {
        return Err(Error::NonMonicDivisor);
    }
    let r = f0.ring();
    let (m, k) = (f0.deg(), f1.deg());
    if m + k == 0 {
        return Ok(Some((Poly::one(r), Poly::zero(r))));
    }
    let s = sylvester(f0, f1);
    let Some(dinv) = r.inverse(&s.det()) else {
        return Ok(None);
    };
    let x: Vec<Element> = s.adjugate().column(0).iter().map(|c| r.mul(c, &dinv)).collect();
    let u = Poly::new(r, x[..k].to_vec());
    let v = Poly::new(r, x[k..].to_vec());
    Ok(Some((u, v)))
}

// ---- helpers over a single stalk ------------------------------------------------

fn stalk_of(h: &Poly) -> &Stalk {
    debug_assert!(h.ring().is_local());
    h.ring().stalk(0)
}

fn frac(e: &Element) -> BigRational {
    match &e.values()[0] {
        Value::Frac(q) => q.clone(),
        _ => unreachable!("Z_(p) stalk value"),
    }
}

fn elem_of(r: &Ring, q: BigRational) -> Element {
    r.from_ratio(q.numer(), q.denom()).expect("value lies in the stalk")
}

/// Monic polynomials of degree `d` over a finite stalk, with coefficients drawn from
/// `pool`, in order of `(c_0, c_1, ...)` with `c_0` most significant.
fn monic_candidates<'a>(r: &'a Ring, pool: &'a [Element], d: usize) -> impl Iterator<Item = Poly> + 'a {
    let base = pool.len() as u128;
    let total = base.pow(d as u32);
    (0..total).map(move |mut idx| {
        let mut c = vec![r.zero(); d + 1];
        for i in (0..d).rev() {
            c[i] = pool[(idx % base) as usize].clone();
            idx /= base;
        }
        c[d] = r.one();
        Poly::new(r, c)
    })
}

fn count(pool: usize, d: usize) -> u128 {
    (0..d).fold(1u128, |acc, _| acc.saturating_mul(pool as u128))
}

/// Lexicographic key with `c_0` most significant.
fn key(p: &Poly) -> Vec<Element> {
    p.coeffs().to_vec()
}

fn unit_word(r: &Ring, x: &Element) -> &'static str {
    if r.is_unit(x) {
        "a unit"
    } else {
        "not a unit"
    }
}

fn finish_src(f0: Poly, f1: Poly, mode: Mode) -> Result<Option<SrcCertificate>> {
    match mode {
        Mode::Sr => Ok(Some(SrcCertificate {
            f0,
            f1,
            bezout: None,
            kind: FactorKind::Sr,
        })),
        Mode::Src => Ok(comaximality(&f0, &f1)?.map(|b| SrcCertificate {
            f0,
            f1,
            bezout: Some(b),
            kind: FactorKind::Src,
        })),
    }
}

// ---- SR / SRC over a local stalk ------------------------------------------------

/// SR (or SRC) splitting `h = f0 f1` with `deg f0 = d` over a local stalk.
pub fn src_search_degree(h: &Poly, d: usize, mode: Mode, log: &mut Transcript) -> Result<Search<SrcCertificate>> {
    let r = h.ring();
    let n = h.deg();
    assert!(d <= n);
    if d == 0 || d == n {
        let (f0, f1) = if d == 0 { (Poly::one(r), h.clone()) } else { (h.clone(), Poly::one(r)) };
        let (point, value) = if d == 0 { ("h(1)", h.eval(&r.one())) } else { ("h(0)", h.eval(&r.zero())) };
        log.push(format!("d={d}: {point} = {} is {}", r.display(&value), unit_word(r, &value)));
        if !r.is_unit(&value) {
            return Ok(Search::Absent);
        }
        return Ok(match finish_src(f0, f1, mode)? {
            Some(c) => Search::Found(c),
            None => Search::Absent,
        });
    }
    match stalk_of(h) {
        Stalk::Localized { p } => zloc_split(h, d, *p, mode, log),
        _ => finite_split(h, d, mode, log),
    }
}

fn finite_split(h: &Poly, d: usize, mode: Mode, log: &mut Transcript) -> Result<Search<SrcCertificate>> {
    let r = h.ring();
    let n = h.deg();
    let pool: Vec<Element> = r.elements().collect();
    let small = d.min(n - d);
    let needed = count(pool.len(), small);
    if needed > SEARCH_BUDGET {
        log.push(format!("d={d}: {needed} candidates exceed the search budget"));
        return Ok(Search::Incomplete(format!("{needed} candidate factors of degree {small} over {}", r.name())));
    }
    let one = r.one();
    let mut best: Option<SrcCertificate> = None;
    let mut divisors = 0u64;
    if d <= n - d {
        for f0 in monic_candidates(r, &pool, d) {
            if !r.is_unit(&f0.coeff(0)) {
                continue;
            }
            let Some(f1) = h.exact_quotient(&f0) else { continue };
            divisors += 1;
            if !r.is_unit(&f1.eval(&one)) {
                continue;
            }
            if let Some(c) = finish_src(f0, f1, mode)? {
                best = Some(c);
                break;
            }
        }
    } else {
        for f1 in monic_candidates(r, &pool, n - d) {
            if !r.is_unit(&f1.eval(&one)) {
                continue;
            }
            let Some(f0) = h.exact_quotient(&f1) else { continue };
            divisors += 1;
            if !r.is_unit(&f0.coeff(0)) || best.as_ref().is_some_and(|b| key(&b.f0) <= key(&f0)) {
                continue;
            }
            if let Some(c) = finish_src(f0, f1, mode)? {
                best = Some(c);
            }
        }
    }
    match best {
        Some(c) => {
            log.push(format!("d={d}: found f0 = {}, f1 = {}", c.f0, c.f1));
            Ok(Search::Found(c))
        }
        None => {
            log.push(format!(
                "d={d}: {needed} candidates scanned, {divisors} unit-constrained divisors, none qualifies"
            ));
            Ok(Search::Absent)
        }
    }
}

/// Rational roots of `h` (coefficients in `Z_(p)`), ascending; `None` when the integers
/// involved are too large to factor by trial division.
pub fn rational_roots(h: &Poly) -> Option<Vec<BigRational>> {
    let coeffs: Vec<BigRational> = h.coeffs().iter().map(frac).collect();
    let lcm = coeffs.iter().fold(BigInt::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
    let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let mut roots = Vec::new();
    let low = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
    if low > 0 {
        roots.push(BigRational::zero());
    }
    let tail = &ints[low..];
    if tail.len() > 1 {
        let nums = divisors_big(&tail[0], DIVISOR_LIMIT)?;
        let dens = divisors_big(tail.last().unwrap(), DIVISOR_LIMIT)?;
        let eval = |x: &BigRational| {
            tail.iter()
                .rev()
                .fold(BigRational::zero(), |acc, c| acc * x + BigRational::from_integer(c.clone()))
        };
        for a in &nums {
            for b in &dens {
                for s in [a.clone(), -a.clone()] {
                    let x = BigRational::new(s, b.clone());
                    if eval(&x).is_zero() && !roots.contains(&x) {
                        roots.push(x);
                    }
                }
            }
        }
    }
    roots.sort();
    Some(roots)
}

fn zloc_split(h: &Poly, d: usize, p: u64, mode: Mode, log: &mut Transcript) -> Result<Search<SrcCertificate>> {
    let r = h.ring();
    let n = h.deg();
    let one = r.one();
    let s = stalk_of(h);
    let in_ring = |q: &BigRational| (q.denom() % BigInt::from(p)).is_positive();
    if d == 1 || d == n - 1 {
        let roots: Vec<BigRational> = if n == 2 {
            let (b, c) = (frac(&h.coeff(1)), frac(&h.coeff(0)));
            let disc = &b * &b - BigRational::from_integer(4.into()) * &c;
            let sq = s.rational_sqrt(&Value::Frac(disc.clone()));
            log.push(format!(
                "d=1: discriminant {} is {}",
                disc,
                if sq.is_some() { "a rational square" } else { "not a rational square, so h has no root in Q" }
            ));
            match sq {
                None => return Ok(Search::Absent),
                Some(Value::Frac(sq)) => {
                    let two = BigRational::from_integer(2.into());
                    let mut v = vec![(-&b + &sq) / &two, (-&b - &sq) / &two];
                    v.sort();
                    v.dedup();
                    v
                }
                Some(_) => unreachable!(),
            }
        } else {
            match rational_roots(h) {
                Some(v) => v,
                None => {
                    log.push(format!("d={d}: coefficients too large for the rational root test"));
                    return Ok(Search::Incomplete("rational root test exceeded the factoring limit".into()));
                }
            }
        };
        let roots: Vec<BigRational> = roots.into_iter().filter(|q| in_ring(q)).collect();
        log.push(format!(
            "d={d}: roots in Z_({p}): [{}]",
            roots.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(", ")
        ));
        let mut best: Option<SrcCertificate> = None;
        for a in &roots {
            let lin = Poly::linear(r, &elem_of(r, a.clone()));
            let (f0, f1) = if d == 1 {
                let f1 = h.exact_quotient(&lin).expect("root gives a linear factor");
                (lin, f1)
            } else {
                let f0 = h.exact_quotient(&lin).expect("root gives a linear factor");
                (f0, lin)
            };
            let (c0, c1) = (f0.coeff(0), f1.eval(&one));
            log.push(format!(
                "d={d}: f0 = {f0}, f1 = {f1}: f0(0) = {} is {}, f1(1) = {} is {}",
                r.display(&c0),
                unit_word(r, &c0),
                r.display(&c1),
                unit_word(r, &c1)
            ));
            if !r.is_unit(&c0) || !r.is_unit(&c1) || best.as_ref().is_some_and(|b| key(&b.f0) <= key(&f0)) {
                continue;
            }
            match finish_src(f0, f1, mode)? {
                Some(c) => best = Some(c),
                None => log.push(format!("d={d}: factors are not comaximal")),
            }
        }
        return Ok(match best {
            Some(c) => Search::Found(c),
            None => Search::Absent,
        });
    }
    // middle degrees: integer coefficients of bounded height
    let pool: Vec<Element> = (-HEIGHT..=HEIGHT).map(|k| r.from_int(k)).collect();
    let small = d.min(n - d);
    let needed = count(pool.len(), small);
    if needed <= SEARCH_BUDGET {
        let mut best: Option<SrcCertificate> = None;
        for g in monic_candidates(r, &pool, small) {
            let Some(q) = h.exact_quotient(&g) else { continue };
            let (f0, f1) = if small == d { (g, q) } else { (q, g) };
            if !r.is_unit(&f0.coeff(0)) || !r.is_unit(&f1.eval(&one)) {
                continue;
            }
            if best.as_ref().is_some_and(|b| key(&b.f0) <= key(&f0)) {
                continue;
            }
            if let Some(c) = finish_src(f0, f1, mode)? {
                best = Some(c);
            }
        }
        if let Some(c) = best {
            log.push(format!("d={d}: bounded search found f0 = {}, f1 = {}", c.f0, c.f1));
            return Ok(Search::Found(c));
        }
    }
    log.push(format!("d={d}: bounded-height search (|c| <= {HEIGHT}) found nothing; undecided"));
    Ok(Search::Incomplete(format!("degree {d} factors of a degree {n} polynomial over Z_({p})")))
}

/// SR/SRC factorization over a local stalk with minimal `deg f0`.
pub fn src_search_local(h: &Poly, mode: Mode) -> Result<Search<SrcCertificate>> {
    src_search_local_traced(h, mode, &mut Vec::new())
}

pub fn src_search_local_traced(h: &Poly, mode: Mode, log: &mut Transcript) -> Result<Search<SrcCertificate>> {
    check_local_monic(h)?;
    let mut incomplete = None;
    for d in 0..=h.deg() {
        match src_search_degree(h, d, mode, log)? {
            Search::Found(c) => return Ok(Search::Found(c)),
            Search::Absent => {}
            Search::Incomplete(why) => {
                incomplete.get_or_insert(why);
            }
        }
    }
    Ok(match incomplete {
        Some(why) => Search::Incomplete(why),
        None => Search::Absent,
    })
}

fn check_local_monic(h: &Poly) -> Result<()> {
    if !h.ring().is_local() {
        return Err(Error::InvalidInput("local search needs a single-stalk ring".into()));
    }
    check_monic(h)
}

fn check_monic(h: &Poly) -> Result<()> {
    if h.is_monic() {
        Ok(())
    } else {
        Err(Error::InvalidInput("h must be monic".into()))
    }
}

// ---- global assemblies ----------------------------------------------------------

fn restrictions(h: &Poly) -> Vec<Poly> {
    (0..h.ring().stalk_count()).map(|i| h.restrict(i)).collect()
}

fn glue_src(ring: &Ring, stalks: &[usize], parts: &[&SrcCertificate]) -> SrcCertificate {
    let lift = |pick: &dyn Fn(&SrcCertificate) -> Poly| {
        stalks
            .iter()
            .zip(parts)
            .fold(Poly::zero(ring), |acc, (&i, c)| acc.add(&Poly::lift(ring, i, &pick(c))))
    };
    let bezout = parts[0].bezout.as_ref().map(|_| {
        (
            lift(&|c| c.bezout.as_ref().unwrap().0.clone()),
            lift(&|c| c.bezout.as_ref().unwrap().1.clone()),
        )
    });
    SrcCertificate {
        f0: lift(&|c| c.f0.clone()),
        f1: lift(&|c| c.f1.clone()),
        bezout,
        kind: parts[0].kind,
    }
}

fn glue_sp(ring: &Ring, stalks: &[usize], parts: &[&SpCertificate]) -> SpCertificate {
    let lift = |pick: &dyn Fn(&SpCertificate) -> Poly| {
        stalks
            .iter()
            .zip(parts)
            .fold(Poly::zero(ring), |acc, (&i, c)| acc.add(&Poly::lift(ring, i, &pick(c))))
    };
    SpCertificate {
        h0: lift(&|c| c.h0.clone()),
        p0: lift(&|c| c.p0.clone()),
    }
}

/// Single-block SR/SRC factorization over the whole ring: one split degree shared by all
/// stalks. The transcript records every stalk and degree examined.
pub fn sr_search_global(h: &Poly, mode: Mode) -> Result<(Search<SrcCertificate>, Transcript)> {
    check_monic(h)?;
    let ring = h.ring();
    let parts = restrictions(h);
    let mut log = Transcript::new();
    let mut incomplete = None;
    for d in 0..=h.deg() {
        let mut found = Vec::new();
        let mut blocked = false;
        for (i, hx) in parts.iter().enumerate() {
            let mut local = Vec::new();
            let res = src_search_degree(hx, d, mode, &mut local)?;
            log.extend(local.into_iter().map(|l| format!("stalk {i} ({}): {l}", ring.stalk(i))));
            match res {
                Search::Found(c) => found.push(c),
                Search::Absent => {
                    blocked = true;
                    break;
                }
                Search::Incomplete(why) => {
                    incomplete.get_or_insert(why);
                    blocked = true;
                    break;
                }
            }
        }
        if !blocked {
            let idx: Vec<usize> = (0..parts.len()).collect();
            let refs: Vec<&SrcCertificate> = found.iter().collect();
            log.push(format!("d={d}: every stalk splits"));
            return Ok((Search::Found(glue_src(ring, &idx, &refs)), log));
        }
        log.push(format!("d={d}: no common split"));
    }
    let res = match incomplete {
        Some(why) => Search::Incomplete(why),
        None => Search::Absent,
    };
    Ok((res, log))
}

/// Groups stalks by degree into blocks, ordered by their first stalk, and glues each block.
fn assemble<T, G>(ring: &Ring, per_stalk: Vec<(usize, T)>, glue: G) -> Blocks<T>
where
    G: Fn(&Ring, &[usize], &[&T]) -> T,
{
    let mut groups: BTreeMap<usize, Vec<(usize, &T)>> = BTreeMap::new();
    for (i, (d, c)) in per_stalk.iter().enumerate() {
        groups.entry(*d).or_default().push((i, c));
    }
    let mut groups: Vec<_> = groups.into_values().collect();
    groups.sort_by_key(|members| members[0].0);
    let blocks = groups
        .iter()
        .map(|members| {
            let idx: Vec<usize> = members.iter().map(|(i, _)| *i).collect();
            let certs: Vec<&T> = members.iter().map(|(_, c)| *c).collect();
            Block {
                idempotent: ring.idempotent_from_stalks(|s| idx.contains(&s)),
                cert: glue(ring, &idx, &certs),
            }
        })
        .collect();
    Blocks { blocks }
}

/// Per-stalk searches combined: any definitive failure wins over incompleteness.
fn combine<T>(results: Vec<Search<T>>) -> Search<Vec<T>> {
    if results.iter().any(Search::is_absent) {
        return Search::Absent;
    }
    let mut out = Vec::with_capacity(results.len());
    for r in results {
        match r {
            Search::Found(t) => out.push(t),
            Search::Incomplete(why) => return Search::Incomplete(why),
            Search::Absent => unreachable!(),
        }
    }
    Search::Found(out)
}

/// gSRC (or gSR) certificate: per-stalk minimal-degree splittings grouped by `deg f0`.
pub fn gsrc_search(h: &Poly, mode: Mode) -> Result<Search<GsrcCertificate>> {
    check_monic(h)?;
    let results = restrictions(h)
        .par_iter()
        .map(|hx| src_search_local(hx, mode))
        .collect::<Result<Vec<_>>>()?;
    Ok(combine(results).map(|certs| {
        let keyed = certs.into_iter().map(|c| (c.f0.deg(), c)).collect();
        assemble(h.ring(), keyed, glue_src)
    }))
}

// ---- SP ---------------------------------------------------------------------------

/// SP splitting `h = h0 p0` with `deg p0 = d` over a local stalk.
pub fn sp_search_degree(h: &Poly, d: usize) -> Result<Search<SpCertificate>> {
    let r = h.ring();
    if let Stalk::Localized { .. } = stalk_of(h) {
        // a domain: p0 must be t^d
        if (0..d).any(|i| !r.is_zero(&h.coeff(i))) {
            return Ok(Search::Absent);
        }
        let h0 = Poly::new(r, h.coeffs()[d..].to_vec());
        return Ok(if r.is_unit(&h0.coeff(0)) {
            Search::Found(SpCertificate {
                h0,
                p0: Poly::monomial(r, d),
            })
        } else {
            Search::Absent
        });
    }
    let nil: Vec<Element> = r.elements().filter(|x| r.is_nilpotent(x)).collect();
    let needed = count(nil.len(), d);
    if needed > SEARCH_BUDGET {
        return Ok(Search::Incomplete(format!("{needed} nilpotent-tail candidates of degree {d}")));
    }
    for p0 in monic_candidates(r, &nil, d) {
        if let Some(h0) = h.exact_quotient(&p0) {
            if r.is_unit(&h0.coeff(0)) {
                return Ok(Search::Found(SpCertificate { h0, p0 }));
            }
        }
    }
    Ok(Search::Absent)
}

/// SP factorization over a local stalk with minimal `deg p0`.
pub fn sp_search_local(h: &Poly) -> Result<Search<SpCertificate>> {
    check_local_monic(h)?;
    let mut incomplete = None;
    for d in 0..=h.deg() {
        match sp_search_degree(h, d)? {
            Search::Found(c) => return Ok(Search::Found(c)),
            Search::Absent => {}
            Search::Incomplete(why) => {
                incomplete.get_or_insert(why);
            }
        }
    }
    Ok(match incomplete {
        Some(why) => Search::Incomplete(why),
        None => Search::Absent,
    })
}

/// Single-block SP factorization: one `deg p0` shared by all stalks.
pub fn sp_search_global(h: &Poly) -> Result<Search<SpCertificate>> {
    check_monic(h)?;
    let ring = h.ring();
    let parts = restrictions(h);
    let mut incomplete = None;
    'degree: for d in 0..=h.deg() {
        let mut found = Vec::new();
        for hx in &parts {
            match sp_search_degree(hx, d)? {
                Search::Found(c) => found.push(c),
                Search::Absent => continue 'degree,
                Search::Incomplete(why) => {
                    incomplete.get_or_insert(why);
                    continue 'degree;
                }
            }
        }
        let idx: Vec<usize> = (0..parts.len()).collect();
        let refs: Vec<&SpCertificate> = found.iter().collect();
        return Ok(Search::Found(glue_sp(ring, &idx, &refs)));
    }
    Ok(match incomplete {
        Some(why) => Search::Incomplete(why),
        None => Search::Absent,
    })
}

/// gSP certificate: per-stalk minimal-degree SP splittings grouped by `deg p0`.
pub fn gsp_search(h: &Poly) -> Result<Search<GspCertificate>> {
    check_monic(h)?;
    let results = restrictions(h)
        .par_iter()
        .map(sp_search_local)
        .collect::<Result<Vec<_>>>()?;
    Ok(combine(results).map(|certs| {
        let keyed = certs.into_iter().map(|c| (c.p0.deg(), c)).collect();
        assemble(h.ring(), keyed, glue_sp)
    }))
}

/// Upgrades an SP certificate to SRC: `f0 = h0`, `f1 = p0` with a Bezout pair.
pub fn sp_to_src(c: &SpCertificate) -> Result<Option<SrcCertificate>> {
    finish_src(c.h0.clone(), c.p0.clone(), Mode::Src)
}
