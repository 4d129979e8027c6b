//! Theorem-level deciders and exhaustive audits.
//!
//! A [`Decision`] is three-valued. `Yes` always carries a certificate that has already
//! passed the checks in [`crate::verify`]; `No` carries a refutation (an exhausted search,
//! or the failing stalk of the companion matrix's characteristic polynomial).

use std::collections::BTreeMap;
use std::time::Instant;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde_json::{json, Value as Json};

use crate::cert::{GspCertificate, GsrcCertificate, PiRegularCertificate, SpCertificate, SrcCertificate, StrongCleanCertificate};
use crate::error::{Error, Result};
use crate::factor::{comaximality, gsp_search, gsrc_search, src_search_local_traced, Mode, Search, Transcript};
use crate::matrix::Matrix;
use crate::oracle::{pi_regular_oracle, strongly_clean_bruteforce};
use crate::poly::Poly;
use crate::ring::{Element, Ring, RingDescriptor, Stalk};
use crate::verify;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Yes => "Yes",
            Verdict::No => "No",
            Verdict::Unknown => "Unknown",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Route {
    Gsrc,
    Gsp,
    BruteForce,
    JcleanRoot,
    CompanionNegation,
}

impl Route {
    pub fn as_str(self) -> &'static str {
        match self {
            Route::Gsrc => "gSRC",
            Route::Gsp => "gSP",
            Route::BruteForce => "brute_force",
            Route::JcleanRoot => "jclean_root",
            Route::CompanionNegation => "companion_negation",
        }
    }
}

/// What backs a verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    StrongClean {
        gsrc: Option<GsrcCertificate>,
        cert: StrongCleanCertificate,
    },
    PiRegular {
        gsp: GspCertificate,
        cert: PiRegularCertificate,
        oracle_k: Option<u32>,
    },
    /// Some stalk of `h` has no SRC factorization.
    NoGsrc { stalk: usize, transcript: Transcript },
    /// Some stalk of `h` has no SP factorization.
    NoGsp { stalk: usize },
    /// The exhaustive scan found no commuting idempotent.
    Exhausted { candidates: u128 },
    /// One gSRC certificate per monic polynomial of the given degree.
    AllPolynomials { certificates: Vec<(Poly, GsrcCertificate)> },
    /// `h = t^2 - t + a` with `a` in the radical and no root; `stalk` is where it fails.
    QuadraticWitness {
        a: Element,
        h: Poly,
        stalk: usize,
        transcript: Transcript,
    },
    /// For each stalk, every radical element `a` with a root of `t^2 - t + a`.
    Roots { per_stalk: Vec<Vec<(Element, Element)>> },
    Note(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decision {
    pub verdict: Verdict,
    pub route: Route,
    /// Characteristic polynomial or witness polynomial, when one is involved.
    pub h: Option<Poly>,
    pub evidence: Evidence,
    pub reason: Option<String>,
}

impl Decision {
    fn unknown(route: Route, h: Option<Poly>, reason: String) -> Decision {
        Decision {
            verdict: Verdict::Unknown,
            route,
            h,
            evidence: Evidence::Note(reason.clone()),
            reason: Some(reason),
        }
    }

    /// Largest number of idempotent blocks in any certificate this decision carries.
    pub fn max_blocks(&self) -> usize {
        match &self.evidence {
            Evidence::StrongClean { gsrc: Some(g), .. } => g.len(),
            Evidence::PiRegular { gsp, .. } => gsp.len(),
            Evidence::AllPolynomials { certificates } => certificates.iter().map(|(_, g)| g.len()).max().unwrap_or(0),
            _ => 0,
        }
    }

    pub fn to_json(&self, ring: &Ring) -> Json {
        let mut j = json!({
            "verdict": self.verdict.as_str(),
            "route": self.route.as_str(),
        });
        if let Some(h) = &self.h {
            j["h"] = h.to_json();
        }
        if let Some(r) = &self.reason {
            j["reason"] = json!(r);
        }
        match &self.evidence {
            Evidence::StrongClean { gsrc, cert } => {
                let mut c = json!({"strong_clean": cert.to_json()});
                if let Some(g) = gsrc {
                    c["gsrc"] = g.to_json(ring);
                }
                j["certificate"] = c;
            }
            Evidence::PiRegular { gsp, cert, oracle_k } => {
                j["certificate"] = json!({"gsp": gsp.to_json(ring), "pi_regular": cert.to_json()});
                if let Some(k) = oracle_k {
                    j["oracle_k"] = json!(k);
                }
            }
            Evidence::NoGsrc { stalk, transcript } => {
                j["refutation"] = json!({
                    "kind": "no_gsrc",
                    "stalk": stalk,
                    "stalk_ring": ring.stalk(*stalk).name(),
                    "transcript": transcript,
                });
            }
            Evidence::NoGsp { stalk } => {
                j["refutation"] = json!({"kind": "no_gsp", "stalk": stalk, "stalk_ring": ring.stalk(*stalk).name()});
            }
            Evidence::Exhausted { candidates } => {
                j["refutation"] = json!({"kind": "exhausted", "candidates": candidates.to_string()});
            }
            Evidence::AllPolynomials { certificates } => {
                let list: Vec<Json> =
                    certificates.iter().map(|(h, g)| json!({"h": h.to_json(), "gsrc": g.to_json(ring)})).collect();
                j["certificate"] = json!({"polynomials": list, "count": certificates.len()});
            }
            Evidence::QuadraticWitness { a, h, stalk, transcript } => {
                j["refutation"] = json!({
                    "kind": "quadratic_witness",
                    "a": ring.to_json(a),
                    "h": h.to_json(),
                    "stalk": stalk,
                    "stalk_ring": ring.stalk(*stalk).name(),
                    "transcript": transcript,
                });
            }
            Evidence::Roots { per_stalk } => {
                let stalks: Vec<Json> = per_stalk
                    .iter()
                    .enumerate()
                    .map(|(i, roots)| {
                        let sr = ring.stalk_ring(i);
                        let items: Vec<Json> = roots
                            .iter()
                            .map(|(a, r)| json!({"a": sr.to_json(a), "root": sr.to_json(r)}))
                            .collect();
                        json!({"stalk": i, "stalk_ring": ring.stalk(i).name(), "roots": items})
                    })
                    .collect();
                j["certificate"] = json!({"jclean_roots": stalks});
            }
            Evidence::Note(_) => {}
        }
        j
    }
}

// ---- constructions -------------------------------------------------------------

/// `(f - f(0)) / t`.
fn shift_down(f: &Poly) -> Poly {
    Poly::new(f.ring(), f.coeffs().iter().skip(1).cloned().collect())
}

/// Strong clean decomposition of `A` over a local stalk from an SRC factorization of
/// `chi(A) = f0 f1` with `u f0 + v f1 = 1`: `E = u(A) f0(A)` projects onto the part where
/// `f1(A)` vanishes, and `A - E` is inverted separately on both parts.
pub fn strong_clean_from_src(a: &Matrix, c: &SrcCertificate) -> Result<StrongCleanCertificate> {
    let r = a.ring();
    let n = a.n();
    let (u, _) = c
        .bezout
        .as_ref()
        .ok_or_else(|| Error::VerificationFailed("construction needs a Bezout pair".into()))?;
    let p1 = a.eval_poly(u).mul(&a.eval_poly(&c.f0));
    let p0 = Matrix::identity(r, n).sub(&p1);
    let c0inv = r
        .inverse(&c.f0.coeff(0))
        .ok_or_else(|| Error::VerificationFailed("f0(0) is not a unit".into()))?;
    let one = r.one();
    let c1inv = r
        .inverse(&c.f1.eval(&one))
        .ok_or_else(|| Error::VerificationFailed("f1(1) is not a unit".into()))?;
    let w0 = a.eval_poly(&shift_down(&c.f0)).scale(&r.neg(&c0inv));
    let (s1, _) = c.f1.div_rem(&Poly::linear(r, &one))?;
    let w1 = a.eval_poly(&s1).scale(&r.neg(&c1inv));
    let u_inv = w0.mul(&p0).add(&w1.mul(&p1));
    Ok(StrongCleanCertificate {
        e: p1.clone(),
        u: a.sub(&p1),
        u_inv,
    })
}

fn block_of<T>(ring: &Ring, blocks: &crate::cert::Blocks<T>, stalk: usize) -> Result<usize> {
    let one = ring.stalk(stalk).one();
    blocks
        .blocks
        .iter()
        .position(|b| b.idempotent.values()[stalk] == one)
        .ok_or(Error::IncompleteCover)
}

fn restrict_src(c: &SrcCertificate, i: usize) -> SrcCertificate {
    SrcCertificate {
        f0: c.f0.restrict(i),
        f1: c.f1.restrict(i),
        bezout: c.bezout.as_ref().map(|(u, v)| (u.restrict(i), v.restrict(i))),
        kind: c.kind,
    }
}

/// Strong clean certificate for any `A` with `chi(A) = h`, built stalk by stalk from a
/// gSRC certificate of `h` and glued. The result is checked before it is returned.
pub fn strong_clean_from_gsrc(a: &Matrix, g: &GsrcCertificate) -> Result<StrongCleanCertificate> {
    let ring = a.ring();
    let mut es = Vec::new();
    let mut us = Vec::new();
    let mut uinvs = Vec::new();
    for i in 0..ring.stalk_count() {
        let b = block_of(ring, g, i)?;
        let local = strong_clean_from_src(&a.restrict(i), &restrict_src(&g.blocks[b].cert, i))?;
        es.push(local.e);
        us.push(local.u);
        uinvs.push(local.u_inv);
    }
    let cert = StrongCleanCertificate {
        e: Matrix::glue(ring, &es),
        u: Matrix::glue(ring, &us),
        u_inv: Matrix::glue(ring, &uinvs),
    };
    verify::verify_strong_clean(a, &cert)?;
    Ok(cert)
}

/// Pieces of the Fitting splitting over one stalk: `X = W P` and the projection `Q` onto
/// the nilpotent part.
fn pi_regular_local(a: &Matrix, c: &SpCertificate) -> Result<(Matrix, Matrix)> {
    let r = a.ring();
    let n = a.n();
    let (u, v) = comaximality(&c.h0, &c.p0)?
        .ok_or_else(|| Error::VerificationFailed("SP factors are not comaximal".into()))?;
    let p = a.eval_poly(&v).mul(&a.eval_poly(&c.p0));
    let q = a.eval_poly(&u).mul(&a.eval_poly(&c.h0));
    debug_assert_eq!(p.add(&q), Matrix::identity(r, n));
    let c0inv = r
        .inverse(&c.h0.coeff(0))
        .ok_or_else(|| Error::VerificationFailed("h0(0) is not a unit".into()))?;
    let w = a.eval_poly(&shift_down(&c.h0)).scale(&r.neg(&c0inv));
    Ok((w.mul(&p), q))
}

/// Strong pi-regularity certificate from a gSP certificate of `chi(A)`.
pub fn pi_regular_from_gsp(a: &Matrix, g: &GspCertificate) -> Result<PiRegularCertificate> {
    let ring = a.ring();
    let n = a.n();
    let mut xs = Vec::new();
    let mut k = 1u32;
    for i in 0..ring.stalk_count() {
        let b = &g.blocks[block_of(ring, g, i)?].cert;
        let local = SpCertificate {
            h0: b.h0.restrict(i),
            p0: b.p0.restrict(i),
        };
        let ai = a.restrict(i);
        let (x, q) = pi_regular_local(&ai, &local)?;
        let bound = n as u32 * ring.stalk(i).nil_index().unwrap_or(1).max(1) + local.p0.deg() as u32;
        let mut power = ai.clone();
        let mut ki = 1;
        while !power.mul(&q).is_zero() {
            if ki >= bound {
                return Err(Error::VerificationFailed("A is not nilpotent on the p0 part".into()));
            }
            power = power.mul(&ai);
            ki += 1;
        }
        k = k.max(ki);
        xs.push(x);
    }
    let x = Matrix::glue(ring, &xs);
    let cert = PiRegularCertificate { k, x: x.clone(), y: x };
    verify::verify_pi_regular(a, &cert)?;
    Ok(cert)
}

/// Strong clean certificate for an upper-triangular `A`: on each stalk `f0` collects the
/// factors `t - a_ii` with `a_ii` a unit and `f1` the rest.
pub fn triangular_certificate(a: &Matrix) -> Result<StrongCleanCertificate> {
    let ring = a.ring();
    let n = a.n();
    if (0..n).any(|i| (0..i).any(|j| !ring.is_zero(a.get(i, j)))) {
        return Err(Error::InvalidInput("matrix is not upper triangular".into()));
    }
    let mut parts = (Vec::new(), Vec::new(), Vec::new());
    for x in 0..ring.stalk_count() {
        let ax = a.restrict(x);
        let sr = ax.ring().clone();
        let mut f0 = Poly::one(&sr);
        let mut f1 = Poly::one(&sr);
        for i in 0..n {
            let d = ax.get(i, i);
            if sr.is_unit(d) {
                f0 = f0.mul(&Poly::linear(&sr, d));
            } else {
                f1 = f1.mul(&Poly::linear(&sr, d));
            }
        }
        let bezout = comaximality(&f0, &f1)?;
        let c = SrcCertificate {
            f0,
            f1,
            bezout,
            kind: crate::cert::FactorKind::Src,
        };
        let local = strong_clean_from_src(&ax, &c)?;
        parts.0.push(local.e);
        parts.1.push(local.u);
        parts.2.push(local.u_inv);
    }
    let cert = StrongCleanCertificate {
        e: Matrix::glue(ring, &parts.0),
        u: Matrix::glue(ring, &parts.1),
        u_inv: Matrix::glue(ring, &parts.2),
    };
    verify::verify_strong_clean(a, &cert)?;
    Ok(cert)
}

// ---- deciders ------------------------------------------------------------------

fn require_clean(ring: &Ring) -> Result<()> {
    if ring.classify().is_clean {
        Ok(())
    } else {
        Err(Error::NotCleanRing)
    }
}

fn failing_stalk(h: &Poly) -> Result<(usize, Transcript)> {
    for i in 0..h.ring().stalk_count() {
        let mut log = Transcript::new();
        if src_search_local_traced(&h.restrict(i), Mode::Src, &mut log)?.is_absent() {
            return Ok((i, log));
        }
    }
    Err(Error::VerificationFailed("no stalk refutes the gSRC search".into()))
}

fn brute_force_decision(a: &Matrix, h: Poly, budget: u128, why: Option<String>) -> Result<Decision> {
    match strongly_clean_bruteforce(a, budget) {
        Ok(Some(cert)) => {
            verify::verify_strong_clean(a, &cert)?;
            Ok(Decision {
                verdict: Verdict::Yes,
                route: Route::BruteForce,
                h: Some(h),
                evidence: Evidence::StrongClean { gsrc: None, cert },
                reason: why,
            })
        }
        Ok(None) => {
            let size = a.ring().order().unwrap_or(0);
            let candidates = (0..a.n() * a.n()).fold(1u128, |acc, _| acc.saturating_mul(size));
            Ok(Decision {
                verdict: Verdict::No,
                route: Route::BruteForce,
                h: Some(h),
                evidence: Evidence::Exhausted { candidates },
                reason: why,
            })
        }
        Err(e @ (Error::BudgetExceeded { .. } | Error::InfiniteRing)) => Ok(Decision::unknown(
            Route::BruteForce,
            Some(h),
            match why {
                Some(w) => format!("{w}; brute force unavailable: {e}"),
                None => format!("brute force unavailable: {e}"),
            },
        )),
        Err(e) => Err(e),
    }
}

/// Is `A` strongly clean? gSRC first, then the companion negation, then brute force.
pub fn decide_strongly_clean(a: &Matrix, budget: u128) -> Result<Decision> {
    if !a.is_square() {
        return Err(Error::InvalidInput("matrix must be square".into()));
    }
    require_clean(a.ring())?;
    let h = a.char_poly();
    match gsrc_search(&h, Mode::Src)? {
        Search::Found(g) => {
            verify::verify_gsrc(&h, &g)?;
            let cert = strong_clean_from_gsrc(a, &g)?;
            Ok(Decision {
                verdict: Verdict::Yes,
                route: Route::Gsrc,
                h: Some(h),
                evidence: Evidence::StrongClean { gsrc: Some(g), cert },
                reason: None,
            })
        }
        Search::Absent if *a == Matrix::companion(&h) => {
            let (stalk, transcript) = failing_stalk(&h)?;
            Ok(Decision {
                verdict: Verdict::No,
                route: Route::CompanionNegation,
                h: Some(h),
                evidence: Evidence::NoGsrc { stalk, transcript },
                reason: None,
            })
        }
        Search::Absent => brute_force_decision(a, h, budget, Some("no gSRC factorization; A is not a companion matrix".into())),
        Search::Incomplete(why) => brute_force_decision(a, h, budget, Some(format!("gSRC search incomplete: {why}"))),
    }
}

/// Is `A` strongly pi-regular? Decided by the gSP search, cross-checked against the
/// power-chain oracle on finite rings.
pub fn decide_pi_regular(a: &Matrix) -> Result<Decision> {
    if !a.is_square() {
        return Err(Error::InvalidInput("matrix must be square".into()));
    }
    let ring = a.ring();
    require_clean(ring)?;
    let h = a.char_poly();
    let oracle = |a: &Matrix| -> Result<Option<Option<PiRegularCertificate>>> {
        match pi_regular_oracle(a) {
            Ok(c) => Ok(Some(c)),
            Err(Error::InfiniteRing | Error::BudgetExceeded { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    };
    match gsp_search(&h)? {
        Search::Found(g) => {
            verify::verify_gsp(&h, &g)?;
            let cert = pi_regular_from_gsp(a, &g)?;
            let oracle_k = match oracle(a)? {
                Some(Some(c)) => {
                    verify::verify_pi_regular(a, &c)?;
                    Some(c.k)
                }
                Some(None) => return Err(Error::VerificationFailed("gSP found but the power-chain oracle disagrees".into())),
                None => None,
            };
            Ok(Decision {
                verdict: Verdict::Yes,
                route: Route::Gsp,
                h: Some(h),
                evidence: Evidence::PiRegular { gsp: g, cert, oracle_k },
                reason: None,
            })
        }
        Search::Absent => {
            if let Some(Some(_)) = oracle(a)? {
                return Err(Error::VerificationFailed("no gSP but the power-chain oracle found a certificate".into()));
            }
            let stalk = (0..ring.stalk_count())
                .find(|&i| matches!(crate::factor::sp_search_local(&h.restrict(i)), Ok(Search::Absent)))
                .unwrap_or(0);
            Ok(Decision {
                verdict: Verdict::No,
                route: Route::Gsp,
                h: Some(h),
                evidence: Evidence::NoGsp { stalk },
                reason: None,
            })
        }
        Search::Incomplete(why) => Ok(Decision::unknown(Route::Gsp, Some(h), format!("gSP search incomplete: {why}"))),
    }
}

/// Number of monic polynomials of degree `n` over a finite ring, saturating.
fn monic_count(ring: &Ring, n: usize) -> Result<u128> {
    let size = ring.order().ok_or(Error::InfiniteRing)?;
    Ok((0..n).fold(1u128, |acc, _| acc.saturating_mul(size)))
}

/// Monic polynomial number `idx` of degree `n`, with `c_0` the most significant digit.
pub fn monic_at(ring: &Ring, n: usize, mut idx: u128) -> Poly {
    let size = ring.order().expect("finite ring");
    let mut c = vec![ring.zero(); n + 1];
    for i in (0..n).rev() {
        c[i] = ring.element_at(idx % size);
        idx /= size;
    }
    c[n] = ring.one();
    Poly::new(ring, c)
}

/// Is `Mat_n(R)` strongly clean? Finite rings: every monic polynomial of degree `n`
/// must have a gSRC certificate. Rings with a `Z_(p)` stalk and `n = 2`: the quadratic
/// criterion supplies the witness `t^2 - t + p`.
pub fn decide_ring_strongly_clean(ring: &Ring, n: usize, budget: u128) -> Result<Decision> {
    if n == 0 {
        return Err(Error::InvalidInput("degree must be at least 1".into()));
    }
    require_clean(ring)?;
    if !ring.is_finite() {
        return match n {
            1 => Ok(Decision {
                verdict: Verdict::Yes,
                route: Route::Gsrc,
                h: None,
                evidence: Evidence::Note(
                    "on a local stalk one of c, 1 - c is a unit, so t - c splits with d = 0 or d = 1".into(),
                ),
                reason: None,
            }),
            2 => {
                let d = jclean_quadratic_criterion(ring)?;
                Ok(Decision { route: Route::JcleanRoot, ..d })
            }
            _ => Ok(Decision::unknown(
                Route::Gsrc,
                None,
                format!("no complete procedure for n = {n} over a ring with a Z_(p) stalk"),
            )),
        };
    }
    let total = monic_count(ring, n)?;
    if total > budget {
        return Err(Error::BudgetExceeded { needed: total, budget });
    }
    let results: Vec<(Poly, Search<GsrcCertificate>)> = (0..total)
        .into_par_iter()
        .map(|i| {
            let h = monic_at(ring, n, i);
            gsrc_search(&h, Mode::Src).map(|s| (h, s))
        })
        .collect::<Result<_>>()?;
    let mut certificates = Vec::with_capacity(results.len());
    for (h, s) in results {
        match s {
            Search::Found(g) => {
                verify::verify_gsrc(&h, &g)?;
                certificates.push((h, g));
            }
            Search::Absent => {
                let (stalk, transcript) = failing_stalk(&h)?;
                return Ok(Decision {
                    verdict: Verdict::No,
                    route: Route::Gsrc,
                    h: Some(h),
                    evidence: Evidence::NoGsrc { stalk, transcript },
                    reason: None,
                });
            }
            Search::Incomplete(why) => {
                return Ok(Decision::unknown(Route::Gsrc, Some(h), format!("gSRC search incomplete: {why}")));
            }
        }
    }
    Ok(Decision {
        verdict: Verdict::Yes,
        route: Route::Gsrc,
        h: None,
        evidence: Evidence::AllPolynomials { certificates },
        reason: None,
    })
}

/// Does `t^2 - t + a` have a root for every `a` in the Jacobson radical?
///
/// Finite stalks are enumerated. A `Z_(p)` stalk is tested at `a = 0` and `a = p`: the
/// roots of `t^2 - t + a` are `(1 +- s)/2` with `s^2 = 1 - 4a`, and `1 - 4p < 0` is never
/// a rational square, so `a = p` is always a witness. (For `p = 2` every `a = 2u`, `u` a
/// unit, fails the same way since `1 - 4a = 1 - 8u` is `5 mod 8`, not a square of a unit.)
pub fn jclean_quadratic_criterion(ring: &Ring) -> Result<Decision> {
    if !ring.classify().is_j_clean {
        return Err(Error::PreconditionNotJClean);
    }
    let mut per_stalk = Vec::with_capacity(ring.stalk_count());
    for i in 0..ring.stalk_count() {
        let sr = ring.stalk_ring(i);
        let stalk = ring.stalk(i);
        let mut roots = Vec::new();
        let candidates: Vec<Element> = match stalk {
            Stalk::Localized { p } => vec![sr.zero(), sr.from_int(*p as i64)],
            _ => sr.elements().filter(|a| sr.radical_membership(a).in_jacobson).collect(),
        };
        for a in candidates {
            let h = Poly::new(&sr, vec![a.clone(), sr.from_int(-1), sr.one()]);
            let root = match stalk {
                Stalk::Localized { .. } => zloc_quadratic_root(&sr, &a),
                _ => sr.elements().find(|x| sr.is_zero(&h.eval(x))),
            };
            match root {
                Some(x) => roots.push((a, x)),
                None => {
                    let mut transcript = vec![format!(
                        "stalk {i} ({stalk}): t^2 - t + {} has no root",
                        sr.display(&a)
                    )];
                    let disc = sr.sub(&sr.one(), &sr.mul(&sr.from_int(4), &a));
                    if let Stalk::Localized { .. } = stalk {
                        transcript.push(format!("discriminant 1 - 4a = {} is not a rational square", sr.display(&disc)));
                    }
                    src_search_local_traced(&h, Mode::Src, &mut transcript)?;
                    let global_a = ring.lift(i, &a);
                    let global_h = Poly::new(ring, vec![global_a.clone(), ring.from_int(-1), ring.one()]);
                    return Ok(Decision {
                        verdict: Verdict::No,
                        route: Route::JcleanRoot,
                        h: Some(global_h.clone()),
                        evidence: Evidence::QuadraticWitness {
                            a: global_a,
                            h: global_h,
                            stalk: i,
                            transcript,
                        },
                        reason: None,
                    });
                }
            }
        }
        per_stalk.push(roots);
    }
    Ok(Decision {
        verdict: Verdict::Yes,
        route: Route::JcleanRoot,
        h: None,
        evidence: Evidence::Roots { per_stalk },
        reason: None,
    })
}

/// Root of `t^2 - t + a` in `Z_(p)`: `(1 + s)/2` or `(1 - s)/2` with `s^2 = 1 - 4a`.
fn zloc_quadratic_root(sr: &Ring, a: &Element) -> Option<Element> {
    let stalk = sr.stalk(0);
    let disc = sr.sub(&sr.one(), &sr.mul(&sr.from_int(4), a));
    let s = stalk.rational_sqrt(&disc.values()[0])?;
    let s = Element(vec![s]);
    let two = BigInt::from(2);
    for cand in [sr.add(&sr.one(), &s), sr.sub(&sr.one(), &s)] {
        let crate::ring::Value::Frac(q) = &cand.values()[0] else { unreachable!() };
        if let Some(x) = sr.from_ratio(q.numer(), &(q.denom() * &two)) {
            return Some(x);
        }
    }
    None
}

/// A square root `s` of `v` with `s - 1` in the Jacobson radical, when `2` is a unit and
/// `v - 1` is in the radical.
pub fn sqrt_one_plus_radical(ring: &Ring, v: &Element) -> Result<Option<Element>> {
    ring.check(v)?;
    if !ring.is_unit(&ring.from_int(2)) {
        return Err(Error::TwoNotUnit);
    }
    let one = ring.one();
    if !ring.radical_membership(&ring.sub(v, &one)).in_jacobson {
        return Err(Error::NotInOnePlusRadical);
    }
    let mut parts = Vec::with_capacity(ring.stalk_count());
    for i in 0..ring.stalk_count() {
        let sr = ring.stalk_ring(i);
        let vx = ring.restrict(v, i);
        let ok = |s: &Element| sr.mul(s, s) == vx && sr.radical_membership(&sr.sub(s, &sr.one())).in_jacobson;
        let found = match ring.stalk(i) {
            Stalk::Localized { .. } => sr.stalk(0).rational_sqrt(&vx.values()[0]).and_then(|s| {
                let s = Element(vec![s]);
                [s.clone(), sr.neg(&s)].into_iter().find(|c| ok(c))
            }),
            _ => sr.elements().find(|s| ok(s)),
        };
        match found {
            Some(s) => parts.push(s),
            None => return Ok(None),
        }
    }
    Ok(Some(ring.from_stalk_values(&parts)))
}

// ---- audits --------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditReport {
    pub kind: &'static str,
    pub ring: RingDescriptor,
    pub degree: usize,
    pub instances: u64,
    pub agreements: u64,
    pub disagreements: Vec<String>,
    pub routes: BTreeMap<String, u64>,
    pub max_blocks: usize,
    pub wall_time_ms: u128,
}

impl AuditReport {
    fn new(kind: &'static str, ring: &Ring, degree: usize) -> Self {
        AuditReport {
            kind,
            ring: ring.descriptor().clone(),
            degree,
            instances: 0,
            agreements: 0,
            disagreements: Vec::new(),
            routes: BTreeMap::new(),
            max_blocks: 0,
            wall_time_ms: 0,
        }
    }

    fn bump(&mut self, route: &str, by: u64) {
        *self.routes.entry(route.to_string()).or_insert(0) += by;
    }

    pub fn passed(&self) -> bool {
        self.disagreements.is_empty() && self.agreements == self.instances
    }

    /// Stable JSON; the wall time is only included on request so reports stay
    /// byte-identical across runs.
    pub fn to_json(&self, with_timing: bool) -> Json {
        let mut j = json!({
            "audit": self.kind,
            "ring": serde_json::to_value(&self.ring).expect("descriptor serializes"),
            "degree": self.degree,
            "instances": self.instances,
            "agreements": self.agreements,
            "disagreements": self.disagreements,
            "routes": self.routes,
            "max_blocks": self.max_blocks,
            "passed": self.passed(),
        });
        if with_timing {
            j["wall_time_ms"] = json!(self.wall_time_ms as u64);
        }
        j
    }
}

#[derive(Clone, Copy, Debug)]
pub struct AuditLimits {
    /// Largest number of polynomials (or matrices) to enumerate.
    pub instances: u128,
    /// Brute-force candidate budget per matrix.
    pub brute_force: u128,
    /// Similar matrices checked per gSRC-positive polynomial.
    pub samples: usize,
    pub seed: u64,
}

impl Default for AuditLimits {
    fn default() -> Self {
        AuditLimits {
            instances: 1_000_000,
            brute_force: crate::oracle::DEFAULT_BUDGET,
            samples: 5,
            seed: 0,
        }
    }
}

struct Outcome {
    agree: bool,
    note: Option<String>,
    routes: Vec<&'static str>,
    blocks: usize,
}

/// Over every monic `h` of degree `n`: gSRC existence against brute-force strong
/// cleanness of the companion matrix, and for gSRC-positive `h`, certified strong clean
/// decompositions of seeded matrices similar to the companion.
pub fn theorem_main_audit(ring: &Ring, n: usize, limits: AuditLimits) -> Result<AuditReport> {
    let start = Instant::now();
    let total = monic_count(ring, n)?;
    if total > limits.instances {
        return Err(Error::BudgetExceeded {
            needed: total,
            budget: limits.instances,
        });
    }
    let outcomes: Vec<Outcome> = (0..total)
        .into_par_iter()
        .map(|i| -> Result<Outcome> {
            let h = monic_at(ring, n, i);
            let c = Matrix::companion(&h);
            let g = gsrc_search(&h, Mode::Src)?;
            let bf = strongly_clean_bruteforce(&c, limits.brute_force)?;
            let mut out = Outcome {
                agree: true,
                note: None,
                routes: Vec::new(),
                blocks: 0,
            };
            if let Some(cert) = &bf {
                verify::verify_strong_clean(&c, cert)?;
                out.routes.push("brute_force_yes");
            } else {
                out.routes.push("brute_force_no");
            }
            match &g {
                Search::Found(g) => {
                    verify::verify_gsrc(&h, g)?;
                    out.routes.push("gsrc_yes");
                    out.blocks = g.len();
                    for s in 0..limits.samples {
                        let seed = limits.seed.wrapping_add((i as u64).wrapping_mul(1_000_003)).wrapping_add(s as u64);
                        let a = Matrix::random_with_charpoly(&h, seed);
                        match strong_clean_from_gsrc(&a, g) {
                            Ok(_) => out.routes.push("similar_certified"),
                            Err(e) => {
                                out.agree = false;
                                out.note = Some(format!("h = {h}: similar matrix (seed {seed}) not certified: {e}"));
                            }
                        }
                    }
                }
                Search::Absent => out.routes.push("gsrc_no"),
                Search::Incomplete(_) => out.routes.push("gsrc_incomplete"),
            }
            if g.is_found() != bf.is_some() {
                out.agree = false;
                out.note = Some(format!(
                    "h = {h}: gSRC {} but brute force {}",
                    if g.is_found() { "found" } else { "absent" },
                    if bf.is_some() { "found" } else { "absent" }
                ));
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut report = AuditReport::new("theorem_main", ring, n);
    for o in outcomes {
        report.instances += 1;
        report.agreements += o.agree as u64;
        report.disagreements.extend(o.note);
        report.max_blocks = report.max_blocks.max(o.blocks);
        for r in o.routes {
            report.bump(r, 1);
        }
    }
    report.wall_time_ms = start.elapsed().as_millis();
    Ok(report)
}

/// Over every monic `h` of degree `n`: gSP existence against the power-chain oracle on
/// the companion matrix; every pi-regular companion must also be strongly clean.
pub fn pi_regular_audit(ring: &Ring, n: usize, limits: AuditLimits) -> Result<AuditReport> {
    let start = Instant::now();
    let total = monic_count(ring, n)?;
    if total > limits.instances {
        return Err(Error::BudgetExceeded {
            needed: total,
            budget: limits.instances,
        });
    }
    let outcomes: Vec<Outcome> = (0..total)
        .into_par_iter()
        .map(|i| -> Result<Outcome> {
            let h = monic_at(ring, n, i);
            let c = Matrix::companion(&h);
            let g = gsp_search(&h)?;
            let oracle = pi_regular_oracle(&c)?;
            let mut out = Outcome {
                agree: g.is_found() == oracle.is_some(),
                note: None,
                routes: Vec::new(),
                blocks: 0,
            };
            if let Some(o) = &oracle {
                verify::verify_pi_regular(&c, o)?;
                out.routes.push("oracle_yes");
            } else {
                out.routes.push("oracle_no");
            }
            if let Search::Found(g) = &g {
                verify::verify_gsp(&h, g)?;
                pi_regular_from_gsp(&c, g)?;
                out.blocks = g.len();
                out.routes.push("gsp_yes");
                let sc = decide_strongly_clean(&c, limits.brute_force)?;
                if sc.verdict == Verdict::Yes {
                    out.routes.push("strongly_clean_yes");
                } else {
                    out.agree = false;
                    out.note = Some(format!("h = {h}: pi-regular but not certified strongly clean"));
                }
                for b in &g.blocks {
                    let sp = &b.cert;
                    let upgraded = SrcCertificate {
                        f0: sp.h0.clone(),
                        f1: sp.p0.clone(),
                        bezout: None,
                        kind: crate::cert::FactorKind::Sr,
                    };
                    if verify::verify_src_block(&h, &upgraded, &b.idempotent).is_err() {
                        out.agree = false;
                        out.note = Some(format!("h = {h}: SP block is not an SR block"));
                    }
                }
            } else {
                out.routes.push("gsp_no");
            }
            if g.is_found() != oracle.is_some() {
                out.note = Some(format!("h = {h}: gSP and the power-chain oracle disagree"));
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut report = AuditReport::new("pi_regular", ring, n);
    for o in outcomes {
        report.instances += 1;
        report.agreements += o.agree as u64;
        report.disagreements.extend(o.note);
        report.max_blocks = report.max_blocks.max(o.blocks);
        for r in o.routes {
            report.bump(r, 1);
        }
    }
    report.wall_time_ms = start.elapsed().as_millis();
    Ok(report)
}

/// Upper-triangular matrix number `idx`, entries on and above the diagonal in row-major
/// order with the first one most significant.
pub fn triangular_at(ring: &Ring, n: usize, mut idx: u128) -> Matrix {
    let size = ring.order().expect("finite ring");
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let mut m = Matrix::zero(ring, n, n);
    for &(i, j) in slots.iter().rev() {
        m.set(i, j, ring.element_at(idx % size));
        idx /= size;
    }
    m
}

/// Certifies every upper-triangular `n x n` matrix over a finite ring strongly clean,
/// falling back to brute force when the diagonal construction fails.
pub fn triangular_sweep(ring: &Ring, n: usize, limits: AuditLimits) -> Result<AuditReport> {
    let start = Instant::now();
    let size = ring.order().ok_or(Error::InfiniteRing)?;
    let total = (0..n * (n + 1) / 2).fold(1u128, |acc, _| acc.saturating_mul(size));
    if total > limits.instances {
        return Err(Error::BudgetExceeded {
            needed: total,
            budget: limits.instances,
        });
    }
    let outcomes: Vec<Outcome> = (0..total)
        .into_par_iter()
        .map(|i| -> Result<Outcome> {
            let a = triangular_at(ring, n, i);
            let mut out = Outcome {
                agree: true,
                note: None,
                routes: Vec::new(),
                blocks: 0,
            };
            match triangular_certificate(&a) {
                Ok(_) => out.routes.push("diagonal"),
                Err(_) => match strongly_clean_bruteforce(&a, limits.brute_force) {
                    Ok(Some(c)) => {
                        verify::verify_strong_clean(&a, &c)?;
                        out.routes.push("brute_force");
                    }
                    other => {
                        out.agree = false;
                        out.note = Some(format!("{a}: not certified ({other:?})"));
                    }
                },
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut report = AuditReport::new("triangular", ring, n);
    for o in outcomes {
        report.instances += 1;
        report.agreements += o.agree as u64;
        report.disagreements.extend(o.note);
        for r in o.routes {
            report.bump(r, 1);
        }
    }
    report.wall_time_ms = start.elapsed().as_millis();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zz2() -> Ring {
        Ring::product(vec![RingDescriptor::Zloc { p: 2 }, RingDescriptor::Zloc { p: 2 }]).unwrap()
    }

    #[test]
    fn decide_examples() {
        let q2 = Ring::zloc(2).unwrap();
        let c = Matrix::companion(&Poly::from_ints(&q2, &[2, -1, 1]));
        let d = decide_strongly_clean(&c, 1000).unwrap();
        assert_eq!((d.verdict, d.route), (Verdict::No, Route::CompanionNegation));

        let r = zz2();
        let h = Poly::from_json(&r, &serde_json::json!([[2, 3], [3, 1], [1, 1]])).unwrap();
        let d = decide_strongly_clean(&Matrix::companion(&h), 1000).unwrap();
        assert_eq!((d.verdict, d.route, d.max_blocks()), (Verdict::Yes, Route::Gsrc, 2));

        let z6 = Ring::zmod(6).unwrap();
        let d = decide_strongly_clean(&Matrix::zero(&z6, 3, 3), 1000).unwrap();
        let Evidence::StrongClean { cert, .. } = d.evidence else { panic!() };
        assert!(cert.e.is_identity());
        assert_eq!(cert.u, Matrix::identity(&z6, 3).neg());
    }

    #[test]
    fn pi_regular_examples() {
        let z6 = Ring::zmod(6).unwrap();
        let d = decide_pi_regular(&Matrix::companion(&Poly::from_ints(&z6, &[2, 3, 1]))).unwrap();
        assert_eq!(d.verdict, Verdict::Yes);
        let q2 = Ring::zloc(2).unwrap();
        let d = decide_pi_regular(&Matrix::companion(&Poly::from_ints(&q2, &[2, 3, 1]))).unwrap();
        assert_eq!(d.verdict, Verdict::No);
        let n = Matrix::from_ints(&q2, &[&[0, 5], &[0, 0]]);
        let d = decide_pi_regular(&n).unwrap();
        assert_eq!(d.verdict, Verdict::Yes);
    }

    #[test]
    fn ring_level() {
        let d = decide_ring_strongly_clean(&Ring::zloc(2).unwrap(), 2, 1000).unwrap();
        assert_eq!(d.verdict, Verdict::No);
        let Evidence::QuadraticWitness { a, h, .. } = &d.evidence else { panic!() };
        let q2 = Ring::zloc(2).unwrap();
        assert_eq!(*a, q2.from_int(2));
        assert_eq!(*h, Poly::from_ints(&q2, &[2, -1, 1]));
        let d = decide_ring_strongly_clean(&Ring::zmod(8).unwrap(), 2, 1000).unwrap();
        assert_eq!(d.verdict, Verdict::Yes);
        let Evidence::AllPolynomials { certificates } = &d.evidence else { panic!() };
        assert_eq!(certificates.len(), 64);
    }

    #[test]
    fn jclean_examples() {
        let d = jclean_quadratic_criterion(&Ring::zmod(4).unwrap()).unwrap();
        assert_eq!(d.verdict, Verdict::Yes);
        let Evidence::Roots { per_stalk } = &d.evidence else { panic!() };
        let z4 = Ring::zmod(4).unwrap();
        assert_eq!(per_stalk[0], vec![(z4.zero(), z4.zero()), (z4.from_int(2), z4.from_int(2))]);
        let d = jclean_quadratic_criterion(&Ring::zloc(2).unwrap()).unwrap();
        assert_eq!(d.verdict, Verdict::No);
        assert_eq!(jclean_quadratic_criterion(&Ring::zmod(7).unwrap()).unwrap().verdict, Verdict::Yes);
    }

    #[test]
    fn square_roots() {
        let z9 = Ring::zmod(9).unwrap();
        assert_eq!(sqrt_one_plus_radical(&z9, &z9.from_int(4)).unwrap(), Some(z9.from_int(7)));
        let z5 = Ring::zloc(5).unwrap();
        assert_eq!(sqrt_one_plus_radical(&z5, &z5.one()).unwrap(), Some(z5.one()));
        let z4 = Ring::zmod(4).unwrap();
        assert_eq!(sqrt_one_plus_radical(&z4, &z4.from_int(3)).unwrap_err(), Error::TwoNotUnit);
        let z3 = Ring::zloc(3).unwrap();
        let v = z3.from_ratio(&16.into(), &25.into()).unwrap();
        // 16/25 - 1 = -9/25 is in the radical; roots +-4/5, and 4/5 - 1 = -1/5 is not
        assert_eq!(sqrt_one_plus_radical(&z3, &v).unwrap(), Some(z3.from_ratio(&(-4).into(), &5.into()).unwrap()));
    }

    #[test]
    fn small_audits() {
        let r = Ring::zmod(6).unwrap();
        let rep = theorem_main_audit(&r, 2, AuditLimits::default()).unwrap();
        assert_eq!(rep.instances, 36);
        assert!(rep.passed(), "{:?}", rep.disagreements);
        let rep = triangular_sweep(&Ring::zmod(4).unwrap(), 2, AuditLimits::default()).unwrap();
        assert_eq!(rep.instances, 64);
        assert!(rep.passed());
    }
}
