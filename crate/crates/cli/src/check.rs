//! Re-validation of documents emitted by the other subcommands.

use serde_json::Value as Json;
use strongclean::analysis::monic_at;
use strongclean::cert::{GspCertificate, GsrcCertificate, PiRegularCertificate, SpCertificate, SrcCertificate, StrongCleanCertificate};
use strongclean::factor::{self, Mode};
use strongclean::oracle::strongly_clean_bruteforce;
use strongclean::ring::Stalk;
use strongclean::{verify, Error, Matrix, Poly, Ring, RingDescriptor};

type Result<T> = std::result::Result<T, Error>;

fn fail<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::VerificationFailed(msg.into()))
}

fn get<'a>(j: &'a Json, key: &str) -> Result<&'a Json> {
    j.get(key).ok_or_else(|| Error::Parse(format!("document has no {key:?}")))
}

struct Doc<'a> {
    ring: Ring,
    input: &'a Json,
    doc: &'a Json,
}

impl Doc<'_> {
    fn matrix(&self) -> Result<Matrix> {
        Matrix::from_json(&self.ring, get(self.input, "matrix")?)
    }

    /// The polynomial the certificates are about: the input polynomial, or `chi` of the
    /// input matrix, cross-checked against the reported `h`.
    fn h(&self) -> Result<Poly> {
        let h = match (self.input.get("h"), self.input.get("matrix")) {
            (Some(h), _) => Poly::from_json(&self.ring, h)?,
            (None, Some(_)) => self.matrix()?.char_poly(),
            (None, None) => Poly::from_json(&self.ring, get(self.doc, "h")?)?,
        };
        if let Some(rep) = self.doc.get("h") {
            if Poly::from_json(&self.ring, rep)? != h {
                return fail("reported h differs from the input");
            }
        }
        Ok(h)
    }
}

/// Checks every certificate and refutation found in `doc`; returns what was checked.
pub fn verify_document(doc: &Json) -> Result<Vec<String>> {
    let input = get(doc, "input")?;
    let desc: RingDescriptor =
        serde_json::from_value(get(input, "ring")?.clone()).map_err(|e| Error::Parse(format!("ring: {e}")))?;
    let d = Doc {
        ring: Ring::build(&desc)?,
        input,
        doc,
    };
    let mut checks = Vec::new();

    if let Some(c) = doc.get("certificate") {
        certificate(&d, c, &mut checks)?;
    }
    if let Some(r) = doc.get("refutation") {
        refutation(&d, r, &mut checks)?;
    }
    // factor output
    for (key, kind) in [("sr", "src"), ("src", "src"), ("gsrc", "gsrc"), ("sp", "sp"), ("gsp", "gsp")] {
        let Some(sec) = doc.get(key) else { continue };
        let h = d.h()?;
        if sec.get("result").and_then(Json::as_str) == Some("absent") {
            absent_again(&h, key)?;
            checks.push(format!("{key} search re-run is absent"));
            continue;
        }
        let Some(c) = sec.get("certificate") else { continue };
        match kind {
            "src" => verify::verify_src(&h, &SrcCertificate::from_json(&d.ring, c)?)?,
            "gsrc" => verify::verify_gsrc(&h, &GsrcCertificate::from_json(&d.ring, c)?)?,
            "sp" => verify::verify_sp(&h, &SpCertificate::from_json(&d.ring, c)?)?,
            _ => verify::verify_gsp(&h, &GspCertificate::from_json(&d.ring, c)?)?,
        }
        checks.push(format!("{key} certificate"));
    }
    if let Some(verdict) = doc.get("verdict").and_then(Json::as_str) {
        let has_evidence = doc.get("certificate").is_some() || doc.get("refutation").is_some();
        if verdict != "Unknown" && !has_evidence && doc.get("route").and_then(Json::as_str) != Some("gSRC") {
            return fail(format!("verdict {verdict} without evidence"));
        }
    }
    if checks.is_empty() {
        return fail("document contains nothing to verify");
    }
    Ok(checks)
}

/// An absent factor search is re-run; a `Z_(p)` quadratic SR refutation is also checked
/// directly.
fn absent_again(h: &Poly, key: &str) -> Result<()> {
    let ring = h.ring();
    let absent = match key {
        "sr" | "src" => {
            let mode = if key == "sr" { Mode::Sr } else { Mode::Src };
            if mode == Mode::Sr && ring.is_local() && !ring.is_finite() && h.deg() == 2 {
                verify::verify_no_sr_quadratic(h)?;
            }
            factor::sr_search_global(h, mode)?.0.is_absent()
        }
        "gsrc" => factor::gsrc_search(h, Mode::Src)?.is_absent(),
        "sp" => factor::sp_search_global(h)?.is_absent(),
        _ => factor::gsp_search(h)?.is_absent(),
    };
    if absent {
        Ok(())
    } else {
        fail(format!("{key} search finds a factorization"))
    }
}

fn certificate(d: &Doc, c: &Json, checks: &mut Vec<String>) -> Result<()> {
    let ring = &d.ring;
    if let Some(sc) = c.get("strong_clean") {
        verify::verify_strong_clean(&d.matrix()?, &StrongCleanCertificate::from_json(ring, sc)?)?;
        checks.push("strong clean decomposition".into());
    }
    if let Some(g) = c.get("gsrc") {
        verify::verify_gsrc(&d.h()?, &GsrcCertificate::from_json(ring, g)?)?;
        checks.push("gSRC certificate".into());
    }
    if let Some(g) = c.get("gsp") {
        verify::verify_gsp(&d.h()?, &GspCertificate::from_json(ring, g)?)?;
        checks.push("gSP certificate".into());
    }
    if let Some(p) = c.get("pi_regular") {
        verify::verify_pi_regular(&d.matrix()?, &PiRegularCertificate::from_json(ring, p)?)?;
        checks.push("pi-regular certificate".into());
    }
    if let Some(list) = c.get("polynomials").and_then(Json::as_array) {
        let n = get(d.input, "degree")?
            .as_u64()
            .ok_or_else(|| Error::Parse("degree must be an integer".into()))? as usize;
        let total = ring.order().ok_or(Error::InfiniteRing)?.pow(n as u32);
        if list.len() as u128 != total {
            return fail(format!("{} certificates for {total} polynomials", list.len()));
        }
        for (i, item) in list.iter().enumerate() {
            let h = Poly::from_json(ring, get(item, "h")?)?;
            if h != monic_at(ring, n, i as u128) {
                return fail(format!("polynomial {i} is out of order"));
            }
            verify::verify_gsrc(&h, &GsrcCertificate::from_json(ring, get(item, "gsrc")?)?)?;
        }
        checks.push(format!("gSRC certificates for all {total} monic polynomials of degree {n}"));
    }
    if let Some(stalks) = c.get("jclean_roots").and_then(Json::as_array) {
        if stalks.len() != ring.stalk_count() {
            return fail("one root list per stalk expected");
        }
        for (i, s) in stalks.iter().enumerate() {
            let sr = ring.stalk_ring(i);
            let roots = get(s, "roots")?.as_array().ok_or_else(|| Error::Parse("roots".into()))?;
            for r in roots {
                let a = sr.from_json(get(r, "a")?)?;
                let x = sr.from_json(get(r, "root")?)?;
                if !sr.radical_membership(&a).in_jacobson {
                    return fail(format!("{} is not in the radical", sr.display(&a)));
                }
                let v = sr.add(&sr.sub(&sr.mul(&x, &x), &x), &a);
                if !sr.is_zero(&v) {
                    return fail(format!("{} is not a root for a = {}", sr.display(&x), sr.display(&a)));
                }
            }
            if let Some(n) = sr.order() {
                let radical = sr.elements().filter(|a| sr.radical_membership(a).in_jacobson).count();
                if radical != roots.len() {
                    return fail(format!("stalk {i}: {} radical elements, {} roots listed (order {n})", radical, roots.len()));
                }
            }
        }
        checks.push("roots of t^2 - t + a".into());
    }
    Ok(())
}

fn refutation(d: &Doc, r: &Json, checks: &mut Vec<String>) -> Result<()> {
    let ring = &d.ring;
    let kind = get(r, "kind")?.as_str().unwrap_or_default();
    let stalk = |r: &Json| -> Result<usize> {
        let i = get(r, "stalk")?.as_u64().ok_or_else(|| Error::Parse("stalk".into()))? as usize;
        if i >= ring.stalk_count() {
            return Err(Error::Parse("stalk index out of range".into()));
        }
        Ok(i)
    };
    match kind {
        "no_gsrc" => {
            let i = stalk(r)?;
            let hx = d.h()?.restrict(i);
            if matches!(ring.stalk(i), Stalk::Localized { .. }) && hx.deg() == 2 {
                verify::verify_no_sr_quadratic(&hx)?;
                checks.push(format!("stalk {i}: quadratic has no SR factorization"));
            } else {
                if !factor::src_search_local(&hx, Mode::Src)?.is_absent() {
                    return fail(format!("stalk {i} has an SRC factorization"));
                }
                checks.push(format!("stalk {i}: SRC search re-run is absent"));
            }
            if get(d.input, "matrix").is_ok() {
                let a = d.matrix()?;
                if a != Matrix::companion(&a.char_poly()) && d.doc.get("route").and_then(Json::as_str) == Some("companion_negation") {
                    return fail("companion refutation for a matrix that is not a companion matrix");
                }
            }
        }
        "no_gsp" => {
            let i = stalk(r)?;
            if !factor::sp_search_local(&d.h()?.restrict(i))?.is_absent() {
                return fail(format!("stalk {i} has an SP factorization"));
            }
            checks.push(format!("stalk {i}: SP search re-run is absent"));
        }
        "exhausted" => {
            if strongly_clean_bruteforce(&d.matrix()?, u128::MAX)?.is_some() {
                return fail("brute force finds a strong clean decomposition");
            }
            checks.push("brute force re-run finds no decomposition".into());
        }
        "quadratic_witness" => {
            let i = stalk(r)?;
            let a = ring.from_json(get(r, "a")?)?;
            let h = Poly::from_json(ring, get(r, "h")?)?;
            if !ring.radical_membership(&a).in_jacobson {
                return fail("witness a is not in the radical");
            }
            if h != Poly::new(ring, vec![a.clone(), ring.from_int(-1), ring.one()]) {
                return fail("h is not t^2 - t + a");
            }
            let hx = h.restrict(i);
            let sr = ring.stalk_ring(i);
            match ring.stalk(i) {
                Stalk::Localized { .. } => verify::verify_no_sr_quadratic(&hx)?,
                _ => {
                    if sr.elements().any(|x| sr.is_zero(&hx.eval(&x))) {
                        return fail("t^2 - t + a has a root");
                    }
                }
            }
            checks.push(format!("stalk {i}: t^2 - t + a has no root and no SR factorization"));
        }
        other => return Err(Error::Parse(format!("unknown refutation kind {other:?}"))),
    }
    Ok(())
}
