//! Acceptance suite. Runs every criterion, prints one line each, fails if any fails.
//!
//! Run with `cargo test -p strongclean-cli --test acceptance`.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value as Json};
use strongclean::analysis::{pi_regular_audit, theorem_main_audit, triangular_sweep, AuditLimits};
use strongclean::ring::{dual_numbers_f2_tables, f4_tables};
use strongclean::{Matrix, Poly, Ring, RingDescriptor};
use strongclean_cli::run;

type Outcome = Result<String, String>;

/// Block counts seen so far, as (n, blocks).
type Blocks = Vec<(usize, usize)>;

fn cli(args: &[&str]) -> (i32, Json) {
    let mut full = vec!["strongclean"];
    full.extend_from_slice(args);
    let out = run(full);
    let doc = serde_json::from_str(&out.stdout).unwrap_or_else(|_| json!({"stderr": out.stderr}));
    (out.code, doc)
}

fn verify_doc(doc: &Json) -> Result<(), String> {
    let text = doc.to_string();
    let (code, v) = cli(&["verify", "--certificate", &text]);
    if code == 0 && v["verified"] == json!(true) {
        Ok(())
    } else {
        Err(format!("verify exit {code}: {v}"))
    }
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    check(t < limit, || format!("{what} took {t:?}, limit {limit:?}"))
}

fn zz2() -> String {
    json!({"type":"product","factors":[{"type":"zloc","p":2},{"type":"zloc","p":2}]}).to_string()
}

fn block_counts(doc: &Json, n: usize, seen: &mut Blocks) {
    match doc {
        Json::Object(m) => {
            if let Some(c) = m.get("block_count").and_then(Json::as_u64) {
                seen.push((n, c as usize));
            }
            m.values().for_each(|v| block_counts(v, n, seen));
        }
        Json::Array(v) => v.iter().for_each(|x| block_counts(x, n, seen)),
        _ => {}
    }
}

fn criterion_1(seen: &mut Blocks) -> Outcome {
    let start = Instant::now();
    let ring = zz2();
    let h = "[[2,3],[3,1],[1,1]]";
    let (code, f) = cli(&["factor", "--ring", &ring, "--poly", h]);
    check(code == 0, || format!("factor exit {code}"))?;
    check(f["sr"]["result"] == "absent", || format!("SR result {}", f["sr"]["result"]))?;
    let log: Vec<String> = serde_json::from_value(f["sr"]["transcript"].clone()).unwrap();
    for d in ["d=0", "d=1", "d=2"] {
        check(log.iter().any(|l| l.contains(d)), || format!("SR transcript misses {d}"))?;
    }
    check(log.iter().any(|l| l.contains("not a rational square")), || "no discriminant refutation".into())?;
    check(f["gsrc"]["result"] == "found", || "no gSRC".into())?;
    let ids: Vec<Json> = f["gsrc"]["certificate"]["blocks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|b| b["idempotent"].clone())
        .collect();
    check(ids == vec![json!(["1/1", "0/1"]), json!(["0/1", "1/1"])], || format!("blocks {ids:?}"))?;
    verify_doc(&f)?;
    block_counts(&f, 2, seen);

    let (code, d) = cli(&["decide", "--ring", &ring, "--poly", h, "--companion"]);
    check(code == 0 && d["verdict"] == "Yes" && d["route"] == "gSRC", || format!("decide: {d}"))?;
    check(d["certificate"]["gsrc"]["block_count"] == 2, || "decide block count".into())?;
    verify_doc(&d)?;
    block_counts(&d, 2, seen);
    within(start, Duration::from_secs(1), "criterion 1")?;
    Ok(format!("SR absent over degrees 0..2, gSRC blocks (1,0),(0,1), {:?}", start.elapsed()))
}

fn criterion_2(seen: &mut Blocks) -> Outcome {
    let start = Instant::now();
    let mut total = 0;
    for n in [2u64, 3, 4, 6, 8, 9, 12] {
        let ring = Ring::zmod(n).unwrap();
        let rep = theorem_main_audit(&ring, 2, AuditLimits::default()).map_err(|e| e.to_string())?;
        check(rep.instances == n * n, || format!("Z/{n}: {} instances", rep.instances))?;
        check(rep.passed(), || format!("Z/{n}: {:?}", rep.disagreements))?;
        let positive = rep.routes.get("gsrc_yes").copied().unwrap_or(0);
        let similar = rep.routes.get("similar_certified").copied().unwrap_or(0);
        check(similar == 5 * positive, || format!("Z/{n}: {similar} similar for {positive} positive"))?;
        seen.push((2, rep.max_blocks));
        total += rep.instances;
    }
    within(start, Duration::from_secs(300), "criterion 2")?;
    Ok(format!("{total} polynomials, 0 disagreements, {:?}", start.elapsed()))
}

fn criterion_3(seen: &mut Blocks) -> Outcome {
    let (code, d) = cli(&["decide", "--ring", r#"{"type":"zloc","p":2}"#, "--degree", "2"]);
    check(code == 0 && d["verdict"] == "No", || format!("Z_(2): {d}"))?;
    check(d["refutation"]["a"] == json!(["2/1"]), || format!("witness a = {}", d["refutation"]["a"]))?;
    check(d["refutation"]["h"] == json!([["2/1"], ["-1/1"], ["1/1"]]), || "witness h".into())?;
    verify_doc(&d)?;
    for k in 1..=4 {
        let ring = json!({"type":"zmod","n": 1u64 << k}).to_string();
        let (code, d) = cli(&["decide", "--ring", &ring, "--degree", "2"]);
        check(code == 0 && d["verdict"] == "Yes", || format!("Z/2^{k}: {}", d["verdict"]))?;
        check(d["certificate"]["count"] == json!(1u64 << (2 * k)), || format!("Z/2^{k}: certificate count"))?;
        verify_doc(&d)?;
        block_counts(&d, 2, seen);
    }
    Ok("Z_(2): No with a = 2, h = t^2 - t + 2; Z/2^k (k = 1..4): Yes; all evidence re-verified".into())
}

fn criterion_4(seen: &mut Blocks) -> Outcome {
    for n in [4u64, 6] {
        let ring = Ring::zmod(n).unwrap();
        let rep = pi_regular_audit(&ring, 2, AuditLimits::default()).map_err(|e| e.to_string())?;
        check(rep.passed(), || format!("Z/{n}: {:?}", rep.disagreements))?;
        let gsp = rep.routes.get("gsp_yes").copied().unwrap_or(0);
        let oracle = rep.routes.get("oracle_yes").copied().unwrap_or(0);
        let sc = rep.routes.get("strongly_clean_yes").copied().unwrap_or(0);
        check(gsp == oracle && sc == gsp, || format!("Z/{n}: gsp {gsp} oracle {oracle} strongly clean {sc}"))?;
        seen.push((2, rep.max_blocks));
    }
    let z6 = r#"{"type":"zmod","n":6}"#;
    let (code, g) = cli(&["factor", "--ring", z6, "--poly", "[2,3,1]", "--mode", "gsp"]);
    check(code == 0 && g["gsp"]["result"] == "found", || format!("gSP: {g}"))?;
    let mut degs: Vec<u64> = serde_json::from_value(g["gsp"]["p0_degrees"].clone()).unwrap();
    degs.sort();
    check(degs == vec![0, 1], || format!("p0 degrees {degs:?}"))?;
    verify_doc(&g)?;
    block_counts(&g, 2, seen);
    let (code, s) = cli(&["factor", "--ring", z6, "--poly", "[2,3,1]", "--mode", "sp"]);
    check(code == 0 && s["sp"]["result"] == "absent", || format!("SP: {s}"))?;
    verify_doc(&s)?;
    Ok("Z/4, Z/6: gSP agrees with the power-chain oracle, all positives strongly clean; t^2+3t+2 over Z/6 gSP degrees {1, 0}, SP absent".into())
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    for (n, deg) in [(4u64, 2usize), (2, 3)] {
        let ring = Ring::zmod(n).unwrap();
        let rep = triangular_sweep(&ring, deg, AuditLimits::default()).map_err(|e| e.to_string())?;
        check(rep.instances == 64 && rep.passed(), || format!("T_{deg}(Z/{n}): {rep:?}"))?;
    }
    within(start, Duration::from_secs(30), "criterion 5")?;
    Ok(format!("T_2(Z/4) and T_3(Z/2): 128/128 certified, {:?}", start.elapsed()))
}

fn criterion_6(seen: &Blocks) -> Outcome {
    let bad: Vec<_> = seen.iter().filter(|(n, b)| b > &(n + 1)).collect();
    check(bad.is_empty(), || format!("over the bound: {bad:?}"))?;
    let max = seen.iter().map(|&(_, b)| b).max().unwrap_or(0);
    Ok(format!("{} certificates, at most {max} blocks (n = 2)", seen.len()))
}

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 2..=1000u64 {
        let r = Ring::zmod(n).map_err(|e| e.to_string())?;
        let prim = r.pierce_decomposition().idempotents;
        check(r.is_complete_orthogonal(&prim), || format!("Z/{n}: not complete orthogonal"))?;
        for i in 0..r.stalk_count() {
            check(r.stalk_ring(i).is_local(), || format!("Z/{n}: stalk {i} not local"))?;
        }
        for _ in 0..100 {
            let a = r.random_element(&mut rng);
            let blocks: Vec<_> = prim.iter().enumerate().map(|(i, e)| (e.clone(), r.restrict(&a, i))).collect();
            let glued = r.pierce_glue(&blocks).map_err(|e| e.to_string())?;
            check(glued == a, || format!("Z/{n}: glue mismatch"))?;
        }
    }
    within(start, Duration::from_secs(60), "criterion 7")?;
    Ok(format!("Z/n for n = 2..1000, 100 elements each, {:?}", start.elapsed()))
}

fn criterion_8() -> Outcome {
    let (code, a) = cli(&["z5-example"]);
    check(code == 0 && a["passed"] == true, || format!("exit {code}, failures {}", a["failures"]))?;
    let conv = a["conversions"].as_array().unwrap();
    check(conv.len() == 4 && conv.iter().all(|c| c["verified"] == true), || "conversions".into())?;
    check(a["matrix"]["matches_displayed"] == true, || "matrix entries".into())?;
    check(
        a["matrix"]["entries"] == json!([["5-θ", "-1-2θ"], ["-3-θ", "-2+θ"]]),
        || format!("entries {}", a["matrix"]["entries"]),
    )?;
    check(a["strong_clean_certificate"]["verified"] == true, || "certificate".into())?;
    check(a["strong_clean_certificate"]["projection_verified"] == true, || "projection".into())?;
    check(a["sr_decision"]["transcript"].as_array().is_some_and(|t| !t.is_empty()), || "SR transcript".into())?;
    let disc = a["DISCREPANCY"].as_array().ok_or("no DISCREPANCY section")?;
    let (_, again) = cli(&["z5-example"]);
    check(again == a, || "audit output is not deterministic".into())?;
    Ok(format!(
        "conversions, matrix and certificate verified; chi recomputed as {}, SR exists: {}; {} discrepancies reported",
        a["characteristic_polynomial"]["recomputed"].as_str().unwrap_or("?"),
        a["sr_decision"]["exists"],
        disc.len()
    ))
}

fn fuzz_rings() -> Vec<RingDescriptor> {
    use RingDescriptor::*;
    let (fa, fm) = f4_tables();
    let (da, dm) = dual_numbers_f2_tables();
    let mut v: Vec<RingDescriptor> = [2u64, 3, 4, 5, 6, 8, 9, 12, 16, 27, 30, 36].into_iter().map(|n| Zmod { n }).collect();
    v.extend([2u64, 3, 5, 7].into_iter().map(|p| Zloc { p }));
    v.push(Table { add: fa.clone(), mul: fm.clone() });
    v.push(Table { add: da.clone(), mul: dm.clone() });
    v.push(Product { factors: vec![Zloc { p: 2 }, Zloc { p: 2 }] });
    v.push(Product { factors: vec![Zmod { n: 4 }, Zloc { p: 3 }] });
    v.push(Product { factors: vec![Table { add: da, mul: dm }, Zmod { n: 3 }] });
    v.push(Product { factors: vec![Zloc { p: 5 }, Table { add: fa, mul: fm }] });
    v
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let rings: Vec<(String, Ring)> = fuzz_rings()
        .into_iter()
        .map(|d| (serde_json::to_string(&d).unwrap(), Ring::build(&d).unwrap()))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut emitted = 0;
    let mut unknown = 0;
    const INSTANCES: usize = 10_000;
    for i in 0..INSTANCES {
        let (desc, ring) = &rings[rng.gen_range(0..rings.len())];
        let n = rng.gen_range(1..=3usize);
        let mut coeffs: Vec<_> = (0..n).map(|_| ring.random_element(&mut rng)).collect();
        coeffs.push(ring.one());
        let h = Poly::new(ring, coeffs).to_json().to_string();
        let seed = rng.gen::<u32>().to_string();
        let matrix = {
            let data = (0..n * n).map(|_| ring.random_element(&mut rng)).collect();
            Matrix::new(ring, n, n, data).to_json().to_string()
        };
        let mode = ["sr", "src", "gsrc", "sp", "gsp"][rng.gen_range(0..5)];
        let args: Vec<&str> = match i % 6 {
            0 => vec!["decide", "--ring", desc, "--poly", &h, "--companion"],
            1 => vec!["decide", "--ring", desc, "--poly", &h, "--seed", &seed],
            2 => vec!["decide", "--ring", desc, "--matrix", &matrix, "--budget", "20000"],
            3 => vec!["pi-regular", "--ring", desc, "--matrix", &matrix],
            4 => vec!["pi-regular", "--ring", desc, "--poly", &h, "--seed", &seed],
            _ => vec!["factor", "--ring", desc, "--poly", &h, "--mode", mode],
        };
        let (code, doc) = cli(&args);
        match code {
            0 => {
                verify_doc(&doc).map_err(|e| format!("instance {i} {args:?}: {e}"))?;
                emitted += 1;
            }
            2 => unknown += 1,
            _ => return Err(format!("instance {i} {args:?}: exit {code}: {doc}")),
        }
    }
    Ok(format!(
        "{INSTANCES} instances, {emitted} documents re-verified, {unknown} unknown, exit 3 never taken, {:?}",
        start.elapsed()
    ))
}

fn main() {
    let mut seen = Blocks::new();
    let results: Vec<(usize, &str, Outcome)> = vec![
        (1, "worked example over Z_(2) x Z_(2)", criterion_1(&mut seen)),
        (2, "main equivalence audit", criterion_2(&mut seen)),
        (3, "ring-level negative instance", criterion_3(&mut seen)),
        (4, "pi-regularity equivalence", criterion_4(&mut seen)),
        (5, "triangular matrices", criterion_5()),
    ];
    let mut results = results;
    results.push((6, "block bound", criterion_6(&seen)));
    results.push((7, "Pierce layer", criterion_7()));
    results.push((8, "Z[sqrt(-5)] audit", criterion_8()));
    results.push((9, "certificate soundness fuzz", criterion_9()));
    let mut failed = 0;
    for (n, name, r) in &results {
        match r {
            Ok(msg) => println!("criterion {n} ({name}): PASS - {msg}"),
            Err(msg) => {
                failed += 1;
                println!("criterion {n} ({name}): FAIL - {msg}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
