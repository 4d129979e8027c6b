//! Command-line front end. [`run`] takes the argument list and returns the exit code with
//! everything that would be written to stdout and stderr, so tests can drive it in-process.
//!
//! Exit codes: 0 decided, 1 usage or input error, 2 unknown or incomplete, 3 a
//! certificate failed its re-check.

use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value as Json};
use strongclean::analysis::{self, AuditLimits, Decision, Verdict};
use strongclean::factor::{self, Mode, Search};
use strongclean::{quad, verify, Error, Matrix, Poly, Ring, RingDescriptor};

mod check;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "strongclean", version, about = "Strong cleanness and strong pi-regularity of matrices over commutative rings")]
pub struct Cli {
    /// Indented output instead of one line.
    #[arg(long, global = true)]
    pretty: bool,
    /// One-line JSON output (the default).
    #[arg(long, global = true, conflicts_with = "pretty")]
    json: bool,
    /// Add wall_time_ms to the output. Makes the output run-dependent.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Stalks, idempotents and classification of a ring; optionally one element.
    Ring {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        element: Option<String>,
    },
    /// Run a factorization search on a monic polynomial.
    Factor {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        poly: String,
        #[arg(long, value_enum, default_value_t = FactorMode::Gsrc)]
        mode: FactorMode,
    },
    /// Decide strong cleanness of a matrix, or of all n x n matrices with --degree.
    Decide(MatrixArgs),
    /// Decide strong pi-regularity of a matrix.
    PiRegular(MatrixArgs),
    /// Exhaustive audit over all monic polynomials of a degree.
    Audit {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        degree: usize,
        #[arg(long, value_enum, default_value_t = AuditKind::Theorem)]
        kind: AuditKind,
        #[arg(long, default_value_t = 5)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Brute-force candidate budget per matrix.
        #[arg(long, default_value_t = 1_000_000)]
        budget: u128,
    },
    /// Certify every upper-triangular matrix of a size.
    Triangular {
        #[arg(long)]
        ring: String,
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u128,
    },
    /// Roots of t^2 - t + a for radical elements a.
    Jclean {
        #[arg(long)]
        ring: String,
    },
    /// Audit of the endomorphism [a, b] -> [a + b, 2b] over Z[sqrt(-5)].
    Z5Example,
    /// Re-check every certificate and refutation in a document emitted by this tool.
    Verify {
        /// JSON document or @file.
        #[arg(long)]
        certificate: String,
    },
}

#[derive(Args, Debug)]
struct MatrixArgs {
    #[arg(long)]
    ring: String,
    /// Rows of element JSON, or @file.
    #[arg(long, conflicts_with = "poly")]
    matrix: Option<String>,
    /// Coefficients, constant term first.
    #[arg(long)]
    poly: Option<String>,
    /// Use the companion matrix of --poly (the default when --seed is absent).
    #[arg(long, requires = "poly")]
    companion: bool,
    /// Use a seeded random matrix similar to the companion matrix of --poly.
    #[arg(long, requires = "poly", conflicts_with = "companion")]
    seed: Option<u64>,
    /// Ring-level question for n x n matrices (decide only).
    #[arg(long, conflicts_with_all = ["matrix", "poly"])]
    degree: Option<usize>,
    #[arg(long, default_value_t = 1_000_000)]
    budget: u128,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FactorMode {
    Sr,
    Src,
    Gsrc,
    Sp,
    Gsp,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum AuditKind {
    Theorem,
    PiRegular,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    code: i32,
    doc: Json,
}

fn ok(doc: Json) -> Report {
    Report { code: EXIT_OK, doc }
}

/// Reads `@file` indirection.
fn load(arg: &str) -> Result<String, Error> {
    match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

fn parse_json(arg: &str, what: &str) -> Result<Json, Error> {
    serde_json::from_str(&load(arg)?).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

fn ring_arg(arg: &str) -> Result<Ring, Error> {
    Ring::build(&RingDescriptor::parse(&load(arg)?)?)
}

fn descriptor_json(ring: &Ring) -> Json {
    serde_json::to_value(ring.descriptor()).expect("descriptor serializes")
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::Yes | Verdict::No => EXIT_OK,
        Verdict::Unknown => EXIT_UNKNOWN,
    }
}

/// Runs the tool on `args` (including the program name).
pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Output {
                    code: EXIT_OK,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Output {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                },
            };
        }
    };
    let start = Instant::now();
    match dispatch(&cli.command) {
        Ok(mut r) => {
            if cli.timing {
                r.doc["wall_time_ms"] = json!(start.elapsed().as_millis() as u64);
            }
            let text = if cli.pretty {
                serde_json::to_string_pretty(&r.doc)
            } else {
                serde_json::to_string(&r.doc)
            }
            .expect("JSON serializes");
            Output {
                code: r.code,
                stdout: text + "\n",
                stderr: String::new(),
            }
        }
        Err(e) => {
            let code = match e {
                Error::VerificationFailed(_) => EXIT_VERIFY,
                _ => EXIT_USAGE,
            };
            let doc = json!({"error": e.to_string()});
            Output {
                code,
                stdout: String::new(),
                stderr: format!("{doc}\n"),
            }
        }
    }
}

fn dispatch(cmd: &Command) -> Result<Report, Error> {
    match cmd {
        Command::Ring { ring, element } => ring_cmd(&ring_arg(ring)?, element.as_deref()),
        Command::Factor { ring, poly, mode } => {
            let ring = ring_arg(ring)?;
            let h = Poly::from_json(&ring, &parse_json(poly, "polynomial")?)?;
            factor_cmd(&h, *mode)
        }
        Command::Decide(m) => decide_cmd(m, false),
        Command::PiRegular(m) => decide_cmd(m, true),
        Command::Audit {
            ring,
            degree,
            kind,
            samples,
            seed,
            budget,
        } => {
            let ring = ring_arg(ring)?;
            let limits = AuditLimits {
                brute_force: *budget,
                samples: *samples,
                seed: *seed,
                ..AuditLimits::default()
            };
            let report = match kind {
                AuditKind::Theorem => analysis::theorem_main_audit(&ring, *degree, limits)?,
                AuditKind::PiRegular => analysis::pi_regular_audit(&ring, *degree, limits)?,
            };
            let code = if report.passed() { EXIT_OK } else { EXIT_VERIFY };
            Ok(Report {
                code,
                doc: report.to_json(false),
            })
        }
        Command::Triangular { ring, degree, budget } => {
            let ring = ring_arg(ring)?;
            let limits = AuditLimits {
                brute_force: *budget,
                ..AuditLimits::default()
            };
            let report = analysis::triangular_sweep(&ring, *degree, limits)?;
            let code = if report.passed() { EXIT_OK } else { EXIT_VERIFY };
            Ok(Report {
                code,
                doc: report.to_json(false),
            })
        }
        Command::Jclean { ring } => {
            let ring = ring_arg(ring)?;
            let d = analysis::jclean_quadratic_criterion(&ring)?;
            Ok(decision_report(&ring, &d, json!({"ring": descriptor_json(&ring)}), "jclean"))
        }
        Command::Z5Example => {
            let doc = quad::z5_audit()?;
            let code = if doc["passed"] == json!(true) { EXIT_OK } else { EXIT_VERIFY };
            Ok(Report { code, doc })
        }
        Command::Verify { certificate } => {
            let doc = parse_json(certificate, "certificate document")?;
            let checks = check::verify_document(&doc)?;
            Ok(ok(json!({"verified": true, "checks": checks})))
        }
    }
}

fn decision_report(ring: &Ring, d: &Decision, input: Json, command: &str) -> Report {
    let mut doc = d.to_json(ring);
    doc["command"] = json!(command);
    doc["input"] = input;
    doc["max_blocks"] = json!(d.max_blocks());
    Report {
        code: verdict_code(d.verdict),
        doc,
    }
}

fn ring_cmd(ring: &Ring, element: Option<&str>) -> Result<Report, Error> {
    let stalks: Vec<Json> = ring
        .stalks()
        .iter()
        .enumerate()
        .map(|(i, s)| json!({"index": i, "name": s.name(), "finite": s.is_finite()}))
        .collect();
    let primitive: Vec<Json> = ring.pierce_decomposition().idempotents.iter().map(|e| ring.global_json(e)).collect();
    let class = ring.classify();
    let mut doc = json!({
        "command": "ring",
        "input": {"ring": descriptor_json(ring)},
        "name": ring.name(),
        "order": ring.order().map(|o| o.to_string()),
        "stalks": stalks,
        "primitive_idempotents": primitive,
        "idempotent_count": 1u64 << ring.stalk_count(),
        "classification": {"is_local": class.is_local, "is_clean": class.is_clean, "is_j_clean": class.is_j_clean},
    });
    if ring.stalk_count() <= 10 {
        doc["idempotents"] = Json::Array(ring.idempotents().iter().map(|e| ring.global_json(e)).collect());
    }
    if let Some(arg) = element {
        let a = ring.from_json(&parse_json(arg, "element")?)?;
        let rad = ring.radical_membership(&a);
        let mut info = json!({
            "value": ring.to_json(&a),
            "global": ring.global_json(&a),
            "is_unit": ring.is_unit(&a),
            "inverse": ring.inverse(&a).map(|x| ring.to_json(&x)),
            "in_jacobson": rad.in_jacobson,
            "in_nil": rad.in_nil,
        });
        if let Some((e, u)) = ring.strongly_clean_element(&a) {
            info["strongly_clean"] = json!({"e": ring.to_json(&e), "u": ring.to_json(&u)});
        }
        doc["element"] = info;
    }
    Ok(ok(doc))
}

fn search_result<T>(s: &Search<T>) -> &'static str {
    match s {
        Search::Found(_) => "found",
        Search::Absent => "absent",
        Search::Incomplete(_) => "incomplete",
    }
}

fn factor_cmd(h: &Poly, mode: FactorMode) -> Result<Report, Error> {
    let ring = h.ring();
    let mut doc = json!({
        "command": "factor",
        "input": {"ring": descriptor_json(ring), "h": h.to_json()},
    });
    let mut incomplete = false;
    let mut sr_section = |doc: &mut Json, mode: Mode, key: &str| -> Result<(), Error> {
        let (s, log) = factor::sr_search_global(h, mode)?;
        let mut j = json!({"result": search_result(&s), "transcript": log});
        if let Search::Found(c) = &s {
            verify::verify_src(h, c)?;
            j["certificate"] = c.to_json();
        }
        if let Search::Incomplete(why) = &s {
            j["reason"] = json!(why);
            incomplete = true;
        }
        doc[key] = j;
        Ok(())
    };
    match mode {
        FactorMode::Sr => sr_section(&mut doc, Mode::Sr, "sr")?,
        FactorMode::Src => sr_section(&mut doc, Mode::Src, "src")?,
        FactorMode::Gsrc => {
            sr_section(&mut doc, Mode::Sr, "sr")?;
            let s = factor::gsrc_search(h, Mode::Src)?;
            let mut log = Vec::new();
            for i in 0..ring.stalk_count() {
                let mut local = Vec::new();
                factor::src_search_local_traced(&h.restrict(i), Mode::Src, &mut local)?;
                log.extend(local.into_iter().map(|l| format!("stalk {i} ({}): {l}", ring.stalk(i).name())));
            }
            let mut j = json!({"result": search_result(&s), "transcript": log});
            match &s {
                Search::Found(g) => {
                    verify::verify_gsrc(h, g)?;
                    j["certificate"] = g.to_json(ring);
                }
                Search::Incomplete(why) => {
                    j["reason"] = json!(why);
                    incomplete = true;
                }
                Search::Absent => {}
            }
            doc["gsrc"] = j;
        }
        FactorMode::Sp => {
            let s = factor::sp_search_global(h)?;
            let mut j = json!({"result": search_result(&s)});
            match &s {
                Search::Found(c) => {
                    verify::verify_sp(h, c)?;
                    j["certificate"] = c.to_json();
                }
                Search::Incomplete(why) => {
                    j["reason"] = json!(why);
                    incomplete = true;
                }
                Search::Absent => {}
            }
            doc["sp"] = j;
        }
        FactorMode::Gsp => {
            let s = factor::gsp_search(h)?;
            let mut j = json!({"result": search_result(&s)});
            match &s {
                Search::Found(g) => {
                    verify::verify_gsp(h, g)?;
                    j["certificate"] = g.to_json(ring);
                    let degrees: Vec<usize> = g.blocks.iter().map(|b| b.cert.p0.deg()).collect();
                    j["p0_degrees"] = json!(degrees);
                }
                Search::Incomplete(why) => {
                    j["reason"] = json!(why);
                    incomplete = true;
                }
                Search::Absent => {}
            }
            doc["gsp"] = j;
        }
    }
    Ok(Report {
        code: if incomplete { EXIT_UNKNOWN } else { EXIT_OK },
        doc,
    })
}

fn decide_cmd(m: &MatrixArgs, pi_regular: bool) -> Result<Report, Error> {
    let ring = ring_arg(&m.ring)?;
    let command = if pi_regular { "pi-regular" } else { "decide" };
    if let Some(n) = m.degree {
        if pi_regular {
            return Err(Error::InvalidInput("--degree is only available for decide".into()));
        }
        let d = analysis::decide_ring_strongly_clean(&ring, n, m.budget)?;
        let input = json!({"ring": descriptor_json(&ring), "degree": n});
        return Ok(decision_report(&ring, &d, input, command));
    }
    let a = match (&m.matrix, &m.poly) {
        (Some(mat), _) => Matrix::from_json(&ring, &parse_json(mat, "matrix")?)?,
        (None, Some(p)) => {
            let h = Poly::from_json(&ring, &parse_json(p, "polynomial")?)?;
            if !h.is_monic() || h.deg() == 0 {
                return Err(Error::InvalidInput("polynomial must be monic of positive degree".into()));
            }
            match m.seed {
                Some(seed) => Matrix::random_with_charpoly(&h, seed),
                None => Matrix::companion(&h),
            }
        }
        (None, None) => return Err(Error::InvalidInput("one of --matrix, --poly or --degree is required".into())),
    };
    let d = if pi_regular {
        analysis::decide_pi_regular(&a)?
    } else {
        analysis::decide_strongly_clean(&a, m.budget)?
    };
    let input = json!({"ring": descriptor_json(&ring), "matrix": a.to_json()});
    Ok(decision_report(&ring, &d, input, command))
}
