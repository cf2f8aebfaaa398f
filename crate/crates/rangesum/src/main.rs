use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rangesum::charsum;
use rangesum::constructions;
use rangesum::directions;
use rangesum::fp::PrimeModulus;
use rangesum::manifest::{Envelope, RunManifest};
use rangesum::parse::parse_poly;
use rangesum::profile;
use rangesum::search::{self, SearchSpec};
use rangesum::Error;

// exit contract: 0 success, 1 checked mathematical assertion failed,
// 2 usage error, 3 budget exceeded
const EXIT_OK: u8 = 0;
const EXIT_MATH: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "rangesum", version, about = "Range sums of polynomials over prime fields: constructions, searches, and character-sum audits")]
struct Cli {
    /// Worker threads (default: available parallelism; env RANGESUM_THREADS as fallback)
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// PRNG seed for sampled modes
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output file (stdout when omitted)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Parse a polynomial expression and check its degree and range sum
    Verify {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        expect_sum: Option<u64>,
        #[arg(long)]
        expect_degree: Option<usize>,
        /// Fold exponents >= p along x^p = x instead of erroring
        #[arg(long)]
        reduce_frobenius: bool,
    },
    /// Enumerate range-sum-p value tables of a target degree up to affine equivalence
    Search {
        #[arg(long)]
        p: u64,
        /// Single degree D or inclusive range MIN:MAX
        #[arg(long)]
        degree: String,
        #[arg(long)]
        max_support: Option<usize>,
        /// Keep every qualifying table instead of canonical orbit reps
        #[arg(long)]
        no_canon: bool,
        /// Candidate cap; the run truncates (exhaustive=false) past it
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Audit the character-sum bounds over subsets of F_p
    Audit {
        #[arg(long)]
        p: u64,
        /// All 2^p subsets (p <= 19)
        #[arg(long)]
        exhaustive: bool,
        /// Sampled subset count for larger p
        #[arg(long)]
        sample: Option<u64>,
        /// Polya-Vinogradov interval scan over N random betas
        #[arg(long)]
        pv: Option<u64>,
    },
    /// Emit one of the explicit polynomial families, verified
    Construct {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        alpha: Option<u64>,
        #[arg(long)]
        which: Option<u8>,
    },
    /// Direction sets of planar point sets
    Directions {
        #[arg(long)]
        p: u64,
        /// Use the graph of this polynomial
        #[arg(long)]
        poly: Option<String>,
        /// Points file {"p": P, "points": [[x, y], ...]}
        #[arg(long)]
        points: Option<PathBuf>,
        /// Random function-graph scan with this many trials
        #[arg(long)]
        redei: Option<u64>,
    },
    /// Root/value decomposition and residual analysis of a degree-(p+1)/2 instance
    Profile {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        p: u64,
    },
    /// Consolidate output files from other subcommands into one summary
    Report {
        inputs: Vec<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Legendre,
    Small,
    Cubic,
    ScaledCubic,
}

struct Outcome {
    payload: Value,
    exit: u8,
    csv: Option<String>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads.or_else(|| {
        std::env::var("RANGESUM_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(n) = threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("rangesum: failed to set thread count: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    }

    let seed = cli.seed.unwrap_or(0);
    let mut manifest = RunManifest::start(subcommand_name(&cli.cmd), parameters(&cli.cmd), cli.seed);

    let result = run(&cli.cmd, seed, &mut manifest);
    match result {
        Ok(outcome) => {
            manifest.finish();
            let written = if cli.format == Format::Csv {
                match outcome.csv {
                    Some(csv) => write_output(&cli.out, &csv),
                    None => {
                        eprintln!("rangesum: --format csv is not supported for this subcommand");
                        return ExitCode::from(EXIT_USAGE);
                    }
                }
            } else {
                let envelope = Envelope { manifest, payload: outcome.payload };
                let text = serde_json::to_string_pretty(&envelope).unwrap();
                write_output(&cli.out, &text)
            };
            if let Err(e) = written {
                eprintln!("rangesum: {e}");
                return ExitCode::from(EXIT_USAGE);
            }
            ExitCode::from(outcome.exit)
        }
        Err(e) => {
            eprintln!("rangesum: {e}");
            ExitCode::from(match e {
                Error::Budget(_) => EXIT_BUDGET,
                _ => EXIT_USAGE,
            })
        }
    }
}

fn write_output(out: &Option<PathBuf>, text: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, format!("{text}\n")),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn subcommand_name(cmd: &Cmd) -> &'static str {
    match cmd {
        Cmd::Verify { .. } => "verify",
        Cmd::Search { .. } => "search",
        Cmd::Audit { .. } => "audit",
        Cmd::Construct { .. } => "construct",
        Cmd::Directions { .. } => "directions",
        Cmd::Profile { .. } => "profile",
        Cmd::Report { .. } => "report",
    }
}

fn parameters(cmd: &Cmd) -> Value {
    match cmd {
        Cmd::Verify { poly, p, expect_sum, expect_degree, reduce_frobenius } => json!({
            "poly": poly, "p": p, "expect_sum": expect_sum,
            "expect_degree": expect_degree, "reduce_frobenius": reduce_frobenius,
        }),
        Cmd::Search { p, degree, max_support, no_canon, budget } => json!({
            "p": p, "degree": degree, "max_support": max_support,
            "no_canon": no_canon, "budget": budget,
        }),
        Cmd::Audit { p, exhaustive, sample, pv } => json!({
            "p": p, "exhaustive": exhaustive, "sample": sample, "pv": pv,
        }),
        Cmd::Construct { family, p, alpha, which } => json!({
            "family": match family {
                Family::Legendre => "legendre",
                Family::Small => "small",
                Family::Cubic => "cubic",
                Family::ScaledCubic => "scaled-cubic",
            },
            "p": p, "alpha": alpha, "which": which,
        }),
        Cmd::Directions { p, poly, points, redei } => json!({
            "p": p, "poly": poly,
            "points": points.as_ref().map(|p| p.display().to_string()),
            "redei": redei,
        }),
        Cmd::Profile { poly, p } => json!({ "poly": poly, "p": p }),
        Cmd::Report { inputs } => json!({
            "inputs": inputs.iter().map(|p| p.display().to_string()).collect::<Vec<_>>(),
        }),
    }
}

fn run(cmd: &Cmd, seed: u64, manifest: &mut RunManifest) -> Result<Outcome, Error> {
    match cmd {
        Cmd::Verify { poly, p, expect_sum, expect_degree, reduce_frobenius } => {
            let p = PrimeModulus::new(*p)?;
            let f = parse_poly(poly, p, *reduce_frobenius)?;
            let v = f.eval_all();
            let sum = v.range_sum();
            let degree = f.degree();
            let sum_ok = expect_sum.map_or(true, |s| s == sum);
            let degree_ok = expect_degree.map_or(true, |d| Some(d) == degree);
            let self_check = f.range_sum_mod_check();
            let payload = json!({
                "p": p.get(),
                "coeffs": f.coeffs(),
                "degree": degree,
                "range_sum": sum,
                "values": v.values(),
                "sum_ok": sum_ok,
                "degree_ok": degree_ok,
                "leading_coeff_check": self_check,
            });
            let exit = if sum_ok && degree_ok && self_check { EXIT_OK } else { EXIT_MATH };
            Ok(Outcome { payload, exit, csv: None })
        }

        Cmd::Search { p, degree, max_support, no_canon, budget } => {
            let pm = PrimeModulus::new(*p)?;
            let (lo, hi) = parse_degree_range(degree)?;
            let mut spec = SearchSpec::single_degree(pm, hi);
            spec.degree_min = lo;
            spec.degree_max = hi;
            if lo != hi {
                spec.max_support = pm.get() as usize;
            }
            if let Some(ms) = max_support {
                spec.max_support = *ms;
            }
            spec.canonicalize = !no_canon;
            spec.budget = *budget;
            let result = search::search(&spec)?;
            let exit = if result.exhaustive { EXIT_OK } else { EXIT_BUDGET };
            Ok(Outcome {
                payload: serde_json::to_value(&result)?,
                exit,
                csv: None,
            })
        }

        Cmd::Audit { p, exhaustive, sample, pv } => {
            let pm = PrimeModulus::new(*p)?;
            let mut rows: Vec<charsum::CharSumReport> = Vec::new();
            let mut all_hold = true;
            let mut payload = serde_json::Map::new();
            payload.insert("p".into(), json!(p));

            if *exhaustive || sample.is_some() {
                let summary = if *exhaustive {
                    charsum::exhaustive_audit(pm)?
                } else {
                    charsum::sampled_audit(pm, sample.unwrap(), seed)?
                };
                all_hold &= summary.all_alpha_bounds_hold && summary.all_s_bounds_hold;
                rows.push(charsum::CharSumReport {
                    p: *p,
                    subject_id: format!("alpha_max:mask={}", summary.max_alpha_witness),
                    statistic: summary.max_alpha_stat,
                    bound_sq_lhs: (2u128 * summary.max_alpha_stat as u128).pow(2),
                    bound_sq_rhs: (*p as u128).pow(3),
                    holds: summary.all_alpha_bounds_hold,
                    seed: summary.seed,
                });
                rows.push(charsum::CharSumReport {
                    p: *p,
                    subject_id: format!("s_max:mask={}", summary.max_s_witness),
                    statistic: summary.max_s_len,
                    bound_sq_lhs: (summary.max_s_len as u128).pow(3),
                    bound_sq_rhs: (*p as u128).pow(2),
                    holds: summary.all_s_bounds_hold,
                    seed: summary.seed,
                });
                payload.insert("subsets".into(), serde_json::to_value(&summary)?);
            }

            if let Some(trials) = pv {
                let report = charsum::pv_scan(pm, *trials, seed);
                all_hold &= report.holds;
                rows.push(charsum::CharSumReport {
                    p: *p,
                    subject_id: format!("pv_min:beta={}", report.min_count_beta),
                    statistic: report.min_count,
                    bound_sq_lhs: report.min_count as u128,
                    bound_sq_rhs: report.bound_ln.ceil().max(0.0) as u128,
                    holds: report.holds,
                    seed: Some(seed),
                });
                payload.insert("pv".into(), serde_json::to_value(&report)?);
            }

            if rows.is_empty() {
                return Err(Error::Usage(
                    "audit requires --exhaustive, --sample N, or --pv N".into(),
                ));
            }

            let mut csv = String::from("p,subject_id,statistic,bound_sq_lhs,bound_sq_rhs,holds,seed\n");
            for r in &rows {
                csv.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    r.p,
                    r.subject_id,
                    r.statistic,
                    r.bound_sq_lhs,
                    r.bound_sq_rhs,
                    r.holds,
                    r.seed.map_or(String::new(), |s| s.to_string()),
                ));
            }
            payload.insert("rows".into(), serde_json::to_value(&rows)?);
            Ok(Outcome {
                payload: Value::Object(payload),
                exit: if all_hold { EXIT_OK } else { EXIT_MATH },
                csv: Some(csv),
            })
        }

        Cmd::Construct { family, p, alpha, which } => {
            let records = match family {
                Family::Legendre => {
                    let pm = required_p(p)?;
                    constructions::legendre_family(pm)?.to_vec()
                }
                Family::Small => constructions::small_prime_examples()?,
                Family::Cubic => {
                    let pm = required_p(p)?;
                    let alpha = pm.residue(required(alpha, "--alpha")? as i64);
                    vec![constructions::cubic_family(pm, alpha)?]
                }
                Family::ScaledCubic => {
                    let pm = required_p(p)?;
                    let alpha = pm.residue(required(alpha, "--alpha")? as i64);
                    let which = required(which, "--which")?;
                    vec![constructions::scaled_cubic(pm, alpha, which)?]
                }
            };
            let all_verified = records.iter().all(|r| r.verified);
            Ok(Outcome {
                payload: serde_json::to_value(&records)?,
                exit: if all_verified { EXIT_OK } else { EXIT_MATH },
                csv: None,
            })
        }

        Cmd::Directions { p, poly, points, redei } => {
            let pm = PrimeModulus::new(*p)?;
            let mut payload = serde_json::Map::new();
            payload.insert("p".into(), json!(p));
            if let Some(expr) = poly {
                let f = parse_poly(expr, pm, false)?;
                let dirs = directions::directions_of(&directions::graph_of(&f));
                payload.insert("count".into(), json!(dirs.len()));
                payload.insert("directions".into(), serde_json::to_value(&dirs)?);
            } else if let Some(path) = points {
                manifest.add_input(path)?;
                let text = std::fs::read_to_string(path)?;
                let file: PointsFile = serde_json::from_str(&text)?;
                if file.p != pm.get() {
                    return Err(Error::Usage(format!(
                        "points file is for p = {}, not {}",
                        file.p,
                        pm.get()
                    )));
                }
                let set = directions::PlanarSet::new(pm, file.points)?;
                let dirs = directions::directions_of(&set);
                payload.insert("count".into(), json!(dirs.len()));
                payload.insert("directions".into(), serde_json::to_value(&dirs)?);
            } else {
                let report = directions::ls_count_check(pm)?;
                payload.insert("ls_check".into(), serde_json::to_value(&report)?);
            }
            let mut exit = EXIT_OK;
            if let Some(trials) = redei {
                let report = directions::redei_scan(pm, *trials, seed);
                if !report.violations.is_empty() {
                    exit = EXIT_MATH;
                }
                payload.insert("redei".into(), serde_json::to_value(&report)?);
            }
            Ok(Outcome { payload: Value::Object(payload), exit, csv: None })
        }

        Cmd::Profile { poly, p } => {
            let pm = PrimeModulus::new(*p)?;
            let f = parse_poly(poly, pm, false)?;
            let failing = profile::verify_identity_eq2(&f)?;
            let report = profile::profile_report(&f)?;
            let exit = if failing.is_empty() && report.anomalies.is_empty() {
                EXIT_OK
            } else {
                EXIT_MATH
            };
            let mut payload = serde_json::to_value(&report)?;
            payload["identity_failing_gammas"] = json!(failing);
            Ok(Outcome { payload, exit, csv: None })
        }

        Cmd::Report { inputs } => {
            let report = build_report(inputs, manifest)?;
            let csv = report_csv(&report);
            Ok(Outcome {
                payload: serde_json::to_value(&report)?,
                exit: EXIT_OK,
                csv: Some(csv),
            })
        }
    }
}

fn required<T: Copy>(v: &Option<T>, name: &str) -> Result<T, Error> {
    v.ok_or_else(|| Error::Usage(format!("{name} is required for this family")))
}

fn required_p(p: &Option<u64>) -> Result<PrimeModulus, Error> {
    PrimeModulus::new(required(p, "--p")?)
}

fn parse_degree_range(s: &str) -> Result<(usize, usize), Error> {
    let parse_one = |t: &str| {
        t.parse::<usize>()
            .map_err(|_| Error::Usage(format!("bad degree '{t}'")))
    };
    match s.split_once(':') {
        Some((a, b)) => {
            let (lo, hi) = (parse_one(a)?, parse_one(b)?);
            if lo > hi {
                return Err(Error::Usage(format!("empty degree range '{s}'")));
            }
            Ok((lo, hi))
        }
        None => {
            let d = parse_one(s)?;
            Ok((d, d))
        }
    }
}

#[derive(serde::Deserialize)]
struct PointsFile {
    p: u64,
    points: Vec<(u64, u64)>,
}

#[derive(serde::Serialize)]
struct ConsolidatedReport {
    existence: Vec<ExistenceRow>,
    audits: Vec<AuditRow>,
    constructions: Vec<ConstructionRow>,
}

#[derive(serde::Serialize)]
struct ExistenceRow {
    p: u64,
    degree_min: usize,
    degree_max: usize,
    orbits: usize,
    exhaustive: bool,
    status: String,
}

#[derive(serde::Serialize)]
struct AuditRow {
    p: u64,
    subject_id: String,
    statistic: u64,
    holds: bool,
}

#[derive(serde::Serialize)]
struct ConstructionRow {
    name: String,
    p: u64,
    verified: bool,
}

fn build_report(inputs: &[PathBuf], manifest: &mut RunManifest) -> Result<ConsolidatedReport, Error> {
    let mut report = ConsolidatedReport {
        existence: Vec::new(),
        audits: Vec::new(),
        constructions: Vec::new(),
    };
    for path in inputs {
        manifest.add_input(path)?;
        let text = std::fs::read_to_string(path)?;
        let envelope: Envelope<Value> = serde_json::from_str(&text)
            .map_err(|e| Error::Usage(format!("{}: not a rangesum output file: {e}", path.display())))?;
        match envelope.manifest.subcommand.as_str() {
            "search" => {
                let r: search::SearchResult = serde_json::from_value(envelope.payload)
                    .map_err(|e| Error::Usage(format!("{}: bad search payload: {e}", path.display())))?;
                let status = if !r.orbits.is_empty() {
                    "exists"
                } else if r.exhaustive {
                    "none"
                } else {
                    "not-exhausted"
                };
                report.existence.push(ExistenceRow {
                    p: r.spec.p,
                    degree_min: r.spec.degree_min,
                    degree_max: r.spec.degree_max,
                    orbits: r.orbits.len(),
                    exhaustive: r.exhaustive,
                    status: status.to_string(),
                });
            }
            "audit" => {
                let rows = envelope.payload.get("rows").cloned().ok_or_else(|| {
                    Error::Usage(format!("{}: audit payload missing rows", path.display()))
                })?;
                let rows: Vec<charsum::CharSumReport> = serde_json::from_value(rows)
                    .map_err(|e| Error::Usage(format!("{}: bad audit payload: {e}", path.display())))?;
                for r in rows {
                    report.audits.push(AuditRow {
                        p: r.p,
                        subject_id: r.subject_id,
                        statistic: r.statistic,
                        holds: r.holds,
                    });
                }
            }
            "construct" => {
                let recs: Vec<constructions::ConstructionRecord> =
                    serde_json::from_value(envelope.payload).map_err(|e| {
                        Error::Usage(format!("{}: bad construct payload: {e}", path.display()))
                    })?;
                for r in recs {
                    report.constructions.push(ConstructionRow {
                        name: r.name,
                        p: r.p,
                        verified: r.verified,
                    });
                }
            }
            other => {
                return Err(Error::Usage(format!(
                    "{}: cannot consolidate '{other}' outputs",
                    path.display()
                )));
            }
        }
    }
    report.existence.sort_by_key(|r| (r.p, r.degree_min));
    report.audits.sort_by(|a, b| (a.p, &a.subject_id).cmp(&(b.p, &b.subject_id)));
    report.constructions.sort_by(|a, b| (a.p, &a.name).cmp(&(b.p, &b.name)));
    Ok(report)
}

fn report_csv(report: &ConsolidatedReport) -> String {
    let mut out = String::from("section,p,key,value,status\n");
    for r in &report.existence {
        out.push_str(&format!(
            "existence,{},degree {}..={},{} orbits,{}\n",
            r.p, r.degree_min, r.degree_max, r.orbits, r.status
        ));
    }
    for r in &report.audits {
        out.push_str(&format!(
            "audit,{},{},{},{}\n",
            r.p,
            r.subject_id,
            r.statistic,
            if r.holds { "holds" } else { "VIOLATED" }
        ));
    }
    for r in &report.constructions {
        out.push_str(&format!(
            "construction,{},{},,{}\n",
            r.p,
            r.name,
            if r.verified { "verified" } else { "FAILED" }
        ));
    }
    out
}
