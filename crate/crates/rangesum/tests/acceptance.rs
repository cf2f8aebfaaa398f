//! Acceptance suite: one test per criterion, each printing a single
//! pass/fail line. Run with
//!
//!     cargo test --test acceptance -- --nocapture
//!
//! to see the per-criterion lines regardless of outcome.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rangesum::charsum::{self, AuditSummary};
use rangesum::constructions;
use rangesum::directions;
use rangesum::fp::{primes_in, PrimeModulus};
use rangesum::parse::parse_poly;
use rangesum::poly::ValueTable;
use rangesum::profile;
use rangesum::search::{self, SearchResult, SearchSpec};

/// The four published degree-(p+1)/2 examples, verbatim.
const PUBLISHED_EXAMPLES: [(u64, &str); 4] = [
    (5, "x*(x-1)*(x-2)"),
    (7, "x*(x-1)*(x-2)*(x-3)"),
    (11, "2 x*(x-1)*(x-3)*(x-5)*(x-7)*(x-9)"),
    (13, "x*(2-x)*(4-x)*(6-x)*(7-x)*(8-x)*(10-x)"),
];

fn pm(v: u64) -> PrimeModulus {
    PrimeModulus::new(v).unwrap()
}

fn finish(criterion: &str, started: Instant, ok: bool, detail: &str) {
    let ms = started.elapsed().as_millis();
    if ok {
        println!("criterion {criterion}: PASS [{ms} ms]");
    } else {
        println!("criterion {criterion}: FAIL [{ms} ms] ({detail})");
    }
    assert!(ok, "criterion {criterion}: {detail}");
}

/// Exhaustive degree-(p+1)/2 searches shared by criteria 5, 8, 9, 10.
fn half_degree_searches() -> &'static BTreeMap<u64, SearchResult> {
    static CELL: OnceLock<BTreeMap<u64, SearchResult>> = OnceLock::new();
    CELL.get_or_init(|| {
        [5u64, 7, 11, 13]
            .iter()
            .map(|&p| {
                let spec = SearchSpec::single_degree(pm(p), ((p + 1) / 2) as usize);
                (p, search::search(&spec).unwrap())
            })
            .collect()
    })
}

/// Exhaustive 2^p subset audits shared by criteria 6 and 7.
fn subset_audits() -> &'static BTreeMap<u64, AuditSummary> {
    static CELL: OnceLock<BTreeMap<u64, AuditSummary>> = OnceLock::new();
    CELL.get_or_init(|| {
        [5u64, 7, 11, 13, 17]
            .iter()
            .map(|&p| (p, charsum::exhaustive_audit(pm(p)).unwrap()))
            .collect()
    })
}

#[test]
fn criterion_01_published_examples_exact() {
    let t = Instant::now();
    let mut failures = Vec::new();
    for (p, text) in PUBLISHED_EXAMPLES {
        let f = parse_poly(text, pm(p), false).unwrap();
        let degree = f.degree();
        let sum = f.eval_all().range_sum();
        if degree != Some(((p + 1) / 2) as usize) || sum != p {
            failures.push(format!("p={p}: degree {degree:?}, range sum {sum}"));
        }
    }
    finish(
        "01 published examples have degree (p+1)/2 and range sum p",
        t,
        failures.is_empty(),
        &failures.join("; "),
    );
}

#[test]
fn criterion_02_legendre_family_to_199() {
    let t = Instant::now();
    let mut failures = Vec::new();
    for p in primes_in(5, 199) {
        for rec in constructions::legendre_family(pm(p)).unwrap() {
            if !rec.verified {
                failures.push(rec.name.clone());
            }
        }
    }
    finish(
        "02 Legendre family verified for all primes in [5, 199]",
        t,
        failures.is_empty(),
        &failures.join("; "),
    );
}

#[test]
fn criterion_03_cubic_family_to_199() {
    let t = Instant::now();
    let mut failures = Vec::new();
    for p in primes_in(7, 199).into_iter().filter(|p| p % 3 == 1) {
        let m = pm(p);
        let roots = constructions::cube_roots_of_unity(m);
        if roots.len() != 3 {
            failures.push(format!("p={p}: {} cube roots of unity", roots.len()));
            continue;
        }
        for alpha in roots {
            for rec in [
                constructions::cubic_family(m, alpha).unwrap(),
                constructions::scaled_cubic(m, alpha, 1).unwrap(),
                constructions::scaled_cubic(m, alpha, 2).unwrap(),
            ] {
                let degree_ok =
                    rec.polynomial.degree() == Some((2 * (p - 1) / 3) as usize);
                if !rec.verified || !degree_ok {
                    failures.push(rec.name.clone());
                }
            }
        }
    }
    finish(
        "03 cubic family verified for all p = 1 mod 3 in [7, 199]",
        t,
        failures.is_empty(),
        &failures.join("; "),
    );
}

/// All p^p value tables, filtered to range sum p, grouped as
/// degree -> set of canonical orbit representatives.
fn oracle_orbits(p: u64) -> BTreeMap<usize, BTreeSet<Vec<u64>>> {
    let m = pm(p);
    let n = p as usize;
    let mut table = vec![0u64; n];
    let mut out: BTreeMap<usize, BTreeSet<Vec<u64>>> = BTreeMap::new();
    loop {
        if table.iter().sum::<u64>() == p {
            let v = ValueTable::new(m, table.clone()).unwrap();
            let d = v.interpolate().degree().expect("sum p > 0 is nonzero");
            let rep = search::canonical_orbit_rep(&v).values().to_vec();
            out.entry(d).or_default().insert(rep);
        }
        // odometer over all p^p tables
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            table[i] += 1;
            if table[i] < p {
                break;
            }
            table[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn criterion_04_search_matches_brute_force_oracle() {
    let t = Instant::now();
    let mut failures = Vec::new();
    for p in [5u64, 7] {
        let oracle = oracle_orbits(p);
        for d in 0..p as usize {
            let result =
                search::search(&SearchSpec::single_degree(pm(p), d)).unwrap();
            let got: BTreeSet<Vec<u64>> =
                result.orbits.iter().map(|o| o.table.clone()).collect();
            let want = oracle.get(&d).cloned().unwrap_or_default();
            if got != want {
                failures.push(format!(
                    "p={p} degree {d}: search {} orbits, oracle {}",
                    got.len(),
                    want.len()
                ));
            }
        }
    }
    finish(
        "04 composition search equals the p^p oracle at p = 5, 7",
        t,
        failures.is_empty(),
        &failures.join("; "),
    );
}

#[test]
fn criterion_05_exhaustive_existence_at_half_degree() {
    let t = Instant::now();
    let mut failures = Vec::new();
    for (p, text) in PUBLISHED_EXAMPLES {
        let result = &half_degree_searches()[&p];
        if !result.exhaustive {
            failures.push(format!("p={p}: not exhaustive"));
        }
        if result.orbits.is_empty() {
            failures.push(format!("p={p}: no orbits found"));
        }
        let published = parse_poly(text, pm(p), false).unwrap().eval_all();
        let rep = search::canonical_orbit_rep(&published).values().to_vec();
        if !result.orbits.iter().any(|o| o.table == rep) {
            failures.push(format!(
                "p={p}: published example's orbit absent (its range sum is {})",
                published.range_sum()
            ));
        }
    }
    finish(
        "05 search at degree (p+1)/2 is exhaustive, nonempty, and contains the published orbits",
        t,
        failures.is_empty(),
        &failures.join("; "),
    );
}

#[test]
fn criterion_06_alpha_bound_exhaustive() {
    let t = Instant::now();
    let mut failures = Vec::new();
    for (&p, summary) in subset_audits() {
        if !summary.all_alpha_bounds_hold || summary.subsets_audited != 1 << p {
            failures.push(format!("p={p}"));
        }
    }
    finish(
        "06 (2*alpha_abs_sum)^2 <= p^3 over all 2^p subsets, p in {5,7,11,13,17}",
        t,
        failures.is_empty(),
        &failures.join("; "),
    );
}

#[test]
fn criterion_07_pathological_bound_exhaustive() {
    let t = Instant::now();
    let mut failures = Vec::new();
    for (&p, summary) in subset_audits() {
        if !summary.all_s_bounds_hold {
            failures.push(format!("p={p}"));
        }
    }
    finish(
        "07 |S(A)|^3 <= p^2 over all 2^p subsets, p in {5,7,11,13,17}",
        t,
        failures.is_empty(),
        &failures.join("; "),
    );
}

#[test]
fn criterion_08_multiset_bound_randomized_and_from_solutions() {
    let t = Instant::now();
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for p in primes_in(11, 31) {
        let m = pm(p);
        for i in 0..1000 {
            let ms = charsum::random_multiset(p, &mut rng);
            let mut k: Vec<u64> = ms.iter().map(|&(_, w)| w).collect();
            k.sort_unstable_by(|a, b| b.cmp(a));
            let stat = charsum::beta_abs_sum(&ms, &k, m).unwrap();
            let sum_k_sq: u64 = k.iter().map(|&x| x * x).sum();
            if !charsum::beta_bound_holds(stat, p, sum_k_sq) {
                failures.push(format!("p={p} trial {i}"));
            }
        }
    }
    for (&p, result) in half_degree_searches() {
        let m = pm(p);
        for orbit in &result.orbits {
            let v = ValueTable::new(m, orbit.table.clone()).unwrap();
            let prof = profile::decompose(&v);
            if prof.b_multiset.is_empty() {
                continue;
            }
            let stat = charsum::beta_abs_sum(&prof.b_multiset, &prof.k, m).unwrap();
            if !charsum::beta_bound_holds(stat, p, prof.sum_k_squared()) {
                failures.push(format!("p={p} table {:?}", orbit.table));
            }
        }
    }
    finish(
        "08 beta_abs_sum^2 <= p^2 * sum k_j^2 on 1000 random multisets per prime in [11, 31] and all solution profiles",
        t,
        failures.is_empty(),
        &failures.join("; "),
    );
}

#[test]
fn criterion_09_identity_on_all_solutions() {
    let t = Instant::now();
    let mut failures = Vec::new();
    for (&p, result) in half_degree_searches() {
        let m = pm(p);
        for orbit in &result.orbits {
            let f = ValueTable::new(m, orbit.table.clone()).unwrap().interpolate();
            let failing = profile::verify_identity_eq2(&f).unwrap();
            if !failing.is_empty() {
                failures.push(format!(
                    "p={p} table {:?}: gammas {failing:?}",
                    orbit.table
                ));
            }
        }
    }
    finish(
        "09 character identity holds at every gamma for every solution",
        t,
        failures.is_empty(),
        &failures.join("; "),
    );
}

#[test]
fn criterion_10_residual_classification() {
    let t = Instant::now();
    let mut failures = Vec::new();
    let mut anomalies = 0usize;
    for (&p, result) in half_degree_searches() {
        let m = pm(p);
        for orbit in &result.orbits {
            let f = ValueTable::new(m, orbit.table.clone()).unwrap().interpolate();
            let inst = profile::normalize_instance(&f).unwrap();
            let rf = profile::residual_r(&inst);
            anomalies += profile::classify_r(&rf)
                .iter()
                .filter(|l| matches!(l, profile::ResidualLabel::Anomaly))
                .count();
            for (gamma, &r) in rf.r.iter().enumerate() {
                let in_range = r.unsigned_abs() <= 2 * p;
                let congruent = r.rem_euclid(p as i64) == gamma as i64;
                if !in_range || !congruent {
                    failures.push(format!(
                        "p={p} table {:?} gamma {gamma}: r = {r}",
                        orbit.table
                    ));
                }
            }
            if ![-(p as i64), 0, p as i64].contains(&rf.r[0]) {
                failures.push(format!(
                    "p={p} table {:?}: r(0) = {}",
                    orbit.table, rf.r[0]
                ));
            }
        }
    }
    println!("criterion 10 anomaly count: {anomalies}");
    finish(
        "10 residuals satisfy |r| <= 2p, r == gamma (mod p), r(0) in {-p,0,p}",
        t,
        failures.is_empty(),
        &failures.join("; "),
    );
}

#[test]
fn criterion_11_polya_vinogradov_interval_count() {
    let t = Instant::now();
    let report = charsum::pv_scan(pm(1_000_003), 1000, 0);
    let bound_sane = report.bound_ln > 5592.0 && report.bound_ln < 5593.0;
    let ok = report.holds && (report.min_count as f64) >= report.bound_ln && bound_sane;
    finish(
        "11 interval residue count >= p/80 - (1/2)sqrt(p)ln(p) at p = 1000003 over 1000 seeded betas",
        t,
        ok,
        &format!(
            "min count {} (beta {}) vs bound {:.2}",
            report.min_count, report.min_count_beta, report.bound_ln
        ),
    );
}

#[test]
fn criterion_12_direction_counts() {
    let t = Instant::now();
    let mut failures = Vec::new();
    for p in [5u64, 7, 11, 13] {
        let report = directions::ls_count_check(pm(p)).unwrap();
        if !report.agrees {
            failures.push(format!(
                "p={p}: {} directions vs {}",
                report.computed, report.expected
            ));
        }
    }
    // hand-verified slope set at p = 5
    let f = parse_poly("x^3", pm(5), false).unwrap();
    let d = directions::directions_of(&directions::graph_of(&f));
    if d.slopes != [1, 2, 3, 4] || d.vertical {
        failures.push(format!("p=5 slope set {:?}", d.slopes));
    }
    // exhaustive scan of all 5^5 function graphs
    let mut values = vec![0u64; 5];
    'outer: loop {
        let (count, affine) = directions::scan_one(pm(5), &values);
        if !affine && count < 4 {
            failures.push(format!("non-affine graph {values:?}: {count} directions"));
        }
        let mut i = 0;
        loop {
            if i == 5 {
                break 'outer;
            }
            values[i] += 1;
            if values[i] < 5 {
                break;
            }
            values[i] = 0;
            i += 1;
        }
    }
    finish(
        "12 graph of x^{(p+1)/2} has (p+3)/2 directions; every non-affine p=5 graph has >= 4",
        t,
        failures.is_empty(),
        &failures.join("; "),
    );
}

#[test]
fn criterion_13_budgeted_frontier_run() {
    let t = Instant::now();
    let exe = env!("CARGO_BIN_EXE_rangesum");
    let out = std::process::Command::new(exe)
        .args(["search", "--p", "37", "--degree", "19", "--budget", "2000000"])
        .output()
        .unwrap();
    let mut failures = Vec::new();
    if out.status.code() != Some(3) {
        failures.push(format!("exit code {:?}, expected 3", out.status.code()));
    }
    let envelope: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("search output is JSON");
    let result: SearchResult =
        serde_json::from_value(envelope["payload"].clone()).unwrap();
    if result.exhaustive {
        failures.push("run claims to be exhaustive under budget".into());
    }
    if result.candidates != 2_000_000 {
        failures.push(format!("visited {} candidates", result.candidates));
    }
    // zero false positives: every reported hit re-verified from scratch
    let m = pm(37);
    for orbit in &result.orbits {
        let v = ValueTable::new(m, orbit.table.clone()).unwrap();
        let f = v.interpolate();
        if v.range_sum() != 37 || f.degree() != Some(19) || f.eval_all() != v {
            failures.push(format!("false positive {:?}", orbit.table));
        }
    }
    finish(
        "13 budgeted search --p 37 --degree 19 truncates cleanly with zero false positives",
        t,
        failures.is_empty(),
        &failures.join("; "),
    );
}
