//! Exhaustive enumeration, up to affine equivalence, of range-sum-p value
//! tables of a target degree.
//!
//! The search space is value tables, not coefficient vectors: range sum p
//! is a linear constraint on values, so candidates are generated as
//! (support subset, composition of p into positive parts). Degree testing
//! works highest-coefficient-first through the power-sum relations
//! a_n = -sum_x v[x] x^{p-1-n} (mod p), so most candidates die on the
//! first nonzero high coefficient.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::fp::PrimeModulus;
use crate::poly::ValueTable;
use crate::profile::{decompose, RootValueProfile};
use crate::Error;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchSpec {
    pub p: u64,
    pub degree_min: usize,
    pub degree_max: usize,
    pub max_support: usize,
    pub canonicalize: bool,
    /// Candidate cap; enumeration past it truncates the stream.
    pub budget: Option<u64>,
}

impl SearchSpec {
    /// Single-degree spec with the default support cap: (p+3)/2 when the
    /// target is (p+1)/2 (any solution has at least (p-3)/2 roots), else p.
    pub fn single_degree(p: PrimeModulus, degree: usize) -> Self {
        let pv = p.get();
        let max_support = if degree as u64 == (pv + 1) / 2 {
            ((pv + 3) / 2) as usize
        } else {
            pv as usize
        };
        SearchSpec {
            p: pv,
            degree_min: degree,
            degree_max: degree,
            max_support,
            canonicalize: true,
            budget: None,
        }
    }

    pub fn validate(&self) -> Result<PrimeModulus, Error> {
        let p = PrimeModulus::new(self.p)?;
        if self.max_support == 0 || self.max_support > self.p as usize {
            return Err(Error::Usage(format!(
                "max_support {} out of range 1..={}",
                self.max_support, self.p
            )));
        }
        if self.degree_max > (self.p - 1) as usize || self.degree_min > self.degree_max {
            return Err(Error::Usage(format!(
                "degree range {}..={} invalid for p = {}",
                self.degree_min, self.degree_max, self.p
            )));
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OrbitEntry {
    /// Canonical (lexicographically least) value table of the orbit.
    pub table: Vec<u64>,
    pub degree: usize,
    pub root_count: usize,
    pub k: Vec<u64>,
    /// Interpolated polynomial of the canonical table, rendered.
    pub sample: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchResult {
    pub spec: SearchSpec,
    pub orbits: Vec<OrbitEntry>,
    pub candidates: u64,
    pub degree_matched: u64,
    pub exhaustive: bool,
}

/// Precomputed x^e mod p for all x and 0 <= e <= p-1 (0^0 = 1).
pub struct PowTable {
    p: u64,
    pows: Vec<u64>,
}

impl PowTable {
    pub fn new(p: PrimeModulus) -> Self {
        let pv = p.get();
        let n = pv as usize;
        let mut pows = vec![0u64; n * n];
        for x in 0..n {
            pows[x * n] = 1;
            for e in 1..n {
                pows[x * n + e] = pows[x * n + e - 1] * x as u64 % pv;
            }
        }
        PowTable { p: pv, pows }
    }

    #[inline]
    pub fn get(&self, x: u64, e: usize) -> u64 {
        self.pows[x as usize * self.p as usize + e]
    }
}

/// Degree of the function given by (support, values), via power sums,
/// scanning from the top coefficient down. Returns None for a table that
/// is identically zero (cannot arise here: compositions are positive).
pub fn table_degree(support: &[u64], values: &[u64], p: u64, pows: &PowTable) -> Option<usize> {
    for n in (1..p as usize).rev() {
        let e = p as usize - 1 - n;
        let mut acc = 0u64;
        for (&x, &v) in support.iter().zip(values) {
            acc += v * pows.get(x, e);
        }
        if acc % p != 0 {
            return Some(n);
        }
    }
    // all coefficients above 0 vanish, so f is the constant f(0)
    match support.iter().position(|&x| x == 0) {
        Some(i) if values[i] != 0 => Some(0),
        _ => None,
    }
}

/// Lexicographically smallest table in the affine orbit
/// { x -> v[(a x + b) mod p] : a != 0 }.
pub fn canonical_orbit_rep(v: &ValueTable) -> ValueTable {
    let p = v.modulus().get();
    let vals = v.values();
    let mut best: Option<Vec<u64>> = None;
    let mut image = vec![0u64; p as usize];
    for a in 1..p {
        for b in 0..p {
            for (x, slot) in image.iter_mut().enumerate() {
                *slot = vals[((a * x as u64 + b) % p) as usize];
            }
            if best.as_ref().map_or(true, |b| image < *b) {
                best = Some(image.clone());
            }
        }
    }
    ValueTable::new(v.modulus(), best.unwrap()).unwrap()
}

/// Enumerate every value table with integer sum p, support size at most
/// `max_support`, and entries at most p-1, in deterministic lexicographic
/// order (by support subset, then composition). Calls `visit` with the
/// support positions and their values; returns the candidate count, or
/// stops early when the budget runs out.
fn enumerate_compositions<F: FnMut(&[u64], &[u64])>(
    p: u64,
    max_support: usize,
    support: &mut Vec<u64>,
    start: u64,
    mut visit: F,
) -> u64 {
    // support subsets in lexicographic order, compositions nested inside
    let mut count = 0;
    let mut values = Vec::new();
    enumerate_supports(p, max_support, support, start, &mut values, &mut count, &mut visit);
    count
}

fn enumerate_supports<F: FnMut(&[u64], &[u64])>(
    p: u64,
    max_support: usize,
    support: &mut Vec<u64>,
    start: u64,
    values: &mut Vec<u64>,
    count: &mut u64,
    visit: &mut F,
) {
    if !support.is_empty() {
        compositions(p, support.len(), p, support, values, count, visit);
    }
    if support.len() == max_support {
        return;
    }
    for x in start..p {
        support.push(x);
        enumerate_supports(p, max_support, support, x + 1, values, count, visit);
        support.pop();
    }
}

fn compositions<F: FnMut(&[u64], &[u64])>(
    remaining: u64,
    parts: usize,
    p: u64,
    support: &[u64],
    values: &mut Vec<u64>,
    count: &mut u64,
    visit: &mut F,
) {
    if parts == 1 {
        if remaining >= 1 && remaining <= p - 1 {
            values.push(remaining);
            *count += 1;
            visit(support, values);
            values.pop();
        }
        return;
    }
    let hi = (remaining - (parts as u64 - 1)).min(p - 1);
    for v in 1..=hi {
        values.push(v);
        compositions(remaining - v, parts - 1, p, support, values, count, visit);
        values.pop();
    }
}

/// Count of candidates an exhaustive enumeration would visit.
pub fn candidate_count(p: u64, max_support: usize) -> u64 {
    let mut support = Vec::new();
    enumerate_compositions(p, max_support, &mut support, 0, |_, _| {})
}

fn table_from(support: &[u64], values: &[u64], p: PrimeModulus) -> ValueTable {
    let mut table = vec![0u64; p.get() as usize];
    for (&x, &v) in support.iter().zip(values) {
        table[x as usize] = v;
    }
    ValueTable::new(p, table).unwrap()
}

struct DegreeHit {
    table: Vec<u64>,
    degree: usize,
}

/// Run the search: enumerate, filter by interpolated degree, deduplicate
/// by canonical orbit representative, and re-verify every survivor by an
/// independent evaluation pass.
pub fn search(spec: &SearchSpec) -> Result<SearchResult, Error> {
    let p = spec.validate()?;
    let pows = PowTable::new(p);
    let pv = p.get();

    let hits: Vec<DegreeHit>;
    let candidates: u64;
    let exhaustive: bool;

    if let Some(budget) = spec.budget {
        // budgeted runs are sequential so truncation is deterministic
        let mut local = Vec::new();
        let mut n = 0u64;
        let mut truncated = false;
        let mut support = Vec::new();
        sequential_enumerate(
            pv,
            spec.max_support,
            &mut support,
            0,
            &mut Vec::new(),
            &mut n,
            budget,
            &mut truncated,
            &mut |sup: &[u64], vals: &[u64]| {
                if let Some(d) = table_degree(sup, vals, pv, &pows) {
                    if d >= spec.degree_min && d <= spec.degree_max {
                        local.push(DegreeHit {
                            table: table_from(sup, vals, p).values().to_vec(),
                            degree: d,
                        });
                    }
                }
            },
        );
        hits = local;
        candidates = n;
        exhaustive = !truncated;
    } else {
        // parallel over top-level support prefixes; merge is a sorted
        // dedup, so the result is schedule-independent
        let prefixes: Vec<Vec<u64>> = (0..pv).map(|x| vec![x]).collect();
        let results: Vec<(Vec<DegreeHit>, u64)> = prefixes
            .into_par_iter()
            .map(|mut prefix| {
                let mut local = Vec::new();
                let start = prefix[0] + 1;
                let n = enumerate_compositions(
                    pv,
                    spec.max_support,
                    &mut prefix,
                    start,
                    |sup, vals| {
                        if let Some(d) = table_degree(sup, vals, pv, &pows) {
                            if d >= spec.degree_min && d <= spec.degree_max {
                                local.push(DegreeHit {
                                    table: table_from(sup, vals, p).values().to_vec(),
                                    degree: d,
                                });
                            }
                        }
                    },
                );
                (local, n)
            })
            .collect();
        let mut all = Vec::new();
        let mut n = 0;
        for (local, c) in results {
            all.extend(local);
            n += c;
        }
        hits = all;
        candidates = n;
        exhaustive = true;
    }

    let degree_matched = hits.len() as u64;
    let mut reps: BTreeMap<Vec<u64>, usize> = BTreeMap::new();
    for hit in &hits {
        let table = ValueTable::new(p, hit.table.clone()).unwrap();
        let key = if spec.canonicalize {
            canonical_orbit_rep(&table).values().to_vec()
        } else {
            hit.table.clone()
        };
        reps.entry(key).or_insert(hit.degree);
    }

    let mut orbits = Vec::with_capacity(reps.len());
    for (table, degree) in reps {
        let v = ValueTable::new(p, table.clone()).unwrap();
        // independent post-hoc recheck: Lagrange interpolation + direct sums
        let f = v.interpolate();
        if v.range_sum() != pv || f.degree() != Some(degree) || f.eval_all() != v {
            return Err(Error::Domain(format!(
                "post-hoc verification failed for table {table:?}"
            )));
        }
        let prof: RootValueProfile = decompose(&v);
        orbits.push(OrbitEntry {
            table,
            degree,
            root_count: prof.roots.len(),
            k: prof.k.clone(),
            sample: render_poly(&f),
        });
    }

    Ok(SearchResult {
        spec: spec.clone(),
        orbits,
        candidates,
        degree_matched,
        exhaustive,
    })
}

#[allow(clippy::too_many_arguments)]
fn sequential_enumerate(
    p: u64,
    max_support: usize,
    support: &mut Vec<u64>,
    start: u64,
    values: &mut Vec<u64>,
    count: &mut u64,
    budget: u64,
    truncated: &mut bool,
    visit: &mut dyn FnMut(&[u64], &[u64]),
) {
    if *truncated {
        return;
    }
    if !support.is_empty() {
        budgeted_compositions(p, support.len(), p, support, values, count, budget, truncated, visit);
    }
    if support.len() == max_support {
        return;
    }
    for x in start..p {
        if *truncated {
            return;
        }
        support.push(x);
        sequential_enumerate(p, max_support, support, x + 1, values, count, budget, truncated, visit);
        support.pop();
    }
}

#[allow(clippy::too_many_arguments)]
fn budgeted_compositions(
    remaining: u64,
    parts: usize,
    p: u64,
    support: &[u64],
    values: &mut Vec<u64>,
    count: &mut u64,
    budget: u64,
    truncated: &mut bool,
    visit: &mut dyn FnMut(&[u64], &[u64]),
) {
    if *truncated {
        return;
    }
    if parts == 1 {
        if remaining >= 1 && remaining <= p - 1 {
            if *count >= budget {
                *truncated = true;
                return;
            }
            values.push(remaining);
            *count += 1;
            visit(support, values);
            values.pop();
        }
        return;
    }
    let hi = (remaining - (parts as u64 - 1)).min(p - 1);
    for v in 1..=hi {
        if *truncated {
            return;
        }
        values.push(v);
        budgeted_compositions(remaining - v, parts - 1, p, support, values, count, budget, truncated, visit);
        values.pop();
    }
}

fn render_poly(f: &crate::poly::FpPoly) -> String {
    let coeffs = f.coeffs();
    if coeffs.is_empty() {
        return "0".to_string();
    }
    let mut terms = Vec::new();
    for (e, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let term = match (e, c) {
            (0, c) => format!("{c}"),
            (1, 1) => "x".to_string(),
            (1, c) => format!("{c}x"),
            (e, 1) => format!("x^{e}"),
            (e, c) => format!("{c}x^{e}"),
        };
        terms.push(term);
    }
    terms.join(" + ")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DegreeStatus {
    Exists,
    NoneFound,
    NotExhausted,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DegreeHistogram {
    pub p: u64,
    pub budget: Option<u64>,
    pub entries: BTreeMap<usize, (DegreeStatus, u64)>,
}

/// Existence status per degree in [(p-1)/2, p-1], with one shared
/// enumeration (no support cap, since the root lemma only applies at
/// degree (p+1)/2).
pub fn degree_histogram(p: PrimeModulus, budget: Option<u64>) -> Result<DegreeHistogram, Error> {
    let pv = p.get();
    let lo = ((pv - 1) / 2) as usize;
    let hi = (pv - 1) as usize;
    let spec = SearchSpec {
        p: pv,
        degree_min: lo,
        degree_max: hi,
        max_support: pv as usize,
        canonicalize: true,
        budget,
    };
    let result = search(&spec)?;
    let mut entries = BTreeMap::new();
    for d in lo..=hi {
        let count = result.orbits.iter().filter(|o| o.degree == d).count() as u64;
        let status = if count > 0 {
            DegreeStatus::Exists
        } else if result.exhaustive {
            DegreeStatus::NoneFound
        } else {
            DegreeStatus::NotExhausted
        };
        entries.insert(d, (status, count));
    }
    Ok(DegreeHistogram {
        p: pv,
        budget,
        entries,
    })
}
