//! Exact verification of the character-sum inequalities: the (1/2)p^{3/2}
//! theorem, the pathological-set lemma, the multiset proposition, and the
//! Polya-Vinogradov interval count.
//!
//! All inequality checks are done in exact integers by squaring or cubing
//! both sides; no floating point enters an accept/reject decision.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::fp::{legendre_u64, LegendreTable, PrimeModulus};
use crate::profile::pv_interval;
use crate::Error;

/// sum over gamma of |sum over alpha in A of (alpha-gamma/p)|, exact.
pub fn alpha_abs_sum(a_set: &[u64], p: PrimeModulus) -> u64 {
    let table = LegendreTable::new(p);
    alpha_abs_sum_with(a_set, p.get(), &table)
}

fn alpha_abs_sum_with(a_set: &[u64], p: u64, table: &LegendreTable) -> u64 {
    (0..p)
        .map(|gamma| inner_sum(a_set, gamma, p, table).unsigned_abs())
        .sum()
}

#[inline]
fn inner_sum(a_set: &[u64], gamma: u64, p: u64, table: &LegendreTable) -> i64 {
    a_set
        .iter()
        .map(|&a| table.get((a + p - gamma) % p) as i64)
        .sum()
}

/// The theorem bound in exact form: (2 * statistic)^2 <= p^3.
pub fn alpha_bound_holds(statistic: u64, p: u64) -> bool {
    let lhs = (2u128 * statistic as u128).pow(2);
    lhs <= (p as u128).pow(3)
}

/// S = { gamma : |inner sum| >= p^{2/3} }, membership decided exactly by
/// |inner|^3 >= p^2.
pub fn pathological_set(a_set: &[u64], p: PrimeModulus) -> Vec<u64> {
    let table = LegendreTable::new(p);
    pathological_set_with(a_set, p.get(), &table)
}

fn pathological_set_with(a_set: &[u64], p: u64, table: &LegendreTable) -> Vec<u64> {
    let p_sq = (p as u128).pow(2);
    (0..p)
        .filter(|&gamma| {
            let s = inner_sum(a_set, gamma, p, table).unsigned_abs() as u128;
            s.pow(3) >= p_sq
        })
        .collect()
}

/// The lemma bound in exact form: |S|^3 <= p^2.
pub fn pathological_bound_holds(s_len: u64, p: u64) -> bool {
    (s_len as u128).pow(3) <= (p as u128).pow(2)
}

/// Multiplicity-weighted sum over gamma of |sum over beta in B|, exact.
///
/// `k` must be the descending multiplicity profile of `b_multiset`.
pub fn beta_abs_sum(b_multiset: &[(u64, u64)], k: &[u64], p: PrimeModulus) -> Result<u64, Error> {
    let mut weights: Vec<u64> = b_multiset.iter().map(|&(_, w)| w).collect();
    weights.sort_unstable_by(|a, b| b.cmp(a));
    if weights != k {
        return Err(Error::Usage(
            "multiplicity profile k does not match the multiset".into(),
        ));
    }
    let table = LegendreTable::new(p);
    let pm = p.get();
    Ok((0..pm)
        .map(|gamma| {
            b_multiset
                .iter()
                .map(|&(b, w)| w as i64 * table.get((b + pm - gamma) % pm) as i64)
                .sum::<i64>()
                .unsigned_abs()
        })
        .sum())
}

/// The proposition bound in exact form: statistic^2 <= p^2 * sum k_j^2.
pub fn beta_bound_holds(statistic: u64, p: u64, sum_k_squared: u64) -> bool {
    (statistic as u128).pow(2) <= (p as u128).pow(2) * sum_k_squared as u128
}

/// Count of gamma in [ceil(9p/20), floor(19p/40)] with (beta-gamma/p) = 1.
///
/// Uses a precomputed square table below 2^20 and Euler's criterion above.
pub fn pv_interval_count(p: PrimeModulus, beta: u64) -> u64 {
    let pm = p.get();
    let (lo, hi) = pv_interval(pm);
    if lo > hi {
        return 0;
    }
    if pm < (1 << 20) {
        let table = LegendreTable::new(p);
        (lo..=hi)
            .filter(|&gamma| table.get((beta + pm - gamma) % pm) == 1)
            .count() as u64
    } else {
        (lo..=hi)
            .filter(|&gamma| legendre_u64((beta + pm - gamma) % pm, pm) == 1)
            .count() as u64
    }
}

/// Lower bound p/80 - (1/2) sqrt(p) log(p). Log base is a convention the
/// source leaves open; both natural log and log2 variants are reported,
/// with natural log the asserted one.
pub fn pv_lower_bound(p: u64, log2: bool) -> f64 {
    let pf = p as f64;
    let log = if log2 { pf.log2() } else { pf.ln() };
    pf / 80.0 - 0.5 * pf.sqrt() * log
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PvReport {
    pub p: u64,
    pub interval: (u64, u64),
    pub betas_checked: u64,
    pub seed: u64,
    pub min_count: u64,
    pub min_count_beta: u64,
    pub bound_ln: f64,
    pub bound_log2: f64,
    /// min_count >= bound with natural log (vacuously true if negative)
    pub holds: bool,
}

/// Scan `trials` seeded-random betas (plus beta = 0) and report the
/// minimum interval count against the Polya-Vinogradov lower bound.
pub fn pv_scan(p: PrimeModulus, trials: u64, seed: u64) -> PvReport {
    let pm = p.get();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let betas: Vec<u64> = std::iter::once(0)
        .chain((0..trials).map(|_| rng.gen_range(0..pm)))
        .collect();
    let (min_count, min_count_beta) = betas
        .par_iter()
        .map(|&beta| (pv_interval_count(p, beta), beta))
        .min()
        .unwrap();
    let bound_ln = pv_lower_bound(pm, false);
    let bound_log2 = pv_lower_bound(pm, true);
    PvReport {
        p: pm,
        interval: pv_interval(pm),
        betas_checked: betas.len() as u64,
        seed,
        min_count,
        min_count_beta,
        bound_ln,
        bound_log2,
        holds: (min_count as f64) >= bound_ln.ceil() || bound_ln < 0.0,
    }
}

/// One audited subject with its exact statistic and squared-comparison
/// bound data.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CharSumReport {
    pub p: u64,
    pub subject_id: String,
    pub statistic: u64,
    pub bound_sq_lhs: u128,
    pub bound_sq_rhs: u128,
    pub holds: bool,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AuditSummary {
    pub p: u64,
    pub subsets_audited: u64,
    pub exhaustive: bool,
    pub seed: Option<u64>,
    pub all_alpha_bounds_hold: bool,
    pub all_s_bounds_hold: bool,
    /// worst cases, for the record
    pub max_alpha_stat: u64,
    pub max_alpha_witness: u64,
    pub max_s_len: u64,
    pub max_s_witness: u64,
}

const EXHAUSTIVE_AUDIT_LIMIT: u64 = 19;

fn subset_members(mask: u64, p: u64) -> Vec<u64> {
    (0..p).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Audit the theorem and lemma bounds over all 2^p subsets of F_p.
///
/// Enumeration is partitioned across workers; the merge is an associative
/// max reduction, so the result is independent of thread count.
pub fn exhaustive_audit(p: PrimeModulus) -> Result<AuditSummary, Error> {
    let pm = p.get();
    if pm > EXHAUSTIVE_AUDIT_LIMIT {
        return Err(Error::Budget(format!(
            "p = {pm} too large for exhaustive subset audit (limit {EXHAUSTIVE_AUDIT_LIMIT}); use sampled mode"
        )));
    }
    let table = LegendreTable::new(p);
    let total = 1u64 << pm;
    let worst = (0..total)
        .into_par_iter()
        .map(|mask| audit_one(mask, pm, &table))
        .reduce(SubsetWorst::default, SubsetWorst::merge);
    Ok(summarize(pm, total, true, None, worst))
}

/// Audit a seeded random sample of subsets (for p beyond the exhaustive
/// limit, still p < 64 so masks fit a word).
pub fn sampled_audit(p: PrimeModulus, samples: u64, seed: u64) -> Result<AuditSummary, Error> {
    let pm = p.get();
    if pm >= 64 {
        return Err(Error::Budget(format!(
            "p = {pm} too large for mask-based sampling"
        )));
    }
    let table = LegendreTable::new(p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let masks: Vec<u64> = (0..samples)
        .map(|_| rng.gen_range(0..(1u64 << pm)))
        .collect();
    let worst = masks
        .par_iter()
        .map(|&mask| audit_one(mask, pm, &table))
        .reduce(SubsetWorst::default, SubsetWorst::merge);
    Ok(summarize(pm, samples, false, Some(seed), worst))
}

#[derive(Debug, Default, Clone, Copy)]
struct SubsetWorst {
    alpha_stat: u64,
    alpha_witness: u64,
    s_len: u64,
    s_witness: u64,
    all_alpha_hold: bool,
    all_s_hold: bool,
    seen: bool,
}

impl SubsetWorst {
    fn merge(self, other: SubsetWorst) -> SubsetWorst {
        if !self.seen {
            return other;
        }
        if !other.seen {
            return self;
        }
        // ties broken toward the smaller mask for determinism
        let (alpha_stat, alpha_witness) = max_with_witness(
            (self.alpha_stat, self.alpha_witness),
            (other.alpha_stat, other.alpha_witness),
        );
        let (s_len, s_witness) =
            max_with_witness((self.s_len, self.s_witness), (other.s_len, other.s_witness));
        SubsetWorst {
            alpha_stat,
            alpha_witness,
            s_len,
            s_witness,
            all_alpha_hold: self.all_alpha_hold && other.all_alpha_hold,
            all_s_hold: self.all_s_hold && other.all_s_hold,
            seen: true,
        }
    }
}

fn max_with_witness(a: (u64, u64), b: (u64, u64)) -> (u64, u64) {
    match a.0.cmp(&b.0) {
        std::cmp::Ordering::Greater => a,
        std::cmp::Ordering::Less => b,
        std::cmp::Ordering::Equal => {
            if a.1 <= b.1 {
                a
            } else {
                b
            }
        }
    }
}

fn audit_one(mask: u64, p: u64, table: &LegendreTable) -> SubsetWorst {
    let members = subset_members(mask, p);
    let p_sq = (p as u128).pow(2);
    let mut stat = 0u64;
    let mut s_len = 0u64;
    for gamma in 0..p {
        let s = inner_sum(&members, gamma, p, table).unsigned_abs();
        stat += s;
        if (s as u128).pow(3) >= p_sq {
            s_len += 1;
        }
    }
    SubsetWorst {
        alpha_stat: stat,
        alpha_witness: mask,
        s_len,
        s_witness: mask,
        all_alpha_hold: alpha_bound_holds(stat, p),
        all_s_hold: pathological_bound_holds(s_len, p),
        seen: true,
    }
}

fn summarize(
    p: u64,
    subsets: u64,
    exhaustive: bool,
    seed: Option<u64>,
    worst: SubsetWorst,
) -> AuditSummary {
    AuditSummary {
        p,
        subsets_audited: subsets,
        exhaustive,
        seed,
        all_alpha_bounds_hold: worst.all_alpha_hold,
        all_s_bounds_hold: worst.all_s_hold,
        max_alpha_stat: worst.alpha_stat,
        max_alpha_witness: worst.alpha_witness,
        max_s_len: worst.s_len,
        max_s_witness: worst.s_witness,
    }
}

/// Random B multisets for the proposition's randomized audit.
pub fn random_multiset(p: u64, rng: &mut impl Rng) -> Vec<(u64, u64)> {
    let distinct = rng.gen_range(1..=(p + 1) / 2);
    let mut betas: Vec<u64> = (0..p).collect();
    for i in 0..distinct as usize {
        let j = rng.gen_range(i..p as usize);
        betas.swap(i, j);
    }
    let mut ms: Vec<(u64, u64)> = betas[..distinct as usize]
        .iter()
        .map(|&b| (b, rng.gen_range(1..=(p - 1).max(1))))
        .collect();
    ms.sort_unstable();
    ms
}
