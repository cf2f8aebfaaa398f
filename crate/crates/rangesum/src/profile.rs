//! Structural decomposition of a range-sum-p polynomial: the root set A,
//! the value multiset B with multiplicities k_j, the affine-normalized
//! character identity, and the integer residual r(gamma).

use serde::{Deserialize, Serialize};

use crate::fp::{LegendreTable, PrimeModulus};
use crate::poly::{FpPoly, ValueTable};
use crate::Error;

/// The (A, B, {k_j}) decomposition of a value table.
///
/// A is the set of roots; B assigns weight v[x]-1 to every x with
/// v[x] > 1; k lists the weights of the distinct elements of B in
/// descending order. When the table has range sum exactly p, the total
/// weight of B equals |A|.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootValueProfile {
    pub modulus: PrimeModulus,
    /// Roots, sorted ascending.
    pub roots: Vec<u64>,
    /// (beta, weight) pairs with weight >= 1, sorted by beta.
    pub b_multiset: Vec<(u64, u64)>,
    /// Multiplicities of the distinct B elements, sorted descending.
    pub k: Vec<u64>,
}

impl RootValueProfile {
    pub fn b_total_weight(&self) -> u64 {
        self.b_multiset.iter().map(|&(_, w)| w).sum()
    }

    pub fn sum_k_squared(&self) -> u64 {
        self.k.iter().map(|&k| k * k).sum()
    }
}

pub fn decompose(v: &ValueTable) -> RootValueProfile {
    let mut roots = Vec::new();
    let mut b_multiset = Vec::new();
    for (x, &val) in v.values().iter().enumerate() {
        if val == 0 {
            roots.push(x as u64);
        } else if val > 1 {
            b_multiset.push((x as u64, val - 1));
        }
    }
    let mut k: Vec<u64> = b_multiset.iter().map(|&(_, w)| w).collect();
    k.sort_unstable_by(|a, b| b.cmp(a));
    RootValueProfile {
        modulus: v.modulus(),
        roots,
        b_multiset,
        k,
    }
}

fn require_half_plus_one_degree(f: &FpPoly) -> Result<(PrimeModulus, ValueTable), Error> {
    let p = f.modulus();
    let target = ((p.get() + 1) / 2) as usize;
    if f.degree() != Some(target) {
        return Err(Error::Usage(format!(
            "expected degree (p+1)/2 = {target}, got {:?}",
            f.degree()
        )));
    }
    let v = f.eval_all();
    if v.range_sum() != p.get() {
        return Err(Error::Usage(format!(
            "expected range sum {}, got {}",
            p.get(),
            v.range_sum()
        )));
    }
    Ok((p, v))
}

/// Check the congruence
///   sum_A (a-g/p) == sum_B (b-g/p) + (1/2) a_{(p+1)/2} g + a_{(p-1)/2}  (mod p)
/// at every gamma; returns the failing gammas (expected empty).
pub fn verify_identity_eq2(f: &FpPoly) -> Result<Vec<u64>, Error> {
    let (p, v) = require_half_plus_one_degree(f)?;
    let prof = decompose(&v);
    let table = LegendreTable::new(p);
    let pm = p.get();
    let inv2 = (pm + 1) / 2;
    let a_hi = f.coeff(((pm + 1) / 2) as usize).lift();
    let a_lo = f.coeff(((pm - 1) / 2) as usize).lift();
    let mut failing = Vec::new();
    for gamma in 0..pm {
        let lhs = char_sum_set(&prof.roots, gamma, &table, pm);
        let rhs_char = char_sum_multiset(&prof.b_multiset, gamma, &table, pm);
        let linear = (inv2 * a_hi % pm * gamma + a_lo) % pm;
        let lhs_mod = lhs.rem_euclid(pm as i64) as u64;
        let rhs_mod = (rhs_char.rem_euclid(pm as i64) as u64 + linear) % pm;
        if lhs_mod != rhs_mod {
            failing.push(gamma);
        }
    }
    Ok(failing)
}

fn char_sum_set(set: &[u64], gamma: u64, table: &LegendreTable, p: u64) -> i64 {
    set.iter()
        .map(|&a| table.get((a + p - gamma) % p) as i64)
        .sum()
}

fn char_sum_multiset(ms: &[(u64, u64)], gamma: u64, table: &LegendreTable, p: u64) -> i64 {
    ms.iter()
        .map(|&(b, w)| w as i64 * table.get((b + p - gamma) % p) as i64)
        .sum()
}

/// The affine transform applied during normalization, recorded for
/// reproducibility: the normalized polynomial is f(scale*x + shift).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalizationTransform {
    pub scale: u64,
    pub shift: u64,
    pub identity: bool,
}

/// A range-sum-p polynomial of degree (p+1)/2 brought to the normalized
/// form where the character identity reads
///   sum_A (a-g/p) == sum_B (b-g/p) +/- g  (mod p).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NormalizedInstance {
    pub poly: FpPoly,
    pub profile: RootValueProfile,
    /// The fixed +/- of the normalized identity.
    pub sign: i32,
    pub transform: NormalizationTransform,
}

/// Kill the a_{(p-1)/2} coefficient by a translation and rescale the
/// domain so the linear term of the identity becomes +/- gamma.
pub fn normalize_instance(f: &FpPoly) -> Result<NormalizedInstance, Error> {
    let (p, _) = require_half_plus_one_degree(f)?;
    let pm = p.get();
    let hi = ((pm + 1) / 2) as usize;
    let lo = ((pm - 1) / 2) as usize;
    let a_hi = f.coeff(hi);
    let a_lo = f.coeff(lo);
    let inv2 = p.residue(((pm + 1) / 2) as i64);

    let half_lead = (inv2 * a_hi).lift();
    if a_lo.is_zero() && (half_lead == 1 || half_lead == pm - 1) {
        // already in normalized form
        let sign = if half_lead == 1 { 1 } else { -1 };
        let v = f.eval_all();
        return Ok(NormalizedInstance {
            poly: f.clone(),
            profile: decompose(&v),
            sign,
            transform: NormalizationTransform {
                scale: 1,
                shift: 0,
                identity: true,
            },
        });
    }

    let two = p.residue(2);
    let a_inv = a_hi.inverse()?;
    let scale = two * a_inv;
    let shift = -(two * a_lo * a_inv);
    let h = f.affine_compose(scale, shift)?;

    // The normalized leading data forces (1/2) a'_{(p+1)/2} = legendre(2/a).
    let half_lead_h = (inv2 * h.coeff(hi)).lift();
    debug_assert!(half_lead_h == 1 || half_lead_h == pm - 1);
    debug_assert!(h.coeff(lo).is_zero());
    let sign = if half_lead_h == 1 { 1 } else { -1 };

    let v = h.eval_all();
    Ok(NormalizedInstance {
        poly: h,
        profile: decompose(&v),
        sign,
        transform: NormalizationTransform {
            scale: scale.lift(),
            shift: shift.lift(),
            identity: false,
        },
    })
}

/// The integer discrepancy r(gamma) of the lifted normalized identity.
///
/// For a -1 instance the evaluation point is reflected (gamma -> -gamma),
/// so r(gamma) == gamma (mod p) holds for both branches; `branch`
/// records which one was used.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResidualFunction {
    pub modulus: PrimeModulus,
    pub branch: i32,
    pub r: Vec<i64>,
}

pub fn residual_r(inst: &NormalizedInstance) -> ResidualFunction {
    let p = inst.poly.modulus();
    let pm = p.get();
    let table = LegendreTable::new(p);
    let r = (0..pm)
        .map(|gamma| {
            let delta = if inst.sign == 1 { gamma } else { (pm - gamma) % pm };
            char_sum_set(&inst.profile.roots, delta, &table, pm)
                - char_sum_multiset(&inst.profile.b_multiset, delta, &table, pm)
        })
        .collect();
    ResidualFunction {
        modulus: p,
        branch: inst.sign,
        r,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ResidualLabel {
    /// gamma != 0 with r = gamma
    Identity,
    /// gamma != 0 with r = gamma - p
    Shifted,
    /// gamma = 0 with r in {-p, 0, p}
    ZeroNegP,
    Zero,
    ZeroPosP,
    /// any r value outside the expected sets (diagnostic, not an error)
    Anomaly,
}

pub fn classify_r(rf: &ResidualFunction) -> Vec<ResidualLabel> {
    let p = rf.modulus.get() as i64;
    rf.r
        .iter()
        .enumerate()
        .map(|(gamma, &r)| {
            let g = gamma as i64;
            if g == 0 {
                match r {
                    x if x == -p => ResidualLabel::ZeroNegP,
                    0 => ResidualLabel::Zero,
                    x if x == p => ResidualLabel::ZeroPosP,
                    _ => ResidualLabel::Anomaly,
                }
            } else if r == g {
                ResidualLabel::Identity
            } else if r == g - p {
                ResidualLabel::Shifted
            } else {
                ResidualLabel::Anomaly
            }
        })
        .collect()
}

/// (Gamma_{-p}, Gamma'): the gammas with r = gamma - p, and their
/// intersection with the interval [9p/20, 19p/40] (endpoints rounded
/// inward on the integer lift).
pub fn gamma_sets(rf: &ResidualFunction) -> (Vec<u64>, Vec<u64>) {
    let p = rf.modulus.get();
    let (lo, hi) = pv_interval(p);
    let mut gamma_minus_p = Vec::new();
    let mut gamma_prime = Vec::new();
    for (gamma, &r) in rf.r.iter().enumerate() {
        if r == gamma as i64 - p as i64 {
            let gamma = gamma as u64;
            gamma_minus_p.push(gamma);
            if gamma >= lo && gamma <= hi {
                gamma_prime.push(gamma);
            }
        }
    }
    (gamma_minus_p, gamma_prime)
}

/// Inward-rounded integer endpoints of [9p/20, 19p/40].
pub fn pv_interval(p: u64) -> (u64, u64) {
    let lo = (9 * p).div_ceil(20);
    let hi = 19 * p / 40;
    (lo, hi)
}

/// Report on the multiplicity profile: k_1, |B|, sum k_j^2, whether
/// k_1 >= |B|/5 (report-only), and the dominant beta when its weight
/// reaches (p-1)/10.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProfileStats {
    pub k1: u64,
    pub b_total: u64,
    pub sum_k_squared: u64,
    /// None when B is empty (bound vacuous).
    pub k1_bound_holds: Option<bool>,
    pub dominant_beta: Option<u64>,
}

pub fn profile_stats(prof: &RootValueProfile) -> ProfileStats {
    let b_total = prof.b_total_weight();
    let k1 = prof.k.first().copied().unwrap_or(0);
    let k1_bound_holds = if b_total == 0 { None } else { Some(5 * k1 >= b_total) };
    let p = prof.modulus.get();
    let dominant_beta = if k1 > 0 && 10 * k1 >= p - 1 {
        prof.b_multiset
            .iter()
            .find(|&&(_, w)| w == k1)
            .map(|&(b, _)| b)
    } else {
        None
    };
    ProfileStats {
        k1,
        b_total,
        sum_k_squared: prof.sum_k_squared(),
        k1_bound_holds,
        dominant_beta,
    }
}

/// Whether x^{(p-1)/2} - 1 divides f in F_p[x]. Since x^{(p-1)/2} - 1
/// splits into distinct linear factors (the nonzero quadratic residues),
/// divisibility of a degree <= p-1 polynomial is equivalent to vanishing
/// at all of them. Exposed as a diagnostic only.
pub fn divisible_by_qr_vanisher(f: &FpPoly) -> bool {
    let p = f.modulus();
    let half = p.half();
    p.elements()
        .all(|x| x.pow(half).lift() != 1 || f.eval(x).is_zero())
}

/// Serializable per-instance report matching the published schema.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProfileReport {
    pub p: u64,
    #[serde(rename = "A")]
    pub a: Vec<u64>,
    #[serde(rename = "B")]
    pub b: Vec<(u64, u64)>,
    pub k: Vec<u64>,
    pub sign: i32,
    pub r: Vec<i64>,
    pub gamma_minus_p: Vec<u64>,
    pub anomalies: Vec<u64>,
    pub stats: ProfileStats,
}

pub fn profile_report(f: &FpPoly) -> Result<ProfileReport, Error> {
    let inst = normalize_instance(f)?;
    let rf = residual_r(&inst);
    let labels = classify_r(&rf);
    let (gamma_minus_p, _) = gamma_sets(&rf);
    let anomalies = labels
        .iter()
        .enumerate()
        .filter(|(_, l)| matches!(l, ResidualLabel::Anomaly))
        .map(|(g, _)| g as u64)
        .collect();
    Ok(ProfileReport {
        p: f.modulus().get(),
        a: inst.profile.roots.clone(),
        b: inst.profile.b_multiset.clone(),
        k: inst.profile.k.clone(),
        sign: inst.sign,
        r: rf.r.clone(),
        gamma_minus_p,
        anomalies,
        stats: profile_stats(&inst.profile),
    })
}
