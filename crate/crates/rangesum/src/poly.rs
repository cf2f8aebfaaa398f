//! Polynomials of degree at most p-1 over F_p, the polynomial/function
//! bijection, and integer range sums.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::fp::{PrimeModulus, Residue};
use crate::Error;

/// Dense polynomial over F_p, coefficients ascending by exponent.
///
/// Trailing zero coefficients are trimmed, so `coeffs.len() - 1` is the
/// degree of a nonzero polynomial and the zero polynomial has an empty
/// coefficient vector (degree `None`).
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FpPoly {
    p: PrimeModulus,
    coeffs: Vec<u64>,
}

impl fmt::Debug for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FpPoly(mod {}: {:?})", self.p, self.coeffs)
    }
}

impl FpPoly {
    /// Build from raw coefficients (reduced mod p, trailing zeros trimmed).
    ///
    /// Fails if the reduced polynomial would have degree >= p.
    pub fn new(p: PrimeModulus, coeffs: Vec<i64>) -> Result<Self, Error> {
        let reduced: Vec<u64> = coeffs.iter().map(|&c| p.residue(c).lift()).collect();
        let poly = Self::from_reduced(p, reduced);
        if poly.coeffs.len() > p.get() as usize {
            return Err(Error::Domain(format!(
                "degree {} exceeds p-1 = {}",
                poly.coeffs.len() - 1,
                p.get() - 1
            )));
        }
        Ok(poly)
    }

    pub(crate) fn from_reduced(p: PrimeModulus, mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPoly { p, coeffs }
    }

    pub fn zero(p: PrimeModulus) -> Self {
        FpPoly { p, coeffs: Vec::new() }
    }

    pub fn constant(p: PrimeModulus, c: i64) -> Self {
        Self::from_reduced(p, vec![p.residue(c).lift()])
    }

    /// The monomial c * x^e.
    pub fn monomial(p: PrimeModulus, c: i64, e: usize) -> Result<Self, Error> {
        if e > (p.get() - 1) as usize && p.residue(c).lift() != 0 {
            return Err(Error::Domain(format!("exponent {e} exceeds p-1")));
        }
        let mut coeffs = vec![0u64; e + 1];
        coeffs[e] = p.residue(c).lift();
        Ok(Self::from_reduced(p, coeffs))
    }

    #[inline]
    pub fn modulus(&self) -> PrimeModulus {
        self.p
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of x^n (zero beyond the stored length).
    pub fn coeff(&self, n: usize) -> Residue {
        self.p.residue(*self.coeffs.get(n).unwrap_or(&0) as i64)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Horner evaluation at x.
    pub fn eval(&self, x: Residue) -> Residue {
        debug_assert_eq!(x.modulus(), self.p);
        let p = self.p.get();
        let xv = x.lift();
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = (acc * xv + c) % p;
        }
        self.p.residue(acc as i64)
    }

    /// The full value table of the polynomial function.
    pub fn eval_all(&self) -> ValueTable {
        let values = self.p.elements().map(|x| self.eval(x).lift()).collect();
        ValueTable { p: self.p, values }
    }

    /// g(x) = f(ax + b) for a != 0; a domain permutation of the function,
    /// so degree and value multiset (hence range sum) are preserved.
    pub fn affine_compose(&self, a: Residue, b: Residue) -> Result<FpPoly, Error> {
        if a.is_zero() {
            return Err(Error::Domain("affine transform with a = 0".into()));
        }
        let p = self.p.get();
        // Horner in polynomial space: acc = acc * (a x + b) + c_n.
        let mut acc: Vec<u64> = Vec::with_capacity(self.coeffs.len());
        for &c in self.coeffs.iter().rev() {
            let mut next = vec![0u64; acc.len() + 1];
            for (i, &q) in acc.iter().enumerate() {
                next[i + 1] = (next[i + 1] + q * a.lift()) % p;
                next[i] = (next[i] + q * b.lift()) % p;
            }
            next[0] = (next[0] + c) % p;
            acc = next;
        }
        Ok(Self::from_reduced(self.p, acc))
    }

    /// Coefficientwise scaling; range sum is generally not preserved.
    pub fn scalar_mul(&self, c: Residue) -> FpPoly {
        let p = self.p.get();
        let coeffs = self.coeffs.iter().map(|&a| a * c.lift() % p).collect();
        Self::from_reduced(self.p, coeffs)
    }

    /// Exact product, degree adds; the caller is responsible for any
    /// functional reduction when the result exceeds degree p-1.
    pub fn mul(&self, other: &FpPoly) -> FpPoly {
        debug_assert_eq!(self.p, other.p);
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return FpPoly::zero(self.p);
        }
        let p = self.p.get();
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + a * b) % p;
            }
        }
        Self::from_reduced(self.p, out)
    }

    pub fn add(&self, other: &FpPoly) -> FpPoly {
        debug_assert_eq!(self.p, other.p);
        let p = self.p.get();
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u64; n];
        for (i, slot) in out.iter_mut().enumerate() {
            let a = *self.coeffs.get(i).unwrap_or(&0);
            let b = *other.coeffs.get(i).unwrap_or(&0);
            *slot = (a + b) % p;
        }
        Self::from_reduced(self.p, out)
    }

    pub fn sub(&self, other: &FpPoly) -> FpPoly {
        debug_assert_eq!(self.p, other.p);
        let p = self.p.get();
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u64; n];
        for (i, slot) in out.iter_mut().enumerate() {
            let a = *self.coeffs.get(i).unwrap_or(&0);
            let b = *other.coeffs.get(i).unwrap_or(&0);
            *slot = (a + p - b) % p;
        }
        Self::from_reduced(self.p, out)
    }

    /// Fold exponents >= p down along x^p = x, preserving the function.
    pub fn frobenius_reduce(&self) -> FpPoly {
        let p = self.p.get() as usize;
        let mut out = vec![0u64; p];
        for (e, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let e = if e >= p { (e - 1) % (p - 1) + 1 } else { e };
            out[e] = (out[e] + c) % self.p.get();
        }
        Self::from_reduced(self.p, out)
    }

    /// True iff range_sum(eval_all(f)) == -a_{p-1} (mod p). A self-test:
    /// this is forced for every polynomial of degree <= p-1.
    pub fn range_sum_mod_check(&self) -> bool {
        let sum = self.eval_all().range_sum();
        let lead = self.coeff((self.p.get() - 1) as usize);
        self.p.residue(sum as i64) == -lead
    }
}

/// The function view: p values, each lifted to {0, ..., p-1} and summed
/// over the integers for the range sum.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ValueTable {
    p: PrimeModulus,
    values: Vec<u64>,
}

impl fmt::Debug for ValueTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ValueTable(mod {}: {:?})", self.p, self.values)
    }
}

impl ValueTable {
    pub fn new(p: PrimeModulus, values: Vec<u64>) -> Result<Self, Error> {
        if values.len() != p.get() as usize {
            return Err(Error::Domain(format!(
                "value table has {} entries, expected {}",
                values.len(),
                p.get()
            )));
        }
        if let Some(&v) = values.iter().find(|&&v| v >= p.get()) {
            return Err(Error::Domain(format!("table value {v} not in [0, p-1]")));
        }
        Ok(ValueTable { p, values })
    }

    #[inline]
    pub fn modulus(&self) -> PrimeModulus {
        self.p
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, x: u64) -> u64 {
        self.values[x as usize]
    }

    /// Integer sum of the lifted values (no reduction mod p).
    pub fn range_sum(&self) -> u64 {
        self.values.iter().sum()
    }

    /// The unique polynomial of degree <= p-1 with this value table.
    ///
    /// Lagrange interpolation over the full domain: the node polynomial is
    /// x^p - x, whose derivative is -1 at every node, so the basis
    /// polynomial at node a is -(x^p - x)/(x - a), computed by synthetic
    /// division.
    pub fn interpolate(&self) -> FpPoly {
        let p = self.p.get();
        let n = p as usize;
        let mut out = vec![0u64; n];
        // x^p - x has coefficients c_p = 1, c_1 = -1, rest 0.
        for (a, &v) in self.values.iter().enumerate() {
            if v == 0 {
                continue;
            }
            let a = a as u64;
            // Synthetic division of x^p - x by (x - a); the quotient has
            // degree p-1. q_{p-1} = 1, q_{i-1} = a*q_i + c_i.
            // Accumulate -v * q into out on the fly.
            let neg_v = p - v;
            let mut q = 1u64; // q_{p-1}
            out[n - 1] = (out[n - 1] + neg_v * q) % p;
            for i in (1..n).rev() {
                // coefficient c_i of x^p - x: -1 at i == 1, else 0
                let c = if i == 1 { p - 1 } else { 0 };
                q = (a * q + c) % p;
                out[i - 1] = (out[i - 1] + neg_v * q) % p;
            }
        }
        FpPoly::from_reduced(self.p, out)
    }
}
