//! Exact arithmetic in the prime field F_p: residues, Legendre symbols,
//! and the canonical integer lift to {0, ..., p-1}.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::Error;

/// An odd prime modulus, validated at construction.
///
/// Supported range is 3 <= p < 2^31 so that products of two residues
/// never overflow a u64.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PrimeModulus(u64);

impl PrimeModulus {
    pub fn new(p: u64) -> Result<Self, Error> {
        if p < 3 || p >= (1 << 31) {
            return Err(Error::Domain(format!("modulus {p} out of supported range")));
        }
        if p % 2 == 0 {
            return Err(Error::Domain(format!("modulus {p} is even")));
        }
        if !is_prime(p) {
            return Err(Error::Domain(format!("modulus {p} is not prime")));
        }
        Ok(PrimeModulus(p))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    /// (p - 1) / 2, the quadratic-residue exponent.
    #[inline]
    pub fn half(self) -> u64 {
        (self.0 - 1) / 2
    }

    pub fn residue(self, value: i64) -> Residue {
        reduce(value, self)
    }

    /// All residues 0, 1, ..., p-1 in order.
    pub fn elements(self) -> impl Iterator<Item = Residue> {
        let p = self;
        (0..self.0).map(move |v| Residue { value: v, modulus: p })
    }
}

impl fmt::Debug for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p={}", self.0)
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An element of F_p, kept in canonical form 0 <= value < p.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Residue {
    value: u64,
    modulus: PrimeModulus,
}

impl fmt::Debug for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus.0)
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Reduce a signed integer into [0, p-1], correct for negative input.
pub fn reduce(n: i64, p: PrimeModulus) -> Residue {
    let m = p.get() as i64;
    let r = n.rem_euclid(m) as u64;
    Residue { value: r, modulus: p }
}

impl Residue {
    /// The canonical representative in {0, ..., p-1}.
    #[inline]
    pub fn lift(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> PrimeModulus {
        self.modulus
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    /// Legendre symbol (a/p) via Euler's criterion.
    pub fn legendre(self) -> i32 {
        legendre_u64(self.value, self.modulus.get())
    }

    /// Multiplicative inverse; zero input is a domain error.
    pub fn inverse(self) -> Result<Residue, Error> {
        if self.value == 0 {
            return Err(Error::Domain("inverse of zero".into()));
        }
        let p = self.modulus.get();
        Ok(Residue {
            value: pow_mod(self.value, p - 2, p),
            modulus: self.modulus,
        })
    }

    pub fn pow(self, exp: u64) -> Residue {
        Residue {
            value: pow_mod(self.value, exp, self.modulus.get()),
            modulus: self.modulus,
        }
    }
}

#[inline]
fn check_same(a: Residue, b: Residue) {
    debug_assert_eq!(a.modulus, b.modulus, "mixed-modulus arithmetic");
}

impl Add for Residue {
    type Output = Residue;
    fn add(self, rhs: Residue) -> Residue {
        check_same(self, rhs);
        let p = self.modulus.get();
        let mut v = self.value + rhs.value;
        if v >= p {
            v -= p;
        }
        Residue { value: v, modulus: self.modulus }
    }
}

impl Sub for Residue {
    type Output = Residue;
    fn sub(self, rhs: Residue) -> Residue {
        check_same(self, rhs);
        let p = self.modulus.get();
        let v = if self.value >= rhs.value {
            self.value - rhs.value
        } else {
            self.value + p - rhs.value
        };
        Residue { value: v, modulus: self.modulus }
    }
}

impl Mul for Residue {
    type Output = Residue;
    fn mul(self, rhs: Residue) -> Residue {
        check_same(self, rhs);
        Residue {
            value: self.value * rhs.value % self.modulus.get(),
            modulus: self.modulus,
        }
    }
}

impl Neg for Residue {
    type Output = Residue;
    fn neg(self) -> Residue {
        let p = self.modulus.get();
        let v = if self.value == 0 { 0 } else { p - self.value };
        Residue { value: v, modulus: self.modulus }
    }
}

/// a^exp mod m by square-and-multiply. Requires m < 2^31.
pub fn pow_mod(a: u64, mut exp: u64, m: u64) -> u64 {
    debug_assert!(m < (1 << 31));
    let mut base = a % m;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

/// Legendre symbol on raw values, 0 <= a < p assumed after reduction.
pub fn legendre_u64(a: u64, p: u64) -> i32 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    let e = pow_mod(a, (p - 1) / 2, p);
    if e == 1 {
        1
    } else {
        -1
    }
}

/// Precomputed Legendre symbols for every residue class mod p.
///
/// Built by marking the squares, so it is an independent route from
/// Euler's criterion.
pub struct LegendreTable {
    symbols: Vec<i8>,
}

impl LegendreTable {
    pub fn new(p: PrimeModulus) -> Self {
        let p = p.get();
        let mut symbols = vec![-1i8; p as usize];
        symbols[0] = 0;
        for x in 1..=(p - 1) / 2 {
            symbols[(x * x % p) as usize] = 1;
        }
        LegendreTable { symbols }
    }

    #[inline]
    pub fn get(&self, a: u64) -> i32 {
        self.symbols[a as usize] as i32
    }
}

fn mul_mod_u128(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod_u128(a: u64, mut exp: u64, m: u64) -> u64 {
    let mut base = a % m;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_u128(acc, base, m);
        }
        base = mul_mod_u128(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin, valid for all n < 2^64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    // This witness set is deterministic below 2^64.
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod_u128(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u128(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Odd primes in [lo, hi].
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(3)..=hi).filter(|&n| n % 2 == 1 && is_prime(n)).collect()
}
