//! Residues modulo `p^N` for an odd prime `p`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Largest modulus we accept; keeps `a + b` and `u128` products safe.
const MAX_MODULUS_BITS: u32 = 62;

/// Default cap on `deg ω_n = p^(n-1)`.
pub const DEFAULT_DEGREE_CAP: usize = 256;

/// The coefficient ring `Z/p^N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeConfig {
    pub p: u64,
    pub precision: u32,
    #[serde(default = "default_cap")]
    pub degree_cap: usize,
}

fn default_cap() -> usize {
    DEFAULT_DEGREE_CAP
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Largest `N` with `p^N < 2^62`.
pub fn max_precision(p: u64) -> u32 {
    let mut n = 0;
    let mut m: u128 = 1;
    while m * (p as u128) < (1u128 << MAX_MODULUS_BITS) {
        m *= p as u128;
        n += 1;
    }
    n
}

impl PrimeConfig {
    pub fn new(p: u64, precision: u32) -> Result<Self> {
        if p == 2 || !is_prime(p) {
            return Err(Error::Config(format!("p = {p} must be an odd prime")));
        }
        if precision == 0 {
            return Err(Error::Config("precision must be at least 1".into()));
        }
        let cap = max_precision(p);
        if precision > cap {
            return Err(Error::PrecisionOverflow(format!(
                "p^{precision} does not fit in 62 bits (max N = {cap} for p = {p})"
            )));
        }
        Ok(PrimeConfig { p, precision, degree_cap: DEFAULT_DEGREE_CAP })
    }

    pub fn with_degree_cap(mut self, cap: usize) -> Self {
        self.degree_cap = cap;
        self
    }

    /// Same prime, different precision.
    pub fn with_precision(&self, precision: u32) -> Result<Self> {
        let mut c = PrimeConfig::new(self.p, precision)?;
        c.degree_cap = self.degree_cap;
        Ok(c)
    }

    pub fn modulus(&self) -> u64 {
        self.p.pow(self.precision)
    }

    pub fn ppow(&self, k: u32) -> u64 {
        if k >= self.precision {
            0
        } else {
            self.p.pow(k)
        }
    }

    pub fn reduce_i128(&self, x: i128) -> u64 {
        let m = self.modulus() as i128;
        (((x % m) + m) % m) as u64
    }

    pub fn reduce_i64(&self, x: i64) -> u64 {
        self.reduce_i128(x as i128)
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let m = self.modulus();
        let s = a + b;
        if s >= m {
            s - m
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.modulus() - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.modulus() - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.modulus() as u128) as u64
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.modulus();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// `v_p(a)` for a residue; zero has valuation `N`.
    pub fn valuation(&self, a: u64) -> u32 {
        if a == 0 {
            return self.precision;
        }
        let mut v = 0;
        let mut x = a;
        while x % self.p == 0 {
            x /= self.p;
            v += 1;
        }
        v
    }

    pub fn is_unit(&self, a: u64) -> bool {
        a % self.p != 0
    }

    pub fn inv(&self, a: u64) -> Option<u64> {
        if !self.is_unit(a) {
            return None;
        }
        let m = self.modulus() as i128;
        let (mut r0, mut r1) = (m, a as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        Some(self.reduce_i128(s0))
    }

    /// Residue in `(-m/2, m/2]`, for human-facing output.
    pub fn balanced(&self, a: u64) -> i64 {
        let m = self.modulus();
        if a > m / 2 {
            a as i64 - m as i64
        } else {
            a as i64
        }
    }
}

/// `v_p(n)` of a nonzero integer.
pub fn int_valuation(p: u64, n: i128) -> u32 {
    assert!(n != 0, "valuation of zero");
    let mut v = 0;
    let mut x = n.abs();
    while x % p as i128 == 0 {
        x /= p as i128;
        v += 1;
    }
    v
}

/// Binomial coefficient as an exact integer (small arguments only).
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_primes() {
        assert!(PrimeConfig::new(2, 4).is_err());
        assert!(PrimeConfig::new(9, 4).is_err());
        assert!(PrimeConfig::new(3, 0).is_err());
        assert!(PrimeConfig::new(3, 40).is_err());
        assert!(PrimeConfig::new(3, 39).is_ok());
    }

    #[test]
    fn max_precision_matches_bit_bound() {
        for p in [3u64, 5, 7] {
            let n = max_precision(p);
            assert!((p as u128).pow(n) < 1 << 62);
            assert!((p as u128).pow(n + 1) >= 1 << 62);
        }
        assert_eq!(max_precision(3), 39);
    }

    #[test]
    fn inverse_and_valuation() {
        let c = PrimeConfig::new(5, 6).unwrap();
        for a in 1..200u64 {
            if a % 5 != 0 {
                assert_eq!(c.mul(a, c.inv(a).unwrap()), 1);
            } else {
                assert!(c.inv(a).is_none());
            }
        }
        assert_eq!(c.valuation(0), 6);
        assert_eq!(c.valuation(250), 3);
        assert_eq!(c.balanced(c.reduce_i64(-7)), -7);
    }

    #[test]
    fn binomial_small() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(9, 3), 84);
        assert_eq!(int_valuation(3, -54), 3);
    }
}
