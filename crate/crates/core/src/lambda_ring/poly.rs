use crate::arith::PrimeConfig;
use crate::error::{Error, Result};
use std::fmt;

/// Polynomial in `T` over `Z/p^N`, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IwasawaPoly {
    cfg: PrimeConfig,
    coeffs: Vec<u64>,
}

impl IwasawaPoly {
    pub fn new(cfg: PrimeConfig, coeffs: Vec<u64>) -> Self {
        let m = cfg.modulus();
        let mut c: Vec<u64> = coeffs.into_iter().map(|x| x % m).collect();
        while c.last() == Some(&0) {
            c.pop();
        }
        IwasawaPoly { cfg, coeffs: c }
    }

    pub fn from_ints(cfg: PrimeConfig, coeffs: &[i64]) -> Self {
        Self::new(cfg, coeffs.iter().map(|&x| cfg.reduce_i64(x)).collect())
    }

    pub fn zero(cfg: PrimeConfig) -> Self {
        IwasawaPoly { cfg, coeffs: vec![] }
    }

    pub fn one(cfg: PrimeConfig) -> Self {
        Self::constant(cfg, 1)
    }

    pub fn constant(cfg: PrimeConfig, c: i64) -> Self {
        Self::from_ints(cfg, &[c])
    }

    /// The variable `T`.
    pub fn t(cfg: PrimeConfig) -> Self {
        Self::monomial(cfg, 1, 1)
    }

    pub fn monomial(cfg: PrimeConfig, c: u64, k: usize) -> Self {
        let mut v = vec![0; k + 1];
        v[k] = c;
        Self::new(cfg, v)
    }

    pub fn config(&self) -> PrimeConfig {
        self.cfg
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    /// Reinterpret the coefficients at another precision of the same prime.
    pub fn with_config(&self, cfg: PrimeConfig) -> Self {
        debug_assert_eq!(cfg.p, self.cfg.p);
        Self::new(cfg, self.coeffs.clone())
    }

    /// Least `i` with a unit coefficient, if any.
    pub fn weierstrass_degree(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| self.cfg.is_unit(c))
    }

    /// Minimum coefficient valuation.
    pub fn content_valuation(&self) -> u32 {
        self.coeffs
            .iter()
            .map(|&c| self.cfg.valuation(c))
            .min()
            .unwrap_or(self.cfg.precision)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n).map(|i| self.cfg.add(self.coeff(i), o.coeff(i))).collect();
        Self::new(self.cfg, v)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let v = (0..n).map(|i| self.cfg.sub(self.coeff(i), o.coeff(i))).collect();
        Self::new(self.cfg, v)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.cfg, self.coeffs.iter().map(|&c| self.cfg.neg(c)).collect())
    }

    pub fn scale(&self, c: u64) -> Self {
        Self::new(self.cfg, self.coeffs.iter().map(|&x| self.cfg.mul(x, c)).collect())
    }

    /// Multiply by `T^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![0; k];
        v.extend_from_slice(&self.coeffs);
        Self::new(self.cfg, v)
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.cfg);
        }
        let m = self.cfg.modulus() as u128;
        let mut acc = vec![0u128; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                acc[i + j] = (acc[i + j] + a as u128 * b as u128) % m;
            }
        }
        Self::new(self.cfg, acc.into_iter().map(|x| x as u64).collect())
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut r = Self::one(self.cfg);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        r
    }

    /// Division with remainder by a monic polynomial.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        if d.is_zero() || !d.is_monic() {
            return Err(Error::NonMonic(d.to_string()));
        }
        let dd = d.degree().unwrap();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Self::zero(self.cfg), self.clone()));
        }
        let mut q = vec![0u64; r.len() - dd];
        for k in (dd..r.len()).rev() {
            let c = r[k];
            if c == 0 {
                continue;
            }
            q[k - dd] = c;
            for (j, &dj) in d.coeffs.iter().enumerate() {
                let idx = k - dd + j;
                r[idx] = self.cfg.sub(r[idx], self.cfg.mul(c, dj));
            }
        }
        r.truncate(dd);
        Ok((Self::new(self.cfg, q), Self::new(self.cfg, r)))
    }

    pub fn rem(&self, d: &Self) -> Result<Self> {
        Ok(self.div_rem(d)?.1)
    }

    /// Quotient when the division by a monic `d` is exact.
    pub fn exact_div(&self, d: &Self) -> Result<Option<Self>> {
        let (q, r) = self.div_rem(d)?;
        Ok(if r.is_zero() { Some(q) } else { None })
    }

    pub fn mul_mod(&self, o: &Self, m: &Self) -> Result<Self> {
        self.mul(o).rem(m)
    }

    pub fn pow_mod(&self, mut e: u64, m: &Self) -> Result<Self> {
        let mut base = self.rem(m)?;
        let mut r = Self::one(self.cfg).rem(m)?;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul_mod(&base, m)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_mod(&base, m)?;
            }
        }
        Ok(r)
    }

    /// `self(inner) mod m` by Horner's rule.
    pub fn compose_mod(&self, inner: &Self, m: &Self) -> Result<Self> {
        let mut acc = Self::zero(self.cfg);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul_mod(inner, m)?.add(&Self::new(self.cfg, vec![c]));
        }
        acc.rem(m)
    }

    /// Plain composition `self(inner)`.
    pub fn compose(&self, inner: &Self) -> Self {
        let mut acc = Self::zero(self.cfg);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(inner).add(&Self::new(self.cfg, vec![c]));
        }
        acc
    }

    /// Exact division of every coefficient by `p^k`, the result living
    /// at precision `N - k`. Fails when some coefficient is not divisible.
    pub fn div_ppow(&self, k: u32) -> Option<Self> {
        if k == 0 {
            return Some(self.clone());
        }
        let pk = self.cfg.p.pow(k);
        if self.coeffs.iter().any(|c| c % pk != 0) {
            return None;
        }
        let cfg = self.cfg.with_precision(self.cfg.precision.checked_sub(k)?.max(1)).ok()?;
        Some(Self::new(cfg, self.coeffs.iter().map(|c| c / pk).collect()))
    }

    /// Coefficients as balanced integers.
    pub fn balanced_coeffs(&self) -> Vec<i64> {
        self.coeffs.iter().map(|&c| self.cfg.balanced(c)).collect()
    }

    /// Human form, highest degree first: `T^2 + 3*T + 3`.
    pub fn to_human(&self) -> String {
        super::text::format_human(self)
    }

    /// List form, lowest degree first: `[3,3,1]`.
    pub fn to_list(&self) -> String {
        super::text::format_list(self)
    }
}

impl fmt::Display for IwasawaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_human())
    }
}

/// Exact integer polynomial, used where reduction mod `p^N` would lose
/// information (coprimality tests, binomial identities).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPoly(pub Vec<i128>);

impl IntPoly {
    pub fn trim(mut self) -> Self {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
        self
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    /// Division with remainder by a monic integer polynomial.
    pub fn div_rem_monic(&self, d: &IntPoly) -> (IntPoly, IntPoly) {
        let dd = d.degree().expect("nonzero divisor");
        assert_eq!(d.0[dd], 1, "monic divisor");
        let mut r = self.0.clone();
        if r.len() <= dd {
            return (IntPoly(vec![]), self.clone().trim());
        }
        let mut q = vec![0i128; r.len() - dd];
        for k in (dd..r.len()).rev() {
            let c = r[k];
            q[k - dd] = c;
            if c == 0 {
                continue;
            }
            for (j, &dj) in d.0.iter().enumerate() {
                r[k - dd + j] -= c * dj;
            }
        }
        r.truncate(dd);
        (IntPoly(q).trim(), IntPoly(r).trim())
    }

    /// `(T+1)^{p^k} - 1` over the integers; only for small `p^k`.
    pub fn omega(p: u64, k: u32) -> IntPoly {
        let d = p.pow(k);
        let mut v: Vec<i128> = (0..=d).map(|i| crate::arith::binomial(d, i) as i128).collect();
        v[0] -= 1;
        IntPoly(v).trim()
    }
}
