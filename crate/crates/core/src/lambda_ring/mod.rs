//! The truncated Iwasawa algebra `Z/p^N [T]` and its quotients by `ω_n`.

mod poly;
pub mod text;
mod weierstrass;

pub use poly::{IntPoly, IwasawaPoly};
pub use text::parse_poly;
pub use weierstrass::{inverse_mod, is_distinguished, is_eisenstein, weierstrass_prepare, Prepared};

use crate::arith::{binomial, PrimeConfig};
use crate::error::{Error, Result};
use crate::linalg::Howell;

fn check_degree(cfg: &PrimeConfig, n: u32) -> Result<u64> {
    if n == 0 {
        return Err(Error::Config("levels start at 1".into()));
    }
    let d = (cfg.p as u128).checked_pow(n - 1).unwrap_or(u128::MAX);
    if d > cfg.degree_cap as u128 {
        return Err(Error::PrecisionOverflow(format!(
            "deg ω_{n} = {}^{} exceeds the degree cap {}",
            cfg.p,
            n - 1,
            cfg.degree_cap
        )));
    }
    Ok(d as u64)
}

/// `ω_n = (T+1)^{p^{n-1}} - 1`.
pub fn omega(cfg: PrimeConfig, n: u32) -> Result<IwasawaPoly> {
    check_degree(&cfg, n)?;
    let mut f = IwasawaPoly::new(cfg, vec![1, 1]);
    for _ in 1..n {
        f = f.pow(cfg.p);
    }
    Ok(f.sub(&IwasawaPoly::one(cfg)))
}

/// `ν_{n+1,n} = ω_{n+1} / ω_n`, i.e. `Φ_{p^n}(T+1)`.
pub fn nu(cfg: PrimeConfig, n: u32) -> Result<IwasawaPoly> {
    check_degree(&cfg, n + 1)?;
    let hi = omega(cfg, n + 1)?;
    let lo = omega(cfg, n)?;
    hi.exact_div(&lo)?
        .ok_or_else(|| Error::Config("ω_n does not divide ω_{n+1}".into()))
}

/// `u(X) = sum_{i=1}^{p-1} (C(p,i)/p) X^{i-1}`, so `ν = ω^{p-1} + p u(ω)`.
pub fn u_poly(cfg: PrimeConfig) -> IwasawaPoly {
    let p = cfg.p;
    let c: Vec<u64> = (1..p)
        .map(|i| ((binomial(p, i) / p as u128) % cfg.modulus() as u128) as u64)
        .collect();
    IwasawaPoly::new(cfg, c)
}

/// An ideal `(g_1, ..., g_k, h_1, ..., h_m, p^N)` of `Z/p^N [T]`, where the
/// `g_i` are monic moduli and the `h_j` arbitrary extra generators.
#[derive(Clone, Debug)]
pub struct QuotientIdeal {
    cfg: PrimeConfig,
    moduli: Vec<IwasawaPoly>,
    extra: Vec<IwasawaPoly>,
}

impl QuotientIdeal {
    pub fn new(cfg: PrimeConfig, moduli: Vec<IwasawaPoly>) -> Result<Self> {
        for g in &moduli {
            if !g.is_monic() {
                return Err(Error::NonMonic(g.to_string()));
            }
        }
        Ok(QuotientIdeal { cfg, moduli, extra: vec![] })
    }

    /// Just `(p^N)`.
    pub fn precision(cfg: PrimeConfig) -> Self {
        QuotientIdeal { cfg, moduli: vec![], extra: vec![] }
    }

    /// `(ω_n, p^N)`.
    pub fn level(cfg: PrimeConfig, n: u32) -> Result<Self> {
        Self::new(cfg, vec![omega(cfg, n)?])
    }

    pub fn with_generator(mut self, h: IwasawaPoly) -> Self {
        self.extra.push(h);
        self
    }

    pub fn config(&self) -> PrimeConfig {
        self.cfg
    }

    pub fn moduli(&self) -> &[IwasawaPoly] {
        &self.moduli
    }

    pub fn extra(&self) -> &[IwasawaPoly] {
        &self.extra
    }

    /// The first monic modulus; the quotient by it is a finite ring.
    pub fn base(&self) -> Option<&IwasawaPoly> {
        self.moduli.first()
    }

    /// Reduce by the monic moduli in order.
    pub fn reduce(&self, f: &IwasawaPoly) -> IwasawaPoly {
        let mut r = f.clone();
        for g in &self.moduli {
            r = r.rem(g).expect("moduli are monic");
        }
        r
    }

    /// Exact membership test. Needs a monic modulus unless the ideal is
    /// just `(p^N)`.
    pub fn contains(&self, f: &IwasawaPoly) -> Result<bool> {
        let f = self.reduce(f);
        if f.is_zero() {
            return Ok(true);
        }
        let others: Vec<&IwasawaPoly> =
            self.moduli.iter().skip(1).chain(self.extra.iter()).collect();
        if others.is_empty() {
            return Ok(false);
        }
        let base = self
            .base()
            .ok_or_else(|| Error::Precondition("membership needs a monic modulus".into()))?;
        let d = base.degree().unwrap_or(0);
        let mut rows = vec![];
        for h in others {
            let mut x = h.rem(base)?;
            for _ in 0..d.max(1) {
                rows.push(to_dense(&x, d));
                x = x.shift(1).rem(base)?;
            }
        }
        let lat = Howell::new(self.cfg, d, rows);
        Ok(lat.contains(&to_dense(&f.rem(base)?, d)))
    }
}

pub fn to_dense(f: &IwasawaPoly, n: usize) -> Vec<u64> {
    let mut v = vec![0; n];
    for (i, &c) in f.coeffs().iter().enumerate().take(n) {
        v[i] = c;
    }
    v
}

/// `ω̃_n = (T+1)^{p^{n-1}} - (1+p)^{p^{n-1}}`, a unit multiple of `ω_n*`.
pub fn omega_twisted(cfg: PrimeConfig, n: u32) -> Result<IwasawaPoly> {
    let w = omega(cfg, n)?;
    let d = w.degree().unwrap() as u64;
    let c = cfg.pow(1 + cfg.p, d);
    Ok(w.add(&IwasawaPoly::one(cfg)).sub(&IwasawaPoly::constant(cfg, c as i64)))
}

/// `T* = (p - T)(T + 1)^{-1}` in `Z/p^N[T]/(m)`, where `(T+1)^{deg m} ≡ c`.
fn t_star(cfg: PrimeConfig, m: &IwasawaPoly, c: u64) -> Result<IwasawaPoly> {
    let d = m.degree().unwrap() as u64;
    let tp1 = IwasawaPoly::new(cfg, vec![1, 1]);
    let inv = tp1.pow_mod(d - 1, m)?.scale(cfg.inv(c).expect("unit"));
    let num = IwasawaPoly::from_ints(cfg, &[cfg.p as i64, -1]);
    num.mul_mod(&inv, m)
}

/// `f ↦ f*(T) = f((p - T)/(T + 1))` as a ring isomorphism
/// `Λ/(ω_n, p^N) → Λ/(ω̃_n, p^N)`.
///
/// The map does not preserve `(ω_n)` itself once `N > n`: `ω_n*` is a unit
/// multiple of `ω̃_n`, which is `≡ p^n * unit` modulo `ω_n`.
pub fn involution(f: &IwasawaPoly, n: u32) -> Result<IwasawaPoly> {
    let cfg = f.config();
    let w = omega(cfg, n)?;
    let wt = omega_twisted(cfg, n)?;
    let d = w.degree().unwrap() as u64;
    let ts = t_star(cfg, &wt, cfg.pow(1 + cfg.p, d))?;
    f.rem(&w)?.compose_mod(&ts, &wt)
}

/// Inverse direction `Λ/(ω̃_n, p^N) → Λ/(ω_n, p^N)`, same formula.
pub fn involution_back(g: &IwasawaPoly, n: u32) -> Result<IwasawaPoly> {
    let cfg = g.config();
    let w = omega(cfg, n)?;
    let wt = omega_twisted(cfg, n)?;
    let ts = t_star(cfg, &w, 1)?;
    g.rem(&wt)?.compose_mod(&ts, &w)
}

/// [`involution`] and [`involution_back`] with the powers of `T*` tabulated,
/// so each application is a linear combination instead of a Horner pass.
#[derive(Clone, Debug)]
pub struct InvolutionMap {
    level: u32,
    omega: IwasawaPoly,
    twisted: IwasawaPoly,
    forward: Vec<IwasawaPoly>,
    back: Vec<IwasawaPoly>,
}

fn power_table(x: &IwasawaPoly, m: &IwasawaPoly, count: usize) -> Result<Vec<IwasawaPoly>> {
    let mut out = vec![IwasawaPoly::one(x.config())];
    for _ in 1..count {
        out.push(out.last().unwrap().mul_mod(x, m)?);
    }
    Ok(out)
}

fn combine(cfg: PrimeConfig, f: &IwasawaPoly, table: &[IwasawaPoly]) -> IwasawaPoly {
    let d = table.len();
    let mut acc = vec![0u64; d];
    for (i, &c) in f.coeffs().iter().enumerate() {
        if c == 0 {
            continue;
        }
        for (j, &t) in table[i].coeffs().iter().enumerate() {
            acc[j] = cfg.add(acc[j], cfg.mul(c, t));
        }
    }
    IwasawaPoly::new(cfg, acc)
}

impl InvolutionMap {
    pub fn new(cfg: PrimeConfig, n: u32) -> Result<Self> {
        let w = omega(cfg, n)?;
        let wt = omega_twisted(cfg, n)?;
        let d = w.degree().unwrap();
        let fwd = t_star(cfg, &wt, cfg.pow(1 + cfg.p, d as u64))?;
        let bwd = t_star(cfg, &w, 1)?;
        Ok(InvolutionMap {
            level: n,
            forward: power_table(&fwd, &wt, d)?,
            back: power_table(&bwd, &w, d)?,
            omega: w,
            twisted: wt,
        })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn apply(&self, f: &IwasawaPoly) -> Result<IwasawaPoly> {
        Ok(combine(f.config(), &f.rem(&self.omega)?, &self.forward))
    }

    pub fn apply_back(&self, g: &IwasawaPoly) -> Result<IwasawaPoly> {
        Ok(combine(g.config(), &g.rem(&self.twisted)?, &self.back))
    }
}

/// Substitute `T*` into a polynomial and reduce mod `ω_n`. This is a map on
/// `Z/p^N[T]`, not on the quotient.
pub fn substitute_t_star(f: &IwasawaPoly, n: u32) -> Result<IwasawaPoly> {
    let cfg = f.config();
    let w = omega(cfg, n)?;
    let ts = t_star(cfg, &w, 1)?;
    f.compose_mod(&ts, &w)
}

/// Measured form of `ω_n*` inside `Λ/(ω_n, p^N)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaStarReport {
    pub level: u32,
    /// `ω_n*` reduced mod `ω_n`; it turns out to be a constant.
    pub reduced: IwasawaPoly,
    pub is_constant: bool,
    /// `v_p` of the reduced element, `N` when it vanishes.
    pub valuation: u32,
}

/// Compute `ω_n*` modulo `ω_n` and report its valuation, for comparing
/// against a relation of the form `ω_n + t ω_n* = p^{n-1} c`.
pub fn omega_star_valuation(cfg: PrimeConfig, n: u32) -> Result<OmegaStarReport> {
    let w = omega(cfg, n)?;
    let ws = substitute_t_star(&w, n)?;
    let valuation = ws.content_valuation();
    Ok(OmegaStarReport {
        level: n,
        is_constant: ws.degree().unwrap_or(0) == 0,
        reduced: ws,
        valuation,
    })
}

/// Residuals of the tower identities at level `n`; all are zero when the
/// identities hold.
#[derive(Clone, Debug)]
pub struct IdentityCheck {
    pub level: u32,
    pub omega_divides: bool,
    pub nu_decomposition: bool,
    pub omega_power: bool,
    pub nu_mod_omega_is_p: bool,
}

impl IdentityCheck {
    pub fn all(&self) -> bool {
        self.omega_divides && self.nu_decomposition && self.omega_power && self.nu_mod_omega_is_p
    }
}

pub fn check_identities(cfg: PrimeConfig, n: u32) -> Result<IdentityCheck> {
    let w = omega(cfg, n)?;
    let w1 = omega(cfg, n + 1)?;
    let (qn, rem) = w1.div_rem(&w)?;
    let v = nu(cfg, n)?;
    let u = u_poly(cfg).compose(&w);
    let p = cfg.p;
    let rhs = w.pow(p - 1).add(&u.scale(p));
    let wp = w.pow(p);
    let rhs2 = w1.sub(&w.mul(&u).scale(p));
    let vm = v.rem(&w)?;
    Ok(IdentityCheck {
        level: n,
        omega_divides: rem.is_zero() && qn == v,
        nu_decomposition: v == rhs,
        omega_power: wp == rhs2,
        nu_mod_omega_is_p: vm == IwasawaPoly::constant(cfg, p as i64),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(p: u64, n: u32) -> PrimeConfig {
        PrimeConfig::new(p, n).unwrap()
    }

    #[test]
    fn omega_two_for_three() {
        let w = omega(cfg(3, 6), 2).unwrap();
        assert_eq!(w.coeffs(), &[0, 3, 3, 1]);
        assert_eq!(nu(cfg(3, 6), 1).unwrap().coeffs(), &[3, 3, 1]);
    }

    #[test]
    fn degree_cap_is_enforced() {
        let c = cfg(3, 6).with_degree_cap(9);
        assert!(omega(c, 3).is_ok());
        assert!(matches!(omega(c, 4), Err(Error::PrecisionOverflow(_))));
    }

    #[test]
    fn omega_matches_integer_binomials() {
        // independent route: exact integer coefficients, then reduce
        for p in [3u64, 5] {
            let c = cfg(p, 8);
            for n in 1..=3 {
                let exact = IntPoly::omega(p, n - 1);
                let red: Vec<u64> =
                    exact.0.iter().map(|&x| c.reduce_i128(x)).collect();
                assert_eq!(omega(c, n).unwrap(), IwasawaPoly::new(c, red));
            }
        }
    }

    #[test]
    fn involution_example() {
        let c = cfg(3, 8);
        let t = IwasawaPoly::t(c);
        let ts = involution(&t, 2).unwrap();
        let wt = omega_twisted(c, 2).unwrap();
        let back = ts.mul_mod(&IwasawaPoly::new(c, vec![1, 1]), &wt).unwrap();
        assert_eq!(back, IwasawaPoly::from_ints(c, &[3, -1]));
        assert_eq!(involution_back(&ts, 2).unwrap(), t);
    }

    #[test]
    fn naive_reduction_is_not_an_involution() {
        // composing twice mod ω_2 drifts by a multiple of p^n once N > n
        let c = cfg(3, 8);
        let f = IwasawaPoly::from_ints(c, &[1, 2, 0, 0, 1]);
        let once = substitute_t_star(&f, 2).unwrap();
        let twice = substitute_t_star(&once, 2).unwrap();
        let w = omega(c, 2).unwrap();
        let diff = twice.sub(&f.rem(&w).unwrap());
        assert!(!diff.is_zero());
        assert!(diff.content_valuation() >= 2);
    }

    #[test]
    fn omega_star_constant() {
        for n in 1..=3 {
            let r = omega_star_valuation(cfg(3, 12), n).unwrap();
            assert!(r.is_constant);
            assert_eq!(r.valuation, n);
        }
    }

    #[test]
    fn ideal_membership() {
        let c = cfg(3, 4);
        let id = QuotientIdeal::level(c, 2)
            .unwrap()
            .with_generator(IwasawaPoly::from_ints(c, &[-3, 1]));
        // ω_2 ≡ (3+1)^3 - 1 = 63 mod (T - 3), so 63 = 9*7 is in the ideal
        assert!(id.contains(&IwasawaPoly::constant(c, 9)).unwrap());
        assert!(!id.contains(&IwasawaPoly::constant(c, 3)).unwrap());
        assert!(QuotientIdeal::new(c, vec![IwasawaPoly::from_ints(c, &[1, 3])]).is_err());
    }
}
