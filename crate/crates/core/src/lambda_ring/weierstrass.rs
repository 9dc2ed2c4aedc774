//! Weierstrass preparation at finite precision.

use super::{IwasawaPoly, QuotientIdeal};
use crate::error::{Error, Result};

/// Monic with every lower coefficient divisible by `p`.
pub fn is_distinguished(f: &IwasawaPoly) -> bool {
    let cfg = f.config();
    match f.degree() {
        None => false,
        Some(d) => f.is_monic() && f.coeffs()[..d].iter().all(|&c| c % cfg.p == 0),
    }
}

/// Distinguished with `v_p(f(0)) = 1`.
pub fn is_eisenstein(f: &IwasawaPoly) -> bool {
    is_distinguished(f) && f.degree() != Some(0) && f.config().valuation(f.coeff(0)) == 1
}

#[derive(Clone, Debug)]
pub struct Prepared {
    /// Distinguished generator of `(g) + I`; `1` when `g` is a unit.
    pub poly: IwasawaPoly,
    /// Cofactor with unit constant term: `g ≡ poly * unit`.
    pub unit: IwasawaPoly,
    pub is_unit: bool,
}

/// Find the distinguished `P` with `(P) + I = (g) + I`.
///
/// Takes the Weierstrass degree `r` of `g` reduced mod `I`, then lifts the
/// factorisation `g ≡ T^r * h` (mod `p`) one `p`-adic digit at a time. The
/// result is certified by mutual membership modulo `I`.
pub fn weierstrass_prepare(g: &IwasawaPoly, ideal: &QuotientIdeal) -> Result<Prepared> {
    let cfg = g.config();
    let p = cfg.p;
    let g = ideal.reduce(g);
    if g.is_zero() {
        return Err(Error::NotPreparable("g vanishes modulo the ideal".into()));
    }
    if cfg.is_unit(g.coeff(0)) {
        return Ok(Prepared { poly: IwasawaPoly::one(cfg), unit: g, is_unit: true });
    }
    let r = g.weierstrass_degree().ok_or_else(|| {
        Error::NotPreparable(format!("{g} has no unit coefficient (positive μ)"))
    })?;

    let mut pp = IwasawaPoly::monomial(cfg, 1, r);
    let mut q = IwasawaPoly::new(cfg, g.coeffs()[r..].to_vec());
    let q0: Vec<u64> = q.coeffs().iter().map(|c| c % p).collect();
    let t = series_inverse_mod_p(&q0, r, p);

    for k in 1..cfg.precision {
        let diff = g.sub(&pp.mul(&q));
        if diff.is_zero() {
            break;
        }
        let pk = p.pow(k);
        debug_assert!(diff.coeffs().iter().all(|c| c % pk == 0));
        let e: Vec<u64> = diff.coeffs().iter().map(|c| c / pk % p).collect();
        let te = mul_mod_p(&t, &e, p);
        let dp: Vec<u64> = (0..r).map(|i| te.get(i).copied().unwrap_or(0)).collect();
        let qdp = mul_mod_p(&q0, &dp, p);
        let len = e.len().max(qdp.len());
        let resid: Vec<u64> = (0..len)
            .map(|i| {
                let a = e.get(i).copied().unwrap_or(0);
                let b = qdp.get(i).copied().unwrap_or(0);
                (a + p - b) % p
            })
            .collect();
        debug_assert!(resid.iter().take(r).all(|&x| x == 0));
        let dq: Vec<u64> = resid.into_iter().skip(r).collect();
        pp = pp.add(&IwasawaPoly::new(cfg, dp).scale(pk));
        q = q.add(&IwasawaPoly::new(cfg, dq).scale(pk));
    }

    if !g.sub(&pp.mul(&q)).is_zero() {
        return Err(Error::NotPreparable("Hensel lifting did not converge".into()));
    }
    certify(&g, &pp, &q, ideal)?;
    Ok(Prepared { poly: pp, unit: q, is_unit: false })
}

fn certify(g: &IwasawaPoly, pp: &IwasawaPoly, q: &IwasawaPoly, ideal: &QuotientIdeal) -> Result<()> {
    let cfg = g.config();
    if !cfg.is_unit(q.coeff(0)) {
        return Err(Error::NotPreparable("cofactor is not a unit".into()));
    }
    let Some(base) = ideal.base() else {
        // without a monic modulus the cofactor is only a unit power series
        return Ok(());
    };
    let qi = inverse_mod(q, base)?;
    let back = g.mul(&qi).rem(base)?;
    if !ideal.contains(&back.sub(pp))? {
        return Err(Error::NotPreparable("P is not in (g) + I".into()));
    }
    Ok(())
}

/// Inverse of a polynomial with unit constant term in `Z/p^N[T]/(m)`, `m`
/// distinguished, by Newton iteration.
pub fn inverse_mod(q: &IwasawaPoly, m: &IwasawaPoly) -> Result<IwasawaPoly> {
    let cfg = q.config();
    let c0 = cfg
        .inv(q.coeff(0))
        .ok_or_else(|| Error::NotPreparable("constant term is not a unit".into()))?;
    let one = IwasawaPoly::one(cfg);
    let two = IwasawaPoly::constant(cfg, 2);
    let mut x = IwasawaPoly::constant(cfg, c0 as i64);
    let q = q.rem(m)?;
    for _ in 0..80 {
        let e = q.mul_mod(&x, m)?;
        if e == one {
            return Ok(x);
        }
        x = x.mul_mod(&two.sub(&e), m)?;
    }
    Err(Error::NotPreparable("inverse iteration did not converge".into()))
}

fn mul_mod_p(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    out
}

/// First `n` coefficients of `1/q` over `F_p`, `q(0) != 0`.
fn series_inverse_mod_p(q: &[u64], n: usize, p: u64) -> Vec<u64> {
    let inv0 = (1..p).find(|&x| x * q[0] % p == 1).unwrap();
    let mut out = vec![0u64; n];
    for k in 0..n {
        let mut s = u64::from(k == 0);
        for j in 1..=k {
            let qj = q.get(j).copied().unwrap_or(0);
            s = (s + p * p - qj * out[k - j] % p) % p;
        }
        out[k] = s * inv0 % p;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::PrimeConfig;

    #[test]
    fn strips_unit_factor() {
        let c = PrimeConfig::new(3, 9).unwrap();
        let g = IwasawaPoly::from_ints(c, &[1, 1]).mul(&IwasawaPoly::from_ints(c, &[-3, 1]));
        let id = QuotientIdeal::level(c, 3).unwrap();
        let pr = weierstrass_prepare(&g, &id).unwrap();
        assert_eq!(pr.poly, IwasawaPoly::from_ints(c, &[-3, 1]));
        assert!(is_eisenstein(&pr.poly));
    }

    #[test]
    fn unit_and_zero_inputs() {
        let c = PrimeConfig::new(5, 4).unwrap();
        let id = QuotientIdeal::level(c, 2).unwrap();
        let pr = weierstrass_prepare(&IwasawaPoly::from_ints(c, &[2, 5]), &id).unwrap();
        assert!(pr.is_unit);
        assert_eq!(pr.poly, IwasawaPoly::one(c));
        assert!(weierstrass_prepare(&IwasawaPoly::zero(c), &id).is_err());
        assert!(weierstrass_prepare(&IwasawaPoly::from_ints(c, &[5, 5]), &id).is_err());
    }

    #[test]
    fn shape_predicates() {
        let c = PrimeConfig::new(3, 5).unwrap();
        assert!(is_eisenstein(&IwasawaPoly::from_ints(c, &[-3, 0, 1])));
        assert!(!is_eisenstein(&IwasawaPoly::from_ints(c, &[9, 3, 1])));
        assert!(is_distinguished(&IwasawaPoly::from_ints(c, &[9, 3, 1])));
        assert!(!is_distinguished(&IwasawaPoly::from_ints(c, &[9, 1, 1])));
    }
}
