//! Annihilators, order profiles and unit multiples of single elements.

use super::gamma::{Elem, GammaModule};
use crate::error::{Error, Result};
use crate::lambda_ring::{is_distinguished, weierstrass_prepare, IwasawaPoly, QuotientIdeal};
use crate::linalg::{solve, Howell};
use serde::Serialize;

/// Default degree bound for relation lattices: `2r + deg ω_level`.
pub fn default_degree_bound(m: &GammaModule) -> usize {
    2 * m.rank() + m.p().pow(m.level().saturating_sub(1)) as usize
}

/// `{g : deg g ≤ D, g(T) b = 0}` as a lattice over `Z/p^E`.
///
/// Columns are `[T^i b embedded | coefficient of T^D, ..., T^0]`, so a Howell
/// row whose pivot is the coefficient of `T^k` has degree exactly `k`.
#[derive(Clone, Debug)]
pub struct RelationLattice {
    pub degree_bound: usize,
    rank: usize,
    kernel: Howell,
}

impl RelationLattice {
    pub fn new(m: &GammaModule, b: &[u64], degree_bound: usize) -> Self {
        let r = m.rank();
        let d = degree_bound;
        let mut rows = vec![];
        let mut x = m.reduce(b);
        for i in 0..=d {
            let mut row = m.embed(&x);
            let mut coef = vec![0; d + 1];
            coef[d - i] = 1;
            row.extend(coef);
            rows.push(row);
            x = m.apply_t(&x);
        }
        let h = Howell::new(m.ring(), r + d + 1, rows);
        let kern: Vec<Vec<u64>> = h.rows_from(r).into_iter().map(|row| row[r..].to_vec()).collect();
        RelationLattice { degree_bound: d, rank: r, kernel: Howell::new(m.ring(), d + 1, kern) }
    }

    fn to_poly(&self, m: &GammaModule, row: &[u64]) -> IwasawaPoly {
        let d = self.degree_bound;
        let coeffs: Vec<u64> = (0..=d).map(|k| row[d - k]).collect();
        IwasawaPoly::new(m.config(), coeffs)
    }

    /// `Z_p`-basis of the lattice as polynomials.
    pub fn generators(&self, m: &GammaModule) -> Vec<IwasawaPoly> {
        self.kernel.rows().iter().map(|r| self.to_poly(m, r)).collect()
    }

    /// Least-degree monic element.
    pub fn minimal_monic(&self, m: &GammaModule) -> Option<IwasawaPoly> {
        self.kernel
            .rows()
            .iter()
            .zip(self.kernel.pivots())
            .filter(|(_, &(_, k))| k == 0)
            .max_by_key(|(_, &(c, _))| c)
            .map(|(row, _)| self.to_poly(m, row))
    }

    /// Does the lattice contain `g` (truncated to the degree bound)?
    pub fn contains(&self, g: &IwasawaPoly) -> bool {
        let d = self.degree_bound;
        if g.degree().is_some_and(|x| x > d) {
            return false;
        }
        let v: Vec<u64> = (0..=d).map(|i| g.coeff(d - i) % self.kernel.ring().modulus()).collect();
        self.kernel.contains(&v)
    }

    pub fn module_rank(&self) -> usize {
        self.rank
    }
}

/// Minimal monic annihilator of `b`, normalised to be distinguished.
pub fn minimal_annihilator(m: &GammaModule, b: &[u64]) -> Result<IwasawaPoly> {
    minimal_annihilator_with_bound(m, b, default_degree_bound(m))
}

pub fn minimal_annihilator_with_bound(m: &GammaModule, b: &[u64], d: usize) -> Result<IwasawaPoly> {
    let lat = RelationLattice::new(m, b, d);
    let f = lat
        .minimal_monic(m)
        .ok_or_else(|| Error::Precondition(format!("no monic annihilator of degree ≤ {d}")))?;
    if f.degree() == Some(0) {
        return Ok(f);
    }
    if is_distinguished(&f) {
        return Ok(f);
    }
    // a monic annihilator of a p-group element with T nilpotent mod p is
    // distinguished up to the ideal; prepare to be safe
    let pr = weierstrass_prepare(&f, &QuotientIdeal::precision(m.config()))?;
    Ok(pr.poly)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderProfile {
    /// `ord(T^i b)` for `i < len`.
    pub q_list: Vec<u64>,
    /// Indices `i` with `q_i > q_{i+1}`.
    pub jumps: Vec<usize>,
    /// Reference exponent used for `ell`.
    pub q: u64,
    /// `p-rank(q M)`.
    pub ell: usize,
    /// `ord(T^{ell-1} b) = exp(M) > ord(T^ell b)`.
    pub ell_witness: bool,
    pub monotone: bool,
}

/// Orders along the orbit of `b`. `q` defaults to `exp(M)/p`.
pub fn order_profile(m: &GammaModule, b: &[u64], q: Option<u64>) -> OrderProfile {
    order_profile_len(m, b, q, m.rank())
}

pub fn order_profile_len(m: &GammaModule, b: &[u64], q: Option<u64>, len: usize) -> OrderProfile {
    let mut q_list = vec![];
    let mut x = m.reduce(b);
    for _ in 0..len.max(1) {
        q_list.push(m.order(&x));
        x = m.apply_t(&x);
    }
    let jumps: Vec<usize> = (0..len.saturating_sub(1)).filter(|&i| q_list[i] > q_list[i + 1]).collect();
    let monotone = q_list.windows(2).all(|w| w[0] >= w[1]);
    let exp = m.p().pow(m.exp_log());
    let q = q.unwrap_or((exp / m.p()).max(1));
    let qm: Vec<Elem> = (0..m.rank()).map(|i| m.scale(q, &m.basis(i))).collect();
    let ell = m.span(&qm).p_rank(m);
    let ell_witness = ell >= 1
        && m.order(&m.apply_t_pow(b, ell - 1)) == exp
        && m.order(&m.apply_t_pow(b, ell)) < exp;
    OrderProfile { q_list, jumps, q, ell, ell_witness, monotone }
}

/// `c(T)` with `z = c(T) y` and `c(0)` a unit, if one exists.
pub fn express_as_unit_multiple(m: &GammaModule, y: &[u64], z: &[u64]) -> Option<IwasawaPoly> {
    let y = m.reduce(y);
    let z = m.reduce(z);
    if m.is_zero(&y) {
        return m.is_zero(&z).then(|| IwasawaPoly::one(m.config()));
    }
    let d = default_degree_bound(m);
    let mut gens = vec![];
    let mut x = y.clone();
    for _ in 0..=d {
        gens.push(m.embed(&x));
        x = m.apply_t(&x);
    }
    let c = solve(m.ring(), &gens, &m.embed(&z))?;
    let cfg = m.config();
    if !cfg.is_unit(c[0]) {
        return None;
    }
    Some(IwasawaPoly::new(cfg, c))
}

/// `c(T)` with `z = c(T) y`, no unit condition.
pub fn express_as_multiple(m: &GammaModule, y: &[u64], z: &[u64]) -> Option<IwasawaPoly> {
    let d = default_degree_bound(m);
    let mut gens = vec![];
    let mut x = m.reduce(y);
    for _ in 0..=d {
        gens.push(m.embed(&x));
        x = m.apply_t(&x);
    }
    let c = solve(m.ring(), &gens, &m.embed(&m.reduce(z)))?;
    Some(IwasawaPoly::new(m.config(), c))
}

/// Does `f`, after normalising its leading unit, look like `T^r - c w(T)`
/// with `w(0)` a unit? Every lower coefficient must be divisible by `c`
/// and the constant term must have valuation exactly `v_p(c)`.
pub fn binomial_shape(f: &IwasawaPoly, c: u64) -> bool {
    let cfg = f.config();
    let Some(r) = f.degree() else { return false };
    if r == 0 {
        return false;
    }
    let lead = f.leading();
    let f = match cfg.inv(lead) {
        Some(u) => f.scale(u),
        None => return false,
    };
    let vc = cfg.valuation(c);
    (0..r).all(|i| cfg.valuation(f.coeff(i)) >= vc) && cfg.valuation(f.coeff(0)) == vc
}

/// Search for `head(T) - c w(T)` annihilating `b` with `w(0)` a unit: solve
/// `head(T) b = w(T) (c b)`.
pub fn find_binomial_annihilator(
    m: &GammaModule,
    b: &[u64],
    head: &IwasawaPoly,
    c: u64,
) -> Option<IwasawaPoly> {
    let target = m.act(head, b);
    let cb = m.scale(c, b);
    let w = express_as_unit_multiple(m, &cb, &target)?;
    Some(head.sub(&w.scale(c)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda_ring::omega;
    use crate::pgroup_module::hom::quotient;
    use crate::PrimeConfig;

    fn tower_module(f: &[i64], n: u32) -> GammaModule {
        let c = PrimeConfig::new(3, 10).unwrap();
        let r = GammaModule::ring_quotient(&omega(c, n).unwrap(), n).unwrap();
        let fp = IwasawaPoly::from_ints(c, f);
        let d = r.rank();
        let w = r.lambda_span(&[crate::lambda_ring::to_dense(&fp.rem(&omega(c, n).unwrap()).unwrap(), d)]);
        quotient(&r, &w).unwrap().module
    }

    #[test]
    fn t_minus_three_annihilator() {
        for n in 1..=3 {
            let m = tower_module(&[-3, 1], n);
            let b = m.generator.clone().unwrap();
            let f = minimal_annihilator(&m, &b).unwrap();
            assert_eq!(f.degree(), Some(1));
            let diff = f.sub(&IwasawaPoly::from_ints(m.config(), &[-3, 1]));
            assert!(m.is_zero(&m.act(&diff, &b)));
        }
    }

    #[test]
    fn annihilator_degree_is_minimal_by_enumeration() {
        let m = tower_module(&[6, 3, 1], 2);
        let b = m.generator.clone().unwrap();
        let f = minimal_annihilator(&m, &b).unwrap();
        assert_eq!(f.degree(), Some(m.rank()));
        assert!(m.is_zero(&m.act(&f, &b)));
        let e = m.p().pow(m.exp_log());
        for k in 0..m.rank() {
            for idx in 0..e.pow(k as u32) {
                let mut coeffs: Vec<u64> = (0..k).map(|i| idx / e.pow(i as u32) % e).collect();
                coeffs.push(1);
                let g = IwasawaPoly::new(m.config(), coeffs);
                assert!(!m.is_zero(&m.act(&g, &b)), "{g} kills b");
            }
        }
    }

    #[test]
    fn binomial_detector() {
        let c = PrimeConfig::new(3, 6).unwrap();
        assert!(binomial_shape(&IwasawaPoly::from_ints(c, &[-3, 0, 1]), 3));
        assert!(!binomial_shape(&IwasawaPoly::from_ints(c, &[9, 3, 1]), 3));
        assert!(binomial_shape(&IwasawaPoly::from_ints(c, &[-3, 9, 1]), 3));
    }

    #[test]
    fn flat_profile_has_no_jumps() {
        let c = PrimeConfig::new(3, 10).unwrap();
        let r = GammaModule::ring_quotient(&omega(c, 2).unwrap(), 2).unwrap();
        let q = quotient(&r, &r.p_power_submodule(2)).unwrap().module;
        let b = q.generator.clone().unwrap();
        let prof = order_profile(&q, &b, None);
        assert_eq!(prof.q_list, vec![9, 9, 9]);
        assert!(prof.jumps.is_empty());
        assert_eq!(prof.ell, 3);
    }
}
