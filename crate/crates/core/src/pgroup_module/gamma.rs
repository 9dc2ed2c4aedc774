use crate::arith::PrimeConfig;
use crate::error::{Error, Result};
use crate::lambda_ring::IwasawaPoly;
use crate::linalg::{fp, Howell};
use std::collections::BTreeMap;

/// Coordinates with respect to the standard generators `g_1, ..., g_r`.
pub type Elem = Vec<u64>;

/// A finite abelian `p`-group `⊕ Z/p^{e_i}` (`e_1 ≥ ... ≥ e_r ≥ 1`) with a
/// `Γ`-action given by the matrix of `τ`.
///
/// Matrices use the column convention: `(τx)_i = Σ_j τ[i][j] x_j mod p^{e_i}`,
/// so column `j` holds the coordinates of `τ g_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaModule {
    cfg: PrimeConfig,
    orders: Vec<u32>,
    tau: Vec<Vec<u64>>,
    level: u32,
    pub generator: Option<Elem>,
    pub labels: BTreeMap<String, Elem>,
}

/// Check `m[i][j] ≡ 0 mod p^{max(0, t_i - s_j)}` for a map `⊕Z/p^{s_j} → ⊕Z/p^{t_i}`.
pub fn hom_condition(p: u64, source: &[u32], target: &[u32], m: &[Vec<u64>]) -> Result<()> {
    if m.len() != target.len() || m.iter().any(|r| r.len() != source.len()) {
        return Err(Error::InvalidHom(format!(
            "matrix shape does not match {}x{}",
            target.len(),
            source.len()
        )));
    }
    for (i, row) in m.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            let need = target[i].saturating_sub(source[j]);
            if need > 0 && x % p.pow(need) != 0 {
                return Err(Error::InvalidHom(format!(
                    "entry ({i},{j}) = {x} must be divisible by {p}^{need}"
                )));
            }
        }
    }
    Ok(())
}

/// `A x` for `x` in `⊕Z/p^{s_j}`, reduced into `⊕Z/p^{t_i}`.
pub fn apply_matrix(p: u64, target: &[u32], m: &[Vec<u64>], x: &[u64]) -> Elem {
    m.iter()
        .zip(target)
        .map(|(row, &t)| {
            let md = p.pow(t) as u128;
            let mut s: u128 = 0;
            for (a, b) in row.iter().zip(x) {
                s = (s + (*a as u128 % md) * (*b as u128 % md)) % md;
            }
            s as u64
        })
        .collect()
}

/// `A B` where `B: S → M` and `A: M → H`.
pub fn compose_matrices(p: u64, target: &[u32], a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let cols = b.first().map_or(0, |r| r.len());
    let mut out = vec![vec![0; cols]; a.len()];
    for j in 0..cols {
        let col: Vec<u64> = b.iter().map(|r| r[j]).collect();
        let img = apply_matrix(p, target, a, &col);
        for i in 0..a.len() {
            out[i][j] = img[i];
        }
    }
    out
}

pub(crate) fn embed_with(p: u64, orders: &[u32], e: u32, x: &[u64]) -> Vec<u64> {
    let m = p.pow(e) as u128;
    x.iter()
        .zip(orders)
        .map(|(&xi, &ei)| ((xi as u128 * p.pow(e - ei) as u128) % m) as u64)
        .collect()
}

pub(crate) fn unembed_with(p: u64, orders: &[u32], e: u32, v: &[u64]) -> Elem {
    v.iter()
        .zip(orders)
        .map(|(&vi, &ei)| {
            let s = p.pow(e - ei);
            debug_assert_eq!(vi % s, 0);
            (vi / s) % p.pow(ei)
        })
        .collect()
}

impl GammaModule {
    /// Validated construction.
    pub fn new(cfg: PrimeConfig, orders: Vec<u32>, tau: Vec<Vec<u64>>, level: u32) -> Result<Self> {
        let m = Self::assemble(cfg, orders, tau, level)?;
        let pw = m.tau_power(cfg.p.pow(level.saturating_sub(1)));
        if pw != m.identity() {
            return Err(Error::InvalidModule(format!(
                "τ^(p^{}) is not the identity, so ω_{level} does not annihilate",
                level.saturating_sub(1)
            )));
        }
        Ok(m)
    }

    /// Construction with the level computed as the least `n` with `τ^{p^{n-1}} = 1`.
    pub fn with_auto_level(cfg: PrimeConfig, orders: Vec<u32>, tau: Vec<Vec<u64>>) -> Result<Self> {
        let mut m = Self::assemble(cfg, orders, tau, 1)?;
        let mut pw = m.tau.clone();
        let mut level = 1;
        while pw != m.identity() {
            pw = m.mat_pow(&pw, cfg.p);
            level += 1;
            if level > 64 {
                return Err(Error::InvalidModule("τ has no p-power order".into()));
            }
        }
        m.level = level;
        Ok(m)
    }

    fn assemble(cfg: PrimeConfig, orders: Vec<u32>, tau: Vec<Vec<u64>>, level: u32) -> Result<Self> {
        if orders.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidModule(format!("orders {orders:?} are not non-increasing")));
        }
        if orders.iter().any(|&e| e == 0) {
            return Err(Error::InvalidModule("zero order component".into()));
        }
        if orders.first().is_some_and(|&e| e > cfg.precision) {
            return Err(Error::PrecisionOverflow(format!(
                "component order p^{} exceeds the working precision p^{}",
                orders[0], cfg.precision
            )));
        }
        hom_condition(cfg.p, &orders, &orders, &tau)?;
        let p = cfg.p;
        let tau: Vec<Vec<u64>> = tau
            .into_iter()
            .zip(&orders)
            .map(|(row, &e)| row.into_iter().map(|x| x % p.pow(e)).collect())
            .collect();
        let roof: Vec<Vec<u64>> = tau.iter().map(|r| r.iter().map(|x| x % p).collect()).collect();
        if fp::rank(p, &roof) != orders.len() {
            return Err(Error::InvalidModule("τ is not invertible".into()));
        }
        Ok(GammaModule { cfg, orders, tau, level, generator: None, labels: BTreeMap::new() })
    }

    pub fn zero(cfg: PrimeConfig) -> Self {
        GammaModule { cfg, orders: vec![], tau: vec![], level: 1, generator: None, labels: BTreeMap::new() }
    }

    /// `Z/p^N[T]/(m)` for a monic `m` with `(1+T)` of `p`-power order modulo `m`.
    pub fn ring_quotient(m: &IwasawaPoly, level: u32) -> Result<Self> {
        let cfg = m.config();
        let d = m.degree().ok_or_else(|| Error::InvalidModule("zero modulus".into()))?;
        let tp1 = IwasawaPoly::new(cfg, vec![1, 1]);
        let mut tau = vec![vec![0; d]; d];
        for j in 0..d {
            let img = IwasawaPoly::monomial(cfg, 1, j).mul(&tp1).rem(m)?;
            for i in 0..d {
                tau[i][j] = img.coeff(i);
            }
        }
        let mut g = Self::new(cfg, vec![cfg.precision; d], tau, level)?;
        let mut one = vec![0; d];
        if d > 0 {
            one[0] = 1;
        }
        g.generator = Some(one);
        Ok(g)
    }

    /// `Z/p^N[T]/(m)` for any monic `m`, with `level` recorded but not
    /// checked. Only meant as a presentation to be divided by `ω_level`.
    pub fn ring_quotient_unleveled(m: &IwasawaPoly, level: u32) -> Result<Self> {
        let cfg = m.config();
        let d = m.degree().ok_or_else(|| Error::InvalidModule("zero modulus".into()))?;
        let tp1 = IwasawaPoly::new(cfg, vec![1, 1]);
        let mut tau = vec![vec![0; d]; d];
        for j in 0..d {
            let img = IwasawaPoly::monomial(cfg, 1, j).mul(&tp1).rem(m)?;
            for i in 0..d {
                tau[i][j] = img.coeff(i);
            }
        }
        let mut g = Self::assemble(cfg, vec![cfg.precision; d], tau, level)?;
        let mut one = vec![0; d];
        if d > 0 {
            one[0] = 1;
        }
        g.generator = Some(one);
        Ok(g)
    }

    pub fn with_generator(mut self, g: Elem) -> Self {
        self.generator = Some(self.reduce(&g));
        self
    }

    pub fn config(&self) -> PrimeConfig {
        self.cfg
    }

    pub fn p(&self) -> u64 {
        self.cfg.p
    }

    pub fn orders(&self) -> &[u32] {
        &self.orders
    }

    pub fn tau(&self) -> &[Vec<u64>] {
        &self.tau
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    /// `log_p exp(M)`.
    pub fn exp_log(&self) -> u32 {
        self.orders.first().copied().unwrap_or(0)
    }

    /// `log_p sexp(M)` (subexponent, the least component order).
    pub fn sexp_log(&self) -> u32 {
        self.orders.last().copied().unwrap_or(0)
    }

    /// `log_p |M|`.
    pub fn log_order(&self) -> u32 {
        self.orders.iter().sum()
    }

    /// Ring `Z/p^E` with `E = log_p exp(M)` (at least 1).
    pub fn ring(&self) -> PrimeConfig {
        PrimeConfig::new(self.cfg.p, self.exp_log().max(1)).expect("valid")
    }

    pub fn identity(&self) -> Vec<Vec<u64>> {
        let r = self.rank();
        (0..r).map(|i| (0..r).map(|j| u64::from(i == j)).collect()).collect()
    }

    pub fn zero_elem(&self) -> Elem {
        vec![0; self.rank()]
    }

    pub fn basis(&self, i: usize) -> Elem {
        let mut v = self.zero_elem();
        v[i] = 1;
        v
    }

    pub fn reduce(&self, x: &[u64]) -> Elem {
        x.iter().zip(&self.orders).map(|(&a, &e)| a % self.cfg.p.pow(e)).collect()
    }

    pub fn from_ints(&self, x: &[i64]) -> Elem {
        x.iter()
            .zip(&self.orders)
            .map(|(&a, &e)| {
                let m = self.cfg.p.pow(e) as i64;
                a.rem_euclid(m) as u64
            })
            .collect()
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> Elem {
        x.iter()
            .zip(y)
            .zip(&self.orders)
            .map(|((&a, &b), &e)| (a + b) % self.cfg.p.pow(e))
            .collect()
    }

    pub fn sub(&self, x: &[u64], y: &[u64]) -> Elem {
        self.add(x, &self.neg(y))
    }

    pub fn neg(&self, x: &[u64]) -> Elem {
        x.iter()
            .zip(&self.orders)
            .map(|(&a, &e)| {
                let m = self.cfg.p.pow(e);
                (m - a % m) % m
            })
            .collect()
    }

    pub fn scale(&self, c: u64, x: &[u64]) -> Elem {
        x.iter()
            .zip(&self.orders)
            .map(|(&a, &e)| {
                let m = self.cfg.p.pow(e) as u128;
                ((c as u128 % m) * a as u128 % m) as u64
            })
            .collect()
    }

    pub fn scale_i(&self, c: i64, x: &[u64]) -> Elem {
        let m = self.cfg.modulus() as i128;
        self.scale((c as i128).rem_euclid(m) as u64, x)
    }

    pub fn is_zero(&self, x: &[u64]) -> bool {
        x.iter().all(|&a| a == 0)
    }

    /// `log_p ord(x)`.
    pub fn order_log(&self, x: &[u64]) -> u32 {
        x.iter()
            .zip(&self.orders)
            .map(|(&a, &e)| if a == 0 { 0 } else { e - self.cfg.valuation(a).min(e) })
            .max()
            .unwrap_or(0)
    }

    pub fn order(&self, x: &[u64]) -> u64 {
        self.cfg.p.pow(self.order_log(x))
    }

    pub fn apply(&self, m: &[Vec<u64>], x: &[u64]) -> Elem {
        apply_matrix(self.cfg.p, &self.orders, m, x)
    }

    pub fn apply_tau(&self, x: &[u64]) -> Elem {
        self.apply(&self.tau, x)
    }

    /// `T x = τx - x`.
    pub fn apply_t(&self, x: &[u64]) -> Elem {
        self.sub(&self.apply_tau(x), x)
    }

    pub fn apply_t_pow(&self, x: &[u64], k: usize) -> Elem {
        let mut y = x.to_vec();
        for _ in 0..k {
            y = self.apply_t(&y);
        }
        y
    }

    /// Matrix of `T = τ - 1`.
    pub fn t_matrix(&self) -> Vec<Vec<u64>> {
        let id = self.identity();
        (0..self.rank())
            .map(|i| {
                let m = self.cfg.p.pow(self.orders[i]);
                (0..self.rank()).map(|j| (self.tau[i][j] + m - id[i][j]) % m).collect()
            })
            .collect()
    }

    pub fn mat_mul(&self, a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
        compose_matrices(self.cfg.p, &self.orders, a, b)
    }

    pub fn mat_pow(&self, a: &[Vec<u64>], mut e: u64) -> Vec<Vec<u64>> {
        let mut base = a.to_vec();
        let mut r = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mat_mul(&r, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mat_mul(&base, &base);
            }
        }
        r
    }

    pub fn tau_power(&self, e: u64) -> Vec<Vec<u64>> {
        self.mat_pow(&self.tau, e)
    }

    /// `τ^{-1} = τ^{p^{L-1} - 1}` where `L` is the level.
    pub fn tau_inverse(&self) -> Vec<Vec<u64>> {
        let ord = self.cfg.p.pow(self.level.saturating_sub(1));
        if ord <= 1 {
            return self.identity();
        }
        self.tau_power(ord - 1)
    }

    /// `f(T) x` by Horner's rule.
    pub fn act(&self, f: &IwasawaPoly, x: &[u64]) -> Elem {
        let mut acc = self.zero_elem();
        for &c in f.coeffs().iter().rev() {
            acc = self.add(&self.apply_t(&acc), &self.scale(c, x));
        }
        acc
    }

    /// Matrix of `f(T)`.
    pub fn poly_matrix(&self, f: &IwasawaPoly) -> Vec<Vec<u64>> {
        let r = self.rank();
        let cols: Vec<Elem> = (0..r).map(|j| self.act(f, &self.basis(j))).collect();
        (0..r).map(|i| (0..r).map(|j| cols[j][i]).collect()).collect()
    }

    /// Matrix of `Σ c_k A^k`.
    pub fn eval_matrix_poly(&self, coeffs: &[u64], a: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let r = self.rank();
        let mut acc = vec![vec![0; r]; r];
        for &c in coeffs.iter().rev() {
            acc = self.mat_mul(a, &acc);
            for i in 0..r {
                let m = self.cfg.p.pow(self.orders[i]) as u128;
                acc[i][i] = ((acc[i][i] as u128 + c as u128) % m) as u64;
            }
        }
        acc
    }

    pub fn embed(&self, x: &[u64]) -> Vec<u64> {
        embed_with(self.cfg.p, &self.orders, self.exp_log().max(1), x)
    }

    pub fn unembed(&self, v: &[u64]) -> Elem {
        unembed_with(self.cfg.p, &self.orders, self.exp_log().max(1), v)
    }

    /// Every element, in lexicographic order. Only for small modules.
    pub fn elements(&self) -> Vec<Elem> {
        let mut out = vec![self.zero_elem()];
        for (i, &e) in self.orders.iter().enumerate() {
            let m = self.cfg.p.pow(e);
            let mut next = Vec::with_capacity(out.len() * m as usize);
            for v in &out {
                for a in 0..m {
                    let mut w = v.clone();
                    w[i] = a;
                    next.push(w);
                }
            }
            out = next;
        }
        out
    }

    /// `p^k M`.
    pub fn p_power_submodule(&self, k: u32) -> Submodule {
        let pk = self.cfg.p.pow(k.min(self.exp_log()));
        let gens: Vec<Elem> = (0..self.rank()).map(|i| self.scale(pk, &self.basis(i))).collect();
        self.span(&gens)
    }

    /// `M[p^k] = {x : p^k x = 0}`.
    pub fn torsion_submodule(&self, k: u32) -> Submodule {
        let gens: Vec<Elem> = (0..self.rank())
            .map(|i| {
                let e = self.orders[i];
                self.scale(self.cfg.p.pow(e.saturating_sub(k)), &self.basis(i))
            })
            .collect();
        self.span(&gens)
    }

    /// The `Z_p`-span of some elements.
    pub fn span(&self, gens: &[Elem]) -> Submodule {
        let rows = gens.iter().map(|g| self.embed(&self.reduce(g))).collect();
        Submodule { lattice: Howell::new(self.ring(), self.rank(), rows) }
    }

    /// The `Λ`-span: `Z_p`-span closed under `T`.
    pub fn lambda_span(&self, gens: &[Elem]) -> Submodule {
        let mut all: Vec<Elem> = gens.to_vec();
        let mut sub = self.span(&all);
        loop {
            let imgs: Vec<Elem> = sub.generators(self).iter().map(|g| self.apply_t(g)).collect();
            let before = sub.log_order();
            all = sub.generators(self);
            all.extend(imgs);
            sub = self.span(&all);
            if sub.log_order() == before {
                return sub;
            }
        }
    }

    pub fn whole(&self) -> Submodule {
        let gens: Vec<Elem> = (0..self.rank()).map(|i| self.basis(i)).collect();
        self.span(&gens)
    }

    /// `T M`.
    pub fn t_image(&self) -> Submodule {
        let gens: Vec<Elem> = (0..self.rank()).map(|i| self.apply_t(&self.basis(i))).collect();
        self.span(&gens)
    }

    /// `f(T) M`.
    pub fn poly_image(&self, f: &IwasawaPoly) -> Submodule {
        let gens: Vec<Elem> = (0..self.rank()).map(|i| self.act(f, &self.basis(i))).collect();
        self.span(&gens)
    }

    /// `{x : f(T) x = 0}`.
    pub fn poly_kernel(&self, f: &IwasawaPoly) -> Submodule {
        let m = self.poly_matrix(f);
        super::hom::kernel_of(self, self, &m)
    }

    pub fn is_equivariant_endo(&self, m: &[Vec<u64>]) -> bool {
        self.mat_mul(m, &self.tau) == self.mat_mul(&self.tau, m)
    }
}

/// A subgroup of a [`GammaModule`], stored as a Howell lattice of embedded
/// coordinates.
#[derive(Clone, Debug)]
pub struct Submodule {
    lattice: Howell,
}

impl Submodule {
    pub fn lattice(&self) -> &Howell {
        &self.lattice
    }

    pub fn log_order(&self) -> u32 {
        self.lattice.log_size()
    }

    pub fn contains(&self, m: &GammaModule, x: &[u64]) -> bool {
        self.lattice.contains(&m.embed(&m.reduce(x)))
    }

    pub fn generators(&self, m: &GammaModule) -> Vec<Elem> {
        self.lattice.rows().iter().map(|r| m.unembed(r)).collect()
    }

    pub fn is_subset_of(&self, other: &Submodule) -> bool {
        other.lattice.contains_lattice(&self.lattice)
    }

    pub fn same_as(&self, other: &Submodule) -> bool {
        self.log_order() == other.log_order() && self.is_subset_of(other)
    }

    pub fn is_zero(&self) -> bool {
        self.log_order() == 0
    }

    pub fn sum(&self, m: &GammaModule, other: &Submodule) -> Submodule {
        let mut g = self.generators(m);
        g.extend(other.generators(m));
        m.span(&g)
    }

    /// `U ∩ W` from the lattice spanned by `[u | u]` and `[w | 0]`: rows
    /// vanishing on the first block carry exactly the intersection.
    pub fn intersect(&self, m: &GammaModule, other: &Submodule) -> Submodule {
        let r = m.rank();
        let mut rows = vec![];
        for u in self.lattice.rows() {
            let mut row = u.clone();
            row.extend_from_slice(u);
            rows.push(row);
        }
        for w in other.lattice.rows() {
            let mut row = w.clone();
            row.extend(std::iter::repeat(0).take(r));
            rows.push(row);
        }
        let h = Howell::new(m.ring(), 2 * r, rows);
        let tail: Vec<Vec<u64>> = h.rows_from(r).into_iter().map(|row| row[r..].to_vec()).collect();
        Submodule { lattice: Howell::new(m.ring(), r, tail) }
    }

    /// `F_p`-dimension of `U / pU`.
    pub fn p_rank(&self, m: &GammaModule) -> usize {
        let gens = self.generators(m);
        let pu: Vec<Elem> = gens.iter().map(|g| m.scale(m.p(), g)).collect();
        let pu = m.span(&pu);
        // |U/pU| = p^rank for a p-group
        (self.log_order() - pu.log_order()) as usize
    }

    /// Is the submodule stable under `T`?
    pub fn is_lambda_stable(&self, m: &GammaModule) -> bool {
        self.generators(m).iter().all(|g| self.contains(m, &m.apply_t(g)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> PrimeConfig {
        PrimeConfig::new(3, 8).unwrap()
    }

    #[test]
    fn rejects_ill_defined_tau() {
        // g_2 has order 3, so τ g_2 cannot have a unit first coordinate mod 9
        let bad = GammaModule::with_auto_level(cfg(), vec![2, 1], vec![vec![1, 1], vec![0, 1]]);
        assert!(bad.is_err());
        let ok = GammaModule::with_auto_level(cfg(), vec![2, 1], vec![vec![1, 3], vec![0, 1]]);
        assert!(ok.is_ok());
    }

    #[test]
    fn ring_quotient_is_regular_representation() {
        let c = cfg();
        let w = crate::lambda_ring::omega(c, 2).unwrap();
        let r = GammaModule::ring_quotient(&w, 2).unwrap();
        assert_eq!(r.rank(), 3);
        let x = vec![1, 0, 0];
        let f = IwasawaPoly::from_ints(c, &[2, 0, 1]);
        assert_eq!(r.act(&f, &x), vec![2, 0, 1]);
    }

    #[test]
    fn intersection_matches_enumeration() {
        let c = cfg();
        let m = GammaModule::with_auto_level(c, vec![2, 2, 1], vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        let u = m.span(&[vec![1, 3, 0], vec![0, 0, 1]]);
        let w = m.span(&[vec![3, 0, 1], vec![0, 1, 0]]);
        let i = u.intersect(&m, &w);
        let brute = m
            .elements()
            .into_iter()
            .filter(|x| u.contains(&m, x) && w.contains(&m, x))
            .count();
        assert_eq!(3usize.pow(i.log_order()), brute);
    }

    #[test]
    fn order_of_elements() {
        let m = GammaModule::with_auto_level(cfg(), vec![3, 1], vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(m.order(&[9, 1]), 3);
        assert_eq!(m.order(&[1, 0]), 27);
        assert_eq!(m.order(&[0, 0]), 1);
    }
}
