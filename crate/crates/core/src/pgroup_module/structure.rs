//! Socle `M[p]` and roof `M/pM` as `F_p[T]`-modules.

use super::gamma::{Elem, GammaModule};
use crate::linalg::fp;
use serde::Serialize;

/// A finite `F_p[T]`-module given by a nilpotent matrix on `F_p^d`, with
/// the chosen `F_p`-basis lifted back into the ambient module.
#[derive(Clone, Debug)]
pub struct FpTModule {
    pub p: u64,
    pub dim: usize,
    /// Column convention, entries in `[0, p)`.
    pub t: Vec<Vec<u64>>,
    /// `basis[i]` is the element of `M` behind the `i`-th coordinate.
    pub basis: Vec<Elem>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FpTStructure {
    pub dim: usize,
    /// `dim ker T`.
    pub t_rank: usize,
    /// `dim coker T`; equal to `t_rank` for a finite-dimensional module.
    pub t_corank: usize,
    pub cyclic: bool,
    /// Lifts to `M` of an `F_p`-basis of `E / T E`.
    pub generators: Vec<Elem>,
    /// Jordan block sizes of `T`, largest first.
    pub blocks: Vec<usize>,
}

impl FpTModule {
    pub fn structure(&self) -> FpTStructure {
        let p = self.p;
        let rank_t = fp::rank(p, &self.t);
        let t_rank = fp::kernel(p, &self.t, self.dim).len();
        let t_corank = self.dim - rank_t;
        // lifts of a complement of im T, greedily from the standard basis
        let mut span: Vec<Vec<u64>> = fp::transpose(&self.t, self.dim);
        let mut gens = vec![];
        for i in 0..self.dim {
            let mut e = vec![0; self.dim];
            e[i] = 1;
            if !fp::in_span(p, &span, &e) {
                span.push(e);
                gens.push(self.basis[i].clone());
            }
        }
        FpTStructure {
            dim: self.dim,
            t_rank,
            t_corank,
            cyclic: t_corank <= 1,
            generators: gens,
            blocks: self.jordan_blocks(),
        }
    }

    fn jordan_blocks(&self) -> Vec<usize> {
        // r_k = rank T^k; number of blocks of size >= k is r_{k-1} - r_k
        let p = self.p;
        let mut ranks = vec![self.dim];
        let mut pw = identity(self.dim);
        while *ranks.last().unwrap() > 0 {
            pw = mat_mul_p(p, &self.t, &pw);
            let r = fp::rank(p, &pw);
            if r == *ranks.last().unwrap() {
                break;
            }
            ranks.push(r);
        }
        let mut at_least: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
        at_least.push(0);
        let mut blocks = vec![];
        for k in 0..at_least.len() - 1 {
            for _ in 0..at_least[k] - at_least[k + 1] {
                blocks.push(k + 1);
            }
        }
        blocks.sort_unstable_by(|a, b| b.cmp(a));
        blocks
    }

    /// Coordinates of `x ∈ M` in this module's basis, if `x` lies in it.
    pub fn coords_of(&self, m: &GammaModule, x: &[u64], socle: bool) -> Option<Vec<u64>> {
        let p = self.p;
        if socle {
            // basis p^{e_i - 1} g_i: coordinate i is x_i / p^{e_i - 1}
            let mut v = vec![];
            for (i, &e) in m.orders().iter().enumerate() {
                let s = p.pow(e - 1);
                if x[i] % s != 0 {
                    return None;
                }
                v.push(x[i] / s % p);
            }
            Some(v)
        } else {
            Some(x.iter().map(|a| a % p).collect())
        }
    }

    /// Dimension of the `F_p[T]`-span of `v`.
    pub fn cyclic_span_dim(&self, v: &[u64]) -> usize {
        let mut vecs = vec![];
        let mut cur = v.to_vec();
        for _ in 0..=self.dim {
            vecs.push(cur.clone());
            cur = fp::mat_vec(self.p, &self.t, &cur);
        }
        fp::rank(self.p, &vecs)
    }
}

fn identity(n: usize) -> Vec<Vec<u64>> {
    (0..n).map(|i| (0..n).map(|j| u64::from(i == j)).collect()).collect()
}

fn mat_mul_p(p: u64, a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| (0..n).map(|j| row.iter().zip(b).map(|(x, r)| x * r[j] % p).sum::<u64>() % p).collect())
        .collect()
}

/// `S(M) = M[p]` with basis `p^{e_i - 1} g_i`.
pub fn socle(m: &GammaModule) -> FpTModule {
    let p = m.p();
    let r = m.rank();
    let basis: Vec<Elem> = (0..r).map(|i| m.scale(p.pow(m.orders()[i] - 1), &m.basis(i))).collect();
    let mut t = vec![vec![0; r]; r];
    for (j, s) in basis.iter().enumerate() {
        let img = m.apply_t(s);
        for (i, &e) in m.orders().iter().enumerate() {
            t[i][j] = img[i] / p.pow(e - 1) % p;
        }
    }
    FpTModule { p, dim: r, t, basis }
}

/// `R(M) = M/pM` with basis the images of `g_i`.
pub fn roof(m: &GammaModule) -> FpTModule {
    let p = m.p();
    let r = m.rank();
    let tm = m.t_matrix();
    let t = tm.iter().map(|row| row.iter().map(|x| x % p).collect()).collect();
    FpTModule { p, dim: r, t, basis: (0..r).map(|i| m.basis(i)).collect() }
}

/// The element `ψ(b) = (ord(b)/p) b`, which lies in the socle.
pub fn psi(m: &GammaModule, b: &[u64]) -> Elem {
    let k = m.order_log(b);
    m.scale(m.p().pow(k.saturating_sub(1)), b)
}

/// Is `S(M)` generated by `ψ(b)` as an `F_p[T]`-module?
pub fn is_straight(m: &GammaModule, b: &[u64]) -> bool {
    let s = socle(m);
    match s.coords_of(m, &psi(m, b), true) {
        Some(v) => s.cyclic_span_dim(&v) == s.dim,
        None => false,
    }
}

/// Outcome of the `Λ`-cyclicity test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicTest {
    pub cyclic: bool,
    /// `dim M/(p,T)M`.
    pub roof_corank: usize,
    /// Lexicographically least generator with coordinates in `[0, p)`.
    pub generator: Option<Elem>,
}

/// `M` is `Λ`-cyclic iff `dim M/(p,T)M ≤ 1` (Nakayama).
pub fn is_cyclic_lambda(m: &GammaModule) -> CyclicTest {
    let rf = roof(m);
    let st = rf.structure();
    if !st.cyclic {
        return CyclicTest { cyclic: false, roof_corank: st.t_corank, generator: None };
    }
    if m.rank() == 0 {
        return CyclicTest { cyclic: true, roof_corank: 0, generator: Some(vec![]) };
    }
    // vectors supported on e_{j+1..} all lie in im T, so the least vector
    // outside im T is the basis vector e_j for the largest such j
    let p = m.p();
    let image = fp::transpose(&rf.t, rf.dim);
    let r = m.rank();
    let j = (0..r)
        .rev()
        .find(|&j| {
            let mut e = vec![0; r];
            e[j] = 1;
            !fp::in_span(p, &image, &e)
        })
        .expect("a nilpotent T has nonzero cokernel");
    CyclicTest { cyclic: true, roof_corank: st.t_corank, generator: Some(m.basis(j)) }
}

/// Least order of an element outside `pM`, by enumeration; `None` when
/// `|M| > 10^6`. Agrees with `p^{min e_i}`.
pub fn sexp_exhaustive(m: &GammaModule) -> Option<u64> {
    if m.log_order() as f64 * (m.p() as f64).ln() > 1e6f64.ln() {
        return None;
    }
    let pm = m.p_power_submodule(1);
    m.elements()
        .into_iter()
        .filter(|x| !pm.contains(m, x))
        .map(|x| m.order(&x))
        .min()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::PrimeConfig;

    fn cfg() -> PrimeConfig {
        PrimeConfig::new(3, 8).unwrap()
    }

    #[test]
    fn chain_module_has_one_block() {
        // Z/9 x Z/3 x Z/3 with T: g1 -> g2 -> g3 -> 0
        let tau = vec![vec![1, 0, 0], vec![1, 1, 0], vec![0, 1, 1]];
        let m = GammaModule::with_auto_level(cfg(), vec![2, 1, 1], tau).unwrap();
        let r = roof(&m).structure();
        assert!(r.cyclic);
        assert_eq!(r.blocks, vec![3]);
        let c = is_cyclic_lambda(&m);
        assert_eq!(c.generator, Some(vec![1, 0, 0]));
    }

    #[test]
    fn trivial_action_is_not_cyclic() {
        let m = GammaModule::with_auto_level(cfg(), vec![1, 1], vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert!(!is_cyclic_lambda(&m).cyclic);
        assert_eq!(socle(&m).structure().t_rank, 2);
    }

    #[test]
    fn sexp_agrees_with_invariants() {
        let tau = vec![vec![1, 0, 0], vec![1, 1, 0], vec![0, 1, 1]];
        let m = GammaModule::with_auto_level(cfg(), vec![2, 1, 1], tau).unwrap();
        assert_eq!(sexp_exhaustive(&m), Some(3u64.pow(m.sexp_log())));
    }
}
