//! Pontryagin dual with the Iwasawa-twisted action `τ ↦ χ(τ) τ^{-1}`.

use super::gamma::{Elem, GammaModule};
use super::structure::is_cyclic_lambda;
use crate::error::{Error, Result};
use crate::lambda_ring::IwasawaPoly;
use serde::Serialize;

/// `<x, y> = Σ x_i y_i p^{E - e_i} mod p^E`, `E = log_p exp(M)`.
pub fn pairing(m: &GammaModule, x: &[u64], y: &[u64]) -> u64 {
    let ring = m.ring();
    let e = ring.precision;
    let mut s = 0;
    for ((&a, &b), &ei) in x.iter().zip(y).zip(m.orders()) {
        let t = ring.mul(ring.mul(a, b), m.p().pow(e - ei));
        s = ring.add(s, t);
    }
    s
}

/// Adjoint of an endomorphism for [`pairing`]: `adj[j][i] = A[i][j] p^{e_j - e_i}`,
/// by exact division when the exponent is negative.
pub fn adjoint(m: &GammaModule, a: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let p = m.p();
    let o = m.orders();
    let r = m.rank();
    let mut out = vec![vec![0; r]; r];
    for i in 0..r {
        for j in 0..r {
            let x = a[i][j];
            let v = if o[j] >= o[i] {
                (x as u128 * p.pow(o[j] - o[i]) as u128 % p.pow(o[j]) as u128) as u64
            } else {
                let s = p.pow(o[i] - o[j]);
                debug_assert_eq!(x % s, 0);
                x / s
            };
            out[j][i] = v % p.pow(o[j]);
        }
    }
    out
}

/// `M^∨ ≅ ⊕ Z/p^{e_i}` with `τ_d = (1+p) (τ^{-1})^adj`, so that
/// `<τx, τ_d y> = (1+p) <x, y>`. The level is recomputed.
pub fn dual_module(m: &GammaModule) -> Result<GammaModule> {
    let inv = m.tau_inverse();
    let adj = adjoint(m, &inv);
    let chi = 1 + m.p();
    let tau: Vec<Vec<u64>> = adj
        .iter()
        .zip(m.orders())
        .map(|(row, &e)| {
            let md = m.p().pow(e) as u128;
            row.iter().map(|&x| (x as u128 * chi as u128 % md) as u64).collect()
        })
        .collect();
    let mut d = GammaModule::with_auto_level(m.config(), m.orders().to_vec(), tau)?;
    if let Some(g) = is_cyclic_lambda(&d).generator {
        d.generator = Some(g);
    }
    Ok(d)
}

/// Matrix of `f*(T_d) = f((p - T_d) τ_d^{-1})` on the dual.
pub fn involuted_action(d: &GammaModule, f: &IwasawaPoly) -> Vec<Vec<u64>> {
    let r = d.rank();
    let inv = d.tau_inverse();
    let pt: Vec<Vec<u64>> = (0..r)
        .map(|i| {
            let md = d.p().pow(d.orders()[i]);
            (0..r)
                .map(|j| {
                    let t = d.t_matrix()[i][j];
                    let diag = if i == j { d.p() % md } else { 0 };
                    (diag + md - t) % md
                })
                .collect()
        })
        .collect();
    let tstar = d.mat_mul(&pt, &inv);
    d.eval_matrix_poly(f.coeffs(), &tstar)
}

#[derive(Clone, Debug, Serialize)]
pub struct ReversalTable {
    pub m: usize,
    /// `vanishes[k][j]` records whether `<f^k g, (f*)^j ρ> = 0`.
    pub vanishes: Vec<Vec<bool>>,
    /// `k + j ≥ m ⟹ vanishing`.
    pub law_holds: bool,
    /// For each `k < m`, some `j < m - k` gives a nonzero pairing.
    pub sharp: bool,
}

/// Tabulate `<f^k g, (f*)^j ρ>` for `0 ≤ k, j ≤ m`, where `f^m` kills the
/// cyclic module `M = Λ g` and `ρ` generates the dual.
pub fn order_reversal(m: &GammaModule, f: &IwasawaPoly, mm: usize) -> Result<ReversalTable> {
    order_reversal_with(m, f, mm, None)
}

fn module_generator(m: &GammaModule) -> Result<Elem> {
    m.generator
        .clone()
        .or_else(|| is_cyclic_lambda(m).generator)
        .ok_or_else(|| Error::Precondition("module is not Λ-cyclic".into()))
}

/// A generator `ρ` of the dual with `<f^i g, ρ> ≠ 0` for all `i < m`, by
/// enumeration. Any such `ρ` makes the vanishing pattern exactly `k + j ≥ m`.
pub fn faithful_dual_generator(m: &GammaModule, f: &IwasawaPoly, mm: usize) -> Result<Option<Elem>> {
    let g = module_generator(m)?;
    let d = dual_module(m)?;
    let mut fk = vec![g];
    for _ in 1..mm {
        fk.push(m.act(f, fk.last().unwrap()));
    }
    let whole = d.log_order();
    Ok(d
        .elements()
        .into_iter()
        .filter(|y| fk.iter().all(|x| pairing(m, x, y) != 0))
        .find(|y| d.lambda_span(&[y.clone()]).log_order() == whole))
}

/// As [`order_reversal`] with a chosen dual generator `ρ`.
pub fn order_reversal_with(m: &GammaModule, f: &IwasawaPoly, mm: usize, rho: Option<Elem>) -> Result<ReversalTable> {
    let g = module_generator(m)?;
    if !m.is_zero(&m.act(&f.pow(mm as u64), &g)) {
        return Err(Error::Precondition(format!("f^{mm} does not annihilate the module")));
    }
    let d = dual_module(m)?;
    let rho = match rho {
        Some(r) => {
            if d.lambda_span(&[r.clone()]).log_order() != d.log_order() {
                return Err(Error::Precondition("ρ does not generate the dual".into()));
            }
            r
        }
        None => d.generator.clone().ok_or_else(|| Error::Precondition("dual is not Λ-cyclic".into()))?,
    };
    let fs = involuted_action(&d, f);
    let mut fk: Vec<Elem> = vec![g];
    for _ in 0..mm {
        fk.push(m.act(f, fk.last().unwrap()));
    }
    let mut fj: Vec<Elem> = vec![rho];
    for _ in 0..mm {
        fj.push(d.apply(&fs, fj.last().unwrap()));
    }
    let vanishes: Vec<Vec<bool>> =
        (0..=mm).map(|k| (0..=mm).map(|j| pairing(m, &fk[k], &fj[j]) == 0).collect()).collect();
    let law_holds = (0..=mm).all(|k| (0..=mm).all(|j| k + j < mm || vanishes[k][j]));
    let sharp = (0..mm).all(|k| (0..mm - k).any(|j| !vanishes[k][j]));
    Ok(ReversalTable { m: mm, vanishes, law_holds, sharp })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::PrimeConfig;

    #[test]
    fn pairing_is_twisted_invariant() {
        let c = PrimeConfig::new(3, 8).unwrap();
        let tau = vec![vec![1, 0, 0], vec![1, 1, 0], vec![0, 1, 1]];
        let m = GammaModule::with_auto_level(c, vec![2, 1, 1], tau).unwrap();
        let d = dual_module(&m).unwrap();
        for x in m.elements() {
            for y in d.elements().into_iter().step_by(7) {
                let lhs = pairing(&m, &m.apply_tau(&x), &d.apply_tau(&y));
                let rhs = m.ring().mul(4, pairing(&m, &x, &y));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn pairing_is_perfect() {
        let c = PrimeConfig::new(3, 8).unwrap();
        let m = GammaModule::with_auto_level(c, vec![2, 1], vec![vec![1, 3], vec![1, 1]]).unwrap();
        for y in m.elements().into_iter().skip(1) {
            assert!(m.elements().iter().any(|x| pairing(&m, x, &y) != 0));
        }
    }
}
