use super::gamma::{apply_matrix, compose_matrices, embed_with, hom_condition, Elem, GammaModule, Submodule};
use crate::error::Result;
use crate::linalg::{Howell, Smith};
use crate::PrimeConfig;

/// A group homomorphism between two modules, as a `target x source` matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hom {
    pub matrix: Vec<Vec<u64>>,
}

impl Hom {
    pub fn new(source: &GammaModule, target: &GammaModule, matrix: Vec<Vec<u64>>) -> Result<Self> {
        hom_condition(source.p(), source.orders(), target.orders(), &matrix)?;
        let matrix = matrix
            .into_iter()
            .zip(target.orders())
            .map(|(row, &e)| row.into_iter().map(|x| x % source.p().pow(e)).collect())
            .collect();
        Ok(Hom { matrix })
    }

    /// Build from the images of the source generators.
    pub fn from_images(source: &GammaModule, target: &GammaModule, images: &[Elem]) -> Result<Self> {
        let m = (0..target.rank())
            .map(|i| images.iter().map(|img| img[i]).collect())
            .collect();
        Self::new(source, target, m)
    }

    pub fn apply(&self, target: &GammaModule, x: &[u64]) -> Elem {
        apply_matrix(target.p(), target.orders(), &self.matrix, x)
    }

    /// `self ∘ other`.
    pub fn compose(&self, target: &GammaModule, other: &Hom) -> Hom {
        Hom { matrix: compose_matrices(target.p(), target.orders(), &self.matrix, &other.matrix) }
    }

    pub fn is_equivariant(&self, source: &GammaModule, target: &GammaModule) -> bool {
        let a = compose_matrices(target.p(), target.orders(), &self.matrix, source.tau());
        let b = compose_matrices(target.p(), target.orders(), target.tau(), &self.matrix);
        a == b
    }

    pub fn image(&self, source: &GammaModule, target: &GammaModule) -> Submodule {
        let imgs: Vec<Elem> = (0..source.rank()).map(|j| self.apply(target, &source.basis(j))).collect();
        target.span(&imgs)
    }

    pub fn kernel(&self, source: &GammaModule, target: &GammaModule) -> Submodule {
        kernel_of(source, target, &self.matrix)
    }

    pub fn is_injective(&self, source: &GammaModule, target: &GammaModule) -> bool {
        self.kernel(source, target).is_zero()
    }

    pub fn is_surjective(&self, source: &GammaModule, target: &GammaModule) -> bool {
        self.image(source, target).log_order() == target.log_order()
    }
}

/// Kernel via the graph lattice `[φ(g_j) | g_j]` over `Z/p^E`: rows vanishing
/// on the target block span `ker φ`.
pub fn kernel_of(source: &GammaModule, target: &GammaModule, m: &[Vec<u64>]) -> Submodule {
    let p = source.p();
    let e = source.exp_log().max(target.exp_log()).max(1);
    let ring = PrimeConfig::new(p, e).expect("valid");
    let (sr, tr) = (source.rank(), target.rank());
    let rows: Vec<Vec<u64>> = (0..sr)
        .map(|j| {
            let img = apply_matrix(p, target.orders(), m, &source.basis(j));
            let mut row = embed_with(p, target.orders(), e, &img);
            row.extend(embed_with(p, source.orders(), e, &source.basis(j)));
            row
        })
        .collect();
    let h = Howell::new(ring, tr + sr, rows);
    let shift = e - source.exp_log().max(1);
    let kern: Vec<Elem> = h
        .rows_from(tr)
        .into_iter()
        .map(|row| {
            let v: Vec<u64> = row[tr..].iter().map(|&x| x / p.pow(shift)).collect();
            source.unembed(&v)
        })
        .collect();
    source.span(&kern)
}

/// `M / W` with projection and a section of its standard generators.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub module: GammaModule,
    /// Projection `M → M/W`.
    pub proj: Hom,
    /// Lifts in `M` of the quotient's standard generators.
    pub section: Vec<Elem>,
}

/// Quotient by a `Λ`-submodule, normalised to invariant-factor coordinates.
pub fn quotient(m: &GammaModule, w: &Submodule) -> Result<Quotient> {
    let p = m.p();
    let ring = m.ring();
    let e = ring.precision;
    let r = m.rank();
    let mut rels: Vec<Vec<u64>> = vec![];
    for (i, &ei) in m.orders().iter().enumerate() {
        if ei < e {
            let mut v = vec![0; r];
            v[i] = p.pow(ei);
            rels.push(v);
        }
    }
    for g in w.generators(m) {
        rels.push(g);
    }
    let s = Smith::new(ring, r, &rels);
    let mut comps: Vec<usize> = (0..r).filter(|&t| s.diag[t] > 0).collect();
    comps.sort_by_key(|&t| std::cmp::Reverse(s.diag[t]));
    let orders: Vec<u32> = comps.iter().map(|&t| s.diag[t]).collect();
    let section: Vec<Elem> = comps.iter().map(|&t| m.reduce(&s.v_inv[t])).collect();
    let q = orders.len();
    let proj_matrix: Vec<Vec<u64>> = comps
        .iter()
        .map(|&t| (0..r).map(|i| s.v[i][t] % p.pow(s.diag[t])).collect())
        .collect();
    let project = |x: &[u64]| -> Elem {
        (0..q)
            .map(|k| {
                let md = p.pow(orders[k]) as u128;
                let mut acc = 0u128;
                for i in 0..r {
                    acc = (acc + x[i] as u128 * proj_matrix[k][i] as u128) % md;
                }
                acc as u64
            })
            .collect()
    };
    let mut tau = vec![vec![0; q]; q];
    for (j, g) in section.iter().enumerate() {
        let img = project(&m.apply_tau(g));
        for i in 0..q {
            tau[i][j] = img[i];
        }
    }
    let mut module = GammaModule::new(m.config(), orders.clone(), tau, m.level())?;
    if let Some(g) = &m.generator {
        module.generator = Some(project(g));
    }
    for (k, v) in &m.labels {
        module.labels.insert(k.clone(), project(v));
    }
    let proj = Hom::new(m, &module, proj_matrix)?;
    Ok(Quotient { module, proj, section })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda_ring::{omega, IwasawaPoly};

    #[test]
    fn tower_quotient_t_minus_three() {
        // Λ/(T - 3, ω_2) = Z/(4^3 - 1) ⊗ Z_3 = Z/9
        let c = PrimeConfig::new(3, 8).unwrap();
        let r = GammaModule::ring_quotient(&omega(c, 2).unwrap(), 2).unwrap();
        let f = IwasawaPoly::from_ints(c, &[-3, 1]);
        let fv = crate::lambda_ring::to_dense(&f, 3);
        let w = r.lambda_span(&[fv]);
        let q = quotient(&r, &w).unwrap();
        assert_eq!(q.module.orders(), &[2]);
        // T acts as multiplication by 3: τ = 4
        assert_eq!(q.module.tau()[0][0], 4);
        assert!(q.proj.is_equivariant(&r, &q.module));
        assert_eq!(q.module.generator, Some(vec![q.proj.apply(&q.module, &[1, 0, 0])[0]]));
    }

    #[test]
    fn kernel_of_projection() {
        let c = PrimeConfig::new(3, 8).unwrap();
        let r = GammaModule::ring_quotient(&omega(c, 2).unwrap(), 2).unwrap();
        let w = r.p_power_submodule(2);
        let q = quotient(&r, &w).unwrap();
        let k = q.proj.kernel(&r, &q.module);
        assert!(k.same_as(&w));
        assert_eq!(q.module.orders(), &[2, 2, 2]);
    }
}
