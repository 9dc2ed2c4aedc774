//! Smith form of a relation matrix over the local ring `Z/p^E`, keeping the
//! column transform so quotient coordinates can be computed.

use crate::arith::PrimeConfig;

#[derive(Clone, Debug)]
pub struct Smith {
    pub ring: PrimeConfig,
    /// Valuation of the `t`-th diagonal entry; `E` for columns without relation.
    pub diag: Vec<u32>,
    /// Column transform `V`, `n x n`: `R V` is diagonal.
    pub v: Vec<Vec<u64>>,
    pub v_inv: Vec<Vec<u64>>,
}

impl Smith {
    pub fn new(ring: PrimeConfig, ncols: usize, relations: &[Vec<u64>]) -> Self {
        let n = ncols;
        let mut m: Vec<Vec<u64>> = relations.to_vec();
        let rows = m.len();
        let mut v = identity(n);
        let mut vi = identity(n);
        let mut diag = vec![ring.precision; n];
        for t in 0..rows.min(n) {
            let mut best: Option<(u32, usize, usize)> = None;
            for (i, row) in m.iter().enumerate().skip(t) {
                for (j, &x) in row.iter().enumerate().skip(t) {
                    if x != 0 {
                        let k = ring.valuation(x);
                        if best.is_none_or(|b| k < b.0) {
                            best = Some((k, i, j));
                        }
                    }
                }
                if best.is_some_and(|b| b.0 == 0) {
                    break;
                }
            }
            let Some((k, i, j)) = best else { break };
            m.swap(t, i);
            if j != t {
                for row in m.iter_mut() {
                    row.swap(t, j);
                }
                for row in v.iter_mut() {
                    row.swap(t, j);
                }
                vi.swap(t, j);
            }
            let pk = ring.p.pow(k);
            let u = ring.inv(m[t][t] / pk).expect("unit");
            let ui = m[t][t] / pk;
            for row in m.iter_mut() {
                row[t] = ring.mul(row[t], u);
            }
            for row in v.iter_mut() {
                row[t] = ring.mul(row[t], u);
            }
            for x in vi[t].iter_mut() {
                *x = ring.mul(*x, ui);
            }
            let pivot_row = m[t].clone();
            for row in m.iter_mut().skip(t + 1) {
                if row[t] != 0 {
                    let c = row[t] / pk;
                    for jj in t..n {
                        row[jj] = ring.sub(row[jj], ring.mul(c, pivot_row[jj]));
                    }
                }
            }
            for jj in t + 1..n {
                if pivot_row[jj] != 0 {
                    let c = pivot_row[jj] / pk;
                    // col_jj -= c * col_t
                    for row in m.iter_mut() {
                        row[jj] = ring.sub(row[jj], ring.mul(c, row[t]));
                    }
                    for row in v.iter_mut() {
                        row[jj] = ring.sub(row[jj], ring.mul(c, row[t]));
                    }
                    // row_t(V^-1) += c * row_jj(V^-1)
                    let rj = vi[jj].clone();
                    for (x, y) in vi[t].iter_mut().zip(rj) {
                        *x = ring.add(*x, ring.mul(c, y));
                    }
                }
            }
            diag[t] = k;
        }
        Smith { ring, diag, v, v_inv: vi }
    }

    /// `x V`, the coordinates before reduction mod `p^diag`.
    pub fn transform(&self, x: &[u64]) -> Vec<u64> {
        let ring = self.ring;
        let n = self.v.len();
        let mut out = vec![0; n];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for j in 0..n {
                out[j] = ring.add(out[j], ring.mul(xi, self.v[i][j]));
            }
        }
        out
    }
}

pub fn identity(n: usize) -> Vec<Vec<u64>> {
    (0..n).map(|i| (0..n).map(|j| u64::from(i == j)).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transform_inverts() {
        let ring = PrimeConfig::new(3, 3).unwrap();
        let rel = vec![vec![3, 6, 9], vec![1, 2, 4], vec![0, 9, 3]];
        let s = Smith::new(ring, 3, &rel);
        // V * V^-1 = I
        for i in 0..3 {
            let row = s.transform(&s.v_inv[i]);
            for j in 0..3 {
                assert_eq!(row[j], u64::from(i == j));
            }
        }
        // each relation maps into the diagonal lattice
        for r in &rel {
            let y = s.transform(r);
            for (t, &yt) in y.iter().enumerate() {
                assert_eq!(yt % 3u64.pow(s.diag[t]), 0);
            }
        }
        // |Z^3 / R| has log size equal to log|det| = v_3(det)
        let total: u32 = s.diag.iter().sum();
        // det = 3*(2*3-4*9) - 6*(3-0) + 9*9 = -90 - 18 + 81 = -27
        assert_eq!(total, 3);
    }
}
