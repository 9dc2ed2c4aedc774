//! Strong echelon (Howell) form of row lattices in `(Z/p^E)^n`.
//!
//! Rows are processed column by column. After placing a pivot `p^k * unit`
//! the row `p^(E-k) * pivot_row` is fed back, so every span element whose
//! leading columns vanish lies in the span of the later rows. Membership,
//! sizes, kernels and intersections all reduce to this one form.

use crate::arith::PrimeConfig;

#[derive(Clone, Debug)]
pub struct Howell {
    ring: PrimeConfig,
    ncols: usize,
    rows: Vec<Vec<u64>>,
    /// `(column, valuation)` for each row.
    pivots: Vec<(usize, u32)>,
}

impl Howell {
    pub fn new(ring: PrimeConfig, ncols: usize, input: Vec<Vec<u64>>) -> Self {
        let m = ring.modulus();
        let mut pending: Vec<Vec<u64>> = input
            .into_iter()
            .map(|mut r| {
                assert_eq!(r.len(), ncols, "row length");
                for x in r.iter_mut() {
                    *x %= m;
                }
                r
            })
            .filter(|r| r.iter().any(|&x| x != 0))
            .collect();
        let mut rows = vec![];
        let mut pivots = vec![];
        for col in 0..ncols {
            let best = pending
                .iter()
                .enumerate()
                .filter(|(_, r)| r[col] != 0)
                .min_by_key(|(_, r)| ring.valuation(r[col]))
                .map(|(i, _)| i);
            let Some(idx) = best else { continue };
            let mut piv = pending.swap_remove(idx);
            let k = ring.valuation(piv[col]);
            let pk = ring.p.pow(k);
            let u = ring.inv(piv[col] / pk).expect("unit part");
            for x in piv.iter_mut() {
                *x = ring.mul(*x, u);
            }
            for other in pending.iter_mut() {
                if other[col] != 0 {
                    let c = other[col] / pk;
                    for j in col..ncols {
                        other[j] = ring.sub(other[j], ring.mul(c, piv[j]));
                    }
                }
            }
            if k > 0 {
                let s = ring.p.pow(ring.precision - k);
                let sat: Vec<u64> = piv.iter().map(|&x| ring.mul(x, s)).collect();
                if sat.iter().any(|&x| x != 0) {
                    pending.push(sat);
                }
            }
            pending.retain(|r| r.iter().any(|&x| x != 0));
            rows.push(piv);
            pivots.push((col, k));
        }
        let mut h = Howell { ring, ncols, rows, pivots };
        h.reduce_above();
        h
    }

    fn reduce_above(&mut self) {
        let ring = self.ring;
        for i in (0..self.rows.len()).rev() {
            let (c, k) = self.pivots[i];
            let pk = ring.p.pow(k);
            let (upper, lower) = self.rows.split_at_mut(i);
            let piv = &lower[0];
            for r in upper.iter_mut() {
                let q = r[c] / pk;
                if q != 0 {
                    for j in c..self.ncols {
                        r[j] = ring.sub(r[j], ring.mul(q, piv[j]));
                    }
                }
            }
        }
    }

    pub fn ring(&self) -> PrimeConfig {
        self.ring
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[(usize, u32)] {
        &self.pivots
    }

    /// `log_p` of the number of elements in the span.
    pub fn log_size(&self) -> u32 {
        self.pivots.iter().map(|&(_, k)| self.ring.precision - k).sum()
    }

    /// Reduce `v` against the form; returns the remainder and the
    /// multipliers used for each row.
    pub fn reduce_with(&self, v: &[u64]) -> (Vec<u64>, Vec<u64>) {
        let ring = self.ring;
        let mut v: Vec<u64> = v.iter().map(|&x| x % ring.modulus()).collect();
        let mut mult = vec![0; self.rows.len()];
        for (i, &(c, k)) in self.pivots.iter().enumerate() {
            let pk = ring.p.pow(k);
            if v[c] % pk != 0 {
                continue;
            }
            let q = v[c] / pk;
            if q != 0 {
                mult[i] = q;
                for j in c..self.ncols {
                    v[j] = ring.sub(v[j], ring.mul(q, self.rows[i][j]));
                }
            }
        }
        (v, mult)
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        self.reduce_with(v).0.iter().all(|&x| x == 0)
    }

    /// Rows whose pivot lies at or after column `start`; by the Howell
    /// property they span every element vanishing on `0..start`.
    pub fn rows_from(&self, start: usize) -> Vec<Vec<u64>> {
        self.rows
            .iter()
            .zip(&self.pivots)
            .filter(|(_, &(c, _))| c >= start)
            .map(|(r, _)| r.clone())
            .collect()
    }

    pub fn contains_lattice(&self, other: &Howell) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }
}

/// Solve `sum c_i * gens[i] = target` over `Z/p^E`.
pub fn solve(ring: PrimeConfig, gens: &[Vec<u64>], target: &[u64]) -> Option<Vec<u64>> {
    let n = target.len();
    let k = gens.len();
    let rows: Vec<Vec<u64>> = gens
        .iter()
        .enumerate()
        .map(|(i, g)| {
            let mut r = g.clone();
            r.extend((0..k).map(|j| u64::from(i == j)));
            r
        })
        .collect();
    let h = Howell::new(ring, n + k, rows);
    let mut t = target.to_vec();
    t.extend(std::iter::repeat(0).take(k));
    let (rem, _) = h.reduce_with(&t);
    if rem[..n].iter().any(|&x| x != 0) {
        return None;
    }
    // target - sum(mult * row) = rem, whose tail is -(coefficients)
    Some(rem[n..].iter().map(|&x| ring.neg(x)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_span(ring: PrimeConfig, gens: &[Vec<u64>]) -> std::collections::BTreeSet<Vec<u64>> {
        let m = ring.modulus();
        let n = gens[0].len();
        let mut set = std::collections::BTreeSet::new();
        set.insert(vec![0; n]);
        loop {
            let mut next = set.clone();
            for v in &set {
                for g in gens {
                    let w: Vec<u64> = v.iter().zip(g).map(|(a, b)| (a + b) % m).collect();
                    next.insert(w);
                }
            }
            if next.len() == set.len() {
                return set;
            }
            set = next;
        }
    }

    #[test]
    fn size_and_membership_match_enumeration() {
        let ring = PrimeConfig::new(3, 2).unwrap();
        let gens = vec![vec![3, 1, 0], vec![0, 3, 6], vec![6, 2, 3]];
        let h = Howell::new(ring, 3, gens.clone());
        let span = brute_span(ring, &gens);
        assert_eq!(3u64.pow(h.log_size()) as usize, span.len());
        for a in 0..9 {
            for b in 0..9 {
                for c in 0..9 {
                    let v = vec![a, b, c];
                    assert_eq!(h.contains(&v), span.contains(&v), "{v:?}");
                }
            }
        }
    }

    #[test]
    fn saturation_row_is_needed() {
        // span of (3, 1) mod 9 contains (0, 3) = 3 * (3, 1)
        let ring = PrimeConfig::new(3, 2).unwrap();
        let h = Howell::new(ring, 2, vec![vec![3, 1]]);
        assert_eq!(h.log_size(), 2);
        assert!(h.rows_from(1).iter().any(|r| r == &vec![0, 3]));
    }

    #[test]
    fn solve_finds_coefficients() {
        let ring = PrimeConfig::new(5, 3).unwrap();
        let gens = vec![vec![5, 1, 0], vec![0, 25, 3]];
        let target: Vec<u64> = (0..3)
            .map(|j| ring.add(ring.mul(7, gens[0][j]), ring.mul(11, gens[1][j])))
            .collect();
        let c = solve(ring, &gens, &target).unwrap();
        let back: Vec<u64> = (0..3)
            .map(|j| ring.add(ring.mul(c[0], gens[0][j]), ring.mul(c[1], gens[1][j])))
            .collect();
        assert_eq!(back, target);
        assert!(solve(ring, &gens, &[1, 0, 0]).is_none());
    }
}
