//! Dense linear algebra over `F_p`. Matrices act on column vectors.

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut r = 1;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Reduced row echelon form; returns the pivot columns.
pub fn rref(p: u64, m: &mut [Vec<u64>]) -> Vec<usize> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = vec![];
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(i) = (r..rows).find(|&i| m[i][c] % p != 0) else { continue };
        m.swap(r, i);
        let inv = inv_mod(m[r][c], p);
        for x in m[r].iter_mut() {
            *x = *x % p * inv % p;
        }
        for i in 0..rows {
            if i != r && m[i][c] % p != 0 {
                let f = m[i][c] % p;
                for j in 0..cols {
                    m[i][j] = (m[i][j] % p + p * p - f * m[r][j] % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(p: u64, m: &[Vec<u64>]) -> usize {
    let mut a = m.to_vec();
    rref(p, &mut a).len()
}

/// Basis of `{x : M x = 0}`.
pub fn kernel(p: u64, m: &[Vec<u64>], ncols: usize) -> Vec<Vec<u64>> {
    let mut a = m.to_vec();
    let piv = rref(p, &mut a);
    let free: Vec<usize> = (0..ncols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0; ncols];
            v[f] = 1;
            for (r, &pc) in piv.iter().enumerate() {
                v[pc] = (p - a[r][f] % p) % p;
            }
            v
        })
        .collect()
}

/// Is `v` in the row span of `vecs`?
pub fn in_span(p: u64, vecs: &[Vec<u64>], v: &[u64]) -> bool {
    if vecs.is_empty() {
        return v.iter().all(|x| x % p == 0);
    }
    let r0 = rank(p, vecs);
    let mut w = vecs.to_vec();
    w.push(v.to_vec());
    rank(p, &w) == r0
}

pub fn mat_vec(p: u64, m: &[Vec<u64>], x: &[u64]) -> Vec<u64> {
    m.iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b % p).sum::<u64>() % p)
        .collect()
}

pub fn transpose(m: &[Vec<u64>], ncols: usize) -> Vec<Vec<u64>> {
    (0..ncols).map(|j| m.iter().map(|r| r[j]).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_nullity() {
        let m = vec![vec![1, 2, 0, 1], vec![2, 4, 1, 0], vec![0, 0, 1, 1]];
        let r = rank(3, &m);
        let k = kernel(3, &m, 4);
        assert_eq!(r + k.len(), 4);
        for v in &k {
            assert!(mat_vec(3, &m, v).iter().all(|&x| x == 0));
        }
        assert!(in_span(3, &m, &[1, 2, 1, 2]));
        assert!(!in_span(3, &m, &[0, 1, 0, 0]));
    }
}
