//! Modules given only through the orbit `b, Tb, T^2 b, ...` of one element.

use crate::error::{Error, Result};
use crate::linalg::{solve, Howell};
use crate::pgroup_module::{hom_condition, Elem, GammaModule};
use crate::report::Finding;
use crate::PrimeConfig;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarIdentity {
    /// Label holding the claimed value.
    pub label: String,
    pub scalar: i64,
    /// `"b"` for the orbit start, otherwise another label.
    pub of: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitFixture {
    pub p: u64,
    #[serde(default)]
    pub precision: Option<u32>,
    pub level: u32,
    pub orders: Vec<u32>,
    /// `orbit[k]` are the coordinates of `T^k b`.
    pub orbit: Vec<Vec<i64>>,
    #[serde(default)]
    pub labels: BTreeMap<String, Vec<i64>>,
    #[serde(default)]
    pub scalar_identities: Vec<ScalarIdentity>,
    /// Extra constraints `T·label = value`.
    #[serde(default)]
    pub t_images: BTreeMap<String, Vec<i64>>,
}

#[derive(Clone, Debug)]
pub struct OrbitSolution {
    /// The module with the canonical compatible `τ`, if one exists.
    pub module: Option<GammaModule>,
    /// `log_p` of the number of compatible `T`-matrices.
    pub freedom_log: Option<u32>,
    /// One finding per listed identity.
    pub checks: Vec<Finding>,
    /// Name of the first orbit step that no `T` can satisfy together with
    /// the earlier ones.
    pub first_violation: Option<String>,
}

impl OrbitSolution {
    pub fn consistent(&self) -> bool {
        self.first_violation.is_none()
    }
}

fn fmt_vec(v: &[i64]) -> String {
    let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", s.join(", "))
}

fn step_name(k: usize, v: &[i64]) -> String {
    match k {
        1 => format!("T b = {}", fmt_vec(v)),
        _ => format!("T^{k} b = {}", fmt_vec(v)),
    }
}

struct System {
    ring: PrimeConfig,
    r: usize,
    h: Vec<Vec<u32>>,
    /// One column per unknown `y_ij`, over all equations so far.
    gens: Vec<Vec<u64>>,
    rhs: Vec<u64>,
}

impl System {
    fn new(p: u64, orders: &[u32]) -> Result<Self> {
        let e = orders.iter().copied().max().unwrap_or(1);
        let ring = PrimeConfig::new(p, e)?;
        let r = orders.len();
        let h = (0..r).map(|i| (0..r).map(|j| orders[i].saturating_sub(orders[j])).collect()).collect();
        Ok(System { ring, r, h, gens: vec![vec![]; r * r], rhs: vec![] })
    }

    /// `T x = t` coordinatewise, scaled into `Z/p^E`.
    fn push(&mut self, orders: &[u32], x: &[u64], t: &[u64]) {
        let p = self.ring.p;
        let e = self.ring.precision;
        for i in 0..self.r {
            let s = p.pow(e - orders[i]);
            for (u, g) in self.gens.iter_mut().enumerate() {
                let (row, j) = (u / self.r, u % self.r);
                let c = if row == i { self.ring.mul(self.ring.mul(s, p.pow(self.h[i][j])), x[j]) } else { 0 };
                g.push(c);
            }
            self.rhs.push(self.ring.mul(s, t[i]));
        }
    }

    fn solve(&self) -> Option<Vec<u64>> {
        solve(self.ring, &self.gens, &self.rhs)
    }

    /// `log_p` of the solution set in terms of the actual matrix entries.
    fn freedom(&self, orders: &[u32]) -> u32 {
        let n = self.rhs.len();
        let k = self.gens.len();
        let rows: Vec<Vec<u64>> = self
            .gens
            .iter()
            .enumerate()
            .map(|(u, g)| {
                let mut row = g.clone();
                row.extend((0..k).map(|v| u64::from(u == v)));
                row
            })
            .collect();
        let hw = Howell::new(self.ring, n + k, rows);
        let kern = Howell::new(self.ring, n + k, hw.rows_from(n));
        let e = self.ring.precision;
        // y_ij only matters modulo p^{e_i - h_ij}
        let slack: u32 = (0..self.r)
            .flat_map(|i| (0..self.r).map(move |j| (i, j)))
            .map(|(i, j)| e - orders[i].saturating_sub(self.h[i][j]).min(e))
            .sum();
        kern.log_size().saturating_sub(slack)
    }
}

pub fn solve_orbit(fx: &OrbitFixture) -> Result<OrbitSolution> {
    let p = fx.p;
    let orders = &fx.orders;
    let r = orders.len();
    let norm = |v: &[i64], what: &str| -> Result<Elem> {
        if v.len() != r {
            return Err(Error::Parse(format!("{what}: expected {r} coordinates")));
        }
        Ok(v.iter().zip(orders).map(|(&x, &e)| x.rem_euclid(p.pow(e) as i64) as u64).collect())
    };
    if fx.orbit.is_empty() {
        return Err(Error::Parse("empty orbit".into()));
    }
    let orbit: Vec<Elem> = fx.orbit.iter().enumerate().map(|(k, v)| norm(v, &format!("orbit[{k}]"))).collect::<Result<_>>()?;
    let mut labels = BTreeMap::new();
    for (k, v) in &fx.labels {
        labels.insert(k.clone(), norm(v, k)?);
    }

    let mut checks = vec![];
    for id in &fx.scalar_identities {
        let base = if id.of == "b" { Some(&orbit[0]) } else { labels.get(&id.of) };
        let (Some(base), Some(claimed)) = (base, labels.get(&id.label)) else {
            return Err(Error::Parse(format!("unknown label in identity {}", id.label)));
        };
        let got: Elem = base
            .iter()
            .zip(orders)
            .map(|(&x, &e)| (id.scalar.rem_euclid(p.pow(e) as i64) as u64 * x) % p.pow(e))
            .collect();
        checks.push(Finding::check(
            &format!("{} = {}·{}", id.label, id.scalar, id.of),
            &got == claimed,
            format!("computed {got:?}, listed {claimed:?}"),
        ));
    }

    let mut sys = System::new(p, orders)?;
    let mut first_violation = None;
    for k in 1..orbit.len() {
        sys.push(orders, &orbit[k - 1], &orbit[k]);
        let name = step_name(k, &fx.orbit[k]);
        let ok = sys.solve().is_some();
        if !ok && first_violation.is_none() {
            first_violation = Some(name.clone());
        }
        checks.push(Finding::check(
            &format!("orbit.{name}"),
            ok && first_violation.is_none(),
            if first_violation.is_none() {
                "consistent with all earlier steps".to_string()
            } else {
                format!("no T-matrix satisfies the steps up to {}", first_violation.as_deref().unwrap())
            },
        ));
    }
    for (name, v) in &fx.t_images {
        let x = labels.get(name).ok_or_else(|| Error::Parse(format!("unknown label {name}")))?.clone();
        sys.push(orders, &x, &norm(v, name)?);
        let step = format!("T {name} = {}", fmt_vec(v));
        let ok = sys.solve().is_some();
        if !ok && first_violation.is_none() {
            first_violation = Some(step.clone());
        }
        checks.push(Finding::check(&format!("orbit.{step}"), ok && first_violation.is_none(), "together with the orbit steps"));
    }
    if first_violation.is_some() {
        return Ok(OrbitSolution { module: None, freedom_log: None, checks, first_violation });
    }
    let y = sys.solve().expect("checked above");
    let mut tau = vec![vec![0u64; r]; r];
    for i in 0..r {
        let md = p.pow(orders[i]);
        for j in 0..r {
            let m = (y[i * r + j] as u128 * p.pow(sys.h[i][j]) as u128 % md as u128) as u64;
            tau[i][j] = (m + u64::from(i == j)) % md;
        }
    }
    hom_condition(p, orders, orders, &tau)?;
    let e = orders.iter().copied().max().unwrap_or(1);
    let cfg = PrimeConfig::new(p, fx.precision.unwrap_or(2 * e + 1))?;
    let module = match GammaModule::new(cfg, orders.clone(), tau, fx.level) {
        Ok(mut m) => {
            m.generator = Some(orbit[0].clone());
            m.labels = labels;
            Some(m)
        }
        Err(err) => {
            checks.push(Finding::fail("orbit.level", err.to_string()));
            None
        }
    };
    Ok(OrbitSolution { module, freedom_log: Some(sys.freedom(orders)), checks, first_violation: None })
}

/// Errors with the first violated identity when the data admit no `τ`.
pub fn ingest_orbit_fixture(text: &str) -> Result<GammaModule> {
    let fx: OrbitFixture = serde_json::from_str(text)?;
    let sol = solve_orbit(&fx)?;
    if let Some(v) = sol.first_violation {
        return Err(Error::Inconsistent(format!("no τ is compatible with {v}")));
    }
    if let Some(f) = sol.checks.iter().find(|f| f.failed()) {
        return Err(Error::Inconsistent(format!("{} ({})", f.name, f.witness)));
    }
    sol.module.ok_or_else(|| Error::Inconsistent("compatible T does not have the stated level".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture(orbit: Vec<Vec<i64>>) -> OrbitFixture {
        OrbitFixture {
            p: 3,
            precision: None,
            level: 2,
            orders: vec![2, 1, 1],
            orbit,
            labels: BTreeMap::new(),
            scalar_identities: vec![],
            t_images: BTreeMap::new(),
        }
    }

    #[test]
    fn recovers_a_chain() {
        // T: e1 -> e2 -> e3 -> 0 on Z/9 x Z/3 x Z/3
        let sol = solve_orbit(&fixture(vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![0, 0, 0]])).unwrap();
        let m = sol.module.unwrap();
        assert_eq!(m.t_matrix()[1][0], 1);
        assert_eq!(m.t_matrix()[2][1], 1);
        assert!(m.is_zero(&m.apply_t(&[0, 0, 1])));
        // T on e1, e2, e3 is pinned completely
        assert_eq!(sol.freedom_log, Some(0));
    }

    #[test]
    fn inconsistent_orbit_names_the_step() {
        // T^2 b = e3 forces T e2 = e3, and T^3 b = e2 then makes T^4 b = e3, not e1
        let orbit = vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]];
        let sol = solve_orbit(&fixture(orbit)).unwrap();
        assert!(sol.first_violation.unwrap().starts_with("T^4 b"));
    }
}
