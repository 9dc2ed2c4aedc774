//! JSON schemas for modules, transitions and findings.

use crate::error::{Error, Result};
use crate::lambda_ring::IwasawaPoly;
use crate::pgroup_module::{is_cyclic_lambda, is_straight, minimal_annihilator, socle, Elem, GammaModule};
use crate::report::Finding;
use crate::transition_engine::{lemmas, ClassificationReport, Transition};
use crate::PrimeConfig;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const DEFAULT_PRECISION: u32 = 12;

/// `tau[i][j]` is the `i`-th coordinate of `τ e_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleJson {
    pub p: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<u32>,
    pub orders: Vec<u32>,
    pub tau: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<Vec<i64>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub labels: BTreeMap<String, Vec<i64>>,
}

fn normalize(p: u64, orders: &[u32], v: &[i64], what: &str) -> Result<Elem> {
    if v.len() != orders.len() {
        return Err(Error::Parse(format!("{what}: expected {} coordinates, got {}", orders.len(), v.len())));
    }
    Ok(v.iter().zip(orders).map(|(&x, &e)| x.rem_euclid(p.pow(e) as i64) as u64).collect())
}

impl ModuleJson {
    pub fn to_module(&self) -> Result<GammaModule> {
        let e = self.orders.first().copied().unwrap_or(1);
        let prec = self.precision.unwrap_or(DEFAULT_PRECISION.max(2 * e + 1));
        let cfg = PrimeConfig::new(self.p, prec)?;
        let r = self.orders.len();
        if self.tau.len() != r || self.tau.iter().any(|row| row.len() != r) {
            return Err(Error::Parse(format!("tau must be a {r}x{r} matrix")));
        }
        let tau: Vec<Vec<u64>> = self
            .tau
            .iter()
            .zip(&self.orders)
            .map(|(row, &e)| row.iter().map(|&x| x.rem_euclid(self.p.pow(e) as i64) as u64).collect())
            .collect();
        let mut m = match self.level {
            Some(l) => GammaModule::new(cfg, self.orders.clone(), tau, l)?,
            None => GammaModule::with_auto_level(cfg, self.orders.clone(), tau)?,
        };
        if let Some(g) = &self.generator {
            m.generator = Some(normalize(self.p, &self.orders, g, "generator")?);
        }
        for (k, v) in &self.labels {
            m.labels.insert(k.clone(), normalize(self.p, &self.orders, v, k)?);
        }
        Ok(m)
    }

    pub fn from_module(m: &GammaModule) -> Self {
        let conv = |v: &[u64]| v.iter().map(|&x| x as i64).collect::<Vec<i64>>();
        ModuleJson {
            p: m.p(),
            precision: Some(m.config().precision),
            level: Some(m.level()),
            orders: m.orders().to_vec(),
            tau: m.tau().iter().map(|r| conv(r)).collect(),
            generator: m.generator.as_deref().map(conv),
            labels: m.labels.iter().map(|(k, v)| (k.clone(), conv(v))).collect(),
        }
    }
}

pub fn parse_module(text: &str) -> Result<GammaModule> {
    let j: ModuleJson = serde_json::from_str(text)?;
    j.to_module()
}

pub fn module_to_json(m: &GammaModule) -> Result<String> {
    Ok(serde_json::to_string_pretty(&serde_json::to_value(ModuleJson::from_module(m))?)?)
}

/// Matrices are `target x source`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransitionJson {
    #[serde(rename = "A")]
    pub a: ModuleJson,
    #[serde(rename = "B")]
    pub b: ModuleJson,
    pub norm: Vec<Vec<i64>>,
    pub lift: Vec<Vec<i64>>,
    pub omega: Vec<i64>,
}

fn matrix(p: u64, target: &[u32], m: &[Vec<i64>], what: &str) -> Result<Vec<Vec<u64>>> {
    if m.len() != target.len() {
        return Err(Error::Parse(format!("{what}: expected {} rows", target.len())));
    }
    Ok(m.iter()
        .zip(target)
        .map(|(row, &e)| row.iter().map(|&x| x.rem_euclid(p.pow(e) as i64) as u64).collect())
        .collect())
}

impl TransitionJson {
    pub fn to_transition(&self) -> Result<Transition> {
        let mut aj = self.a.clone();
        let mut bj = self.b.clone();
        // both sides must share one working precision
        let e = aj.orders.iter().chain(&bj.orders).copied().max().unwrap_or(1);
        let prec = aj.precision.max(bj.precision).unwrap_or(DEFAULT_PRECISION.max(2 * e + 1));
        aj.precision = Some(prec);
        bj.precision = Some(prec);
        let a = aj.to_module()?;
        let b = bj.to_module()?;
        let p = a.p();
        let norm = matrix(p, a.orders(), &self.norm, "norm")?;
        let lift = matrix(p, b.orders(), &self.lift, "lift")?;
        if norm.iter().any(|r| r.len() != b.rank()) || lift.iter().any(|r| r.len() != a.rank()) {
            return Err(Error::Parse("norm must be rank(A) x rank(B) and lift rank(B) x rank(A)".into()));
        }
        let omega = IwasawaPoly::from_ints(a.config(), &self.omega);
        Transition::new(a, b, norm, lift, omega)
    }

    pub fn from_transition(t: &Transition) -> Self {
        let conv = |m: &[Vec<u64>]| m.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect();
        TransitionJson {
            a: ModuleJson::from_module(&t.a),
            b: ModuleJson::from_module(&t.b),
            norm: conv(&t.norm.matrix),
            lift: conv(&t.lift.matrix),
            omega: t.omega.balanced_coeffs(),
        }
    }
}

pub fn parse_transition(text: &str) -> Result<Transition> {
    let j: TransitionJson = serde_json::from_str(text)?;
    j.to_transition()
}

#[derive(Clone, Debug, Serialize)]
pub struct Ranks {
    pub r: usize,
    #[serde(rename = "r'")]
    pub r_prime: usize,
    pub d: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct FindingsJson {
    pub label: String,
    pub ranks: Ranks,
    pub checks: Vec<Finding>,
}

pub fn findings_report(t: &Transition, prev: Option<&Transition>) -> (ClassificationReport, FindingsJson) {
    let (rep, mut checks) = crate::transition_engine::full_report(t, prev);
    if let Ok(c) = lemmas::lreg_conditions(t) {
        checks.push(Finding::new(
            "lreg.conditions",
            crate::report::Status::Inapplicable,
            format!("split={} no_jumps={} straight={} flat={}", c.split, c.no_jumps, c.straight, c.flat),
        ));
    }
    let j = FindingsJson {
        label: rep.label_text(),
        ranks: Ranks { r: rep.r, r_prime: rep.r_prime, d: rep.d },
        checks,
    };
    (rep, j)
}

/// What `module classify` reports.
#[derive(Clone, Debug, Serialize)]
pub struct ModuleSummary {
    pub p: u64,
    pub orders: Vec<u32>,
    pub level: u32,
    pub rank: usize,
    pub exp_log: u32,
    pub sexp_log: u32,
    pub cyclic: bool,
    pub roof_corank: usize,
    pub generator: Option<Vec<u64>>,
    pub socle_dim: usize,
    pub socle_cyclic: bool,
    pub socle_blocks: Vec<usize>,
    pub straight: Option<bool>,
    pub minimal_annihilator: Option<String>,
}

pub fn module_summary(m: &GammaModule) -> ModuleSummary {
    let c = is_cyclic_lambda(m);
    let g = m.generator.clone().filter(|_| c.cyclic).or(c.generator.clone());
    let st = socle(m).structure();
    ModuleSummary {
        p: m.p(),
        orders: m.orders().to_vec(),
        level: m.level(),
        rank: m.rank(),
        exp_log: m.exp_log(),
        sexp_log: m.sexp_log(),
        cyclic: c.cyclic,
        roof_corank: c.roof_corank,
        straight: g.as_ref().map(|b| is_straight(m, b)),
        minimal_annihilator: g.as_ref().and_then(|b| minimal_annihilator(m, b).ok()).map(|f| f.to_human()),
        generator: g,
        socle_dim: st.dim,
        socle_cyclic: st.cyclic,
        socle_blocks: st.blocks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn module_round_trip() {
        let text = r#"{"p":3,"orders":[2,1],"tau":[[1,3],[1,1]],"generator":[1,0],"labels":{"x":[-1,2]}}"#;
        let m = parse_module(text).unwrap();
        assert_eq!(m.labels["x"], vec![8, 2]);
        let again = parse_module(&module_to_json(&m).unwrap()).unwrap();
        assert_eq!(again.orders(), m.orders());
        assert_eq!(again.tau(), m.tau());
        assert_eq!(again.level(), m.level());
        assert_eq!(again.generator, m.generator);
        assert_eq!(again.labels, m.labels);
    }

    #[test]
    fn trivial_module() {
        let m = parse_module(r#"{"p":3,"orders":[1],"tau":[[1]]}"#).unwrap();
        assert_eq!(m.rank(), 1);
        assert_eq!(m.level(), 1);
    }

    #[test]
    fn bad_shapes() {
        assert!(parse_module(r#"{"p":3,"orders":[1,1],"tau":[[1]]}"#).is_err());
        assert!(parse_module(r#"{"p":3,"orders":[1],"tau":[[0]]}"#).is_err());
        assert!(parse_module(r#"{"p":4,"orders":[1],"tau":[[1]]}"#).is_err());
        assert!(parse_module("not json").is_err());
    }
}
