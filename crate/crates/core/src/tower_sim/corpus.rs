//! Seeded random corpora of model towers.

use super::{analyze, build_tower, shares_root_with_omega, TowerReport, TowerSpec};
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorpusConfig {
    pub p: u64,
    pub count: usize,
    pub max_deg: usize,
    pub seed: u64,
    pub horizon: u32,
    pub precision: u32,
    /// Run the per-transition lemma checks as well.
    pub lemmas: bool,
}

impl CorpusConfig {
    pub fn new(p: u64, count: usize, max_deg: usize, seed: u64) -> Self {
        CorpusConfig { p, count, max_deg, seed, horizon: TowerSpec::default_horizon(p), precision: 8, lemmas: true }
    }
}

/// Distinguished `f` with lower coefficients `p·u`, `u ∈ [0, p^2)`, and no
/// root in common with any `ω_n` up to the horizon.
pub fn sample_polys(cfg: &CorpusConfig) -> Vec<Vec<i64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let p = cfg.p as i64;
    let mut out = Vec::with_capacity(cfg.count);
    while out.len() < cfg.count {
        let deg = rng.gen_range(1..=cfg.max_deg);
        let mut f: Vec<i64> = (0..deg).map(|_| p * rng.gen_range(0..p * p)).collect();
        f.push(1);
        if f[0] != 0 && !shares_root_with_omega(cfg.p, &f, cfg.horizon) {
            out.push(f);
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusEntry {
    pub index: usize,
    pub f: Vec<i64>,
    pub precision: u32,
    pub ranks: Vec<usize>,
    pub n0: Option<u32>,
    pub z: Option<i64>,
    pub labels: Vec<String>,
    pub violations: Vec<String>,
    pub observations_failed: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusReport {
    pub format_version: u32,
    pub tool_version: String,
    pub config: CorpusConfig,
    pub towers: Vec<CorpusEntry>,
    pub label_counts: BTreeMap<String, usize>,
    pub n0_distribution: BTreeMap<String, usize>,
    /// Failed property checks, aggregated by name.
    pub violations: BTreeMap<String, usize>,
    /// Failed observational checks, aggregated by name.
    pub observations_failed: BTreeMap<String, usize>,
}

impl CorpusReport {
    pub fn violation_count(&self) -> usize {
        self.violations.values().sum()
    }

    /// Count of towers where a property whose name starts with `prefix` failed.
    pub fn violations_of(&self, prefix: &str) -> usize {
        self.violations.iter().filter(|(k, _)| k.starts_with(prefix)).map(|(_, v)| v).sum()
    }

    pub fn to_json(&self) -> Result<String> {
        // serde_json maps are ordered, so keys come out sorted
        let v = serde_json::to_value(self)?;
        Ok(serde_json::to_string_pretty(&v)?)
    }
}

fn entry(index: usize, f: Vec<i64>, rep: &TowerReport) -> CorpusEntry {
    CorpusEntry {
        index,
        f,
        precision: rep.precision,
        ranks: rep.levels.iter().map(|l| l.rank).collect(),
        n0: rep.n0,
        z: rep.z,
        labels: rep.transitions.iter().map(|t| t.label.clone()).collect(),
        violations: rep.violations().iter().map(|f| format!("{}: {}", f.name, f.witness)).collect(),
        observations_failed: rep.observations.iter().filter(|f| f.failed()).map(|f| f.name.clone()).collect(),
    }
}

pub fn corpus_run(cfg: &CorpusConfig) -> Result<CorpusReport> {
    if cfg.max_deg == 0 && cfg.count > 0 {
        return Err(Error::Precondition("max degree must be at least 1".into()));
    }
    let polys = sample_polys(cfg);
    let results: Vec<Result<(CorpusEntry, Vec<String>)>> = polys
        .into_par_iter()
        .enumerate()
        .map(|(i, f)| {
            let spec = TowerSpec { p: cfg.p, precision: cfg.precision, f: Some(f.clone()), flat: None, horizon: cfg.horizon };
            let tw = build_tower(&spec)?;
            let rep = analyze(&tw, cfg.lemmas);
            let names = rep.violations().iter().map(|f| f.name.clone()).collect();
            Ok((entry(i, f, &rep), names))
        })
        .collect();
    let mut towers = vec![];
    let mut label_counts = BTreeMap::new();
    let mut n0_distribution = BTreeMap::new();
    let mut violations = BTreeMap::new();
    let mut observations_failed = BTreeMap::new();
    for r in results {
        let (e, names) = r?;
        for l in &e.labels {
            *label_counts.entry(l.clone()).or_insert(0) += 1;
        }
        let key = e.n0.map_or("unsettled".to_string(), |n| n.to_string());
        *n0_distribution.entry(key).or_insert(0) += 1;
        for n in names {
            *violations.entry(n).or_insert(0) += 1;
        }
        for n in &e.observations_failed {
            *observations_failed.entry(n.clone()).or_insert(0) += 1;
        }
        towers.push(e);
    }
    Ok(CorpusReport {
        format_version: 1,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        config: cfg.clone(),
        towers,
        label_counts,
        n0_distribution,
        violations,
        observations_failed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_corpus() {
        let r = corpus_run(&CorpusConfig::new(3, 0, 4, 1)).unwrap();
        assert!(r.towers.is_empty());
        assert_eq!(r.violation_count(), 0);
    }

    #[test]
    fn sampling_is_seeded() {
        let c = CorpusConfig::new(3, 10, 4, 42);
        assert_eq!(sample_polys(&c), sample_polys(&c));
        assert_ne!(sample_polys(&c), sample_polys(&CorpusConfig { seed: 43, ..c.clone() }));
    }
}
