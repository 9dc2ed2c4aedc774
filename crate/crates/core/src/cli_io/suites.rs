//! Named verification suites.

use super::fixtures::{load_fixture, run_fixture, NAMES};
use crate::error::{Error, Result};
use crate::lambda_ring::{
    check_identities, inverse_mod, involution, InvolutionMap, is_distinguished, omega, weierstrass_prepare, IwasawaPoly,
    QuotientIdeal,
};
use crate::pgroup_module::{faithful_dual_generator, order_reversal, order_reversal_with, GammaModule};
use crate::report::{Finding, Status};
use crate::tower_sim::corpus::{corpus_run, CorpusConfig};
use crate::tower_sim::{analyze, build_tower, TowerSpec};
use crate::PrimeConfig;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Identities,
    PaperExamples,
    TheoremCorpus,
    All,
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "identities" => Suite::Identities,
            "paper-examples" => Suite::PaperExamples,
            "theorem-corpus" => Suite::TheoremCorpus,
            "all" => Suite::All,
            _ => return Err(Error::Parse(format!("unknown suite {s}"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub precision: u32,
    /// Random inputs per configuration for the ring checks.
    pub samples: usize,
    pub corpus_count: usize,
    pub corpus_max_deg: usize,
    pub horizon: u32,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 42, precision: 12, samples: 100, corpus_count: 50, corpus_max_deg: 4, horizon: 5 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub format_version: u32,
    pub tool_version: String,
    pub suite: Suite,
    pub config: SuiteConfig,
    pub passed: usize,
    pub failed: usize,
    pub inapplicable: usize,
    pub findings: Vec<Finding>,
}

impl SuiteReport {
    fn new(suite: Suite, config: &SuiteConfig, findings: Vec<Finding>) -> Self {
        let count = |s: Status| findings.iter().filter(|f| f.status == s).count();
        SuiteReport {
            format_version: 1,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            suite,
            config: config.clone(),
            passed: count(Status::Pass),
            failed: count(Status::Fail),
            inapplicable: count(Status::Inapplicable),
            findings,
        }
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

pub fn run_suite(suite: Suite, config: &SuiteConfig) -> Result<SuiteReport> {
    let findings = match suite {
        Suite::Identities => identities(config)?,
        Suite::PaperExamples => paper_examples()?,
        Suite::TheoremCorpus => theorem_corpus(config)?,
        Suite::All => {
            let mut f = identities(config)?;
            f.extend(paper_examples()?);
            f.extend(theorem_corpus(config)?);
            f
        }
    };
    Ok(SuiteReport::new(suite, config, findings))
}

fn random_poly(cfg: PrimeConfig, rng: &mut ChaCha8Rng, deg: usize) -> IwasawaPoly {
    let m = cfg.modulus();
    IwasawaPoly::new(cfg, (0..=deg).map(|_| rng.gen_range(0..m)).collect())
}

/// Tower identities for `ω_n`, `ν_n`, `u` at `p ∈ {3,5,7}`, `n ≤ 4`.
pub fn ring_identities(precision: u32) -> Result<Vec<Finding>> {
    let mut out = vec![];
    for p in [3u64, 5, 7] {
        let cfg = PrimeConfig::new(p, precision)?.with_degree_cap(p.pow(5) as usize);
        for n in 1..=4 {
            let c = check_identities(cfg, n)?;
            out.push(Finding::check(
                &format!("ring.identities.p{p}.n{n}"),
                c.all(),
                format!(
                    "ω_n | ω_(n+1) with quotient ν: {}, ν = ω^(p-1) + p u(ω): {}, ω^p = ω_(n+1) - p ω u(ω): {}, ν ≡ p mod ω: {}",
                    c.omega_divides, c.nu_decomposition, c.omega_power, c.nu_mod_omega_is_p
                ),
            ));
        }
    }
    Ok(out)
}

/// `f ↦ f*` followed by its inverse is the identity on `Λ/(ω_n, p^N)`.
/// The tabulated map is compared against direct substitution on the first
/// few samples wherever that is cheap.
pub fn involution_round_trips(precision: u32, samples: usize, seed: u64) -> Result<Vec<Finding>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![];
    for p in [3u64, 5, 7] {
        let cfg = PrimeConfig::new(p, precision)?.with_degree_cap(p.pow(4) as usize);
        for n in 1..=4 {
            let map = InvolutionMap::new(cfg, n)?;
            let w = omega(cfg, n)?;
            let d = w.degree().unwrap();
            let mut bad = None;
            for i in 0..samples {
                let f = random_poly(cfg, &mut rng, d - 1);
                let image = map.apply(&f)?;
                if i < 3 && d <= 125 && involution(&f, n)? != image {
                    bad = Some(format!("tabulated and direct substitution differ on {f}"));
                    break;
                }
                if map.apply_back(&image)? != f.rem(&w)? {
                    bad = Some(format!("fails on {f}"));
                    break;
                }
            }
            out.push(Finding::check(
                &format!("ring.involution.p{p}.n{n}"),
                bad.is_none(),
                bad.unwrap_or(format!("{samples} random elements")),
            ));
        }
    }
    Ok(out)
}

/// Preparation on random non-units modulo `(ω_2, p^N)`, certified in both
/// directions independently of the routine's own check.
pub fn weierstrass_samples(samples: usize, seed: u64) -> Result<Vec<Finding>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut out = vec![];
    for (p, prec) in [(3u64, 8u32), (3, 12), (5, 6), (7, 5)] {
        let cfg = PrimeConfig::new(p, prec)?;
        let ideal = QuotientIdeal::level(cfg, 2)?;
        let base = omega(cfg, 2)?;
        let d = base.degree().unwrap();
        let mut done = 0;
        let mut failure = None;
        while done < samples && failure.is_none() {
            let mut g = random_poly(cfg, &mut rng, d - 1);
            let c0 = g.coeff(0) / p * p;
            let mut cs = g.coeffs().to_vec();
            cs[0] = c0;
            g = IwasawaPoly::new(cfg, cs);
            let g = ideal.reduce(&g);
            if g.weierstrass_degree().is_none() {
                continue; // positive μ, not preparable
            }
            done += 1;
            let pr = weierstrass_prepare(&g, &ideal)?;
            let forward = ideal.reduce(&g.sub(&pr.poly.mul(&pr.unit))).is_zero();
            let backward = match inverse_mod(&pr.unit, &base) {
                Ok(ui) => ideal.contains(&g.mul(&ui).sub(&pr.poly))?,
                Err(_) => false,
            };
            if !(is_distinguished(&pr.poly) && forward && backward) {
                failure = Some(format!("g = {g}: P = {}, distinguished {}, g ∈ (P) {forward}, P ∈ (g) {backward}",
                    pr.poly, is_distinguished(&pr.poly)));
            }
        }
        out.push(Finding::check(
            &format!("weierstrass.p{p}.N{prec}"),
            failure.is_none(),
            failure.unwrap_or(format!("{done} random non-units")),
        ));
    }
    Ok(out)
}

/// `M = Z/p^e[T]/(f^m)`, a cyclic module killed by `f^m`.
pub fn reversal_module(f: &IwasawaPoly, m: usize) -> Result<GammaModule> {
    let fm = f.pow(m as u64);
    let q = GammaModule::ring_quotient_unleveled(&fm, 1)?;
    let mut g = GammaModule::with_auto_level(q.config(), q.orders().to_vec(), q.tau().to_vec())?;
    g.generator = q.generator.clone();
    Ok(g)
}

/// The pairing `<f^k g, (f*)^j ρ>` vanishes for `k + j ≥ m` with the
/// default dual generator, and exactly there for a faithful one.
pub fn order_reversal_checks() -> Result<Vec<Finding>> {
    let cfg = PrimeConfig::new(3, 3)?;
    let mut out = vec![];
    for (name, f) in [("T", IwasawaPoly::t(cfg)), ("T-3", IwasawaPoly::from_ints(cfg, &[-3, 1]))] {
        for m in 1..=3 {
            let md = reversal_module(&f, m)?;
            let tab = order_reversal(&md, &f, m)?;
            out.push(Finding::check(
                &format!("dual.order_reversal.f={name}.m{m}"),
                tab.law_holds,
                format!("vanishing for k + j ≥ {m} with the default generator; sharp: {}", tab.sharp),
            ));
            let exact = match faithful_dual_generator(&md, &f, m)? {
                Some(rho) => {
                    let t = order_reversal_with(&md, &f, m, Some(rho.clone()))?;
                    let ok = (0..=m).all(|k| (0..=m).all(|j| t.vanishes[k][j] == (k + j >= m)));
                    Finding::check(
                        &format!("dual.order_reversal_exact.f={name}.m{m}"),
                        ok && !t.vanishes[0][0],
                        format!("ρ = {rho:?}, table {:?}", t.vanishes),
                    )
                }
                None => Finding::fail(&format!("dual.order_reversal_exact.f={name}.m{m}"), "no faithful dual generator"),
            };
            out.push(exact);
        }
    }
    Ok(out)
}

fn identities(c: &SuiteConfig) -> Result<Vec<Finding>> {
    let mut out = ring_identities(c.precision)?;
    out.extend(involution_round_trips(c.precision, c.samples, c.seed)?);
    out.extend(weierstrass_samples(2 * c.samples, c.seed)?);
    out.extend(order_reversal_checks()?);
    Ok(out)
}

fn paper_examples() -> Result<Vec<Finding>> {
    let mut out = vec![];
    for n in NAMES {
        let rep = run_fixture(&load_fixture(n)?)?;
        out.extend(rep.checks);
    }
    Ok(out)
}

/// Flat towers `Λ/(p^k, ω_n)`, `k ≤ 2`, checked for `termt`.
pub fn flat_termt(p: u64, horizon: u32) -> Result<Vec<Finding>> {
    let mut out = vec![];
    for k in 1..=2 {
        let tw = build_tower(&TowerSpec::flat(p, k, horizon))?;
        let rep = analyze(&tw, false);
        for f in rep.properties.iter().filter(|f| f.name.starts_with("termt")) {
            out.push(Finding::new(&format!("flat{k}.{}", f.name), f.status, f.witness.clone()));
        }
    }
    Ok(out)
}

fn theorem_corpus(c: &SuiteConfig) -> Result<Vec<Finding>> {
    let mut cc = CorpusConfig::new(3, c.corpus_count, c.corpus_max_deg, c.seed);
    cc.horizon = c.horizon;
    let rep = corpus_run(&cc)?;
    let mut out = vec![];
    for (prefix, what) in [
        ("fukuda", "rank persistence after the first equal step"),
        ("termt", "r < d implies r' = r"),
        ("stab", "stabilization relations"),
        ("val0", "p^v(f(0)) = ord(a_1)"),
        ("lminpol", "g_n - f kills the lifted level"),
    ] {
        let v = rep.violations_of(prefix);
        out.push(Finding::check(&format!("corpus.{prefix}"), v == 0, format!("{what}: {v} violating towers of {}", rep.towers.len())));
    }
    let mut lemma: Vec<(&String, &usize)> =
        rep.violations.iter().filter(|(k, _)| k.starts_with("level")).collect();
    lemma.sort();
    out.push(Finding::check(
        "corpus.transition_lemmas",
        lemma.is_empty(),
        format!("{lemma:?}"),
    ));
    out.push(Finding::new(
        "corpus.observations",
        Status::Inapplicable,
        format!("{:?}", rep.observations_failed),
    ));
    out.extend(flat_termt(3, 4)?);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names() {
        assert_eq!("paper-examples".parse::<Suite>().unwrap(), Suite::PaperExamples);
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn reversal_module_shape() {
        let cfg = PrimeConfig::new(3, 3).unwrap();
        let m = reversal_module(&IwasawaPoly::t(cfg), 2).unwrap();
        assert_eq!(m.orders(), &[3, 3]);
    }
}
