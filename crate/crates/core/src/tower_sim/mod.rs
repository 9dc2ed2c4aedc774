//! Model towers `A_n = Λ/(f, ω_n)` and flat towers `Λ/(p^k, ω_n)`.

pub mod corpus;

use crate::arith::{int_valuation, max_precision};
use crate::error::{Error, Result};
use crate::lambda_ring::{nu, omega, to_dense, IntPoly, IwasawaPoly};
use crate::pgroup_module::annihilator::minimal_annihilator;
use crate::pgroup_module::{binomial_shape, quotient, GammaModule, Hom, Quotient};
use crate::report::Finding;
use crate::transition_engine::{classify, lemmas, termt, Label, Transition};
use crate::PrimeConfig;
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TowerSpec {
    pub p: u64,
    /// Starting precision; raised automatically.
    pub precision: u32,
    /// Integer coefficients of `f`, constant term first.
    pub f: Option<Vec<i64>>,
    /// `k` for the flat tower `Λ/(p^k, ω_n)`.
    pub flat: Option<u32>,
    pub horizon: u32,
}

impl TowerSpec {
    pub fn poly(p: u64, f: Vec<i64>, horizon: u32) -> Self {
        TowerSpec { p, precision: 8, f: Some(f), flat: None, horizon }
    }

    pub fn flat(p: u64, k: u32, horizon: u32) -> Self {
        TowerSpec { p, precision: 2 * k + 1, f: None, flat: Some(k), horizon }
    }

    pub fn default_horizon(p: u64) -> u32 {
        if p == 3 {
            5
        } else {
            3
        }
    }

    fn validate(&self) -> Result<()> {
        match (&self.f, self.flat) {
            (Some(f), None) => {
                let f = trim(f);
                let Some((&lead, lower)) = f.split_last() else {
                    return Err(Error::Parse("f is zero".into()));
                };
                if lead != 1 || f.len() < 2 || lower.iter().any(|c| c.rem_euclid(self.p as i64) != 0) {
                    return Err(Error::Precondition(format!("f = {f:?} is not distinguished")));
                }
            }
            (None, Some(k)) if k >= 1 => {}
            _ => return Err(Error::Precondition("exactly one of f and a flat exponent is required".into())),
        }
        if self.horizon < 1 {
            return Err(Error::Precondition("horizon must be at least 1".into()));
        }
        Ok(())
    }
}

fn trim(f: &[i64]) -> Vec<i64> {
    let mut v = f.to_vec();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// Does `f` share a root with some `ω_n`, `n ≤ horizon`? Roots of `ω_n`
/// are `ζ - 1` with minimal polynomials `Φ_{p^k}(T+1)`, `k < n`.
pub fn shares_root_with_omega(p: u64, f: &[i64], horizon: u32) -> bool {
    let f = IntPoly(f.iter().map(|&c| c as i128).collect()).trim();
    let Some(deg) = f.degree() else { return true };
    for k in 0..horizon {
        let phi_deg = if k == 0 { 1 } else { (p - 1) * p.pow(k - 1) } as usize;
        if phi_deg > deg {
            break;
        }
        let phi = if k == 0 { IntPoly(vec![0, 1]) } else { IntPoly::omega(p, k).div_rem_monic(&IntPoly::omega(p, k - 1)).0 };
        if f.div_rem_monic(&phi).1 .0.is_empty() {
            return true;
        }
    }
    false
}

#[derive(Clone, Debug)]
pub struct Tower {
    pub spec: TowerSpec,
    pub precision: u32,
    /// `A_1, ..., A_horizon`, each with generator `a_n`.
    pub levels: Vec<GammaModule>,
    /// `A_n → A_{n+1}` for `n = 1..horizon-1`.
    pub transitions: Vec<Transition>,
    pub lift_injective: Vec<bool>,
    /// `f` shares a root with some `ω_n`.
    pub degenerate: bool,
}

impl Tower {
    pub fn non_conic(&self) -> bool {
        self.lift_injective.iter().any(|&ok| !ok)
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.levels.iter().map(|m| m.rank()).collect()
    }

    pub fn generator(&self, n: u32) -> &[u64] {
        self.levels[n as usize - 1].generator.as_deref().unwrap_or(&[])
    }

    pub fn level(&self, n: u32) -> &GammaModule {
        &self.levels[n as usize - 1]
    }

    pub fn f_poly(&self) -> Option<IwasawaPoly> {
        let cfg = self.levels[0].config();
        self.spec.f.as_ref().map(|f| IwasawaPoly::from_ints(cfg, f))
    }
}

/// Levels as quotients of `Z/p^N[T]/(m_n)`, where `m_n = f` for a
/// polynomial tower and `m_n = ω_n` for a flat one.
fn build_at(spec: &TowerSpec, cfg: PrimeConfig) -> Result<(Vec<GammaModule>, Vec<Quotient>, Vec<IwasawaPoly>, Vec<IwasawaPoly>)> {
    let mut levels = vec![];
    let mut quots = vec![];
    let mut omegas = vec![];
    let mut moduli = vec![];
    for n in 1..=spec.horizon {
        let w = omega(cfg, n)?;
        let (base, rel) = match (&spec.f, spec.flat) {
            (Some(f), _) => {
                let fp = IwasawaPoly::from_ints(cfg, f);
                let base = GammaModule::ring_quotient_unleveled(&fp, n)?;
                let wf = w.rem(&fp)?;
                let rel = base.lambda_span(&[to_dense(&wf, base.rank())]);
                (base, rel)
            }
            (None, Some(k)) => {
                let base = GammaModule::ring_quotient(&w, n)?;
                let rel = base.p_power_submodule(k);
                (base, rel)
            }
            _ => unreachable!("validated"),
        };
        let q = quotient(&base, &rel)?;
        moduli.push(match &spec.f {
            Some(f) => IwasawaPoly::from_ints(cfg, f),
            None => w.clone(),
        });
        levels.push(q.module.clone());
        quots.push(q);
        omegas.push(w);
    }
    Ok((levels, quots, omegas, moduli))
}

fn poly_of_section(cfg: PrimeConfig, s: &[u64]) -> IwasawaPoly {
    IwasawaPoly::new(cfg, s.to_vec())
}

pub fn build_tower(spec: &TowerSpec) -> Result<Tower> {
    spec.validate()?;
    let degenerate = spec.f.as_ref().is_some_and(|f| shares_root_with_omega(spec.p, &trim(f), spec.horizon));
    let cap = max_precision(spec.p);
    let mut prec = spec.precision.max(2);
    if let Some(f) = &spec.f {
        // the constant term alone already bounds exp(A_1)
        if f[0] != 0 {
            prec = prec.max(2 * int_valuation(spec.p, f[0] as i128) + 1);
        }
    }
    let (levels, quots, omegas, moduli, cfg) = loop {
        if prec > cap {
            return Err(Error::PrecisionOverflow(format!("p^{prec} exceeds the cap p^{cap}")));
        }
        let cfg = PrimeConfig::new(spec.p, prec)?;
        let (levels, quots, omegas, moduli) = build_at(spec, cfg)?;
        let e = levels.iter().map(|m| m.exp_log()).max().unwrap_or(0);
        if degenerate || prec > 2 * e {
            break (levels, quots, omegas, moduli, cfg);
        }
        prec = (2 * e + 1).max(prec + 1);
    };

    let mut transitions = vec![];
    let mut lift_injective = vec![];
    for i in 0..levels.len().saturating_sub(1) {
        let (a, b) = (&levels[i], &levels[i + 1]);
        let (qa, qb) = (&quots[i], &quots[i + 1]);
        let (ma, mb) = (&moduli[i], &moduli[i + 1]);
        let norm_imgs: Vec<Vec<u64>> = qb
            .section
            .iter()
            .map(|s| {
                let g = poly_of_section(cfg, s).rem(ma).expect("monic");
                qa.proj.apply(a, &to_dense(&g, ma.degree().unwrap()))
            })
            .collect();
        let v = nu(cfg, i as u32 + 1)?;
        let lift_imgs: Vec<Vec<u64>> = qa
            .section
            .iter()
            .map(|s| {
                let g = poly_of_section(cfg, s).mul(&v).rem(mb).expect("monic");
                qb.proj.apply(b, &to_dense(&g, mb.degree().unwrap()))
            })
            .collect();
        let norm = Hom::from_images(b, a, &norm_imgs)?;
        let lift = Hom::from_images(a, b, &lift_imgs)?;
        lift_injective.push(lift.is_injective(a, b));
        transitions.push(Transition { a: a.clone(), b: b.clone(), norm, lift, omega: omegas[i].clone() });
    }
    Ok(Tower { spec: spec.clone(), precision: prec, levels, transitions, lift_injective, degenerate })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FukudaResult {
    /// Least `n` with `r_n = r_{n+1}`.
    pub n0: Option<u32>,
    pub ranks: Vec<usize>,
    pub finding: Finding,
}

pub fn fukuda_index(tw: &Tower) -> FukudaResult {
    let ranks = tw.ranks();
    let n0 = (0..ranks.len().saturating_sub(1)).find(|&i| ranks[i] == ranks[i + 1]).map(|i| i as u32 + 1);
    let finding = match n0 {
        None if ranks.len() < 2 => Finding::inapplicable("fukuda", "horizon < 2"),
        None => Finding::inapplicable(
            "fukuda",
            if tw.spec.flat.is_some() { "unsettled (flat tower, rank keeps growing)" } else { "unsettled within the horizon" },
        ),
        Some(n0) => {
            let r0 = ranks[n0 as usize - 1];
            let bad = ranks.iter().enumerate().skip(n0 as usize - 1).find(|(_, &r)| r != r0);
            Finding::check(
                "fukuda",
                bad.is_none(),
                match bad {
                    Some((i, r)) => format!("n0 = {n0}, r_{} = {r} ≠ {r0}", i + 1),
                    None => format!("n0 = {n0}, ranks {ranks:?}"),
                },
            )
        }
    };
    FukudaResult { n0, ranks, finding }
}

/// `z` with `ord(a_n) = p^{n+z}` at `n = n0`.
pub fn order_shift(tw: &Tower, n0: u32) -> i64 {
    let m = tw.level(n0);
    m.order_log(tw.generator(n0)) as i64 - n0 as i64
}

pub fn verify_stab_relations(tw: &Tower) -> Vec<Finding> {
    let names = ["stab.lift_generator", "stab.lift_image", "stab.omega_orbit", "stab.order_shift"];
    let Some(n0) = fukuda_index(tw).n0 else {
        return names.iter().map(|n| Finding::inapplicable(n, "n0 unsettled")).collect();
    };
    let z = order_shift(tw, n0);
    let h = tw.spec.horizon;
    let mut fails: [Vec<String>; 4] = Default::default();
    for n in n0..h {
        let t = &tw.transitions[n as usize - 1];
        let (a, b) = (&t.a, &t.b);
        let (an, bn) = (tw.generator(n), tw.generator(n + 1));
        if t.lift.apply(b, an) != b.scale(b.p(), bn) {
            fails[0].push(format!("n={n}"));
        }
        if !t.lift_image().same_as(&b.p_power_submodule(1)) {
            fails[1].push(format!("n={n}"));
        }
        let sa = a.torsion_submodule(1);
        let lsa = b.span(&sa.generators(a).iter().map(|x| t.lift.apply(b, x)).collect::<Vec<_>>());
        let w = t.omega.with_config(b.config());
        if (0..b.rank()).any(|i| !lsa.contains(b, &b.act(&w, &b.apply_t_pow(bn, i)))) {
            fails[2].push(format!("n={n}"));
        }
    }
    for n in n0..=h {
        let o = tw.level(n).order_log(tw.generator(n)) as i64;
        if o != n as i64 + z {
            fails[3].push(format!("n={n}: ord(a_n) = p^{o}"));
        }
    }
    names
        .iter()
        .zip(fails)
        .map(|(name, f)| {
            if f.is_empty() {
                Finding::pass(name, format!("n0 = {n0}, z = {z}"))
            } else {
                Finding::fail(name, f.join("; "))
            }
        })
        .collect()
}

/// Property checks and observations for the main structure theorem.
#[derive(Clone, Debug, Default, Serialize)]
pub struct MainFindings {
    pub properties: Vec<Finding>,
    /// Statements about actual class groups that the model need not satisfy.
    pub observations: Vec<Finding>,
}

pub fn verify_main(tw: &Tower) -> MainFindings {
    let mut out = MainFindings::default();
    let p = tw.spec.p;
    let fk = fukuda_index(tw);
    let Some(fint) = &tw.spec.f else {
        // flat towers only see the flat branch of the dichotomy
        let flat = fk.n0.is_none() && tw.levels.iter().all(|m| m.sexp_log() == m.exp_log());
        out.observations.push(Finding::check("main.dichotomy", flat, "flat branch: sexp = exp at every level"));
        return out;
    };
    if tw.degenerate || tw.non_conic() {
        out.properties.push(Finding::inapplicable("val0", "degenerate or non-conic tower"));
        out.properties.push(Finding::inapplicable("lminpol", "degenerate or non-conic tower"));
        return out;
    }
    let a1 = tw.level(1);
    let m1 = a1.order_log(tw.generator(1));
    let v0 = int_valuation(p, fint[0] as i128);
    out.properties.push(Finding::check("val0", m1 == v0, format!("ord(a_1) = p^{m1}, v_p(f(0)) = {v0}")));
    out.observations.push(if m1 == 1 {
        Finding::check("main.eisenstein", v0 == 1, format!("v_p(f(0)) = {v0}"))
    } else {
        Finding::inapplicable("main.eisenstein", "ord(a_1) > p")
    });

    let Some(n0) = fk.n0 else {
        out.observations.push(Finding::inapplicable("main.dichotomy", "n0 unsettled"));
        out.observations.push(Finding::inapplicable("main.binomial", "n0 unsettled"));
        out.properties.push(Finding::inapplicable("lminpol", "n0 unsettled"));
        return out;
    };
    let r_final = *fk.ranks.last().unwrap();
    let bound = (p * (p - 1)) as usize;
    let rank_branch = n0 <= 3 && (m1 <= 1 || r_final < bound);
    let flat_branch = n0 > 3 && {
        let m = tw.level(n0 - 1);
        m.sexp_log() == m.exp_log()
    };
    out.observations.push(Finding::check(
        "main.dichotomy",
        rank_branch || flat_branch,
        format!(
            "n0 = {n0}, final rank {r_final}, bound p(p-1) = {bound}; matched: {}",
            match (rank_branch, flat_branch) {
                (true, _) => "rank branch",
                (_, true) => "flat branch",
                _ => "neither",
            }
        ),
    ));
    let an0 = tw.level(n0);
    let q = p.pow(m1);
    out.observations.push(match minimal_annihilator(an0, tw.generator(n0)) {
        Ok(g) => Finding::check("main.binomial", binomial_shape(&g, q), format!("f_{n0} = {g}, q = {q}")),
        Err(e) => Finding::fail("main.binomial", e.to_string()),
    });

    let mut bad = vec![];
    let mut step_bad = vec![];
    for n in n0.max(2)..=tw.spec.horizon {
        let t = &tw.transitions[n as usize - 2];
        let b = &t.b;
        let cfg = b.config();
        let Ok(g) = minimal_annihilator(b, tw.generator(n)) else {
            bad.push(format!("n={n}: no monic annihilator"));
            continue;
        };
        let diff = g.sub(&IwasawaPoly::from_ints(cfg, fint));
        let img = t.lift_image();
        if img.generators(b).iter().any(|x| !b.is_zero(&b.act(&diff, x))) {
            bad.push(format!("n={n}: g_n = {g}"));
        }
        // proof step: (g_n - f)/p kills a_{n-1}
        match diff.div_ppow(1) {
            Some(delta) => {
                let a = &t.a;
                let delta = IwasawaPoly::new(a.config(), delta.coeffs().to_vec());
                if !a.is_zero(&a.act(&delta, tw.generator(n - 1))) {
                    step_bad.push(format!("n={n}"));
                }
            }
            None => step_bad.push(format!("n={n}: g_n ≢ f mod p")),
        }
    }
    out.properties.push(if bad.is_empty() {
        Finding::pass("lminpol", format!("levels {}..={}", n0.max(2), tw.spec.horizon))
    } else {
        Finding::fail("lminpol", bad.join("; "))
    });
    out.observations.push(if step_bad.is_empty() {
        Finding::pass("lminpol.proof_step", "(g_n - f)/p kills a_{n-1}")
    } else {
        Finding::fail("lminpol.proof_step", step_bad.join("; "))
    });
    out
}

/// Composite norm `A_m → A_n`.
pub fn projection(tw: &Tower, m: u32, n: u32) -> Hom {
    let mut h = Hom { matrix: tw.level(m).identity() };
    for k in (n..m).rev() {
        let t = &tw.transitions[k as usize - 1];
        h = t.norm.compose(&t.a, &h);
    }
    h
}

/// Finite-level surrogates of the conicity conditions.
pub fn conicity_check(tw: &Tower) -> Vec<Finding> {
    let h = tw.spec.horizon;
    let mut bad = vec![];
    for m in 2..=h {
        for n in 1..m {
            let am = tw.level(m);
            let k = projection(tw, m, n).kernel(am, tw.level(n));
            let w = am.poly_image(&omega(am.config(), n).expect("degree cap"));
            if !k.same_as(&w) {
                bad.push(format!("({m},{n})"));
            }
        }
    }
    let point2 = if h < 2 {
        Finding::inapplicable("conic.kernel_is_omega", "horizon < 2")
    } else if bad.is_empty() {
        Finding::pass("conic.kernel_is_omega", "ker(A_m → A_n) = ω_n A_m")
    } else {
        Finding::fail("conic.kernel_is_omega", bad.join(" "))
    };
    // Λ a_n is all of A_n, so saturation inside it is automatic
    let gen_ok = tw.levels.iter().all(|m| {
        m.generator.as_ref().is_some_and(|g| m.lambda_span(&[g.clone()]).log_order() == m.log_order())
    });
    let point3 = Finding::check("conic.saturated", gen_ok, "Λ a_n = A_n at every level");
    let point4 = if tw.spec.flat.is_some() {
        Finding::inapplicable("conic.coprime", "flat tower")
    } else {
        let proper = tw.levels.iter().all(|m| m.rank() > 0);
        Finding::check(
            "conic.coprime",
            proper && !tw.degenerate && !tw.non_conic(),
            format!("proper: {proper}, degenerate: {}, lifts injective: {:?}", tw.degenerate, tw.lift_injective),
        )
    };
    vec![point2, point3, point4]
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelSummary {
    pub level: u32,
    pub orders: Vec<u32>,
    pub rank: usize,
    pub exp_log: u32,
    pub sexp_log: u32,
    pub generator_order_log: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct TransitionSummary {
    pub from: u32,
    pub label: String,
    pub r: usize,
    pub r_prime: usize,
    pub d: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct TowerReport {
    pub spec: TowerSpec,
    pub precision: u32,
    pub degenerate: bool,
    pub non_conic: bool,
    pub levels: Vec<LevelSummary>,
    pub transitions: Vec<TransitionSummary>,
    pub n0: Option<u32>,
    pub z: Option<i64>,
    pub properties: Vec<Finding>,
    pub observations: Vec<Finding>,
}

impl TowerReport {
    pub fn violations(&self) -> Vec<&Finding> {
        self.properties.iter().filter(|f| f.failed()).collect()
    }
}

/// Every tower verifier. Lemma checks on individual transitions run only
/// when `with_lemmas` is set.
pub fn analyze(tw: &Tower, with_lemmas: bool) -> TowerReport {
    let fk = fukuda_index(tw);
    let mut props = vec![];
    let nl_ok = tw.transitions.iter().all(|t| {
        let c = t.norm.compose(&t.a, &t.lift);
        let p = t.p();
        c.matrix
            == t.a
                .identity()
                .iter()
                .enumerate()
                .map(|(i, row)| row.iter().map(|x| x * p % p.pow(t.a.orders()[i])).collect::<Vec<u64>>())
                .collect::<Vec<_>>()
    });
    props.push(Finding::check("norm_lift_is_p", nl_ok, "N∘ι = p at every level"));
    props.push(fk.finding.clone());
    let mut transitions = vec![];
    let mut termt_bad = vec![];
    for (i, t) in tw.transitions.iter().enumerate() {
        let f = termt(t);
        if f.failed() {
            termt_bad.push(format!("n={}: {}", i + 1, f.witness));
        }
        let rep = classify(t);
        transitions.push(TransitionSummary {
            from: i as u32 + 1,
            label: rep.label_text(),
            r: rep.r,
            r_prime: rep.r_prime,
            d: rep.d,
        });
        if tw.spec.flat.is_some() {
            props.push(Finding::check(
                &format!("flat.level{}", i + 1),
                rep.label == Label::RegularFlat,
                format!("classified {}", rep.label_text()),
            ));
        }
        if with_lemmas && !tw.degenerate {
            let prev = if i > 0 { Some(&tw.transitions[i - 1]) } else { None };
            let fs = lemmas::dispatch(t, prev);
            props.extend(crate::report::prefixed(&format!("level{}", i + 1), fs));
        }
    }
    props.push(if termt_bad.is_empty() {
        Finding::pass("termt", "r < d ⟹ r' = r on every transition")
    } else {
        Finding::fail("termt", termt_bad.join("; "))
    });
    props.extend(verify_stab_relations(tw));
    let main = verify_main(tw);
    props.extend(main.properties);
    props.extend(conicity_check(tw));
    TowerReport {
        spec: tw.spec.clone(),
        precision: tw.precision,
        degenerate: tw.degenerate,
        non_conic: tw.non_conic(),
        levels: tw
            .levels
            .iter()
            .enumerate()
            .map(|(i, m)| LevelSummary {
                level: i as u32 + 1,
                orders: m.orders().to_vec(),
                rank: m.rank(),
                exp_log: m.exp_log(),
                sexp_log: m.sexp_log(),
                generator_order_log: m.order_log(m.generator.as_deref().unwrap_or(&[])),
            })
            .collect(),
        transitions,
        n0: fk.n0,
        z: fk.n0.map(|n0| order_shift(tw, n0)),
        properties: props,
        observations: main.observations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn t_minus_three_is_cyclic_of_order_p_n() {
        let tw = build_tower(&TowerSpec::poly(3, vec![-3, 1], 4)).unwrap();
        for n in 1..=4 {
            assert_eq!(tw.level(n).orders(), &[n]);
        }
        assert_eq!(fukuda_index(&tw).n0, Some(1));
        let rep = analyze(&tw, true);
        assert!(rep.violations().is_empty(), "{:?}", rep.violations());
        assert_eq!(rep.z, Some(0));
    }

    #[test]
    fn flat_ranks() {
        let tw = build_tower(&TowerSpec::flat(3, 2, 3)).unwrap();
        assert_eq!(tw.ranks(), vec![1, 3, 9]);
        assert!(tw.levels.iter().all(|m| m.exp_log() == 2));
        assert_eq!(fukuda_index(&tw).n0, None);
    }

    #[test]
    fn f_equal_t_is_degenerate() {
        let tw = build_tower(&TowerSpec::poly(3, vec![0, 1], 3)).unwrap();
        assert!(tw.degenerate);
        assert!(tw.levels.iter().all(|m| m.orders() == [tw.precision]));
        assert!(conicity_check(&tw)[2].failed());
    }

    #[test]
    fn eisenstein_quadratic() {
        let tw = build_tower(&TowerSpec::poly(3, vec![-3, 0, 1], 4)).unwrap();
        assert_eq!(fukuda_index(&tw).n0, Some(2));
        assert_eq!(tw.ranks()[1..], [2, 2, 2]);
        assert!(analyze(&tw, true).violations().is_empty());
    }

    #[test]
    fn substitution_oracle() {
        // A_n = Z_3/(ω_n(3)) with ω_n(3) = 4^{3^{n-1}} - 1
        for n in 1..=4u32 {
            let v = int_valuation(3, 4i128.pow(3u32.pow(n - 1)) - 1);
            let tw = build_tower(&TowerSpec::poly(3, vec![-3, 1], n)).unwrap();
            assert_eq!(tw.level(n).orders(), &[v]);
        }
    }
}
