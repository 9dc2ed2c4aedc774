//! Structural checks for growth and stable transitions.

use super::{classify, Label, Transition};
use crate::error::{Error, Result};
use crate::lambda_ring::IwasawaPoly;
use crate::linalg::solve;
use crate::pgroup_module::annihilator::{find_binomial_annihilator, minimal_annihilator, order_profile, order_profile_len};
use crate::pgroup_module::{binomial_shape, express_as_unit_multiple, is_straight, socle, Elem, GammaModule, Submodule};
use crate::report::Finding;
use serde::Serialize;

fn growth(t: &Transition) -> bool {
    t.r_prime() > t.r()
}

fn all_inapplicable(names: &[&str], why: &str) -> Vec<Finding> {
    names.iter().map(|n| Finding::inapplicable(n, why)).collect()
}

/// `ord(x) = p ord(N x)` on orbit elements, and on all of `B` when small.
pub fn check_stable(t: &Transition) -> Result<Vec<Finding>> {
    if t.r() != t.r_prime() {
        return Err(Error::Precondition(format!("not stable: r = {}, r' = {}", t.r(), t.r_prime())));
    }
    let b = &t.b;
    let pb = b.p_power_submodule(1);
    let li = t.lift_image();
    let mut xs: Vec<Elem> = vec![];
    let exhaustive = (b.log_order() as f64) * (b.p() as f64).ln() <= 1e5f64.ln();
    if exhaustive {
        xs = b.elements();
    } else if let Ok((_, g)) = t.generators() {
        xs = (0..b.rank()).map(|i| b.apply_t_pow(&g, i)).collect();
        xs.extend((0..b.rank()).map(|i| b.basis(i)));
    }
    let bad = xs.iter().find(|x| {
        !b.is_zero(x) && b.order(x) != t.p() * t.a.order(&t.norm.apply(&t.a, x))
    });
    Ok(vec![
        Finding::check("stable.lift_image_is_pb", li.same_as(&pb), format!("|ι(A)| = p^{}, |pB| = p^{}", li.log_order(), pb.log_order())),
        Finding::check(
            "stable.order_scaling",
            bad.is_none(),
            match bad {
                Some(x) => format!("ord({x:?}) ≠ p·ord(N x)"),
                None => format!("{} elements checked{}", xs.len(), if exhaustive { " (all of B)" } else { "" }),
            },
        ),
    ])
}

/// `|ι(A) ∩ p^k B| = |p^k ι(A)|` for every `k`, i.e. `ι(A)` is a pure
/// subgroup and hence a `Z_p`-direct summand.
pub fn is_pure(b: &GammaModule, w: &Submodule) -> bool {
    let gens = w.generators(b);
    (1..=b.exp_log()).all(|k| {
        let pk = b.p().pow(k);
        let lhs = w.intersect(b, &b.p_power_submodule(k)).log_order();
        let scaled: Vec<Elem> = gens.iter().map(|g| b.scale(pk, g)).collect();
        lhs == b.span(&scaled).log_order()
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LregConditions {
    pub split: bool,
    pub no_jumps: bool,
    pub straight: bool,
    pub flat: bool,
    /// `Σ_{i < r'-r} Z_p T^i b` is a complement of `ι(A)`.
    pub orbit_complement: bool,
}

impl LregConditions {
    pub fn agree(&self) -> bool {
        self.split == self.no_jumps && self.no_jumps == self.straight && self.straight == self.flat
    }

    pub fn all(&self) -> bool {
        self.split && self.no_jumps && self.straight && self.flat
    }
}

pub fn lreg_conditions(t: &Transition) -> Result<LregConditions> {
    let (_, g) = t.generators()?;
    let b = &t.b;
    let li = t.lift_image();
    let (r, rp) = (t.r(), t.r_prime());
    let prof = order_profile_len(b, &g, None, rp);
    let orbit: Vec<Elem> = (0..rp.saturating_sub(r)).map(|i| b.apply_t_pow(&g, i)).collect();
    let c = b.span(&orbit);
    Ok(LregConditions {
        split: is_pure(b, &li),
        no_jumps: prof.jumps.is_empty(),
        straight: is_straight(b, &g),
        flat: b.sexp_log() == b.exp_log(),
        orbit_complement: c.intersect(b, &li).is_zero() && c.log_order() + li.log_order() == b.log_order(),
    })
}

/// The four regularity conditions agree, and force `exp(B) = exp(A)`.
pub fn check_flat_equivalence(t: &Transition) -> Vec<Finding> {
    let names = ["lreg.agree", "lreg.exp_equal"];
    if !growth(t) {
        return all_inapplicable(&names, "requires r < r'");
    }
    let c = match lreg_conditions(t) {
        Ok(c) => c,
        Err(e) => return all_inapplicable(&names, &e.to_string()),
    };
    let w = format!(
        "split={} no_jumps={} straight={} flat={} orbit_complement={}",
        c.split, c.no_jumps, c.straight, c.flat, c.orbit_complement
    );
    let exp = if c.all() {
        Finding::check(
            "lreg.exp_equal",
            t.a.exp_log() == t.b.exp_log(),
            format!("exp(A) = p^{}, exp(B) = p^{}", t.a.exp_log(), t.b.exp_log()),
        )
    } else {
        Finding::inapplicable("lreg.exp_equal", "conditions do not hold")
    };
    vec![Finding::check("lreg.agree", c.agree(), w), exp]
}

/// Largest `e` with `x ∈ p^e B` and some `c` with `p^e c = x`.
fn maximal_root(b: &GammaModule, x: &[u64]) -> (u32, Elem) {
    let mut best = (0, b.reduce(x));
    for e in 1..=b.exp_log() {
        let pe = b.p().pow(e);
        let gens: Vec<Vec<u64>> = (0..b.rank()).map(|j| b.embed(&b.scale(pe, &b.basis(j)))).collect();
        match solve(b.ring(), &gens, &b.embed(x)) {
            Some(c) => best = (e, b.reduce(&c)),
            _ => break,
        }
    }
    best
}

pub fn check_hasroot(t: &Transition) -> Vec<Finding> {
    let names = [
        "hasroot.contains_lift",
        "hasroot.lift_is_pc",
        "hasroot.kernel_is_socle",
        "hasroot.rank_bound",
        "hasroot.terminal",
    ];
    let Ok((a, _)) = t.generators() else {
        return all_inapplicable(&names, "no generator");
    };
    let ia = t.lift.apply(&t.b, &a);
    let pb = t.b.p_power_submodule(1);
    if !(t.a.order(&a) > t.p() && growth(t) && pb.contains(&t.b, &ia)) {
        return all_inapplicable(&names, "requires ord(a) > p, r < r' and ι(a) ∈ pB");
    }
    let b = &t.b;
    let (e, c) = maximal_root(b, &ia);
    let (r, rp, d) = (t.r(), t.r_prime(), t.d());
    let p = t.p() as usize;
    let cs = b.span(&(0..r).map(|i| b.apply_t_pow(&c, i)).collect::<Vec<_>>());
    let li = t.lift_image();
    let pc = b.span(&cs.generators(b).iter().map(|g| b.scale(t.p(), g)).collect::<Vec<_>>());
    let k = t.kernel();
    let sb = b.torsion_submodule(1);
    let w = format!("p^{e} c = ι(a), c = {c:?}");
    vec![
        Finding::check(names[0], li.is_subset_of(&cs), w.clone()),
        Finding::check(names[1], li.same_as(&pc), w),
        Finding::check(names[2], k.same_as(&sb), format!("|K| = p^{}, |S(B)| = p^{}", k.log_order(), sb.log_order())),
        Finding::check(names[3], rp <= (p - 1) * d, format!("r' = {rp}, (p-1)d = {}", (p - 1) * d)),
        Finding::check(names[4], rp < p * d, format!("r' = {rp}, pd = {}", p * d)),
    ]
}

/// `prev: X → A` wild and `next: A → B`.
pub fn check_wild(prev: &Transition, next: &Transition) -> Vec<Finding> {
    let names = [
        "wild.socle_not_in_kernel",
        "wild.socle_generator_lifts",
        "wild.ell_is_two",
        "wild.rank_bound",
        "wild.terminal",
        "wild.binomial",
    ];
    let rep = classify(prev);
    if rep.label != Label::RegularWild || prev.a.p_power_submodule(0).p_rank(&prev.a) != 1 {
        return all_inapplicable(&names, "previous transition is not wild with rank-one base");
    }
    if prev.b.orders() != next.a.orders() || prev.b.tau() != next.a.tau() {
        return all_inapplicable(&names, "transitions do not compose");
    }
    let (x, a) = (&prev.a, &prev.b);
    let ka = prev.kernel();
    let sa = a.torsion_submodule(1);
    let not_in = !sa.is_subset_of(&ka);

    // some ι(x') with ord(x') = p^2 differs from a generator of S(A) by an element of K(A)
    let tsa = a.span(&sa.generators(a).iter().map(|s| a.apply_t(s)).collect::<Vec<_>>());
    let k_cap_s = ka.intersect(a, &sa);
    let kgens = ka.generators(a);
    let mut lifts_ok = None;
    for xp in x.elements() {
        if x.order(&xp) != x.p() * x.p() {
            continue;
        }
        let ix = prev.lift.apply(a, &xp);
        let pk: Vec<Vec<u64>> = kgens.iter().map(|g| a.embed(&a.scale(a.p(), g))).collect();
        let target = a.embed(&a.neg(&a.scale(a.p(), &ix)));
        let Some(coef) = solve(a.ring(), &pk, &target) else { continue };
        let mut y = a.zero_elem();
        for (c, g) in coef.iter().zip(&kgens) {
            y = a.add(&y, &a.scale(*c, g));
        }
        let v0 = a.add(&ix, &y);
        if !(tsa.contains(a, &v0) && k_cap_s.is_subset_of(&tsa)) {
            lifts_ok = Some(xp);
            break;
        }
    }
    let ga = match next.generators() {
        Ok((g, _)) => g,
        Err(e) => return all_inapplicable(&names, &e.to_string()),
    };
    let ell = order_profile(a, &ga, None).ell;

    let mut out = vec![
        Finding::check(names[0], not_in, format!("|S(A) ∩ K(A)| = p^{}", k_cap_s.log_order())),
        Finding::check(names[1], lifts_ok.is_some(), format!("x' = {lifts_ok:?}")),
        Finding::check(names[2], ell == 2, format!("ℓ(A) = {ell}")),
    ];
    let (rp, d, p) = (next.r_prime(), next.d(), next.p() as usize);
    if !growth(next) {
        out.extend(all_inapplicable(&names[3..], "next transition is stable"));
        return out;
    }
    out.push(Finding::check(names[3], rp <= (p - 1) * d, format!("r' = {rp}, (p-1)d = {}", (p - 1) * d)));
    out.push(Finding::check(names[4], rp < p * d, format!("r' = {rp}, pd = {}", p * d)));
    out.push(binomial_finding(
        names[5],
        next,
        &IwasawaPoly::monomial(next.b.config(), 1, rp),
        next.p().pow(next.a.exp_log()) / next.p(),
    ));
    out
}

fn binomial_finding(name: &str, t: &Transition, head: &IwasawaPoly, c: u64) -> Finding {
    let Ok((_, b)) = t.generators() else {
        return Finding::inapplicable(name, "no generator");
    };
    let found = find_binomial_annihilator(&t.b, &b, head, c);
    let pattern = minimal_annihilator(&t.b, &b).map(|f| binomial_shape(&f, c)).unwrap_or(false);
    match found {
        Some(f) => Finding::pass(name, format!("{f} kills b; minimal annihilator pattern: {pattern}")),
        None => Finding::fail(name, format!("no {head} - {c}·w(T) kills b; pattern: {pattern}")),
    }
}

/// Flat `A` with `r ≥ p` growing to `B`: binomial `ω T^{r'-d} - q w(T)`.
pub fn check_finflat(t: &Transition) -> Vec<Finding> {
    let names = ["finflat.terminal", "finflat.binomial"];
    let (r, rp, d, p) = (t.r(), t.r_prime(), t.d(), t.p() as usize);
    if !(growth(t) && t.a.sexp_log() == t.a.exp_log() && r >= p && t.b.exp_log() > t.a.exp_log()) {
        return all_inapplicable(&names, "requires flat A, r ≥ p and exp(B) > exp(A)");
    }
    let mut out = vec![Finding::check(names[0], d < rp && rp < p * d, format!("d = {d}, r' = {rp}, pd = {}", p * d))];
    if rp < d {
        out.push(Finding::fail(names[1], "r' < d"));
    } else {
        let cfg = t.b.config();
        let head = t.omega.with_config(cfg).mul(&IwasawaPoly::monomial(cfg, 1, rp - d));
        out.push(binomial_finding(names[1], t, &head, t.p().pow(t.a.exp_log())));
    }
    out
}

/// Initial growth: `b` is killed by `T^{r'} - q w(T)`, `q = ord(a)`.
pub fn check_initrans(t: &Transition) -> Vec<Finding> {
    let names = ["initrans.binomial"];
    let (r, rp, d, p) = (t.r(), t.r_prime(), t.d(), t.p() as usize);
    if !(growth(t) && r == 1 && rp < p * d && rp < p) {
        return all_inapplicable(&names, "requires r = 1 < r' < min(p, pd)");
    }
    let Ok((a, _)) = t.generators() else {
        return all_inapplicable(&names, "no generator");
    };
    let q = t.a.order(&a);
    vec![binomial_finding(names[0], t, &IwasawaPoly::monomial(t.b.config(), 1, rp), q)]
}

/// `exp(A) = p`, `r = d < r' < pd`: `S(B) = S(K)` when `r' ≤ (p-1)d`,
/// otherwise `S(B)` is generated by a unit multiple of `T^{pd-r'} b`.
pub fn check_sk(t: &Transition) -> Vec<Finding> {
    let names = ["sk.socle_in_kernel", "sk.socle_generator"];
    let (r, rp, d, p) = (t.r(), t.r_prime(), t.d(), t.p() as usize);
    if !(t.a.exp_log() == 1 && r == d && r < rp && rp < p * d) {
        return all_inapplicable(&names, "requires exp(A) = p and r = d < r' < pd");
    }
    let b = &t.b;
    let k = t.kernel();
    let sb = b.torsion_submodule(1);
    let inside = sb.is_subset_of(&k);
    let w = format!("|S(B)| = p^{}, |S(B) ∩ K| = p^{}", sb.log_order(), sb.intersect(b, &k).log_order());
    if rp <= (p - 1) * d {
        return vec![
            Finding::check(names[0], inside, w),
            Finding::inapplicable(names[1], "r' ≤ (p-1)d"),
        ];
    }
    let Ok((_, g)) = t.generators() else {
        return vec![Finding::check(names[0], !inside, w), Finding::inapplicable(names[1], "no generator")];
    };
    let st = socle(b).structure();
    let ok = st.cyclic
        && st.generators.first().is_some_and(|s| express_as_unit_multiple(b, &b.apply_t_pow(&g, p * d - rp), s).is_some());
    vec![
        Finding::check(names[0], !inside, format!("{w}; S(B) ⊄ K expected for r' > (p-1)d")),
        Finding::check(names[1], ok, format!("S(B) generated by a unit multiple of T^{}b", p * d - rp)),
    ]
}

/// Cyclic socle propagates: `S(A)` cyclic ⟹ `S(B)` cyclic.
pub fn check_cycsoc(t: &Transition) -> Finding {
    let sa = socle(&t.a).structure().cyclic;
    if !sa {
        return Finding::inapplicable("cycsoc", "S(A) is not cyclic");
    }
    let sb = socle(&t.b).structure();
    Finding::check("cycsoc", sb.cyclic, format!("S(B) Jordan blocks {:?}", sb.blocks))
}

/// Two consecutive transitions are never both wild.
pub fn check_no_consecutive_wild(prev: &Transition, next: &Transition) -> Finding {
    let (a, b) = (classify(prev).label, classify(next).label);
    if a != Label::RegularWild {
        return Finding::inapplicable("no_consecutive_wild", "previous transition is not wild");
    }
    Finding::check("no_consecutive_wild", b != Label::RegularWild, format!("labels {} then {}", a.as_str(), b.as_str()))
}

/// Lemma checks in dispatch order: `termt` is reported by the caller, then
/// flat equivalence, wild, finflat, initrans/sk, hasroot.
pub fn dispatch(t: &Transition, prev: Option<&Transition>) -> Vec<Finding> {
    let mut out = vec![];
    if let Ok(f) = super::check_exactk(t) {
        out.extend(f);
    }
    if let Ok(tm) = super::transition_module(t) {
        out.extend(tm.findings);
    }
    out.push(check_cycsoc(t));
    if !growth(t) {
        match check_stable(t) {
            Ok(f) => out.extend(f),
            Err(e) => out.push(Finding::fail("stable", e.to_string())),
        }
        return out;
    }
    out.extend(check_flat_equivalence(t));
    if let Some(prev) = prev {
        out.extend(check_wild(prev, t));
        out.push(check_no_consecutive_wild(prev, t));
    }
    out.extend(check_finflat(t));
    out.extend(check_initrans(t));
    out.extend(check_sk(t));
    out.extend(check_hasroot(t));
    out
}
