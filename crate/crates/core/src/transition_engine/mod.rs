//! Conic transitions `A → B` with norm `N: B → A` and lift `ι: A → B`.

pub mod lemmas;

use crate::arith::binomial;
use crate::error::{Error, Result};
use crate::lambda_ring::IwasawaPoly;
use crate::pgroup_module::annihilator::{default_degree_bound, order_profile_len, RelationLattice};
use crate::pgroup_module::{hom::quotient, is_cyclic_lambda, is_straight, socle, Elem, GammaModule, Hom, Submodule};
use crate::report::{Finding, Status};
use serde::Serialize;

#[derive(Clone, Debug)]
pub struct Transition {
    pub a: GammaModule,
    pub b: GammaModule,
    /// `N: B → A`.
    pub norm: Hom,
    /// `ι: A → B`.
    pub lift: Hom,
    pub omega: IwasawaPoly,
}

impl Transition {
    pub fn new(
        a: GammaModule,
        b: GammaModule,
        norm: Vec<Vec<u64>>,
        lift: Vec<Vec<u64>>,
        omega: IwasawaPoly,
    ) -> Result<Self> {
        if a.p() != b.p() {
            return Err(Error::InvalidHom("A and B have different primes".into()));
        }
        let norm = Hom::new(&b, &a, norm)?;
        let lift = Hom::new(&a, &b, lift)?;
        Ok(Transition { a, b, norm, lift, omega })
    }

    /// The transition with `N b = a` and `ι(a) = ia`, both extended
    /// `Λ`-linearly from cyclic generators.
    pub fn from_generators(
        a_mod: GammaModule,
        b_mod: GammaModule,
        a: &[u64],
        b: &[u64],
        ia: &[u64],
        omega: IwasawaPoly,
    ) -> Result<Self> {
        let norm = lambda_extension(&b_mod, &a_mod, b, a, "N b = a")?;
        let lift = lambda_extension(&a_mod, &b_mod, a, ia, "ι(a)")?;
        let mut a_mod = a_mod;
        let mut b_mod = b_mod;
        a_mod.generator = Some(a_mod.reduce(a));
        b_mod.generator = Some(b_mod.reduce(b));
        Ok(Transition { a: a_mod, b: b_mod, norm, lift, omega })
    }

    pub fn p(&self) -> u64 {
        self.a.p()
    }

    pub fn r(&self) -> usize {
        self.a.rank()
    }

    pub fn r_prime(&self) -> usize {
        self.b.rank()
    }

    pub fn d(&self) -> usize {
        self.omega.degree().unwrap_or(0)
    }

    /// `ν = ((ω+1)^p - 1)/ω = Σ_{i=1}^{p} C(p,i) ω^{i-1}`.
    pub fn nu(&self) -> IwasawaPoly {
        let cfg = self.omega.config();
        let mut acc = IwasawaPoly::zero(cfg);
        let mut pw = IwasawaPoly::one(cfg);
        for i in 1..=self.p() {
            let c = (binomial(self.p(), i) % cfg.modulus() as u128) as u64;
            acc = acc.add(&pw.scale(c));
            pw = pw.mul(&self.omega);
        }
        acc
    }

    /// `K = ker N`.
    pub fn kernel(&self) -> Submodule {
        self.norm.kernel(&self.b, &self.a)
    }

    /// `ι(A)`.
    pub fn lift_image(&self) -> Submodule {
        self.lift.image(&self.a, &self.b)
    }

    /// `ω B`.
    pub fn omega_b(&self) -> Submodule {
        self.b.poly_image(&self.omega)
    }

    /// Designated generators `a ∈ A` and `b ∈ B` with `N b = a` when possible.
    pub fn generators(&self) -> Result<(Elem, Elem)> {
        let a = match &self.a.generator {
            Some(g) => g.clone(),
            None => is_cyclic_lambda(&self.a)
                .generator
                .ok_or_else(|| Error::Precondition("A is not Λ-cyclic".into()))?,
        };
        let b = match &self.b.generator {
            Some(g) => g.clone(),
            None => {
                let gens: Vec<Vec<u64>> =
                    (0..self.b.rank()).map(|j| self.a.embed(&self.norm.apply(&self.a, &self.b.basis(j)))).collect();
                let lifted = crate::linalg::solve(self.a.ring(), &gens, &self.a.embed(&a))
                    .map(|c| self.b.reduce(&c));
                match lifted {
                    Some(x) if self.b.lambda_span(&[x.clone()]).log_order() == self.b.log_order() => x,
                    _ => is_cyclic_lambda(&self.b)
                        .generator
                        .ok_or_else(|| Error::Precondition("B is not Λ-cyclic".into()))?,
                }
            }
        };
        Ok((a, b))
    }
}

/// The `Λ`-map sending the generator `x` of `src` to `y`; fails when some
/// relation of `x` does not kill `y`.
fn lambda_extension(src: &GammaModule, dst: &GammaModule, x: &[u64], y: &[u64], what: &str) -> Result<Hom> {
    let lat = RelationLattice::new(src, x, default_degree_bound(src));
    let ex = src.p().pow(src.exp_log());
    if !dst.is_zero(&dst.scale(ex, y)) {
        return Err(Error::Inconsistent(format!("{what}: the image has larger order than the generator")));
    }
    for g in lat.generators(src) {
        if !dst.is_zero(&dst.act(&g.with_config(dst.config()), y)) {
            return Err(Error::Inconsistent(format!("{what}: {g} kills the generator but not its image")));
        }
    }
    let mut imgs = vec![];
    for j in 0..src.rank() {
        let c = crate::pgroup_module::annihilator::express_as_multiple(src, x, &src.basis(j))
            .ok_or_else(|| Error::Precondition("generator does not span the module".into()))?;
        imgs.push(dst.act(&c.with_config(dst.config()), y));
    }
    Hom::from_images(src, dst, &imgs)
}

/// Axioms of a conic transition, each reported separately.
pub fn verify_axioms(t: &Transition) -> Vec<Finding> {
    let (a, b) = (&t.a, &t.b);
    let p = t.p();
    let mut out = vec![];

    let img = t.norm.image(b, a);
    out.push(Finding::check(
        "norm_surjective",
        img.log_order() == a.log_order(),
        format!("|N(B)| = p^{}, |A| = p^{}", img.log_order(), a.log_order()),
    ));
    let ker_i = t.lift.kernel(a, b);
    out.push(Finding::check("lift_injective", ker_i.is_zero(), format!("|ker ι| = p^{}", ker_i.log_order())));
    let ni = t.norm.compose(a, &t.lift);
    let p_id: Vec<Vec<u64>> = a
        .identity()
        .into_iter()
        .enumerate()
        .map(|(i, row)| row.into_iter().map(|x| x * p % p.pow(a.orders()[i])).collect())
        .collect();
    out.push(Finding::check("norm_lift_is_p", ni.matrix == p_id, "N∘ι compared with p·id_A"));
    out.push(Finding::check("norm_equivariant", t.norm.is_equivariant(b, a), "Nτ = τN"));
    out.push(Finding::check("lift_equivariant", t.lift.is_equivariant(a, b), "ιτ = τι"));

    let ac = is_cyclic_lambda(a);
    let bc = is_cyclic_lambda(b);
    out.push(Finding::check("a_cyclic", ac.cyclic, format!("dim A/(p,T)A = {}", ac.roof_corank)));
    out.push(Finding::check("b_cyclic", bc.cyclic, format!("dim B/(p,T)B = {}", bc.roof_corank)));

    let cfg = t.omega.config();
    let d = t.d();
    let shape = d >= 1
        && t.omega.coeff(0) == 0
        && (0..d).all(|i| t.omega.coeff(i) % p == 0)
        && cfg.is_unit(t.omega.coeff(d))
        && t.omega.coeff(d) % p == 1;
    out.push(Finding::check("omega_shape", shape, format!("ω = {}", t.omega)));
    let wa = a.poly_matrix(&t.omega);
    out.push(Finding::check("omega_kills_a", wa.iter().flatten().all(|&x| x == 0), "ω A = 0"));
    let nw = t.nu().mul(&t.omega);
    let nwb = b.poly_matrix(&nw);
    out.push(Finding::check("nu_omega_kills_b", nwb.iter().flatten().all(|&x| x == 0), "ν ω B = 0"));
    let in_ = t.lift.compose(b, &t.norm);
    out.push(Finding::check("lift_norm_is_nu", in_.matrix == b.poly_matrix(&t.nu()), "ι∘N compared with ν(T)"));
    out.push(Finding::check(
        "precision_guard",
        cfg.precision > 2 * b.exp_log(),
        format!("p^{} against exp(B)^2 = p^{}", cfg.precision, 2 * b.exp_log()),
    ));

    let k = t.kernel();
    let wb = t.omega_b();
    let k_eq = k.same_as(&wb);
    out.push(Finding::check(
        "kernel_is_omega_b",
        k_eq,
        format!("|K| = p^{}, |ωB| = p^{}, ωB ⊆ K: {}", k.log_order(), wb.log_order(), wb.is_subset_of(&k)),
    ));
    let tors = b.poly_kernel(&t.omega);
    let li = t.lift_image();
    out.push(Finding::check(
        "omega_torsion_in_lift",
        tors.is_subset_of(&li),
        format!("|B[ω]| = p^{}, |ι(A)| = p^{}", tors.log_order(), li.log_order()),
    ));

    match t.generators() {
        Ok((ga, _)) => {
            let orbit: Vec<Elem> = (0..a.rank()).map(|i| a.apply_t_pow(&ga, i)).collect();
            let span = a.span(&orbit);
            out.push(Finding::check(
                "a_z_basis",
                span.log_order() == a.log_order(),
                format!("|Σ Z_p T^i a| = p^{} of p^{}", span.log_order(), a.log_order()),
            ));
        }
        Err(e) => out.push(Finding::fail("a_z_basis", e.to_string())),
    }
    out
}

/// `K = ωB = a^⊤ B`, `ι(S(A)) ⊆ S(K)` and `K ∩ ι(A) = ι(S(A))`.
pub fn check_exactk(t: &Transition) -> Result<Vec<Finding>> {
    let (ga, _) = t.generators()?;
    let (a, b) = (&t.a, &t.b);
    let k = t.kernel();
    let wb = t.omega_b();
    let lat = RelationLattice::new(a, &ga, default_degree_bound(a));
    // the lattice lives over Z/exp(A), so exp(A)·B belongs to a^⊤B as well
    let ea = t.p().pow(a.exp_log());
    let mut gens: Vec<Elem> = (0..b.rank()).map(|j| b.scale(ea, &b.basis(j))).collect();
    for g in lat.generators(a) {
        let g = g.with_config(b.config());
        for j in 0..b.rank() {
            gens.push(b.act(&g, &b.basis(j)));
        }
    }
    let atb = b.span(&gens);
    let sa = a.torsion_submodule(1);
    let isa: Vec<Elem> = sa.generators(a).iter().map(|x| t.lift.apply(b, x)).collect();
    let isa = b.span(&isa);
    let sk = k.intersect(b, &b.torsion_submodule(1));
    let k_cap = k.intersect(b, &t.lift_image());
    Ok(vec![
        Finding::check("exactk.kernel_is_omega_b", k.same_as(&wb), format!("|K| = p^{}, |ωB| = p^{}", k.log_order(), wb.log_order())),
        Finding::check("exactk.kernel_is_annihilator_b", k.same_as(&atb), format!("|a^⊤B| = p^{}", atb.log_order())),
        Finding::check("sockern.lift_socle_in_socle_kernel", isa.is_subset_of(&sk), format!("|ι(S(A))| = p^{}", isa.log_order())),
        Finding::check("sockern.kernel_meets_lift", k_cap.same_as(&isa), format!("|K ∩ ι(A)| = p^{}", k_cap.log_order())),
    ])
}

#[derive(Clone, Debug)]
pub struct TransitionModule {
    pub module: GammaModule,
    pub findings: Vec<Finding>,
}

/// `𝒯 = B/ι(A)` with the bounds on rank and exponent.
pub fn transition_module(t: &Transition) -> Result<TransitionModule> {
    let li = t.b.lambda_span(&t.lift_image().generators(&t.b));
    let q = quotient(&t.b, &li)?;
    let tm = q.module;
    let p = t.p();
    let (r, rp, d) = (t.r(), t.r_prime(), t.d());
    let nu_kills = tm.poly_matrix(&t.nu().with_config(tm.config())).iter().flatten().all(|&x| x == 0);
    let mut f = vec![
        Finding::check("transmod.cyclic", is_cyclic_lambda(&tm).cyclic, format!("𝒯 has orders {:?}", tm.orders())),
        Finding::check("transmod.nu_kills", nu_kills, "ν 𝒯 = 0"),
        Finding::check("transmod.rank_bound", rp <= r + (p as usize - 1) * d, format!("r' = {rp} ≤ r + (p-1)d = {}", r + (p as usize - 1) * d)),
        Finding::check("transmod.exp_bound", t.b.exp_log() <= t.a.exp_log() + 1, format!("exp(B) = p^{}, p·exp(A) = p^{}", t.b.exp_log(), t.a.exp_log() + 1)),
    ];
    if let Ok((_, b)) = t.generators() {
        let prof = order_profile_len(&t.b, &b, None, rp);
        f.push(Finding::new(
            "transmod.ell_witness",
            if rp > r { if prof.ell_witness { Status::Pass } else { Status::Fail } } else { Status::Inapplicable },
            format!("ℓ(B) = {}, orbit orders {:?}", prof.ell, prof.q_list),
        ));
    }
    Ok(TransitionModule { module: tm, findings: f })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Label {
    Stable,
    Terminal,
    RegularFlat,
    RegularWild,
    NonRegularGrowth,
}

impl Label {
    pub fn as_str(&self) -> &'static str {
        match self {
            Label::Stable => "stable",
            Label::Terminal => "terminal",
            Label::RegularFlat => "regular-flat",
            Label::RegularWild => "regular-wild",
            Label::NonRegularGrowth => "non-regular-growth",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SocleShape {
    Straight,
    Folded,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub r: usize,
    pub r_prime: usize,
    pub d: usize,
    pub exp_a: u64,
    pub exp_b: u64,
    pub sexp_b: u64,
    pub label: Label,
    pub initial: bool,
    pub socle_shape: SocleShape,
    pub axiom_violations: Vec<String>,
    pub termt: Finding,
}

impl ClassificationReport {
    /// `"regular-wild, initial"` style text.
    pub fn label_text(&self) -> String {
        if self.initial {
            format!("{}, initial", self.label.as_str())
        } else {
            self.label.as_str().to_string()
        }
    }

    pub fn regular(&self) -> bool {
        matches!(self.label, Label::RegularFlat | Label::RegularWild)
    }
}

pub fn label_for(p: u64, r: usize, rp: usize, d: usize, exp_b: u32, sexp_b: u32) -> Label {
    let pd = p as usize * d;
    if r == rp {
        Label::Stable
    } else if rp < pd {
        Label::Terminal
    } else if rp == pd {
        if sexp_b == exp_b {
            Label::RegularFlat
        } else {
            Label::RegularWild
        }
    } else {
        Label::NonRegularGrowth
    }
}

/// `r < d ⟹ r' = r`.
pub fn termt(t: &Transition) -> Finding {
    let (r, rp, d) = (t.r(), t.r_prime(), t.d());
    if r < d {
        Finding::check("termt", rp == r, format!("r = {r} < d = {d}, r' = {rp}"))
    } else {
        Finding::inapplicable("termt", format!("r = {r} ≥ d = {d}"))
    }
}

pub fn classify(t: &Transition) -> ClassificationReport {
    let (r, rp, d) = (t.r(), t.r_prime(), t.d());
    let p = t.p();
    let axiom_violations: Vec<String> =
        verify_axioms(t).into_iter().filter(|f| f.failed()).map(|f| f.name).collect();
    let label = label_for(p, r, rp, d, t.b.exp_log(), t.b.sexp_log());
    let straight = t.generators().map(|(_, b)| is_straight(&t.b, &b)).unwrap_or(false)
        && socle(&t.b).structure().cyclic;
    ClassificationReport {
        r,
        r_prime: rp,
        d,
        exp_a: p.pow(t.a.exp_log()),
        exp_b: p.pow(t.b.exp_log()),
        sexp_b: p.pow(t.b.sexp_log()),
        label,
        initial: r == 1 && d == 1,
        socle_shape: if straight { SocleShape::Straight } else { SocleShape::Folded },
        axiom_violations,
        termt: termt(t),
    }
}

/// Every transition-level check in dispatch order.
pub fn full_report(t: &Transition, prev: Option<&Transition>) -> (ClassificationReport, Vec<Finding>) {
    let rep = classify(t);
    let mut f = verify_axioms(t);
    f.push(rep.termt.clone());
    f.extend(lemmas::dispatch(t, prev));
    (rep, f)
}
