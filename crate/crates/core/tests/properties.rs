use iwasawa_core::cli_io::json::{module_to_json, parse_module};
use iwasawa_core::lambda_ring::{involution, involution_back, is_distinguished, omega, weierstrass_prepare};
use iwasawa_core::linalg::solve;
use iwasawa_core::transition_engine::{termt, verify_axioms};
use iwasawa_core::{build_tower, GammaModule, IwasawaPoly, PrimeConfig, QuotientIdeal, TowerSpec};
use proptest::prelude::*;

fn cfg(p: u64, e: u32) -> PrimeConfig {
    PrimeConfig::new(p, e).unwrap()
}

fn poly(p: u64, e: u32, cs: &[i64]) -> IwasawaPoly {
    IwasawaPoly::from_ints(cfg(p, e), cs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn solve_finds_a_combination(
        gens in prop::collection::vec(prop::collection::vec(0u64..81, 3), 1..4),
        coef in prop::collection::vec(0u64..81, 4),
    ) {
        let ring = cfg(3, 4);
        let q = ring.modulus();
        let target: Vec<u64> = (0..3)
            .map(|j| gens.iter().zip(&coef).fold(0, |acc, (g, c)| (acc + g[j] * c) % q))
            .collect();
        let x = solve(ring, &gens, &target).expect("target is in the span");
        for j in 0..3 {
            let got = gens.iter().zip(&x).fold(0, |acc, (g, c)| (acc + g[j] * c) % q);
            prop_assert_eq!(got, target[j]);
        }
    }

    #[test]
    fn involution_round_trips(cs in prop::collection::vec(-50i64..50, 1..12), n in 1u32..4) {
        let f = poly(3, 6, &cs);
        let w = omega(f.config(), n).unwrap();
        let back = involution_back(&involution(&f, n).unwrap(), n).unwrap();
        prop_assert_eq!(back, f.rem(&w).unwrap());
    }

    #[test]
    fn preparation_is_distinguished_and_certified(cs in prop::collection::vec(-40i64..40, 1..8), n in 1u32..3) {
        let g = poly(3, 8, &cs);
        let ideal = QuotientIdeal::level(g.config(), n).unwrap();
        prop_assume!(!ideal.reduce(&g).is_zero());
        let Ok(pr) = weierstrass_prepare(&g, &ideal) else {
            // positive μ modulo the ideal: nothing to prepare
            return Ok(());
        };
        prop_assert!(pr.is_unit || is_distinguished(&pr.poly));
        prop_assert_eq!(ideal.reduce(&pr.poly.mul(&pr.unit)), ideal.reduce(&g));
    }

    #[test]
    fn module_json_round_trips(e in 1u32..5, n in 1u32..3, gen in prop::collection::vec(-40i64..40, 9)) {
        let c = cfg(3, e);
        let m = GammaModule::ring_quotient(&omega(c, n).unwrap(), n).unwrap();
        let m = m.clone().with_generator(m.from_ints(&gen[..m.rank()]));
        let again = parse_module(&module_to_json(&m).unwrap()).unwrap();
        prop_assert_eq!(again.orders(), m.orders());
        prop_assert_eq!(again.tau(), m.tau());
        prop_assert_eq!(again.level(), m.level());
        prop_assert_eq!(again.generator, m.generator);
    }

    #[test]
    fn towers_satisfy_axioms_and_termt(lower in prop::collection::vec(-3i64..3, 1..4)) {
        let mut f: Vec<i64> = lower.iter().map(|c| c * 3).collect();
        f.push(1);
        let Ok(tw) = build_tower(&TowerSpec::poly(3, f, 3)) else {
            return Ok(());
        };
        prop_assume!(!tw.degenerate);
        for t in &tw.transitions {
            for a in verify_axioms(t) {
                prop_assert!(!a.failed(), "{}: {}", a.name, a.witness);
            }
            let k = termt(t);
            prop_assert!(!k.failed(), "{}", k.witness);
        }
    }
}

