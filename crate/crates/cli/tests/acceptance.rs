//! Acceptance criteria, one line each.
//!
//! Criterion 2 is known to fail: the printed orbit table of the third
//! worked example admits no τ-matrix (see `KNOWN_RED`). The run fails if any
//! criterion's outcome differs from the expectation, in either direction.

use iwasawa_core::cli_io::fixtures::{load_fixture, run_fixture, FixtureReport};
use iwasawa_core::cli_io::suites::{flat_termt, involution_round_trips, order_reversal_checks, ring_identities, weierstrass_samples};
use iwasawa_core::tower_sim::corpus::{corpus_run, CorpusConfig, CorpusReport};
use iwasawa_core::tower_sim::{build_tower, TowerSpec};
use iwasawa_core::transition_engine::lemmas::lreg_conditions;
use iwasawa_core::transition_engine::{classify, Label};
use iwasawa_core::Finding;
use std::process::Command;
use std::time::{Duration, Instant};

const KNOWN_RED: &[u32] = &[2];

struct Outcome {
    pass: bool,
    detail: String,
}

fn from_findings(fs: &[Finding]) -> Outcome {
    let bad: Vec<String> = fs.iter().filter(|f| f.failed()).map(|f| format!("{}: {}", f.name, f.witness)).collect();
    Outcome {
        pass: bad.is_empty(),
        detail: if bad.is_empty() { format!("{} checks", fs.len()) } else { bad.join("; ") },
    }
}

fn fixture(name: &str) -> FixtureReport {
    run_fixture(&load_fixture(name).expect("fixture loads")).expect("fixture runs")
}

fn find<'a>(r: &'a FixtureReport, name: &str) -> &'a Finding {
    r.checks.iter().find(|f| f.name == name).unwrap_or_else(|| panic!("{name} missing"))
}

fn c1() -> Outcome {
    let mut fs = ring_identities(12).unwrap();
    fs.extend(involution_round_trips(12, 100, 42).unwrap());
    from_findings(&fs)
}

fn c2() -> Outcome {
    from_findings(&fixture("e3").checks)
}

fn c3() -> Outcome {
    let e1 = fixture("e1");
    let e2 = fixture("e2");
    let rt = fixture("rthaine");
    let e2_label = find(&e2, "e2.labels");
    let wild = e2_label.witness.contains("wild");
    let fs = vec![
        find(&e1, "e1.labels").clone(),
        find(&e1, "e1.binomial").clone(),
        Finding::check("e2.wild", wild, e2_label.witness.clone()),
        find(&rt, "rthaine.cyclic").clone(),
    ];
    from_findings(&fs)
}

fn corpus() -> &'static CorpusReport {
    use std::sync::OnceLock;
    static R: OnceLock<CorpusReport> = OnceLock::new();
    R.get_or_init(|| {
        let mut c = CorpusConfig::new(3, 50, 4, 42);
        c.horizon = 5;
        corpus_run(&c).expect("corpus runs")
    })
}

fn zero(prefixes: &[&str]) -> Outcome {
    let r = corpus();
    let counts: Vec<String> = prefixes.iter().map(|p| format!("{p}: {}", r.violations_of(p))).collect();
    Outcome {
        pass: prefixes.iter().all(|p| r.violations_of(p) == 0),
        detail: format!("{} towers, violations {}", r.towers.len(), counts.join(", ")),
    }
}

fn c5() -> Outcome {
    let mut o = zero(&["termt"]);
    let flat = from_findings(&flat_termt(3, 4).unwrap());
    o.pass &= flat.pass;
    o.detail = format!("{}; flat towers: {}", o.detail, flat.detail);
    o
}

fn c8() -> Outcome {
    let tw = build_tower(&TowerSpec::flat(3, 2, 4)).unwrap();
    let ranks = tw.ranks();
    let exps: Vec<u32> = tw.levels.iter().map(|m| m.exp_log()).collect();
    let mut fs = vec![
        Finding::check("ranks", ranks == [1, 3, 9, 27], format!("{ranks:?}")),
        Finding::check("exponent", exps.iter().all(|&e| e == 2), format!("log_3 exp {exps:?}")),
    ];
    for (i, t) in tw.transitions.iter().enumerate() {
        let rep = classify(t);
        fs.push(Finding::check(&format!("level{}.label", i + 1), rep.label == Label::RegularFlat, rep.label_text()));
        let c = lreg_conditions(t).unwrap();
        fs.push(Finding::check(
            &format!("level{}.lreg", i + 1),
            c.agree() && c.flat,
            format!("split {} no_jumps {} straight {} flat {}", c.split, c.no_jumps, c.straight, c.flat),
        ));
    }
    from_findings(&fs)
}

fn c9() -> Outcome {
    from_findings(&weierstrass_samples(200, 42).unwrap())
}

fn c10() -> Outcome {
    from_findings(&order_reversal_checks().unwrap())
}

fn c11() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_iwasawa"))
            .args(["tower", "corpus", "--p", "3", "--count", "50", "--max-deg", "4", "--seed", "42"])
            .output()
            .unwrap()
    };
    let (a, b) = (run(), run());
    let parses = serde_json::from_slice::<serde_json::Value>(&a.stdout).is_ok();
    Outcome {
        pass: parses && !a.stdout.is_empty() && a.stdout == b.stdout,
        detail: format!("{} bytes, identical {}, valid JSON {parses}", a.stdout.len(), a.stdout == b.stdout),
    }
}

fn main() {
    let criteria: Vec<(u32, &str, Duration, fn() -> Outcome)> = vec![
        (1, "ring identities and involution", Duration::from_secs(5), c1),
        (2, "third worked example (printed orbit data)", Duration::from_secs(1), c2),
        (3, "first and second examples, non-cyclic remark module", Duration::from_secs(1), c3),
        (4, "Fukuda persistence on the corpus", Duration::from_secs(60), || zero(&["fukuda"])),
        (5, "r < d implies r' = r", Duration::from_secs(60), c5),
        (6, "stabilization relations", Duration::from_secs(60), || zero(&["stab."])),
        (7, "val0 and lminpol", Duration::from_secs(60), || zero(&["val0", "lminpol"])),
        (8, "flat towers Λ/(9, ω_n)", Duration::from_secs(30), c8),
        (9, "Weierstrass preparation", Duration::from_secs(10), c9),
        (10, "order reversal", Duration::from_secs(5), c10),
        (11, "corpus determinism", Duration::from_secs(60), c11),
    ];
    let mut unexpected = vec![];
    for (n, what, budget, f) in criteria {
        let t = Instant::now();
        let o = f();
        let dt = t.elapsed();
        let in_time = dt <= budget;
        let pass = o.pass && in_time;
        let expected = !KNOWN_RED.contains(&n);
        let tag = match (pass, expected) {
            (true, _) => "PASS",
            (false, true) => "FAIL",
            (false, false) => "FAIL (known)",
        };
        println!(
            "criterion {n:>2}: {tag}: {what} [{:.2}s of {}s] {}{}",
            dt.as_secs_f64(),
            budget.as_secs(),
            o.detail,
            if in_time { "" } else { " (over time budget)" }
        );
        if pass != expected {
            unexpected.push(n);
        }
    }
    if !unexpected.is_empty() {
        println!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
