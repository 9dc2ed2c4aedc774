use clap::{Args, Parser, Subcommand};
use iwasawa_core::cli_io::emit::{canonical_json, corpus_markdown, findings_table, suite_markdown, tower_markdown};
use iwasawa_core::cli_io::json::{findings_report, module_summary, parse_module, parse_transition};
use iwasawa_core::cli_io::orbit::{solve_orbit, OrbitFixture};
use iwasawa_core::cli_io::suites::{run_suite, Suite, SuiteConfig};
use iwasawa_core::lambda_ring::{
    check_identities, involution, nu, omega, parse_poly, weierstrass_prepare, QuotientIdeal,
};
use iwasawa_core::tower_sim::corpus::{corpus_run, CorpusConfig};
use iwasawa_core::tower_sim::{analyze, build_tower, TowerSpec};
use iwasawa_core::{Error, PrimeConfig};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "iwasawa", version, about = "Exact computations with finite Iwasawa modules and their towers")]
struct Cli {
    #[command(flatten)]
    out: Output,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone, Copy)]
struct Output {
    /// Emit canonical JSON (the default).
    #[arg(long, global = true, conflicts_with = "markdown")]
    json: bool,
    /// Emit markdown tables instead of JSON.
    #[arg(long, global = true)]
    markdown: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Arithmetic in Z/p^N[T] and its quotients.
    Ring {
        #[command(subcommand)]
        cmd: RingCmd,
    },
    /// Finite Λ-modules given by invariant factors and a τ-matrix.
    Module {
        #[command(subcommand)]
        cmd: FileCmd,
    },
    /// Transitions (A, B, N, ι, ω).
    Transition {
        #[command(subcommand)]
        cmd: FileCmd,
    },
    /// Model towers Λ/(f, ω_n) and seeded corpora of them.
    Tower {
        #[command(subcommand)]
        cmd: TowerCmd,
    },
    /// Run a named verification suite.
    Verify {
        /// identities | paper-examples | theorem-corpus | all
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 12)]
        precision: u32,
        #[arg(long, default_value_t = 5)]
        horizon: u32,
        /// Number of towers in the corpus part.
        #[arg(long, default_value_t = 50)]
        count: usize,
        /// Read fixtures from this directory instead of the bundled copies.
        #[arg(long, env = "IWASAWA_FIXTURE_DIR")]
        fixture_dir: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum RingCmd {
    /// ω_n and ν_n = ω_(n+1)/ω_n.
    Omega {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 12)]
        precision: u32,
    },
    /// Distinguished generator of (g) + I, with I = (p^N) or (ω_n, p^N).
    Prepare {
        poly: String,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 12)]
        precision: u32,
        #[arg(long)]
        level: Option<u32>,
    },
    /// f ↦ f((p - T)/(T + 1)) from Λ/ω_n to Λ/ω̃_n.
    Involution {
        poly: String,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 12)]
        precision: u32,
    },
    /// Check the ω/ν/u identities at one level.
    Identities {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 12)]
        precision: u32,
    },
}

#[derive(Subcommand)]
enum FileCmd {
    /// Read a JSON file and classify it.
    Classify { file: PathBuf },
}

#[derive(Subcommand)]
enum TowerCmd {
    Simulate {
        #[arg(long)]
        p: u64,
        /// Distinguished polynomial, "[c0,c1,...]" or "T^2 - 3".
        #[arg(long, conflicts_with = "flat")]
        f: Option<String>,
        /// Build Λ/(p^k, ω_n) instead.
        #[arg(long)]
        flat: Option<u32>,
        /// Number of levels (the horizon).
        #[arg(long, alias = "horizon")]
        levels: Option<u32>,
        #[arg(long, default_value_t = 8)]
        precision: u32,
    },
    Corpus {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, default_value_t = 4)]
        max_deg: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        horizon: Option<u32>,
        #[arg(long, default_value_t = 8)]
        precision: u32,
    },
}

/// Rendered output plus whether a check failed.
struct Outcome {
    text: String,
    summary: String,
    violation: bool,
}

type Res = Result<Outcome, Error>;

fn read(file: &PathBuf) -> Result<String, Error> {
    std::fs::read_to_string(file).map_err(|e| Error::Parse(format!("{}: {e}", file.display())))
}

fn ring(cmd: RingCmd, out: Output) -> Res {
    let (text, summary) = match cmd {
        RingCmd::Omega { p, n, precision } => {
            let cfg = PrimeConfig::new(p, precision)?;
            let (w, v) = (omega(cfg, n)?, nu(cfg, n)?);
            let j = serde_json::json!({"p": p, "n": n, "precision": precision,
                "omega": w.balanced_coeffs(), "nu": v.balanced_coeffs()});
            if out.markdown {
                (format!("ω_{n} = {}\n\nν_{n} = {}\n", w.to_human(), v.to_human()), format!("deg ω_{n} = {:?}", w.degree()))
            } else {
                (canonical_json(&j)?, format!("deg ω_{n} = {:?}", w.degree()))
            }
        }
        RingCmd::Prepare { poly, p, precision, level } => {
            let cfg = PrimeConfig::new(p, precision)?;
            let g = parse_poly(cfg, &poly)?;
            let ideal = match level {
                Some(n) => QuotientIdeal::level(cfg, n)?,
                None => QuotientIdeal::precision(cfg),
            };
            let pr = weierstrass_prepare(&g, &ideal)?;
            let j = serde_json::json!({"input": g.balanced_coeffs(), "distinguished": pr.poly.balanced_coeffs(),
                "unit": pr.unit.balanced_coeffs(), "is_unit": pr.is_unit});
            let s = format!("P = {}", pr.poly.to_human());
            if out.markdown {
                (format!("{s}\n\nunit = {}\n", pr.unit.to_human()), s)
            } else {
                (canonical_json(&j)?, s)
            }
        }
        RingCmd::Involution { poly, p, n, precision } => {
            let cfg = PrimeConfig::new(p, precision)?;
            let f = parse_poly(cfg, &poly)?;
            let fs = involution(&f, n)?;
            let s = format!("f* = {}", fs.to_human());
            if out.markdown {
                (format!("{s}\n"), s)
            } else {
                (canonical_json(&serde_json::json!({"input": f.balanced_coeffs(), "image": fs.balanced_coeffs(), "n": n}))?, s)
            }
        }
        RingCmd::Identities { p, n, precision } => {
            let cfg = PrimeConfig::new(p, precision)?.with_degree_cap(p.pow(n + 1) as usize);
            let c = check_identities(cfg, n)?;
            let j = serde_json::json!({"p": p, "n": n, "precision": precision,
                "omega_divides": c.omega_divides, "nu_decomposition": c.nu_decomposition,
                "omega_power": c.omega_power, "nu_mod_omega_is_p": c.nu_mod_omega_is_p});
            let s = format!("identities at p = {p}, n = {n}: {}", if c.all() { "hold" } else { "FAIL" });
            let text = if out.markdown { format!("{s}\n") } else { canonical_json(&j)? };
            return Ok(Outcome { text, summary: s, violation: !c.all() });
        }
    };
    Ok(Outcome { text, summary, violation: false })
}

fn module_classify(file: &PathBuf, out: Output) -> Res {
    let text = read(file)?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    let m = if value.get("orbit").is_some() {
        let fx: OrbitFixture = serde_json::from_value(value)?;
        let sol = solve_orbit(&fx)?;
        if let Some(v) = sol.first_violation {
            return Err(Error::Inconsistent(format!("no τ is compatible with {v}")));
        }
        sol.module.ok_or_else(|| Error::Inconsistent("compatible T does not have the stated level".into()))?
    } else {
        parse_module(&text)?
    };
    let s = module_summary(&m);
    let summary = format!("orders {:?}, level {}, Λ-cyclic {}", s.orders, s.level, s.cyclic);
    let text = if out.markdown {
        format!(
            "# Module\n\n| field | value |\n|---|---|\n| orders | {:?} |\n| level | {} |\n| cyclic | {} |\n| generator | {:?} |\n| socle | dim {}, blocks {:?} |\n| minimal annihilator | {} |\n",
            s.orders, s.level, s.cyclic, s.generator, s.socle_dim, s.socle_blocks,
            s.minimal_annihilator.clone().unwrap_or_default()
        )
    } else {
        canonical_json(&s)?
    };
    Ok(Outcome { text, summary, violation: false })
}

fn transition_classify(file: &PathBuf, out: Output) -> Res {
    let t = parse_transition(&read(file)?)?;
    let (rep, j) = findings_report(&t, None);
    let failed: Vec<&str> = j.checks.iter().filter(|f| f.failed()).map(|f| f.name.as_str()).collect();
    let summary = format!("{} (r = {}, r' = {}, d = {}), {} failed checks", rep.label_text(), rep.r, rep.r_prime, rep.d, failed.len());
    let violation = !failed.is_empty();
    let text = if out.markdown {
        format!("# Transition: {}\n\n{}", j.label, findings_table(&j.checks))
    } else {
        canonical_json(&j)?
    };
    Ok(Outcome { text, summary, violation })
}

fn tower(cmd: TowerCmd, out: Output) -> Res {
    match cmd {
        TowerCmd::Simulate { p, f, flat, levels, precision } => {
            let horizon = levels.unwrap_or_else(|| TowerSpec::default_horizon(p));
            let mut spec = match (f, flat) {
                (Some(f), None) => {
                    let cfg = PrimeConfig::new(p, precision.max(1))?;
                    let poly = parse_poly(cfg, &f)?;
                    TowerSpec::poly(p, poly.balanced_coeffs(), horizon)
                }
                (None, Some(k)) => TowerSpec::flat(p, k, horizon),
                _ => return Err(Error::Parse("give exactly one of --f and --flat".into())),
            };
            spec.precision = precision;
            let tw = build_tower(&spec)?;
            let rep = analyze(&tw, true);
            let v = rep.violations().len();
            let summary = format!("ranks {:?}, n0 {:?}, {v} violated properties", tw.ranks(), rep.n0);
            let text = if out.markdown { tower_markdown(&rep) } else { canonical_json(&rep)? };
            Ok(Outcome { text, summary, violation: v > 0 })
        }
        TowerCmd::Corpus { p, count, max_deg, seed, horizon, precision } => {
            let mut cfg = CorpusConfig::new(p, count, max_deg, seed);
            if let Some(h) = horizon {
                cfg.horizon = h;
            }
            cfg.precision = precision;
            let rep = corpus_run(&cfg)?;
            let v = rep.violation_count();
            let summary = format!("{} towers, {v} violations {:?}", rep.towers.len(), rep.violations);
            let text = if out.markdown { corpus_markdown(&rep) } else { rep.to_json()? + "\n" };
            Ok(Outcome { text, summary, violation: v > 0 })
        }
    }
}

fn run(cli: Cli) -> Res {
    let out = cli.out;
    match cli.cmd {
        Cmd::Ring { cmd } => ring(cmd, out),
        Cmd::Module { cmd: FileCmd::Classify { file } } => module_classify(&file, out),
        Cmd::Transition { cmd: FileCmd::Classify { file } } => transition_classify(&file, out),
        Cmd::Tower { cmd } => tower(cmd, out),
        Cmd::Verify { suite, seed, precision, horizon, count, fixture_dir } => {
            if let Some(d) = fixture_dir {
                std::env::set_var(iwasawa_core::cli_io::fixtures::FIXTURE_DIR_ENV, d);
            }
            let s: Suite = suite.parse()?;
            let cfg = SuiteConfig { seed, precision, horizon, corpus_count: count, ..SuiteConfig::default() };
            let rep = run_suite(s, &cfg)?;
            let summary = format!("suite {suite}: {} passed, {} failed, {} inapplicable", rep.passed, rep.failed, rep.inapplicable);
            let text = if out.markdown { suite_markdown(&rep) } else { canonical_json(&rep)? };
            Ok(Outcome { text, summary, violation: !rep.ok() })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(o) => {
            print!("{}", o.text);
            eprintln!("{}", o.summary);
            ExitCode::from(u8::from(o.violation))
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
