//! File formats, fixtures and verification suites behind the command line.

pub mod emit;
pub mod fixtures;
pub mod json;
pub mod orbit;
pub mod suites;

pub use json::{parse_module, parse_transition, ModuleJson, TransitionJson};
pub use orbit::{ingest_orbit_fixture, solve_orbit, OrbitFixture, OrbitSolution};
pub use suites::{run_suite, Suite, SuiteConfig, SuiteReport};
