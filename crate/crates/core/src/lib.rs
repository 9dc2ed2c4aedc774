pub mod arith;
pub mod error;
pub mod lambda_ring;
pub mod linalg;

pub use arith::PrimeConfig;
pub use error::{Error, Result};
pub use lambda_ring::{IwasawaPoly, QuotientIdeal};
pub mod pgroup_module;

pub use pgroup_module::{GammaModule, Hom, Submodule};
pub mod report;
pub mod transition_engine;

pub use report::{Finding, Status};
pub use transition_engine::{classify, ClassificationReport, Label, Transition};
pub mod tower_sim;

pub use tower_sim::{build_tower, Tower, TowerSpec};
pub mod cli_io;
