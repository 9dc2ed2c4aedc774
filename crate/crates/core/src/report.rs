//! Named check results shared by every checker.

use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inapplicable,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Inapplicable => "inapplicable",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub name: String,
    pub status: Status,
    pub witness: String,
}

impl Finding {
    pub fn new(name: &str, status: Status, witness: impl Into<String>) -> Self {
        Finding { name: name.to_string(), status, witness: witness.into() }
    }

    pub fn check(name: &str, ok: bool, witness: impl Into<String>) -> Self {
        Self::new(name, if ok { Status::Pass } else { Status::Fail }, witness)
    }

    pub fn pass(name: &str, witness: impl Into<String>) -> Self {
        Self::new(name, Status::Pass, witness)
    }

    pub fn fail(name: &str, witness: impl Into<String>) -> Self {
        Self::new(name, Status::Fail, witness)
    }

    pub fn inapplicable(name: &str, why: impl Into<String>) -> Self {
        Self::new(name, Status::Inapplicable, why)
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == Status::Fail
    }
}

pub fn any_failed(fs: &[Finding]) -> bool {
    fs.iter().any(Finding::failed)
}

/// Prefix every finding name, e.g. with a lemma or level tag.
pub fn prefixed(prefix: &str, fs: Vec<Finding>) -> Vec<Finding> {
    fs.into_iter()
        .map(|mut f| {
            f.name = format!("{prefix}.{}", f.name);
            f
        })
        .collect()
}
