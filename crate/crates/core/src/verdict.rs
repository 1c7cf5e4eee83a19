use std::fmt;

use serde::Serialize;

use crate::scalar::Scalar;

/// A point at which a concrete inequality fails, with the exact values of
/// both sides there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub point: Vec<(String, Scalar)>,
    pub lhs: Scalar,
    pub rhs: Scalar,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.point.iter().map(|(x, v)| format!("{x}={v}")).collect();
        if parts.is_empty() {
            write!(f, "lhs {}, rhs {}", self.lhs, self.rhs)
        } else {
            write!(
                f,
                "at {}: lhs {}, rhs {}",
                parts.join(", "),
                self.lhs,
                self.rhs
            )
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails {
        witness: Witness,
    },
    Unknown,
    /// A structural requirement is not met, for example a constructor that is
    /// not interpreted additively.
    Rejected {
        reason: String,
    },
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn is_failure(&self) -> bool {
        matches!(self, Verdict::Fails { .. } | Verdict::Rejected { .. })
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds => write!(f, "holds"),
            Verdict::Fails { witness } => write!(f, "fails {witness}"),
            Verdict::Unknown => write!(f, "unknown"),
            Verdict::Rejected { reason } => write!(f, "rejected: {reason}"),
        }
    }
}
