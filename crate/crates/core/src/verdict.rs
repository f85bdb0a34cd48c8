use std::fmt;

/// Outcome of any check in the crate.
///
/// `Verified` is reserved for claims whose asymptotic parts were discharged
/// symbolically. Finite evidence alone never yields more than `Consistent`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Verified,
    Consistent,
    Refuted,
    Inconclusive,
    PreconditionFailed,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Verified => "verified",
            Verdict::Consistent => "consistent",
            Verdict::Refuted => "refuted",
            Verdict::Inconclusive => "inconclusive",
            Verdict::PreconditionFailed => "precondition_failed",
        }
    }

    /// Verdicts that make the CLI exit nonzero.
    pub fn is_failure(&self) -> bool {
        matches!(self, Verdict::Refuted | Verdict::PreconditionFailed)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
