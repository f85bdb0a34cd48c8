//! Analysis spec files: a line-oriented text format declaring a space, pairs,
//! index sets, sequences, certificates and tasks. See `docs/spec-format.md`.

mod parse;
mod run;
mod write;

use std::fmt;

use thiserror::Error;

use crate::cert::{DStatOrderCert, DecreaseCert, OrderConvCert};
use crate::index_set::IndexSet;
use crate::lattice::LatticeVector;
use crate::pair::{DeferredPair, IndexRule};
use crate::rational::Rational;
use crate::sequence::RuleSequence;

pub use parse::parse_spec;
pub use run::{run, Report, RunOptions, Status, TaskReport, SCHEMA_VERSION};

/// A parse or validation failure, with one-based line and column.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct SpecError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// What a task or certificate parameter accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    /// Name of a declared sequence.
    Seq,
    /// Inline set expression or name of a declared set.
    Set,
    /// Name of a declared pair.
    Pair,
    /// Name of a declared certificate of any kind.
    AnyCert,
    DecreaseCert,
    OrderCert,
    DStatCert,
    Vector,
    Rational,
    Count,
    /// An affine index rule such as `2n+1`.
    Rule,
    /// `[1, 2]`
    Ints,
    /// `[(0, 0), (1, 2)]`
    Vectors,
    /// One of join, meet, pos, neg, abs.
    LatticeOp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Param {
    pub key: &'static str,
    pub kind: Kind,
    pub required: bool,
}

const fn req(key: &'static str, kind: Kind) -> Param {
    Param { key, kind, required: true }
}

const fn opt(key: &'static str, kind: Kind) -> Param {
    Param { key, kind, required: false }
}

/// A parsed parameter value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Arg {
    Name(String),
    Set(IndexSet),
    Vector(LatticeVector),
    Rational(Rational),
    Count(u64),
    Rule(IndexRule),
    Ints(Vec<u64>),
    Vectors(Vec<LatticeVector>),
    Word(String),
}

/// Parameters in schema order.
pub type Args = Vec<(String, Arg)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertKind {
    Decrease,
    Order,
    DStat,
}

impl CertKind {
    pub const ALL: [CertKind; 3] = [CertKind::Decrease, CertKind::Order, CertKind::DStat];

    pub fn as_str(&self) -> &'static str {
        match self {
            CertKind::Decrease => "decrease",
            CertKind::Order => "order",
            CertKind::DStat => "dstat",
        }
    }

    pub fn params(&self) -> &'static [Param] {
        use Kind::*;
        const DECREASE: &[Param] = &[req("z", Seq), req("k", Set), opt("pair", Pair)];
        const ORDER: &[Param] = &[req("x", Seq), req("limit", Vector), req("y", Seq)];
        const DSTAT: &[Param] = &[
            req("x", Seq),
            req("limit", Vector),
            req("z", Seq),
            req("k", Set),
            opt("zset", Set),
            opt("pair", Pair),
        ];
        match self {
            CertKind::Decrease => DECREASE,
            CertKind::Order => ORDER,
            CertKind::DStat => DSTAT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Decrease(DecreaseCert),
    Order(OrderConvCert),
    DStat(DStatOrderCert),
}

impl Certificate {
    pub fn kind(&self) -> CertKind {
        match self {
            Certificate::Decrease(_) => CertKind::Decrease,
            Certificate::Order(_) => CertKind::Order,
            Certificate::DStat(_) => CertKind::DStat,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Certificate::Decrease(c) => c.z.dim(),
            Certificate::Order(c) => c.x.dim(),
            Certificate::DStat(c) => c.dim(),
        }
    }
}

/// A declared certificate: its source arguments and the resolved value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertDecl {
    pub name: String,
    pub kind: CertKind,
    pub args: Args,
    pub cert: Certificate,
}

macro_rules! ops {
    ($($variant:ident $name:literal [$($p:expr),* $(,)?];)*) => {
        /// Task operations.
        #[derive(Debug, Clone, Copy, PartialEq, Eq)]
        pub enum Op { $($variant),* }

        impl Op {
            pub const ALL: &'static [Op] = &[$(Op::$variant),*];

            pub fn as_str(&self) -> &'static str {
                match self { $(Op::$variant => $name),* }
            }

            pub fn params(&self) -> &'static [Param] {
                #[allow(unused_imports)]
                use Kind::*;
                match self {
                    $(Op::$variant => {
                        const P: &[Param] = &[$($p),*];
                        P
                    })*
                }
            }
        }
    };
}

ops! {
    Density "density" [req("set", Set), opt("pair", Pair)];
    Count "count" [req("set", Set), req("lo", Count), req("hi", Count)];
    Contains "contains" [req("set", Set), req("n", Count)];
    Eval "eval" [req("seq", Seq), req("n", Count)];
    Cesaro "cesaro" [req("seq", Seq), req("n", Count), opt("pair", Pair)];
    Strong "strong" [req("seq", Seq), req("limit", Rational), opt("tol", Rational), opt("pair", Pair)];
    StatReal "stat_real" [req("seq", Seq), req("limit", Rational), req("eps", Rational), opt("pair", Pair)];
    Validate "validate" [req("p", Rule), req("q", Rule)];
    Ratio "ratio" [opt("pair", Pair)];
    Refine "refine" [req("inner", Pair), req("outer", Pair)];
    Check "check" [req("cert", AnyCert)];
    StatCheck "stat_check" [req("cert", DStatCert)];
    Falsify "falsify" [
        req("seq", Seq),
        req("limit", Vector),
        opt("pair", Pair),
        opt("printed_p", Rule),
        opt("printed_q", Rule),
    ];
    Linear "linear" [req("a", DStatCert), req("b", DStatCert), req("lambda", Rational), req("mu", Rational)];
    Lattice "lattice" [req("op", LatticeOp), req("a", DStatCert), opt("b", DStatCert)];
    Unique "unique" [req("a", DStatCert), req("b", DStatCert)];
    Monotone "monotone" [req("cert", DStatCert)];
    Subseq "subseq" [req("cert", DStatCert), req("set", Set)];
    Retarget "retarget" [req("cert", DStatCert), req("target", Pair)];
    Ideal "ideal" [req("cert", DStatCert), req("support", Ints)];
    Member "member" [req("seq", Seq), req("cert", DecreaseCert), req("candidates", Vectors)];
    Transfer "transfer" [req("seq", Seq), req("cert", DStatCert)];
    Preserve "preserve" [req("a", DStatCert), req("b", DStatCert)];
    Lift "lift" [req("cert", OrderCert), opt("pair", Pair)];
    Theorems "theorems" [req("trials", Count), opt("seed", Count)];
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Task {
    pub id: String,
    pub op: Op,
    pub args: Args,
}

impl Task {
    pub fn arg(&self, key: &str) -> Option<&Arg> {
        lookup(&self.args, key)
    }
}

/// A fully resolved spec. Declarations keep their source order within each
/// section; the serializer writes sections in dependency order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AnalysisSpec {
    pub space: Option<usize>,
    pub pairs: Vec<(String, DeferredPair)>,
    pub sets: Vec<(String, IndexSet)>,
    pub sequences: Vec<(String, RuleSequence)>,
    pub certificates: Vec<CertDecl>,
    pub tasks: Vec<Task>,
}

/// The pair used when a task or certificate names none.
pub const DEFAULT_PAIR: &str = "default";

fn lookup<'a, T>(items: &'a [(String, T)], name: &str) -> Option<&'a T> {
    items.iter().find(|(n, _)| n == name).map(|(_, v)| v)
}

impl AnalysisSpec {
    pub fn pair(&self, name: &str) -> Option<DeferredPair> {
        lookup(&self.pairs, name).copied()
    }

    /// The `default` pair if declared, otherwise `p: 0 q: n`.
    pub fn default_pair(&self) -> DeferredPair {
        self.pair(DEFAULT_PAIR).unwrap_or_else(DeferredPair::natural)
    }

    pub fn set(&self, name: &str) -> Option<&IndexSet> {
        lookup(&self.sets, name)
    }

    pub fn sequence(&self, name: &str) -> Option<&RuleSequence> {
        lookup(&self.sequences, name)
    }

    pub fn certificate(&self, name: &str) -> Option<&CertDecl> {
        self.certificates.iter().find(|c| c.name == name)
    }

    pub fn task(&self, id: &str) -> Option<&Task> {
        self.tasks.iter().find(|t| t.id == id)
    }

    /// Resolves a set argument, inline or by name.
    pub fn resolve_set(&self, arg: &Arg) -> Option<IndexSet> {
        match arg {
            Arg::Set(s) => Some(s.clone()),
            Arg::Name(n) => self.set(n).cloned(),
            _ => None,
        }
    }

    /// Resolves an optional pair argument, falling back to the default pair.
    pub fn resolve_pair(&self, arg: Option<&Arg>) -> Option<DeferredPair> {
        match arg {
            None => Some(self.default_pair()),
            Some(Arg::Name(n)) => self.pair(n),
            Some(_) => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn op_names_are_unique() {
        for (i, a) in Op::ALL.iter().enumerate() {
            for b in &Op::ALL[i + 1..] {
                assert_ne!(a.as_str(), b.as_str());
            }
        }
    }
}
