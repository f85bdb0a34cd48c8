use std::fmt;

use super::{AnalysisSpec, Arg, Args, DEFAULT_PAIR};
use crate::lattice::LatticeVector;
use crate::rational;

fn vector(v: &LatticeVector) -> String {
    let coords: Vec<String> = v.coords().iter().map(rational::compact).collect();
    format!("({})", coords.join(", "))
}

impl fmt::Display for Arg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arg::Name(s) | Arg::Word(s) => f.write_str(s),
            Arg::Set(s) => write!(f, "{s}"),
            Arg::Vector(v) => f.write_str(&vector(v)),
            Arg::Rational(r) => f.write_str(&rational::compact(r)),
            Arg::Count(k) => write!(f, "{k}"),
            Arg::Rule(r) => write!(f, "{r}"),
            Arg::Ints(xs) => {
                let items: Vec<String> = xs.iter().map(u64::to_string).collect();
                write!(f, "[{}]", items.join(", "))
            }
            Arg::Vectors(vs) => {
                let items: Vec<String> = vs.iter().map(vector).collect();
                write!(f, "[{}]", items.join(", "))
            }
        }
    }
}

fn write_args(f: &mut fmt::Formatter<'_>, args: &Args) -> fmt::Result {
    for (k, v) in args {
        write!(f, " {k}={v}")?;
    }
    Ok(())
}

/// Canonical spec text; parsing it back yields an equal spec.
impl fmt::Display for AnalysisSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(d) = self.space {
            writeln!(f, "SPACE {d}")?;
        }
        for (name, pair) in &self.pairs {
            if name == DEFAULT_PAIR {
                writeln!(f, "PAIR {pair}")?;
            } else {
                writeln!(f, "PAIR {name} {pair}")?;
            }
        }
        for (name, set) in &self.sets {
            writeln!(f, "SET {name} = {set}")?;
        }
        for (name, seq) in &self.sequences {
            writeln!(f, "SEQ {name} = {seq}")?;
        }
        for c in &self.certificates {
            write!(f, "CERT {} = {}", c.name, c.kind.as_str())?;
            write_args(f, &c.args)?;
            writeln!(f)?;
        }
        for t in &self.tasks {
            write!(f, "TASK {} = {}", t.id, t.op)?;
            write_args(f, &t.args)?;
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use crate::spec::parse_spec;

    #[test]
    fn round_trip() {
        let text = "\
SPACE 2
PAIR wide p: 2n+1 q: 4n+3
PAIR p: 0 q: n
SET sparse = OR(POW(3), FIN(6, 10))
SEQ x = (1/n, -3/2 + 1/n^2) if sparse; (0, n) if AP(2,0); (1/(n+1), 2)
SEQ z = (1/n, 1/n)
CERT c = dstat x=x limit=(0, -3/2) z=z k=NOT(sparse) zset=sparse pair=wide
CERT d = decrease z=z k=ALL
TASK a = ideal cert=c support=[1]
TASK b = member seq=x cert=d candidates=[(0, 0), (1/2, 7)]
";
        let spec = parse_spec(text).unwrap();
        let again = parse_spec(&spec.to_string()).unwrap();
        assert_eq!(spec, again);
        assert_eq!(spec.to_string(), again.to_string());
    }
}
