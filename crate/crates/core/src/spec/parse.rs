use std::collections::BTreeSet;

use num_traits::{Signed, ToPrimitive, Zero};

use super::{
    lookup, AnalysisSpec, Arg, Args, CertDecl, CertKind, Certificate, Kind, Op, Param, SpecError, Task,
    DEFAULT_PAIR,
};
use crate::cert::{DStatOrderCert, DecreaseCert, LatticeOp, OrderConvCert};
use crate::index_set::parse_set_with;
use crate::lattice::LatticeVector;
use crate::lex::{Cursor, SyntaxError, Token};
use crate::pair::{DeferredPair, IndexRule};
use crate::rational::Rational;
use crate::sequence::{Piece, RuleSequence};
use crate::term::{parse_expr, Term};

const SET_KEYWORDS: [&str; 8] = ["ALL", "EMPTY", "FIN", "AP", "POW", "NOT", "AND", "OR"];
const RESERVED: [&str; 8] = ["n", "if", "SPACE", "PAIR", "SET", "SEQ", "CERT", "TASK"];

/// Parses and fully validates a spec document.
pub fn parse_spec(text: &str) -> Result<AnalysisSpec, SpecError> {
    let mut p = Parser::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("");
        if line.trim().is_empty() {
            continue;
        }
        let at = |e: SyntaxError| SpecError {
            line: i + 1,
            column: e.column,
            message: e.message,
        };
        let mut c = Cursor::new(line).map_err(at)?;
        p.statement(&mut c).map_err(at)?;
    }
    Ok(p.spec)
}

#[derive(Default)]
struct Parser {
    spec: AnalysisSpec,
    names: BTreeSet<String>,
}

fn fail<T>(column: usize, message: impl Into<String>) -> Result<T, SyntaxError> {
    Err(SyntaxError {
        column,
        message: message.into(),
    })
}

impl Parser {
    fn statement(&mut self, c: &mut Cursor) -> Result<(), SyntaxError> {
        let column = c.column();
        let keyword = c.expect_ident()?;
        match keyword.as_str() {
            "SPACE" => self.space(c, column),
            "PAIR" => self.pair(c),
            "SET" => {
                let name = self.declare(c)?;
                c.expect_sym('=')?;
                let set = self.set_value(c)?;
                c.expect_end()?;
                self.spec.sets.push((name, set));
                Ok(())
            }
            "SEQ" => {
                let name = self.declare(c)?;
                c.expect_sym('=')?;
                let seq = self.sequence(c)?;
                self.spec.sequences.push((name, seq));
                Ok(())
            }
            "CERT" => self.cert(c),
            "TASK" => self.task(c),
            other => fail(
                column,
                format!("unknown statement `{other}` (expected SPACE, PAIR, SET, SEQ, CERT or TASK)"),
            ),
        }
    }

    fn space(&mut self, c: &mut Cursor, column: usize) -> Result<(), SyntaxError> {
        if self.spec.space.is_some() {
            return fail(column, "SPACE declared twice");
        }
        if !(self.spec.pairs.is_empty() && self.spec.sequences.is_empty() && self.spec.sets.is_empty()) {
            return fail(column, "SPACE must come before other declarations");
        }
        let at = c.column();
        let d = c.expect_int()?;
        let d = d.to_usize().filter(|d| *d >= 1).ok_or_else(|| SyntaxError {
            column: at,
            message: "dimension must be a positive integer".into(),
        })?;
        c.expect_end()?;
        self.spec.space = Some(d);
        Ok(())
    }

    fn declare(&mut self, c: &mut Cursor) -> Result<String, SyntaxError> {
        let column = c.column();
        let name = c.expect_ident()?;
        self.claim(name, column)
    }

    fn claim(&mut self, name: String, column: usize) -> Result<String, SyntaxError> {
        if SET_KEYWORDS.contains(&name.as_str()) || RESERVED.contains(&name.as_str()) {
            return fail(column, format!("`{name}` is reserved"));
        }
        if !self.names.insert(name.clone()) {
            return fail(column, format!("`{name}` is already declared"));
        }
        Ok(name)
    }

    fn pair(&mut self, c: &mut Cursor) -> Result<(), SyntaxError> {
        let named = !(matches!(c.peek(), Some(Token::Ident(s)) if s == "p") && c.peek_at(1) == Some(&Token::Sym(':')));
        let column = c.column();
        let name = if named {
            c.expect_ident()?
        } else {
            DEFAULT_PAIR.to_string()
        };
        let name = self.claim(name, column)?;
        let rules_at = c.column();
        expect_keyword(c, "p")?;
        c.expect_sym(':')?;
        let p = rule(c)?;
        expect_keyword(c, "q")?;
        c.expect_sym(':')?;
        let q = rule(c)?;
        c.expect_end()?;
        let pair = DeferredPair::new(p, q).map_err(|e| SyntaxError {
            column: rules_at,
            message: e.to_string(),
        })?;
        self.spec.pairs.push((name, pair));
        Ok(())
    }

    fn set_value(&self, c: &mut Cursor) -> Result<crate::index_set::IndexSet, SyntaxError> {
        match self.set_arg(c)? {
            Arg::Set(s) => Ok(s),
            Arg::Name(n) => Ok(self.spec.set(&n).expect("checked by set_arg").clone()),
            _ => unreachable!("set_arg returns sets or names"),
        }
    }

    fn set_arg(&self, c: &mut Cursor) -> Result<Arg, SyntaxError> {
        match c.peek() {
            Some(Token::Ident(s)) if SET_KEYWORDS.contains(&s.as_str()) => {
                Ok(Arg::Set(parse_set_with(c, &|name| self.spec.set(name).cloned())?))
            }
            _ => {
                let column = c.column();
                let name = c.expect_ident()?;
                if self.spec.set(&name).is_none() {
                    return fail(column, format!("unknown set `{name}`"));
                }
                Ok(Arg::Name(name))
            }
        }
    }

    fn sequence(&self, c: &mut Cursor) -> Result<RuleSequence, SyntaxError> {
        let start = c.column();
        let mut pieces = Vec::new();
        loop {
            let open = c.column();
            c.expect_sym('(')?;
            let mut terms = vec![term(c)?];
            while c.eat_sym(',') {
                terms.push(term(c)?);
            }
            c.expect_sym(')')?;
            let guard = if c.eat_keyword("if") {
                self.set_value(c)?
            } else {
                crate::index_set::IndexSet::All
            };
            if let Some(first) = pieces.first().map(|p: &Piece| p.terms.len()) {
                if first != terms.len() {
                    return fail(open, format!("piece has {} terms, the first piece has {first}", terms.len()));
                }
            }
            pieces.push(Piece::new(guard, terms));
            if !c.eat_sym(';') {
                break;
            }
        }
        c.expect_end()?;
        let seq = RuleSequence::new(pieces).map_err(|e| SyntaxError {
            column: start,
            message: e.to_string(),
        })?;
        if let Some(d) = self.spec.space {
            if seq.dim() != d && seq.dim() != 1 {
                return fail(start, format!("sequence has dimension {}, the space has dimension {d}", seq.dim()));
            }
        }
        Ok(seq)
    }

    fn cert(&mut self, c: &mut Cursor) -> Result<(), SyntaxError> {
        let name = self.declare(c)?;
        c.expect_sym('=')?;
        let column = c.column();
        let word = c.expect_ident()?;
        let kind = CertKind::ALL
            .into_iter()
            .find(|k| k.as_str() == word)
            .ok_or_else(|| SyntaxError {
                column,
                message: format!("unknown certificate kind `{word}` (expected decrease, order or dstat)"),
            })?;
        let args = self.args(c, kind.params())?;
        let cert = self.build_cert(kind, &args).map_err(|message| SyntaxError { column, message })?;
        if let Some(d) = self.spec.space {
            if cert.dim() != d {
                return fail(column, format!("certificate has dimension {}, the space has dimension {d}", cert.dim()));
            }
        }
        self.spec.certificates.push(CertDecl { name, kind, args, cert });
        Ok(())
    }

    fn build_cert(&self, kind: CertKind, args: &Args) -> Result<Certificate, String> {
        let spec = &self.spec;
        let seq = |key: &str| match lookup(args, key) {
            Some(Arg::Name(n)) => spec.sequence(n).cloned().expect("resolved while parsing"),
            _ => unreachable!("required sequence argument"),
        };
        let set = |key: &str| lookup(args, key).and_then(|a| spec.resolve_set(a));
        let limit = || match lookup(args, "limit") {
            Some(Arg::Vector(v)) => v.clone(),
            _ => unreachable!("required vector argument"),
        };
        let pair = spec.resolve_pair(lookup(args, "pair")).expect("resolved while parsing");
        let cert = match kind {
            CertKind::Decrease => Certificate::Decrease(DecreaseCert {
                z: seq("z"),
                k: set("k").expect("required"),
                pair,
            }),
            CertKind::Order => {
                Certificate::Order(OrderConvCert::new(seq("x"), limit(), seq("y")).map_err(|e| e.to_string())?)
            }
            CertKind::DStat => {
                let k = set("k").expect("required");
                let zset = set("zset").unwrap_or_else(|| k.clone());
                Certificate::DStat(
                    DStatOrderCert::with_zset(seq("x"), limit(), seq("z"), k, zset, pair).map_err(|e| e.to_string())?,
                )
            }
        };
        Ok(cert)
    }

    fn task(&mut self, c: &mut Cursor) -> Result<(), SyntaxError> {
        let column = c.column();
        let id = c.expect_ident()?;
        if self.spec.task(&id).is_some() {
            return fail(column, format!("task `{id}` is already declared"));
        }
        c.expect_sym('=')?;
        let column = c.column();
        let word = c.expect_ident()?;
        let op = Op::ALL.iter().copied().find(|op| op.as_str() == word).ok_or_else(|| {
            let known: Vec<&str> = Op::ALL.iter().map(Op::as_str).collect();
            SyntaxError {
                column,
                message: format!("unknown operation `{word}` (expected one of {})", known.join(", ")),
            }
        })?;
        let args = self.args(c, op.params())?;
        self.spec.tasks.push(Task { id, op, args });
        Ok(())
    }

    /// `key=value` pairs, returned in schema order.
    fn args(&self, c: &mut Cursor, params: &[Param]) -> Result<Args, SyntaxError> {
        let mut found: Vec<Option<Arg>> = vec![None; params.len()];
        while !c.at_end() {
            let column = c.column();
            let key = c.expect_ident()?;
            let Some(i) = params.iter().position(|p| p.key == key) else {
                let keys: Vec<&str> = params.iter().map(|p| p.key).collect();
                return fail(column, format!("unknown key `{key}` (expected {})", keys.join(", ")));
            };
            if found[i].is_some() {
                return fail(column, format!("key `{key}` given twice"));
            }
            c.expect_sym('=')?;
            found[i] = Some(self.value(c, params[i].kind)?);
        }
        let mut out = Vec::new();
        for (p, v) in params.iter().zip(found) {
            match v {
                Some(v) => out.push((p.key.to_string(), v)),
                None if p.required => return fail(c.column(), format!("missing required key `{}`", p.key)),
                None => {}
            }
        }
        Ok(out)
    }

    fn value(&self, c: &mut Cursor, kind: Kind) -> Result<Arg, SyntaxError> {
        let column = c.column();
        Ok(match kind {
            Kind::Set => self.set_arg(c)?,
            Kind::Seq => {
                let name = c.expect_ident()?;
                if self.spec.sequence(&name).is_none() {
                    return fail(column, format!("unknown sequence `{name}`"));
                }
                Arg::Name(name)
            }
            Kind::Pair => {
                let name = c.expect_ident()?;
                if self.spec.pair(&name).is_none() {
                    return fail(column, format!("unknown pair `{name}`"));
                }
                Arg::Name(name)
            }
            Kind::AnyCert | Kind::DecreaseCert | Kind::OrderCert | Kind::DStatCert => {
                let name = c.expect_ident()?;
                let Some(decl) = self.spec.certificate(&name) else {
                    return fail(column, format!("unknown certificate `{name}`"));
                };
                let wanted = match kind {
                    Kind::DecreaseCert => Some(CertKind::Decrease),
                    Kind::OrderCert => Some(CertKind::Order),
                    Kind::DStatCert => Some(CertKind::DStat),
                    _ => None,
                };
                if let Some(w) = wanted.filter(|w| *w != decl.kind) {
                    return fail(
                        column,
                        format!("certificate `{name}` is {}, this key needs {}", decl.kind.as_str(), w.as_str()),
                    );
                }
                Arg::Name(name)
            }
            Kind::Vector => Arg::Vector(self.vector(c)?),
            Kind::Rational => Arg::Rational(rational(c)?),
            Kind::Count => Arg::Count(count(c)?),
            Kind::Rule => Arg::Rule(rule(c)?),
            Kind::Ints => Arg::Ints(list(c, count)?),
            Kind::Vectors => Arg::Vectors(list(c, |c| self.vector(c))?),
            Kind::LatticeOp => {
                let word = c.expect_ident()?;
                word.parse::<LatticeOp>().or_else(|e| fail(column, e))?;
                Arg::Word(word)
            }
        })
    }

    fn vector(&self, c: &mut Cursor) -> Result<LatticeVector, SyntaxError> {
        let column = c.column();
        c.expect_sym('(')?;
        let mut coords = vec![rational(c)?];
        while c.eat_sym(',') {
            coords.push(rational(c)?);
        }
        c.expect_sym(')')?;
        if let Some(d) = self.spec.space {
            if coords.len() != d {
                return fail(column, format!("vector has dimension {}, the space has dimension {d}", coords.len()));
            }
        }
        Ok(LatticeVector::new(coords).expect("at least one coordinate"))
    }
}

fn expect_keyword(c: &mut Cursor, word: &str) -> Result<(), SyntaxError> {
    if c.eat_keyword(word) {
        Ok(())
    } else {
        Err(c.error(format!("expected `{word}`")))
    }
}

fn term(c: &mut Cursor) -> Result<Term, SyntaxError> {
    let column = c.column();
    let expr = parse_expr(c)?;
    Term::new(expr).map_err(|e| SyntaxError {
        column,
        message: e.to_string(),
    })
}

/// An affine rule `a·n + b` with nonnegative integer coefficients.
fn rule(c: &mut Cursor) -> Result<IndexRule, SyntaxError> {
    let column = c.column();
    let t = term(c)?;
    let f = t.func();
    let bad = || SyntaxError {
        column,
        message: format!("`{t}` is not a rule a·n + b with nonnegative integers a, b"),
    };
    let den = match f.den().degree() {
        Some(0) => f.den().coeffs()[0].clone(),
        _ => return Err(bad()),
    };
    let coeffs: Vec<Rational> = f.num().coeffs().iter().map(|k| k / &den).collect();
    if coeffs.len() > 2 {
        return Err(bad());
    }
    let coeff = |i: usize| -> Result<u64, SyntaxError> {
        let k = coeffs.get(i).cloned().unwrap_or_else(Rational::zero);
        if !k.is_integer() || k.is_negative() {
            return Err(bad());
        }
        k.to_integer().to_u64().ok_or_else(bad)
    };
    Ok(IndexRule::new(coeff(1)?, coeff(0)?))
}

fn rational(c: &mut Cursor) -> Result<Rational, SyntaxError> {
    let negative = c.eat_sym('-');
    let num = c.expect_int()?;
    let mut r = Rational::from_integer(num);
    if c.eat_sym('/') {
        let column = c.column();
        let den = c.expect_int()?;
        if den.is_zero() {
            return fail(column, "zero denominator");
        }
        r /= Rational::from_integer(den);
    }
    Ok(if negative { -r } else { r })
}

fn count(c: &mut Cursor) -> Result<u64, SyntaxError> {
    let column = c.column();
    let k = c.expect_int()?;
    k.to_u64().ok_or_else(|| SyntaxError {
        column,
        message: format!("{k} does not fit in 64 bits"),
    })
}

fn list<T>(c: &mut Cursor, mut item: impl FnMut(&mut Cursor) -> Result<T, SyntaxError>) -> Result<Vec<T>, SyntaxError> {
    c.expect_sym('[')?;
    let mut out = Vec::new();
    if c.eat_sym(']') {
        return Ok(out);
    }
    out.push(item(c)?);
    while c.eat_sym(',') {
        out.push(item(c)?);
    }
    c.expect_sym(']')?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index_set::IndexSet;

    const CUBE: &str = "\
# cube example
SPACE 2
PAIR p: 0 q: n
SEQ z = (0, 1/n^2) if NOT(POW(3)); (0, n^2)
CERT dec = decrease z=z k=NOT(POW(3))
TASK d = density set=POW(3)
TASK c = check cert=dec
";

    #[test]
    fn parses_cube_spec() {
        let spec = parse_spec(CUBE).unwrap();
        assert_eq!(spec.space, Some(2));
        assert_eq!(spec.sequences.len(), 1);
        assert!(spec.default_pair().is_natural());
        assert_eq!(spec.tasks.len(), 2);
        let Certificate::Decrease(d) = &spec.certificate("dec").unwrap().cert else {
            panic!("decrease expected")
        };
        assert_eq!(d.k, IndexSet::pow(3).unwrap().not());
    }

    #[test]
    fn rejects_invalid_pair() {
        let e = parse_spec("PAIR p: 4n q: 2n").unwrap_err();
        assert_eq!((e.line, e.column), (1, 6));
        assert!(e.message.contains("p_n < q_n"), "{e}");
    }

    #[test]
    fn rejects_vanishing_denominator() {
        let e = parse_spec("SEQ x = (1/(n-3))").unwrap_err();
        assert_eq!(e.column, 10);
        assert!(e.message.contains('3'), "{e}");
    }

    #[test]
    fn diagnostics() {
        let cases = [
            ("TASK t = density set=POW(3) colour=red", "unknown key `colour`"),
            ("TASK t = check cert=nothing", "unknown certificate"),
            ("TASK t = density", "missing required key `set`"),
            ("SEQ x = (n) if AP(2,0)", "ALL"),
            ("SET n = ALL", "reserved"),
            ("SET a = ALL\nSET a = EMPTY", "already declared"),
            ("TASK t = frobnicate", "unknown operation"),
            ("PAIR p: n/2 q: n", "not a rule"),
            ("TASK t = lattice op=sup a=x", "unknown lattice operation"),
        ];
        for (text, needle) in cases {
            let e = parse_spec(text).unwrap_err();
            assert!(e.message.contains(needle), "{text}: {e}");
        }
    }

    #[test]
    fn certificate_kinds_are_enforced() {
        let text = format!("{CUBE}TASK m = monotone cert=dec\n");
        let e = parse_spec(&text).unwrap_err();
        assert_eq!(e.line, 8);
        assert!(e.message.contains("needs dstat"), "{e}");
    }
}
