//! Textual syntax: `ALL`, `EMPTY`, `FIN(1,4,9)`, `AP(c,r)`, `POW(e)`,
//! `NOT(s)`, `AND(s,t,...)`, `OR(s,t,...)`.

use std::str::FromStr;

use num_traits::ToPrimitive;

use super::{IndexSet, MAX_DEPTH};
use crate::lex::{Cursor, SyntaxError};

fn small<T: TryFrom<u64>>(c: &mut Cursor, what: &str) -> Result<T, SyntaxError> {
    let column = c.column();
    let value = c.expect_int()?;
    value
        .to_u64()
        .and_then(|v| T::try_from(v).ok())
        .ok_or_else(|| SyntaxError {
            column,
            message: format!("{what} {value} is out of range"),
        })
}

/// Looks up a set declared elsewhere by name.
pub type Names<'a> = &'a dyn Fn(&str) -> Option<IndexSet>;

fn operands(c: &mut Cursor, depth: usize, names: Names) -> Result<Vec<IndexSet>, SyntaxError> {
    let mut out = vec![parse_set_at(c, depth + 1, names)?];
    while c.eat_sym(',') {
        out.push(parse_set_at(c, depth + 1, names)?);
    }
    Ok(out)
}

fn parse_set_at(c: &mut Cursor, depth: usize, names: Names) -> Result<IndexSet, SyntaxError> {
    if depth > MAX_DEPTH {
        return Err(c.error(format!("index set nested deeper than {MAX_DEPTH}")));
    }
    let column = c.column();
    let name = c.expect_ident()?;
    let invalid = |e: super::IndexSetError| SyntaxError {
        column,
        message: e.to_string(),
    };
    let set = match name.as_str() {
        "ALL" => return Ok(IndexSet::All),
        "EMPTY" => return Ok(IndexSet::Empty),
        "FIN" => {
            c.expect_sym('(')?;
            let mut elements = Vec::new();
            if !c.eat_sym(')') {
                elements.push(small::<u64>(c, "element")?);
                while c.eat_sym(',') {
                    elements.push(small::<u64>(c, "element")?);
                }
                c.expect_sym(')')?;
            }
            return IndexSet::finite(elements).map_err(invalid);
        }
        "AP" => {
            c.expect_sym('(')?;
            let modulus = small::<u64>(c, "modulus")?;
            c.expect_sym(',')?;
            let residue = small::<u64>(c, "residue")?;
            IndexSet::ap(modulus, residue).map_err(invalid)?
        }
        "POW" => {
            c.expect_sym('(')?;
            IndexSet::pow(small::<u32>(c, "exponent")?).map_err(invalid)?
        }
        "NOT" => {
            c.expect_sym('(')?;
            parse_set_at(c, depth + 1, names)?.not()
        }
        "AND" | "OR" => {
            c.expect_sym('(')?;
            let parts = operands(c, depth, names)?;
            if parts.len() < 2 {
                return Err(c.error(format!("{name} needs at least two operands")));
            }
            if name == "AND" {
                IndexSet::and_all(parts)
            } else {
                IndexSet::or_all(parts)
            }
        }
        other => {
            return names(other).ok_or_else(|| SyntaxError {
                column,
                message: format!("unknown index set `{other}`"),
            })
        }
    };
    c.expect_sym(')')?;
    Ok(set)
}

/// Parses one index set at the cursor.
pub fn parse_set(c: &mut Cursor) -> Result<IndexSet, SyntaxError> {
    parse_set_at(c, 1, &|_| None)
}

/// Like [`parse_set`], but bare names are resolved through `names`.
pub fn parse_set_with(c: &mut Cursor, names: Names) -> Result<IndexSet, SyntaxError> {
    parse_set_at(c, 1, names)
}

impl FromStr for IndexSet {
    type Err = SyntaxError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut c = Cursor::new(s)?;
        let set = parse_set(&mut c)?;
        c.expect_end()?;
        Ok(set)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_through_display() {
        for text in [
            "ALL",
            "EMPTY",
            "FIN(1,4,9)",
            "AP(2,0)",
            "NOT(POW(3))",
            "AND(AP(2,0),NOT(POW(3)))",
            "OR(AND(AP(3,1),POW(2)),FIN(5))",
        ] {
            let set: IndexSet = text.parse().unwrap();
            assert_eq!(set.to_string(), text);
            assert_eq!(set.to_string().parse::<IndexSet>().unwrap(), set);
        }
    }

    #[test]
    fn n_ary_operators_fold_left() {
        let set: IndexSet = "AND(AP(2,0), AP(3,0), AP(5,0))".parse().unwrap();
        assert_eq!(set.to_string(), "AND(AND(AP(2,0),AP(3,0)),AP(5,0))");
    }

    #[test]
    fn errors_carry_columns() {
        let e = "AND(AP(2,5), ALL)".parse::<IndexSet>().unwrap_err();
        assert_eq!(e.column, 5);
        let e = "POW(1)".parse::<IndexSet>().unwrap_err();
        assert_eq!(e.column, 1);
        let e = "FOO(1)".parse::<IndexSet>().unwrap_err();
        assert!(e.message.contains("unknown"));
        let deep = format!("{}ALL{}", "NOT(".repeat(40), ")".repeat(40));
        assert!(deep.parse::<IndexSet>().is_err());
    }
}
