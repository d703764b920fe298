//! Canonical text form for ordinals: terms in decreasing order with explicit
//! coefficients, e.g. `w1*1 + w*2 + 3`, powers as `w^2*1` or `w^(w*1)*1`,
//! zero as `0`. Parsing and printing round-trip bit-exactly.

use super::atom::AtomTable;
use super::ord::{Ordinal, OrdinalError};
use std::fmt;
use std::sync::Arc;

pub(super) fn write_canonical(o: &Ordinal, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if o.is_zero() {
        return write!(f, "0");
    }
    let table = o.table();
    let mut first = true;
    for t in o.terms() {
        if !first {
            write!(f, " + ")?;
        }
        first = false;
        let name = match table {
            Some(tb) => tb.atom(t.atom).name.clone(),
            None => unreachable!("nonempty terms imply a table"),
        };
        write!(f, "{name}")?;
        let p = &*t.power;
        if !(p.is_finite() && p.finite_part() == 1) {
            if p.is_finite() {
                write!(f, "^{}", p.finite_part())?;
            } else {
                write!(f, "^({p})")?;
            }
        }
        write!(f, "*{}", t.coeff)?;
    }
    if o.finite_part() > 0 {
        if !first {
            write!(f, " + ")?;
        }
        write!(f, "{}", o.finite_part())?;
    }
    Ok(())
}

/// Parses the canonical text form back into an ordinal over `table`.
pub fn parse_ordinal(table: &Arc<AtomTable>, input: &str) -> Result<Ordinal, OrdinalError> {
    let mut p = Parser { src: input.as_bytes(), pos: 0, table };
    let o = p.sum()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(OrdinalError::Parse(format!("trailing input at byte {}", p.pos)));
    }
    Ok(o)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    table: &'a Arc<AtomTable>,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos] == b' ' {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<u64, OrdinalError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(OrdinalError::Parse(format!("expected number at byte {start}")));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|e| OrdinalError::Parse(format!("bad number: {e}")))
    }

    fn ident(&mut self) -> Option<String> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
            self.pos += 1;
        }
        if start == self.pos || self.src[start].is_ascii_digit() {
            self.pos = start;
            return None;
        }
        Some(String::from_utf8(self.src[start..self.pos].to_vec()).unwrap())
    }

    fn sum(&mut self) -> Result<Ordinal, OrdinalError> {
        let mut parts: Vec<(usize, Ordinal, u64)> = Vec::new();
        let mut finite = 0u64;
        let mut saw_finite = false;
        loop {
            self.skip_ws();
            if let Some(name) = self.ident() {
                if saw_finite {
                    return Err(OrdinalError::Parse("term after finite part".into()));
                }
                let atom = self
                    .table
                    .lookup(&name)
                    .ok_or(OrdinalError::UnknownAtom(name))?;
                let power = if self.eat(b'^') {
                    if self.eat(b'(') {
                        let p = self.sum()?;
                        if !self.eat(b')') {
                            return Err(OrdinalError::Parse("expected `)`".into()));
                        }
                        p
                    } else {
                        Ordinal::finite(self.number()?)
                    }
                } else {
                    Ordinal::finite(1)
                };
                if !self.eat(b'*') {
                    return Err(OrdinalError::Parse("expected `*coeff`".into()));
                }
                let coeff = self.number()?;
                parts.push((atom, power, coeff));
            } else if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                if saw_finite {
                    return Err(OrdinalError::Parse("duplicate finite part".into()));
                }
                finite = self.number()?;
                saw_finite = true;
            } else {
                return Err(OrdinalError::Parse(format!(
                    "expected term at byte {}",
                    self.pos
                )));
            }
            self.skip_ws();
            if !self.eat(b'+') {
                break;
            }
        }
        if parts.is_empty() && saw_finite {
            return Ok(Ordinal::finite(finite));
        }
        Ordinal::from_parts(self.table, parts, finite)
    }
}

#[cfg(test)]
mod tests {
    use super::super::atom::AtomTable;
    use super::*;

    fn t() -> Arc<AtomTable> {
        AtomTable::standard()
    }

    #[test]
    fn round_trips_bit_exactly() {
        let table = t();
        for s in ["0", "3", "w*1", "w*2 + 1", "w1*1 + w*2 + 3", "w^2*1", "w^(w*1)*2 + w*1 + 5"] {
            let o = parse_ordinal(&table, s).unwrap();
            assert_eq!(o.to_string(), s);
        }
    }

    #[test]
    fn rejects_unknown_atoms_and_junk() {
        let table = t();
        assert!(parse_ordinal(&table, "k*1").is_err());
        assert!(parse_ordinal(&table, "w*").is_err());
        assert!(parse_ordinal(&table, "w*1 +").is_err());
        assert!(parse_ordinal(&table, "1 + w*1").is_err());
    }
}
