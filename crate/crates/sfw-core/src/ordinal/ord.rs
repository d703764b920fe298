use super::atom::{AtomId, AtomTable, CofinalityClass};
use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrdinalError {
    #[error("mismatched atom tables: {0} vs {1}")]
    MismatchedAtomTable(String, String),
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("coefficient must be positive")]
    ZeroCoefficient,
    #[error("atom `{0}` only admits power 1 (no exponentiation above the omega atom)")]
    PowerAboveOmegaAtom(String),
    #[error("power of `w` may only mention the atom `w`")]
    ForeignAtomInPower,
    #[error("CNF terms must be strictly decreasing in (atom, power)")]
    NonDecreasingTerms,
    #[error("parse error: {0}")]
    Parse(String),
}

/// One CNF term `atom^power · coeff`. Powers above the `w` atom are fixed at 1;
/// powers of `w` are again ordinals built from `w` alone.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CnfTerm {
    pub atom: AtomId,
    pub power: Box<Ordinal>,
    pub coeff: u64,
}

/// A symbolic ordinal: a strictly decreasing sum of CNF terms plus a finite
/// part. Comparison is lexicographic on terms keyed by (atom, power).
#[derive(Debug, Clone, Hash)]
pub struct Ordinal {
    table: Option<Arc<AtomTable>>,
    terms: Vec<CnfTerm>,
    finite: u64,
}

/// Classification used by the limit-stage case split.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrdClass {
    Zero,
    Successor,
    CofOmega,
    CofGeOmega1,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { table: None, terms: Vec::new(), finite: 0 }
    }

    pub fn finite(n: u64) -> Self {
        Ordinal { table: None, terms: Vec::new(), finite: n }
    }

    /// The bare atom `a` as an ordinal (power 1, coefficient 1).
    pub fn atom(table: &Arc<AtomTable>, id: AtomId) -> Self {
        assert!(id < table.len(), "atom id out of range");
        Ordinal {
            table: Some(table.clone()),
            terms: vec![CnfTerm { atom: id, power: Box::new(Ordinal::finite(1)), coeff: 1 }],
            finite: 0,
        }
    }

    /// Bare atom looked up by name.
    pub fn named_atom(table: &Arc<AtomTable>, name: &str) -> Result<Self, OrdinalError> {
        let id = table.lookup(name).ok_or_else(|| OrdinalError::UnknownAtom(name.into()))?;
        Ok(Self::atom(table, id))
    }

    pub fn omega(table: &Arc<AtomTable>) -> Self {
        Self::atom(table, 0)
    }

    /// Builds a term `atom^power · coeff + rest-so-far` sum from raw parts.
    /// Terms must be supplied in strictly decreasing (atom, power) order.
    pub fn from_parts(
        table: &Arc<AtomTable>,
        parts: Vec<(AtomId, Ordinal, u64)>,
        finite: u64,
    ) -> Result<Self, OrdinalError> {
        let mut terms = Vec::with_capacity(parts.len());
        for (atom, power, coeff) in parts {
            if coeff == 0 {
                return Err(OrdinalError::ZeroCoefficient);
            }
            if atom != 0 {
                if !power.is_finite() || power.finite != 1 {
                    return Err(OrdinalError::PowerAboveOmegaAtom(table.atom(atom).name.clone()));
                }
            } else if power.terms.iter().any(|t| t.atom != 0) {
                return Err(OrdinalError::ForeignAtomInPower);
            }
            terms.push(CnfTerm { atom, power: Box::new(power), coeff });
        }
        for w in terms.windows(2) {
            let k0 = (w[0].atom, &w[0].power);
            let k1 = (w[1].atom, &w[1].power);
            let decreasing =
                k0.0 > k1.0 || (k0.0 == k1.0 && cmp_same_table(k0.1, k1.1) == Ordering::Greater);
            if !decreasing {
                return Err(OrdinalError::NonDecreasingTerms);
            }
        }
        let table = if terms.is_empty() { None } else { Some(table.clone()) };
        Ok(Ordinal { table, terms, finite })
    }

    pub fn table(&self) -> Option<&Arc<AtomTable>> {
        self.table.as_ref()
    }

    pub fn terms(&self) -> &[CnfTerm] {
        &self.terms
    }

    pub fn finite_part(&self) -> u64 {
        self.finite
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.finite == 0
    }

    pub fn is_finite(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_successor(&self) -> bool {
        self.finite > 0
    }

    pub fn is_limit(&self) -> bool {
        !self.terms.is_empty() && self.finite == 0
    }

    /// Checks that two ordinals live over compatible atom tables.
    fn unify_tables<'a>(&'a self, other: &'a Ordinal) -> Result<(), OrdinalError> {
        match (&self.table, &other.table) {
            (Some(a), Some(b)) if a != b => Err(OrdinalError::MismatchedAtomTable(
                a.to_string(),
                b.to_string(),
            )),
            _ => Ok(()),
        }
    }

    /// Total order on ordinals over a common atom table.
    pub fn compare(&self, other: &Ordinal) -> Result<Ordering, OrdinalError> {
        self.unify_tables(other)?;
        Ok(cmp_same_table(self, other))
    }

    /// Successor ordinal.
    pub fn succ(&self) -> Ordinal {
        let mut o = self.clone();
        o.finite += 1;
        o
    }

    /// Predecessor of a successor ordinal; `None` on zero and limits.
    pub fn pred(&self) -> Option<Ordinal> {
        if self.finite == 0 {
            return None;
        }
        let mut o = self.clone();
        o.finite -= 1;
        Some(o)
    }

    /// Ordinal addition on CNF: terms of `self` strictly below the leading
    /// term of `rhs` are absorbed.
    pub fn add(&self, rhs: &Ordinal) -> Result<Ordinal, OrdinalError> {
        self.unify_tables(rhs)?;
        if rhs.is_zero() {
            return Ok(self.clone());
        }
        if rhs.terms.is_empty() {
            let mut o = self.clone();
            o.finite += rhs.finite;
            return Ok(o);
        }
        let lead = &rhs.terms[0];
        let mut terms: Vec<CnfTerm> = Vec::new();
        for t in &self.terms {
            match term_key_cmp(t, lead) {
                Ordering::Greater => terms.push(t.clone()),
                Ordering::Equal => {
                    // merge coefficients of the equal leading exponent
                    let mut merged = lead.clone();
                    merged.coeff += t.coeff;
                    terms.push(merged);
                    terms.extend(rhs.terms[1..].iter().cloned());
                    return Ok(Ordinal {
                        table: self.table.clone().or_else(|| rhs.table.clone()),
                        terms,
                        finite: rhs.finite,
                    });
                }
                Ordering::Less => break,
            }
        }
        terms.extend(rhs.terms.iter().cloned());
        Ok(Ordinal {
            table: self.table.clone().or_else(|| rhs.table.clone()),
            terms,
            finite: rhs.finite,
        })
    }

    /// `self · ω`-style helper is not needed; the corpus builds `w^k` directly.
    /// Classification into zero / successor / cofinality class of the least term.
    pub fn classify(&self, table: &AtomTable) -> OrdClass {
        if self.is_zero() {
            return OrdClass::Zero;
        }
        if self.finite > 0 {
            return OrdClass::Successor;
        }
        let last = self.terms.last().expect("limit ordinal has a term");
        // cf(atom^p · c) = cf(atom^p); for p = 1 it is the declared class of
        // the atom, for finite successor p it collapses to cf(atom), and for
        // limit p (only over `w`) it is cf(p).
        let mut atom = last.atom;
        let mut power: &Ordinal = &last.power;
        loop {
            if power.is_finite() {
                // finite power >= 1: cofinality of the atom itself
                return match table.atom(atom).cofinality {
                    CofinalityClass::Omega => OrdClass::CofOmega,
                    CofinalityClass::GeOmega1 => OrdClass::CofGeOmega1,
                };
            }
            if power.finite > 0 {
                // successor power w^(q+1) = w^q * w: cofinality of the atom
                return match table.atom(atom).cofinality {
                    CofinalityClass::Omega => OrdClass::CofOmega,
                    CofinalityClass::GeOmega1 => OrdClass::CofGeOmega1,
                };
            }
            // limit power: cf(w^p) = cf(p); recurse into p's least term
            let t = power.terms.last().expect("limit power has a term");
            atom = t.atom;
            power = &t.power;
        }
    }
}

/// Compares two CNF terms by exponent key (atom, power), ignoring coefficients.
fn term_key_cmp(a: &CnfTerm, b: &CnfTerm) -> Ordering {
    a.atom.cmp(&b.atom).then_with(|| cmp_same_table(&a.power, &b.power))
}

fn cmp_same_table(a: &Ordinal, b: &Ordinal) -> Ordering {
    let mut i = 0;
    loop {
        match (a.terms.get(i), b.terms.get(i)) {
            (None, None) => return a.finite.cmp(&b.finite),
            (Some(_), None) => return Ordering::Greater,
            (None, Some(_)) => return Ordering::Less,
            (Some(ta), Some(tb)) => {
                let k = term_key_cmp(ta, tb).then_with(|| ta.coeff.cmp(&tb.coeff));
                if k != Ordering::Equal {
                    return k;
                }
            }
        }
        i += 1;
    }
}

impl PartialEq for Ordinal {
    fn eq(&self, other: &Self) -> bool {
        cmp_same_table(self, other) == Ordering::Equal
    }
}

impl Eq for Ordinal {}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Panics on mismatched atom tables; collections in this crate keep all their
/// ordinals over a single table. External callers should prefer `compare`.
impl std::cmp::Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.unify_tables(other).expect("ordinal comparison across atom tables");
        cmp_same_table(self, other)
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        super::text::write_canonical(self, f)
    }
}
