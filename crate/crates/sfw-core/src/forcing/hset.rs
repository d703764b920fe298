use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// A hereditary set: the value domain for name valuations and bounded-formula
/// semantics. Canonical (sorted, deduplicated) by construction.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HSet(Arc<BTreeSet<HSet>>);

impl HSet {
    pub fn empty() -> HSet {
        HSet(Arc::new(BTreeSet::new()))
    }

    pub fn from_elems<I: IntoIterator<Item = HSet>>(elems: I) -> HSet {
        HSet(Arc::new(elems.into_iter().collect()))
    }

    pub fn singleton(x: HSet) -> HSet {
        Self::from_elems([x])
    }

    /// von Neumann natural: n = {0, 1, ..., n-1}.
    pub fn nat(n: u64) -> HSet {
        let mut cur = HSet::empty();
        let mut elems = BTreeSet::new();
        for _ in 0..n {
            elems.insert(cur.clone());
            cur = HSet(Arc::new(elems.clone()));
        }
        cur
    }

    /// Kuratowski pair {{a},{a,b}}.
    pub fn kpair(a: HSet, b: HSet) -> HSet {
        let fst = HSet::singleton(a.clone());
        let snd = HSet::from_elems([a, b]);
        HSet::from_elems([fst, snd])
    }

    /// Decodes a Kuratowski pair; `None` when the shape does not match.
    pub fn as_kpair(&self) -> Option<(HSet, HSet)> {
        let elems: Vec<&HSet> = self.0.iter().collect();
        match elems.as_slice() {
            [s] => {
                // {{a}} encodes (a, a)
                let inner: Vec<&HSet> = s.0.iter().collect();
                match inner.as_slice() {
                    [a] => Some(((*a).clone(), (*a).clone())),
                    _ => None,
                }
            }
            [s, t] => {
                let si: Vec<&HSet> = s.0.iter().collect();
                let ti: Vec<&HSet> = t.0.iter().collect();
                // one of the two must be the singleton {a}
                let (one, two) = match (si.as_slice(), ti.as_slice()) {
                    ([a], [x, y]) => (a, (x, y)),
                    ([x, y], [a]) => (a, (x, y)),
                    _ => return None,
                };
                let (x, y) = two;
                if x == one {
                    Some(((*one).clone(), (*y).clone()))
                } else if y == one {
                    Some(((*one).clone(), (*x).clone()))
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// Decodes a von Neumann natural; `None` when the set is not one.
    pub fn as_nat(&self) -> Option<u64> {
        let n = self.0.len() as u64;
        let mut expect = HSet::empty();
        let mut elems = BTreeSet::new();
        for e in self.0.iter() {
            if *e != expect {
                return None;
            }
            elems.insert(expect.clone());
            expect = HSet(Arc::new(elems.clone()));
        }
        Some(n)
    }

    pub fn elements(&self) -> impl Iterator<Item = &HSet> {
        self.0.iter()
    }

    pub fn contains(&self, x: &HSet) -> bool {
        self.0.contains(x)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Debug for HSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for HSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = self.as_nat() {
            return write!(f, "{n}");
        }
        write!(f, "{{")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nats_decode() {
        for n in 0..6 {
            assert_eq!(HSet::nat(n).as_nat(), Some(n));
        }
        assert_eq!(HSet::singleton(HSet::nat(1)).as_nat(), None);
    }

    #[test]
    fn kpair_round_trip() {
        let a = HSet::nat(2);
        let b = HSet::nat(5);
        assert_eq!(HSet::kpair(a.clone(), b.clone()).as_kpair(), Some((a.clone(), b.clone())));
        assert_eq!(HSet::kpair(a.clone(), a.clone()).as_kpair(), Some((a.clone(), a)));
    }

    #[test]
    fn display_prefers_nat_form() {
        assert_eq!(HSet::nat(3).to_string(), "3");
        assert_eq!(
            HSet::from_elems([HSet::empty(), HSet::singleton(HSet::nat(1))]).to_string(),
            "{0, {1}}"
        );
    }
}
