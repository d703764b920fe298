use super::poset::{CondId, Poset, PosetAutomorphism, PosetError, PosetFilter};
use super::hset::HSet;
use crate::ordinal::CountableSetDescriptor;
use once_cell::sync::Lazy;
use std::cmp::Ordering;
use std::collections::hash_map::DefaultHasher;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NameError {
    #[error("condition {0} is outside the poset")]
    ForeignCondition(CondId),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error("object does not live in an iteration poset")]
    NotAnIterationObject,
}

struct NameNode {
    entries: Box<[(PName, CondId)]>,
    rank: u32,
    hash: u64,
}

/// A forcing name: a finite set of (child name, condition) pairs.
///
/// Names are hash-consed: structurally equal names are the same allocation,
/// so stabilizer computations decide `πẋ = ẋ` by pointer equality. Ordering
/// is structural (rank first, then entries lexicographically), so serialized
/// forms are canonical and run-independent.
#[derive(Clone)]
pub struct PName(Arc<NameNode>);

static INTERN: Lazy<Mutex<HashMap<u64, Vec<PName>>>> = Lazy::new(|| Mutex::new(HashMap::new()));

fn entries_eq(a: &[(PName, CondId)], b: &[(PName, CondId)]) -> bool {
    a.len() == b.len()
        && a.iter()
            .zip(b.iter())
            .all(|((x, p), (y, q))| p == q && Arc::ptr_eq(&x.0, &y.0))
}

impl PName {
    /// The empty name (also the check name of ∅).
    pub fn empty() -> PName {
        PName::make(Vec::new())
    }

    /// Interned constructor; entries are sorted and deduplicated.
    pub fn make(mut entries: Vec<(PName, CondId)>) -> PName {
        entries.sort_by(|(x, p), (y, q)| x.cmp(y).then(p.cmp(q)));
        entries.dedup_by(|(x, p), (y, q)| *p == *q && Arc::ptr_eq(&x.0, &y.0));
        let rank = entries.iter().map(|(c, _)| c.rank() + 1).max().unwrap_or(0);
        let mut h = DefaultHasher::new();
        for (c, p) in &entries {
            h.write_u64(c.0.hash);
            h.write_usize(*p);
        }
        let hash = h.finish();
        let mut table = INTERN.lock().expect("name interner");
        let bucket = table.entry(hash).or_default();
        if let Some(found) = bucket.iter().find(|n| entries_eq(&n.0.entries, &entries)) {
            return found.clone();
        }
        let name = PName(Arc::new(NameNode { entries: entries.into_boxed_slice(), rank, hash }));
        bucket.push(name.clone());
        name
    }

    pub fn entries(&self) -> &[(PName, CondId)] {
        &self.0.entries
    }

    pub fn rank(&self) -> u32 {
        self.0.rank
    }

    pub fn is_empty(&self) -> bool {
        self.0.entries.is_empty()
    }

    /// Every condition id mentioned anywhere in the name tree.
    pub fn conditions(&self) -> HashSet<CondId> {
        let mut out = HashSet::new();
        let mut seen: HashSet<PName> = HashSet::new();
        fn go(n: &PName, out: &mut HashSet<CondId>, seen: &mut HashSet<PName>) {
            if !seen.insert(n.clone()) {
                return;
            }
            for (c, p) in n.entries() {
                out.insert(*p);
                go(c, out, seen);
            }
        }
        go(self, &mut out, &mut seen);
        out
    }

    /// The recursive action π·ẋ = {⟨π·ẏ, π·p⟩ : ⟨ẏ,p⟩ ∈ ẋ}.
    pub fn apply_automorphism(&self, pi: &PosetAutomorphism) -> Result<PName, NameError> {
        let mut memo: HashMap<PName, PName> = HashMap::new();
        fn go(
            n: &PName,
            pi: &PosetAutomorphism,
            memo: &mut HashMap<PName, PName>,
        ) -> Result<PName, NameError> {
            if let Some(m) = memo.get(n) {
                return Ok(m.clone());
            }
            let mut entries = Vec::with_capacity(n.entries().len());
            for (c, p) in n.entries() {
                let pc = go(c, pi, memo)?;
                let pp = pi.apply(*p).map_err(|_| NameError::ForeignCondition(*p))?;
                entries.push((pc, pp));
            }
            let out = PName::make(entries);
            memo.insert(n.clone(), out.clone());
            Ok(out)
        }
        go(self, pi, &mut memo)
    }

    /// Standard recursive valuation ẋ^F = {ẏ^F : ⟨ẏ,p⟩ ∈ ẋ, p ∈ F}.
    pub fn evaluate(&self, filter: &PosetFilter) -> HSet {
        let mut memo: HashMap<PName, HSet> = HashMap::new();
        fn go(n: &PName, f: &PosetFilter, memo: &mut HashMap<PName, HSet>) -> HSet {
            if let Some(v) = memo.get(n) {
                return v.clone();
            }
            let v = HSet::from_elems(
                n.entries()
                    .iter()
                    .filter(|(_, p)| f.contains(*p))
                    .map(|(c, _)| go(c, f, memo)),
            );
            memo.insert(n.clone(), v.clone());
            v
        }
        go(self, filter, &mut memo)
    }

    /// Validated evaluation: checks the filter axioms first.
    pub fn evaluate_checked(&self, poset: &Poset, filter: &PosetFilter) -> Result<HSet, NameError> {
        let members: std::collections::BTreeSet<CondId> = filter.members().collect();
        PosetFilter::new(poset, members)?;
        for c in self.conditions() {
            if !poset.contains(c) {
                return Err(NameError::ForeignCondition(c));
            }
        }
        Ok(self.evaluate(filter))
    }

    /// Recursive support: supp(ẋ) = ⋃ { supp(p) ∪ supp(ẏ) : ⟨ẏ,p⟩ ∈ ẋ },
    /// where condition supports come from the ambient iteration poset.
    pub fn support<F>(&self, condition_support: &F) -> Result<CountableSetDescriptor, NameError>
    where
        F: Fn(CondId) -> Result<CountableSetDescriptor, NameError>,
    {
        let mut memo: HashMap<PName, CountableSetDescriptor> = HashMap::new();
        fn go<F>(
            n: &PName,
            cs: &F,
            memo: &mut HashMap<PName, CountableSetDescriptor>,
        ) -> Result<CountableSetDescriptor, NameError>
        where
            F: Fn(CondId) -> Result<CountableSetDescriptor, NameError>,
        {
            if let Some(v) = memo.get(n) {
                return Ok(v.clone());
            }
            let mut acc = CountableSetDescriptor::empty();
            for (c, p) in n.entries() {
                acc = acc.union(&cs(*p)?);
                acc = acc.union(&go(c, cs, memo)?);
            }
            memo.insert(n.clone(), acc.clone());
            Ok(acc)
        }
        go(self, condition_support, &mut memo)
    }

    /// Canonical JSON: nested entry arrays `[[child, condition-label], ...]`,
    /// sorted by the structural order.
    pub fn to_json(&self, poset: &Poset) -> serde_json::Value {
        serde_json::Value::Array(
            self.entries()
                .iter()
                .map(|(c, p)| {
                    serde_json::Value::Array(vec![
                        c.to_json(poset),
                        serde_json::Value::String(poset.label(*p).into()),
                    ])
                })
                .collect(),
        )
    }

    pub fn from_json(poset: &Poset, v: &serde_json::Value) -> Result<PName, String> {
        let arr = v.as_array().ok_or("name must be an array of entries")?;
        let mut entries = Vec::with_capacity(arr.len());
        for e in arr {
            let pair = e.as_array().filter(|p| p.len() == 2).ok_or("entry must be [child, cond]")?;
            let child = PName::from_json(poset, &pair[0])?;
            let label = pair[1].as_str().ok_or("condition must be a label string")?;
            let cond = poset.lookup(label).ok_or_else(|| format!("unknown condition `{label}`"))?;
            entries.push((child, cond));
        }
        Ok(PName::make(entries))
    }
}

impl PartialEq for PName {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for PName {}

impl Hash for PName {
    fn hash<H: Hasher>(&self, state: &mut H) {
        state.write_u64(self.0.hash);
    }
}

impl PartialOrd for PName {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::cmp::Ord for PName {
    fn cmp(&self, other: &Self) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        self.0
            .rank
            .cmp(&other.0.rank)
            .then_with(|| {
                let a = &self.0.entries;
                let b = &other.0.entries;
                for ((x, p), (y, q)) in a.iter().zip(b.iter()) {
                    let k = x.cmp(y).then(p.cmp(q));
                    if k != Ordering::Equal {
                        return k;
                    }
                }
                a.len().cmp(&b.len())
            })
    }
}

impl fmt::Debug for PName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (c, p)) in self.entries().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "<{c:?},#{p}>")?;
        }
        write!(f, "}}")
    }
}
