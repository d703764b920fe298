use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

pub type CondId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("condition {0} is outside the poset")]
    ForeignCondition(CondId),
    #[error("map is not a bijection on conditions")]
    NotABijection,
    #[error("map does not preserve the order both ways")]
    NotOrderPreserving,
    #[error("map moves the top condition")]
    MovesTop,
    #[error("filter is invalid: {0}")]
    InvalidFilter(String),
}

/// A finite forcing notion: conditions with a reflexive, transitive,
/// antisymmetric `≤` and a unique top.
#[derive(Clone, PartialEq, Eq)]
pub struct Poset {
    labels: Vec<String>,
    // le[a * len + b] is true iff a ≤ b
    le: Vec<bool>,
    top: CondId,
}

/// One named axiom violation, with the witnessing conditions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum PosetViolation {
    Reflexivity { condition: String },
    Transitivity { a: String, b: String, c: String },
    Antisymmetry { a: String, b: String },
    UniqueTop { claimed: String, not_below: String },
}

/// Report-style validation outcome: lists every violated axiom.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<PosetViolation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl Poset {
    /// Builds a poset from labels, the list of strict-or-equal pairs
    /// (a ≤ b, by index), and the designated top. Reflexive pairs are
    /// implied. No validation; call `validate` for the report.
    pub fn from_parts(labels: Vec<String>, le_pairs: &[(CondId, CondId)], top: CondId) -> Poset {
        let n = labels.len();
        let mut le = vec![false; n * n];
        for i in 0..n {
            le[i * n + i] = true;
        }
        for &(a, b) in le_pairs {
            le[a * n + b] = true;
        }
        Poset { labels, le, top }
    }

    /// As `from_parts` but without the implied reflexive pairs, for building
    /// deliberately defective relations.
    pub fn from_raw_relation(labels: Vec<String>, le: Vec<bool>, top: CondId) -> Poset {
        assert_eq!(le.len(), labels.len() * labels.len());
        Poset { labels, le, top }
    }

    /// The one-point poset {1}.
    pub fn trivial() -> Poset {
        Poset::from_parts(vec!["1".into()], &[], 0)
    }

    /// `n` pairwise-incomparable conditions below a top.
    pub fn antichain_with_top(n: usize) -> Poset {
        let mut labels: Vec<String> = (0..n).map(|i| format!("a{i}")).collect();
        labels.push("1".into());
        let top = n;
        let pairs: Vec<(CondId, CondId)> = (0..n).map(|i| (i, top)).collect();
        Poset::from_parts(labels, &pairs, top)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn top(&self) -> CondId {
        self.top
    }

    pub fn label(&self, c: CondId) -> &str {
        &self.labels[c]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn lookup(&self, label: &str) -> Option<CondId> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn le(&self, a: CondId, b: CondId) -> bool {
        self.le[a * self.len() + b]
    }

    pub fn conditions(&self) -> impl Iterator<Item = CondId> {
        0..self.len()
    }

    pub fn contains(&self, c: CondId) -> bool {
        c < self.len()
    }

    /// Lists every violated axiom, or none when all hold.
    pub fn validate(&self) -> ValidationReport {
        let n = self.len();
        let mut violations = Vec::new();
        for a in 0..n {
            if !self.le(a, a) {
                violations.push(PosetViolation::Reflexivity { condition: self.labels[a].clone() });
            }
        }
        for a in 0..n {
            for b in 0..n {
                if a != b && self.le(a, b) && self.le(b, a) {
                    if a < b {
                        violations.push(PosetViolation::Antisymmetry {
                            a: self.labels[a].clone(),
                            b: self.labels[b].clone(),
                        });
                    }
                    continue;
                }
            }
        }
        for a in 0..n {
            for b in 0..n {
                if !self.le(a, b) {
                    continue;
                }
                for c in 0..n {
                    if self.le(b, c) && !self.le(a, c) {
                        violations.push(PosetViolation::Transitivity {
                            a: self.labels[a].clone(),
                            b: self.labels[b].clone(),
                            c: self.labels[c].clone(),
                        });
                    }
                }
            }
        }
        for a in 0..n {
            if !self.le(a, self.top) {
                violations.push(PosetViolation::UniqueTop {
                    claimed: self.labels[self.top].clone(),
                    not_below: self.labels[a].clone(),
                });
            }
        }
        ValidationReport { violations }
    }

    /// Minimal conditions; on a finite poset the maximal filters are exactly
    /// their up-sets.
    pub fn minimal_conditions(&self) -> Vec<CondId> {
        self.conditions()
            .filter(|&m| self.conditions().all(|d| d == m || !self.le(d, m)))
            .collect()
    }

    pub fn maximal_filters(&self) -> Vec<PosetFilter> {
        self.minimal_conditions()
            .into_iter()
            .map(|m| PosetFilter {
                members: self.conditions().filter(|&c| self.le(m, c)).collect(),
            })
            .collect()
    }

    /// All order automorphisms fixing the top, by exhaustive search over
    /// rank-respecting permutations. Desk scale only.
    pub fn automorphisms(&self) -> Vec<PosetAutomorphism> {
        let n = self.len();
        let mut out = Vec::new();
        let mut perm: Vec<Option<CondId>> = vec![None; n];
        let mut used = vec![false; n];
        fn go(
            p: &Poset,
            perm: &mut Vec<Option<CondId>>,
            used: &mut Vec<bool>,
            i: usize,
            out: &mut Vec<PosetAutomorphism>,
        ) {
            let n = p.len();
            if i == n {
                let fwd: Vec<CondId> = perm.iter().map(|x| x.unwrap()).collect();
                if let Ok(a) = PosetAutomorphism::new(p, fwd) {
                    out.push(a);
                }
                return;
            }
            for j in 0..n {
                if used[j] {
                    continue;
                }
                // partial order-preservation pruning against already-placed images
                let ok = (0..i).all(|k| {
                    let jk = perm[k].unwrap();
                    p.le(i, k) == p.le(j, jk) && p.le(k, i) == p.le(jk, j)
                });
                if !ok {
                    continue;
                }
                perm[i] = Some(j);
                used[j] = true;
                go(p, perm, used, i + 1, out);
                perm[i] = None;
                used[j] = false;
            }
        }
        go(self, &mut perm, &mut used, 0, &mut out);
        out
    }
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poset({} conditions, top {})", self.len(), self.labels[self.top])
    }
}

/// An order automorphism of a finite poset, fixing the top.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PosetAutomorphism {
    forward: Vec<CondId>,
    inverse: Vec<CondId>,
}

impl PosetAutomorphism {
    pub fn new(poset: &Poset, forward: Vec<CondId>) -> Result<PosetAutomorphism, PosetError> {
        let n = poset.len();
        if forward.len() != n {
            return Err(PosetError::NotABijection);
        }
        let mut inverse = vec![usize::MAX; n];
        for (i, &j) in forward.iter().enumerate() {
            if j >= n || inverse[j] != usize::MAX {
                return Err(PosetError::NotABijection);
            }
            inverse[j] = i;
        }
        for a in 0..n {
            for b in 0..n {
                if poset.le(a, b) != poset.le(forward[a], forward[b]) {
                    return Err(PosetError::NotOrderPreserving);
                }
            }
        }
        if forward[poset.top()] != poset.top() {
            return Err(PosetError::MovesTop);
        }
        Ok(PosetAutomorphism { forward, inverse })
    }

    pub fn identity(n: usize) -> PosetAutomorphism {
        PosetAutomorphism { forward: (0..n).collect(), inverse: (0..n).collect() }
    }

    pub fn len(&self) -> usize {
        self.forward.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forward.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.forward.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn apply(&self, c: CondId) -> Result<CondId, PosetError> {
        self.forward.get(c).copied().ok_or(PosetError::ForeignCondition(c))
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &PosetAutomorphism) -> PosetAutomorphism {
        let forward: Vec<CondId> = other.forward.iter().map(|&c| self.forward[c]).collect();
        let inverse: Vec<CondId> = self.inverse.iter().map(|&c| other.inverse[c]).collect();
        PosetAutomorphism { forward, inverse }
    }

    pub fn inverse(&self) -> PosetAutomorphism {
        PosetAutomorphism { forward: self.inverse.clone(), inverse: self.forward.clone() }
    }
}

/// A filter on a finite poset: upward closed and downward directed. Maximal
/// filters stand in for generics; on a finite poset they meet every dense set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PosetFilter {
    members: BTreeSet<CondId>,
}

impl PosetFilter {
    pub fn new(poset: &Poset, members: BTreeSet<CondId>) -> Result<PosetFilter, PosetError> {
        for &c in &members {
            if !poset.contains(c) {
                return Err(PosetError::ForeignCondition(c));
            }
        }
        if members.is_empty() {
            return Err(PosetError::InvalidFilter("empty".into()));
        }
        for &c in &members {
            for d in poset.conditions() {
                if poset.le(c, d) && !members.contains(&d) {
                    return Err(PosetError::InvalidFilter(format!(
                        "not upward closed at {}",
                        poset.label(d)
                    )));
                }
            }
        }
        for &a in &members {
            for &b in &members {
                let directed = members
                    .iter()
                    .any(|&c| poset.le(c, a) && poset.le(c, b));
                if !directed {
                    return Err(PosetError::InvalidFilter(format!(
                        "no lower bound for {} and {}",
                        poset.label(a),
                        poset.label(b)
                    )));
                }
            }
        }
        Ok(PosetFilter { members })
    }

    pub fn contains(&self, c: CondId) -> bool {
        self.members.contains(&c)
    }

    pub fn members(&self) -> impl Iterator<Item = CondId> + '_ {
        self.members.iter().copied()
    }

    /// The image filter {π(c) : c ∈ F}.
    pub fn map(&self, pi: &PosetAutomorphism) -> PosetFilter {
        PosetFilter { members: self.members.iter().map(|&c| pi.forward[c]).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_point_poset_is_valid() {
        assert!(Poset::trivial().validate().is_valid());
    }

    #[test]
    fn two_incomparable_points_plus_top_is_valid() {
        assert!(Poset::antichain_with_top(2).validate().is_valid());
    }

    #[test]
    fn missing_reflexive_pair_is_reported() {
        let labels = vec!["a".into(), "1".into()];
        let mut le = vec![false; 4];
        le[0 * 2 + 1] = true; // a ≤ 1
        le[1 * 2 + 1] = true; // 1 ≤ 1, but a ≤ a missing
        let p = Poset::from_raw_relation(labels, le, 1);
        let report = p.validate();
        assert!(!report.is_valid());
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, PosetViolation::Reflexivity { condition } if condition == "a")));
    }

    #[test]
    fn maximal_filters_are_upsets_of_minimals() {
        let p = Poset::antichain_with_top(2);
        let fs = p.maximal_filters();
        assert_eq!(fs.len(), 2);
        for f in &fs {
            assert_eq!(f.members().count(), 2);
            assert!(f.contains(p.top()));
        }
    }

    #[test]
    fn antichain_automorphisms_are_atom_permutations() {
        let p = Poset::antichain_with_top(3);
        assert_eq!(p.automorphisms().len(), 6);
        let chain = Poset::from_parts(vec!["b".into(), "a".into(), "1".into()], &[(0, 1), (0, 2), (1, 2)], 2);
        assert_eq!(chain.automorphisms().len(), 1);
    }

    #[test]
    fn filter_validation_catches_defects() {
        let p = Poset::antichain_with_top(2);
        // {a0, a1, top} is upward closed but not directed
        let all: BTreeSet<CondId> = p.conditions().collect();
        assert!(PosetFilter::new(&p, all).is_err());
        // {a0} alone is not upward closed
        assert!(PosetFilter::new(&p, [0].into_iter().collect()).is_err());
        assert!(PosetFilter::new(&p, [0, 2].into_iter().collect()).is_ok());
    }
}
