use super::atom::AtomTable;
use super::ord::{OrdClass, Ordinal, OrdinalError};
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DescriptorError {
    #[error("described point {0} is not below the limit {1}")]
    PointNotBelowLambda(String, String),
    #[error("descriptor describes a potentially uncountable set (head {0})")]
    UncountableDescriptor(String),
    #[error("omega-block bound must end in a `w*1`-shaped term, got {0}")]
    BlockBoundShape(String),
    #[error("cofinal tail bound must be a limit of cofinality omega, got {0}")]
    CofinalBoundNotOmegaLimit(String),
    #[error(transparent)]
    Ordinal(#[from] OrdinalError),
}

/// A set of ordinals with a finite presentation: a downward-closed head
/// segment `[0, head)`, finitely many explicit points, finitely many ω-blocks
/// `[bound−ω, bound)` keyed by their bound, and finitely many abstract
/// countable sequences cofinal in a declared ω-cofinal bound. Supports of
/// conditions and names, and the index sets `E` of support kernels `K_E`,
/// are all of this shape.
///
/// Kept in a normal form (head extended through adjacent points and blocks,
/// parts below the head pruned) so set equality is representational equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CountableSetDescriptor {
    head: Ordinal,
    points: BTreeSet<Ordinal>,
    blocks: BTreeSet<Ordinal>,
    cofinals: BTreeSet<Ordinal>,
}

/// Supremum of a described set, with attainment (a maximum) recorded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Supremum {
    pub sup: Ordinal,
    pub attained: bool,
}

/// Outcome of the stage-bounding decision procedure at a limit λ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StageBoundResult {
    /// The described set is bounded strictly below λ by its supremum.
    Bounded(Ordinal),
    /// The described set is cofinal in λ (possible only when cf(λ) = ω).
    CofinalFailure { sup: Ordinal },
}

/// Base of the ω-block `[bound−ω, bound)`: the bound with the coefficient of
/// its final `w*c` term decremented.
fn block_base(bound: &Ordinal) -> Ordinal {
    let table = bound.table().expect("block bound is infinite").clone();
    let mut parts: Vec<(usize, Ordinal, u64)> = bound
        .terms()
        .iter()
        .map(|t| (t.atom, (*t.power).clone(), t.coeff))
        .collect();
    let last = parts.last_mut().expect("block bound has terms");
    debug_assert!(last.0 == 0 && last.1 == Ordinal::finite(1));
    if last.2 == 1 {
        parts.pop();
    } else {
        last.2 -= 1;
    }
    Ordinal::from_parts(&table, parts, 0).expect("decremented bound is well formed")
}

fn is_block_bound(bound: &Ordinal) -> bool {
    if bound.finite_part() != 0 {
        return false;
    }
    match bound.terms().last() {
        Some(t) => t.atom == 0 && *t.power == Ordinal::finite(1),
        None => false,
    }
}

fn block_contains(bound: &Ordinal, o: &Ordinal) -> bool {
    let base = block_base(bound);
    *o >= base && o.terms() == base.terms()
}

impl CountableSetDescriptor {
    pub fn empty() -> Self {
        CountableSetDescriptor {
            head: Ordinal::zero(),
            points: BTreeSet::new(),
            blocks: BTreeSet::new(),
            cofinals: BTreeSet::new(),
        }
    }

    /// The initial segment `[0, bound)`.
    pub fn initial_segment(bound: Ordinal) -> Self {
        let mut d = Self::empty();
        d.head = bound;
        d
    }

    pub fn from_points<I: IntoIterator<Item = Ordinal>>(points: I) -> Self {
        let mut d = Self::empty();
        d.points = points.into_iter().collect();
        d.normalize();
        d
    }

    pub fn singleton(point: Ordinal) -> Self {
        Self::from_points([point])
    }

    /// Adds the ω-block `{bound−ω+n : n<ω}` sitting directly below `bound`.
    pub fn with_block(mut self, bound: Ordinal) -> Result<Self, DescriptorError> {
        if !is_block_bound(&bound) {
            return Err(DescriptorError::BlockBoundShape(bound.to_string()));
        }
        self.blocks.insert(bound);
        self.normalize();
        Ok(self)
    }

    /// Adds an abstract countable strictly increasing sequence cofinal in
    /// `bound`; only the supremum is known, not the elements.
    pub fn with_cofinal(
        mut self,
        table: &AtomTable,
        bound: Ordinal,
    ) -> Result<Self, DescriptorError> {
        if bound.classify(table) != OrdClass::CofOmega {
            return Err(DescriptorError::CofinalBoundNotOmegaLimit(bound.to_string()));
        }
        self.cofinals.insert(bound);
        self.normalize();
        Ok(self)
    }

    pub fn with_point(mut self, point: Ordinal) -> Self {
        self.points.insert(point);
        self.normalize();
        self
    }

    pub fn head(&self) -> &Ordinal {
        &self.head
    }

    pub fn explicit_points(&self) -> &BTreeSet<Ordinal> {
        &self.points
    }

    pub fn block_bounds(&self) -> &BTreeSet<Ordinal> {
        &self.blocks
    }

    pub fn cofinal_bounds(&self) -> &BTreeSet<Ordinal> {
        &self.cofinals
    }

    pub fn is_empty(&self) -> bool {
        self.head.is_zero()
            && self.points.is_empty()
            && self.blocks.is_empty()
            && self.cofinals.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.head.is_finite() && self.blocks.is_empty() && self.cofinals.is_empty()
    }

    /// True when the descriptor cannot denote an uncountable set: the head is
    /// at worst an ω-cofinal limit. All other components are countable.
    pub fn is_certainly_countable(&self, table: &AtomTable) -> bool {
        self.head.classify(table) != OrdClass::CofGeOmega1
    }

    fn normalize(&mut self) {
        loop {
            if self.points.remove(&self.head) {
                self.head = self.head.succ();
                continue;
            }
            let absorb = self
                .blocks
                .iter()
                .find(|b| block_base(b) <= self.head)
                .cloned();
            if let Some(bound) = absorb {
                self.blocks.remove(&bound);
                if bound > self.head {
                    self.head = bound;
                }
                continue;
            }
            break;
        }
        let head = self.head.clone();
        self.points.retain(|p| *p >= head);
        self.cofinals.retain(|c| *c > head);
        let in_block: Vec<Ordinal> = self
            .points
            .iter()
            .filter(|p| self.blocks.iter().any(|b| block_contains(b, p)))
            .cloned()
            .collect();
        for p in in_block {
            self.points.remove(&p);
        }
    }

    pub fn contains(&self, o: &Ordinal) -> bool {
        *o < self.head
            || self.points.contains(o)
            || self.blocks.iter().any(|b| block_contains(b, o))
    }

    /// Exact subset test under the abstraction that cofinal tails are opaque:
    /// a cofinal tail is covered only by the identical tail or by a head
    /// segment reaching its bound.
    pub fn subset_of(&self, other: &CountableSetDescriptor) -> bool {
        if self.head > other.head {
            return false;
        }
        for p in &self.points {
            if !other.contains(p) {
                return false;
            }
        }
        for b in &self.blocks {
            if !(*b <= other.head || other.blocks.contains(b)) {
                return false;
            }
        }
        for c in &self.cofinals {
            if !(*c <= other.head || other.cofinals.contains(c)) {
                return false;
            }
        }
        true
    }

    pub fn union(&self, other: &CountableSetDescriptor) -> CountableSetDescriptor {
        let mut d = self.clone();
        if other.head > d.head {
            d.head = other.head.clone();
        }
        d.points.extend(other.points.iter().cloned());
        d.blocks.extend(other.blocks.iter().cloned());
        d.cofinals.extend(other.cofinals.iter().cloned());
        d.normalize();
        d
    }

    pub fn union_all<'a, I: IntoIterator<Item = &'a CountableSetDescriptor>>(parts: I) -> Self {
        let mut acc = CountableSetDescriptor::empty();
        for p in parts {
            acc = acc.union(p);
        }
        acc
    }

    /// Supremum of the described set, with attainment. Empty descriptor: 0.
    pub fn supremum(&self) -> Supremum {
        let mut best: Option<Supremum> = None;
        let mut offer = |sup: Ordinal, attained: bool| match &mut best {
            None => best = Some(Supremum { sup, attained }),
            Some(b) => {
                if sup > b.sup {
                    *b = Supremum { sup, attained };
                } else if sup == b.sup && attained {
                    b.attained = true;
                }
            }
        };
        if !self.head.is_zero() {
            match self.head.pred() {
                Some(p) => offer(p, true),
                None => offer(self.head.clone(), false),
            }
        }
        if let Some(p) = self.points.iter().next_back() {
            offer(p.clone(), true);
        }
        for b in &self.blocks {
            offer(b.clone(), false);
        }
        for c in &self.cofinals {
            offer(c.clone(), false);
        }
        best.unwrap_or(Supremum { sup: Ordinal::zero(), attained: false })
    }

    /// Least β with the described set ⊆ [0, β): the supremum, bumped by one
    /// exactly when the supremum is attained.
    pub fn strict_bound(&self) -> Ordinal {
        let s = self.supremum();
        if s.attained {
            s.sup.succ()
        } else {
            s.sup
        }
    }

    /// Ascending enumeration of the concrete part of the set (cofinal tails
    /// carry no concrete elements and are skipped). Elements are produced in
    /// increasing order, so anything above an infinite component sits beyond
    /// every finite prefix.
    pub fn iter_ascending(&self) -> AscendingIter<'_> {
        AscendingIter {
            head: &self.head,
            head_next: if self.head.is_zero() { None } else { Some(Ordinal::zero()) },
            points: self.points.iter().collect(),
            blocks: self.blocks.iter().map(|b| (b.clone(), block_base(b))).collect(),
        }
    }

    /// The stage-bounding decision procedure at λ. Precondition: every
    /// described point lies strictly below λ and the set is countable.
    /// `Bounded(sup)` when the supremum stays below λ; `CofinalFailure`
    /// when the set is cofinal in λ (possible only at cf(λ) = ω).
    pub fn stage_bound(
        &self,
        table: &AtomTable,
        lambda: &Ordinal,
    ) -> Result<StageBoundResult, DescriptorError> {
        if !self.is_certainly_countable(table) {
            return Err(DescriptorError::UncountableDescriptor(self.head.to_string()));
        }
        let not_below =
            |o: &Ordinal| DescriptorError::PointNotBelowLambda(o.to_string(), lambda.to_string());
        if self.head > *lambda {
            return Err(not_below(&self.head));
        }
        if let Some(p) = self.points.iter().next_back() {
            if p >= lambda {
                return Err(not_below(p));
            }
        }
        for b in &self.blocks {
            if b > lambda {
                return Err(not_below(b));
            }
        }
        for c in &self.cofinals {
            if c > lambda {
                return Err(not_below(c));
            }
        }
        let s = self.supremum();
        if s.sup < *lambda {
            Ok(StageBoundResult::Bounded(s.sup))
        } else if s.sup == *lambda && !s.attained {
            Ok(StageBoundResult::CofinalFailure { sup: s.sup })
        } else {
            Err(not_below(&s.sup))
        }
    }

    /// Canonical JSON value: all ordinals in canonical text form.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "head": self.head.to_string(),
            "points": self.points.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "blocks": self.blocks.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
            "cofinals": self.cofinals.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(
        table: &Arc<AtomTable>,
        v: &serde_json::Value,
    ) -> Result<Self, DescriptorError> {
        let field = |k: &str| -> Result<Vec<Ordinal>, DescriptorError> {
            match v.get(k) {
                None => Ok(Vec::new()),
                Some(serde_json::Value::Array(xs)) => xs
                    .iter()
                    .map(|x| {
                        let s = x.as_str().ok_or_else(|| {
                            DescriptorError::Ordinal(OrdinalError::Parse(format!(
                                "descriptor field `{k}` must hold strings"
                            )))
                        })?;
                        Ok(super::text::parse_ordinal(table, s)?)
                    })
                    .collect(),
                Some(_) => Err(DescriptorError::Ordinal(OrdinalError::Parse(format!(
                    "descriptor field `{k}` must be an array"
                )))),
            }
        };
        let head = match v.get("head").and_then(|h| h.as_str()) {
            Some(s) => super::text::parse_ordinal(table, s)?,
            None => Ordinal::zero(),
        };
        let mut d = CountableSetDescriptor::initial_segment(head);
        for p in field("points")? {
            d = d.with_point(p);
        }
        for b in field("blocks")? {
            d = d.with_block(b)?;
        }
        for c in field("cofinals")? {
            d = d.with_cofinal(table, c)?;
        }
        Ok(d)
    }
}

pub struct AscendingIter<'a> {
    head: &'a Ordinal,
    head_next: Option<Ordinal>,
    points: Vec<&'a Ordinal>,
    blocks: Vec<(Ordinal, Ordinal)>,
}

impl Iterator for AscendingIter<'_> {
    type Item = Ordinal;

    fn next(&mut self) -> Option<Ordinal> {
        let mut best: Option<(usize, Ordinal)> = None;
        let mut offer = |slot: usize, o: Ordinal| match &best {
            None => best = Some((slot, o)),
            Some((_, b)) if o < *b => best = Some((slot, o)),
            _ => {}
        };
        if let Some(h) = &self.head_next {
            offer(0, h.clone());
        }
        if let Some(p) = self.points.first() {
            offer(1, (*p).clone());
        }
        for (i, (_, next)) in self.blocks.iter().enumerate() {
            offer(2 + i, next.clone());
        }
        let (slot, o) = best?;
        match slot {
            0 => {
                let n = o.succ();
                self.head_next = if n < *self.head { Some(n) } else { None };
            }
            1 => {
                self.points.remove(0);
            }
            i => {
                self.blocks[i - 2].1 = o.succ();
            }
        }
        Some(o)
    }
}

impl fmt::Display for CountableSetDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if !self.head.is_zero() {
            parts.push(format!("[0, {})", self.head));
        }
        if !self.points.is_empty() {
            let pts: Vec<String> = self.points.iter().map(|p| p.to_string()).collect();
            parts.push(format!("{{{}}}", pts.join(", ")));
        }
        for b in &self.blocks {
            parts.push(format!("[{}, {})", block_base(b), b));
        }
        for c in &self.cofinals {
            parts.push(format!("cof({c})"));
        }
        if parts.is_empty() {
            write!(f, "{{}}")
        } else {
            write!(f, "{}", parts.join(" u "))
        }
    }
}
