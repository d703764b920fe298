use super::formula::{BoundedFormula, FormulaError};
use super::hset::HSet;
use super::name::{NameError, PName};
use super::poset::{CondId, Poset, PosetFilter};
use std::cell::RefCell;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ForcesError {
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error(transparent)]
    Name(#[from] NameError),
}

/// Semantic forcing over one finite poset: `p ⊩ φ(env)` iff φ holds of the
/// valuations under every maximal filter containing `p`. Valuations are
/// memoized per (name, filter).
pub struct Semantics<'p> {
    poset: &'p Poset,
    minimals: Vec<CondId>,
    filters: Vec<PosetFilter>,
    val_memo: RefCell<HashMap<(PName, usize), HSet>>,
}

impl<'p> Semantics<'p> {
    pub fn new(poset: &'p Poset) -> Semantics<'p> {
        let minimals = poset.minimal_conditions();
        let filters = poset.maximal_filters();
        Semantics { poset, minimals, filters, val_memo: RefCell::new(HashMap::new()) }
    }

    pub fn poset(&self) -> &Poset {
        self.poset
    }

    pub fn filter_count(&self) -> usize {
        self.filters.len()
    }

    pub fn filters(&self) -> &[PosetFilter] {
        &self.filters
    }

    /// Valuation of a name under the i-th maximal filter, memoized.
    pub fn value(&self, name: &PName, filter_idx: usize) -> HSet {
        if let Some(v) = self.val_memo.borrow().get(&(name.clone(), filter_idx)) {
            return v.clone();
        }
        let v = HSet::from_elems(
            name.entries()
                .iter()
                .filter(|(_, p)| self.filters[filter_idx].contains(*p))
                .map(|(c, _)| self.value(c, filter_idx)),
        );
        self.val_memo.borrow_mut().insert((name.clone(), filter_idx), v.clone());
        v
    }

    fn check_env(&self, env: &[PName]) -> Result<(), ForcesError> {
        for n in env {
            for c in n.conditions() {
                if !self.poset.contains(c) {
                    return Err(ForcesError::Name(NameError::ForeignCondition(c)));
                }
            }
        }
        Ok(())
    }

    /// `p ⊩ φ(env)` by exhaustive quantification over maximal filters.
    pub fn forces(
        &self,
        p: CondId,
        phi: &BoundedFormula,
        env: &[PName],
    ) -> Result<bool, ForcesError> {
        phi.check_scope(env.len())?;
        self.check_env(env)?;
        if !self.poset.contains(p) {
            return Err(ForcesError::Name(NameError::ForeignCondition(p)));
        }
        for (i, m) in self.minimals.iter().enumerate() {
            if !self.poset.le(*m, p) {
                continue;
            }
            let mut stack: Vec<HSet> = env.iter().map(|n| self.value(n, i)).collect();
            if !phi.eval(&mut stack)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// The forcing vector of φ(env): for each condition, whether it forces φ.
    /// One sweep over the maximal filters.
    pub fn forcing_vector(
        &self,
        phi: &BoundedFormula,
        env: &[PName],
    ) -> Result<Vec<bool>, ForcesError> {
        phi.check_scope(env.len())?;
        self.check_env(env)?;
        let mut truth = Vec::with_capacity(self.filters.len());
        for i in 0..self.filters.len() {
            let mut stack: Vec<HSet> = env.iter().map(|n| self.value(n, i)).collect();
            truth.push(phi.eval(&mut stack)?);
        }
        Ok(self
            .poset
            .conditions()
            .map(|p| {
                self.minimals
                    .iter()
                    .enumerate()
                    .all(|(i, m)| !self.poset.le(*m, p) || truth[i])
            })
            .collect())
    }
}

/// Convenience entry point matching the operation signature.
pub fn forces(
    poset: &Poset,
    p: CondId,
    phi: &BoundedFormula,
    env: &[PName],
) -> Result<bool, ForcesError> {
    Semantics::new(poset).forces(p, phi, env)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equality_is_forced_by_top_on_trivial_poset() {
        let p = Poset::trivial();
        let x = PName::make(vec![(PName::empty(), 0)]);
        let phi = BoundedFormula::equal(0, 0);
        assert!(forces(&p, p.top(), &phi, &[x]).unwrap());
    }

    #[test]
    fn membership_forced_by_top() {
        let p = Poset::trivial();
        let x = PName::empty();
        let y = PName::make(vec![(x.clone(), p.top())]);
        let phi = BoundedFormula::member(0, 1);
        assert!(forces(&p, p.top(), &phi, &[x, y]).unwrap());
    }

    #[test]
    fn condition_outside_filter_blocks_membership() {
        // oracle: enumerate both maximal filters of the two-atom poset; the
        // filter containing b excludes a, so ẏ evaluates empty there
        let p = Poset::antichain_with_top(2);
        let (a, b) = (0, 1);
        let y = PName::make(vec![(PName::empty(), a)]);
        let phi = BoundedFormula::member(0, 1);
        let env = [PName::empty(), y];
        assert!(!forces(&p, b, &phi, &env).unwrap());
        assert!(forces(&p, a, &phi, &env).unwrap());
        assert!(!forces(&p, p.top(), &phi, &env).unwrap());
    }

    #[test]
    fn unbound_variables_error() {
        let p = Poset::trivial();
        let phi = BoundedFormula::member(0, 3);
        assert!(matches!(
            forces(&p, 0, &phi, &[PName::empty()]),
            Err(ForcesError::Formula(FormulaError::UnboundVariable(3, 1)))
        ));
    }

    #[test]
    fn forcing_vector_agrees_with_pointwise_forces() {
        let p = Poset::antichain_with_top(2);
        let y = PName::make(vec![(PName::empty(), 0)]);
        let phi = BoundedFormula::member(0, 1);
        let env = [PName::empty(), y];
        let sem = Semantics::new(&p);
        let vec = sem.forcing_vector(&phi, &env).unwrap();
        for c in p.conditions() {
            assert_eq!(vec[c], sem.forces(c, &phi, &env).unwrap());
        }
    }
}
