use super::hset::HSet;
use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("variable v{0} is unbound (environment has {1} slots)")]
    UnboundVariable(usize, usize),
}

/// Bounded formulas over an environment of names: membership, equality,
/// negation, conjunction, and ∀v ∈ (variable) quantification. Variables are
/// absolute indices into the evaluation stack; `ForallIn` binds the next
/// index on top of the current stack.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BoundedFormula {
    Member { lhs: usize, rhs: usize },
    Equal { lhs: usize, rhs: usize },
    Not { body: Box<BoundedFormula> },
    And { lhs: Box<BoundedFormula>, rhs: Box<BoundedFormula> },
    ForallIn { set: usize, body: Box<BoundedFormula> },
}

impl BoundedFormula {
    pub fn member(lhs: usize, rhs: usize) -> BoundedFormula {
        BoundedFormula::Member { lhs, rhs }
    }

    pub fn equal(lhs: usize, rhs: usize) -> BoundedFormula {
        BoundedFormula::Equal { lhs, rhs }
    }

    pub fn not(body: BoundedFormula) -> BoundedFormula {
        BoundedFormula::Not { body: Box::new(body) }
    }

    pub fn and(lhs: BoundedFormula, rhs: BoundedFormula) -> BoundedFormula {
        BoundedFormula::And { lhs: Box::new(lhs), rhs: Box::new(rhs) }
    }

    pub fn forall_in(set: usize, body: BoundedFormula) -> BoundedFormula {
        BoundedFormula::ForallIn { set, body: Box::new(body) }
    }

    /// Static scope check against an environment of `env_len` names.
    pub fn check_scope(&self, env_len: usize) -> Result<(), FormulaError> {
        fn go(f: &BoundedFormula, depth: usize) -> Result<(), FormulaError> {
            let check = |v: usize| {
                if v < depth {
                    Ok(())
                } else {
                    Err(FormulaError::UnboundVariable(v, depth))
                }
            };
            match f {
                BoundedFormula::Member { lhs, rhs } | BoundedFormula::Equal { lhs, rhs } => {
                    check(*lhs)?;
                    check(*rhs)
                }
                BoundedFormula::Not { body } => go(body, depth),
                BoundedFormula::And { lhs, rhs } => {
                    go(lhs, depth)?;
                    go(rhs, depth)
                }
                BoundedFormula::ForallIn { set, body } => {
                    check(*set)?;
                    go(body, depth + 1)
                }
            }
        }
        go(self, env_len)
    }

    /// Classical evaluation over hereditary-set values.
    pub fn eval(&self, stack: &mut Vec<HSet>) -> Result<bool, FormulaError> {
        let var = |stack: &Vec<HSet>, v: usize| -> Result<HSet, FormulaError> {
            stack.get(v).cloned().ok_or(FormulaError::UnboundVariable(v, stack.len()))
        };
        match self {
            BoundedFormula::Member { lhs, rhs } => {
                Ok(var(stack, *rhs)?.contains(&var(stack, *lhs)?))
            }
            BoundedFormula::Equal { lhs, rhs } => Ok(var(stack, *lhs)? == var(stack, *rhs)?),
            BoundedFormula::Not { body } => Ok(!body.eval(stack)?),
            BoundedFormula::And { lhs, rhs } => Ok(lhs.eval(stack)? && rhs.eval(stack)?),
            BoundedFormula::ForallIn { set, body } => {
                let s = var(stack, *set)?;
                for e in s.elements() {
                    stack.push(e.clone());
                    let ok = body.eval(stack)?;
                    stack.pop();
                    if !ok {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    /// Syntactic height with atoms at depth 1.
    pub fn depth(&self) -> usize {
        match self {
            BoundedFormula::Member { .. } | BoundedFormula::Equal { .. } => 1,
            BoundedFormula::Not { body } => 1 + body.depth(),
            BoundedFormula::And { lhs, rhs } => 1 + lhs.depth().max(rhs.depth()),
            BoundedFormula::ForallIn { body, .. } => 1 + body.depth(),
        }
    }
}

impl fmt::Display for BoundedFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundedFormula::Member { lhs, rhs } => write!(f, "v{lhs} in v{rhs}"),
            BoundedFormula::Equal { lhs, rhs } => write!(f, "v{lhs} = v{rhs}"),
            BoundedFormula::Not { body } => write!(f, "not({body})"),
            BoundedFormula::And { lhs, rhs } => write!(f, "({lhs} and {rhs})"),
            BoundedFormula::ForallIn { set, body } => write!(f, "forall v in v{set}.({body})"),
        }
    }
}
