//! Finite posets, the recursive name calculus with a hash-consed name store,
//! the automorphism action, a decidable (semantic) forcing relation for
//! bounded formulas, two-step composition, and the explicit name
//! constructors used in the preservation arguments.

mod compose;
mod constructors;
mod forces;
mod formula;
mod hset;
mod name;
mod poset;

pub use compose::{two_step_compose, ComposeError, PosetName};
pub use constructors::{
    as_ordered_pair_name, check_name, enumerate_names, forced_subset, ordered_pair_name,
    power_collection_name, range_name, separation_name, tuple_name, union_name, unordered_pair_name,
    NameBudgetError,
};
pub use forces::{forces, ForcesError, Semantics};
pub use formula::{BoundedFormula, FormulaError};
pub use hset::HSet;
pub use name::{NameError, PName};
pub use poset::{CondId, Poset, PosetAutomorphism, PosetError, PosetFilter, PosetViolation, ValidationReport};
