//! Workbench for symmetric forcing systems: filters of subgroups with
//! ω₁-completion, a decidable forcing relation on finite posets, the
//! countable-support limit-filter construction in both cofinality regimes,
//! hereditarily-symmetric-name audits, and machine-checkable impossibility
//! certificates for the iterated unordered-pairs application.

pub mod filters;
pub mod forcing;
pub mod groups;
pub mod ordinal;
