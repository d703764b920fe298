//! Symbolic ordinals in Cantor normal form over a table of declared cardinal
//! atoms, each carrying a two-class cofinality tag, plus the countable-set
//! descriptors and the stage-bounding decision procedure built on top of them.

mod atom;
mod descriptor;
mod ord;
mod text;

pub use atom::{AtomId, AtomTable, CardinalAtom, CofinalityClass};
pub use descriptor::{CountableSetDescriptor, DescriptorError, StageBoundResult, Supremum};
pub use ord::{CnfTerm, OrdClass, Ordinal, OrdinalError};
pub use text::parse_ordinal;
