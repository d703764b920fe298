use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

/// Cofinality tag for a declared cardinal atom. The iteration arguments only
/// ever branch on "cf = ω" versus "cf ≥ ω₁", so two classes suffice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CofinalityClass {
    Omega,
    GeOmega1,
}

/// A named infinite cardinal atom, e.g. `w`, `w1`, `aleph_w`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CardinalAtom {
    pub name: String,
    pub cofinality: CofinalityClass,
}

/// Index of an atom inside its table; tables list atoms in strictly
/// increasing declared order, so larger index means larger cardinal.
pub type AtomId = usize;

/// The declared atom table. Atom 0 is always `w` with cofinality ω.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AtomTable {
    atoms: Vec<CardinalAtom>,
}

impl AtomTable {
    /// Builds a table from atoms listed in increasing declared order.
    /// The first atom must be `w` with cofinality ω and names must be unique.
    pub fn new(atoms: Vec<CardinalAtom>) -> Result<Arc<Self>, String> {
        if atoms.is_empty() || atoms[0].name != "w" || atoms[0].cofinality != CofinalityClass::Omega
        {
            return Err("atom table must start with atom `w` of cofinality omega".into());
        }
        for (i, a) in atoms.iter().enumerate() {
            if atoms[..i].iter().any(|b| b.name == a.name) {
                return Err(format!("duplicate atom name `{}`", a.name));
            }
        }
        Ok(Arc::new(AtomTable { atoms }))
    }

    /// `w` and `w1` only; enough for everything outside the ℵ_ω examples.
    pub fn standard() -> Arc<Self> {
        Self::new(vec![
            CardinalAtom { name: "w".into(), cofinality: CofinalityClass::Omega },
            CardinalAtom { name: "w1".into(), cofinality: CofinalityClass::GeOmega1 },
        ])
        .expect("standard table is valid")
    }

    /// `w`, `w1` and an `aleph_w` atom tagged ω-cofinal, for the
    /// failure-of-stage-bounding examples.
    pub fn with_aleph_omega() -> Arc<Self> {
        Self::new(vec![
            CardinalAtom { name: "w".into(), cofinality: CofinalityClass::Omega },
            CardinalAtom { name: "aleph_w".into(), cofinality: CofinalityClass::Omega },
            CardinalAtom { name: "w1".into(), cofinality: CofinalityClass::GeOmega1 },
        ])
        .expect("aleph_w table is valid")
    }

    pub fn lookup(&self, name: &str) -> Option<AtomId> {
        self.atoms.iter().position(|a| a.name == name)
    }

    pub fn atom(&self, id: AtomId) -> &CardinalAtom {
        &self.atoms[id]
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }
}

impl fmt::Display for AtomTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<&str> = self.atoms.iter().map(|a| a.name.as_str()).collect();
        write!(f, "[{}]", names.join(", "))
    }
}
