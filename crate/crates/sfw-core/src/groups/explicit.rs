use super::GroupError;
use crate::forcing::{PName, Poset, PosetAutomorphism};
use std::collections::HashMap;
use std::sync::Arc;

/// Hard cap on explicit group order; the brute-force lattice oracles in the
/// filters module enumerate full subgroup lattices below this size.
pub const MAX_EXPLICIT_ORDER: usize = 24;

/// A subgroup of an explicit group as a bitmask over element indices.
pub type SubgroupMask = u32;

/// A finite group of poset automorphisms, closed under composition and
/// inverse, with precomputed multiplication and inverse tables. Element 0 is
/// the identity.
#[derive(Debug, Clone)]
pub struct ExplicitGroup {
    poset: Arc<Poset>,
    elements: Vec<PosetAutomorphism>,
    mult: Vec<Vec<usize>>,
    inv: Vec<usize>,
}

impl PartialEq for ExplicitGroup {
    fn eq(&self, other: &Self) -> bool {
        self.poset == other.poset && self.elements == other.elements
    }
}
impl Eq for ExplicitGroup {}

impl ExplicitGroup {
    /// Closure of the generators inside Aut(P).
    pub fn generate(
        poset: Arc<Poset>,
        generators: Vec<PosetAutomorphism>,
    ) -> Result<Arc<ExplicitGroup>, GroupError> {
        let id = PosetAutomorphism::identity(poset.len());
        let mut elements = vec![id];
        let mut index: HashMap<PosetAutomorphism, usize> = HashMap::new();
        index.insert(elements[0].clone(), 0);
        let mut queue: Vec<PosetAutomorphism> = generators;
        while let Some(g) = queue.pop() {
            if index.contains_key(&g) {
                continue;
            }
            if elements.len() >= MAX_EXPLICIT_ORDER {
                return Err(GroupError::GroupTooLarge(elements.len() + 1));
            }
            index.insert(g.clone(), elements.len());
            elements.push(g.clone());
            let snapshot: Vec<PosetAutomorphism> = elements.clone();
            for h in snapshot {
                queue.push(g.compose(&h));
                queue.push(h.compose(&g));
            }
            queue.push(g.inverse());
        }
        // drain any products discovered late
        loop {
            let mut added = false;
            let snapshot: Vec<PosetAutomorphism> = elements.clone();
            for a in &snapshot {
                for b in &snapshot {
                    let c = a.compose(b);
                    if !index.contains_key(&c) {
                        if elements.len() >= MAX_EXPLICIT_ORDER {
                            return Err(GroupError::GroupTooLarge(elements.len() + 1));
                        }
                        index.insert(c.clone(), elements.len());
                        elements.push(c);
                        added = true;
                    }
                }
            }
            if !added {
                break;
            }
        }
        Self::from_closed_elements(poset, elements)
    }

    /// Wraps an already-closed element list (verified).
    pub fn from_closed_elements(
        poset: Arc<Poset>,
        elements: Vec<PosetAutomorphism>,
    ) -> Result<Arc<ExplicitGroup>, GroupError> {
        let n = elements.len();
        if n == 0 || n > MAX_EXPLICIT_ORDER {
            return Err(GroupError::GroupTooLarge(n));
        }
        if !elements[0].is_identity() {
            return Err(GroupError::NotAGroup("element 0 must be the identity".into()));
        }
        let index: HashMap<&PosetAutomorphism, usize> =
            elements.iter().enumerate().map(|(i, g)| (g, i)).collect();
        if index.len() != n {
            return Err(GroupError::NotAGroup("duplicate elements".into()));
        }
        let mut mult = vec![vec![0usize; n]; n];
        for a in 0..n {
            for b in 0..n {
                let c = elements[a].compose(&elements[b]);
                mult[a][b] = *index
                    .get(&c)
                    .ok_or_else(|| GroupError::NotAGroup("not closed under composition".into()))?;
            }
        }
        let mut inv = vec![0usize; n];
        for a in 0..n {
            let ia = elements[a].inverse();
            inv[a] = *index
                .get(&ia)
                .ok_or_else(|| GroupError::NotAGroup("not closed under inverse".into()))?;
        }
        Ok(Arc::new(ExplicitGroup { poset, elements, mult, inv }))
    }

    /// The full automorphism group Aut(P); errors above the order cap.
    pub fn full_automorphism_group(poset: Arc<Poset>) -> Result<Arc<ExplicitGroup>, GroupError> {
        let mut auts = poset.automorphisms();
        if auts.len() > MAX_EXPLICIT_ORDER {
            return Err(GroupError::GroupTooLarge(auts.len()));
        }
        // put the identity first
        auts.sort_by_key(|a| !a.is_identity());
        Self::from_closed_elements(poset, auts)
    }

    pub fn poset(&self) -> &Arc<Poset> {
        &self.poset
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, i: usize) -> &PosetAutomorphism {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[PosetAutomorphism] {
        &self.elements
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a][b]
    }

    pub fn inverse_of(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (0..n).all(|b| self.mult[a][b] == self.mult[b][a]))
    }

    pub fn full_mask(&self) -> SubgroupMask {
        if self.order() == 32 {
            u32::MAX
        } else {
            (1u32 << self.order()) - 1
        }
    }

    pub fn trivial_mask(&self) -> SubgroupMask {
        1
    }

    pub fn mask_members(&self, mask: SubgroupMask) -> impl Iterator<Item = usize> + '_ {
        (0..self.order()).filter(move |i| mask & (1 << i) != 0)
    }

    pub fn is_subgroup_mask(&self, mask: SubgroupMask) -> bool {
        if mask & 1 == 0 {
            return false;
        }
        for a in self.mask_members(mask) {
            if mask & (1 << self.inv[a]) == 0 {
                return false;
            }
            for b in self.mask_members(mask) {
                if mask & (1 << self.mult[a][b]) == 0 {
                    return false;
                }
            }
        }
        true
    }

    /// Smallest subgroup containing the masked elements.
    pub fn subgroup_closure(&self, mask: SubgroupMask) -> SubgroupMask {
        let mut m = mask | 1;
        loop {
            let mut next = m;
            for a in self.mask_members(m) {
                next |= 1 << self.inv[a];
                for b in self.mask_members(m) {
                    next |= 1 << self.mult[a][b];
                }
            }
            if next == m {
                return m;
            }
            m = next;
        }
    }

    /// Every subgroup of the group (within an ambient subgroup), found by
    /// closing each known subgroup under one extra element.
    pub fn subgroups_within(&self, ambient: SubgroupMask) -> Vec<SubgroupMask> {
        let mut found: Vec<SubgroupMask> = vec![1];
        let mut i = 0;
        while i < found.len() {
            let h = found[i];
            i += 1;
            for g in self.mask_members(ambient) {
                if h & (1 << g) != 0 {
                    continue;
                }
                let bigger = self.subgroup_closure(h | (1 << g));
                if bigger & !ambient == 0 && !found.contains(&bigger) {
                    found.push(bigger);
                }
            }
        }
        found.sort_unstable();
        found
    }

    pub fn all_subgroups(&self) -> Vec<SubgroupMask> {
        self.subgroups_within(self.full_mask())
    }

    /// gKg⁻¹ as a mask.
    pub fn conjugate_mask(&self, g: usize, mask: SubgroupMask) -> SubgroupMask {
        let gi = self.inv[g];
        let mut out = 0u32;
        for k in self.mask_members(mask) {
            out |= 1 << self.mult[self.mult[g][k]][gi];
        }
        out
    }

    /// Index set of the stabilizer {g : g·ẋ = ẋ}; hash-consing makes the
    /// fixed-point test pointer equality.
    pub fn stabilizer_mask(&self, name: &PName) -> Result<SubgroupMask, GroupError> {
        let mut mask = 0u32;
        for (i, g) in self.elements.iter().enumerate() {
            if name.apply_automorphism(g)? == *name {
                mask |= 1 << i;
            }
        }
        Ok(mask)
    }
}

/// Standard small groups realized as automorphisms of an antichain-plus-top
/// poset (Aut = the symmetric group on the atoms).
pub mod zoo {
    use super::*;

    fn perm_group(
        atoms: usize,
        gens: &[Vec<usize>],
    ) -> Arc<ExplicitGroup> {
        let poset = Arc::new(Poset::antichain_with_top(atoms));
        let top = atoms;
        let gens: Vec<PosetAutomorphism> = gens
            .iter()
            .map(|g| {
                let mut fwd = g.clone();
                fwd.push(top);
                PosetAutomorphism::new(&poset, fwd).expect("valid generator")
            })
            .collect();
        ExplicitGroup::generate(poset, gens).expect("small group fits the cap")
    }

    /// Cyclic group of order n (n ≥ 1), as an n-cycle.
    pub fn cyclic(n: usize) -> Arc<ExplicitGroup> {
        if n == 1 {
            return perm_group(1, &[]);
        }
        let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        perm_group(n, &[cycle])
    }

    /// Klein four group: two commuting double transpositions on 4 atoms.
    pub fn klein_four() -> Arc<ExplicitGroup> {
        perm_group(4, &[vec![1, 0, 3, 2], vec![2, 3, 0, 1]])
    }

    /// Symmetric group S₃ on 3 atoms.
    pub fn s3() -> Arc<ExplicitGroup> {
        perm_group(3, &[vec![1, 0, 2], vec![1, 2, 0]])
    }

    /// Dihedral group of the square, order 8.
    pub fn d4() -> Arc<ExplicitGroup> {
        perm_group(4, &[vec![1, 2, 3, 0], vec![0, 3, 2, 1]])
    }

    /// Quaternion group of order 8 in its regular representation
    /// (elements ordered 1, −1, i, −i, j, −j, k, −k).
    pub fn q8() -> Arc<ExplicitGroup> {
        perm_group(
            8,
            &[
                vec![2, 3, 1, 0, 6, 7, 5, 4], // left multiplication by i
                vec![4, 5, 7, 6, 1, 0, 2, 3], // left multiplication by j
            ],
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zoo_orders() {
        assert_eq!(zoo::cyclic(1).order(), 1);
        assert_eq!(zoo::cyclic(6).order(), 6);
        assert_eq!(zoo::klein_four().order(), 4);
        assert_eq!(zoo::s3().order(), 6);
        assert_eq!(zoo::d4().order(), 8);
        assert_eq!(zoo::q8().order(), 8);
        assert!(zoo::klein_four().is_abelian());
        assert!(!zoo::s3().is_abelian());
        assert!(!zoo::q8().is_abelian());
    }

    #[test]
    fn subgroup_lattice_sizes_match_the_literature() {
        assert_eq!(zoo::s3().all_subgroups().len(), 6);
        assert_eq!(zoo::d4().all_subgroups().len(), 10);
        assert_eq!(zoo::q8().all_subgroups().len(), 6);
        assert_eq!(zoo::klein_four().all_subgroups().len(), 5);
        assert_eq!(zoo::cyclic(8).all_subgroups().len(), 4);
        assert_eq!(zoo::cyclic(6).all_subgroups().len(), 4);
    }

    #[test]
    fn closure_and_conjugation_behave() {
        let g = zoo::s3();
        for h in g.all_subgroups() {
            assert!(g.is_subgroup_mask(h));
            for e in 0..g.order() {
                assert!(g.is_subgroup_mask(g.conjugate_mask(e, h)));
            }
        }
    }

    #[test]
    fn stabilizer_of_check_name_is_everything() {
        let g = zoo::s3();
        let c = crate::forcing::check_name(g.poset(), &crate::forcing::HSet::nat(2));
        assert_eq!(g.stabilizer_mask(&c).unwrap(), g.full_mask());
    }
}
