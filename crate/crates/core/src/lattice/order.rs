use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use super::FormalConcept;
use crate::{Error, Result};

/// Concepts of one context ordered by extent inclusion, stored as the Hasse
/// diagram of that order.
#[derive(Debug, Clone)]
pub struct ConceptLattice {
    concepts: Vec<FormalConcept>,
    upper: Vec<Vec<usize>>,
    lower: Vec<Vec<usize>>,
    top: usize,
    bottom: usize,
    by_extent: HashMap<FixedBitSet, usize>,
    by_intent: HashMap<FixedBitSet, usize>,
}

/// Builds the lattice over a complete family of concepts.
///
/// The family must be closed under intent intersection and extent
/// intersection (as the output of [`super::enumerate_concepts`] is); the
/// constructor checks for a top and a bottom and rejects duplicates.
pub fn build_lattice(concepts: Vec<FormalConcept>) -> Result<ConceptLattice> {
    if concepts.is_empty() {
        return Err(Error::invalid("empty concept family"));
    }
    let n_obj = concepts[0].extent.len();
    let n_attr = concepts[0].intent.len();
    let mut by_extent = HashMap::with_capacity(concepts.len());
    let mut by_intent = HashMap::with_capacity(concepts.len());
    for (i, c) in concepts.iter().enumerate() {
        if c.extent.len() != n_obj || c.intent.len() != n_attr {
            return Err(Error::invalid(format!("concept {i} has a different universe size")));
        }
        if by_extent.insert(c.extent.clone(), i).is_some() {
            return Err(Error::invalid(format!("duplicate concept extent at index {i}")));
        }
        if by_intent.insert(c.intent.clone(), i).is_some() {
            return Err(Error::invalid(format!("duplicate concept intent at index {i}")));
        }
    }

    let top = (0..concepts.len())
        .find(|&t| concepts.iter().all(|c| c.extent.is_subset(&concepts[t].extent)))
        .ok_or_else(|| Error::invalid("concept family has no top element"))?;
    let bottom = (0..concepts.len())
        .find(|&b| concepts.iter().all(|c| c.intent.is_subset(&concepts[b].intent)))
        .ok_or_else(|| Error::invalid("concept family has no bottom element"))?;

    // Upper covers: scan strictly larger extents smallest-first; a candidate
    // is a cover unless some cover already found sits below it.
    let mut by_size: Vec<usize> = (0..concepts.len()).collect();
    by_size.sort_by_key(|&i| (concepts[i].extent.count_ones(..), i));
    let mut upper = vec![Vec::new(); concepts.len()];
    let mut lower = vec![Vec::new(); concepts.len()];
    for c in 0..concepts.len() {
        let ext = &concepts[c].extent;
        let size = ext.count_ones(..);
        let mut covers: Vec<usize> = Vec::new();
        for &d in &by_size {
            let ext_d = &concepts[d].extent;
            if ext_d.count_ones(..) <= size || !ext.is_subset(ext_d) {
                continue;
            }
            if covers.iter().all(|&e| !concepts[e].extent.is_subset(ext_d)) {
                covers.push(d);
            }
        }
        covers.sort_unstable();
        for &d in &covers {
            lower[d].push(c);
        }
        upper[c] = covers;
    }
    for l in &mut lower {
        l.sort_unstable();
    }

    Ok(ConceptLattice { concepts, upper, lower, top, bottom, by_extent, by_intent })
}

impl ConceptLattice {
    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn concepts(&self) -> &[FormalConcept] {
        &self.concepts
    }

    pub fn concept(&self, i: usize) -> &FormalConcept {
        &self.concepts[i]
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn upper_covers(&self, i: usize) -> &[usize] {
        &self.upper[i]
    }

    pub fn lower_covers(&self, i: usize) -> &[usize] {
        &self.lower[i]
    }

    /// Hasse edges as (lower, upper) pairs, sorted.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut edges: Vec<(usize, usize)> = self
            .upper
            .iter()
            .enumerate()
            .flat_map(|(lo, ups)| ups.iter().map(move |&hi| (lo, hi)))
            .collect();
        edges.sort_unstable();
        edges
    }

    /// `a ≤ b`: `a` is at least as specific as `b`.
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.concepts[a].extent.is_subset(&self.concepts[b].extent)
    }

    pub fn find_by_extent(&self, extent: &FixedBitSet) -> Option<usize> {
        self.by_extent.get(extent).copied()
    }

    pub fn find_by_intent(&self, intent: &FixedBitSet) -> Option<usize> {
        self.by_intent.get(intent).copied()
    }

    fn check(&self, i: usize) -> Result<()> {
        if i >= self.len() {
            return Err(Error::IndexOutOfRange { what: "concept", index: i, len: self.len() });
        }
        Ok(())
    }

    /// Least upper bound. Its intent is the intersection of the two intents,
    /// which is closed whenever both inputs are.
    pub fn join(&self, a: usize, b: usize) -> Result<usize> {
        self.check(a)?;
        self.check(b)?;
        let mut intent = self.concepts[a].intent.clone();
        intent.intersect_with(&self.concepts[b].intent);
        self.find_by_intent(&intent)
            .ok_or_else(|| Error::invalid("concept family is not closed under join"))
    }

    /// Greatest lower bound, via extent intersection.
    pub fn meet(&self, a: usize, b: usize) -> Result<usize> {
        self.check(a)?;
        self.check(b)?;
        let mut extent = self.concepts[a].extent.clone();
        extent.intersect_with(&self.concepts[b].extent);
        self.find_by_extent(&extent)
            .ok_or_else(|| Error::invalid("concept family is not closed under meet"))
    }

    #[cfg(test)]
    pub(crate) fn drop_cover(&mut self, lo: usize, hi: usize) {
        self.upper[lo].retain(|&u| u != hi);
        self.lower[hi].retain(|&l| l != lo);
    }

    /// Number of cover edges on the longest chain from bottom to top.
    pub fn height(&self) -> usize {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&i| self.concepts[i].extent.count_ones(..));
        let mut depth = vec![0usize; self.len()];
        for &c in &order {
            for &u in &self.upper[c] {
                depth[u] = depth[u].max(depth[c] + 1);
            }
        }
        depth[self.top]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{enumerate_concepts, Context};

    fn identity(n: usize) -> Context {
        Context::from_matrix((0..n).map(|i| (0..n).map(|j| i == j).collect()).collect()).unwrap()
    }

    /// Complement of the identity; its concept lattice is the Boolean algebra.
    fn contranominal(n: usize) -> Context {
        Context::from_matrix((0..n).map(|i| (0..n).map(|j| i != j).collect()).collect()).unwrap()
    }

    fn lattice_of(ctx: &Context) -> ConceptLattice {
        build_lattice(enumerate_concepts(ctx)).unwrap()
    }

    /// Transitive reduction of ⊆ on extents, by definition.
    fn brute_force_covers(lat: &ConceptLattice) -> Vec<(usize, usize)> {
        let n = lat.len();
        let lt = |a: usize, b: usize| a != b && lat.leq(a, b);
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if lt(a, b) && !(0..n).any(|c| lt(a, c) && lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out.sort_unstable();
        out
    }

    #[test]
    fn single_concept_lattice() {
        let lat = lattice_of(&Context::from_matrix(vec![vec![true]]).unwrap());
        assert_eq!(lat.len(), 1);
        assert_eq!(lat.top(), lat.bottom());
        assert_eq!(lat.height(), 0);
        assert!(lat.covers().is_empty());
    }

    #[test]
    fn identity_three_is_a_diamond() {
        let lat = lattice_of(&identity(3));
        assert_eq!(lat.len(), 5);
        assert_eq!(lat.covers(), brute_force_covers(&lat));
        assert_eq!(lat.covers().len(), 6);
        assert_eq!(lat.height(), 2);
        let atoms: Vec<usize> = (0..5).filter(|&i| lat.concept(i).extent.count_ones(..) == 1).collect();
        // two atoms: the closure of the union of their extents is every object
        assert_eq!(lat.join(atoms[0], atoms[1]).unwrap(), lat.top());
        assert_eq!(lat.meet(atoms[0], atoms[1]).unwrap(), lat.bottom());
    }

    #[test]
    fn contranominal_three_is_a_cube() {
        let lat = lattice_of(&contranominal(3));
        assert_eq!(lat.len(), 8);
        assert_eq!(lat.covers().len(), 12);
        assert_eq!(lat.covers(), brute_force_covers(&lat));
        assert_eq!(lat.height(), 3);
        assert_eq!(lat.concept(lat.top()).extent.count_ones(..), 3);
        assert_eq!(lat.concept(lat.bottom()).intent.count_ones(..), 3);
    }

    #[test]
    fn chain_context_gives_a_chain() {
        // object i has attributes i..n: upper-triangular
        let n = 4;
        let ctx = Context::from_matrix((0..n).map(|i| (0..n).map(|j| j >= i).collect()).collect()).unwrap();
        let lat = lattice_of(&ctx);
        assert_eq!(lat.covers(), brute_force_covers(&lat));
        for a in 0..lat.len() {
            for b in 0..lat.len() {
                assert!(lat.leq(a, b) || lat.leq(b, a), "incomparable pair in a chain");
            }
        }
        assert_eq!(lat.covers().len(), lat.len() - 1);
        assert_eq!(lat.height(), lat.len() - 1);
    }

    #[test]
    fn join_and_meet_on_the_cube() {
        let lat = lattice_of(&contranominal(3));
        let atoms: Vec<usize> = (0..lat.len()).filter(|&i| lat.concept(i).extent.count_ones(..) == 1).collect();
        let coatoms: Vec<usize> = (0..lat.len()).filter(|&i| lat.concept(i).extent.count_ones(..) == 2).collect();
        assert_eq!(atoms.len(), 3);
        for &a in &atoms {
            assert_eq!(lat.join(a, a).unwrap(), a);
            assert_eq!(lat.join(a, lat.top()).unwrap(), lat.top());
            assert_eq!(lat.meet(a, lat.bottom()).unwrap(), lat.bottom());
            assert_eq!(lat.meet(a, a).unwrap(), a);
        }
        // brute-force least upper bound / greatest lower bound
        let n = lat.len();
        let lub = |a: usize, b: usize| {
            let ups: Vec<usize> = (0..n).filter(|&c| lat.leq(a, c) && lat.leq(b, c)).collect();
            *ups.iter().find(|&&c| ups.iter().all(|&d| lat.leq(c, d))).unwrap()
        };
        let glb = |a: usize, b: usize| {
            let downs: Vec<usize> = (0..n).filter(|&c| lat.leq(c, a) && lat.leq(c, b)).collect();
            *downs.iter().find(|&&c| downs.iter().all(|&d| lat.leq(d, c))).unwrap()
        };
        let j = lat.join(atoms[0], atoms[1]).unwrap();
        assert_eq!(j, lub(atoms[0], atoms[1]));
        assert_eq!(lat.concept(j).extent.count_ones(..), 2);
        let m = lat.meet(coatoms[0], coatoms[1]).unwrap();
        assert_eq!(m, glb(coatoms[0], coatoms[1]));
        assert_eq!(lat.concept(m).extent.count_ones(..), 1);
        assert!(lat.join(0, 99).is_err());
    }

    #[test]
    fn rejects_bad_families() {
        let ctx = identity(2);
        let mut cs = enumerate_concepts(&ctx);
        cs.push(cs[0].clone());
        assert!(build_lattice(cs).is_err());
        assert!(build_lattice(Vec::new()).is_err());
        // two incomparable atoms only: no top
        let cs = enumerate_concepts(&ctx);
        let atoms: Vec<_> = cs.into_iter().filter(|c| c.extent.count_ones(..) == 1).collect();
        assert!(build_lattice(atoms).is_err());
    }
}
