use fixedbitset::FixedBitSet;

use super::Context;

/// A closed (extent, intent) pair of some context.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FormalConcept {
    pub extent: FixedBitSet,
    pub intent: FixedBitSet,
}

impl FormalConcept {
    pub fn from_intent(ctx: &Context, intent: FixedBitSet) -> Self {
        FormalConcept { extent: ctx.extent_of(&intent), intent }
    }

    pub fn extent_indices(&self) -> Vec<usize> {
        self.extent.ones().collect()
    }

    pub fn intent_indices(&self) -> Vec<usize> {
        self.intent.ones().collect()
    }

    /// Whether both halves are exactly each other's derivation in `ctx`.
    pub fn is_closed_in(&self, ctx: &Context) -> bool {
        ctx.intent_of(&self.extent) == self.intent && ctx.extent_of(&self.intent) == self.extent
    }
}

/// All formal concepts of `ctx`, each exactly once, ordered lectically by
/// intent (Ganter's NextClosure).
pub fn enumerate_concepts(ctx: &Context) -> Vec<FormalConcept> {
    let m = ctx.attribute_count();
    let mut intent = ctx.attribute_closure(&FixedBitSet::with_capacity(m));
    let mut out = Vec::new();
    loop {
        let next = next_closure(ctx, &intent);
        out.push(FormalConcept::from_intent(ctx, intent));
        match next {
            Some(n) => intent = n,
            None => break,
        }
    }
    out
}

/// Lectically next closed attribute set after `current`, if any.
fn next_closure(ctx: &Context, current: &FixedBitSet) -> Option<FixedBitSet> {
    let m = ctx.attribute_count();
    let mut prefix = current.clone();
    for i in (0..m).rev() {
        if prefix.contains(i) {
            prefix.set(i, false);
            continue;
        }
        // prefix now holds exactly current ∩ {0..i-1}
        prefix.insert(i);
        let candidate = ctx.attribute_closure(&prefix);
        prefix.set(i, false);
        let adds_smaller = candidate.difference(&prefix).any(|j| j < i);
        if !adds_smaller {
            return Some(candidate);
        }
    }
    None
}
