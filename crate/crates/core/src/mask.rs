//! Point-set representations used by the extension-based evaluators.
//!
//! `u128` covers the desk-scale structures the property batteries run on;
//! `FixedBitSet` covers everything else.

use std::hash::Hash;

use fixedbitset::FixedBitSet;

pub trait Mask: Clone + Eq + Hash + Send + Sync + std::fmt::Debug {
    /// Largest universe this representation can hold, if bounded.
    const CAPACITY: Option<usize>;

    fn empty(universe: usize) -> Self;
    fn full(universe: usize) -> Self;
    fn insert(&mut self, i: usize);
    fn contains(&self, i: usize) -> bool;
    fn is_subset(&self, other: &Self) -> bool;
    fn intersects(&self, other: &Self) -> bool;
    fn and(&self, other: &Self) -> Self;
    fn or(&self, other: &Self) -> Self;
    fn complement(&self, universe: usize) -> Self;
}

impl Mask for u128 {
    const CAPACITY: Option<usize> = Some(128);

    fn empty(_: usize) -> Self {
        0
    }
    fn full(universe: usize) -> Self {
        if universe >= 128 {
            u128::MAX
        } else {
            (1u128 << universe) - 1
        }
    }
    fn insert(&mut self, i: usize) {
        *self |= 1 << i;
    }
    fn contains(&self, i: usize) -> bool {
        self >> i & 1 == 1
    }
    fn is_subset(&self, other: &Self) -> bool {
        self & !other == 0
    }
    fn intersects(&self, other: &Self) -> bool {
        self & other != 0
    }
    fn and(&self, other: &Self) -> Self {
        self & other
    }
    fn or(&self, other: &Self) -> Self {
        self | other
    }
    fn complement(&self, universe: usize) -> Self {
        !self & Self::full(universe)
    }
}

impl Mask for FixedBitSet {
    const CAPACITY: Option<usize> = None;

    fn empty(universe: usize) -> Self {
        FixedBitSet::with_capacity(universe)
    }
    fn full(universe: usize) -> Self {
        let mut s = FixedBitSet::with_capacity(universe);
        s.insert_range(..);
        s
    }
    fn insert(&mut self, i: usize) {
        FixedBitSet::insert(self, i)
    }
    fn contains(&self, i: usize) -> bool {
        FixedBitSet::contains(self, i)
    }
    fn is_subset(&self, other: &Self) -> bool {
        FixedBitSet::is_subset(self, other)
    }
    fn intersects(&self, other: &Self) -> bool {
        !self.is_disjoint(other)
    }
    fn and(&self, other: &Self) -> Self {
        self & other
    }
    fn or(&self, other: &Self) -> Self {
        self | other
    }
    fn complement(&self, universe: usize) -> Self {
        let mut s = self.clone();
        s.grow(universe);
        s.toggle_range(..universe);
        s
    }
}
