use std::collections::btree_map;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};

use super::rational::{add_assign, product};
use super::Rational;

/// Anything that can be the coefficient of a formal series: closed under
/// addition and rational scaling, with a distinguished zero.
pub trait Coefficient: Clone + PartialEq + fmt::Debug {
    fn vanishing() -> Self;
    fn vanishes(&self) -> bool;
    fn add_scaled(&mut self, scale: &Rational, other: &Self);
}

impl Coefficient for Rational {
    fn vanishing() -> Self {
        <Rational as Zero>::zero()
    }

    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }

    fn add_scaled(&mut self, scale: &Rational, other: &Self) {
        add_assign(self, &product(scale, other));
    }
}

/// A finitely supported vector `Σ c_k e_k` over an ordered index set.
///
/// Zero coefficients are never stored, so structural equality is equality of
/// vectors.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SparseVec<K: Ord = usize> {
    entries: BTreeMap<K, Rational>,
}

impl<K: Ord> Default for SparseVec<K> {
    fn default() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> SparseVec<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn unit(key: K) -> Self {
        let mut v = Self::new();
        v.entries.insert(key, Rational::from_integer(1.into()));
        v
    }

    pub fn from_pairs<I: IntoIterator<Item = (K, Rational)>>(pairs: I) -> Self {
        let mut v = Self::new();
        for (k, c) in pairs {
            v.add_term(k, &c);
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &K) -> Option<&Rational> {
        self.entries.get(key)
    }

    pub fn coeff(&self, key: &K) -> Rational {
        self.entries.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn iter(&self) -> btree_map::Iter<'_, K, Rational> {
        self.entries.iter()
    }

    pub fn keys(&self) -> btree_map::Keys<'_, K, Rational> {
        self.entries.keys()
    }

    /// Smallest index with a nonzero coefficient.
    pub fn leading(&self) -> Option<(&K, &Rational)> {
        self.entries.iter().next()
    }

    pub fn max_key(&self) -> Option<&K> {
        self.entries.keys().next_back()
    }

    /// `self[key] += c`.
    pub fn add_term(&mut self, key: K, c: &Rational) {
        if c.is_zero() {
            return;
        }
        match self.entries.entry(key) {
            btree_map::Entry::Vacant(slot) => {
                slot.insert(c.clone());
            }
            btree_map::Entry::Occupied(mut slot) => {
                add_assign(slot.get_mut(), c);
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    /// `self += scale * other`.
    pub fn add_scaled(&mut self, scale: &Rational, other: &Self) {
        if scale.is_zero() {
            return;
        }
        if scale.is_one() {
            for (k, c) in &other.entries {
                self.add_term(k.clone(), c);
            }
            return;
        }
        for (k, c) in &other.entries {
            self.add_term(k.clone(), &product(scale, c));
        }
    }

    pub fn scaled(&self, scale: &Rational) -> Self {
        if scale.is_zero() {
            return Self::new();
        }
        Self {
            entries: self
                .entries
                .iter()
                .map(|(k, c)| (k.clone(), product(c, scale)))
                .collect(),
        }
    }

    /// Re-indexes the vector; colliding images are summed.
    pub fn map_keys<K2: Ord + Clone>(&self, mut f: impl FnMut(&K) -> K2) -> SparseVec<K2> {
        let mut out = SparseVec::new();
        for (k, c) in &self.entries {
            out.add_term(f(k), c);
        }
        out
    }

    /// Keeps the entries whose index satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&K) -> bool) -> Self {
        Self {
            entries: self
                .entries
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    /// Linear extension of a map defined on basis vectors.
    pub fn try_linear_map<K2, E, F>(&self, mut f: F) -> Result<SparseVec<K2>, E>
    where
        K2: Ord + Clone,
        F: FnMut(&K) -> Result<SparseVec<K2>, E>,
    {
        let mut out = SparseVec::new();
        for (k, c) in &self.entries {
            out.add_scaled(c, &f(k)?);
        }
        Ok(out)
    }
}

impl<K: Ord + Clone + fmt::Debug> Coefficient for SparseVec<K> {
    fn vanishing() -> Self {
        Self::new()
    }

    fn vanishes(&self) -> bool {
        self.entries.is_empty()
    }

    fn add_scaled(&mut self, scale: &Rational, other: &Self) {
        SparseVec::add_scaled(self, scale, other)
    }
}

impl<K: Ord + Clone> FromIterator<(K, Rational)> for SparseVec<K> {
    fn from_iter<I: IntoIterator<Item = (K, Rational)>>(iter: I) -> Self {
        Self::from_pairs(iter)
    }
}

impl<K: Ord + Clone> Add for &SparseVec<K> {
    type Output = SparseVec<K>;

    fn add(self, rhs: Self) -> SparseVec<K> {
        let mut out = self.clone();
        out.add_scaled(&Rational::from_integer(1.into()), rhs);
        out
    }
}

impl<K: Ord + Clone> Sub for &SparseVec<K> {
    type Output = SparseVec<K>;

    fn sub(self, rhs: Self) -> SparseVec<K> {
        let mut out = self.clone();
        out.add_scaled(&Rational::from_integer((-1).into()), rhs);
        out
    }
}

impl<K: Ord + Clone> Neg for &SparseVec<K> {
    type Output = SparseVec<K>;

    fn neg(self) -> SparseVec<K> {
        self.scaled(&Rational::from_integer((-1).into()))
    }
}

impl<K: Ord + fmt::Debug> fmt::Debug for SparseVec<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.entries.iter().map(|(k, c)| (k, c.to_string())))
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{int, rat};

    #[test]
    fn zeros_are_never_stored() {
        let mut v = SparseVec::from_pairs([(0usize, int(1)), (3, rat(1, 2))]);
        v.add_term(0, &int(-1));
        assert_eq!(v.len(), 1);
        assert_eq!(v.coeff(&0), int(0));
        let w = &v - &v;
        assert!(w.is_zero());
        assert_eq!(w, SparseVec::new());
    }

    #[test]
    fn map_keys_sums_collisions() {
        let v = SparseVec::from_pairs([(0usize, int(1)), (1, int(2))]);
        let folded = v.map_keys(|_| 7usize);
        assert_eq!(folded, SparseVec::from_pairs([(7, int(3))]));
    }
}
