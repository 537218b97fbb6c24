use std::collections::BTreeMap;
use std::ops::Bound;

use num_traits::{One, Zero};

use crate::Rat;

/// Sparse vector indexed by an ordered key; zero entries are never stored.
pub type SparseVec<K> = BTreeMap<K, Rat>;

/// Incrementally built echelon basis of a subspace of `Q^K`.
///
/// Each stored row is normalised so that its smallest key (the pivot) has
/// coefficient one, and no other row has a nonzero entry at that pivot once
/// [`Echelon::reduce_fully`] has run.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Echelon<K: Ord + Clone> {
    rows: BTreeMap<K, SparseVec<K>>,
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new() -> Self {
        Echelon { rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, key: &K) -> bool {
        self.rows.contains_key(key)
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.rows.keys()
    }

    pub fn rows(&self) -> impl Iterator<Item = (&K, &SparseVec<K>)> {
        self.rows.iter()
    }

    /// Residue of `v` after eliminating every pivot it touches.
    pub fn reduce(&self, mut v: SparseVec<K>) -> SparseVec<K> {
        self.reduce_after(&mut v, Bound::Unbounded);
        v
    }

    fn reduce_after(&self, v: &mut SparseVec<K>, mut from: Bound<K>) {
        loop {
            let next = v
                .range((from.clone(), Bound::Unbounded))
                .map(|(k, _)| k)
                .find(|k| self.rows.contains_key(*k))
                .cloned();
            let Some(p) = next else { break };
            let c = v.remove(&p).expect("pivot present");
            for (k, a) in self.rows[&p].iter().skip(1) {
                add_scaled(v, k, &(-(&c * a)));
            }
            from = Bound::Excluded(p);
        }
    }

    pub fn contains(&self, v: SparseVec<K>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: SparseVec<K>) -> bool {
        let r = self.reduce(v);
        let Some((p, lead)) = r.iter().next() else {
            return false;
        };
        let (p, inv) = (p.clone(), lead.recip());
        let row = if inv.is_one() {
            r
        } else {
            r.into_iter().map(|(k, a)| (k, a * &inv)).collect()
        };
        self.rows.insert(p, row);
        true
    }

    /// Back-substitution to reduced row-echelon form.
    pub fn reduce_fully(&mut self) {
        let keys: Vec<K> = self.rows.keys().rev().cloned().collect();
        for p in keys {
            let mut row = self.rows.remove(&p).expect("pivot row");
            let lead = row.remove(&p).expect("leading entry");
            self.reduce_after(&mut row, Bound::Excluded(p.clone()));
            row.insert(p.clone(), lead);
            self.rows.insert(p, row);
        }
    }

    pub fn row(&self, pivot: &K) -> Option<&SparseVec<K>> {
        self.rows.get(pivot)
    }

    pub fn into_rows(self) -> BTreeMap<K, SparseVec<K>> {
        self.rows
    }
}

pub(crate) fn add_scaled<K: Ord + Clone>(v: &mut SparseVec<K>, k: &K, c: &Rat) {
    if c.is_zero() {
        return;
    }
    match v.get_mut(k) {
        Some(x) => {
            *x += c;
            if x.is_zero() {
                v.remove(k);
            }
        }
        None => {
            v.insert(k.clone(), c.clone());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn sv(entries: &[(u32, i64)]) -> SparseVec<u32> {
        entries.iter().map(|&(k, v)| (k, rat(v, 1))).collect()
    }

    #[test]
    fn insert_and_membership() {
        let mut e = Echelon::new();
        assert!(e.insert(sv(&[(0, 1), (2, 1)])));
        assert!(e.insert(sv(&[(1, 2), (2, 2)])));
        assert!(!e.insert(sv(&[(0, 1), (1, 1), (2, 2)])));
        assert_eq!(e.rank(), 2);
        assert!(e.contains(sv(&[(0, 3), (1, -1), (2, 2)])));
        assert!(!e.contains(sv(&[(2, 1)])));
    }

    #[test]
    fn reduced_rows_have_clean_pivot_columns() {
        let mut e = Echelon::new();
        e.insert(sv(&[(0, 1), (1, 1), (2, 1)]));
        e.insert(sv(&[(1, 1), (2, 3)]));
        e.reduce_fully();
        let r0 = e.row(&0).unwrap();
        assert!(!r0.contains_key(&1));
        assert_eq!(r0.get(&2), Some(&rat(-2, 1)));
    }
}
