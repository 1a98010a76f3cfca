//! Exact sparse linear algebra over Q on the expanded word basis.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use super::{Element, Word};
use crate::phase::{LinearForm, Rational};

pub(crate) type SparseVec = BTreeMap<usize, Rational>;

fn axpy(target: &mut SparseVec, k: &Rational, v: &SparseVec) {
    for (i, x) in v {
        let slot = target.entry(*i).or_insert_with(Rational::zero);
        *slot -= k * x;
        if slot.is_zero() {
            target.remove(i);
        }
    }
}

/// Maps `(word, parameter part, root-of-unity power)` coordinates to indices.
pub(crate) struct Expander {
    order: u64,
    index: HashMap<(Word, LinearForm, usize), usize>,
    keys: Vec<(Word, LinearForm, usize)>,
}

impl Expander {
    pub(crate) fn new(order: u64) -> Self {
        Expander { order, index: HashMap::new(), keys: Vec::new() }
    }

    pub(crate) fn vector(&mut self, e: &Element) -> SparseVec {
        let mut v = SparseVec::new();
        for (w, c) in e.terms() {
            for (lin, k, q) in c.expand(self.order) {
                let key = (w.clone(), lin, k);
                let next = self.keys.len();
                let idx = *self.index.entry(key.clone()).or_insert_with(|| next);
                if idx == next {
                    self.keys.push(key);
                }
                v.insert(idx, q);
            }
        }
        v
    }
}

/// Row-echelon basis of a subspace; every row has pivot 1 at its smallest index.
#[derive(Default)]
pub(crate) struct Echelon {
    rows: Vec<SparseVec>,
    by_pivot: HashMap<usize, usize>,
}

impl Echelon {
    pub(crate) fn new() -> Self {
        Self::default()
    }

    #[cfg(test)]
    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    pub(crate) fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut v = v.clone();
        let mut cursor = 0usize;
        loop {
            let next = v.range(cursor..).map(|(i, x)| (*i, x.clone())).find(|(i, _)| self.by_pivot.contains_key(i));
            let Some((i, x)) = next else { break };
            axpy(&mut v, &x, &self.rows[self.by_pivot[&i]]);
            cursor = i + 1;
        }
        v
    }

    pub(crate) fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Inserts `v`; returns false when it was already in the span.
    pub(crate) fn insert(&mut self, v: &SparseVec) -> bool {
        let r = self.reduce(v);
        let Some((&p, lead)) = r.iter().next() else { return false };
        let inv = Rational::one() / lead;
        let row: SparseVec = r.iter().map(|(i, x)| (*i, x * &inv)).collect();
        self.by_pivot.insert(p, self.rows.len());
        self.rows.push(row);
        true
    }

    /// Fully reduced rows sorted by pivot.
    pub(crate) fn rref_rows(&self) -> Vec<SparseVec> {
        let mut pivots: Vec<usize> = self.by_pivot.keys().copied().collect();
        pivots.sort_unstable();
        let mut out: Vec<SparseVec> = Vec::with_capacity(pivots.len());
        for &p in pivots.iter().rev() {
            let mut row = self.rows[self.by_pivot[&p]].clone();
            for done in &out {
                let dp = *done.keys().next().unwrap();
                if let Some(x) = row.get(&dp).cloned() {
                    axpy(&mut row, &x, done);
                }
            }
            out.push(row);
        }
        out.reverse();
        out
    }
}

/// Kernel of the map `e_j ↦ columns[j]`, as vectors over column indices.
pub(crate) fn kernel(columns: &[SparseVec]) -> Vec<SparseVec> {
    // rows carry their image and the combination of columns producing it
    let mut rows: Vec<(SparseVec, SparseVec)> = Vec::new();
    let mut by_pivot: HashMap<usize, usize> = HashMap::new();
    let mut basis = Vec::new();
    for (j, col) in columns.iter().enumerate() {
        let mut img = col.clone();
        let mut combo = SparseVec::new();
        combo.insert(j, Rational::one());
        let mut cursor = 0usize;
        loop {
            let next = img.range(cursor..).map(|(i, x)| (*i, x.clone())).find(|(i, _)| by_pivot.contains_key(i));
            let Some((i, x)) = next else { break };
            let (ri, rc) = &rows[by_pivot[&i]];
            axpy(&mut img, &x, ri);
            axpy(&mut combo, &x, rc);
            cursor = i + 1;
        }
        match img.iter().next() {
            None => basis.push(combo),
            Some((&p, lead)) => {
                let inv = Rational::one() / lead;
                let img: SparseVec = img.iter().map(|(i, x)| (*i, x * &inv)).collect();
                let combo: SparseVec = combo.iter().map(|(i, x)| (*i, x * &inv)).collect();
                by_pivot.insert(p, rows.len());
                rows.push((img, combo));
            }
        }
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::int;

    fn v(entries: &[(usize, i64)]) -> SparseVec {
        entries.iter().map(|(i, x)| (*i, int(*x))).collect()
    }

    #[test]
    fn span_membership() {
        let mut e = Echelon::new();
        assert!(e.insert(&v(&[(0, 1), (1, 1)])));
        assert!(e.insert(&v(&[(1, 1), (2, 1)])));
        assert!(!e.insert(&v(&[(0, 1), (2, -1)])));
        assert!(e.contains(&v(&[(0, 2), (1, 3), (2, 1)])));
        assert!(!e.contains(&v(&[(2, 1)])));
        assert_eq!(e.rank(), 2);
        let rr = e.rref_rows();
        assert_eq!(rr[0], v(&[(0, 1), (2, -1)]));
    }

    #[test]
    fn kernel_of_dependent_columns() {
        let cols = vec![v(&[(0, 1)]), v(&[]), v(&[(0, 2)])];
        let k = kernel(&cols);
        assert_eq!(k.len(), 2);
        for x in &k {
            let mut sum = SparseVec::new();
            for (j, c) in x {
                axpy(&mut sum, &-c, &cols[*j]);
            }
            assert!(sum.is_empty());
        }
    }
}
