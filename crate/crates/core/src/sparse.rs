//! Incremental Gaussian elimination on sparse rows, for rank and left-kernel
//! computations whose column space is large but sparsely used.

use std::collections::{BTreeMap, HashMap};

use crate::field::{Elem, Field};
use crate::subspace::Subspace;

pub type SparseRow = BTreeMap<u64, Elem>;

pub struct SparseEchelon {
    field: Field,
    /// pivot column -> (row with leading entry 1 at the pivot, combination of inputs)
    rows: HashMap<u64, (SparseRow, BTreeMap<usize, Elem>)>,
    inputs: usize,
    kernel: Vec<BTreeMap<usize, Elem>>,
}

impl SparseEchelon {
    pub fn new(field: &Field) -> SparseEchelon {
        SparseEchelon {
            field: field.clone(),
            rows: HashMap::new(),
            inputs: 0,
            kernel: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds a row; returns whether it was independent of the previous ones.
    pub fn push(&mut self, mut row: SparseRow) -> bool {
        let f = self.field.clone();
        let idx = self.inputs;
        self.inputs += 1;
        row.retain(|_, c| *c != 0);
        let mut combo = BTreeMap::new();
        combo.insert(idx, 1);
        let mut cursor = 0u64;
        loop {
            let hit = row
                .range(cursor..)
                .find(|(k, _)| self.rows.contains_key(k))
                .map(|(&k, &c)| (k, c));
            let Some((k, c)) = hit else { break };
            let (prow, pcombo) = &self.rows[&k];
            let nc = f.neg(c);
            add_scaled(&f, &mut row, nc, prow);
            add_scaled(&f, &mut combo, nc, pcombo);
            cursor = k + 1;
        }
        match row.iter().next().map(|(&k, &c)| (k, c)) {
            None => {
                self.kernel.push(combo);
                false
            }
            Some((k, c)) => {
                let inv = f.inv(c).unwrap();
                for v in row.values_mut() {
                    *v = f.mul(*v, inv);
                }
                for v in combo.values_mut() {
                    *v = f.mul(*v, inv);
                }
                self.rows.insert(k, (row, combo));
                true
            }
        }
    }

    /// Left kernel of the pushed rows, as a subspace of F^{inputs}.
    pub fn left_kernel(&self) -> Subspace {
        let n = self.inputs;
        let vecs: Vec<Vec<Elem>> = self
            .kernel
            .iter()
            .map(|c| {
                let mut v = vec![0; n];
                for (&i, &x) in c {
                    v[i] = x;
                }
                v
            })
            .collect();
        Subspace::from_vectors(&self.field, n, &vecs)
    }
}

pub(crate) fn add_scaled<K: Ord + Copy>(f: &Field, dst: &mut BTreeMap<K, Elem>, c: Elem, src: &BTreeMap<K, Elem>) {
    for (&k, &v) in src {
        let e = dst.entry(k).or_insert(0);
        *e = f.add(*e, f.mul(c, v));
        if *e == 0 {
            dst.remove(&k);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Matrix;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn agrees_with_dense() {
        let f = Field::prime(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let a = Matrix::random(&f, 7, 5, &mut rng);
            let mut s = SparseEchelon::new(&f);
            for r in a.row_vectors() {
                s.push(r.iter().enumerate().map(|(i, &c)| (i as u64, c)).collect());
            }
            assert_eq!(s.rank(), a.rank());
            assert_eq!(s.left_kernel(), a.left_kernel());
        }
    }
}
