//! Exact linear algebra over the rationals.

use std::collections::BTreeMap;

use crate::rational::Rational;

/// Inverse of a square matrix (row-major), or `None` if singular.
pub fn inverse(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            assert_eq!(row.len(), n, "matrix must be square");
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, p);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for k in 0..2 * n {
                    let d = &f * &a[col][k];
                    a[r][k] -= &d;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_mul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| &row[k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// Sparse vectors kept in fully reduced row echelon form. The pivot of a row
/// is its smallest key, so reduction against the span is canonical.
#[derive(Clone, Debug, Default)]
pub struct EchelonBasis<K: Ord + Clone> {
    rows: BTreeMap<K, BTreeMap<K, Rational>>,
}

impl<K: Ord + Clone> EchelonBasis<K> {
    pub fn new() -> Self {
        EchelonBasis {
            rows: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    fn eliminate(v: &mut BTreeMap<K, Rational>, pivot: &K, row: &BTreeMap<K, Rational>) {
        let Some(f) = v.get(pivot).cloned() else {
            return;
        };
        for (k, c) in row {
            let d = &f * c;
            let e = v.entry(k.clone()).or_insert_with(Rational::zero);
            *e -= &d;
            if e.is_zero() {
                v.remove(k);
            }
        }
    }

    /// Residual of `v` modulo the span: no pivot key survives.
    pub fn reduce(&self, v: &BTreeMap<K, Rational>) -> BTreeMap<K, Rational> {
        let mut v = v.clone();
        for (p, row) in &self.rows {
            Self::eliminate(&mut v, p, row);
        }
        v
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: &BTreeMap<K, Rational>) -> bool {
        let mut r = self.reduce(v);
        let Some((p, c)) = r.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let inv = c.recip();
        for x in r.values_mut() {
            *x *= &inv;
        }
        for row in self.rows.values_mut() {
            Self::eliminate(row, &p, &r);
        }
        self.rows.insert(p, r);
        true
    }

    pub fn contains(&self, v: &BTreeMap<K, Rational>) -> bool {
        self.reduce(v).is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn inverse_of_small_matrix() {
        let m = vec![vec![q(1), q(1)], vec![q(0), q(1)]];
        let inv = inverse(&m).unwrap();
        assert_eq!(inv, vec![vec![q(1), q(-1)], vec![q(0), q(1)]]);
        assert!(inverse(&[vec![q(1), q(2)], vec![q(2), q(4)]]).is_none());
    }

    #[test]
    fn echelon_reduction_is_canonical() {
        let mut e = EchelonBasis::new();
        let v1: BTreeMap<u32, Rational> = [(0, q(1)), (1, q(1))].into();
        let v2: BTreeMap<u32, Rational> = [(1, q(1)), (2, q(2))].into();
        assert!(e.insert(&v1));
        assert!(e.insert(&v2));
        let sum: BTreeMap<u32, Rational> = [(0, q(1)), (1, q(2)), (2, q(2))].into();
        assert!(e.contains(&sum));
        assert!(!e.insert(&sum));
        let w: BTreeMap<u32, Rational> = [(2, q(1))].into();
        let r = e.reduce(&w);
        assert_eq!(r, [(2, q(1))].into());
    }
}
