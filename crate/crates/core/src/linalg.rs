//! Exact linear algebra over the integers and rationals.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Rank of an integer matrix by fraction-free (Bareiss) elimination.
///
/// Every intermediate entry is a minor of the input, so all divisions are
/// exact and no rationals appear.
pub fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let (top, bottom) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = &pivot_row[c];
        for row in bottom.iter_mut() {
            let lead = std::mem::take(&mut row[c]);
            for j in c + 1..cols {
                let v = pivot * &row[j] - &lead * &pivot_row[j];
                row[j] = v / &prev;
            }
        }
        prev = pivot.clone();
        r += 1;
    }
    r
}

/// Rank of a set of sparse integer vectors (column label → value).
///
/// Columns are grouped into connected components of the row/column
/// incidence graph; each component is eliminated independently.
pub fn sparse_rank(vectors: &[BTreeMap<u64, i64>]) -> usize {
    let mut cols: HashMap<u64, usize> = HashMap::new();
    for v in vectors {
        for &c in v.keys() {
            let next = cols.len();
            cols.entry(c).or_insert(next);
        }
    }
    let mut uf = UnionFind::new(cols.len());
    for v in vectors {
        let mut it = v.keys().map(|c| cols[c]);
        if let Some(first) = it.next() {
            for other in it {
                uf.union(first, other);
            }
        }
    }
    // component root → (column list, row list)
    let mut comps: BTreeMap<usize, (Vec<u64>, Vec<usize>)> = BTreeMap::new();
    let mut col_labels: Vec<(u64, usize)> = cols.iter().map(|(&l, &i)| (l, i)).collect();
    col_labels.sort_unstable();
    for (label, idx) in col_labels {
        comps.entry(uf.find(idx)).or_default().0.push(label);
    }
    for (r, v) in vectors.iter().enumerate() {
        if let Some(c) = v.keys().next() {
            let root = uf.find(cols[c]);
            comps.get_mut(&root).unwrap().1.push(r);
        }
    }
    comps
        .values()
        .map(|(labels, rows)| {
            let pos: HashMap<u64, usize> = labels.iter().enumerate().map(|(i, &l)| (l, i)).collect();
            let dense = rows
                .iter()
                .map(|&r| {
                    let mut row = vec![BigInt::zero(); labels.len()];
                    for (c, &val) in &vectors[r] {
                        row[pos[c]] = BigInt::from(val);
                    }
                    row
                })
                .collect();
            bareiss_rank(dense)
        })
        .sum()
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Solve `A x = b` over the rationals by Gauss-Jordan elimination.
/// Returns `None` when `A` is singular.
pub fn solve_rational(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = a.len();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        b.swap(c, p);
        let inv = a[c][c].recip();
        for j in c..n {
            a[c][j] = &a[c][j] * &inv;
        }
        b[c] = &b[c] * &inv;
        for i in 0..n {
            if i == c || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            for j in c..n {
                let v = &f * &a[c][j];
                a[i][j] -= v;
            }
            let v = &f * &b[c];
            b[i] -= v;
        }
    }
    Some(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Plain rational Gaussian elimination, used as the reference.
    fn rational_rank(m: &[Vec<i64>]) -> usize {
        let mut a: Vec<Vec<BigRational>> =
            m.iter().map(|r| r.iter().map(|&v| BigRational::from_integer(v.into())).collect()).collect();
        let rows = a.len();
        let cols = if rows == 0 { 0 } else { a[0].len() };
        let mut r = 0;
        for c in 0..cols {
            let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
            a.swap(r, p);
            for i in r + 1..rows {
                let f = &a[i][c] / &a[r][c];
                for j in c..cols {
                    let v = &f * &a[r][j];
                    a[i][j] -= v;
                }
            }
            r += 1;
        }
        r
    }

    fn to_big(m: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
        m.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
    }

    #[test]
    fn known_ranks() {
        assert_eq!(bareiss_rank(vec![]), 0);
        assert_eq!(bareiss_rank(to_big(&[vec![0, 0], vec![0, 0]])), 0);
        assert_eq!(bareiss_rank(to_big(&[vec![1, 2], vec![2, 4]])), 1);
        assert_eq!(bareiss_rank(to_big(&[vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 2]])), 2);
        assert_eq!(bareiss_rank(to_big(&[vec![2, 0, 0], vec![0, 3, 0], vec![0, 0, 5], vec![1, 1, 1]])), 3);
    }

    #[test]
    fn sparse_rank_blocks() {
        let mk = |pairs: &[(u64, i64)]| pairs.iter().copied().collect::<BTreeMap<_, _>>();
        let vs = vec![mk(&[(0, 1), (7, 1)]), mk(&[(0, 1), (7, -1)]), mk(&[(3, 1), (4, 1)]), mk(&[(3, 2), (4, 2)])];
        assert_eq!(sparse_rank(&vs), 3);
        assert_eq!(sparse_rank(&[]), 0);
    }

    #[test]
    fn solve_small_system() {
        let q = |v: i64| BigRational::from_integer(v.into());
        let a = vec![vec![q(2), q(1)], vec![q(1), q(3)]];
        let x = solve_rational(a, vec![q(3), q(5)]).unwrap();
        assert_eq!(x, vec![BigRational::new(4.into(), 5.into()), BigRational::new(7.into(), 5.into())]);
        assert!(solve_rational(vec![vec![q(1), q(2)], vec![q(2), q(4)]], vec![q(1), q(1)]).is_none());
    }

    proptest! {
        #[test]
        fn bareiss_matches_rational_elimination(
            m in prop::collection::vec(prop::collection::vec(-3i64..=3, 5), 0..8)
        ) {
            prop_assert_eq!(bareiss_rank(to_big(&m)), rational_rank(&m));
        }

        #[test]
        fn sparse_rank_matches_dense(
            m in prop::collection::vec(prop::collection::vec(-2i64..=2, 6), 1..9)
        ) {
            let sparse: Vec<BTreeMap<u64, i64>> = m
                .iter()
                .map(|r| r.iter().enumerate().filter(|(_, v)| **v != 0).map(|(c, &v)| (c as u64 * 11, v)).collect())
                .collect();
            prop_assert_eq!(sparse_rank(&sparse), rational_rank(&m));
        }
    }
}
