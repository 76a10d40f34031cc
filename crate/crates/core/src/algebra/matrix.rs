//! Exact linear algebra over the rationals.
//!
//! Two fraction-free eliminations live here: a dense Bareiss reduction for
//! [`RationalMatrix`], and an incremental sparse echelon basis used by the
//! graded-piece computations, where rows arrive one at a time and most
//! entries are zero.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, entries: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidInput("ragged matrix rows".into()));
        }
        Ok(Self { rows: r, cols: c, entries: rows.into_iter().flatten().collect() })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigRational::from_integer(v.into())).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// Rank and pivot columns by fraction-free Bareiss elimination.
    pub fn rank(&self) -> (usize, Vec<usize>) {
        let mut a: Vec<Vec<BigInt>> = (0..self.rows).map(|i| integer_row(self.row(i))).collect();
        bareiss_echelon(&mut a, self.cols)
    }
}

/// Clear denominators of a rational row.
pub fn integer_row(row: &[BigRational]) -> Vec<BigInt> {
    let l = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    row.iter().map(|q| q.numer() * (&l / q.denom())).collect()
}

fn bareiss_echelon(a: &mut [Vec<BigInt>], cols: usize) -> (usize, Vec<usize>) {
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut pivots = Vec::new();
    for col in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (top, bottom) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pv = pivot_row[col].clone();
        for row in bottom.iter_mut() {
            let f = row[col].clone();
            for j in col + 1..cols {
                let v = &pv * &row[j] - &f * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = pv;
        pivots.push(col);
        r += 1;
    }
    (r, pivots)
}

/// Rank of a rational matrix with its pivot columns in increasing order.
pub fn rational_rank(m: &RationalMatrix) -> (usize, Vec<usize>) {
    m.rank()
}

/// Sparse row: strictly increasing column indices, nonzero values.
pub type SparseRow = Vec<(usize, BigInt)>;

/// Incrementally built row-echelon basis over the integers.
///
/// Rows are kept primitive (content 1, positive leading entry); only leading
/// entries are eliminated, which suffices for rank and independence queries.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    cols: usize,
    rows: Vec<SparseRow>,
    lead: Vec<Option<usize>>,
}

impl EchelonBasis {
    pub fn new(cols: usize) -> Self {
        Self { cols, rows: Vec::new(), lead: vec![None; cols] }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.cols
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        (0..self.cols).filter(|&c| self.lead[c].is_some()).collect()
    }

    /// Reduce `row` against the basis; returns the primitive remainder (empty if in the span).
    pub fn reduce(&self, row: SparseRow) -> SparseRow {
        let mut row = make_primitive(row);
        while let Some((c, _)) = row.first() {
            match self.lead[*c] {
                None => break,
                Some(p) => row = make_primitive(eliminate(&self.rows[p], &row)),
            }
        }
        row
    }

    /// Insert a row; returns whether the rank increased.
    pub fn insert(&mut self, row: SparseRow) -> bool {
        if self.is_full() {
            return false;
        }
        let row = self.reduce(row);
        match row.first() {
            None => false,
            Some(&(c, _)) => {
                self.lead[c] = Some(self.rows.len());
                self.rows.push(row);
                true
            }
        }
    }

    pub fn insert_unit(&mut self, col: usize) -> bool {
        self.insert(vec![(col, BigInt::one())])
    }

    pub fn insert_rational(&mut self, row: &[(usize, BigRational)]) -> bool {
        self.insert(sparse_from_rational(row))
    }
}

pub fn sparse_from_rational(row: &[(usize, BigRational)]) -> SparseRow {
    let l = row.iter().fold(BigInt::one(), |acc, (_, q)| acc.lcm(q.denom()));
    let mut out: SparseRow = row
        .iter()
        .filter(|(_, q)| !q.is_zero())
        .map(|(c, q)| (*c, q.numer() * (&l / q.denom())))
        .collect();
    out.sort_by_key(|(c, _)| *c);
    out
}

/// `a * row - b * pivot` with the leading entries cancelling.
fn eliminate(pivot: &SparseRow, row: &SparseRow) -> SparseRow {
    let pa = &pivot[0].1;
    let rb = &row[0].1;
    let g = pa.gcd(rb);
    let a = pa / &g;
    let b = rb / &g;
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (1, 1);
    while i < row.len() || j < pivot.len() {
        let ci = row.get(i).map_or(usize::MAX, |e| e.0);
        let cj = pivot.get(j).map_or(usize::MAX, |e| e.0);
        if ci < cj {
            out.push((ci, &a * &row[i].1));
            i += 1;
        } else if cj < ci {
            out.push((cj, -(&b * &pivot[j].1)));
            j += 1;
        } else {
            let v = &a * &row[i].1 - &b * &pivot[j].1;
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn make_primitive(mut row: SparseRow) -> SparseRow {
    row.retain(|(_, v)| !v.is_zero());
    if row.is_empty() {
        return row;
    }
    let mut g = BigInt::zero();
    for (_, v) in &row {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    if row[0].1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
    row
}

/// Rank of a set of sparse rows via [`EchelonBasis`].
pub fn sparse_rank(rows: impl IntoIterator<Item = SparseRow>, cols: usize) -> usize {
    let mut e = EchelonBasis::new(cols);
    for r in rows {
        e.insert(r);
        if e.is_full() {
            break;
        }
    }
    e.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rank_examples() {
        assert_eq!(rational_rank(&RationalMatrix::identity(3)), (3, vec![0, 1, 2]));
        assert_eq!(rational_rank(&RationalMatrix::zeros(3, 4)), (0, vec![]));
        let m = RationalMatrix::from_i64(&[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(rational_rank(&m), (1, vec![0]));
    }

    #[test]
    fn skipped_columns() {
        let m = RationalMatrix::from_i64(&[vec![0, 2, 1, 3], vec![0, 4, 2, 7], vec![0, 0, 0, 1]]).unwrap();
        assert_eq!(rational_rank(&m), (2, vec![1, 3]));
    }

    fn to_sparse(m: &RationalMatrix) -> Vec<SparseRow> {
        (0..m.rows())
            .map(|i| {
                let r: Vec<(usize, BigRational)> = m.row(i).iter().cloned().enumerate().collect();
                sparse_from_rational(&r)
            })
            .collect()
    }

    fn small_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            prop::collection::vec(prop::collection::vec(prop_oneof![Just(0i64), -3i64..4], c), r)
        })
    }

    proptest! {
        #[test]
        fn sparse_and_dense_agree(rows in small_matrix()) {
            let m = RationalMatrix::from_i64(&rows).unwrap();
            let (rank, pivots) = rational_rank(&m);
            let mut e = EchelonBasis::new(m.cols());
            for r in to_sparse(&m) {
                e.insert(r);
            }
            prop_assert_eq!(rank, e.rank());
            prop_assert_eq!(pivots, e.pivot_columns());
        }

        #[test]
        fn rank_invariant_under_row_ops(rows in small_matrix(), scale in 1i64..7, shift in 0usize..5) {
            let m = RationalMatrix::from_i64(&rows).unwrap();
            let mut permuted = rows.clone();
            let k = shift % permuted.len();
            permuted.rotate_left(k);
            for v in permuted[0].iter_mut() {
                *v *= -scale;
            }
            let p = RationalMatrix::from_i64(&permuted).unwrap();
            prop_assert_eq!(rational_rank(&m).0, rational_rank(&p).0);
        }
    }
}
