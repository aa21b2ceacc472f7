use std::fmt;

use super::Rational;
use crate::{Error, Result};

/// Sparse vector as `(index, value)` pairs, strictly increasing in index, with
/// no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec(Vec<(usize, Rational)>);

impl SparseVec {
    pub fn new() -> Self {
        SparseVec(Vec::new())
    }

    pub fn unit(i: usize) -> Self {
        SparseVec(vec![(i, Rational::one())])
    }

    /// Collects pairs in any order; duplicate indices are summed.
    pub fn from_pairs(mut pairs: Vec<(usize, Rational)>) -> Self {
        pairs.sort_by_key(|(i, _)| *i);
        let mut out: Vec<(usize, Rational)> = Vec::with_capacity(pairs.len());
        for (i, v) in pairs {
            match out.last_mut() {
                Some((j, acc)) if *j == i => *acc = &*acc + &v,
                _ => out.push((i, v)),
            }
        }
        out.retain(|(_, v)| !v.is_zero());
        SparseVec(out)
    }

    pub fn entries(&self) -> &[(usize, Rational)] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn nnz(&self) -> usize {
        self.0.len()
    }

    pub fn lead(&self) -> Option<&(usize, Rational)> {
        self.0.first()
    }

    pub fn get(&self, i: usize) -> Rational {
        match self.0.binary_search_by_key(&i, |(j, _)| *j) {
            Ok(pos) => self.0[pos].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    /// `self + factor * other`
    pub fn axpy(&self, factor: &Rational, other: &SparseVec) -> SparseVec {
        if factor.is_zero() {
            return self.clone();
        }
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i].clone());
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push((b[j].0, factor * &b[j].1));
                j += 1;
            } else {
                let v = &a[i].1 + &(factor * &b[j].1);
                if !v.is_zero() {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        SparseVec(out)
    }

    pub fn scale(&self, factor: &Rational) -> SparseVec {
        if factor.is_zero() {
            return SparseVec::new();
        }
        SparseVec(self.0.iter().map(|(i, v)| (*i, v * factor)).collect())
    }

    fn shifted(&self, offset: usize) -> impl Iterator<Item = (usize, Rational)> + '_ {
        self.0.iter().map(move |(i, v)| (i + offset, v.clone()))
    }
}

/// Sparse rational matrix stored by columns.
#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: Vec<SparseVec>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols: vec![SparseVec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        QMatrix {
            rows: n,
            cols: (0..n).map(SparseVec::unit).collect(),
        }
    }

    /// Builds from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, Rational)>,
    ) -> Result<Self> {
        let mut buckets: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); cols];
        for (r, c, v) in triplets {
            if r >= rows || c >= cols {
                return Err(Error::IndexOutOfRange {
                    what: "matrix entry",
                    index: if r >= rows { r } else { c },
                    bound: if r >= rows { rows } else { cols },
                });
            }
            buckets[c].push((r, v));
        }
        Ok(QMatrix {
            rows,
            cols: buckets.into_iter().map(SparseVec::from_pairs).collect(),
        })
    }

    /// Row-major dense integer input, mostly for tests.
    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let triplets = rows.iter().enumerate().flat_map(|(r, row)| {
            assert_eq!(row.len(), ncols, "ragged dense matrix");
            row.iter()
                .enumerate()
                .map(move |(c, &v)| (r, c, Rational::from_integer(v)))
        });
        Self::from_triplets(nrows, ncols, triplets).expect("indices in range")
    }

    pub fn from_columns(rows: usize, cols: Vec<SparseVec>) -> Self {
        debug_assert!(cols
            .iter()
            .all(|c| c.lead().is_none() || c.entries().last().unwrap().0 < rows));
        QMatrix { rows, cols }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols.len())
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        self.cols[c].get(r)
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(SparseVec::nnz).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(SparseVec::is_empty)
    }

    /// Non-zero entries in column-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &Rational)> + '_ {
        self.cols
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.entries().iter().map(move |(r, v)| (*r, c, v)))
    }

    pub fn transpose(&self) -> QMatrix {
        let mut rows: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); self.rows];
        for (c, col) in self.cols.iter().enumerate() {
            for (r, v) in col.entries() {
                rows[*r].push((c, v.clone()));
            }
        }
        QMatrix {
            rows: self.cols.len(),
            cols: rows.into_iter().map(SparseVec).collect(),
        }
    }

    pub fn matmul(&self, rhs: &QMatrix) -> Result<QMatrix> {
        if self.ncols() != rhs.nrows() {
            return Err(Error::DimensionMismatch {
                op: "matmul",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let cols = rhs
            .cols
            .iter()
            .map(|rc| {
                let mut acc = SparseVec::new();
                for (k, v) in rc.entries() {
                    acc = acc.axpy(v, &self.cols[*k]);
                }
                acc
            })
            .collect();
        Ok(QMatrix {
            rows: self.rows,
            cols,
        })
    }

    pub fn add(&self, rhs: &QMatrix) -> Result<QMatrix> {
        self.add_scaled(&Rational::one(), rhs)
    }

    /// `self + factor * rhs`
    pub fn add_scaled(&self, factor: &Rational, rhs: &QMatrix) -> Result<QMatrix> {
        if self.shape() != rhs.shape() {
            return Err(Error::DimensionMismatch {
                op: "add",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        Ok(QMatrix {
            rows: self.rows,
            cols: self
                .cols
                .iter()
                .zip(&rhs.cols)
                .map(|(a, b)| a.axpy(factor, b))
                .collect(),
        })
    }

    pub fn scale(&self, factor: &Rational) -> QMatrix {
        QMatrix {
            rows: self.rows,
            cols: self.cols.iter().map(|c| c.scale(factor)).collect(),
        }
    }

    pub fn neg(&self) -> QMatrix {
        self.scale(&Rational::from_integer(-1))
    }

    /// Side-by-side concatenation `[self | rhs]`.
    pub fn hcat(&self, rhs: &QMatrix) -> Result<QMatrix> {
        if self.rows != rhs.rows {
            return Err(Error::DimensionMismatch {
                op: "hcat",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let mut cols = self.cols.clone();
        cols.extend(rhs.cols.iter().cloned());
        Ok(QMatrix {
            rows: self.rows,
            cols,
        })
    }

    /// Assembles a block matrix. `blocks` lists `(row_block, col_block, matrix)`;
    /// missing blocks are zero. Each block must match its row/column sizes.
    pub fn from_blocks(
        row_sizes: &[usize],
        col_sizes: &[usize],
        blocks: &[(usize, usize, &QMatrix)],
    ) -> Result<QMatrix> {
        let row_off = offsets(row_sizes);
        let col_off = offsets(col_sizes);
        let total_rows = row_off[row_sizes.len()];
        let mut cols: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); col_off[col_sizes.len()]];
        for &(bi, bj, m) in blocks {
            if m.shape() != (row_sizes[bi], col_sizes[bj]) {
                return Err(Error::DimensionMismatch {
                    op: "from_blocks",
                    left: (row_sizes[bi], col_sizes[bj]),
                    right: m.shape(),
                });
            }
            for (j, col) in m.cols.iter().enumerate() {
                cols[col_off[bj] + j].extend(col.shifted(row_off[bi]));
            }
        }
        Ok(QMatrix {
            rows: total_rows,
            cols: cols.into_iter().map(SparseVec::from_pairs).collect(),
        })
    }

    pub fn rank(&self) -> usize {
        eliminate(self, false).rank
    }

    /// Columns form a basis of the null space; there are `ncols - rank` of them.
    pub fn kernel_basis(&self) -> QMatrix {
        let red = eliminate(self, true);
        QMatrix {
            rows: self.ncols(),
            cols: red.kernel,
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<Rational>> {
        let mut out = vec![vec![Rational::zero(); self.ncols()]; self.rows];
        for (r, c, v) in self.triplets() {
            out[r][c] = v.clone();
        }
        out
    }
}

fn offsets(sizes: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(sizes.len() + 1);
    let mut acc = 0;
    out.push(0);
    for s in sizes {
        acc += s;
        out.push(acc);
    }
    out
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.ncols())?;
        if self.rows * self.ncols() <= 400 {
            for row in self.to_dense() {
                let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
                writeln!(f, "  {}", cells.join(" "))?;
            }
        } else {
            writeln!(f, "  {} nonzeros", self.nnz())?;
        }
        write!(f, "]")
    }
}

struct Reduction {
    rank: usize,
    kernel: Vec<SparseVec>,
}

struct Work {
    col: SparseVec,
    combo: Option<SparseVec>,
}

/// Column echelon reduction keyed by the lowest row index of each column.
///
/// Columns sharing a lead row are reduced against one pivot chosen by
/// (nonzero count, lead bit size). When `track` is set, the combinations of
/// original columns are carried along and the ones that reduce to zero are
/// returned as a kernel basis.
fn eliminate(m: &QMatrix, track: bool) -> Reduction {
    let mut buckets: Vec<Vec<Work>> = (0..m.nrows()).map(|_| Vec::new()).collect();
    let mut kernel = Vec::new();
    for (j, col) in m.cols.iter().enumerate() {
        let combo = track.then(|| SparseVec::unit(j));
        match col.lead() {
            None => kernel.extend(combo),
            Some((r, _)) => buckets[*r].push(Work {
                col: col.clone(),
                combo,
            }),
        }
    }
    let mut rank = 0;
    for r in 0..m.nrows() {
        let mut bucket = std::mem::take(&mut buckets[r]);
        if bucket.is_empty() {
            continue;
        }
        rank += 1;
        let best = bucket
            .iter()
            .enumerate()
            .min_by_key(|(_, w)| (w.col.nnz(), w.col.lead().unwrap().1.bit_size()))
            .map(|(i, _)| i)
            .unwrap();
        let pivot = bucket.swap_remove(best);
        let pivot_lead = pivot.col.lead().unwrap().1.clone();
        for w in bucket {
            let factor = -(&w.col.lead().unwrap().1 / &pivot_lead);
            let col = w.col.axpy(&factor, &pivot.col);
            let combo = w
                .combo
                .map(|c| c.axpy(&factor, pivot.combo.as_ref().unwrap()));
            match col.lead() {
                None => kernel.extend(combo),
                Some((nr, _)) => buckets[*nr].push(Work { col, combo }),
            }
        }
    }
    Reduction { rank, kernel }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    #[test]
    fn rank_examples() {
        assert_eq!(QMatrix::from_dense(&[vec![1, 2], vec![2, 4]]).rank(), 1);
        assert_eq!(QMatrix::zeros(3, 3).rank(), 0);
        assert_eq!(QMatrix::identity(5).rank(), 5);
        assert_eq!(QMatrix::zeros(0, 4).rank(), 0);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(QMatrix::identity(4).kernel_basis().ncols(), 0);

        let k = QMatrix::from_dense(&[vec![1, 1]]).kernel_basis();
        assert_eq!(k.shape(), (2, 1));
        assert_eq!(k.get(0, 0), -k.get(1, 0));
        assert!(!k.get(0, 0).is_zero());

        let k = QMatrix::from_dense(&[vec![1, 2], vec![2, 4]]).kernel_basis();
        assert_eq!(k.shape(), (2, 1));
        // proportional to (-2, 1)
        assert_eq!(k.get(0, 0), &q(-2) * &k.get(1, 0));
    }

    #[test]
    fn matmul_examples() {
        let m = QMatrix::from_dense(&[vec![1, 2, 3], vec![4, 5, 6]]);
        assert_eq!(QMatrix::identity(2).matmul(&m).unwrap(), m);
        assert!(m.matmul(&QMatrix::zeros(3, 4)).unwrap().is_zero());
        let n = QMatrix::from_dense(&[vec![0, 1], vec![0, 0]]);
        assert!(n.matmul(&n).unwrap().is_zero());
        assert!(matches!(
            m.matmul(&m),
            Err(Error::DimensionMismatch { op: "matmul", .. })
        ));
    }

    #[test]
    fn blocks_place_entries() {
        let a = QMatrix::identity(2);
        let b = QMatrix::from_dense(&[vec![7]]);
        let m = QMatrix::from_blocks(&[2, 1], &[1, 2], &[(0, 1, &a), (1, 0, &b)]).unwrap();
        assert_eq!(
            m,
            QMatrix::from_dense(&[vec![0, 1, 0], vec![0, 0, 1], vec![7, 0, 0]])
        );
    }

    #[test]
    fn triplets_reject_out_of_range() {
        assert!(QMatrix::from_triplets(2, 2, [(2, 0, q(1))]).is_err());
        let m = QMatrix::from_triplets(2, 2, [(0, 0, q(1)), (0, 0, q(-1))]).unwrap();
        assert_eq!(m.nnz(), 0);
    }

    fn small_matrix() -> impl Strategy<Value = QMatrix> {
        (0usize..7, 0usize..7).prop_flat_map(|(r, c)| {
            proptest::collection::vec(proptest::collection::vec(-3i64..=3, c), r).prop_map(
                move |rows| {
                    if rows.is_empty() {
                        QMatrix::zeros(0, c)
                    } else {
                        QMatrix::from_dense(&rows)
                    }
                },
            )
        })
    }

    // Dense fraction arithmetic, independent of the sparse elimination above.
    fn dense_rank(m: &QMatrix) -> usize {
        let mut a = m.to_dense();
        let (rows, cols) = m.shape();
        let mut rank = 0;
        for c in 0..cols {
            let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
                continue;
            };
            a.swap(rank, p);
            let pivot = a[rank].clone();
            for (r, row) in a.iter_mut().enumerate() {
                if r != rank && !row[c].is_zero() {
                    let f = &row[c] / &pivot[c];
                    for (x, y) in row.iter_mut().zip(&pivot) {
                        *x = &*x - &(&f * y);
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    proptest! {
        #[test]
        fn rank_matches_dense_oracle(m in small_matrix()) {
            prop_assert_eq!(m.rank(), dense_rank(&m));
        }

        #[test]
        fn rank_of_transpose(m in small_matrix()) {
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn rank_nullity_and_kernel_annihilated(m in small_matrix()) {
            let k = m.kernel_basis();
            prop_assert_eq!(k.ncols() + m.rank(), m.ncols());
            prop_assert!(m.matmul(&k).unwrap().is_zero());
            prop_assert_eq!(k.rank(), k.ncols());
        }
    }
}
