//! First-quadrant double complexes.
//!
//! Cell `(i, j)` has a horizontal map `δ: D^{i,j} -> D^{i+1,j}` and a vertical
//! map `d̃: D^{i,j} -> D^{i,j+1}`. The stored convention is anticommuting
//! squares, `d̃δ + δd̃ = 0`; callers holding a commuting grid apply the
//! `(-1)^i` vertical sign before insertion.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::complexes::CochainComplex;
use crate::ratlinalg::QMatrix;
use crate::{Error, Result};

pub type Cell = (usize, usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellViolation {
    pub cell: Cell,
    pub message: String,
}

impl fmt::Display for CellViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "cell ({}, {}): {}",
            self.cell.0, self.cell.1, self.message
        )
    }
}

impl From<CellViolation> for Error {
    fn from(v: CellViolation) -> Self {
        Error::Invalid(v.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Filtration {
    /// First page is cohomology along rows (the horizontal map).
    Row,
    /// First page is cohomology along columns (the vertical map).
    Column,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DoubleComplex {
    dims: BTreeMap<Cell, usize>,
    horiz: BTreeMap<Cell, QMatrix>,
    vert: BTreeMap<Cell, QMatrix>,
}

impl DoubleComplex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set_cell(&mut self, cell: Cell, dim: usize) {
        self.dims.insert(cell, dim);
    }

    /// Horizontal map out of `cell`. Both endpoints must be in the support.
    pub fn set_horizontal(&mut self, cell: Cell, m: QMatrix) -> Result<()> {
        let target = (cell.0 + 1, cell.1);
        self.check_map_shape(cell, target, &m)?;
        self.horiz.insert(cell, m);
        Ok(())
    }

    /// Vertical map out of `cell`. Both endpoints must be in the support.
    pub fn set_vertical(&mut self, cell: Cell, m: QMatrix) -> Result<()> {
        let target = (cell.0, cell.1 + 1);
        self.check_map_shape(cell, target, &m)?;
        self.vert.insert(cell, m);
        Ok(())
    }

    fn check_map_shape(&self, src: Cell, tgt: Cell, m: &QMatrix) -> Result<()> {
        for c in [src, tgt] {
            if !self.dims.contains_key(&c) {
                return Err(Error::Invalid(format!(
                    "cell ({}, {}) is not in the support",
                    c.0, c.1
                )));
            }
        }
        let expected = (self.dim(tgt), self.dim(src));
        if m.shape() != expected {
            return Err(Error::Invalid(format!(
                "map ({}, {}) -> ({}, {}) has shape {:?}, expected {:?}",
                src.0,
                src.1,
                tgt.0,
                tgt.1,
                m.shape(),
                expected
            )));
        }
        Ok(())
    }

    pub fn support(&self) -> impl Iterator<Item = Cell> + '_ {
        self.dims.keys().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn dim(&self, cell: Cell) -> usize {
        self.dims.get(&cell).copied().unwrap_or(0)
    }

    pub fn horizontal(&self, cell: Cell) -> QMatrix {
        self.horiz
            .get(&cell)
            .cloned()
            .unwrap_or_else(|| QMatrix::zeros(self.dim((cell.0 + 1, cell.1)), self.dim(cell)))
    }

    pub fn vertical(&self, cell: Cell) -> QMatrix {
        self.vert
            .get(&cell)
            .cloned()
            .unwrap_or_else(|| QMatrix::zeros(self.dim((cell.0, cell.1 + 1)), self.dim(cell)))
    }

    fn left(&self, cell: Cell) -> Option<QMatrix> {
        (cell.0 > 0).then(|| self.horizontal((cell.0 - 1, cell.1)))
    }

    /// Largest `i + j` over the support.
    pub fn top_degree(&self) -> Option<usize> {
        self.dims.keys().map(|(i, j)| i + j).max()
    }

    /// Checks `δ∘δ = 0`, `d̃∘d̃ = 0` and `d̃δ + δd̃ = 0` cell by cell.
    pub fn validate(&self) -> Result<(), CellViolation> {
        for cell in self.support() {
            let (i, j) = cell;
            let h = self.horizontal(cell);
            let v = self.vertical(cell);
            let fail = |message: &str| CellViolation {
                cell,
                message: message.to_string(),
            };
            if !self.horizontal((i + 1, j)).matmul(&h).unwrap().is_zero() {
                return Err(fail("δ∘δ ≠ 0"));
            }
            if !self.vertical((i, j + 1)).matmul(&v).unwrap().is_zero() {
                return Err(fail("d̃∘d̃ ≠ 0"));
            }
            let vh = self.vertical((i + 1, j)).matmul(&h).unwrap();
            let hv = self.horizontal((i, j + 1)).matmul(&v).unwrap();
            if !vh.add(&hv).unwrap().is_zero() {
                return Err(fail("d̃δ + δd̃ ≠ 0"));
            }
        }
        Ok(())
    }

    /// `Tot^n = ⊕_{i+j=n} D^{i,j}` with differential `δ + d̃`. Summands of
    /// `Tot^n` are ordered by increasing `i`.
    pub fn total_complex(&self) -> Result<CochainComplex> {
        self.validate()?;
        let Some(top) = self.top_degree() else {
            return Ok(CochainComplex::empty());
        };
        let block_dims =
            |n: usize| -> Vec<usize> { (0..=n).map(|i| self.dim((i, n - i))).collect() };
        let mut dims = Vec::with_capacity(top + 1);
        let mut diffs = Vec::with_capacity(top + 1);
        for n in 0..=top {
            let src = block_dims(n);
            let tgt = block_dims(n + 1);
            let mut mats: Vec<(usize, usize, QMatrix)> = Vec::new();
            for i in 0..=n {
                let cell = (i, n - i);
                if let Some(m) = self.horiz.get(&cell) {
                    mats.push((i + 1, i, m.clone()));
                }
                if let Some(m) = self.vert.get(&cell) {
                    mats.push((i, i, m.clone()));
                }
            }
            let refs: Vec<(usize, usize, &QMatrix)> =
                mats.iter().map(|(r, c, m)| (*r, *c, m)).collect();
            dims.push(src.iter().sum());
            diffs.push(QMatrix::from_blocks(&tgt, &src, &refs)?);
        }
        CochainComplex::new(0, dims, diffs)
    }

    /// Keeps the cells with `i + j <= q + 1`; maps into dropped cells vanish.
    pub fn truncate(&self, q: usize) -> DoubleComplex {
        let keep = |c: &Cell| c.0 + c.1 <= q + 1;
        let dims: BTreeMap<Cell, usize> = self
            .dims
            .iter()
            .filter(|(c, _)| keep(c))
            .map(|(c, d)| (*c, *d))
            .collect();
        let horiz = self
            .horiz
            .iter()
            .filter(|(c, _)| keep(&(c.0 + 1, c.1)))
            .map(|(c, m)| (*c, m.clone()))
            .collect();
        let vert = self
            .vert
            .iter()
            .filter(|(c, _)| keep(&(c.0, c.1 + 1)))
            .map(|(c, m)| (*c, m.clone()))
            .collect();
        DoubleComplex { dims, horiz, vert }
    }

    /// Reflects across the diagonal, exchanging the two directions.
    pub fn transposed(&self) -> DoubleComplex {
        let flip = |c: &Cell| (c.1, c.0);
        DoubleComplex {
            dims: self.dims.iter().map(|(c, d)| (flip(c), *d)).collect(),
            horiz: self
                .vert
                .iter()
                .map(|(c, m)| (flip(c), m.clone()))
                .collect(),
            vert: self
                .horiz
                .iter()
                .map(|(c, m)| (flip(c), m.clone()))
                .collect(),
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .map(|((i, j), d)| {
                if (i + j) % 2 == 0 {
                    *d as i64
                } else {
                    -(*d as i64)
                }
            })
            .sum()
    }

    /// Dimensions of `E_1` or `E_2` for the chosen filtration.
    pub fn page(&self, filtration: Filtration, r: usize) -> Result<Page> {
        if !(1..=2).contains(&r) {
            return Err(Error::Invalid(format!("page E_{r} is not computed")));
        }
        self.validate()?;
        let dims = match filtration {
            Filtration::Row => self.row_page_dims(r),
            Filtration::Column => self
                .transposed()
                .row_page_dims(r)
                .into_iter()
                .map(|((i, j), d)| ((j, i), d))
                .collect(),
        };
        Ok(Page {
            r,
            filtration,
            dims,
        })
    }

    fn row_page_dims(&self, r: usize) -> BTreeMap<Cell, usize> {
        let mut e1 = BTreeMap::new();
        let mut ranks_h = BTreeMap::new();
        for cell in self.support() {
            ranks_h.insert(cell, self.horizontal(cell).rank());
        }
        let rank_h = |c: Cell| ranks_h.get(&c).copied().unwrap_or(0);
        for cell in self.support() {
            let left = if cell.0 > 0 {
                rank_h((cell.0 - 1, cell.1))
            } else {
                0
            };
            e1.insert(cell, self.dim(cell) - rank_h(cell) - left);
        }
        if r == 1 {
            return e1;
        }
        // Induced vertical map on E_1, one cell at a time:
        // rank(d̄) = rank([d̃·ker δ | im δ_in]) - rank(im δ_in) in the cell above.
        let mut induced: BTreeMap<Cell, usize> = BTreeMap::new();
        for cell in self.support() {
            let up = (cell.0, cell.1 + 1);
            if !self.dims.contains_key(&up) {
                continue;
            }
            let cycles = self.horizontal(cell).kernel_basis();
            let pushed = self.vertical(cell).matmul(&cycles).unwrap();
            let boundaries = self
                .left(up)
                .unwrap_or_else(|| QMatrix::zeros(self.dim(up), 0));
            let joint = pushed.hcat(&boundaries).unwrap().rank();
            let base = if up.0 > 0 {
                rank_h((up.0 - 1, up.1))
            } else {
                0
            };
            induced.insert(cell, joint - base);
        }
        let rank_v = |c: Cell| induced.get(&c).copied().unwrap_or(0);
        e1.iter()
            .map(|(&cell, &d)| {
                let from_below = if cell.1 > 0 {
                    rank_v((cell.0, cell.1 - 1))
                } else {
                    0
                };
                (cell, d - rank_v(cell) - from_below)
            })
            .collect()
    }

    /// Cells where the row complex fails to be exact away from column 0.
    pub fn inexact_row_cells(&self) -> BTreeSet<Cell> {
        let mut out = BTreeSet::new();
        for cell in self.support() {
            if cell.0 == 0 {
                continue;
            }
            let below = self.left(cell).map_or(0, |m| m.rank());
            if self.dim(cell) - self.horizontal(cell).rank() != below {
                out.insert(cell);
            }
        }
        out
    }
}

/// Dimensions of one page of a spectral sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Page {
    pub r: usize,
    pub filtration: Filtration,
    pub dims: BTreeMap<Cell, usize>,
}

impl Page {
    pub fn dim_at(&self, cell: Cell) -> usize {
        self.dims.get(&cell).copied().unwrap_or(0)
    }

    /// Plain-text grid with rows printed top to bottom.
    pub fn render(&self) -> String {
        let max_i = self.dims.keys().map(|c| c.0).max().unwrap_or(0);
        let max_j = self.dims.keys().map(|c| c.1).max().unwrap_or(0);
        let mut out = String::new();
        for j in (0..=max_j).rev() {
            out.push_str(&format!("{j:>3} |"));
            for i in 0..=max_i {
                match self.dims.get(&(i, j)) {
                    Some(d) => out.push_str(&format!(" {d:>4}")),
                    None => out.push_str("    ."),
                }
            }
            out.push('\n');
        }
        out.push_str("    +");
        out.push_str(&"-----".repeat(max_i + 1));
        out.push('\n');
        out.push_str("     ");
        for i in 0..=max_i {
            out.push_str(&format!(" {i:>4}"));
        }
        out.push('\n');
        out
    }
}
