//! Bounded cochain complexes of finite-dimensional rational vector spaces and
//! their morphisms.
//!
//! A complex lives on a degree range `[lo, hi]`; every degree outside the
//! range is the zero space. The differential at degree `i` is a
//! `dim(i+1) x dim(i)` matrix, so the differential at `hi` is the zero map
//! into the zero space.

use std::collections::BTreeMap;
use std::fmt;

use crate::ratlinalg::QMatrix;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub degree: i32,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "degree {}: {}", self.degree, self.message)
    }
}

impl From<Violation> for Error {
    fn from(v: Violation) -> Self {
        Error::Invalid(v.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CochainComplex {
    lo: i32,
    dims: Vec<usize>,
    diffs: Vec<QMatrix>,
}

impl CochainComplex {
    /// `dims[k]` is the dimension in degree `lo + k`; `diffs[k]` leaves that
    /// degree. The last differential may be omitted (it maps to zero).
    pub fn new(lo: i32, dims: Vec<usize>, mut diffs: Vec<QMatrix>) -> Result<Self> {
        if diffs.len() + 1 == dims.len() {
            diffs.push(QMatrix::zeros(0, *dims.last().unwrap()));
        }
        if diffs.len() != dims.len() {
            return Err(Error::Invalid(format!(
                "complex has {} degrees but {} differentials",
                dims.len(),
                diffs.len()
            )));
        }
        for (k, d) in diffs.iter().enumerate() {
            let target = dims.get(k + 1).copied().unwrap_or(0);
            if d.shape() != (target, dims[k]) {
                return Err(Error::Invalid(format!(
                    "degree {}: differential has shape {:?}, expected {:?}",
                    lo + k as i32,
                    d.shape(),
                    (target, dims[k])
                )));
            }
        }
        Ok(CochainComplex { lo, dims, diffs })
    }

    pub fn empty() -> Self {
        CochainComplex {
            lo: 0,
            dims: Vec::new(),
            diffs: Vec::new(),
        }
    }

    /// Complex with the given dimensions and every differential zero.
    pub fn with_zero_differentials(lo: i32, dims: Vec<usize>) -> Self {
        let diffs = (0..dims.len())
            .map(|k| QMatrix::zeros(dims.get(k + 1).copied().unwrap_or(0), dims[k]))
            .collect();
        CochainComplex { lo, dims, diffs }
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    /// Degree range `(lo, hi)`, or `None` for the empty complex.
    pub fn degree_range(&self) -> Option<(i32, i32)> {
        (!self.dims.is_empty()).then(|| (self.lo, self.lo + self.dims.len() as i32 - 1))
    }

    fn slot(&self, i: i32) -> Option<usize> {
        let k = i.checked_sub(self.lo)?;
        (k >= 0 && (k as usize) < self.dims.len()).then_some(k as usize)
    }

    pub fn dim(&self, i: i32) -> usize {
        self.slot(i).map_or(0, |k| self.dims[k])
    }

    /// Differential `C^i -> C^{i+1}`; zero outside the range.
    pub fn diff(&self, i: i32) -> QMatrix {
        match self.slot(i) {
            Some(k) => self.diffs[k].clone(),
            None => QMatrix::zeros(self.dim(i + 1), self.dim(i)),
        }
    }

    fn diff_ref(&self, i: i32) -> Option<&QMatrix> {
        self.slot(i).map(|k| &self.diffs[k])
    }

    fn diff_rank(&self, i: i32) -> usize {
        self.diff_ref(i).map_or(0, QMatrix::rank)
    }

    pub fn validate(&self) -> Result<(), Violation> {
        for (k, pair) in self.diffs.windows(2).enumerate() {
            let dd = pair[1]
                .matmul(&pair[0])
                .expect("shapes checked at construction");
            if !dd.is_zero() {
                return Err(Violation {
                    degree: self.lo + k as i32,
                    message: "d∘d ≠ 0".into(),
                });
            }
        }
        Ok(())
    }

    /// `dim H^i` for every `i` in `lo..=hi`.
    pub fn cohomology_dims(&self, lo: i32, hi: i32) -> Result<Vec<usize>> {
        self.validate()?;
        Ok(self.cohomology_dims_unchecked(lo, hi))
    }

    /// Same as [`cohomology_dims`](Self::cohomology_dims) for complexes already
    /// known to be valid.
    pub fn cohomology_dims_unchecked(&self, lo: i32, hi: i32) -> Vec<usize> {
        let mut ranks: BTreeMap<i32, usize> = BTreeMap::new();
        let mut rank = |i: i32| *ranks.entry(i).or_insert_with(|| self.diff_rank(i));
        (lo..=hi)
            .map(|i| self.dim(i) - rank(i) - rank(i - 1))
            .collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.dims
            .iter()
            .enumerate()
            .map(|(k, &d)| sign(self.lo + k as i32) * d as i64)
            .sum()
    }

    /// Block-diagonal sum; summand `c` with offset `s` contributes its degree
    /// `i` to degree `i + s`. Differentials are copied without sign change.
    pub fn direct_sum(summands: &[(&CochainComplex, i32)]) -> CochainComplex {
        let ranges: Vec<(i32, i32)> = summands
            .iter()
            .filter_map(|(c, s)| c.degree_range().map(|(a, b)| (a + s, b + s)))
            .collect();
        let Some(lo) = ranges.iter().map(|r| r.0).min() else {
            return CochainComplex::empty();
        };
        let hi = ranges.iter().map(|r| r.1).max().unwrap();
        let mut dims = Vec::new();
        let mut diffs = Vec::new();
        for i in lo..=hi {
            let src: Vec<usize> = summands.iter().map(|(c, s)| c.dim(i - s)).collect();
            let tgt: Vec<usize> = summands.iter().map(|(c, s)| c.dim(i + 1 - s)).collect();
            let blocks: Vec<QMatrix> = summands.iter().map(|(c, s)| c.diff(i - s)).collect();
            let refs: Vec<(usize, usize, &QMatrix)> =
                blocks.iter().enumerate().map(|(k, m)| (k, k, m)).collect();
            dims.push(src.iter().sum());
            diffs.push(QMatrix::from_blocks(&tgt, &src, &refs).expect("block shapes agree"));
        }
        CochainComplex { lo, dims, diffs }
    }
}

fn sign(i: i32) -> i64 {
    if i.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Degreewise linear maps `source^i -> target^i`. Missing degrees are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexMorphism {
    pub source: CochainComplex,
    pub target: CochainComplex,
    maps: BTreeMap<i32, QMatrix>,
}

impl ComplexMorphism {
    pub fn new(
        source: CochainComplex,
        target: CochainComplex,
        maps: BTreeMap<i32, QMatrix>,
    ) -> Result<Self> {
        for (&i, m) in &maps {
            if m.shape() != (target.dim(i), source.dim(i)) {
                return Err(Error::Invalid(format!(
                    "degree {i}: morphism block has shape {:?}, expected {:?}",
                    m.shape(),
                    (target.dim(i), source.dim(i))
                )));
            }
        }
        Ok(ComplexMorphism {
            source,
            target,
            maps,
        })
    }

    pub fn identity(c: &CochainComplex) -> Self {
        let maps = c
            .degree_range()
            .map(|(lo, hi)| {
                (lo..=hi)
                    .map(|i| (i, QMatrix::identity(c.dim(i))))
                    .collect()
            })
            .unwrap_or_default();
        ComplexMorphism {
            source: c.clone(),
            target: c.clone(),
            maps,
        }
    }

    pub fn zero(source: &CochainComplex, target: &CochainComplex) -> Self {
        ComplexMorphism {
            source: source.clone(),
            target: target.clone(),
            maps: BTreeMap::new(),
        }
    }

    pub fn map_at(&self, i: i32) -> QMatrix {
        self.maps
            .get(&i)
            .cloned()
            .unwrap_or_else(|| QMatrix::zeros(self.target.dim(i), self.source.dim(i)))
    }

    /// Checks `target.diff(i) · map(i) = map(i+1) · source.diff(i)` at every
    /// degree where either side can be nonzero.
    pub fn validate(&self) -> Result<(), Violation> {
        let bounds = [self.source.degree_range(), self.target.degree_range()];
        let Some(lo) = bounds.iter().flatten().map(|r| r.0).min() else {
            return Ok(());
        };
        let hi = bounds.iter().flatten().map(|r| r.1).max().unwrap();
        for i in (lo - 1)..=hi {
            let left = self.target.diff(i).matmul(&self.map_at(i)).expect("shapes");
            let right = self
                .map_at(i + 1)
                .matmul(&self.source.diff(i))
                .expect("shapes");
            if left != right {
                return Err(Violation {
                    degree: i,
                    message: "square does not commute".into(),
                });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(rows: &[Vec<i64>]) -> QMatrix {
        QMatrix::from_dense(rows)
    }

    #[test]
    fn validate_examples() {
        let good = CochainComplex::new(0, vec![1, 1], vec![mat(&[vec![1]])]).unwrap();
        assert!(good.validate().is_ok());

        let bad =
            CochainComplex::new(0, vec![1, 1, 1], vec![mat(&[vec![1]]), mat(&[vec![1]])]).unwrap();
        assert_eq!(bad.validate().unwrap_err().degree, 0);

        assert!(CochainComplex::empty().validate().is_ok());
        assert!(CochainComplex::new(0, vec![2, 1], vec![mat(&[vec![1]])]).is_err());
    }

    #[test]
    fn cohomology_examples() {
        let acyclic = CochainComplex::new(0, vec![2, 2], vec![QMatrix::identity(2)]).unwrap();
        assert_eq!(acyclic.cohomology_dims(0, 1).unwrap(), vec![0, 0]);

        let trivial = CochainComplex::with_zero_differentials(0, vec![3, 5, 2]);
        assert_eq!(trivial.cohomology_dims(0, 2).unwrap(), vec![3, 5, 2]);

        // Boundary of the 2-simplex: vertices 0,1,2, edges 01,02,12.
        // (dφ)(ab) = φ(b) - φ(a).
        let d0 = mat(&[vec![-1, 1, 0], vec![-1, 0, 1], vec![0, -1, 1]]);
        assert_eq!(d0.rank(), 2);
        let circle = CochainComplex::new(0, vec![3, 3], vec![d0]).unwrap();
        assert_eq!(circle.cohomology_dims(0, 1).unwrap(), vec![1, 1]);
        assert_eq!(
            circle.cohomology_dims(-2, 3).unwrap(),
            vec![0, 0, 1, 1, 0, 0]
        );

        let bad =
            CochainComplex::new(0, vec![1, 1, 1], vec![mat(&[vec![1]]), mat(&[vec![1]])]).unwrap();
        assert!(bad.cohomology_dims(0, 2).is_err());
    }

    #[test]
    fn morphism_examples() {
        let c = CochainComplex::new(0, vec![1, 1], vec![mat(&[vec![1]])]).unwrap();
        assert!(ComplexMorphism::identity(&c).validate().is_ok());
        assert!(ComplexMorphism::zero(&c, &c).validate().is_ok());

        // 0 -> Q^2 -> Q^2 -> 0 with different differentials; swap fails.
        let a = CochainComplex::new(0, vec![2, 2], vec![mat(&[vec![1, 0], vec![0, 0]])]).unwrap();
        let b = a.clone();
        let swap = mat(&[vec![0, 1], vec![1, 0]]);
        let phi = ComplexMorphism::new(a, b, [(0, swap.clone()), (1, swap)].into_iter().collect())
            .unwrap();
        assert_eq!(phi.validate().unwrap_err().degree, 0);
    }

    #[test]
    fn direct_sum_examples() {
        assert!(CochainComplex::direct_sum(&[]).is_empty());
        let c = CochainComplex::new(0, vec![1, 1], vec![mat(&[vec![1]])]).unwrap();
        assert_eq!(CochainComplex::direct_sum(&[(&c, 0)]), c);
        let e = CochainComplex::with_zero_differentials(0, vec![1]);
        let s = CochainComplex::direct_sum(&[(&e, 0), (&e, 1)]);
        assert_eq!(s.degree_range(), Some((0, 1)));
        assert_eq!((s.dim(0), s.dim(1)), (1, 1));
        assert_eq!(s.cohomology_dims(0, 1).unwrap(), vec![1, 1]);
    }

    // Random valid complexes: every differential sends even coordinates to
    // odd ones, so consecutive maps compose to zero.
    fn random_complex() -> impl Strategy<Value = CochainComplex> {
        proptest::collection::vec(0usize..5, 1..5).prop_flat_map(|dims| {
            let n = dims.len();
            proptest::collection::vec(-2i64..=2, n * 25).prop_map(move |vals| {
                let diffs = (0..n)
                    .map(|k| {
                        let rows = dims.get(k + 1).copied().unwrap_or(0);
                        let t = (0..rows)
                            .filter(|r| r % 2 == 1)
                            .flat_map(|r| (0..dims[k]).filter(|c| c % 2 == 0).map(move |c| (r, c)))
                            .map(|(r, c)| {
                                let v = vals[k * 25 + r * 5 + c];
                                (r, c, crate::ratlinalg::Rational::from_integer(v))
                            });
                        QMatrix::from_triplets(rows, dims[k], t).unwrap()
                    })
                    .collect();
                CochainComplex::new(0, dims.clone(), diffs).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn generated_complexes_are_valid_and_euler_matches(c in random_complex()) {
            prop_assert!(c.validate().is_ok());
            let (lo, hi) = c.degree_range().unwrap();
            let h = c.cohomology_dims(lo, hi).unwrap();
            let chi: i64 = h.iter().enumerate().map(|(k, &d)| sign(lo + k as i32) * d as i64).sum();
            prop_assert_eq!(chi, c.euler_characteristic());
        }

        #[test]
        fn cohomology_of_sum_is_sum(a in random_complex(), b in random_complex()) {
            let s = CochainComplex::direct_sum(&[(&a, 0), (&b, 0)]);
            let ha = a.cohomology_dims(0, 5).unwrap();
            let hb = b.cohomology_dims(0, 5).unwrap();
            let hs = s.cohomology_dims(0, 5).unwrap();
            let sum: Vec<usize> = ha.iter().zip(&hb).map(|(x, y)| x + y).collect();
            prop_assert_eq!(hs, sum);
        }
    }
}
