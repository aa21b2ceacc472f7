//! The descent double complex of a simplicial surjection `f: X -> Y`.
//!
//! Column `p` holds the cochains of the fibered power `W^p`, the vertical map
//! is `(-1)^p` times the coboundary and the horizontal map is
//! `δ^p = Σ_i (-1)^i π*_{p+1,i}`. Truncated to `p + n <= q + 1`, the total
//! complex computes `H^0(Y) .. H^q(Y)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::bicomplex::{Cell, DoubleComplex, Filtration, Page};
use crate::ratlinalg::{QMatrix, Rational};
use crate::simpsets::{
    coboundary_matrix, cochain_complex, cochain_dim, fibered_power, induced_sset_map,
    nerve_of_complex, projection_map, pullback_matrix, CochainModel, FiberedPower, SComplex,
    SSetMap, SimplexTerm, VertexMap,
};
use crate::{Error, Result};

/// A valid vertex map together with the Betti range `0..=q`. The target is
/// always the image complex, so the map is onto.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescentProblem {
    map: VertexMap,
    q: usize,
}

impl DescentProblem {
    pub fn new(f: &VertexMap, q: usize) -> Result<Self> {
        f.validate()?;
        Ok(DescentProblem {
            map: f.onto_image(),
            q,
        })
    }

    pub fn from_parts(x: SComplex, y: SComplex, assignment: Vec<usize>, q: usize) -> Result<Self> {
        Self::new(&VertexMap::new(x, y, assignment)?, q)
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn source(&self) -> &SComplex {
        &self.map.source
    }

    pub fn image(&self) -> &SComplex {
        &self.map.target
    }

    pub fn map(&self) -> &VertexMap {
        &self.map
    }

    /// Same map, different Betti range.
    pub fn with_q(&self, q: usize) -> Self {
        DescentProblem {
            map: self.map.clone(),
            q,
        }
    }

    /// The induced map of nerves, enumerated up to dimension `cap`.
    pub fn simplicial_map(&self, cap: usize) -> Result<SSetMap> {
        let x = nerve_of_complex(&self.map.source, cap);
        let y = nerve_of_complex(&self.map.target, cap);
        let g = induced_sset_map(&self.map, &x, &y)?;
        if !g.is_levelwise_surjective(cap) {
            return Err(Error::Invalid(
                "map is not surjective on simplices of every dimension".into(),
            ));
        }
        Ok(g)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiVector {
    pub values: Vec<usize>,
}

impl BettiVector {
    pub fn zeros(q: usize) -> Self {
        BettiVector {
            values: vec![0; q + 1],
        }
    }
}

impl From<Vec<usize>> for BettiVector {
    fn from(values: Vec<usize>) -> Self {
        BettiVector { values }
    }
}

impl fmt::Display for BettiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(usize::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

/// The fibered powers `W^0 .. W^{q+1}` with `W^p` enumerated up to dimension
/// `q + 1 - p`, which is all the truncated double complex touches.
struct Tower {
    q: usize,
    powers: Vec<FiberedPower>,
}

impl Tower {
    fn build(prob: &DescentProblem) -> Result<Self> {
        let q = prob.q;
        let g = prob.simplicial_map(q + 1)?;
        let powers = (0..=q + 1)
            .map(|p| fibered_power(&g, p, q + 1 - p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Tower { q, powers })
    }

    fn horizontal(&self, p: usize, n: usize, model: CochainModel) -> Result<QMatrix> {
        let upper = &self.powers[p + 1];
        let lower = &self.powers[p];
        let rows = cochain_dim(upper.carrier(), n, model)?;
        let cols = cochain_dim(lower.carrier(), n, model)?;
        let mut acc = QMatrix::zeros(rows, cols);
        for i in 0..=p + 1 {
            let pi = projection_map(upper, lower, i)?;
            let sign = Rational::from_integer(if i % 2 == 0 { 1 } else { -1 });
            acc = acc.add_scaled(&sign, &pullback_matrix(&pi, n, model)?)?;
        }
        Ok(acc)
    }

    fn double_complex(&self, model: CochainModel) -> Result<DoubleComplex> {
        let top = self.q + 1;
        let mut dc = DoubleComplex::new();
        for (p, w) in self.powers.iter().enumerate() {
            for n in 0..=top - p {
                dc.set_cell((p, n), cochain_dim(w.carrier(), n, model)?);
            }
        }
        for (p, w) in self.powers.iter().enumerate() {
            for n in 0..top - p {
                let d = coboundary_matrix(w.carrier(), n, model)?;
                let d = if p % 2 == 0 { d } else { d.neg() };
                dc.set_vertical((p, n), d)?;
                dc.set_horizontal((p, n), self.horizontal(p, n, model)?)?;
            }
        }
        dc.validate()?;
        Ok(dc)
    }
}

/// The truncated descent double complex, cells `(p, n)` with `p + n <= q + 1`.
pub fn build_descent_double_complex(
    prob: &DescentProblem,
    model: CochainModel,
) -> Result<DoubleComplex> {
    Tower::build(prob)?.double_complex(model)
}

/// `W^0 .. W^{q+1}`, with `W^p` enumerated up to dimension `q + 1 - p`.
pub fn fibered_powers(prob: &DescentProblem) -> Result<Vec<FiberedPower>> {
    Ok(Tower::build(prob)?.powers)
}

/// `b_0 .. b_q` of the image as cohomology of the total complex.
pub fn betti_of_image(prob: &DescentProblem) -> Result<BettiVector> {
    betti_of_image_with(prob, CochainModel::Normalized)
}

pub fn betti_of_image_with(prob: &DescentProblem, model: CochainModel) -> Result<BettiVector> {
    let tot = build_descent_double_complex(prob, model)?.total_complex()?;
    Ok(tot.cohomology_dims(0, prob.q as i32)?.into())
}

/// `b_0 .. b_q` of the image complex from its own normalized cochains.
pub fn direct_betti(prob: &DescentProblem) -> Result<BettiVector> {
    let y = nerve_of_complex(prob.image(), prob.q + 1);
    let c = cochain_complex(&y.sset, prob.q + 1, CochainModel::Normalized)?;
    Ok(c.cohomology_dims(0, prob.q as i32)?.into())
}

/// `b_0 .. b_upto` of the fibered power `W^p`.
pub fn power_betti(prob: &DescentProblem, p: usize, upto: usize) -> Result<BettiVector> {
    let g = prob.simplicial_map(upto + 1)?;
    let w = fibered_power(&g, p, upto + 1)?;
    let c = cochain_complex(w.carrier(), upto + 1, CochainModel::Normalized)?;
    Ok(c.cohomology_dims(0, upto as i32)?.into())
}

/// Where in `0 -> C^n(Y) -> C^n(W^0) -> C^n(W^1) -> ...` a check sits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MvPosition {
    /// Injectivity of `f*: C^n(Y) -> C^n(W^0)`.
    Augmentation,
    /// Exactness at `C^n(W^p)`.
    Power(usize),
}

impl fmt::Display for MvPosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MvPosition::Augmentation => f.write_str("C(Y)"),
            MvPosition::Power(p) => write!(f, "C(W^{p})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactnessEntry {
    pub degree: usize,
    pub position: MvPosition,
    /// Dimension of the kernel of the outgoing map.
    pub kernel: usize,
    /// Dimension of the image of the incoming map.
    pub image: usize,
    pub pass: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExactnessReport {
    pub entries: Vec<ExactnessEntry>,
}

impl ExactnessReport {
    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ExactnessEntry> {
        self.entries.iter().filter(|e| !e.pass)
    }
}

/// Unnormalized `n`-cochains split over the simplices of `Y`: the row
/// `C^n(W^•)` is the direct sum over `y ∈ Y_n` of the Čech complex of the
/// fiber `f^{-1}(y)` mapping to a point. Fibers of equal size give equal
/// blocks, so ranks are cached by fiber size.
#[derive(Default)]
struct CechRanks {
    cache: HashMap<(usize, usize), usize>,
}

impl CechRanks {
    /// Rank of `δ^p: Map(F^{p+1}) -> Map(F^{p+2})` for `|F| = s`.
    fn delta(&mut self, s: usize, p: usize) -> usize {
        *self
            .cache
            .entry((s, p))
            .or_insert_with(|| cech_delta(s, p).rank())
    }
}

fn encode(tuple: &[usize], s: usize) -> usize {
    tuple.iter().fold(0, |acc, &t| acc * s + t)
}

/// `(δφ)(t) = Σ_i (-1)^i φ(t with entry i removed)` on tuples of length
/// `p + 1` from a set of size `s`.
fn cech_delta(s: usize, p: usize) -> QMatrix {
    let cols = s.pow(p as u32 + 1);
    let rows = cols * s;
    let mut triplets = Vec::with_capacity(rows * (p + 2));
    let mut tuple = vec![0; p + 2];
    for row in 0..rows {
        let mut r = row;
        for slot in tuple.iter_mut().rev() {
            *slot = r % s;
            r /= s;
        }
        for i in 0..=p + 1 {
            let mut dropped = tuple.clone();
            dropped.remove(i);
            let sign = if i % 2 == 0 { 1 } else { -1 };
            triplets.push((row, encode(&dropped, s), Rational::from_integer(sign)));
        }
    }
    QMatrix::from_triplets(rows, cols, triplets).expect("tuple codes are in range")
}

/// Levelwise exactness of `0 -> C^n(Y) -> C^n(W^0) -> C^n(W^1) -> ...` on
/// unnormalized cochains: injectivity for `n <= q + 1`, exactness at `W^p`
/// for `p + n <= q`, the range the truncated complex depends on.
pub fn verify_mv_exactness(prob: &DescentProblem) -> Result<ExactnessReport> {
    let q = prob.q;
    let g = prob.simplicial_map(q + 1)?;
    let mut ranks = CechRanks::default();
    let mut report = ExactnessReport::default();
    for n in 0..=q + 1 {
        let mut fibers: BTreeMap<SimplexTerm, usize> = g
            .target()
            .simplices_at(n)?
            .terms
            .iter()
            .map(|y| (y.clone(), 0))
            .collect();
        for x in &g.source().simplices_at(n)?.terms {
            *fibers.entry(g.apply(x)).or_default() += 1;
        }
        let sizes: Vec<usize> = fibers.values().copied().collect();

        // f* on one fiber is the column of ones: rank 1 unless the fiber is empty.
        let aug_rank = sizes.iter().filter(|&&s| s > 0).count();
        let aug_kernel = sizes.len() - aug_rank;
        report.entries.push(ExactnessEntry {
            degree: n,
            position: MvPosition::Augmentation,
            kernel: aug_kernel,
            image: 0,
            pass: aug_kernel == 0,
        });
        if n > q {
            continue;
        }
        let mut incoming = aug_rank;
        for p in 0..=q - n {
            let dim: usize = sizes.iter().map(|&s| s.pow(p as u32 + 1)).sum();
            let rank: usize = sizes.iter().map(|&s| ranks.delta(s, p)).sum();
            let kernel = dim - rank;
            report.entries.push(ExactnessEntry {
                degree: n,
                position: MvPosition::Power(p),
                kernel,
                image: incoming,
                pass: kernel == incoming,
            });
            incoming = rank;
        }
    }
    Ok(report)
}

/// The two sides of `b_n(Y) <= Σ_{i+j=n} b_j(W^i)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Inequality {
    pub n: usize,
    pub lhs: usize,
    pub rhs: usize,
}

impl Inequality {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs
    }
}

pub fn descent_inequality(prob: &DescentProblem, n: usize) -> Result<Inequality> {
    if n > prob.q {
        return Err(Error::IndexOutOfRange {
            what: "inequality degree",
            index: n,
            bound: prob.q + 1,
        });
    }
    let lhs = direct_betti(prob)?.values[n];
    let g = prob.simplicial_map(n + 1)?;
    let mut rhs = 0;
    for i in 0..=n {
        let j = n - i;
        let w = fibered_power(&g, i, j + 1)?;
        let c = cochain_complex(w.carrier(), j + 1, CochainModel::Normalized)?;
        rhs += c.cohomology_dims(j as i32, j as i32)?[0];
    }
    Ok(Inequality { n, lhs, rhs })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct E2Report {
    pub e1: Page,
    pub e2: Page,
    /// `E_2^{0,n}` for `n <= q`.
    pub column0: Vec<usize>,
    /// Cohomology of the image computed directly.
    pub direct: Vec<usize>,
    /// Cells with `p >= 1`, `p + n <= q` where `E_2` is nonzero.
    pub nonzero_off_column: Vec<Cell>,
}

impl E2Report {
    pub fn passed(&self) -> bool {
        self.column0 == self.direct && self.nonzero_off_column.is_empty()
    }
}

/// Row-filtration pages of the truncated descent complex: `E_1 = H_δ`, which
/// collapses onto column 0, so `E_2` is the cohomology of the image there.
pub fn e2_degeneration_report(prob: &DescentProblem) -> Result<E2Report> {
    let q = prob.q;
    let dc = build_descent_double_complex(prob, CochainModel::Normalized)?;
    let e1 = dc.page(Filtration::Row, 1)?;
    let e2 = dc.page(Filtration::Row, 2)?;
    let column0 = (0..=q).map(|n| e2.dim_at((0, n))).collect();
    let nonzero_off_column = e2
        .dims
        .iter()
        .filter(|(&(p, n), &d)| p >= 1 && p + n <= q && d != 0)
        .map(|(&c, _)| c)
        .collect();
    Ok(E2Report {
        e1,
        e2,
        column0,
        direct: direct_betti(prob)?.values,
        nonzero_off_column,
    })
}

/// Dimension of `D^{p,n}` along the bottom row `n = 0`, for `p <= q + 1`.
pub fn bottom_row_dims(dc: &DoubleComplex) -> Vec<usize> {
    let mut out = Vec::new();
    let mut p = 0;
    while dc.support().any(|c| c == (p, 0)) {
        out.push(dc.dim((p, 0)));
        p += 1;
    }
    out
}
