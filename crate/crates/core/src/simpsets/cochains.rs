use std::collections::BTreeMap;

use super::sset::{SSet, SSetMap};
use crate::complexes::{CochainComplex, ComplexMorphism};
use crate::ratlinalg::{QMatrix, Rational};
use crate::{Error, Result};

/// Which cochains to use. Normalized cochains are functions on nondegenerate
/// simplices; unnormalized ones are functions on all simplices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CochainModel {
    Normalized,
    Unnormalized,
}

fn sign(i: usize) -> Rational {
    Rational::from_integer(if i.is_multiple_of(2) { 1 } else { -1 })
}

pub fn cochain_dim(x: &SSet, n: usize, model: CochainModel) -> Result<usize> {
    match model {
        CochainModel::Normalized => {
            if n > x.cap() {
                return Err(Error::CapExceeded {
                    requested: n,
                    cap: x.cap(),
                });
            }
            Ok(x.nondegenerate_count(n))
        }
        CochainModel::Unnormalized => Ok(x.simplices_at(n)?.len()),
    }
}

/// Matrix of `d: C^n -> C^{n+1}`, `(dφ)(y) = Σ_i (-1)^i φ(d_i y)`. In the
/// normalized model degenerate faces contribute nothing.
pub fn coboundary_matrix(x: &SSet, n: usize, model: CochainModel) -> Result<QMatrix> {
    if n + 1 > x.cap() {
        return Err(Error::CapExceeded {
            requested: n + 1,
            cap: x.cap(),
        });
    }
    let mut triplets = Vec::new();
    let (rows, cols) = match model {
        CochainModel::Normalized => {
            for y in 0..x.nondegenerate_count(n + 1) {
                for i in 0..=n + 1 {
                    let f = x.nd_face(n + 1, y, i);
                    if !f.is_degenerate() {
                        triplets.push((y, f.base(), sign(i)));
                    }
                }
            }
            (x.nondegenerate_count(n + 1), x.nondegenerate_count(n))
        }
        CochainModel::Unnormalized => {
            let src = x.simplices_at(n)?;
            let tgt = x.simplices_at(n + 1)?;
            for (row, y) in tgt.terms.iter().enumerate() {
                for i in 0..=n + 1 {
                    let col = src.position(&x.face(y, i)).expect("faces are simplices");
                    triplets.push((row, col, sign(i)));
                }
            }
            (tgt.len(), src.len())
        }
    };
    QMatrix::from_triplets(rows, cols, triplets)
}

/// Cochain complex in degrees `0..=top` with `top = min(cap, x.cap())`. The
/// differential out of `top` is dropped, so cohomology is exact below `top`.
pub fn cochain_complex(x: &SSet, cap: usize, model: CochainModel) -> Result<CochainComplex> {
    let top = cap.min(x.cap());
    let dims = (0..=top)
        .map(|n| cochain_dim(x, n, model))
        .collect::<Result<Vec<_>>>()?;
    let diffs = (0..top)
        .map(|n| coboundary_matrix(x, n, model))
        .collect::<Result<Vec<_>>>()?;
    CochainComplex::new(0, dims, diffs)
}

pub fn normalized_cochain_complex(x: &SSet, cap: usize) -> Result<CochainComplex> {
    cochain_complex(x, cap, CochainModel::Normalized)
}

pub fn unnormalized_cochain_complex(x: &SSet, cap: usize) -> Result<CochainComplex> {
    cochain_complex(x, cap, CochainModel::Unnormalized)
}

/// Matrix of `g^*: C^n(target) -> C^n(source)`, `(g^*φ)(x) = φ(g(x))`. In the
/// normalized model the value is zero when `g(x)` is degenerate.
pub fn pullback_matrix(g: &SSetMap, n: usize, model: CochainModel) -> Result<QMatrix> {
    if n > g.cap() {
        return Err(Error::CapExceeded {
            requested: n,
            cap: g.cap(),
        });
    }
    let (source, target) = (g.source(), g.target());
    match model {
        CochainModel::Normalized => {
            let triplets = (0..source.nondegenerate_count(n)).filter_map(|x| {
                let img = g.image_of_nd(n, x);
                (!img.is_degenerate()).then(|| (x, img.base(), Rational::one()))
            });
            QMatrix::from_triplets(
                source.nondegenerate_count(n),
                target.nondegenerate_count(n),
                triplets,
            )
        }
        CochainModel::Unnormalized => {
            let src = source.simplices_at(n)?;
            let tgt = target.simplices_at(n)?;
            let triplets = src.terms.iter().enumerate().map(|(row, x)| {
                let col = tgt.position(&g.apply(x)).expect("images are simplices");
                (row, col, Rational::one())
            });
            QMatrix::from_triplets(src.len(), tgt.len(), triplets)
        }
    }
}

/// `g^*` as a morphism of cochain complexes up to degree `cap`.
pub fn pullback_cochain_map(
    g: &SSetMap,
    cap: usize,
    model: CochainModel,
) -> Result<ComplexMorphism> {
    let cap = cap.min(g.cap());
    let from = cochain_complex(g.target(), cap, model)?;
    let to = cochain_complex(g.source(), cap, model)?;
    let maps: BTreeMap<i32, QMatrix> = (0..=cap)
        .map(|n| Ok((n as i32, pullback_matrix(g, n, model)?)))
        .collect::<Result<_>>()?;
    ComplexMorphism::new(from, to, maps)
}
