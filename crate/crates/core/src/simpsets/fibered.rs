//! Fibered powers `W^p = X ×_Y ... ×_Y X` (`p + 1` factors) of a simplicial
//! map, built dimension by dimension from tuples of simplices with a common
//! image. No product triangulation is ever formed.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::sset::{SSet, SSetMap};
use super::term::SimplexTerm;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct FiberedPower {
    p: usize,
    base: Arc<SSet>,
    carrier: Arc<SSet>,
    /// `tuples[n][id]`: the `p + 1` components of nondegenerate `n`-simplex `id`.
    tuples: Vec<Vec<Vec<SimplexTerm>>>,
    index: Vec<HashMap<Vec<SimplexTerm>, usize>>,
}

impl FiberedPower {
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn carrier(&self) -> &Arc<SSet> {
        &self.carrier
    }

    pub fn components(&self, dim: usize, id: usize) -> &[SimplexTerm] {
        &self.tuples[dim][id]
    }

    pub fn lookup(&self, components: &[SimplexTerm]) -> Option<usize> {
        self.index
            .get(components.first()?.dim())?
            .get(components)
            .copied()
    }

    /// Normal form of a tuple of equal-dimension simplices of `X` that is a
    /// simplex of this power. The common degeneracy positions become the
    /// word; collapsing them leaves a nondegenerate tuple.
    pub fn canonicalize(&self, components: &[SimplexTerm]) -> SimplexTerm {
        assert_eq!(components.len(), self.p + 1, "tuple arity");
        let n = components[0].dim();
        let common: Vec<usize> = components[0]
            .word()
            .iter()
            .copied()
            .filter(|&j| components[1..].iter().all(|t| t.repeats_at(j)))
            .collect();
        let base: Vec<SimplexTerm> = components
            .iter()
            .map(|t| {
                common
                    .iter()
                    .fold(t.clone(), |acc, &j| self.base.face(&acc, j + 1))
            })
            .collect();
        let m = n - common.len();
        let id = *self.index[m]
            .get(&base)
            .unwrap_or_else(|| panic!("tuple {base:?} is not a simplex of W^{}", self.p));
        SimplexTerm::new(m, id, common).expect("common positions form a canonical word")
    }

    /// The map to `Y` through the first component.
    pub fn structure_map(&self, f: &SSetMap) -> Result<SSetMap> {
        let images = self
            .tuples
            .iter()
            .map(|level| level.iter().map(|t| f.apply(&t[0])).collect())
            .collect();
        SSetMap::new(self.carrier.clone(), f.target().clone(), images)
    }

    fn label(&self, comps: &[SimplexTerm]) -> String {
        let parts: Vec<String> = comps.iter().map(|t| self.base.describe(t)).collect();
        format!("({})", parts.join(", "))
    }
}

/// `(p+1)`-fold fibered power of `f`, nondegenerate simplices enumerated up to
/// dimension `cap`.
pub fn fibered_power(f: &SSetMap, p: usize, cap: usize) -> Result<FiberedPower> {
    if cap > f.cap() {
        return Err(Error::CapExceeded {
            requested: cap,
            cap: f.cap(),
        });
    }
    let base = f.source().clone();
    let mut power = FiberedPower {
        p,
        base: base.clone(),
        carrier: Arc::new(SSet::from_faces(0, vec![vec![]], None)?),
        tuples: Vec::with_capacity(cap + 1),
        index: Vec::with_capacity(cap + 1),
    };
    let mut faces = Vec::with_capacity(cap + 1);
    let mut labels = Vec::with_capacity(cap + 1);
    for n in 0..=cap {
        let mut fibers: BTreeMap<SimplexTerm, Vec<SimplexTerm>> = BTreeMap::new();
        for x in &base.simplices_at(n)?.terms {
            fibers.entry(f.apply(x)).or_default().push(x.clone());
        }
        let mut level = Vec::new();
        for fiber in fibers.values() {
            for_each_tuple(fiber, p + 1, &mut |tuple| {
                let common = tuple[0]
                    .word()
                    .iter()
                    .any(|&j| tuple[1..].iter().all(|t| t.repeats_at(j)));
                if !common {
                    level.push(tuple.to_vec());
                }
            });
        }
        let level_faces: Vec<Vec<SimplexTerm>> = if n == 0 {
            vec![Vec::new(); level.len()]
        } else {
            level
                .iter()
                .map(|tuple| {
                    (0..=n)
                        .map(|i| {
                            let face: Vec<SimplexTerm> =
                                tuple.iter().map(|t| base.face(t, i)).collect();
                            power.canonicalize(&face)
                        })
                        .collect()
                })
                .collect()
        };
        power.index.push(
            level
                .iter()
                .cloned()
                .enumerate()
                .map(|(k, t)| (t, k))
                .collect(),
        );
        labels.push(level.iter().map(|t| power.label(t)).collect());
        power.tuples.push(level);
        faces.push(level_faces);
    }
    power.carrier = Arc::new(SSet::from_faces(cap, faces, Some(labels))?);
    Ok(power)
}

fn for_each_tuple<T: Clone>(items: &[T], arity: usize, visit: &mut impl FnMut(&[T])) {
    let mut cur: Vec<T> = Vec::with_capacity(arity);
    fn rec<T: Clone>(items: &[T], arity: usize, cur: &mut Vec<T>, visit: &mut impl FnMut(&[T])) {
        if cur.len() == arity {
            visit(cur);
            return;
        }
        for it in items {
            cur.push(it.clone());
            rec(items, arity, cur, visit);
            cur.pop();
        }
    }
    rec(items, arity, &mut cur, visit);
}

/// `π_{p,i}: W^p -> W^{p-1}`, dropping coordinate `i`.
pub fn projection_map(w: &FiberedPower, lower: &FiberedPower, i: usize) -> Result<SSetMap> {
    if w.p == 0 || lower.p + 1 != w.p {
        return Err(Error::Invalid(format!(
            "projection needs powers p and p-1, got {} and {}",
            w.p, lower.p
        )));
    }
    if i > w.p {
        return Err(Error::IndexOutOfRange {
            what: "projection coordinate",
            index: i,
            bound: w.p + 1,
        });
    }
    let top = w.carrier.cap().min(lower.carrier.cap());
    let images = (0..=top)
        .map(|n| {
            w.tuples[n]
                .iter()
                .map(|t| {
                    let mut dropped = t.clone();
                    dropped.remove(i);
                    lower.canonicalize(&dropped)
                })
                .collect()
        })
        .collect();
    SSetMap::new(w.carrier.clone(), lower.carrier.clone(), images)
}
