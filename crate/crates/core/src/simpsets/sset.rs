use std::collections::{HashMap, HashSet};
use std::sync::{Arc, OnceLock};

use super::term::{words, SimplexTerm};
use crate::{Error, Result};

/// All simplices of one dimension, degenerate ones included, with a reverse
/// index.
#[derive(Debug)]
pub struct SimplexIndex {
    pub terms: Vec<SimplexTerm>,
    pos: HashMap<SimplexTerm, usize>,
}

impl SimplexIndex {
    pub fn position(&self, t: &SimplexTerm) -> Option<usize> {
        self.pos.get(t).copied()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

/// A finite simplicial set, stored through its nondegenerate simplices up to
/// a dimension cap and the faces of each of them as normal-form terms.
#[derive(Debug)]
pub struct SSet {
    cap: usize,
    faces: Vec<Vec<Vec<SimplexTerm>>>,
    labels: Vec<Vec<String>>,
    all: Vec<OnceLock<SimplexIndex>>,
}

impl SSet {
    /// `faces[n][id]` lists `d_0 .. d_n` of nondegenerate simplex `id` in
    /// dimension `n` (empty for vertices). Dimensions above `cap` are dropped
    /// from the model; `faces.len()` must be `cap + 1`.
    pub fn from_faces(
        cap: usize,
        faces: Vec<Vec<Vec<SimplexTerm>>>,
        labels: Option<Vec<Vec<String>>>,
    ) -> Result<Self> {
        if faces.len() != cap + 1 {
            return Err(Error::Invalid(format!(
                "face table covers {} dimensions, cap {cap} needs {}",
                faces.len(),
                cap + 1
            )));
        }
        for (n, level) in faces.iter().enumerate() {
            for (id, fs) in level.iter().enumerate() {
                let expected = if n == 0 { 0 } else { n + 1 };
                if fs.len() != expected {
                    return Err(Error::Invalid(format!(
                        "simplex {id} in dimension {n} has {} faces",
                        fs.len()
                    )));
                }
                for t in fs {
                    if t.dim() + 1 != n || t.base() >= faces[t.base_dim()].len() {
                        return Err(Error::Invalid(format!(
                            "face {t:?} of simplex {id} in dimension {n} is malformed"
                        )));
                    }
                }
            }
        }
        let labels = match labels {
            Some(l) => l,
            None => faces
                .iter()
                .enumerate()
                .map(|(n, level)| (0..level.len()).map(|id| format!("x{n}_{id}")).collect())
                .collect(),
        };
        Ok(SSet {
            cap,
            faces,
            labels,
            all: (0..=cap).map(|_| OnceLock::new()).collect(),
        })
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn nondegenerate_count(&self, n: usize) -> usize {
        self.faces.get(n).map_or(0, Vec::len)
    }

    /// Nondegenerate counts in dimensions `0..=cap`.
    pub fn counts(&self) -> Vec<usize> {
        self.faces.iter().map(Vec::len).collect()
    }

    pub fn label(&self, dim: usize, id: usize) -> &str {
        &self.labels[dim][id]
    }

    pub fn describe(&self, t: &SimplexTerm) -> String {
        let mut s = String::new();
        for j in t.word() {
            s.push_str(&format!("s{j} "));
        }
        s.push_str(self.label(t.base_dim(), t.base()));
        s
    }

    /// Face `d_i` of a nondegenerate simplex.
    pub fn nd_face(&self, dim: usize, id: usize, i: usize) -> &SimplexTerm {
        &self.faces[dim][id][i]
    }

    /// `d_i` of an arbitrary term, via the simplicial identities.
    pub fn face(&self, t: &SimplexTerm, i: usize) -> SimplexTerm {
        let n = t.dim();
        assert!(n > 0 && i <= n, "face d_{i} undefined in dimension {n}");
        let mut sigma = t.surjection();
        let v = sigma.remove(i);
        let m = t.base_dim();
        let still_onto = (i > 0 && sigma[i - 1] == v) || (i < sigma.len() && sigma[i] == v);
        if still_onto {
            return SimplexTerm::from_surjection(m, t.base(), &sigma);
        }
        // vertex slot v vanished: the face factors through d_v of the base
        for s in sigma.iter_mut() {
            if *s > v {
                *s -= 1;
            }
        }
        let inner = self.nd_face(m, t.base(), v);
        let tau = inner.surjection();
        let composed: Vec<usize> = sigma.iter().map(|&k| tau[k]).collect();
        SimplexTerm::from_surjection(inner.base_dim(), inner.base(), &composed)
    }

    /// `s_j` of an arbitrary term.
    pub fn degeneracy(&self, t: &SimplexTerm, j: usize) -> SimplexTerm {
        assert!(
            j <= t.dim(),
            "degeneracy s_{j} undefined in dimension {}",
            t.dim()
        );
        let mut sigma = t.surjection();
        sigma.insert(j, sigma[j]);
        SimplexTerm::from_surjection(t.base_dim(), t.base(), &sigma)
    }

    /// Every `n`-simplex: each nondegenerate `m`-simplex contributes
    /// `C(n, n-m)` degeneracy words.
    pub fn simplices_at(&self, n: usize) -> Result<&SimplexIndex> {
        if n > self.cap {
            return Err(Error::CapExceeded {
                requested: n,
                cap: self.cap,
            });
        }
        Ok(self.all[n].get_or_init(|| {
            let mut terms = Vec::new();
            for m in 0..=n {
                let ws = words(n, n - m);
                for id in 0..self.nondegenerate_count(m) {
                    for w in &ws {
                        terms.push(SimplexTerm::new(m, id, w.clone()).expect("canonical word"));
                    }
                }
            }
            let pos = terms
                .iter()
                .cloned()
                .enumerate()
                .map(|(k, t)| (t, k))
                .collect();
            SimplexIndex { terms, pos }
        }))
    }

    /// Checks the face/face and face/degeneracy identities on every simplex up
    /// to dimension `upto` (degenerate ones included).
    pub fn check_simplicial_identities(&self, upto: usize) -> Result<(), String> {
        for n in 0..=upto.min(self.cap) {
            let simplices = self.simplices_at(n).map_err(|e| e.to_string())?;
            for x in &simplices.terms {
                let name = || self.describe(x);
                if n >= 2 {
                    for j in 1..=n {
                        for i in 0..j {
                            let a = self.face(&self.face(x, j), i);
                            let b = self.face(&self.face(x, i), j - 1);
                            if a != b {
                                return Err(format!("d{i} d{j} ≠ d{} d{i} on {}", j - 1, name()));
                            }
                        }
                    }
                }
                for j in 0..=n {
                    let sx = self.degeneracy(x, j);
                    for i in 0..=n + 1 {
                        let lhs = self.face(&sx, i);
                        let rhs = if i == j || i == j + 1 {
                            x.clone()
                        } else if i < j {
                            self.degeneracy(&self.face(x, i), j - 1)
                        } else {
                            self.degeneracy(&self.face(x, i - 1), j)
                        };
                        if lhs != rhs {
                            return Err(format!("d{i} s{j} identity fails on {}", name()));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// A simplicial map, given on nondegenerate simplices up to the smaller of
/// the two caps and extended to degenerate ones by naturality.
#[derive(Debug, Clone)]
pub struct SSetMap {
    source: Arc<SSet>,
    target: Arc<SSet>,
    images: Vec<Vec<SimplexTerm>>,
}

impl SSetMap {
    pub fn new(
        source: Arc<SSet>,
        target: Arc<SSet>,
        images: Vec<Vec<SimplexTerm>>,
    ) -> Result<Self> {
        let top = source.cap().min(target.cap());
        if images.len() != top + 1 {
            return Err(Error::Invalid(format!(
                "map covers {} dimensions, expected {}",
                images.len(),
                top + 1
            )));
        }
        for (n, level) in images.iter().enumerate() {
            if level.len() != source.nondegenerate_count(n) {
                return Err(Error::Invalid(format!(
                    "map is incomplete in dimension {n}"
                )));
            }
            if let Some(t) = level
                .iter()
                .find(|t| t.dim() != n || t.base() >= target.nondegenerate_count(t.base_dim()))
            {
                return Err(Error::Invalid(format!(
                    "image {t:?} in dimension {n} is malformed"
                )));
            }
        }
        Ok(SSetMap {
            source,
            target,
            images,
        })
    }

    pub fn identity(x: &Arc<SSet>) -> Self {
        let images = (0..=x.cap())
            .map(|n| {
                (0..x.nondegenerate_count(n))
                    .map(|id| SimplexTerm::nondegenerate(n, id))
                    .collect()
            })
            .collect();
        SSetMap {
            source: x.clone(),
            target: x.clone(),
            images,
        }
    }

    pub fn source(&self) -> &Arc<SSet> {
        &self.source
    }

    pub fn target(&self) -> &Arc<SSet> {
        &self.target
    }

    /// Highest dimension on which the map is defined.
    pub fn cap(&self) -> usize {
        self.images.len() - 1
    }

    pub fn image_of_nd(&self, dim: usize, id: usize) -> &SimplexTerm {
        &self.images[dim][id]
    }

    pub fn apply(&self, t: &SimplexTerm) -> SimplexTerm {
        let inner = &self.images[t.base_dim()][t.base()];
        let tau = inner.surjection();
        let composed: Vec<usize> = t.surjection().iter().map(|&k| tau[k]).collect();
        SimplexTerm::from_surjection(inner.base_dim(), inner.base(), &composed)
    }

    /// Checks `g(d_i x) = d_i g(x)` on every nondegenerate simplex.
    pub fn check_commutes_with_faces(&self) -> Result<(), String> {
        for n in 1..=self.cap() {
            for id in 0..self.source.nondegenerate_count(n) {
                let gx = &self.images[n][id];
                for i in 0..=n {
                    let lhs = self.apply(self.source.nd_face(n, id, i));
                    let rhs = self.target.face(gx, i);
                    if lhs != rhs {
                        return Err(format!(
                            "map does not commute with d{i} on {}",
                            self.source.label(n, id)
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Whether every `n`-simplex of the target, `n <= cap`, has a preimage.
    pub fn is_levelwise_surjective(&self, cap: usize) -> bool {
        (0..=cap.min(self.cap())).all(|n| {
            let src = self.source.simplices_at(n).expect("n within cap");
            let tgt = self.target.simplices_at(n).expect("n within cap");
            let hit: HashSet<SimplexTerm> = src.terms.iter().map(|t| self.apply(t)).collect();
            hit.len() == tgt.len()
        })
    }
}
