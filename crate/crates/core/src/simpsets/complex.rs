use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use super::sset::{SSet, SSetMap};
use super::term::SimplexTerm;
use crate::{Error, Result};

/// Finite simplicial complex on a totally ordered vertex set, stored by its
/// maximal faces. Every vertex is a 0-simplex even if no facet lists it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SComplex {
    names: Vec<String>,
    facets: Vec<Vec<usize>>,
}

impl SComplex {
    /// `facets` hold vertex indices into `names`; vertex order is the order of
    /// `names`. Non-maximal and duplicate facets are dropped.
    pub fn new(names: Vec<String>, facets: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = HashMap::new();
        for (k, n) in names.iter().enumerate() {
            if seen.insert(n.clone(), k).is_some() {
                return Err(Error::Invalid(format!("duplicate vertex {n:?}")));
            }
        }
        let mut cleaned: BTreeSet<Vec<usize>> = BTreeSet::new();
        for f in facets {
            if let Some(&bad) = f.iter().find(|&&v| v >= names.len()) {
                return Err(Error::IndexOutOfRange {
                    what: "facet vertex",
                    index: bad,
                    bound: names.len(),
                });
            }
            let mut f = f;
            f.sort_unstable();
            f.dedup();
            if !f.is_empty() {
                cleaned.insert(f);
            }
        }
        for v in 0..names.len() {
            cleaned.insert(vec![v]);
        }
        let all: Vec<Vec<usize>> = cleaned.into_iter().collect();
        let facets = all
            .iter()
            .filter(|f| !all.iter().any(|g| g.len() > f.len() && is_subset(f, g)))
            .cloned()
            .collect();
        Ok(SComplex { names, facets })
    }

    /// Convenience constructor from vertex names.
    pub fn from_names(names: &[&str], facets: &[&[&str]]) -> Result<Self> {
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let lookup: HashMap<&str, usize> = names
            .iter()
            .enumerate()
            .map(|(k, n)| (n.as_str(), k))
            .collect();
        let facets = facets
            .iter()
            .map(|f| {
                f.iter()
                    .map(|v| {
                        lookup
                            .get(v)
                            .copied()
                            .ok_or_else(|| Error::UnknownVertex(v.to_string()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        SComplex::new(names, facets)
    }

    /// The full simplex on the given vertices.
    pub fn simplex(names: Vec<String>) -> Self {
        let facets = if names.is_empty() {
            vec![]
        } else {
            vec![(0..names.len()).collect()]
        };
        SComplex { names, facets }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    pub fn contains(&self, simplex: &[usize]) -> bool {
        self.facets.iter().any(|f| is_subset(simplex, f))
    }

    pub fn dimension(&self) -> Option<usize> {
        self.facets.iter().map(|f| f.len() - 1).max()
    }

    /// Sorted vertex lists of all `dim`-simplices.
    pub fn simplices(&self, dim: usize) -> Vec<Vec<usize>> {
        let mut out: BTreeSet<Vec<usize>> = BTreeSet::new();
        for f in &self.facets {
            if f.len() > dim {
                subsets(f, dim + 1, &mut out);
            }
        }
        out.into_iter().collect()
    }

    pub fn format_simplex(&self, s: &[usize]) -> String {
        let parts: Vec<&str> = s.iter().map(|&v| self.names[v].as_str()).collect();
        format!("{{{}}}", parts.join(","))
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|v| b.binary_search(v).is_ok())
}

fn subsets(set: &[usize], k: usize, out: &mut BTreeSet<Vec<usize>>) {
    let mut cur = Vec::with_capacity(k);
    fn rec(
        set: &[usize],
        start: usize,
        k: usize,
        cur: &mut Vec<usize>,
        out: &mut BTreeSet<Vec<usize>>,
    ) {
        if cur.len() == k {
            out.insert(cur.clone());
            return;
        }
        for i in start..set.len() {
            if set.len() - i < k - cur.len() {
                break;
            }
            cur.push(set[i]);
            rec(set, i + 1, k, cur, out);
            cur.pop();
        }
    }
    rec(set, 0, k, &mut cur, out);
}

/// Vertex assignment between ordered complexes. Valid when every simplex maps
/// onto a simplex and the map is weakly order-preserving on every simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexMap {
    pub source: SComplex,
    pub target: SComplex,
    pub assignment: Vec<usize>,
}

impl VertexMap {
    pub fn new(source: SComplex, target: SComplex, assignment: Vec<usize>) -> Result<Self> {
        if assignment.len() != source.vertex_count() {
            return Err(Error::Invalid(format!(
                "assignment covers {} of {} vertices",
                assignment.len(),
                source.vertex_count()
            )));
        }
        if let Some(&bad) = assignment.iter().find(|&&v| v >= target.vertex_count()) {
            return Err(Error::IndexOutOfRange {
                what: "target vertex",
                index: bad,
                bound: target.vertex_count(),
            });
        }
        Ok(VertexMap {
            source,
            target,
            assignment,
        })
    }

    fn image_of(&self, s: &[usize]) -> Vec<usize> {
        s.iter().map(|&v| self.assignment[v]).collect()
    }

    /// Checks every facet; faces inherit both properties.
    pub fn validate(&self) -> Result<()> {
        for f in self.source.facets() {
            let img = self.image_of(f);
            if img.windows(2).any(|w| w[0] > w[1]) {
                return Err(Error::NonMonotone {
                    simplex: self.source.format_simplex(f),
                });
            }
            let mut set = img.clone();
            set.dedup();
            if !self.target.contains(&set) {
                return Err(Error::NonSimplicial {
                    simplex: self.source.format_simplex(f),
                });
            }
        }
        Ok(())
    }

    /// The complex of image simplices, on the image vertices in target order.
    pub fn image_complex(&self) -> SComplex {
        let (names, reindex) = self.image_vertices();
        let facets = self
            .source
            .facets()
            .iter()
            .map(|f| {
                let mut img: Vec<usize> = f.iter().map(|&v| reindex[&self.assignment[v]]).collect();
                img.sort_unstable();
                img.dedup();
                img
            })
            .collect();
        SComplex::new(names, facets).expect("image vertices are in range")
    }

    fn image_vertices(&self) -> (Vec<String>, HashMap<usize, usize>) {
        let used: BTreeSet<usize> = self.assignment.iter().copied().collect();
        let names = used
            .iter()
            .map(|&v| self.target.names()[v].clone())
            .collect();
        let reindex = used.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        (names, reindex)
    }

    /// The same assignment with the target replaced by the image complex.
    pub fn onto_image(&self) -> VertexMap {
        let (_, reindex) = self.image_vertices();
        VertexMap {
            source: self.source.clone(),
            target: self.image_complex(),
            assignment: self.assignment.iter().map(|v| reindex[v]).collect(),
        }
    }
}

/// Simplicial set of an ordered simplicial complex: nondegenerate
/// `m`-simplices are increasing vertex lists, faces delete a vertex.
#[derive(Debug, Clone)]
pub struct Nerve {
    pub sset: Arc<SSet>,
    simplices: Vec<Vec<Vec<usize>>>,
    index: HashMap<Vec<usize>, usize>,
}

impl Nerve {
    pub fn vertices_of(&self, dim: usize, id: usize) -> &[usize] {
        &self.simplices[dim][id]
    }

    pub fn lookup(&self, simplex: &[usize]) -> Option<usize> {
        self.index.get(simplex).copied()
    }

    /// Nondegenerate term for an increasing list, or the degenerate term for
    /// a weakly increasing one. `None` if the vertex set is not a simplex.
    pub fn term_for(&self, seq: &[usize]) -> Option<SimplexTerm> {
        let mut distinct = seq.to_vec();
        distinct.dedup();
        let id = self.lookup(&distinct)?;
        let mut sigma = Vec::with_capacity(seq.len());
        let mut k = 0;
        for w in seq.windows(2) {
            sigma.push(k);
            if w[0] != w[1] {
                k += 1;
            }
        }
        sigma.push(k);
        Some(SimplexTerm::from_surjection(distinct.len() - 1, id, &sigma))
    }
}

pub fn nerve_of_complex(k: &SComplex, cap: usize) -> Nerve {
    let mut simplices = Vec::with_capacity(cap + 1);
    let mut index = HashMap::new();
    let mut faces = Vec::with_capacity(cap + 1);
    let mut labels = Vec::with_capacity(cap + 1);
    for dim in 0..=cap {
        let level = k.simplices(dim);
        let mut level_faces = Vec::with_capacity(level.len());
        for s in &level {
            let fs = if dim == 0 {
                Vec::new()
            } else {
                (0..=dim)
                    .map(|i| {
                        let mut f = s.clone();
                        f.remove(i);
                        SimplexTerm::nondegenerate(dim - 1, index[&f])
                    })
                    .collect()
            };
            level_faces.push(fs);
        }
        for (id, s) in level.iter().enumerate() {
            index.insert(s.clone(), id);
        }
        labels.push(level.iter().map(|s| k.format_simplex(s)).collect());
        faces.push(level_faces);
        simplices.push(level);
    }
    let sset = SSet::from_faces(cap, faces, Some(labels)).expect("nerve face table is well formed");
    Nerve {
        sset: Arc::new(sset),
        simplices,
        index,
    }
}

/// The simplicial map induced by `f` between the nerves of its source and
/// target.
pub fn induced_sset_map(f: &VertexMap, source: &Nerve, target: &Nerve) -> Result<SSetMap> {
    let top = source.sset.cap().min(target.sset.cap());
    let mut images = Vec::with_capacity(top + 1);
    for dim in 0..=top {
        let mut level = Vec::with_capacity(source.sset.nondegenerate_count(dim));
        for id in 0..source.sset.nondegenerate_count(dim) {
            let s = source.vertices_of(dim, id);
            let img = f.image_of(s);
            if img.windows(2).any(|w| w[0] > w[1]) {
                return Err(Error::NonMonotone {
                    simplex: f.source.format_simplex(s),
                });
            }
            let term = target.term_for(&img).ok_or_else(|| Error::NonSimplicial {
                simplex: f.source.format_simplex(s),
            })?;
            level.push(term);
        }
        images.push(level);
    }
    SSetMap::new(source.sset.clone(), target.sset.clone(), images)
}
