//! Input documents: problems (JSON), polynomial lists (text), bundles (JSON).

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use descent_core::descent::DescentProblem;
use descent_core::scaffold::{parse_bundle, ProviderBundle, QuadraticPoly};
use descent_core::simpsets::{SComplex, VertexMap};
use serde::Deserialize;

/// A vertex map between ordered simplicial complexes.
///
/// Without `target_vertices` the target vertices are the map's values in
/// lexicographic order. Without `target_facets` the target is the full
/// simplex on them, so only monotonicity can fail.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDocument {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub facets: Vec<Vec<String>>,
    pub map: BTreeMap<String, String>,
    #[serde(default)]
    pub q: usize,
    #[serde(default)]
    pub target_vertices: Option<Vec<String>>,
    #[serde(default)]
    pub target_facets: Option<Vec<Vec<String>>>,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn index_names(names: &[String], what: &str) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::new();
    for (k, n) in names.iter().enumerate() {
        if index.insert(n.clone(), k).is_some() {
            bail!("{what}: vertex {n:?} is listed twice");
        }
    }
    Ok(index)
}

fn resolve_facets(
    facets: &[Vec<String>],
    index: &HashMap<String, usize>,
    what: &str,
) -> Result<Vec<Vec<usize>>> {
    facets
        .iter()
        .enumerate()
        .map(|(k, f)| {
            f.iter()
                .map(|v| {
                    index
                        .get(v)
                        .copied()
                        .ok_or_else(|| anyhow!("{what}[{k}]: unknown vertex {v:?}"))
                })
                .collect()
        })
        .collect()
}

impl ProblemDocument {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).context("problem document")
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&read(path)?).with_context(|| path.display().to_string())
    }

    /// Builds the problem, with `q` overriding the document's value.
    pub fn to_problem(&self, q: Option<usize>) -> Result<DescentProblem> {
        let index = index_names(&self.vertices, "vertices")?;
        let facets = resolve_facets(&self.facets, &index, "facets")?;
        let x = SComplex::new(self.vertices.clone(), facets).context("source complex")?;

        if let Some(unknown) = self.map.keys().find(|k| !index.contains_key(*k)) {
            bail!("map: unknown source vertex {unknown:?}");
        }
        let target_names = match &self.target_vertices {
            Some(t) => t.clone(),
            None => self
                .map
                .values()
                .cloned()
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect(),
        };
        let tindex = index_names(&target_names, "target_vertices")?;
        let assignment =
            self.vertices
                .iter()
                .map(|v| {
                    let image = self
                        .map
                        .get(v)
                        .ok_or_else(|| anyhow!("map: vertex {v:?} has no image"))?;
                    tindex.get(image).copied().ok_or_else(|| {
                        anyhow!("map: {v:?} -> {image:?}, which is not a target vertex")
                    })
                })
                .collect::<Result<Vec<_>>>()?;
        let tfacets = match &self.target_facets {
            Some(f) => resolve_facets(f, &tindex, "target_facets")?,
            None => vec![(0..target_names.len()).collect()],
        };
        let y = SComplex::new(target_names, tfacets).context("target complex")?;
        let f = VertexMap::new(x, y, assignment)?;
        DescentProblem::new(&f, q.unwrap_or(self.q)).context("vertex map")
    }
}

/// One polynomial per line; blank lines and `#` comments are skipped.
pub fn parse_polynomials(text: &str) -> Result<Vec<QuadraticPoly>> {
    let mut out = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let p = QuadraticPoly::parse(body).with_context(|| format!("line {}", k + 1))?;
        out.push(p);
    }
    Ok(out)
}

pub fn load_polynomials(path: &Path) -> Result<Vec<QuadraticPoly>> {
    parse_polynomials(&read(path)?).with_context(|| path.display().to_string())
}

pub fn load_bundle(path: &Path) -> Result<ProviderBundle> {
    parse_bundle(&read(path)?).with_context(|| path.display().to_string())
}
