//! Assembly of the truncated double complex `𝒟_q` from externally supplied
//! complexes `F_J` and morphisms `φ_{i+1,h}: F_{L_i} -> F_{L_{i+1}}`.
//!
//! `𝒟^{i,j} = F^j_{L_i}` for `i + j <= q + 1`, vertical map `(-1)^i d_F`,
//! horizontal map `Σ_h (-1)^h φ_{i+1,h}`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bicomplex::DoubleComplex;
use crate::complexes::{CochainComplex, ComplexMorphism};
use crate::descent::{fibered_powers, BettiVector, DescentProblem};
use crate::ratlinalg::{QMatrix, Rational};
use crate::simpsets::{cochain_complex, projection_map, pullback_matrix, CochainModel};
use crate::{Error, Result};

pub type IndexSet = Vec<usize>;

fn show(set: &[usize]) -> String {
    let parts: Vec<String> = set.iter().map(usize::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

/// `L_j = {1, .., (j+1)ℓ}`.
pub fn index_set(ell: usize, j: usize) -> IndexSet {
    (1..=(j + 1) * ell).collect()
}

/// Key of `φ_{I,J}` for component `h`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MorphismKey {
    pub from: IndexSet,
    pub to: IndexSet,
    pub component: usize,
}

impl MorphismKey {
    fn describe(&self) -> String {
        format!(
            "morphism ({}, {}) component {}",
            show(&self.from),
            show(&self.to),
            self.component
        )
    }
}

/// Coordinate-swap endomorphism of `F_J`, carried but not derived.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermutationMorphism {
    pub index_set: IndexSet,
    pub swap: (usize, usize),
    pub morphism: ComplexMorphism,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProviderBundle {
    pub ell: usize,
    pub complexes: BTreeMap<IndexSet, CochainComplex>,
    pub morphisms: BTreeMap<MorphismKey, ComplexMorphism>,
    pub permutations: Vec<PermutationMorphism>,
}

impl ProviderBundle {
    pub fn new(ell: usize) -> Self {
        ProviderBundle {
            ell,
            ..Default::default()
        }
    }

    pub fn insert_complex(&mut self, index_set: IndexSet, c: CochainComplex) {
        self.complexes.insert(index_set, c);
    }

    /// Adds `φ` between two already inserted complexes; `maps` are keyed by degree.
    pub fn insert_morphism(
        &mut self,
        from: IndexSet,
        to: IndexSet,
        component: usize,
        maps: BTreeMap<i32, QMatrix>,
    ) -> Result<()> {
        let key = MorphismKey {
            from,
            to,
            component,
        };
        let source = self.complex(&key.from)?.clone();
        let target = self.complex(&key.to)?.clone();
        let m = ComplexMorphism::new(source, target, maps)
            .map_err(|e| Error::Invalid(format!("{}: {e}", key.describe())))?;
        self.morphisms.insert(key, m);
        Ok(())
    }

    pub fn complex(&self, j: &[usize]) -> Result<&CochainComplex> {
        self.complexes
            .get(j)
            .ok_or_else(|| Error::Missing(format!("complex F_{}", show(j))))
    }

    pub fn morphism(
        &self,
        from: &[usize],
        to: &[usize],
        component: usize,
    ) -> Result<&ComplexMorphism> {
        let key = MorphismKey {
            from: from.to_vec(),
            to: to.to_vec(),
            component,
        };
        self.morphisms
            .get(&key)
            .ok_or_else(|| Error::Missing(key.describe()))
    }

    /// Every complex squares to zero and every morphism commutes with the
    /// differentials. Errors name the complex or `(I, J, degree)`.
    pub fn validate(&self) -> Result<()> {
        for (j, c) in &self.complexes {
            c.validate().map_err(|v| {
                Error::Invalid(format!(
                    "complex F_{}: d∘d ≠ 0 at degree {}",
                    show(j),
                    v.degree
                ))
            })?;
        }
        for (key, m) in &self.morphisms {
            if Some(&m.source) != self.complexes.get(&key.from)
                || Some(&m.target) != self.complexes.get(&key.to)
            {
                return Err(Error::Invalid(format!(
                    "{}: endpoints differ from the listed complexes",
                    key.describe()
                )));
            }
            m.validate().map_err(|v| {
                Error::Invalid(format!(
                    "morphism ({}, {}, degree {}) component {}: square does not commute",
                    show(&key.from),
                    show(&key.to),
                    v.degree,
                    key.component
                ))
            })?;
        }
        for perm in &self.permutations {
            perm.morphism.validate().map_err(|v| {
                Error::Invalid(format!(
                    "permutation {:?} on F_{} at degree {}: square does not commute",
                    perm.swap,
                    show(&perm.index_set),
                    v.degree
                ))
            })?;
        }
        Ok(())
    }
}

/// The truncated double complex `𝒟_q` of a validated bundle.
pub fn assemble_double_complex(bundle: &ProviderBundle, q: usize) -> Result<DoubleComplex> {
    bundle.validate()?;
    let top = q + 1;
    let mut dc = DoubleComplex::new();
    let columns = (0..=top)
        .map(|i| bundle.complex(&index_set(bundle.ell, i)))
        .collect::<Result<Vec<_>>>()?;
    for (i, f) in columns.iter().enumerate() {
        for j in 0..=top - i {
            dc.set_cell((i, j), f.dim(j as i32));
        }
    }
    for (i, f) in columns.iter().enumerate() {
        for j in 0..top - i {
            let d = f.diff(j as i32);
            dc.set_vertical((i, j), if i % 2 == 0 { d } else { d.neg() })?;
            let (from, to) = (index_set(bundle.ell, i), index_set(bundle.ell, i + 1));
            let mut acc = QMatrix::zeros(columns[i + 1].dim(j as i32), f.dim(j as i32));
            for h in 0..=i + 1 {
                let phi = bundle.morphism(&from, &to, h)?;
                let sign = Rational::from_integer(if h % 2 == 0 { 1 } else { -1 });
                acc = acc.add_scaled(&sign, &phi.map_at(j as i32))?;
            }
            dc.set_horizontal((i, j), acc)?;
        }
    }
    dc.validate()?;
    Ok(dc)
}

/// `b_0 .. b_q` from the total complex of `𝒟_q`.
pub fn assemble_from_provider(bundle: &ProviderBundle, q: usize) -> Result<BettiVector> {
    let tot = assemble_double_complex(bundle, q)?.total_complex()?;
    Ok(tot.cohomology_dims(0, q as i32)?.into())
}

/// Bundle standing in for a real provider: `ℓ = 1`, `F_{L_i}` the normalized
/// cochains of `W^i` and `φ_{i+1,h}` the pullback along `π_{i+1,h}`.
pub fn mock_bundle(prob: &DescentProblem) -> Result<ProviderBundle> {
    let q = prob.q();
    let powers = fibered_powers(prob)?;
    let mut bundle = ProviderBundle::new(1);
    for (i, w) in powers.iter().enumerate() {
        let c = cochain_complex(w.carrier(), q + 1 - i, CochainModel::Normalized)?;
        bundle.insert_complex(index_set(1, i), c);
    }
    for i in 0..=q {
        for h in 0..=i + 1 {
            let pi = projection_map(&powers[i + 1], &powers[i], h)?;
            let maps = (0..=q - i)
                .map(|n| Ok((n as i32, pullback_matrix(&pi, n, CochainModel::Normalized)?)))
                .collect::<Result<BTreeMap<_, _>>>()?;
            bundle.insert_morphism(index_set(1, i), index_set(1, i + 1), h, maps)?;
        }
    }
    Ok(bundle)
}

/// Every `F_{L_i}` zero, every `φ` zero.
pub fn zero_bundle(q: usize) -> ProviderBundle {
    pattern_bundle(q, 0)
}

/// `F_{L_i} = ℚ` in degree 0 and every `φ` the identity, so the row is the
/// Čech complex of a point: `δ^i` is 0 for even `i` and 1 for odd `i`.
pub fn identity_pattern_bundle(q: usize) -> ProviderBundle {
    pattern_bundle(q, 1)
}

fn pattern_bundle(q: usize, dim: usize) -> ProviderBundle {
    let mut bundle = ProviderBundle::new(1);
    for i in 0..=q + 1 {
        bundle.insert_complex(
            index_set(1, i),
            CochainComplex::with_zero_differentials(0, vec![dim]),
        );
    }
    for i in 0..=q {
        for h in 0..=i + 1 {
            let maps = BTreeMap::from([(0, QMatrix::identity(dim))]);
            bundle
                .insert_morphism(index_set(1, i), index_set(1, i + 1), h, maps)
                .expect("pattern complexes are present");
        }
    }
    bundle
}

// Serialized form.

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct BlockDoc {
    pub degree: i32,
    /// `(row, col, "num/den")`.
    pub entries: Vec<(usize, usize, String)>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct ComplexDoc {
    pub index_set: IndexSet,
    pub degree_range: (i32, i32),
    pub dims: Vec<usize>,
    pub differentials: Vec<BlockDoc>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct MorphismDoc {
    pub from: IndexSet,
    pub to: IndexSet,
    #[serde(default)]
    pub component: usize,
    pub matrices: Vec<BlockDoc>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct PermutationDoc {
    pub index_set: IndexSet,
    pub swap: (usize, usize),
    pub matrices: Vec<BlockDoc>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct BundleDoc {
    pub ell: usize,
    pub complexes: Vec<ComplexDoc>,
    pub morphisms: Vec<MorphismDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub permutations: Vec<PermutationDoc>,
}

fn block_doc(degree: i32, m: &QMatrix) -> BlockDoc {
    let mut entries: Vec<(usize, usize, String)> = m
        .triplets()
        .map(|(r, c, v)| (r, c, v.to_string()))
        .collect();
    entries.sort_by_key(|e| (e.0, e.1));
    BlockDoc { degree, entries }
}

fn block_matrix(b: &BlockDoc, shape: (usize, usize), owner: &str) -> Result<QMatrix> {
    let triplets = b
        .entries
        .iter()
        .map(|(r, c, v)| {
            let x: Rational = v.parse().map_err(|e| {
                Error::Parse(format!("{owner}, degree {}: entry {v:?}: {e}", b.degree))
            })?;
            Ok((*r, *c, x))
        })
        .collect::<Result<Vec<_>>>()?;
    QMatrix::from_triplets(shape.0, shape.1, triplets).map_err(|e| {
        Error::Parse(format!(
            "{owner}, degree {}: {e} (block is {}x{})",
            b.degree, shape.0, shape.1
        ))
    })
}

fn maps_from_docs(
    blocks: &[BlockDoc],
    source: &CochainComplex,
    target: &CochainComplex,
    owner: &str,
) -> Result<BTreeMap<i32, QMatrix>> {
    let mut maps = BTreeMap::new();
    for b in blocks {
        let shape = (target.dim(b.degree), source.dim(b.degree));
        if maps
            .insert(b.degree, block_matrix(b, shape, owner)?)
            .is_some()
        {
            return Err(Error::Parse(format!(
                "{owner}: degree {} listed twice",
                b.degree
            )));
        }
    }
    Ok(maps)
}

fn complex_from_doc(doc: &ComplexDoc) -> Result<CochainComplex> {
    let owner = format!("complex F_{}", show(&doc.index_set));
    let (lo, hi) = doc.degree_range;
    if hi < lo || (hi - lo + 1) as usize != doc.dims.len() {
        return Err(Error::Parse(format!(
            "{owner}: degree_range {:?} does not match {} dims",
            doc.degree_range,
            doc.dims.len()
        )));
    }
    let dim = |d: i32| {
        if (lo..=hi).contains(&d) {
            doc.dims[(d - lo) as usize]
        } else {
            0
        }
    };
    let mut diffs: Vec<QMatrix> = (lo..=hi)
        .map(|d| QMatrix::zeros(dim(d + 1), dim(d)))
        .collect();
    for b in &doc.differentials {
        if !(lo..=hi).contains(&b.degree) {
            return Err(Error::Parse(format!(
                "{owner}: differential degree {} outside {:?}",
                b.degree, doc.degree_range
            )));
        }
        diffs[(b.degree - lo) as usize] =
            block_matrix(b, (dim(b.degree + 1), dim(b.degree)), &owner)?;
    }
    CochainComplex::new(lo, doc.dims.clone(), diffs)
        .map_err(|e| Error::Parse(format!("{owner}: {e}")))
}

impl ProviderBundle {
    pub fn from_doc(doc: &BundleDoc) -> Result<Self> {
        let mut bundle = ProviderBundle::new(doc.ell);
        for c in &doc.complexes {
            if bundle.complexes.contains_key(&c.index_set) {
                return Err(Error::Parse(format!(
                    "complex F_{} listed twice",
                    show(&c.index_set)
                )));
            }
            bundle.insert_complex(c.index_set.clone(), complex_from_doc(c)?);
        }
        for m in &doc.morphisms {
            let key = MorphismKey {
                from: m.from.clone(),
                to: m.to.clone(),
                component: m.component,
            };
            let owner = key.describe();
            let source = bundle
                .complex(&m.from)
                .map_err(|e| Error::Parse(format!("{owner}: {e}")))?;
            let target = bundle
                .complex(&m.to)
                .map_err(|e| Error::Parse(format!("{owner}: {e}")))?;
            let maps = maps_from_docs(&m.matrices, source, target, &owner)?;
            if bundle.morphisms.contains_key(&key) {
                return Err(Error::Parse(format!("{owner} listed twice")));
            }
            bundle.insert_morphism(m.from.clone(), m.to.clone(), m.component, maps)?;
        }
        for p in &doc.permutations {
            let owner = format!("permutation {:?} on F_{}", p.swap, show(&p.index_set));
            let c = bundle
                .complex(&p.index_set)
                .map_err(|e| Error::Parse(format!("{owner}: {e}")))?;
            let maps = maps_from_docs(&p.matrices, c, c, &owner)?;
            let morphism = ComplexMorphism::new(c.clone(), c.clone(), maps)?;
            bundle.permutations.push(PermutationMorphism {
                index_set: p.index_set.clone(),
                swap: p.swap,
                morphism,
            });
        }
        Ok(bundle)
    }

    pub fn to_doc(&self) -> BundleDoc {
        let blocks = |m: &ComplexMorphism| -> Vec<BlockDoc> {
            let mut degrees: Vec<i32> = [m.source.degree_range(), m.target.degree_range()]
                .into_iter()
                .flatten()
                .flat_map(|(lo, hi)| lo..=hi)
                .collect();
            degrees.sort_unstable();
            degrees.dedup();
            degrees
                .into_iter()
                .map(|d| (d, m.map_at(d)))
                .filter(|(_, mat)| mat.nnz() > 0)
                .map(|(d, mat)| block_doc(d, &mat))
                .collect()
        };
        BundleDoc {
            ell: self.ell,
            complexes: self
                .complexes
                .iter()
                .map(|(j, c)| {
                    let (lo, hi) = c.degree_range().unwrap_or((0, -1));
                    ComplexDoc {
                        index_set: j.clone(),
                        degree_range: (lo, hi),
                        dims: (lo..=hi).map(|d| c.dim(d)).collect(),
                        differentials: (lo..=hi)
                            .map(|d| (d, c.diff(d)))
                            .filter(|(_, m)| m.nnz() > 0)
                            .map(|(d, m)| block_doc(d, &m))
                            .collect(),
                    }
                })
                .collect(),
            morphisms: self
                .morphisms
                .iter()
                .map(|(k, m)| MorphismDoc {
                    from: k.from.clone(),
                    to: k.to.clone(),
                    component: k.component,
                    matrices: blocks(m),
                })
                .collect(),
            permutations: self
                .permutations
                .iter()
                .map(|p| PermutationDoc {
                    index_set: p.index_set.clone(),
                    swap: p.swap,
                    matrices: blocks(&p.morphism),
                })
                .collect(),
        }
    }
}

pub fn emit_bundle(bundle: &ProviderBundle) -> String {
    let mut s = serde_json::to_string_pretty(&bundle.to_doc()).expect("documents serialize");
    s.push('\n');
    s
}

pub fn parse_bundle(text: &str) -> Result<ProviderBundle> {
    let doc: BundleDoc =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("bundle document: {e}")))?;
    ProviderBundle::from_doc(&doc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descent::betti_of_image;
    use crate::simpsets::SComplex;

    fn two_arc(q: usize) -> DescentProblem {
        let x = SComplex::from_names(
            &["a0", "a1", "a2", "a3", "b0", "b1"],
            &[&["a0", "a1"], &["a1", "a2"], &["a2", "a3"], &["b0", "b1"]],
        )
        .unwrap();
        let y = SComplex::from_names(
            &["y0", "y1", "y2", "y3"],
            &[&["y0", "y1"], &["y1", "y2"], &["y2", "y3"], &["y0", "y3"]],
        )
        .unwrap();
        DescentProblem::from_parts(x, y, vec![0, 1, 2, 3, 0, 3], q).unwrap()
    }

    #[test]
    fn mock_bundle_matches_descent() {
        for q in 0..=2 {
            let prob = two_arc(q);
            let bundle = mock_bundle(&prob).unwrap();
            assert_eq!(
                assemble_from_provider(&bundle, q).unwrap(),
                betti_of_image(&prob).unwrap()
            );
        }
        assert_eq!(
            assemble_from_provider(&mock_bundle(&two_arc(1)).unwrap(), 1)
                .unwrap()
                .values,
            vec![1, 1]
        );
    }

    #[test]
    fn pattern_bundles() {
        assert_eq!(
            assemble_from_provider(&zero_bundle(2), 2).unwrap(),
            BettiVector::zeros(2)
        );
        assert_eq!(
            assemble_from_provider(&identity_pattern_bundle(3), 3)
                .unwrap()
                .values,
            vec![1, 0, 0, 0]
        );
        let dc = assemble_double_complex(&identity_pattern_bundle(2), 2).unwrap();
        assert!(dc.horizontal((0, 0)).is_zero());
        assert_eq!(dc.horizontal((1, 0)), QMatrix::identity(1));
    }

    #[test]
    fn missing_pieces_are_named() {
        let mut b = identity_pattern_bundle(1);
        b.morphisms.retain(|k, _| k.component != 2);
        let err = assemble_from_provider(&b, 1).unwrap_err();
        assert!(
            err.to_string().contains("({1,2}, {1,2,3}) component 2"),
            "{err}"
        );

        let mut b = identity_pattern_bundle(1);
        b.complexes.remove(&vec![1, 2, 3]);
        b.morphisms.retain(|k, _| k.to.len() < 3);
        let err = assemble_from_provider(&b, 1).unwrap_err();
        assert!(err.to_string().contains("F_{1,2,3}"), "{err}");
    }

    #[test]
    fn broken_square_names_the_degree() {
        let prob = two_arc(1);
        let mut doc = mock_bundle(&prob).unwrap().to_doc();
        let m = doc
            .morphisms
            .iter_mut()
            .find(|m| m.from == vec![1] && m.component == 0)
            .unwrap();
        let block = m.matrices.iter_mut().find(|b| b.degree == 0).unwrap();
        block.entries[0].2 = "2".into();
        let bundle = ProviderBundle::from_doc(&doc).unwrap();
        let err = assemble_from_provider(&bundle, 1).unwrap_err().to_string();
        assert!(err.contains("({1}, {1,2}, degree 0)"), "{err}");
    }

    #[test]
    fn anticommutation_failure_names_the_cell() {
        // squares commute but δ^1 δ^0 ≠ 0 once φ_{1,1} is zero
        let mut b = identity_pattern_bundle(1);
        let key = MorphismKey {
            from: vec![1],
            to: vec![1, 2],
            component: 1,
        };
        let zero = ComplexMorphism::zero(&b.complexes[&key.from], &b.complexes[&key.to]);
        b.morphisms.insert(key, zero);
        let err = assemble_from_provider(&b, 1).unwrap_err().to_string();
        assert!(err.contains("cell (0, 0)"), "{err}");
    }

    #[test]
    fn documents_round_trip() {
        let bundle = mock_bundle(&two_arc(1)).unwrap();
        let text = emit_bundle(&bundle);
        let back = parse_bundle(&text).unwrap();
        assert_eq!(back, bundle);
        assert_eq!(emit_bundle(&back), text);
        assert!(parse_bundle("[]").is_err());
    }

    #[test]
    fn malformed_documents_are_named() {
        let mut doc = identity_pattern_bundle(0).to_doc();
        doc.morphisms[0].matrices[0]
            .entries
            .push((5, 0, "1".into()));
        let err = ProviderBundle::from_doc(&doc).unwrap_err().to_string();
        assert!(err.contains("morphism ({1}, {1,2}) component 0"), "{err}");

        let mut doc = identity_pattern_bundle(0).to_doc();
        doc.complexes[0].degree_range = (0, 3);
        let err = ProviderBundle::from_doc(&doc).unwrap_err().to_string();
        assert!(err.contains("F_{1}"), "{err}");
    }
}
