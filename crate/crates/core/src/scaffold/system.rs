//! The fibered systems `S_0 .. S_{q+1}`: block `j` is a copy of the input
//! polynomials in fresh variables `X{i}_{j}`, sharing `Y1 .. Ym`.

use serde::{Deserialize, Serialize};

use super::poly::{QuadraticPoly, Var};
use crate::ratlinalg::Rational;
use crate::{Error, Result};

/// Parses `X{i}` or `Y{i}` with `i >= 1`.
fn split_input_var(v: &Var) -> Option<(char, usize)> {
    let mut chars = v.0.chars();
    let head = chars.next()?;
    let rest = chars.as_str();
    if !(head == 'X' || head == 'Y') || rest.is_empty() || !rest.bytes().all(|b| b.is_ascii_digit())
    {
        return None;
    }
    let i: usize = rest.parse().ok()?;
    (i >= 1 && !rest.starts_with('0')).then_some((head, i))
}

pub fn block_var(i: usize, j: usize) -> String {
    format!("X{i}_{j}")
}

/// `X_i -> X_{i,j}` with `Y` fixed.
pub fn substitute_block(
    p: &QuadraticPoly,
    j: usize,
    k: usize,
    m: usize,
    q: usize,
) -> Result<QuadraticPoly> {
    if j > q + 1 {
        return Err(Error::IndexOutOfRange {
            what: "block",
            index: j,
            bound: q + 2,
        });
    }
    p.rename(|v| match split_input_var(v) {
        Some(('X', i)) if i <= k => Ok(Var(block_var(i, j))),
        Some(('Y', i)) if i <= m => Ok(v.clone()),
        _ => Err(Error::UnknownVariable(v.0.clone())),
    })
}

/// Smallest `(k, m)` covering every variable of `polys`.
pub fn infer_arity(polys: &[QuadraticPoly]) -> Result<(usize, usize)> {
    let (mut k, mut m) = (0, 0);
    for v in polys.iter().flat_map(QuadraticPoly::variables) {
        match split_input_var(&v) {
            Some(('X', i)) => k = k.max(i),
            Some(('Y', i)) => m = m.max(i),
            _ => return Err(Error::UnknownVariable(v.0)),
        }
    }
    Ok((k, m))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberedSystem {
    pub k: usize,
    pub m: usize,
    pub q: usize,
    /// The input polynomials `P_1 .. P_ℓ` in `X1 .. Xk, Y1 .. Ym`.
    pub polys: Vec<QuadraticPoly>,
    /// `blocks[j][i]` is `P_{i+1, j}`.
    pub blocks: Vec<Vec<QuadraticPoly>>,
}

impl FiberedSystem {
    pub fn ell(&self) -> usize {
        self.polys.len()
    }

    /// `X1_0 .. Xk_0, X1_1 .. Xk_{q+1}, Y1 .. Ym`.
    pub fn variables(&self) -> Vec<String> {
        let mut out: Vec<String> = (0..=self.q + 1)
            .flat_map(|j| (1..=self.k).map(move |i| block_var(i, j)))
            .collect();
        out.extend((1..=self.m).map(|i| format!("Y{i}")));
        out
    }

    /// `S_p`: `P_{1,0}, .., P_{ℓ,0}, .., P_{1,p}, .., P_{ℓ,p}`.
    pub fn system(&self, p: usize) -> Vec<&QuadraticPoly> {
        self.blocks[..=p].iter().flatten().collect()
    }

    pub fn system_count(&self) -> usize {
        self.q + 2
    }

    /// `L_j = {1, .., (j+1)ℓ}`, the positions of `S_j`'s polynomials.
    pub fn index_set(&self, j: usize) -> Vec<usize> {
        (1..=(j + 1) * self.ell()).collect()
    }
}

pub fn generate_fibered_systems(
    polys: &[QuadraticPoly],
    k: usize,
    m: usize,
    q: usize,
) -> Result<FiberedSystem> {
    if let Some(p) = polys.iter().find(|p| p.degree() > 2) {
        return Err(Error::DegreeTooHigh { degree: p.degree() });
    }
    let blocks = (0..=q + 1)
        .map(|j| {
            polys
                .iter()
                .map(|p| substitute_block(p, j, k, m, q))
                .collect()
        })
        .collect::<Result<Vec<Vec<_>>>>()?;
    Ok(FiberedSystem {
        k,
        m,
        q,
        polys: polys.to_vec(),
        blocks,
    })
}

/// Permutation of the variable list of a `(k, m, q)` system exchanging blocks
/// `j` and `p`; `perm[v]` is the new position of variable `v`.
pub fn coordinate_swap(p: usize, j: usize, k: usize, m: usize, q: usize) -> Result<Vec<usize>> {
    if p > q + 1 {
        return Err(Error::IndexOutOfRange {
            what: "swap block p",
            index: p,
            bound: q + 2,
        });
    }
    if j > p {
        return Err(Error::IndexOutOfRange {
            what: "swap block j",
            index: j,
            bound: p + 1,
        });
    }
    let mut perm: Vec<usize> = (0..k * (q + 2) + m).collect();
    for i in 0..k {
        perm.swap(j * k + i, p * k + i);
    }
    Ok(perm)
}

// Serialized form. Coefficients are "num/den" strings so values stay exact.

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct TermDoc {
    pub coeff: String,
    pub vars: Vec<String>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct BlockDoc {
    pub i: usize,
    pub j: usize,
    pub terms: Vec<TermDoc>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct SystemDoc {
    pub p: usize,
    /// `(i, j)` pairs naming `P_{i,j}`.
    pub members: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct IndexSetDoc {
    pub j: usize,
    pub members: Vec<usize>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Eq)]
pub struct FiberedSystemDoc {
    pub k: usize,
    pub m: usize,
    pub ell: usize,
    pub q: usize,
    pub variables: Vec<String>,
    pub polynomials: Vec<Vec<TermDoc>>,
    pub blocks: Vec<BlockDoc>,
    pub systems: Vec<SystemDoc>,
    pub index_sets: Vec<IndexSetDoc>,
}

fn terms_doc(p: &QuadraticPoly) -> Vec<TermDoc> {
    p.terms()
        .map(|(m, c)| TermDoc {
            coeff: c.to_string(),
            vars: m.iter().map(|v| v.0.clone()).collect(),
        })
        .collect()
}

fn poly_from_doc(terms: &[TermDoc]) -> Result<QuadraticPoly> {
    let parsed = terms
        .iter()
        .map(|t| {
            let c: Rational = t
                .coeff
                .parse()
                .map_err(|e| Error::Parse(format!("coefficient {:?}: {e}", t.coeff)))?;
            Ok((t.vars.iter().map(|v| Var(v.clone())).collect(), c))
        })
        .collect::<Result<Vec<_>>>()?;
    QuadraticPoly::from_terms(parsed)
}

impl FiberedSystem {
    pub fn to_doc(&self) -> FiberedSystemDoc {
        let ell = self.ell();
        FiberedSystemDoc {
            k: self.k,
            m: self.m,
            ell,
            q: self.q,
            variables: self.variables(),
            polynomials: self.polys.iter().map(terms_doc).collect(),
            blocks: self
                .blocks
                .iter()
                .enumerate()
                .flat_map(|(j, row)| {
                    row.iter().enumerate().map(move |(i, p)| BlockDoc {
                        i: i + 1,
                        j,
                        terms: terms_doc(p),
                    })
                })
                .collect(),
            systems: (0..self.system_count())
                .map(|p| SystemDoc {
                    p,
                    members: (0..=p)
                        .flat_map(|j| (1..=ell).map(move |i| (i, j)))
                        .collect(),
                })
                .collect(),
            index_sets: (0..self.system_count())
                .map(|j| IndexSetDoc {
                    j,
                    members: self.index_set(j),
                })
                .collect(),
        }
    }

    /// Rebuilds from the input polynomials and checks every derived field.
    pub fn from_doc(doc: &FiberedSystemDoc) -> Result<Self> {
        let polys = doc
            .polynomials
            .iter()
            .map(|t| poly_from_doc(t))
            .collect::<Result<Vec<_>>>()?;
        if polys.len() != doc.ell {
            return Err(Error::Parse(format!(
                "ell is {} but {} polynomials are listed",
                doc.ell,
                polys.len()
            )));
        }
        let fs = generate_fibered_systems(&polys, doc.k, doc.m, doc.q)?;
        if fs.to_doc() != *doc {
            return Err(Error::Parse(
                "derived fields (variables, blocks, systems, index_sets) disagree with the polynomials"
                    .into(),
            ));
        }
        Ok(fs)
    }
}

pub fn emit_system(fs: &FiberedSystem) -> String {
    let mut s = serde_json::to_string_pretty(&fs.to_doc()).expect("documents serialize");
    s.push('\n');
    s
}

pub fn parse_system(text: &str) -> Result<FiberedSystem> {
    let doc: FiberedSystemDoc =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("system document: {e}")))?;
    FiberedSystem::from_doc(&doc)
}
