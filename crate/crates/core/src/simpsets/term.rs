use std::fmt;

use crate::{Error, Result};

/// A simplex of a simplicial set in Eilenberg–Zilber normal form:
/// `s_{j_1} ... s_{j_t} x` with `x` nondegenerate and `j_1 > ... > j_t`.
///
/// The word is exactly the set of positions `j` where the simplex repeats a
/// vertex slot (`s_j d_{j+1} y = y`), listed in decreasing order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimplexTerm {
    base_dim: usize,
    base: usize,
    word: Vec<usize>,
}

impl SimplexTerm {
    pub fn nondegenerate(dim: usize, id: usize) -> Self {
        SimplexTerm {
            base_dim: dim,
            base: id,
            word: Vec::new(),
        }
    }

    /// `word` must be strictly decreasing with every index below the final
    /// dimension `base_dim + word.len()`.
    pub fn new(base_dim: usize, base: usize, word: Vec<usize>) -> Result<Self> {
        let dim = base_dim + word.len();
        if word.windows(2).any(|w| w[0] <= w[1]) {
            return Err(Error::Invalid(format!(
                "degeneracy word {word:?} is not strictly decreasing"
            )));
        }
        if word.first().is_some_and(|&j| j >= dim) {
            return Err(Error::Invalid(format!(
                "degeneracy word {word:?} invalid in dimension {dim}"
            )));
        }
        Ok(SimplexTerm {
            base_dim,
            base,
            word,
        })
    }

    pub(crate) fn from_surjection(base_dim: usize, base: usize, sigma: &[usize]) -> Self {
        debug_assert_eq!(sigma.last().copied(), Some(base_dim));
        let word = (0..sigma.len() - 1)
            .rev()
            .filter(|&k| sigma[k] == sigma[k + 1])
            .collect();
        SimplexTerm {
            base_dim,
            base,
            word,
        }
    }

    pub fn dim(&self) -> usize {
        self.base_dim + self.word.len()
    }

    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn is_degenerate(&self) -> bool {
        !self.word.is_empty()
    }

    /// Whether `j` is one of the degeneracy positions.
    pub fn repeats_at(&self, j: usize) -> bool {
        self.word.binary_search_by(|probe| j.cmp(probe)).is_ok()
    }

    /// The monotone surjection `[dim] -> [base_dim]` encoded by the word.
    pub(crate) fn surjection(&self) -> Vec<usize> {
        let n = self.dim();
        let mut sigma = Vec::with_capacity(n + 1);
        sigma.push(0);
        for k in 0..n {
            let step = usize::from(!self.repeats_at(k));
            sigma.push(sigma[k] + step);
        }
        sigma
    }
}

impl fmt::Debug for SimplexTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in &self.word {
            write!(f, "s{j} ")?;
        }
        write!(f, "x[{}:{}]", self.base_dim, self.base)
    }
}

/// All strictly decreasing words of `len` indices drawn from `0..n`, in
/// lexicographic order of the increasing index sets.
pub(crate) fn words(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(len);
    fn rec(start: usize, n: usize, len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.iter().rev().copied().collect());
            return;
        }
        for k in start..n {
            cur.push(k);
            rec(k + 1, n, len, cur, out);
            cur.pop();
        }
    }
    rec(0, n, len, &mut current, &mut out);
    out
}
