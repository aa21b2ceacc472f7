#![allow(dead_code)]

use std::collections::BTreeSet;

use descent_core::descent::DescentProblem;
use descent_core::simpsets::SComplex;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn complex(names: &[&str], facets: &[&[&str]]) -> SComplex {
    SComplex::from_names(names, facets).unwrap()
}

pub fn boundary_triangle() -> SComplex {
    complex(&["1", "2", "3"], &[&["1", "2"], &["1", "3"], &["2", "3"]])
}

pub fn boundary_tetrahedron() -> SComplex {
    complex(
        &["0", "1", "2", "3"],
        &[
            &["0", "1", "2"],
            &["0", "1", "3"],
            &["0", "2", "3"],
            &["1", "2", "3"],
        ],
    )
}

pub fn identity(x: SComplex, q: usize) -> DescentProblem {
    let n = x.vertex_count();
    DescentProblem::from_parts(x.clone(), x, (0..n).collect(), q).unwrap()
}

pub fn constant_triangle(q: usize) -> DescentProblem {
    let x = complex(&["a", "b", "c"], &[&["a", "b", "c"]]);
    let pt = complex(&["p"], &[]);
    DescentProblem::from_parts(x, pt, vec![0, 0, 0], q).unwrap()
}

pub fn two_points(q: usize) -> DescentProblem {
    let x = complex(&["a", "b"], &[]);
    let pt = complex(&["p"], &[]);
    DescentProblem::from_parts(x, pt, vec![0, 0], q).unwrap()
}

/// Path a0-a1-a2-a3 and edge b0-b1 covering the square y0y1y2y3.
pub fn two_arc(q: usize) -> DescentProblem {
    let x = complex(
        &["a0", "a1", "a2", "a3", "b0", "b1"],
        &[&["a0", "a1"], &["a1", "a2"], &["a2", "a3"], &["b0", "b1"]],
    );
    let y = complex(
        &["y0", "y1", "y2", "y3"],
        &[&["y0", "y1"], &["y1", "y2"], &["y2", "y3"], &["y0", "y3"]],
    );
    DescentProblem::from_parts(x, y, vec![0, 1, 2, 3, 0, 3], q).unwrap()
}

/// Two disjoint triangles both mapped onto one.
pub fn two_triangles(q: usize) -> DescentProblem {
    let x = complex(
        &["a0", "a1", "a2", "b0", "b1", "b2"],
        &[&["a0", "a1", "a2"], &["b0", "b1", "b2"]],
    );
    let y = complex(&["y0", "y1", "y2"], &[&["y0", "y1", "y2"]]);
    DescentProblem::from_parts(x, y, vec![0, 1, 2, 0, 1, 2], q).unwrap()
}

pub fn canonical_suite() -> Vec<(&'static str, DescentProblem)> {
    vec![
        (
            "identity on boundary of triangle, q=1",
            identity(boundary_triangle(), 1),
        ),
        (
            "identity on boundary of tetrahedron, q=2",
            identity(boundary_tetrahedron(), 2),
        ),
        ("constant map triangle -> point, q=1", constant_triangle(1)),
        ("two points -> point, q=1", two_points(1)),
        ("two-arc cover of the square, q=1", two_arc(1)),
        ("two triangles -> triangle, q=1", two_triangles(1)),
    ]
}

/// Random subcomplex of Δ⁵ spanned by 2 to 7 random facets (mostly edges
/// and triangles, so cycles are common), with a random nondecreasing vertex
/// map onto a simplex with 1 to 6 vertices. Nondecreasing maps are monotone
/// on every simplex and every image lands in the full target simplex.
pub fn random_problem(rng: &mut ChaCha8Rng) -> DescentProblem {
    let names: Vec<String> = (0..6).map(|v| format!("v{v}")).collect();
    let mut facets = Vec::new();
    for _ in 0..rng.gen_range(2..=7) {
        let size = *[1, 2, 2, 2, 3, 3, 4].choose(rng).unwrap();
        let mut verts: Vec<usize> = (0..6).collect();
        verts.shuffle(rng);
        let mut f = verts[..size].to_vec();
        f.sort_unstable();
        facets.push(f);
    }
    let x = SComplex::new(names, facets).unwrap();
    let t = rng.gen_range(1..=6);
    let mut assignment: Vec<usize> = (0..6).map(|_| rng.gen_range(0..t)).collect();
    assignment.sort_unstable();
    let target_names: Vec<String> = (0..t).map(|v| format!("y{v}")).collect();
    let y = SComplex::new(target_names, vec![(0..t).collect()]).unwrap();
    let q = rng.gen_range(0..=2);
    DescentProblem::from_parts(x, y, assignment, q).unwrap()
}

pub fn random_suite(seed: u64, count: usize) -> Vec<DescentProblem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_problem(&mut rng)).collect()
}

/// Union-find over `0..n`.
pub struct Components {
    parent: Vec<usize>,
}

impl Components {
    pub fn new(n: usize) -> Self {
        Components {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, a: usize) -> usize {
        let mut r = a;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        self.parent[a] = r;
        r
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.parent[ra] = rb;
    }

    pub fn count(&mut self) -> usize {
        (0..self.parent.len())
            .map(|a| self.find(a))
            .collect::<BTreeSet<_>>()
            .len()
    }
}

/// `b_0` of a simplicial complex from its edges.
pub fn components_of(k: &SComplex) -> usize {
    let mut uf = Components::new(k.vertex_count());
    for e in k.simplices(1) {
        uf.union(e[0], e[1]);
    }
    uf.count()
}

/// `b_0(W^p)` by brute force on vertex tuples: two tuples with common image
/// are joined when each coordinate pair spans an edge or a repeated vertex
/// of X and all images agree as an ordered pair.
pub fn power_components(prob: &DescentProblem, p: usize) -> usize {
    let x = prob.source();
    let f = &prob.map().assignment;
    let n = x.vertex_count();
    let mut tuples: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..=p {
        tuples = tuples
            .into_iter()
            .flat_map(|t| (0..n).map(move |v| [t.clone(), vec![v]].concat()))
            .filter(|t| t.iter().all(|&v| f[v] == f[t[0]]))
            .collect();
    }
    let index = |t: &[usize]| tuples.iter().position(|s| s == t).unwrap();
    // ordered 1-simplices of X: (u, v) with u <= v spanning a simplex
    let mut steps: Vec<(usize, usize)> = (0..n).map(|v| (v, v)).collect();
    steps.extend(x.simplices(1).into_iter().map(|e| (e[0], e[1])));
    let mut uf = Components::new(tuples.len());
    for a in &tuples {
        // extend a coordinatewise along steps with a common image pair
        let mut partial: Vec<Vec<usize>> = vec![vec![]];
        for &u in a {
            partial = partial
                .into_iter()
                .flat_map(|t| {
                    steps
                        .iter()
                        .filter(move |s| s.0 == u)
                        .map(move |s| [t.clone(), vec![s.1]].concat())
                })
                .collect();
        }
        for b in partial {
            if b.iter().all(|&v| f[v] == f[b[0]]) {
                uf.union(index(a), index(&b));
            }
        }
    }
    uf.count()
}
