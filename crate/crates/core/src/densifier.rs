//! Densified complexes: replace each vertex of a base expander graph with a
//! copy of a small complete complex and glue copies along edges. States of
//! the resulting high-order walks are labeled faces `(F, f)` carrying an
//! offset and a color.


use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::scalar::Real;
use crate::simplicial::{binomial, Face, SimplicialComplex};

/// Image of a face labeling: a single base-graph vertex (constant labeling)
/// or an edge's endpoint pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Color {
    Vertex(u32),
    Edge(u32, u32),
}

/// A `k`-face of the densified complex in labeled form: the underlying face
/// of the small complex plus the graph vertex assigned to each element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DensifiedFace {
    /// Sorted vertex ids in the small complex.
    pub base_face: Face,
    /// Graph vertex for each base vertex, aligned with `base_face`.
    pub labels: Vec<u32>,
    pub color: Color,
    /// Minority-side size of the labeling (0 when constant).
    pub offset: usize,
}

/// Reduced induced weights at one walk level: `w_i` for edge-colored faces,
/// `w_j` for constant-labeled ones, and their combination `d = T w_i + w_j`.
#[derive(Clone, Copy, Debug)]
pub struct ReducedWeights<F> {
    pub w_i: F,
    pub w_j: F,
    pub d: F,
}

/// The densified complex together with the parameters of its construction.
#[derive(Clone, Debug)]
pub struct DensifiedComplex<F> {
    graph: WeightedGraph<F>,
    base: SimplicialComplex<F>,
    complex: SimplicialComplex<F>,
    degree: usize,
    edges: Vec<(u32, u32)>,
    neighbors: Vec<Vec<u32>>,
}

impl<F: Real> DensifiedComplex<F> {
    /// Builds the pure `H`-dimensional complex on `V(g) x V(b)` whose top
    /// faces are the labelings of top faces of `b` by endpoints of single
    /// edges of `g`, with uniform unit top weights.
    ///
    /// `g` must be simple, connected, regular, and triangle-free; those are
    /// the standing assumptions of every chain built downstream.
    pub fn build(g: WeightedGraph<F>, b: SimplicialComplex<F>) -> Result<Self> {
        if g.is_directed() {
            return Err(Error::UnsupportedInput("base graph must be undirected".into()));
        }
        let mut edges: Vec<(u32, u32)> = Vec::new();
        for &(u, v, w) in g.edges() {
            if u == v {
                return Err(Error::UnsupportedInput("base graph must be loop-free".into()));
            }
            if w != F::one() {
                return Err(Error::UnsupportedInput("base graph must have unit weights".into()));
            }
            edges.push((u.min(v), u.max(v)));
        }
        edges.sort_unstable();
        edges.dedup();
        if !g.is_connected() {
            return Err(Error::UnsupportedInput("base graph must be connected".into()));
        }
        if let Some(tri) = g.has_triangle() {
            return Err(Error::TriangleFound(tri));
        }
        let Some(degree) = g.regular_degree() else {
            return Err(Error::UnsupportedInput("base graph must be regular".into()));
        };

        let n = g.vertex_count();
        let mut neighbors: Vec<Vec<u32>> = vec![Vec::new(); n];
        for &(u, v) in &edges {
            neighbors[u as usize].push(v);
            neighbors[v as usize].push(u);
        }
        for nbrs in &mut neighbors {
            nbrs.sort_unstable();
        }

        let s = b.vertex_count();
        let h = b.top_dim();
        let mut top_faces: Vec<Face> = Vec::new();
        // Constant labelings: one copy per graph vertex.
        for u in 0..n as u32 {
            for base in b.faces(h) {
                top_faces.push(assemble_face(base, &vec![u; h + 1], s));
            }
        }
        // Non-constant labelings over each edge.
        for &(u, v) in &edges {
            for base in b.faces(h) {
                for mask in 1..((1u32 << (h + 1)) - 1) {
                    let labels: Vec<u32> = (0..=h)
                        .map(|i| if mask >> i & 1 == 1 { v } else { u })
                        .collect();
                    top_faces.push(assemble_face(base, &labels, s));
                }
            }
        }
        let weights = vec![F::one(); top_faces.len()];
        let complex = SimplicialComplex::from_top_faces(n * s, h, top_faces, weights)?;
        Ok(Self { graph: g, base: b, complex, degree, edges, neighbors })
    }

    pub fn graph(&self) -> &WeightedGraph<F> {
        &self.graph
    }

    pub fn base(&self) -> &SimplicialComplex<F> {
        &self.base
    }

    pub fn complex(&self) -> &SimplicialComplex<F> {
        &self.complex
    }

    /// Regularity degree of the base graph.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base_vertex_count(&self) -> usize {
        self.base.vertex_count()
    }

    pub fn top_dim(&self) -> usize {
        self.base.top_dim()
    }

    /// Sorted edge list of the base graph.
    pub fn graph_edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn edge_index(&self, u: u32, v: u32) -> Option<usize> {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).ok()
    }

    pub fn neighbors(&self, u: u32) -> &[u32] {
        &self.neighbors[u as usize]
    }

    /// Splits a stored face of the product complex back into labeled form.
    pub fn annotate(&self, face: &[u32]) -> DensifiedFace {
        let s = self.base_vertex_count() as u32;
        let mut parts: Vec<(u32, u32)> = face.iter().map(|&x| (x % s, x / s)).collect();
        parts.sort_unstable();
        let base_face: Face = parts.iter().map(|&(b, _)| b).collect();
        let labels: Vec<u32> = parts.iter().map(|&(_, g)| g).collect();
        let mut distinct: Vec<u32> = labels.clone();
        distinct.sort_unstable();
        distinct.dedup();
        let (color, offset) = match distinct.as_slice() {
            [u] => (Color::Vertex(*u), 0),
            [u, v] => {
                let low = labels.iter().filter(|&&x| x == *u).count();
                let high = labels.len() - low;
                (Color::Edge(*u, *v), low.min(high))
            }
            _ => panic!("face {face:?} is not supported on a vertex or edge"),
        };
        DensifiedFace { base_face, labels, color, offset }
    }

    /// Stored vertex tuple of a labeled face.
    pub fn face_vertices(&self, face: &DensifiedFace) -> Face {
        let s = self.base_vertex_count() as u32;
        let mut out: Face = face
            .base_face
            .iter()
            .zip(&face.labels)
            .map(|(&b, &g)| g * s + b)
            .collect();
        out.sort_unstable();
        out
    }

    /// Every `k`-face exactly once: constant-labeled faces first (owned by
    /// their single vertex color), then edge-colored faces grouped by edge.
    pub fn enumerate_k_faces(&self, k: usize) -> Vec<DensifiedFace> {
        let h = self.top_dim();
        assert!(k <= h, "k out of range");
        let mut out = Vec::new();
        for u in 0..self.graph.vertex_count() as u32 {
            for base in self.base.faces(k) {
                out.push(DensifiedFace {
                    base_face: base.clone(),
                    labels: vec![u; k + 1],
                    color: Color::Vertex(u),
                    offset: 0,
                });
            }
        }
        for &(u, v) in &self.edges {
            for base in self.base.faces(k) {
                for mask in 1..((1u32 << (k + 1)) - 1) {
                    let labels: Vec<u32> = (0..=k)
                        .map(|i| if mask >> i & 1 == 1 { v } else { u })
                        .collect();
                    let high = mask.count_ones() as usize;
                    let low = k + 1 - high;
                    out.push(DensifiedFace {
                        base_face: base.clone(),
                        labels,
                        color: Color::Edge(u, v),
                        offset: low.min(high),
                    });
                }
            }
        }
        out
    }

    /// Closed-form `k`-face counts: `(constant-labeled, edge-colored)`.
    pub fn face_counts(&self, k: usize) -> (usize, usize) {
        let n = self.graph.vertex_count();
        let m = self.edges.len();
        let per_base = self.base.faces(k).len();
        let zero = n * per_base;
        let rest = m * per_base * ((1usize << (k + 1)) - 2);
        (zero, rest)
    }

    /// Reduced induced weights at level `k` under uniform top weights.
    pub fn reduced_weights(&self, k: usize) -> ReducedWeights<F> {
        reduced_weights(self.top_dim(), self.degree, k)
    }

    /// The reduced weight class of one labeled face.
    pub fn face_weight(&self, face: &DensifiedFace) -> F {
        let k = face.base_face.len() - 1;
        let rw = self.reduced_weights(k);
        if face.offset == 0 {
            rw.w_j
        } else {
            rw.w_i
        }
    }

    /// Scale between reduced weights and the weights propagated from
    /// uniform unit top weights: `(H-k)! * C(s-k-1, H-k)` inclusion chains
    /// land on each top face.
    pub fn level_scale(&self, k: usize) -> u64 {
        let h = self.top_dim();
        let s = self.base_vertex_count();
        factorial(h - k) * binomial(s - k - 1, h - k)
    }

    /// Satellite/center weight pair `(w_S, w_C)` for the star-shaped local
    /// graphs at level `k` (with `k = -1` giving the global 1-skeleton).
    pub fn link_case_weights(&self, k: isize) -> Result<(F, F)> {
        link_case_weights(self.top_dim(), self.degree, k)
    }
}

/// Reduced induced weights for parameters `(H, T, k)`:
/// `w_I = 2^(H-k)`, `w_J = T 2^(H-k) - (T-1)`.
pub fn reduced_weights<F: Real>(h: usize, degree: usize, k: usize) -> ReducedWeights<F> {
    assert!(k <= h);
    let pow = F::from_f64_exact((1u64 << (h - k)) as f64);
    let t = F::from_usize_exact(degree);
    let w_i = pow;
    let w_j = t * pow - (t - F::one());
    ReducedWeights { w_i, w_j, d: t * w_i + w_j }
}

/// `(w_S, w_C) = (2^(H-k-2), 1 + T(2^(H-k-2) - 1))` for `-1 <= k <= H-2`.
pub fn link_case_weights<F: Real>(h: usize, degree: usize, k: isize) -> Result<(F, F)> {
    if k < -1 || k > h as isize - 2 {
        return Err(Error::Range(format!("link-case weights need -1 <= k <= H-2, got k={k}")));
    }
    let exp = (h as isize - (k + 2)) as u32;
    let pow = F::from_f64_exact((1u64 << exp) as f64);
    let t = F::from_usize_exact(degree);
    let w_s = pow;
    let w_c = F::one() + t * (pow - F::one());
    Ok((w_s, w_c))
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

fn assemble_face(base: &[u32], labels: &[u32], s: usize) -> Face {
    let mut out: Face = base
        .iter()
        .zip(labels)
        .map(|(&b, &g)| g * s as u32 + b)
        .collect();
    out.sort_unstable();
    out
}
