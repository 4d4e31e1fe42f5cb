//! Downward-closed face families with balanced weight functions: links,
//! skeletons, and the local/global expansion measures defined on them.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::scalar::Real;

/// Residual bound for balance and closure validation.
pub const BALANCE_TOL: f64 = 1e-12;

/// A face is a sorted tuple of vertex ids.
pub type Face = Vec<u32>;

/// Pure simplicial complex with a balanced weight function. Faces are stored
/// per dimension in lexicographic order; weights are aligned with the face
/// lists.
#[derive(Clone, Debug)]
pub struct SimplicialComplex<F> {
    vertex_count: usize,
    top_dim: usize,
    faces_by_dim: Vec<Vec<Face>>,
    weights_by_dim: Vec<Vec<F>>,
    index: HashMap<Face, (usize, usize)>,
}

/// The link of a face: the complex `{T \ S : S ⊆ T}` with inherited weights
/// `w_S(T) = w(S ∪ T)`.
#[derive(Clone, Debug)]
pub struct LinkView<F> {
    pub base_face: Face,
    pub complex: SimplicialComplex<F>,
}

/// Outcome of the worst-link scan.
#[derive(Clone, Debug)]
pub struct LocalExpansion<F> {
    pub value: F,
    /// Links whose 1-skeleton support was disconnected (gap may be <= 0).
    pub disconnected_links: usize,
    /// Links skipped because their 1-skeleton carries no edges.
    pub skipped_links: usize,
    pub evaluated_links: usize,
}

impl<F: Real> SimplicialComplex<F> {
    /// Builds the pure complex generated by `top_faces` (all of dimension
    /// `top_dim`), with weights propagated down from `top_weights`.
    pub fn from_top_faces(
        vertex_count: usize,
        top_dim: usize,
        top_faces: Vec<Face>,
        top_weights: Vec<F>,
    ) -> Result<Self> {
        if top_faces.len() != top_weights.len() {
            return Err(Error::IncompleteWeights(vec![]));
        }
        if top_faces.is_empty() {
            return Err(Error::Dimension("complex needs at least one top face".into()));
        }
        let mut canon: Vec<(Face, F)> = Vec::with_capacity(top_faces.len());
        for (face, w) in top_faces.into_iter().zip(top_weights) {
            let mut face = face;
            face.sort_unstable();
            face.dedup();
            if face.len() != top_dim + 1 {
                return Err(Error::NotPure);
            }
            if face.iter().any(|&v| v as usize >= vertex_count) {
                return Err(Error::InvalidGraph(format!("face {face:?} out of range")));
            }
            if w < F::zero() {
                return Err(Error::InvalidGraph(format!("negative weight on face {face:?}")));
            }
            canon.push((face, w));
        }
        canon.sort_by(|a, b| a.0.cmp(&b.0));
        for pair in canon.windows(2) {
            if pair[0].0 == pair[1].0 {
                return Err(Error::InvalidGraph(format!("duplicate top face {:?}", pair[0].0)));
            }
        }

        // Downward closure, one level at a time.
        let mut faces_by_dim: Vec<Vec<Face>> = vec![Vec::new(); top_dim + 1];
        let mut weights_by_dim: Vec<Vec<F>> = vec![Vec::new(); top_dim + 1];
        faces_by_dim[top_dim] = canon.iter().map(|(f, _)| f.clone()).collect();
        weights_by_dim[top_dim] = canon.iter().map(|&(_, w)| w).collect();

        for k in (0..top_dim).rev() {
            let mut acc: HashMap<Face, F> = HashMap::new();
            for (face, &w) in faces_by_dim[k + 1].iter().zip(&weights_by_dim[k + 1]) {
                for skip in 0..face.len() {
                    let mut sub = face.clone();
                    sub.remove(skip);
                    *acc.entry(sub).or_insert_with(F::zero) += w;
                }
            }
            let mut faces: Vec<Face> = acc.keys().cloned().collect();
            faces.sort();
            let weights = faces.iter().map(|f| acc[f]).collect();
            faces_by_dim[k] = faces;
            weights_by_dim[k] = weights;
        }

        let mut index = HashMap::new();
        for (k, faces) in faces_by_dim.iter().enumerate() {
            for (i, f) in faces.iter().enumerate() {
                index.insert(f.clone(), (k, i));
            }
        }
        Ok(Self { vertex_count, top_dim, faces_by_dim, weights_by_dim, index })
    }

    /// Internal constructor for links: faces and weights given explicitly.
    fn from_raw(vertex_count: usize, mut levels: Vec<Vec<(Face, F)>>) -> Self {
        while levels.len() > 1 && levels.last().is_some_and(Vec::is_empty) {
            levels.pop();
        }
        if levels.is_empty() {
            // Link of a top face: no faces at all.
            levels.push(Vec::new());
        }
        let top_dim = levels.len() - 1;
        let mut faces_by_dim = Vec::with_capacity(levels.len());
        let mut weights_by_dim = Vec::with_capacity(levels.len());
        let mut index = HashMap::new();
        for (k, mut level) in levels.into_iter().enumerate() {
            level.sort_by(|a, b| a.0.cmp(&b.0));
            let faces: Vec<Face> = level.iter().map(|(f, _)| f.clone()).collect();
            let weights: Vec<F> = level.iter().map(|&(_, w)| w).collect();
            for (i, f) in faces.iter().enumerate() {
                index.insert(f.clone(), (k, i));
            }
            faces_by_dim.push(faces);
            weights_by_dim.push(weights);
        }
        Self { vertex_count, top_dim, faces_by_dim, weights_by_dim, index }
    }

    /// All subsets of `[s]` of size `h+1` as top faces with unit weights.
    pub fn complete(s: usize, h: usize) -> Result<Self> {
        if s <= h {
            return Err(Error::Dimension(format!(
                "complete complex needs s >= h+1 (got s={s}, h={h})"
            )));
        }
        let faces = subsets_of_size(s as u32, h + 1);
        let weights = vec![F::one(); faces.len()];
        Self::from_top_faces(s, h, faces, weights)
    }

    /// Re-propagates from a full map of top-face weights.
    pub fn with_top_weights(&self, top_weights: &HashMap<Face, F>) -> Result<Self> {
        let mut weights = Vec::with_capacity(self.faces_by_dim[self.top_dim].len());
        for face in &self.faces_by_dim[self.top_dim] {
            match top_weights.get(face) {
                Some(&w) => weights.push(w),
                None => return Err(Error::IncompleteWeights(face.clone())),
            }
        }
        Self::from_top_faces(
            self.vertex_count,
            self.top_dim,
            self.faces_by_dim[self.top_dim].clone(),
            weights,
        )
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn top_dim(&self) -> usize {
        self.top_dim
    }

    /// The `k`-faces, lexicographically sorted.
    pub fn faces(&self, k: usize) -> &[Face] {
        &self.faces_by_dim[k]
    }

    pub fn weights(&self, k: usize) -> &[F] {
        &self.weights_by_dim[k]
    }

    pub fn weight_of(&self, face: &[u32]) -> Option<F> {
        let &(k, i) = self.index.get(face)?;
        Some(self.weights_by_dim[k][i])
    }

    pub fn contains(&self, face: &[u32]) -> bool {
        self.index.contains_key(face)
    }

    pub fn index_of(&self, face: &[u32]) -> Option<(usize, usize)> {
        self.index.get(face).copied()
    }

    pub fn face_count(&self) -> usize {
        self.faces_by_dim.iter().map(Vec::len).sum()
    }

    /// Any face with non-positive weight makes the weighting degenerate.
    pub fn has_degenerate_weights(&self) -> bool {
        self.weights_by_dim
            .iter()
            .any(|ws| ws.iter().any(|&w| w <= F::zero()))
    }

    /// Max balance residual `|w(F) - sum of superface weights|`.
    pub fn balance_residual(&self) -> F {
        let mut worst = F::zero();
        for k in 0..self.top_dim {
            let mut sums = vec![F::zero(); self.faces_by_dim[k].len()];
            for (face, &w) in self.faces_by_dim[k + 1].iter().zip(&self.weights_by_dim[k + 1]) {
                for skip in 0..face.len() {
                    let mut sub = face.clone();
                    sub.remove(skip);
                    let (_, i) = self.index[&sub];
                    sums[i] += w;
                }
            }
            for (&have, &want) in self.weights_by_dim[k].iter().zip(&sums) {
                worst = worst.max((have - want).abs());
            }
        }
        worst
    }

    /// Structural validation: downward closure plus balanced weights.
    pub fn validate(&self) -> Result<()> {
        for k in 1..=self.top_dim {
            for face in &self.faces_by_dim[k] {
                for skip in 0..face.len() {
                    let mut sub = face.clone();
                    sub.remove(skip);
                    if !self.index.contains_key(&sub) {
                        return Err(Error::MissingFace(sub));
                    }
                }
            }
        }
        let residual = self.balance_residual();
        if residual.to_f64() > BALANCE_TOL {
            return Err(Error::Unbalanced { residual: residual.to_f64() });
        }
        Ok(())
    }

    /// The link of `s`, with inherited weights. The empty face yields the
    /// complex itself.
    pub fn link(&self, s: &[u32]) -> Result<LinkView<F>> {
        let mut key: Face = s.to_vec();
        key.sort_unstable();
        if key.is_empty() {
            return Ok(LinkView { base_face: key, complex: self.clone() });
        }
        if !self.index.contains_key(&key) {
            return Err(Error::MissingFace(key));
        }
        let mut levels: Vec<Vec<(Face, F)>> = vec![Vec::new(); self.top_dim + 1 - key.len() + 1];
        for k in key.len()..=self.top_dim {
            for (face, &w) in self.faces_by_dim[k].iter().zip(&self.weights_by_dim[k]) {
                if is_subset(&key, face) {
                    let rest: Face =
                        face.iter().copied().filter(|v| !key.contains(v)).collect();
                    levels[rest.len()].push((rest, w));
                }
            }
        }
        // levels[0] is the empty face (dropped); shift down by one.
        levels.remove(0);
        Ok(LinkView { base_face: key, complex: Self::from_raw(self.vertex_count, levels) })
    }

    /// Weighted graph on the complex's 0-faces with 1-face edge weights.
    /// Zero-weight 1-faces are dropped from the support.
    pub fn one_skeleton(&self) -> Result<WeightedGraph<F>> {
        let graph = self.skeleton_support();
        match graph {
            Some(g) => Ok(g),
            None => Err(Error::Dimension("complex has no weighted edges".into())),
        }
    }

    /// Vertex ids backing the rows of [`Self::one_skeleton`].
    pub fn skeleton_vertices(&self) -> Vec<u32> {
        self.faces_by_dim[0].iter().map(|f| f[0]).collect()
    }

    /// `None` when no 1-face carries positive weight.
    fn skeleton_support(&self) -> Option<WeightedGraph<F>> {
        if self.top_dim < 1 {
            return None;
        }
        let vertices = self.skeleton_vertices();
        let lookup: HashMap<u32, u32> = vertices
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i as u32))
            .collect();
        let mut edges = Vec::new();
        for (face, &w) in self.faces_by_dim[1].iter().zip(&self.weights_by_dim[1]) {
            if w > F::zero() {
                edges.push((lookup[&face[0]], lookup[&face[1]], w));
            }
        }
        if edges.is_empty() {
            return None;
        }
        Some(WeightedGraph::undirected(vertices.len(), edges).expect("valid skeleton"))
    }

    /// Two-sided gap of the weighted 1-skeleton.
    pub fn global_expansion(&self) -> Result<F> {
        Ok(self.one_skeleton()?.spectrum()?.two_sided_gap)
    }

    /// Worst two-sided gap over the 1-skeletons of all links of faces of
    /// dimension `0..top_dim-1`. Links without any weighted edge have no
    /// spectrum and are skipped; if every link is skipped (a 1-dimensional
    /// complex), the global expansion is returned.
    pub fn local_expansion(&self) -> Result<LocalExpansion<F>> {
        let mut all_faces: Vec<&Face> = Vec::new();
        for k in 0..self.top_dim {
            all_faces.extend(self.faces_by_dim[k].iter());
        }
        let outcomes: Vec<Option<(F, bool)>> = all_faces
            .par_iter()
            .map(|face| {
                let link = self.link(face).expect("stored face");
                link_skeleton_gap(&link.complex)
            })
            .collect();

        let mut value = F::infinity();
        let mut disconnected = 0usize;
        let mut skipped = 0usize;
        let mut evaluated = 0usize;
        for outcome in outcomes {
            match outcome {
                None => skipped += 1,
                Some((gap, conn)) => {
                    evaluated += 1;
                    if !conn {
                        disconnected += 1;
                    }
                    value = value.min(gap);
                }
            }
        }
        if evaluated == 0 {
            value = self.global_expansion()?;
        }
        Ok(LocalExpansion {
            value,
            disconnected_links: disconnected,
            skipped_links: skipped,
            evaluated_links: evaluated,
        })
    }
}

/// Two-sided gap of a link's 1-skeleton support, with a connectivity flag;
/// `None` when the link carries no weighted edges.
pub fn link_skeleton_gap<F: Real>(link: &SimplicialComplex<F>) -> Option<(F, bool)> {
    let graph = link.skeleton_support()?;
    let connected = graph.is_connected();
    let gap = graph
        .spectrum()
        .expect("support skeleton is normalizable and reversible")
        .two_sided_gap;
    Some((gap, connected))
}

fn is_subset(small: &[u32], big: &[u32]) -> bool {
    // Both sorted.
    let mut it = big.iter();
    small.iter().all(|s| it.by_ref().any(|b| b == s))
}

/// All size-`k` subsets of `0..n`, lexicographically.
pub fn subsets_of_size(n: u32, k: usize) -> Vec<Face> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: u32, n: u32, k: usize, current: &mut Face, out: &mut Vec<Face>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        let remaining = k - current.len();
        for v in start..=(n - remaining as u32) {
            current.push(v);
            rec(v + 1, n, k, current, out);
            current.pop();
        }
    }
    if k <= n as usize {
        rec(0, n, k, &mut current, &mut out);
    }
    out
}

/// Binomial coefficient as f64-exact integer arithmetic.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = SimplicialComplex<f64>;

    #[test]
    fn complete_complex_counts_and_weights() {
        let c = C::complete(4, 2).unwrap();
        assert_eq!(c.faces(0).len(), 4);
        assert_eq!(c.faces(1).len(), 6);
        assert_eq!(c.faces(2).len(), 4);
        // Every edge sits in two triangles; each vertex in three edges.
        for &w in c.weights(1) {
            assert_eq!(w, 2.0);
        }
        for &w in c.weights(0) {
            assert_eq!(w, 6.0);
        }
        c.validate().unwrap();

        assert!(matches!(C::complete(2, 2), Err(Error::Dimension(_))));

        // Smallest case: a single edge.
        let edge = C::complete(2, 1).unwrap();
        assert_eq!(edge.faces(1).len(), 1);
        assert_eq!(edge.weights(1)[0], 1.0);
    }

    #[test]
    fn propagation_is_idempotent_and_flags_degenerate() {
        let c = C::complete(4, 2).unwrap();
        let top: HashMap<Face, f64> =
            c.faces(2).iter().map(|f| (f.clone(), 1.0)).collect();
        let again = c.with_top_weights(&top).unwrap();
        for k in 0..=2 {
            assert_eq!(c.weights(k), again.weights(k));
        }

        let zero: HashMap<Face, f64> = c.faces(2).iter().map(|f| (f.clone(), 0.0)).collect();
        let z = c.with_top_weights(&zero).unwrap();
        assert!(z.has_degenerate_weights());
        assert!(!c.has_degenerate_weights());

        let mut missing = top.clone();
        missing.remove(&vec![0, 1, 2]);
        assert!(matches!(
            c.with_top_weights(&missing),
            Err(Error::IncompleteWeights(_))
        ));
    }

    #[test]
    fn single_top_face_weights_count_chains() {
        // One triangle: each edge weight 1, each vertex weight 2 (two
        // deletion orders reach it).
        let c = C::from_top_faces(3, 2, vec![vec![0, 1, 2]], vec![1.0]).unwrap();
        for &w in c.weights(1) {
            assert_eq!(w, 1.0);
        }
        for &w in c.weights(0) {
            assert_eq!(w, 2.0);
        }
    }

    #[test]
    fn links() {
        let c = C::complete(4, 2).unwrap();

        // Link of the empty face is the complex itself.
        let whole = c.link(&[]).unwrap();
        assert_eq!(whole.complex.face_count(), c.face_count());

        // Link of a vertex in K_4^(2) is the triangle on the other three.
        let lk = c.link(&[0]).unwrap();
        assert_eq!(lk.complex.top_dim(), 1);
        assert_eq!(lk.complex.faces(0).len(), 3);
        assert_eq!(lk.complex.faces(1).len(), 3);

        // Link of an edge: the two remaining vertices, no edges between.
        let lk = c.link(&[1, 2]).unwrap();
        assert_eq!(lk.complex.faces(0).len(), 2);
        assert_eq!(lk.complex.top_dim(), 0);

        assert!(matches!(c.link(&[0, 1, 2, 3]), Err(Error::MissingFace(_))));

        // In a graph, the link of a vertex is its neighborhood.
        let path = C::from_top_faces(3, 1, vec![vec![0, 1], vec![1, 2]], vec![1.0, 1.0]).unwrap();
        let lk = path.link(&[1]).unwrap();
        assert_eq!(lk.complex.faces(0), &[vec![0], vec![2]]);
    }

    #[test]
    fn links_of_balanced_complexes_stay_balanced() {
        let c = C::complete(5, 3).unwrap();
        for k in 0..=3 {
            for face in c.faces(k) {
                let lk = c.link(face).unwrap();
                if lk.complex.top_dim() > 0 {
                    let residual = lk.complex.balance_residual();
                    assert!(residual < 1e-12, "face {face:?} residual {residual}");
                }
            }
        }
    }

    #[test]
    fn one_skeleton_spectra() {
        let c = C::complete(4, 2).unwrap();
        let g = c.one_skeleton().unwrap();
        let s = g.spectrum().unwrap();
        // Uniform edge weights: same spectrum as the unweighted K_4.
        let want = crate::graph::WeightedGraph::<f64>::clique(4).spectrum().unwrap();
        for (a, b) in s.eigenvalues.iter().zip(&want.eigenvalues) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((c.global_expansion().unwrap() - 2.0 / 3.0).abs() < 1e-12);

        // A 1-dimensional complex is its own skeleton.
        let edge = C::complete(2, 1).unwrap();
        let g = edge.one_skeleton().unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert!(edge.global_expansion().unwrap().abs() < 1e-12);

        // Zero-weight edges drop out of the support.
        let c = C::from_top_faces(3, 1, vec![vec![0, 1], vec![1, 2]], vec![1.0, 0.0]).unwrap();
        let g = c.one_skeleton().unwrap();
        assert_eq!(g.edges().len(), 1);
    }

    #[test]
    fn local_expansion_of_complete_complexes() {
        for h in [1usize, 2, 3] {
            let c = C::complete(h + 2, h).unwrap();
            let le = c.local_expansion().unwrap();
            assert!((le.value - 0.5).abs() < 1e-9, "H={h}: {}", le.value);
            assert_eq!(le.disconnected_links, 0);
        }
        // K_4^(2): worst link is a vertex link (triangle, gap 1/2); edge
        // links have no edges and are skipped.
        let c = C::complete(4, 2).unwrap();
        let le = c.local_expansion().unwrap();
        assert_eq!(le.skipped_links, 6);
        assert_eq!(le.evaluated_links, 4);
    }

    #[test]
    fn binomial_and_subsets() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(subsets_of_size(4, 2).len(), 6);
        assert_eq!(subsets_of_size(4, 5).len(), 0);
        let subs = subsets_of_size(3, 2);
        assert_eq!(subs, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
    }
}
