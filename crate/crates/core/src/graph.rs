//! Edge-weighted graphs and their normalized-adjacency spectra, plus the
//! graph surgery the densified construction needs: tensor products, lazy
//! self-loops, line graphs, and triangle-free regular samples.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{general_eigenvalues, symmetric_eigen, Matrix};
use crate::scalar::Real;

/// Residual below which a chain counts as reversible.
pub const REVERSIBILITY_TOL: f64 = 1e-10;
/// Largest imaginary part tolerated in general-eigenvalue mode.
pub const IMAG_TOL: f64 = 1e-8;

/// Edge-weighted graph. Undirected edges are stored once per unordered pair;
/// self-loops are allowed and contribute their weight once.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeightedGraph<F> {
    vertex_count: usize,
    directed: bool,
    edges: Vec<(u32, u32, F)>,
}

/// Real spectrum of a graph's normalized adjacency matrix, eigenvalues
/// sorted descending.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpectralSummary<F> {
    pub eigenvalues: Vec<F>,
    pub one_sided_gap: F,
    pub two_sided_gap: F,
}

impl<F: Real> SpectralSummary<F> {
    /// Sorts descending and derives both gaps.
    pub fn from_eigenvalues(mut eigenvalues: Vec<F>) -> Self {
        eigenvalues.sort_by(|a, b| b.partial_cmp(a).expect("real eigenvalues"));
        let one_sided_gap = if eigenvalues.len() > 1 {
            F::one() - eigenvalues[1]
        } else {
            F::one()
        };
        let two_sided_gap = if eigenvalues.len() > 1 {
            let low = eigenvalues.last().unwrap().abs();
            F::one() - eigenvalues[1].abs().max(low)
        } else {
            F::one()
        };
        Self { eigenvalues, one_sided_gap, two_sided_gap }
    }
}

/// How [`WeightedGraph::spectrum`] treats non-reversible inputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpectrumMode {
    /// Symmetrize by the stationary distribution; error if not reversible.
    Reversible,
    /// General dense eigensolve; error if eigenvalues come out complex.
    General,
}

impl<F: Real> WeightedGraph<F> {
    pub fn new(vertex_count: usize, directed: bool, edges: Vec<(u32, u32, F)>) -> Result<Self> {
        for &(u, v, w) in &edges {
            if u as usize >= vertex_count || v as usize >= vertex_count {
                return Err(Error::InvalidGraph(format!(
                    "edge ({u}, {v}) out of range for {vertex_count} vertices"
                )));
            }
            if w < F::zero() {
                return Err(Error::InvalidGraph(format!("negative weight on edge ({u}, {v})")));
            }
        }
        Ok(Self { vertex_count, directed, edges })
    }

    pub fn undirected(vertex_count: usize, edges: Vec<(u32, u32, F)>) -> Result<Self> {
        Self::new(vertex_count, false, edges)
    }

    /// Unweighted undirected graph from an edge list.
    pub fn simple(vertex_count: usize, edges: &[(u32, u32)]) -> Result<Self> {
        Self::undirected(
            vertex_count,
            edges.iter().map(|&(u, v)| (u, v, F::one())).collect(),
        )
    }

    /// Cycle on `n` vertices with unit weights.
    pub fn cycle(n: usize) -> Self {
        let edges = (0..n as u32).map(|i| (i, (i + 1) % n as u32)).collect::<Vec<_>>();
        Self::simple(n, &edges).unwrap()
    }

    /// Complete graph on `n` vertices with unit weights.
    pub fn clique(n: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..n as u32 {
            for v in (u + 1)..n as u32 {
                edges.push((u, v));
            }
        }
        Self::simple(n, &edges).unwrap()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn edges(&self) -> &[(u32, u32, F)] {
        &self.edges
    }

    /// Dense weight matrix `W[u][v]` (symmetric for undirected graphs).
    pub fn weight_matrix(&self) -> Matrix<F> {
        let n = self.vertex_count;
        let mut w = Matrix::zeros(n, n);
        for &(u, v, x) in &self.edges {
            let (u, v) = (u as usize, v as usize);
            w[(u, v)] += x;
            if !self.directed && u != v {
                w[(v, u)] += x;
            }
        }
        w
    }

    pub fn out_weights(&self) -> Vec<F> {
        let w = self.weight_matrix();
        (0..self.vertex_count).map(|u| w.row(u).iter().copied().sum()).collect()
    }

    /// Row-stochastic transition matrix of the weighted random walk.
    pub fn normalized_adjacency(&self) -> Result<Matrix<F>> {
        let mut w = self.weight_matrix();
        for u in 0..self.vertex_count {
            let total: F = w.row(u).iter().copied().sum();
            if total <= F::zero() {
                return Err(Error::IsolatedVertex(u));
            }
            for x in w.row_mut(u) {
                *x /= total;
            }
        }
        Ok(w)
    }

    /// The walk's stationary distribution. Degree-proportional for
    /// undirected graphs; a dense left-eigenvector solve otherwise.
    pub fn walk_stationary(&self) -> Result<Vec<F>> {
        if !self.directed {
            let d = self.out_weights();
            let total: F = d.iter().copied().sum();
            if total <= F::zero() {
                return Err(Error::IsolatedVertex(0));
            }
            return Ok(d.into_iter().map(|x| x / total).collect());
        }
        let p = self.normalized_adjacency()?;
        crate::markov::stationary_of_matrix(&p)
    }

    /// Real eigenvalues of the normalized adjacency matrix.
    ///
    /// Reversible mode symmetrizes by the stationary distribution, which is
    /// numerically exact for every chain in this crate; general mode falls
    /// back to a dense nonsymmetric solve and insists the spectrum is real.
    pub fn spectrum_with(&self, mode: SpectrumMode) -> Result<SpectralSummary<F>> {
        let p = self.normalized_adjacency()?;
        match mode {
            SpectrumMode::Reversible => {
                let pi = self.walk_stationary()?;
                let residual = detailed_balance_residual(&p, &pi);
                if residual.to_f64() > REVERSIBILITY_TOL {
                    return Err(Error::NotReversible { residual: residual.to_f64() });
                }
                Ok(SpectralSummary::from_eigenvalues(reversible_eigenvalues(&p, &pi)))
            }
            SpectrumMode::General => {
                let eig = general_eigenvalues(&p);
                let max_imag = eig.iter().map(|e| e.1.abs()).fold(F::zero(), F::max);
                if max_imag.to_f64() > IMAG_TOL {
                    return Err(Error::ComplexSpectrum { max_imag: max_imag.to_f64() });
                }
                Ok(SpectralSummary::from_eigenvalues(eig.into_iter().map(|e| e.0).collect()))
            }
        }
    }

    pub fn spectrum(&self) -> Result<SpectralSummary<F>> {
        self.spectrum_with(SpectrumMode::Reversible)
    }

    /// Tensor product: vertex set `V(self) x V(other)`, edge weights
    /// multiply, so the spectrum is the set of pairwise eigenvalue products.
    pub fn tensor_product(&self, other: &Self) -> Result<Self> {
        if self.directed || other.directed {
            return Err(Error::UnsupportedInput("tensor product of directed graphs".into()));
        }
        let nh = other.vertex_count as u32;
        let id = |u: u32, i: u32| u * nh + i;
        let mut edges = Vec::new();
        // Work at the weight-matrix level so undirected pairs come out once.
        let wg = self.weight_matrix();
        let wh = other.weight_matrix();
        let n1 = self.vertex_count;
        let n2 = other.vertex_count;
        for u in 0..n1 {
            for v in 0..n1 {
                if wg[(u, v)] == F::zero() {
                    continue;
                }
                for i in 0..n2 {
                    for j in 0..n2 {
                        let w = wg[(u, v)] * wh[(i, j)];
                        if w == F::zero() {
                            continue;
                        }
                        let a = id(u as u32, i as u32);
                        let b = id(v as u32, j as u32);
                        if a <= b {
                            edges.push((a, b, w));
                        }
                    }
                }
            }
        }
        Self::undirected(n1 * n2, edges)
    }

    /// Lazy walk: transition matrix becomes `c I + (1-c) P`. The one-sided
    /// gap scales by exactly `1-c`. Stays undirected by folding the loop
    /// mass into self-loop weights proportional to each degree.
    pub fn add_lazy_loops(&self, c: F) -> Result<Self> {
        if c < F::zero() || c > F::one() {
            return Err(Error::Range(format!("laziness {c} outside [0, 1]")));
        }
        if self.directed {
            return Err(Error::UnsupportedInput("lazy loops on a directed graph".into()));
        }
        let degrees = self.out_weights();
        let one_minus = F::one() - c;
        let mut edges: Vec<(u32, u32, F)> = Vec::with_capacity(self.edges.len() + self.vertex_count);
        let mut loop_weight: Vec<F> = degrees.iter().map(|&d| c * d).collect();
        for &(u, v, w) in &self.edges {
            if u == v {
                loop_weight[u as usize] += one_minus * w;
            } else {
                edges.push((u, v, one_minus * w));
            }
        }
        for (u, &w) in loop_weight.iter().enumerate() {
            if w > F::zero() {
                edges.push((u as u32, u as u32, w));
            }
        }
        Self::undirected(self.vertex_count, edges)
    }

    /// Sorted unit-weight edge list, one entry per unordered pair.
    fn simple_edge_list(&self) -> Result<Vec<(u32, u32)>> {
        if self.directed {
            return Err(Error::UnsupportedInput("directed input".into()));
        }
        let mut out = Vec::with_capacity(self.edges.len());
        for &(u, v, w) in &self.edges {
            if u == v {
                return Err(Error::UnsupportedInput("self-loop in simple graph".into()));
            }
            if w != F::one() {
                return Err(Error::UnsupportedInput("weighted input".into()));
            }
            out.push((u.min(v), u.max(v)));
        }
        out.sort_unstable();
        if out.windows(2).any(|p| p[0] == p[1]) {
            return Err(Error::UnsupportedInput("multi-edge in simple graph".into()));
        }
        Ok(out)
    }

    /// Line graph: one vertex per edge, adjacent iff the edges share an
    /// endpoint. Input must be simple, undirected, unit-weight.
    pub fn line_graph(&self) -> Result<Self> {
        let edges = self.simple_edge_list()?;
        let mut out = Vec::new();
        for i in 0..edges.len() {
            for j in (i + 1)..edges.len() {
                let (a, b) = edges[i];
                let (c, d) = edges[j];
                if a == c || a == d || b == c || b == d {
                    out.push((i as u32, j as u32));
                }
            }
        }
        Self::simple(edges.len(), &out)
    }

    /// Uniform degree if the graph is regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let w = self.weight_matrix();
        let mut deg = None;
        for u in 0..self.vertex_count {
            let d = w.row(u).iter().filter(|&&x| x > F::zero()).count();
            match deg {
                None => deg = Some(d),
                Some(existing) if existing != d => return None,
                _ => {}
            }
        }
        deg
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count == 0 {
            return true;
        }
        let w = self.weight_matrix();
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for v in 0..self.vertex_count {
                if !seen[v] && (w[(u, v)] > F::zero() || w[(v, u)] > F::zero()) {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|x| x)
    }

    pub fn has_triangle(&self) -> Option<[u32; 3]> {
        let w = self.weight_matrix();
        let n = self.vertex_count;
        for a in 0..n {
            for b in (a + 1)..n {
                if w[(a, b)] == F::zero() {
                    continue;
                }
                for c in (b + 1)..n {
                    if w[(a, c)] > F::zero() && w[(b, c)] > F::zero() {
                        return Some([a as u32, b as u32, c as u32]);
                    }
                }
            }
        }
        None
    }

    /// Length of a shortest cycle, ignoring weights; `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        let w = self.weight_matrix();
        let n = self.vertex_count;
        let neighbors: Vec<Vec<usize>> = (0..n)
            .map(|u| (0..n).filter(|&v| v != u && w[(u, v)] > F::zero()).collect())
            .collect();
        if (0..n).any(|u| w[(u, u)] > F::zero()) {
            return Some(1);
        }
        let mut best: Option<usize> = None;
        for start in 0..n {
            // BFS recording parents; a non-tree edge closes a cycle.
            let mut dist = vec![usize::MAX; n];
            let mut parent = vec![usize::MAX; n];
            dist[start] = 0;
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(u) = queue.pop_front() {
                for &v in &neighbors[u] {
                    if dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        parent[v] = u;
                        queue.push_back(v);
                    } else if parent[u] != v {
                        let cycle = dist[u] + dist[v] + 1;
                        if best.is_none_or(|b| cycle < b) {
                            best = Some(cycle);
                        }
                    }
                }
            }
        }
        best
    }
}

/// Symmetrized eigenvalues of a reversible transition matrix:
/// `D^{1/2} P D^{-1/2}` is symmetric when `pi` satisfies detailed balance.
pub fn reversible_eigenvalues<F: Real>(p: &Matrix<F>, pi: &[F]) -> Vec<F> {
    let n = p.nrows();
    let sqrt_pi: Vec<F> = pi.iter().map(|&x| x.sqrt()).collect();
    let mut sym = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let denom = sqrt_pi[j];
            let v = if denom > F::zero() {
                sqrt_pi[i] * p[(i, j)] / denom
            } else {
                F::zero()
            };
            sym[(i, j)] = v;
        }
    }
    // Average away the last floating-point crumbs of asymmetry.
    for i in 0..n {
        for j in 0..i {
            let avg = (sym[(i, j)] + sym[(j, i)]) * F::from_f64_exact(0.5);
            sym[(i, j)] = avg;
            sym[(j, i)] = avg;
        }
    }
    symmetric_eigen(&sym, false).eigenvalues
}

/// Max over pairs of `|pi_x P(x,y) - pi_y P(y,x)|`.
pub fn detailed_balance_residual<F: Real>(p: &Matrix<F>, pi: &[F]) -> F {
    let n = p.nrows();
    let mut worst = F::zero();
    for x in 0..n {
        for y in (x + 1)..n {
            let r = (pi[x] * p[(x, y)] - pi[y] * p[(y, x)]).abs();
            worst = worst.max(r);
        }
    }
    worst
}

/// Verifies that the normalized line-graph spectrum of a `d`-regular graph
/// is the image of the base spectrum under `x -> (x d + d - 2) / (2d - 2)`,
/// together with `-2/(2d-2)` at multiplicity `m - n`. Returns the largest
/// eigenvalue deviation after sorting.
pub fn check_sachs_relation<F: Real>(g: &WeightedGraph<F>) -> Result<F> {
    let Some(d) = g.regular_degree() else {
        return Err(Error::UnsupportedInput("Sachs relation needs a regular graph".into()));
    };
    if d < 2 {
        return Err(Error::UnsupportedInput("Sachs relation needs degree >= 2".into()));
    }
    let lg = g.line_graph()?;
    let lg_spec = lg.spectrum()?.eigenvalues;

    let df = F::from_usize_exact(d);
    let two = F::from_f64_exact(2.0);
    let denom = two * df - two;
    let base = g.spectrum()?.eigenvalues;
    let mut predicted: Vec<F> = base.iter().map(|&x| (x * df + df - two) / denom).collect();
    let extra = lg.vertex_count() - g.vertex_count();
    predicted.extend(std::iter::repeat_n(-two / denom, extra));
    predicted.sort_by(|a, b| b.partial_cmp(a).unwrap());

    assert_eq!(predicted.len(), lg_spec.len());
    let dev = predicted
        .iter()
        .zip(&lg_spec)
        .map(|(&a, &b)| (a - b).abs())
        .fold(F::zero(), F::max);
    Ok(dev)
}

/// Samples a simple, connected, triangle-free `t`-regular graph on `n`
/// vertices by configuration-model rejection. Deterministic per seed.
pub fn random_regular_triangle_free<F: Real>(
    n: usize,
    t: usize,
    seed: u64,
) -> Result<WeightedGraph<F>> {
    random_regular_triangle_free_budget(n, t, seed, 10_000)
}

pub fn random_regular_triangle_free_budget<F: Real>(
    n: usize,
    t: usize,
    seed: u64,
    budget: usize,
) -> Result<WeightedGraph<F>> {
    if !(n * t).is_multiple_of(2) {
        return Err(Error::Range(format!("n*t = {} must be even", n * t)));
    }
    if t < 2 {
        return Err(Error::Range("degree must be at least 2".into()));
    }
    if n <= t {
        return Err(Error::Range(format!("need n > t, got n={n}, t={t}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<u32> = (0..n as u32).flat_map(|v| std::iter::repeat_n(v, t)).collect();

    for attempt in 1..=budget {
        stubs.shuffle(&mut rng);
        if let Some(g) = pair_stubs::<F>(n, &stubs) {
            if g.has_triangle().is_none() && g.is_connected() {
                return Ok(g);
            }
        }
        if attempt == budget {
            break;
        }
    }
    Err(Error::GenerationFailure { attempts: budget })
}

/// One configuration-model draw; `None` if it produced a loop or multi-edge.
fn pair_stubs<F: Real>(n: usize, stubs: &[u32]) -> Option<WeightedGraph<F>> {
    let mut seen = std::collections::HashSet::new();
    let mut edges = Vec::with_capacity(stubs.len() / 2);
    for pair in stubs.chunks(2) {
        let (u, v) = (pair[0], pair[1]);
        if u == v {
            return None;
        }
        if !seen.insert((u.min(v), u.max(v))) {
            return None;
        }
        edges.push((u, v));
    }
    Some(WeightedGraph::simple(n, &edges).unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;

    type G = WeightedGraph<f64>;

    const COS_2PI_5: f64 = 0.30901699437494745;
    const COS_4PI_5: f64 = -0.8090169943749475;

    fn assert_spectrum(got: &[f64], want: &[f64], tol: f64) {
        assert_eq!(got.len(), want.len(), "{got:?} vs {want:?}");
        let mut w = want.to_vec();
        w.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (g, w) in got.iter().zip(w) {
            assert!((g - w).abs() < tol, "{got:?} vs {want:?}");
        }
    }

    #[test]
    fn normalized_adjacency_examples() {
        let k2 = G::simple(2, &[(0, 1)]).unwrap();
        let p = k2.normalized_adjacency().unwrap();
        assert_eq!(p[(0, 1)], 1.0);
        assert_eq!(p[(1, 0)], 1.0);
        assert_eq!(p[(0, 0)], 0.0);

        let c5 = G::cycle(5);
        let p = c5.normalized_adjacency().unwrap();
        for u in 0..5 {
            let half_entries = (0..5).filter(|&v| p[(u, v)] == 0.5).count();
            assert_eq!(half_entries, 2);
        }

        // Self-loop-only vertex normalizes to a unit self-transition.
        let loops = G::undirected(2, vec![(0, 0, 3.0), (1, 1, 1.0)]).unwrap();
        let p = loops.normalized_adjacency().unwrap();
        assert_eq!(p[(0, 0)], 1.0);

        let isolated = G::simple(2, &[]).unwrap();
        assert!(matches!(isolated.normalized_adjacency(), Err(Error::IsolatedVertex(0))));
    }

    #[test]
    fn rows_are_stochastic() {
        let g = G::undirected(4, vec![(0, 1, 0.3), (1, 2, 1.7), (2, 3, 2.0), (3, 0, 0.1), (1, 1, 0.5)])
            .unwrap();
        let p = g.normalized_adjacency().unwrap();
        for i in 0..4 {
            let s: f64 = p.row(i).iter().sum();
            assert!((s - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn spectra_of_small_graphs() {
        let k2 = G::simple(2, &[(0, 1)]).unwrap();
        let s = k2.spectrum().unwrap();
        assert_spectrum(&s.eigenvalues, &[1.0, -1.0], 1e-12);
        assert!(s.two_sided_gap.abs() < 1e-12);

        let c5 = G::cycle(5);
        let s = c5.spectrum().unwrap();
        assert_spectrum(
            &s.eigenvalues,
            &[1.0, COS_2PI_5, COS_2PI_5, COS_4PI_5, COS_4PI_5],
            1e-12,
        );
        assert!((s.two_sided_gap - (1.0 + COS_4PI_5)).abs() < 1e-12);

        for m in 3..=8 {
            let s = G::clique(m).spectrum().unwrap();
            let mut want = vec![1.0];
            want.extend(std::iter::repeat_n(-1.0 / (m as f64 - 1.0), m - 1));
            assert_spectrum(&s.eigenvalues, &want, 1e-12);
        }
    }

    #[test]
    fn non_reversible_graph_is_rejected_in_symmetric_mode() {
        let cycle3 = G::new(3, true, vec![(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)]).unwrap();
        assert!(matches!(cycle3.spectrum(), Err(Error::NotReversible { .. })));
        // Complex spectrum is also rejected in general mode.
        assert!(matches!(
            cycle3.spectrum_with(SpectrumMode::General),
            Err(Error::ComplexSpectrum { .. })
        ));
        // A directed chain with a real spectrum passes in general mode.
        let absorbing = G::new(2, true, vec![(0, 0, 1.0), (1, 0, 0.3), (1, 1, 0.7)]).unwrap();
        let s = absorbing.spectrum_with(SpectrumMode::General).unwrap();
        assert_spectrum(&s.eigenvalues, &[1.0, 0.7], 1e-10);
    }

    #[test]
    fn tensor_product_spectra_multiply() {
        let k2 = G::simple(2, &[(0, 1)]).unwrap();
        let s = k2.tensor_product(&k2).unwrap().spectrum().unwrap();
        assert_spectrum(&s.eigenvalues, &[1.0, 1.0, -1.0, -1.0], 1e-12);

        let c5 = G::cycle(5);
        let prod = c5.tensor_product(&k2).unwrap();
        let s = prod.spectrum().unwrap();
        let mut want = Vec::new();
        for a in [1.0, COS_2PI_5, COS_2PI_5, COS_4PI_5, COS_4PI_5] {
            for b in [1.0, -1.0] {
                want.push(a * b);
            }
        }
        assert_spectrum(&s.eigenvalues, &want, 1e-12);
        assert!(s.two_sided_gap.abs() < 1e-12);

        // A single looped vertex is the identity for the tensor product.
        let point = G::undirected(1, vec![(0, 0, 2.0)]).unwrap();
        let same = c5.tensor_product(&point).unwrap().spectrum().unwrap();
        assert_spectrum(&same.eigenvalues, &c5.spectrum().unwrap().eigenvalues, 1e-12);
    }

    #[test]
    fn tensor_gap_is_min_rule() {
        let graphs = [G::simple(2, &[(0, 1)]).unwrap(), G::cycle(5), G::clique(4)];
        for g in &graphs {
            for h in &graphs {
                let prod = g.tensor_product(h).unwrap();
                let got = prod.spectrum().unwrap().two_sided_gap;
                let want = g
                    .spectrum()
                    .unwrap()
                    .two_sided_gap
                    .min(h.spectrum().unwrap().two_sided_gap);
                assert!((got - want).abs() < 1e-9);

                let mut want_spec = Vec::new();
                for &a in &g.spectrum().unwrap().eigenvalues {
                    for &b in &h.spectrum().unwrap().eigenvalues {
                        want_spec.push(a * b);
                    }
                }
                assert_spectrum(&prod.spectrum().unwrap().eigenvalues, &want_spec, 1e-9);
            }
        }
    }

    #[test]
    fn lazy_loops_scale_one_sided_gap() {
        let c5 = G::cycle(5);
        let base = c5.spectrum().unwrap().one_sided_gap;
        for c in [0.0, 0.25, 0.5, 0.9] {
            let lazy = c5.add_lazy_loops(c).unwrap();
            let got = lazy.spectrum().unwrap().one_sided_gap;
            assert!((got - (1.0 - c) * base).abs() < 1e-9, "c={c}");
        }
        let frozen = c5.add_lazy_loops(1.0).unwrap().spectrum().unwrap();
        assert_spectrum(&frozen.eigenvalues, &[1.0; 5], 1e-12);
        assert!(frozen.one_sided_gap.abs() < 1e-12);

        let half = c5.add_lazy_loops(0.5).unwrap().spectrum().unwrap();
        assert!((half.one_sided_gap - 0.5 * (1.0 - COS_2PI_5)).abs() < 1e-12);

        assert!(matches!(c5.add_lazy_loops(1.5), Err(Error::Range(_))));
    }

    #[test]
    fn line_graphs() {
        let c5 = G::cycle(5);
        let lg = c5.line_graph().unwrap();
        assert_eq!(lg.vertex_count(), 5);
        assert_spectrum(
            &lg.spectrum().unwrap().eigenvalues,
            &c5.spectrum().unwrap().eigenvalues,
            1e-12,
        );

        let k3 = G::clique(3);
        let lg = k3.line_graph().unwrap();
        assert_spectrum(
            &lg.spectrum().unwrap().eigenvalues,
            &k3.spectrum().unwrap().eigenvalues,
            1e-12,
        );

        let star = G::simple(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let lg = star.line_graph().unwrap();
        assert_eq!(lg.vertex_count(), 3);
        assert_spectrum(
            &lg.spectrum().unwrap().eigenvalues,
            &k3.spectrum().unwrap().eigenvalues,
            1e-12,
        );

        let weighted = G::undirected(2, vec![(0, 1, 2.0)]).unwrap();
        assert!(matches!(weighted.line_graph(), Err(Error::UnsupportedInput(_))));
    }

    fn petersen() -> G {
        let mut edges = Vec::new();
        for i in 0..5u32 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        G::simple(10, &edges).unwrap()
    }

    #[test]
    fn sachs_relation_on_regular_graphs() {
        for g in [G::cycle(5), G::clique(4), petersen()] {
            let dev = check_sachs_relation(&g).unwrap();
            assert!(dev < 1e-9, "deviation {dev}");
        }
        // Petersen line graph picks up -1/2 with multiplicity 5.
        let lg = petersen().line_graph().unwrap();
        let s = lg.spectrum().unwrap();
        let minus_half = s.eigenvalues.iter().filter(|&&x| (x + 0.5).abs() < 1e-9).count();
        assert_eq!(minus_half, 5);

        let path = G::simple(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(check_sachs_relation(&path).is_err());
    }

    #[test]
    fn random_regular_generation() {
        assert!(matches!(
            random_regular_triangle_free::<f64>(5, 3, 1),
            Err(Error::Range(_))
        ));

        // n=5, t=2 leaves only the 5-cycle.
        let g = random_regular_triangle_free::<f64>(5, 2, 3).unwrap();
        assert_eq!(g.girth(), Some(5));

        // n=6, t=2: disjoint triangle pairs are rejected, leaving the 6-cycle.
        let g = random_regular_triangle_free::<f64>(6, 2, 11).unwrap();
        assert_eq!(g.girth(), Some(6));

        for seed in 0..10 {
            let g = random_regular_triangle_free::<f64>(12, 3, seed).unwrap();
            assert_eq!(g.regular_degree(), Some(3));
            assert!(g.has_triangle().is_none());
            assert!(g.is_connected());
            assert!(g.girth().unwrap() >= 4);
            // Determinism per seed.
            let again = random_regular_triangle_free::<f64>(12, 3, seed).unwrap();
            assert_eq!(g.edges(), again.edges());
        }
    }

    #[test]
    fn works_in_single_precision() {
        let c5 = WeightedGraph::<f32>::cycle(5);
        let s = c5.spectrum().unwrap();
        assert!((s.two_sided_gap - 0.190_983).abs() < 1e-4);
        let lazy = c5.add_lazy_loops(0.5).unwrap();
        assert!((lazy.spectrum().unwrap().one_sided_gap - 0.5 * s.one_sided_gap).abs() < 1e-4);
    }

    #[test]
    fn girth_detects_loops_and_forests() {
        let looped = G::undirected(2, vec![(0, 0, 1.0), (0, 1, 1.0)]).unwrap();
        assert_eq!(looped.girth(), Some(1));
        let tree = G::simple(4, &[(0, 1), (1, 2), (1, 3)]).unwrap();
        assert_eq!(tree.girth(), None);
    }
}
