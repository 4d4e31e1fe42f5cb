//! High-order walk chains on weighted complexes and the nested
//! block decompositions of the densified construction's down-up walk.

pub mod tables;
pub mod verify;

use std::collections::HashMap;

use crate::densifier::{Color, DensifiedComplex, DensifiedFace};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::markov::MarkovChain;
use crate::scalar::Real;
use crate::simplicial::{Face, SimplicialComplex, BALANCE_TOL};

/// Down-up walk on the `k`-faces of a balanced complex: drop one of the
/// `k+1` vertices uniformly, then re-fill proportionally to face weight.
pub fn down_up_chain<F: Real>(c: &SimplicialComplex<F>, k: usize) -> Result<MarkovChain<F>> {
    if k == 0 || k > c.top_dim() {
        return Err(Error::Range(format!("down-up walk needs 1 <= k <= {}", c.top_dim())));
    }
    check_balance(c)?;
    let faces = c.faces(k);
    let n = faces.len();
    let inv_kp1 = F::one() / F::from_usize_exact(k + 1);
    let mut p = Matrix::zeros(n, n);
    for (i, face) in faces.iter().enumerate() {
        for skip in 0..face.len() {
            let mut sub = face.clone();
            sub.remove(skip);
            let w_sub = c.weight_of(&sub).expect("closure");
            for (cand, j) in cofaces(c, &sub, k) {
                let w_cand = c.weight_of(&cand).expect("stored");
                p[(i, j)] += inv_kp1 * w_cand / w_sub;
            }
        }
    }
    chain_with_weight_stationary(c, k, p)
}

/// Up-down walk on the `k`-faces: move up to a coface proportionally to its
/// weight, then drop one of its `k+2` vertices uniformly.
pub fn up_down_chain<F: Real>(c: &SimplicialComplex<F>, k: usize) -> Result<MarkovChain<F>> {
    if k >= c.top_dim() {
        return Err(Error::Range(format!("up-down walk needs k < {}", c.top_dim())));
    }
    check_balance(c)?;
    let faces = c.faces(k);
    let n = faces.len();
    let inv_kp2 = F::one() / F::from_usize_exact(k + 2);
    let index: HashMap<&Face, usize> = faces.iter().zip(0..).collect();
    let mut p = Matrix::zeros(n, n);
    for (i, face) in faces.iter().enumerate() {
        let w_face = c.weights(k)[i];
        for (coface, _) in cofaces(c, face, k + 1) {
            let up = c.weight_of(&coface).expect("stored") / w_face;
            for skip in 0..coface.len() {
                let mut target = coface.clone();
                target.remove(skip);
                let j = index[&target];
                p[(i, j)] += up * inv_kp2;
            }
        }
    }
    chain_with_weight_stationary(c, k, p)
}

fn check_balance<F: Real>(c: &SimplicialComplex<F>) -> Result<()> {
    let residual = c.balance_residual();
    if residual.to_f64() > BALANCE_TOL {
        return Err(Error::Unbalanced { residual: residual.to_f64() });
    }
    Ok(())
}

/// Both walks share the weight-proportional stationary distribution; handing
/// it to the chain constructor re-validates it against the matrix.
fn chain_with_weight_stationary<F: Real>(
    c: &SimplicialComplex<F>,
    k: usize,
    p: Matrix<F>,
) -> Result<MarkovChain<F>> {
    let total: F = c.weights(k).iter().copied().sum();
    let pi: Vec<F> = c.weights(k).iter().map(|&w| w / total).collect();
    let labels = c.faces(k).iter().map(|f| format!("{f:?}")).collect();
    MarkovChain::with_stationary(labels, p, pi)
}

/// All cofaces of `sub` at dimension `k` (as faces with `k+1` vertices),
/// with their state indices.
fn cofaces<F: Real>(
    c: &SimplicialComplex<F>,
    sub: &[u32],
    k: usize,
) -> Vec<(Face, usize)> {
    let mut out = Vec::new();
    for v in 0..c.vertex_count() as u32 {
        if sub.binary_search(&v).is_ok() {
            continue;
        }
        let mut cand: Face = sub.to_vec();
        let pos = cand.binary_search(&v).unwrap_err();
        cand.insert(pos, v);
        if let Some((dim, idx)) = c.index_of(&cand) {
            debug_assert_eq!(dim, k);
            out.push((cand, idx));
        }
    }
    out
}

/// The down-up walk on `k`-faces of a densified complex, with states in
/// labeled-face enumeration order.
#[derive(Clone, Debug)]
pub struct QDownUp<F> {
    pub chain: MarkovChain<F>,
    pub states: Vec<DensifiedFace>,
    pub k: usize,
}

/// Builds the `k`-face down-up chain of the densified complex for
/// `1 <= k < H`.
pub fn q_down_up<F: Real>(q: &DensifiedComplex<F>, k: usize) -> Result<QDownUp<F>> {
    let h = q.top_dim();
    if k == 0 || k >= h {
        return Err(Error::Range(format!("down-up level needs 1 <= k < H = {h}, got k = {k}")));
    }
    let states = q.enumerate_k_faces(k);
    let generic = down_up_chain(q.complex(), k)?;

    // Permute the generic chain into enumeration order.
    let stored: HashMap<&Face, usize> = q.complex().faces(k).iter().zip(0..).collect();
    let perm: Vec<usize> = states
        .iter()
        .map(|f| stored[&q.face_vertices(f)])
        .collect();
    let gp = generic.transition_matrix();
    let p = Matrix::from_fn(states.len(), states.len(), |i, j| gp[(perm[i], perm[j])]);
    let pi: Vec<F> = perm.iter().map(|&i| generic.stationary()[i]).collect();
    let labels = states.iter().map(state_label).collect();
    let chain = MarkovChain::with_stationary(labels, p, pi)?;
    Ok(QDownUp { chain, states, k })
}

fn state_label(f: &DensifiedFace) -> String {
    let pairs: Vec<String> = f
        .base_face
        .iter()
        .zip(&f.labels)
        .map(|(b, g)| format!("{b}@{g}"))
        .collect();
    pairs.join(",")
}

/// A state of the split chain: a labeled face together with an assigned
/// base-graph edge. Constant-labeled faces occur once per incident edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitState {
    pub face: DensifiedFace,
    pub edge: usize,
}

/// The split down-up chain, states grouped block-major by assigned edge; in
/// each block faces are ordered by base face and label mask so that all
/// blocks share one canonical layout.
#[derive(Clone, Debug)]
pub struct SplitChain<F> {
    pub chain: MarkovChain<F>,
    pub states: Vec<SplitState>,
    pub k: usize,
    /// Contiguous state ranges, one per base-graph edge.
    pub blocks: Vec<Vec<usize>>,
}

impl<F: Real> SplitChain<F> {
    pub fn block_size(&self) -> usize {
        self.blocks[0].len()
    }
}

/// Index of a face within one block: base-face position then label mask.
fn in_block_index<F: Real>(
    q: &DensifiedComplex<F>,
    k: usize,
    edge: (u32, u32),
    face: &DensifiedFace,
) -> usize {
    let (dim, face_pos) = q
        .base()
        .index_of(&face.base_face)
        .expect("base face stored");
    debug_assert_eq!(dim, k);
    let mask: usize = face
        .labels
        .iter()
        .enumerate()
        .map(|(i, &l)| {
            debug_assert!(l == edge.0 || l == edge.1);
            usize::from(l == edge.1) << i
        })
        .sum();
    face_pos << (k + 1) | mask
}

/// Builds the split chain from the down-up chain by replicating each
/// constant-labeled state across its `T` incident edges and dividing inbound
/// probabilities by `T`.
pub fn split_chain<F: Real>(q: &DensifiedComplex<F>, qw: &QDownUp<F>) -> Result<SplitChain<F>> {
    let k = qw.k;
    let t = q.degree();
    let t_f = F::from_usize_exact(t);
    let per_block = q.base().faces(k).len() << (k + 1);
    let m = q.graph_edges().len();
    let n_split = per_block * m;

    // Lay out states block-major.
    let mut states: Vec<SplitState> = Vec::with_capacity(n_split);
    for (e, &(u, v)) in q.graph_edges().iter().enumerate() {
        for base in q.base().faces(k) {
            for mask in 0..(1usize << (k + 1)) {
                let labels: Vec<u32> = (0..=k)
                    .map(|i| if mask >> i & 1 == 1 { v } else { u })
                    .collect();
                let mut face = DensifiedFace {
                    base_face: base.clone(),
                    labels,
                    color: Color::Vertex(u),
                    offset: 0,
                };
                // Recompute color/offset from the labels.
                face = q.annotate(&q.face_vertices(&face));
                states.push(SplitState { face, edge: e });
            }
        }
    }

    let split_index = |face: &DensifiedFace, edge: usize| -> usize {
        edge * per_block + in_block_index(q, k, q.graph_edges()[edge], face)
    };

    // Q-state lookup by vertex tuple.
    let qindex: HashMap<Face, usize> = qw
        .states
        .iter()
        .enumerate()
        .map(|(i, f)| (q.face_vertices(f), i))
        .collect();

    let pq = qw.chain.transition_matrix();
    let mut p = Matrix::zeros(n_split, n_split);
    for (x, st) in states.iter().enumerate() {
        let qi = qindex[&q.face_vertices(&st.face)];
        for (qj, target) in qw.states.iter().enumerate() {
            let prob = pq[(qi, qj)];
            if prob == F::zero() {
                continue;
            }
            match target.color {
                Color::Vertex(w) => {
                    let shared = prob / t_f;
                    for &wn in q.neighbors(w) {
                        let e = q.edge_index(w, wn).expect("edge exists");
                        let mut tgt = target.clone();
                        tgt.labels = vec![w; k + 1];
                        p[(x, split_index(&tgt, e))] += shared;
                    }
                }
                Color::Edge(a, b) => {
                    let e = q.edge_index(a, b).expect("edge exists");
                    p[(x, split_index(target, e))] += prob;
                }
            }
        }
    }

    let labels = states
        .iter()
        .map(|s| {
            let (u, v) = q.graph_edges()[s.edge];
            format!("{}|e{}-{}", state_label(&s.face), u, v)
        })
        .collect();
    // Stationary solved from scratch here; closed forms are checked against
    // it downstream.
    let chain = MarkovChain::new(labels, p)?;
    let blocks = (0..m)
        .map(|e| (e * per_block..(e + 1) * per_block).collect())
        .collect();
    Ok(SplitChain { chain, states, k, blocks })
}

/// Closed-form stationary weight of a split state, from the reduced level
/// weights: constant-labeled states carry `w_J`, the rest `T w_I`, scaled by
/// `1/(|E| C(s, k+1) 2 ((2^k - 1) T w_I + w_J))`.
pub fn split_stationary_closed_form<F: Real>(
    q: &DensifiedComplex<F>,
    k: usize,
    face: &DensifiedFace,
) -> F {
    let rw = q.reduced_weights(k);
    let t = F::from_usize_exact(q.degree());
    let m = F::from_usize_exact(q.graph_edges().len());
    let faces = F::from_usize_exact(q.base().faces(k).len());
    let two = F::from_f64_exact(2.0);
    let pow = F::from_f64_exact((1u64 << k) as f64);
    let denom = (pow - F::one()) * t * rw.w_i + rw.w_j;
    let numer = if face.offset == 0 { rw.w_j } else { t * rw.w_i };
    numer / (m * faces * two * denom)
}

/// Closed-form stationary of an outer restriction chain state (same shape,
/// without the edge-count factor).
pub fn restriction_stationary_closed_form<F: Real>(
    q: &DensifiedComplex<F>,
    k: usize,
    face: &DensifiedFace,
) -> F {
    split_stationary_closed_form(q, k, face) * F::from_usize_exact(q.graph_edges().len())
}

/// Expected outer projection matrix: a lazy walk on the line graph of the
/// base graph with closed-form coefficients.
pub fn expected_outer_projection<F: Real>(q: &DensifiedComplex<F>, k: usize) -> Matrix<F> {
    let m = q.graph_edges().len();
    let t = F::from_usize_exact(q.degree());
    let rw = q.reduced_weights(k);
    let pow = F::from_f64_exact((1u64 << k) as f64);
    let kappa = (t * rw.w_i + rw.w_j) / ((pow - F::one()) * t * rw.w_i + rw.w_j);
    let two = F::from_f64_exact(2.0);
    let off = kappa / (two * t);
    let diag = F::one() - (t - F::one()) / t * kappa;
    let mut p = Matrix::zeros(m, m);
    for i in 0..m {
        p[(i, i)] = diag;
        for j in 0..m {
            if i != j && edges_adjacent(q.graph_edges()[i], q.graph_edges()[j]) {
                p[(i, j)] = off;
            }
        }
    }
    p
}

fn edges_adjacent(a: (u32, u32), b: (u32, u32)) -> bool {
    a.0 == b.0 || a.0 == b.1 || a.1 == b.0 || a.1 == b.1
}

/// Expected inner projection matrix on the base complex's `k`-faces.
pub fn expected_inner_projection<F: Real>(q: &DensifiedComplex<F>, k: usize) -> Matrix<F> {
    let faces = q.base().faces(k);
    let n = faces.len();
    let p_off = inner_projection_rate(q, k);
    let deg = F::from_usize_exact((k + 1) * (q.base_vertex_count() - (k + 1)));
    let mut p = Matrix::zeros(n, n);
    for i in 0..n {
        p[(i, i)] = F::one() - deg * p_off;
        for j in 0..n {
            if i != j && shares_all_but_one(&faces[i], &faces[j]) {
                p[(i, j)] = p_off;
            }
        }
    }
    p
}

/// Per-neighbor transition rate of the inner projection chain.
pub fn inner_projection_rate<F: Real>(q: &DensifiedComplex<F>, k: usize) -> F {
    let t = F::from_usize_exact(q.degree());
    let s = F::from_usize_exact(q.base_vertex_count());
    let kf = F::from_usize_exact(k + 1);
    let rw = q.reduced_weights(k);
    let pow = F::from_f64_exact((1u64 << k) as f64);
    let two = F::from_f64_exact(2.0);
    let numer = ((pow - two) * t + F::one()) * t * rw.w_i + rw.w_j;
    let denom = (pow - F::one()) * t * rw.w_i + rw.w_j;
    numer / (t * kf * (s - F::from_usize_exact(k)) * denom)
}

fn shares_all_but_one(a: &[u32], b: &[u32]) -> bool {
    let mut common = 0;
    let mut it = b.iter().peekable();
    for &x in a {
        while let Some(&&y) = it.peek() {
            if y < x {
                it.next();
            } else {
                break;
            }
        }
        if it.peek() == Some(&&x) {
            common += 1;
            it.next();
        }
    }
    common + 1 == a.len()
}

/// Uniform one-flip walk on the `dim`-dimensional hypercube (no laziness).
pub fn hypercube_nonlazy_chain<F: Real>(dim: usize) -> MarkovChain<F> {
    let n = 1usize << dim;
    let rate = F::one() / F::from_usize_exact(dim);
    let p = Matrix::from_fn(n, n, |i, j| {
        if (i ^ j).count_ones() == 1 {
            rate
        } else {
            F::zero()
        }
    });
    let labels = (0..n).map(|i| format!("{i:0dim$b}")).collect();
    MarkovChain::new(labels, p).expect("hypercube walk is well-formed")
}

/// The uniform-laziness companion of the inner restriction chain: every
/// vertex keeps the same self-loop `1 - w_I/(D(s-k))` and moves along each
/// hypercube direction at rate `w_I/(D(k+1)(s-k))`.
pub fn uniform_inner_chain<F: Real>(q: &DensifiedComplex<F>, k: usize) -> MarkovChain<F> {
    let dim = k + 1;
    let n = 1usize << dim;
    let rw = q.reduced_weights(k);
    let s = F::from_usize_exact(q.base_vertex_count());
    let kf = F::from_usize_exact(k);
    let rate = rw.w_i / (rw.d * F::from_usize_exact(k + 1) * (s - kf));
    let stay = F::one() - rw.w_i / (rw.d * (s - kf));
    let p = Matrix::from_fn(n, n, |i, j| {
        if i == j {
            stay
        } else if (i ^ j).count_ones() == 1 {
            rate
        } else {
            F::zero()
        }
    });
    let labels = (0..n).map(|i| format!("{i:0dim$b}")).collect();
    MarkovChain::new(labels, p).expect("uniform inner chain is well-formed")
}

/// Closed-form stationary of the inner restriction chain on mask-ordered
/// hypercube states: the two constant corners carry `w_J / D~`, the rest
/// `T w_I / D~` with `D~ = 2 w_J + T w_I (2^(k+1) - 2)`.
pub fn inner_restriction_stationary_closed_form<F: Real>(
    q: &DensifiedComplex<F>,
    k: usize,
    mask: usize,
) -> F {
    let rw = q.reduced_weights(k);
    let t = F::from_usize_exact(q.degree());
    let full = (1usize << (k + 1)) - 1;
    let pow = F::from_f64_exact(((1u64 << (k + 1)) - 2) as f64);
    let d_tilde = F::from_f64_exact(2.0) * rw.w_j + t * rw.w_i * pow;
    if mask == 0 || mask == full {
        rw.w_j / d_tilde
    } else {
        t * rw.w_i / d_tilde
    }
}

/// Star-shaped local chain: a center with self-loop `w_C/(w_C + T w_S)` and
/// `T` satellites that sit still or return to the center with probability
/// one half each.
pub fn star_chain<F: Real>(degree: usize, w_s: F, w_c: F) -> MarkovChain<F> {
    let t = degree;
    let n = t + 1;
    let denom = w_c + F::from_usize_exact(t) * w_s;
    let half = F::from_f64_exact(0.5);
    let p = Matrix::from_fn(n, n, |i, j| {
        if i == 0 {
            if j == 0 {
                w_c / denom
            } else {
                w_s / denom
            }
        } else if j == 0 || j == i {
            half
        } else {
            F::zero()
        }
    });
    let labels = (0..n)
        .map(|i| if i == 0 { "center".into() } else { format!("sat{i}") })
        .collect();
    MarkovChain::new(labels, p).expect("star chain is well-formed")
}

/// True when every value of `small` can be matched to a distinct value of
/// `big` within `tol` (both read as multisets).
pub fn multiset_contained<F: Real>(small: &[F], big: &[F], tol: F) -> bool {
    let mut small = small.to_vec();
    let mut big = big.to_vec();
    small.sort_by(|a, b| b.partial_cmp(a).unwrap());
    big.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut j = 0usize;
    'outer: for &x in &small {
        while j < big.len() {
            if (big[j] - x).abs() <= tol {
                j += 1;
                continue 'outer;
            }
            if big[j] > x {
                j += 1;
            } else {
                return false;
            }
        }
        return false;
    }
    true
}

/// Multiset equality within `tol`.
pub fn multiset_equal<F: Real>(a: &[F], b: &[F], tol: F) -> bool {
    a.len() == b.len() && multiset_contained(a, b, tol)
}
