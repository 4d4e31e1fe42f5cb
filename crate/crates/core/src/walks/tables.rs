//! Closed-form transition probabilities of the densified down-up walk and
//! its split variant, straight from the reduced level weights, plus the
//! conformance machinery that checks every constructed matrix entry and
//! per-class neighbor count against those closed forms.
//!
//! The transition rate between adjacent labeled faces depends only on how
//! the deleted vertex relates to the rest of the labeling: if the remainder
//! is constantly labeled, re-fills follow the `w_J`/`w_I` weight classes;
//! otherwise both in-edge labels are symmetric and the rate is 1/2. At small
//! `k` some nominal classes coincide (for `k = 1` both positions of a mixed
//! pair leave a constant remainder when deleted), so class counts fold
//! together; the engine derives the folded classes directly.

use std::collections::BTreeMap;

use crate::densifier::{Color, DensifiedComplex, DensifiedFace};
use crate::scalar::Real;

use super::{QDownUp, SplitChain, SplitState};

/// Outcome of a table-conformance sweep.
#[derive(Clone, Debug)]
pub struct TableConformance {
    /// Largest `|constructed - closed form|` over all matrix entries.
    pub max_deviation: f64,
    /// Off-diagonal transition classes whose neighbor counts disagree.
    pub count_mismatches: Vec<String>,
    /// Positive transitions the closed form says should not exist.
    pub unclassified: usize,
    pub entries_checked: usize,
}

impl TableConformance {
    pub fn pass(&self, tol: f64) -> bool {
        self.max_deviation <= tol && self.count_mismatches.is_empty() && self.unclassified == 0
    }
}

/// One-step move rate class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Rate {
    /// Constant remainder, re-fill with the same label (`w_J / D`).
    Constant,
    /// Constant remainder, re-fill with a neighbor label (`w_I / D`).
    Mixed,
    /// Two-label remainder (`1/2`).
    Half,
}

/// Key of a transition class: delete kind, target offset class, same base
/// face, and color agreement (`None` when either side is vertex-colored; for
/// split states, assigned-edge agreement).
type BucketKey = (bool, usize, bool, Option<bool>);

struct RateCard<F> {
    unit: F,
    wj: F,
    wi: F,
    half: F,
}

impl<F: Real> RateCard<F> {
    fn new(q: &DensifiedComplex<F>, k: usize) -> Self {
        let rw = q.reduced_weights(k);
        let s = q.base_vertex_count();
        let unit = F::one()
            / (F::from_usize_exact(k + 1) * F::from_usize_exact(s - k));
        Self { unit, wj: rw.w_j / rw.d, wi: rw.w_i / rw.d, half: F::from_f64_exact(0.5) }
    }

    fn value(&self, rate: Rate) -> F {
        self.unit
            * match rate {
                Rate::Constant => self.wj,
                Rate::Mixed => self.wi,
                Rate::Half => self.half,
            }
    }
}

fn offset_of_labels(labels: &[u32]) -> usize {
    let first = labels[0];
    let a = labels.iter().filter(|&&l| l == first).count();
    let b = labels.len() - a;
    a.min(b)
}

/// The deleted position and re-fill implied by an adjacent pair, or `None`
/// when the faces are not one move apart.
fn move_between(x: &DensifiedFace, y: &DensifiedFace) -> Option<(usize, u32, u32)> {
    let k1 = x.base_face.len();
    if y.base_face.len() != k1 {
        return None;
    }
    if x.base_face == y.base_face {
        let mut diff = None;
        for i in 0..k1 {
            if x.labels[i] != y.labels[i] {
                if diff.is_some() {
                    return None;
                }
                diff = Some(i);
            }
        }
        let p = diff?;
        Some((p, y.base_face[p], y.labels[p]))
    } else {
        // Shared vertices must agree on labels; exactly one differs.
        let mut xi = 0;
        let mut yi = 0;
        let mut removed = None;
        let mut added = None;
        while xi < k1 && yi < k1 {
            match x.base_face[xi].cmp(&y.base_face[yi]) {
                std::cmp::Ordering::Equal => {
                    if x.labels[xi] != y.labels[yi] {
                        return None;
                    }
                    xi += 1;
                    yi += 1;
                }
                std::cmp::Ordering::Less => {
                    if removed.replace(xi).is_some() {
                        return None;
                    }
                    xi += 1;
                }
                std::cmp::Ordering::Greater => {
                    if added.replace(yi).is_some() {
                        return None;
                    }
                    yi += 1;
                }
            }
        }
        if xi < k1
            && (removed.replace(xi).is_some() || xi + 1 < k1) {
                return None;
            }
        if yi < k1
            && (added.replace(yi).is_some() || yi + 1 < k1) {
                return None;
            }
        let p = removed?;
        let a = added?;
        Some((p, y.base_face[a], y.labels[a]))
    }
}

/// Rate class of a move given the remainder after deleting position `p`.
fn rate_of_move(x: &DensifiedFace, p: usize, new_label: u32) -> Option<Rate> {
    let remainder: Vec<u32> = x
        .labels
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != p)
        .map(|(_, &l)| l)
        .collect();
    let mut distinct = remainder.clone();
    distinct.sort_unstable();
    distinct.dedup();
    match distinct.as_slice() {
        [u] => Some(if new_label == *u { Rate::Constant } else { Rate::Mixed }),
        [u, v] => (new_label == *u || new_label == *v).then_some(Rate::Half),
        _ => None,
    }
}

/// Closed-form transition probability of the down-up walk between two
/// labeled `k`-faces (diagonal included), computed from the reduced weights
/// alone.
pub fn expected_q_probability<F: Real>(
    q: &DensifiedComplex<F>,
    k: usize,
    x: &DensifiedFace,
    y: &DensifiedFace,
) -> F {
    let card = RateCard::new(q, k);
    if x == y {
        let mut total = F::zero();
        for p in 0..=k {
            if let Some(rate) = rate_of_move(x, p, x.labels[p]) {
                total += card.value(rate);
            }
        }
        return total;
    }
    match move_between(x, y) {
        Some((p, _vertex, label)) => match rate_of_move(x, p, label) {
            Some(rate) => card.value(rate),
            None => F::zero(),
        },
        None => F::zero(),
    }
}

/// Closed-form split-chain transition probability: transitions into
/// constant-labeled states are shared equally over their `T` copies.
pub fn expected_split_probability<F: Real>(
    q: &DensifiedComplex<F>,
    k: usize,
    x: &SplitState,
    y: &SplitState,
) -> F {
    let base = expected_q_probability(q, k, &x.face, &y.face);
    if base == F::zero() {
        return F::zero();
    }
    match y.face.color {
        Color::Vertex(w) => {
            let (a, b) = q.graph_edges()[y.edge];
            if a == w || b == w {
                base / F::from_usize_exact(q.degree())
            } else {
                F::zero()
            }
        }
        Color::Edge(a, b) => {
            if q.edge_index(a, b) == Some(y.edge) {
                base
            } else {
                F::zero()
            }
        }
    }
}

/// Closed-form self-loop of an outer restriction chain state: the walk's own
/// hold probability plus all mass that would leave the assigned edge.
pub fn expected_restriction_diagonal<F: Real>(
    q: &DensifiedComplex<F>,
    k: usize,
    face: &DensifiedFace,
) -> F {
    let card = RateCard::new(q, k);
    let t = F::from_usize_exact(q.degree());
    let s = q.base_vertex_count();
    let kp1 = F::from_usize_exact(k + 1);
    let smk = F::from_usize_exact(s - k);
    if face.offset == 0 {
        // Escape (T-1)/T plus the split self-transition w_J/(D T (s-k)).
        let escape = (t - F::one()) / t;
        return escape + card.wj * card.unit * kp1 / t;
    }
    // Count deletions that leave a constant remainder.
    let lonely = (0..=k)
        .filter(|&p| {
            let mut rem: Vec<u32> = face
                .labels
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != p)
                .map(|(_, &l)| l)
                .collect();
            rem.sort_unstable();
            rem.dedup();
            rem.len() == 1
        })
        .count();
    let l = F::from_usize_exact(lonely);
    let rest = F::from_usize_exact(k + 1 - lonely);
    l * (t - F::one()) / (t * kp1) + l * card.wi * card.unit
        + rest / (F::from_f64_exact(2.0) * kp1 * smk)
}

/// Symbolic enumeration of the moves available from one labeled face:
/// targets grouped by class with their multiplicities and rates. These come
/// straight from the closed-form structure, never from the matrix.
struct ExpectedRow<F> {
    diagonal: F,
    buckets: BTreeMap<BucketKey, (usize, F)>,
}

fn expected_row<F: Real>(
    q: &DensifiedComplex<F>,
    k: usize,
    x: &DensifiedFace,
    split_edge: Option<usize>,
) -> ExpectedRow<F> {
    let card = RateCard::new(q, k);
    let s = q.base_vertex_count();
    let t = q.degree();
    let new_faces = s - (k + 1);
    let mut diagonal = F::zero();
    let mut buckets: BTreeMap<BucketKey, (usize, F)> = BTreeMap::new();

    let mut add = |key: BucketKey, count: usize, prob: F| {
        let entry = buckets.entry(key).or_insert((0, prob));
        entry.0 += count;
        debug_assert!((entry.1 - prob).abs() <= F::from_f64_exact(1e-15));
    };

    for p in 0..=k {
        let remainder: Vec<u32> = x
            .labels
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != p)
            .map(|(_, &l)| l)
            .collect();
        let mut distinct = remainder.clone();
        distinct.sort_unstable();
        distinct.dedup();
        let (lonely, refill_labels): (bool, Vec<u32>) = match distinct.as_slice() {
            [u] => {
                let mut labels = vec![*u];
                labels.extend_from_slice(q.neighbors(*u));
                (true, labels)
            }
            [u, v] => (false, vec![*u, *v]),
            _ => unreachable!("faces are supported on at most one edge"),
        };
        for &w in &refill_labels {
            let rate = rate_of_move(x, p, w).expect("refill is legal");
            let prob = card.value(rate);
            // Re-fill the same base vertex (same face) or one of the
            // `s - k - 1` outside vertices (different face).
            for (same_face, mult) in [(true, 1usize), (false, new_faces)] {
                if mult == 0 {
                    continue;
                }
                if same_face && w == x.labels[p] {
                    diagonal += prob;
                    continue;
                }
                let mut target_labels = remainder.clone();
                target_labels.push(w);
                let dst_offset = offset_of_labels(&target_labels);
                let mut dst_distinct = target_labels.clone();
                dst_distinct.sort_unstable();
                dst_distinct.dedup();
                match (split_edge, dst_distinct.as_slice()) {
                    (None, [dst]) => {
                        let same_color = match x.color {
                            Color::Vertex(u) => (u == *dst).then_some(true),
                            Color::Edge(_, _) => None,
                        };
                        add((lonely, dst_offset, same_face, same_color), mult, prob);
                    }
                    (None, [a, b]) => {
                        let same_color = match x.color {
                            Color::Vertex(_) => None,
                            Color::Edge(u, v) => Some(u == *a && v == *b),
                        };
                        add((lonely, dst_offset, same_face, same_color), mult, prob);
                    }
                    (Some(ex), [dst]) => {
                        // Constant target: T copies, exactly one on the
                        // same assigned edge.
                        let shared = prob / F::from_usize_exact(t);
                        debug_assert!({
                            let (a, b) = q.graph_edges()[ex];
                            *dst == a || *dst == b
                        });
                        add((lonely, dst_offset, same_face, Some(true)), mult, shared);
                        add(
                            (lonely, dst_offset, same_face, Some(false)),
                            mult * (t - 1),
                            shared,
                        );
                    }
                    (Some(ex), [a, b]) => {
                        let e = q.edge_index(*a, *b).expect("supported on an edge");
                        add((lonely, dst_offset, same_face, Some(e == ex)), mult, prob);
                    }
                    _ => unreachable!(),
                }
            }
        }
    }
    ExpectedRow { diagonal, buckets }
}

/// Checks every entry of the down-up chain against the closed forms: the
/// diagonal against the summed hold rates, each positive off-diagonal
/// against its class rate, and each class population against the expected
/// neighbor count.
pub fn check_q_conformance<F: Real>(
    q: &DensifiedComplex<F>,
    qw: &QDownUp<F>,
) -> TableConformance {
    let k = qw.k;
    let p = qw.chain.transition_matrix();

    let mut max_dev = 0.0f64;
    let mut mismatches = Vec::new();
    let mut unclassified = 0usize;
    let mut checked = 0usize;

    for (i, x) in qw.states.iter().enumerate() {
        let expect = expected_row(q, k, x, None);
        max_dev = max_dev.max((p[(i, i)] - expect.diagonal).abs().to_f64());
        checked += 1;

        let mut actual: BTreeMap<BucketKey, usize> = BTreeMap::new();
        for (j, y) in qw.states.iter().enumerate() {
            if i == j || p[(i, j)] == F::zero() {
                continue;
            }
            checked += 1;
            let Some((pos, _, label)) = move_between(x, y) else {
                unclassified += 1;
                continue;
            };
            let lonely = matches!(
                rate_of_move(x, pos, label),
                Some(Rate::Constant | Rate::Mixed)
            );
            let same_face = x.base_face == y.base_face;
            let same_color = match (x.color, y.color) {
                (Color::Vertex(a), Color::Vertex(b)) => (a == b).then_some(true),
                (Color::Edge(a, b), Color::Edge(c, d)) => Some((a, b) == (c, d)),
                _ => None,
            };
            let key = (lonely, y.offset, same_face, same_color);
            match expect.buckets.get(&key) {
                None => unclassified += 1,
                Some(&(_, prob)) => {
                    max_dev = max_dev.max((p[(i, j)] - prob).abs().to_f64());
                    *actual.entry(key).or_insert(0) += 1;
                }
            }
        }
        for (key, &(count, _)) in &expect.buckets {
            let got = actual.get(key).copied().unwrap_or(0);
            if got != count {
                mismatches.push(format!(
                    "state {i} class {key:?}: expected {count} neighbors, found {got}"
                ));
            }
        }
    }
    TableConformance {
        max_deviation: max_dev,
        count_mismatches: mismatches,
        unclassified,
        entries_checked: checked,
    }
}

/// The same sweep for the split chain, including the `1/T` sharing rule and
/// assigned-edge bookkeeping.
pub fn check_split_conformance<F: Real>(
    q: &DensifiedComplex<F>,
    sc: &SplitChain<F>,
) -> TableConformance {
    let k = sc.k;
    let p = sc.chain.transition_matrix();
    let mut max_dev = 0.0f64;
    let mut mismatches = Vec::new();
    let mut unclassified = 0usize;
    let mut checked = 0usize;

    for (i, x) in sc.states.iter().enumerate() {
        let expect = expected_row(q, k, &x.face, Some(x.edge));
        // Diagonal: constant-labeled states share their hold rate over T
        // copies; one of those copies is the state itself.
        let expected_diag = if x.face.offset == 0 {
            expect.diagonal / F::from_usize_exact(q.degree())
        } else {
            expect.diagonal
        };
        max_dev = max_dev.max((p[(i, i)] - expected_diag).abs().to_f64());
        checked += 1;

        let mut actual: BTreeMap<BucketKey, usize> = BTreeMap::new();
        let mut siblings = 0usize;
        for (j, y) in sc.states.iter().enumerate() {
            if i == j || p[(i, j)] == F::zero() {
                continue;
            }
            checked += 1;
            // Sibling copies of the same face share the hold rate.
            if x.face == y.face {
                let prob = expected_q_probability(q, k, &x.face, &x.face)
                    / F::from_usize_exact(q.degree());
                max_dev = max_dev.max((p[(i, j)] - prob).abs().to_f64());
                siblings += 1;
                continue;
            }
            let Some((pos, _, label)) = move_between(&x.face, &y.face) else {
                unclassified += 1;
                continue;
            };
            let lonely = matches!(
                rate_of_move(&x.face, pos, label),
                Some(Rate::Constant | Rate::Mixed)
            );
            let same_face = x.face.base_face == y.face.base_face;
            let key = (lonely, y.face.offset, same_face, Some(x.edge == y.edge));
            match expect.buckets.get(&key) {
                None => unclassified += 1,
                Some(&(_, prob)) => {
                    max_dev = max_dev.max((p[(i, j)] - prob).abs().to_f64());
                    *actual.entry(key).or_insert(0) += 1;
                }
            }
        }
        let want_siblings = if x.face.offset == 0 { q.degree() - 1 } else { 0 };
        if siblings != want_siblings {
            mismatches.push(format!(
                "state {i}: expected {want_siblings} sibling copies, found {siblings}"
            ));
        }
        for (key, &(count, _)) in &expect.buckets {
            let got = actual.get(key).copied().unwrap_or(0);
            if got != count {
                mismatches.push(format!(
                    "state {i} class {key:?}: expected {count} neighbors, found {got}"
                ));
            }
        }
    }
    TableConformance {
        max_deviation: max_dev,
        count_mismatches: mismatches,
        unclassified,
        entries_checked: checked,
    }
}
