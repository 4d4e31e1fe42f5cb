//! JSON file formats: graphs, complexes (top faces only; lower faces are
//! always derived), chain dumps, and TV curves as CSV.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::markov::{MarkovChain, TvPoint};
use crate::scalar::Real;
use crate::simplicial::{Face, SimplicialComplex};
use crate::graph::WeightedGraph;

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    directed: bool,
    edges: Vec<(u32, u32, f64)>,
}

pub fn graph_to_json<F: Real>(g: &WeightedGraph<F>) -> String {
    let doc = GraphJson {
        n: g.vertex_count(),
        directed: g.is_directed(),
        edges: g.edges().iter().map(|&(u, v, w)| (u, v, w.to_f64())).collect(),
    };
    serde_json::to_string_pretty(&doc).expect("graph serializes")
}

pub fn graph_from_json<F: Real>(text: &str) -> Result<WeightedGraph<F>> {
    let doc: GraphJson =
        serde_json::from_str(text).map_err(|e| Error::InvalidGraph(e.to_string()))?;
    let edges = doc
        .edges
        .into_iter()
        .map(|(u, v, w)| (u, v, F::from_f64_exact(w)))
        .collect();
    WeightedGraph::new(doc.n, doc.directed, edges)
}

#[derive(Serialize, Deserialize)]
struct ComplexJson {
    n: usize,
    top_dim: usize,
    top_faces: Vec<Face>,
    top_weights: Vec<f64>,
}

pub fn complex_to_json<F: Real>(c: &SimplicialComplex<F>) -> String {
    let h = c.top_dim();
    let doc = ComplexJson {
        n: c.vertex_count(),
        top_dim: h,
        top_faces: c.faces(h).to_vec(),
        top_weights: c.weights(h).iter().map(|&w| w.to_f64()).collect(),
    };
    serde_json::to_string_pretty(&doc).expect("complex serializes")
}

pub fn complex_from_json<F: Real>(text: &str) -> Result<SimplicialComplex<F>> {
    let doc: ComplexJson =
        serde_json::from_str(text).map_err(|e| Error::InvalidGraph(e.to_string()))?;
    let weights = doc.top_weights.into_iter().map(F::from_f64_exact).collect();
    SimplicialComplex::from_top_faces(doc.n, doc.top_dim, doc.top_faces, weights)
}

#[derive(Serialize, Deserialize)]
struct ChainJson {
    states: Vec<String>,
    #[serde(rename = "P")]
    p: Vec<f64>,
    pi: Vec<f64>,
}

pub fn chain_to_json<F: Real>(chain: &MarkovChain<F>) -> String {
    let n = chain.len();
    let mut p = Vec::with_capacity(n * n);
    for i in 0..n {
        p.extend(chain.transition_matrix().row(i).iter().map(|&x| x.to_f64()));
    }
    let doc = ChainJson {
        states: chain.labels().to_vec(),
        p,
        pi: chain.stationary().iter().map(|&x| x.to_f64()).collect(),
    };
    serde_json::to_string_pretty(&doc).expect("chain serializes")
}

/// TV curve as CSV with a bound header comment.
pub fn tv_curve_to_csv<F: Real>(curve: &[TvPoint<F>], header_lines: &[String]) -> String {
    let mut out = String::new();
    for line in header_lines {
        out.push_str(&format!("# {line}\n"));
    }
    out.push_str("t,tv_exact,tv_sampled\n");
    for pt in curve {
        out.push_str(&format!(
            "{},{:.12e},{:.12e}\n",
            pt.t,
            pt.tv_exact.to_f64(),
            pt.tv_sampled.to_f64()
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_round_trip() {
        let g = WeightedGraph::<f64>::cycle(5);
        let text = graph_to_json(&g);
        let back: WeightedGraph<f64> = graph_from_json(&text).unwrap();
        assert_eq!(back.vertex_count(), 5);
        assert_eq!(back.edges(), g.edges());

        assert!(graph_from_json::<f64>("{\"n\": 2, \"directed\": false, \"edges\": [[0, 5, 1.0]]}").is_err());
        assert!(graph_from_json::<f64>("{\"n\": 2, \"directed\": false, \"edges\": [[0, 1, -1.0]]}").is_err());
    }

    #[test]
    fn complex_round_trip() {
        let c = SimplicialComplex::<f64>::complete(4, 2).unwrap();
        let text = complex_to_json(&c);
        let back: SimplicialComplex<f64> = complex_from_json(&text).unwrap();
        assert_eq!(back.face_count(), c.face_count());
        assert_eq!(back.weights(0), c.weights(0));
    }

    #[test]
    fn chain_dump_has_rows_and_pi() {
        let g = WeightedGraph::<f64>::cycle(4).add_lazy_loops(0.5).unwrap();
        let chain = MarkovChain::from_graph(&g).unwrap();
        let text = chain_to_json(&chain);
        let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(doc["P"].as_array().unwrap().len(), 16);
        assert_eq!(doc["pi"].as_array().unwrap().len(), 4);
    }
}
