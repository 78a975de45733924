//! Imprimitivity bimodules over a finite discrete vertex set.
//!
//! A correspondence X over c₀(V) is an imprimitivity bimodule when the
//! left action is an isomorphism onto the compacts 𝒦(X). For finite V
//! the module decomposes over source vertices into columns, 𝒦(X) is
//! the direct sum over w of a full matrix algebra of size
//! c_w = Σ_v dims[v][w], and the left action hits all of 𝒦(X)
//! injectively exactly when every c_w = 1 and every row of the
//! dimension matrix is nonzero — that is, when dims is a permutation
//! matrix. Such a module carries a permutation h of V (the Rieffel
//! permutation) and is isomorphic to the graph correspondence of
//! (V, V, r=h, s=id); the line-bundle obstruction of the topological
//! setting cannot occur over a finite discrete base, so every
//! imprimitivity bimodule here is realizable.

use num_complex::Complex64;
use thiserror::Error;

use crate::correspondences::{graph_correspondence, CorrError, CorrMorphism, Correspondence};
use crate::graphs::{DirectedGraph, Edge, GraphError};
use crate::linalg::CMatrix;

#[derive(Debug, Error)]
pub enum ImprimitivityError {
    #[error("not an imprimitivity bimodule: {0}")]
    NotImprimitivity(String),
    #[error(transparent)]
    Corr(#[from] CorrError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Verdict of [`analyze`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImprimitivityReport {
    pub is_imprimitivity: bool,
    pub is_symmetric: bool,
    /// h(w) = the unique v with dims[v][w] = 1, when imprimitivity
    /// holds.
    pub rieffel_permutation: Option<Vec<usize>>,
    pub reason: String,
}

/// Decides whether X is an imprimitivity bimodule (dims a permutation
/// matrix), whether it is symmetric (dims the identity, i.e. f·ξ = ξ·f
/// for all f), and extracts the Rieffel permutation.
pub fn analyze(x: &Correspondence) -> ImprimitivityReport {
    let n = x.vertex_count();
    let dims = x.dims();
    let mut h = vec![usize::MAX; n];
    for w in 0..n {
        let col_sum: usize = (0..n).map(|v| dims[v][w]).sum();
        if col_sum != 1 {
            return ImprimitivityReport {
                is_imprimitivity: false,
                is_symmetric: false,
                rieffel_permutation: None,
                reason: format!(
                    "column {w} has total dimension {col_sum}, so the compacts over \
                     vertex {w} form a {col_sum}x{col_sum} matrix block, not a copy of \u{2102}"
                ),
            };
        }
        h[w] = (0..n).find(|&v| dims[v][w] == 1).unwrap();
    }
    let mut seen = vec![false; n];
    for &v in &h {
        seen[v] = true;
    }
    if let Some(v) = seen.iter().position(|s| !s) {
        return ImprimitivityReport {
            is_imprimitivity: false,
            is_symmetric: false,
            rieffel_permutation: None,
            reason: format!("row {v} is zero, so the left action of vertex {v} is not injective"),
        };
    }
    let symmetric = h.iter().enumerate().all(|(w, &v)| v == w);
    ImprimitivityReport {
        is_imprimitivity: true,
        is_symmetric: symmetric,
        rieffel_permutation: Some(h),
        reason: if symmetric {
            "dims is the identity matrix: the trivial imprimitivity bimodule".into()
        } else {
            "dims is a permutation matrix".into()
        },
    }
}

/// Realizes an imprimitivity bimodule as the graph correspondence of
/// (V, V, r=h, s=id): one edge per vertex w, labeled `h<w>`, with
/// range h(w) and source w, together with the unitary isomorphism
/// X ≅ X_E (every block is 1×1 with entry 1).
pub fn realize_as_graph(
    x: &Correspondence,
) -> Result<(DirectedGraph, CorrMorphism), ImprimitivityError> {
    let report = analyze(x);
    let h = report
        .rieffel_permutation
        .ok_or(ImprimitivityError::NotImprimitivity(report.reason))?;
    let n = x.vertex_count();
    let edges = (0..n)
        .map(|w| Edge::new(format!("h{w}"), h[w], w))
        .collect();
    let graph = DirectedGraph::new(n, edges)?;
    let target = graph_correspondence(&graph);
    let iso = CorrMorphism::from_fn(x.clone(), target, |v, w| {
        if x.dim(v, w) == 1 {
            CMatrix::from_element(1, 1, Complex64::new(1.0, 0.0))
        } else {
            CMatrix::zeros(0, 0)
        }
    })?;
    Ok((graph, iso))
}
