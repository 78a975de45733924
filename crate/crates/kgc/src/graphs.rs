//! Finite directed graphs over a fixed vertex set `{0..n-1}`, fibred
//! products, and k-graph presentations given by skeleton graphs plus
//! commuting-square bijections.
//!
//! Convention: an edge has a range `r` and a source `s`, and a path `ef`
//! is composable when `s(e) = r(f)`. All formats and comments state
//! (range, source) explicitly.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("vertex count mismatch: {0} vs {1}")]
    VertexCountMismatch(usize, usize),
    #[error("vertex count must be at least 1")]
    EmptyVertexSet,
    #[error("edge {label:?}: endpoint {vertex} out of range (vertex count {vertex_count})")]
    VertexOutOfRange {
        label: String,
        vertex: usize,
        vertex_count: usize,
    },
    #[error("duplicate edge label {0:?}")]
    DuplicateLabel(String),
    #[error("edge pair ({0}, {1}) is not composable")]
    NotComposable(usize, usize),
    #[error("rank must be at least 1")]
    EmptyRank,
    #[error("no square stored for colors ({0}, {1})")]
    MissingSquare(usize, usize),
    #[error("square ({i}, {j}) has {got} entries, expected {expected}")]
    SquareSizeMismatch {
        i: usize,
        j: usize,
        got: usize,
        expected: usize,
    },
    #[error("color index {0} out of range for rank {1}")]
    ColorOutOfRange(usize, usize),
    #[error("edge index {0} out of range")]
    EdgeOutOfRange(usize),
    #[error("invalid k-graph presentation: {0}")]
    InvalidPresentation(String),
}

/// A labeled edge with range and source vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub label: String,
    pub range: usize,
    pub source: usize,
}

impl Edge {
    pub fn new(label: impl Into<String>, range: usize, source: usize) -> Self {
        Edge {
            label: label.into(),
            range,
            source,
        }
    }
}

/// A finite directed graph over vertices `{0..vertex_count-1}`.
///
/// Edge-list order is significant: it fixes the basis order of the
/// associated correspondence and every matrix built downstream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    vertex_count: usize,
    edges: Vec<Edge>,
}

impl DirectedGraph {
    pub fn new(vertex_count: usize, edges: Vec<Edge>) -> Result<Self, GraphError> {
        if vertex_count == 0 {
            return Err(GraphError::EmptyVertexSet);
        }
        let mut seen = HashSet::new();
        for e in &edges {
            if e.range >= vertex_count {
                return Err(GraphError::VertexOutOfRange {
                    label: e.label.clone(),
                    vertex: e.range,
                    vertex_count,
                });
            }
            if e.source >= vertex_count {
                return Err(GraphError::VertexOutOfRange {
                    label: e.label.clone(),
                    vertex: e.source,
                    vertex_count,
                });
            }
            if !seen.insert(e.label.clone()) {
                return Err(GraphError::DuplicateLabel(e.label.clone()));
            }
        }
        Ok(DirectedGraph {
            vertex_count,
            edges,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, idx: usize) -> Result<&Edge, GraphError> {
        self.edges.get(idx).ok_or(GraphError::EdgeOutOfRange(idx))
    }

    pub fn edge_by_label(&self, label: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.label == label)
    }

    /// Adjacency matrix A with `A[v][w]` = number of edges with range v
    /// and source w.
    pub fn adjacency_matrix(&self) -> Vec<Vec<usize>> {
        let mut a = vec![vec![0usize; self.vertex_count]; self.vertex_count];
        for e in &self.edges {
            a[e.range][e.source] += 1;
        }
        a
    }

    /// Edge indices with range v and source w, in edge-list order.
    pub fn block_edges(&self, range: usize, source: usize) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.range == range && e.source == source)
            .map(|(i, _)| i)
            .collect()
    }
}

/// The graph with one loop per vertex, `r = s = id`.
pub fn identity_graph(vertex_count: usize) -> DirectedGraph {
    let edges = (0..vertex_count)
        .map(|v| Edge::new(format!("v{v}"), v, v))
        .collect();
    DirectedGraph::new(vertex_count, edges).expect("identity graph is always valid")
}

/// The fibred product E*F: edges are composable pairs (e, f) with
/// s(e) = r(f), range r(e), source s(f), ordered lexicographically by
/// (index of e, index of f).
#[derive(Debug, Clone)]
pub struct FibredProductGraph {
    base: DirectedGraph,
    left_index: Vec<usize>,
    right_index: Vec<usize>,
    pair_lookup: HashMap<(usize, usize), usize>,
}

impl FibredProductGraph {
    pub fn base(&self) -> &DirectedGraph {
        &self.base
    }

    pub fn edge_count(&self) -> usize {
        self.base.edge_count()
    }

    /// Constituent edge indices (e in E, f in F) of pair-edge `idx`.
    pub fn pair(&self, idx: usize) -> (usize, usize) {
        (self.left_index[idx], self.right_index[idx])
    }

    /// Pair-edge index of (e, f), if composable.
    pub fn index_of(&self, e: usize, f: usize) -> Option<usize> {
        self.pair_lookup.get(&(e, f)).copied()
    }
}

pub fn fibred_product(
    e_graph: &DirectedGraph,
    f_graph: &DirectedGraph,
) -> Result<FibredProductGraph, GraphError> {
    if e_graph.vertex_count != f_graph.vertex_count {
        return Err(GraphError::VertexCountMismatch(
            e_graph.vertex_count,
            f_graph.vertex_count,
        ));
    }
    let mut edges = Vec::new();
    let mut left_index = Vec::new();
    let mut right_index = Vec::new();
    let mut pair_lookup = HashMap::new();
    for (ei, e) in e_graph.edges.iter().enumerate() {
        for (fi, f) in f_graph.edges.iter().enumerate() {
            if e.source == f.range {
                pair_lookup.insert((ei, fi), edges.len());
                left_index.push(ei);
                right_index.push(fi);
                edges.push(Edge::new(
                    format!("({},{})", e.label, f.label),
                    e.range,
                    f.source,
                ));
            }
        }
    }
    Ok(FibredProductGraph {
        base: DirectedGraph::new(e_graph.vertex_count, edges)?,
        left_index,
        right_index,
        pair_lookup,
    })
}

/// A range/source-preserving edge bijection E¹ → F¹, if one exists.
/// One exists iff the adjacency matrices agree; the returned bijection
/// matches edges per (range, source) block in edge-list order.
pub fn vertex_fixing_iso(
    e_graph: &DirectedGraph,
    f_graph: &DirectedGraph,
) -> Result<Option<Vec<usize>>, GraphError> {
    if e_graph.vertex_count != f_graph.vertex_count {
        return Err(GraphError::VertexCountMismatch(
            e_graph.vertex_count,
            f_graph.vertex_count,
        ));
    }
    if e_graph.adjacency_matrix() != f_graph.adjacency_matrix() {
        return Ok(None);
    }
    let mut map = vec![0usize; e_graph.edge_count()];
    for v in 0..e_graph.vertex_count {
        for w in 0..e_graph.vertex_count {
            let src = e_graph.block_edges(v, w);
            let dst = f_graph.block_edges(v, w);
            for (a, b) in src.iter().zip(dst.iter()) {
                map[*a] = *b;
            }
        }
    }
    Ok(Some(map))
}

/// A commuting square θ: (Eᵢ*Eⱼ)¹ → (Eⱼ*Eᵢ)¹ stored as the image
/// pair-edge index for each forward pair-edge index.
pub type Square = Vec<usize>;

/// Streams every range/source-preserving bijection (E*F)¹ → (F*E)¹.
///
/// Bijections are emitted in a deterministic order: pair edges are
/// grouped per (range, source) block, blocks ascending in (r, s),
/// per-block permutations in lexicographic order with the last block
/// varying fastest. The stream is empty iff some block size differs,
/// i.e. iff the adjacency products A_E·A_F and A_F·A_E disagree.
pub struct SquareEnumerator {
    // per block: (forward pair indices, backward pair indices)
    blocks: Vec<(Vec<usize>, Vec<usize>)>,
    // current permutation per block, as index vectors into the backward list
    perms: Vec<Vec<usize>>,
    forward_count: usize,
    exhausted: bool,
}

impl SquareEnumerator {
    pub fn new(
        e_graph: &DirectedGraph,
        f_graph: &DirectedGraph,
    ) -> Result<Self, GraphError> {
        let fwd = fibred_product(e_graph, f_graph)?;
        let bwd = fibred_product(f_graph, e_graph)?;
        let n = e_graph.vertex_count;
        let mut blocks = Vec::new();
        let mut mismatch = false;
        for v in 0..n {
            for w in 0..n {
                let a = fwd.base.block_edges(v, w);
                let b = bwd.base.block_edges(v, w);
                if a.len() != b.len() {
                    mismatch = true;
                }
                if !a.is_empty() || !b.is_empty() {
                    blocks.push((a, b));
                }
            }
        }
        let perms = blocks
            .iter()
            .map(|(a, _)| (0..a.len()).collect())
            .collect();
        Ok(SquareEnumerator {
            blocks,
            perms,
            forward_count: fwd.edge_count(),
            exhausted: mismatch,
        })
    }

    fn current(&self) -> Square {
        let mut map = vec![0usize; self.forward_count];
        for (bi, (fwd, bwd)) in self.blocks.iter().enumerate() {
            for (pos, &f_idx) in fwd.iter().enumerate() {
                map[f_idx] = bwd[self.perms[bi][pos]];
            }
        }
        map
    }

    fn advance(&mut self) {
        // last block varies fastest
        for bi in (0..self.perms.len()).rev() {
            if next_permutation(&mut self.perms[bi]) {
                return;
            }
            // wrapped around; reset and carry
            self.perms[bi].sort_unstable();
        }
        self.exhausted = true;
    }

    /// Collects at most `limit` squares; the flag reports truncation.
    pub fn collect_limited(self, limit: usize) -> (Vec<Square>, bool) {
        let mut out = Vec::new();
        let mut iter = self;
        loop {
            match iter.next() {
                Some(sq) => {
                    if out.len() == limit {
                        return (out, true);
                    }
                    out.push(sq);
                }
                None => return (out, false),
            }
        }
    }
}

impl Iterator for SquareEnumerator {
    type Item = Square;

    fn next(&mut self) -> Option<Square> {
        if self.exhausted {
            return None;
        }
        let sq = self.current();
        self.advance();
        Some(sq)
    }
}

/// Rearranges `perm` into its lexicographic successor; returns false
/// (leaving it in the last permutation) when it was already the last.
fn next_permutation(perm: &mut [usize]) -> bool {
    if perm.len() < 2 {
        return false;
    }
    let mut i = perm.len() - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = perm.len() - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// A k-graph presented by its degree-eᵢ skeleton graphs and the
/// commuting-square bijections θ_{i,j}: (Eᵢ*Eⱼ)¹ → (Eⱼ*Eᵢ)¹ for i < j.
#[derive(Debug, Clone)]
pub struct KGraphPresentation {
    k: usize,
    skeleton_graphs: Vec<DirectedGraph>,
    squares: BTreeMap<(usize, usize), Square>,
    // cached fibred products, forward (i,j) and backward (j,i), per i<j
    forward: BTreeMap<(usize, usize), FibredProductGraph>,
    backward: BTreeMap<(usize, usize), FibredProductGraph>,
}

/// One cube-condition failure: the composable triple and the two
/// rewriting outcomes that disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    MissingSquare {
        i: usize,
        j: usize,
    },
    NotBijective {
        i: usize,
        j: usize,
        detail: String,
    },
    RangeSourceBroken {
        i: usize,
        j: usize,
        pair: (usize, usize),
    },
    CubeFailure {
        colors: (usize, usize, usize),
        triple: (usize, usize, usize),
        route_a: (usize, usize, usize),
        route_b: (usize, usize, usize),
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingSquare { i, j } => {
                write!(f, "missing square for colors ({i}, {j})")
            }
            Violation::NotBijective { i, j, detail } => {
                write!(f, "square ({i}, {j}) is not a bijection: {detail}")
            }
            Violation::RangeSourceBroken { i, j, pair } => write!(
                f,
                "square ({i}, {j}) breaks range/source on pair edge ({}, {})",
                pair.0, pair.1
            ),
            Violation::CubeFailure {
                colors,
                triple,
                route_a,
                route_b,
            } => write!(
                f,
                "cube condition fails for colors ({}, {}, {}) on triple ({}, {}, {}): \
                 routes give ({}, {}, {}) vs ({}, {}, {})",
                colors.0,
                colors.1,
                colors.2,
                triple.0,
                triple.1,
                triple.2,
                route_a.0,
                route_a.1,
                route_a.2,
                route_b.0,
                route_b.1,
                route_b.2
            ),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Validation {
    pub violations: Vec<Violation>,
}

impl Validation {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl KGraphPresentation {
    /// `squares` maps each color pair (i, j) with i < j to a bijection
    /// θ_{i,j} in pair-edge index form. Structural problems (wrong
    /// sizes, missing pairs) are errors; semantic problems (broken
    /// bijections, cube failures) are reported by [`validate`].
    ///
    /// [`validate`]: KGraphPresentation::validate
    pub fn new(
        skeleton_graphs: Vec<DirectedGraph>,
        squares: BTreeMap<(usize, usize), Square>,
    ) -> Result<Self, GraphError> {
        let k = skeleton_graphs.len();
        if k == 0 {
            return Err(GraphError::EmptyRank);
        }
        let n = skeleton_graphs[0].vertex_count;
        for g in &skeleton_graphs {
            if g.vertex_count != n {
                return Err(GraphError::VertexCountMismatch(n, g.vertex_count));
            }
        }
        let mut forward = BTreeMap::new();
        let mut backward = BTreeMap::new();
        for i in 0..k {
            for j in (i + 1)..k {
                forward.insert(
                    (i, j),
                    fibred_product(&skeleton_graphs[i], &skeleton_graphs[j])?,
                );
                backward.insert(
                    (i, j),
                    fibred_product(&skeleton_graphs[j], &skeleton_graphs[i])?,
                );
                let sq = squares
                    .get(&(i, j))
                    .ok_or(GraphError::MissingSquare(i, j))?;
                let expected = forward[&(i, j)].edge_count();
                if sq.len() != expected {
                    return Err(GraphError::SquareSizeMismatch {
                        i,
                        j,
                        got: sq.len(),
                        expected,
                    });
                }
                let bwd_count = backward[&(i, j)].edge_count();
                for &t in sq {
                    if t >= bwd_count {
                        return Err(GraphError::EdgeOutOfRange(t));
                    }
                }
            }
        }
        Ok(KGraphPresentation {
            k,
            skeleton_graphs,
            squares,
            forward,
            backward,
        })
    }

    pub fn rank(&self) -> usize {
        self.k
    }

    pub fn vertex_count(&self) -> usize {
        self.skeleton_graphs[0].vertex_count
    }

    pub fn skeleton_graph(&self, i: usize) -> &DirectedGraph {
        &self.skeleton_graphs[i]
    }

    pub fn skeleton_graphs(&self) -> &[DirectedGraph] {
        &self.skeleton_graphs
    }

    pub fn square(&self, i: usize, j: usize) -> &Square {
        &self.squares[&(i, j)]
    }

    pub fn forward_product(&self, i: usize, j: usize) -> &FibredProductGraph {
        &self.forward[&(i, j)]
    }

    pub fn backward_product(&self, i: usize, j: usize) -> &FibredProductGraph {
        &self.backward[&(i, j)]
    }

    /// θ_{i,j}(e, f) = (f̃, ẽ): the unique factorization f̃ẽ = ef.
    /// `e` and `f` are edge indices into Eᵢ and Eⱼ; the result is
    /// (index of f̃ in Eⱼ, index of ẽ in Eᵢ).
    pub fn factor(
        &self,
        i: usize,
        j: usize,
        e: usize,
        f: usize,
    ) -> Result<(usize, usize), GraphError> {
        if i >= j || j >= self.k {
            return Err(GraphError::ColorOutOfRange(j, self.k));
        }
        let fwd = &self.forward[&(i, j)];
        let pair_idx = fwd
            .index_of(e, f)
            .ok_or(GraphError::NotComposable(e, f))?;
        let target = self.squares[&(i, j)][pair_idx];
        let (f_tilde, e_tilde) = self.backward[&(i, j)].pair(target);
        Ok((f_tilde, e_tilde))
    }

    /// Checks that every square is a range/source-preserving bijection
    /// and, for k ≥ 3, that the two rewriting routes through every
    /// composable generator triple agree.
    pub fn validate(&self) -> Validation {
        let mut violations = Vec::new();
        for i in 0..self.k {
            for j in (i + 1)..self.k {
                let sq = &self.squares[&(i, j)];
                let fwd = &self.forward[&(i, j)];
                let bwd = &self.backward[&(i, j)];
                let mut hit = vec![false; bwd.edge_count()];
                let mut ok = true;
                for (a, &b) in sq.iter().enumerate() {
                    if hit[b] {
                        violations.push(Violation::NotBijective {
                            i,
                            j,
                            detail: format!("pair-edge {b} hit twice"),
                        });
                        ok = false;
                    }
                    hit[b] = true;
                    let src = fwd.base().edge(a).expect("validated at construction");
                    let dst = bwd.base().edge(b).expect("validated at construction");
                    if src.range != dst.range || src.source != dst.source {
                        violations.push(Violation::RangeSourceBroken {
                            i,
                            j,
                            pair: fwd.pair(a),
                        });
                        ok = false;
                    }
                }
                if fwd.edge_count() != bwd.edge_count() {
                    violations.push(Violation::NotBijective {
                        i,
                        j,
                        detail: format!(
                            "{} forward vs {} backward pair edges",
                            fwd.edge_count(),
                            bwd.edge_count()
                        ),
                    });
                    ok = false;
                }
                if !ok {
                    // cube checking needs well-formed squares
                    return Validation { violations };
                }
            }
        }
        if self.k >= 3 {
            for i in 0..self.k {
                for j in (i + 1)..self.k {
                    for l in (j + 1)..self.k {
                        self.check_cube(i, j, l, &mut violations);
                    }
                }
            }
        }
        Validation { violations }
    }

    fn check_cube(&self, i: usize, j: usize, l: usize, violations: &mut Vec<Violation>) {
        let ei = &self.skeleton_graphs[i];
        let ej = &self.skeleton_graphs[j];
        let el = &self.skeleton_graphs[l];
        for (e_idx, e) in ei.edges().iter().enumerate() {
            for (f_idx, f) in ej.edges().iter().enumerate() {
                if e.source != f.range {
                    continue;
                }
                for (g_idx, g) in el.edges().iter().enumerate() {
                    if f.source != g.range {
                        continue;
                    }
                    // route A: θ_{j,l}, then θ_{i,l}, then θ_{i,j}
                    let (g1, f1) = self.factor(j, l, f_idx, g_idx).expect("composable");
                    let (g2, e1) = self.factor(i, l, e_idx, g1).expect("composable");
                    let (f2, e2) = self.factor(i, j, e1, f1).expect("composable");
                    // route B: θ_{i,j}, then θ_{i,l}, then θ_{j,l}
                    let (f1b, e1b) = self.factor(i, j, e_idx, f_idx).expect("composable");
                    let (g1b, e2b) = self.factor(i, l, e1b, g_idx).expect("composable");
                    let (g2b, f2b) = self.factor(j, l, f1b, g1b).expect("composable");
                    if (g2, f2, e2) != (g2b, f2b, e2b) {
                        violations.push(Violation::CubeFailure {
                            colors: (i, j, l),
                            triple: (e_idx, f_idx, g_idx),
                            route_a: (g2, f2, e2),
                            route_b: (g2b, f2b, e2b),
                        });
                    }
                }
            }
        }
    }
}
