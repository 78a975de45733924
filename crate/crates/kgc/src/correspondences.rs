//! Finite-dimensional c₀(V)-correspondences as V×V-graded complex
//! vector spaces, their balanced tensor products, and the block-wise
//! morphism algebra.
//!
//! A correspondence is determined here by its dimension matrix: block
//! (v, w) is ℂ^dims[v][w] with the standard inner product. The global
//! basis order is lexicographic in (v, w, p) and is normative for all
//! file I/O and matrix comparison.

use num_complex::Complex64;
use thiserror::Error;

use crate::graphs::DirectedGraph;
use crate::linalg::{max_abs, CMatrix};

#[derive(Debug, Error)]
pub enum CorrError {
    #[error("vertex count mismatch: {0} vs {1}")]
    VertexCountMismatch(usize, usize),
    #[error("vertex count must be at least 1")]
    EmptyVertexSet,
    #[error("dims matrix is not {0}×{0}")]
    BadDimsShape(usize),
    #[error("block ({v}, {w}): {got} labels for dimension {dim}")]
    LabelCountMismatch {
        v: usize,
        w: usize,
        got: usize,
        dim: usize,
    },
    #[error("block ({v}, {w}): matrix is {rows}×{cols}, expected {exp_rows}×{exp_cols}")]
    BlockShapeMismatch {
        v: usize,
        w: usize,
        rows: usize,
        cols: usize,
        exp_rows: usize,
        exp_cols: usize,
    },
    #[error("morphism shapes are not composable")]
    NotComposable,
    #[error("the flip map requires a single vertex, got {0}")]
    FlipNeedsOneVertex(usize),
}

/// A finite-dimensional c₀(V)-correspondence: dims[v][w] is the
/// dimension of the (range v, source w) block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Correspondence {
    vertex_count: usize,
    dims: Vec<Vec<usize>>,
    basis_labels: Option<Vec<Vec<Vec<String>>>>,
}

impl Correspondence {
    pub fn new(vertex_count: usize, dims: Vec<Vec<usize>>) -> Result<Self, CorrError> {
        if vertex_count == 0 {
            return Err(CorrError::EmptyVertexSet);
        }
        if dims.len() != vertex_count || dims.iter().any(|row| row.len() != vertex_count) {
            return Err(CorrError::BadDimsShape(vertex_count));
        }
        Ok(Correspondence {
            vertex_count,
            dims,
            basis_labels: None,
        })
    }

    /// Attaches per-block basis labels; label counts must match dims.
    pub fn with_labels(
        mut self,
        labels: Vec<Vec<Vec<String>>>,
    ) -> Result<Self, CorrError> {
        if labels.len() != self.vertex_count
            || labels.iter().any(|row| row.len() != self.vertex_count)
        {
            return Err(CorrError::BadDimsShape(self.vertex_count));
        }
        for v in 0..self.vertex_count {
            for w in 0..self.vertex_count {
                if labels[v][w].len() != self.dims[v][w] {
                    return Err(CorrError::LabelCountMismatch {
                        v,
                        w,
                        got: labels[v][w].len(),
                        dim: self.dims[v][w],
                    });
                }
            }
        }
        self.basis_labels = Some(labels);
        Ok(self)
    }

    /// The correspondence c₀(V) itself: dims = identity matrix.
    pub fn base(vertex_count: usize) -> Self {
        let dims = (0..vertex_count)
            .map(|v| {
                (0..vertex_count)
                    .map(|w| usize::from(v == w))
                    .collect()
            })
            .collect();
        Correspondence {
            vertex_count,
            dims,
            basis_labels: None,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn dims(&self) -> &Vec<Vec<usize>> {
        &self.dims
    }

    pub fn dim(&self, v: usize, w: usize) -> usize {
        self.dims[v][w]
    }

    pub fn basis_labels(&self) -> Option<&Vec<Vec<Vec<String>>>> {
        self.basis_labels.as_ref()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().flatten().sum()
    }

    /// Dims-only equality; labels are bookkeeping, not structure.
    pub fn same_shape(&self, other: &Correspondence) -> bool {
        self.vertex_count == other.vertex_count && self.dims == other.dims
    }
}

/// The graph correspondence X_E: block (v, w) is spanned by the
/// indicator functions χ_e of edges with range v and source w, in
/// edge-list order.
pub fn graph_correspondence(graph: &DirectedGraph) -> Correspondence {
    let n = graph.vertex_count();
    let mut dims = vec![vec![0usize; n]; n];
    let mut labels = vec![vec![Vec::new(); n]; n];
    for e in graph.edges() {
        dims[e.range][e.source] += 1;
        labels[e.range][e.source].push(e.label.clone());
    }
    Correspondence::new(n, dims)
        .expect("graph dims are square")
        .with_labels(labels)
        .expect("labels counted from the same edges")
}

/// Basis bookkeeping for X⊗Y: block (v, w) is spanned by the vectors
/// e^X_{(v,u),p} ⊗ e^Y_{(u,w),q}, ordered by (u, p, q) ascending.
#[derive(Debug, Clone)]
pub struct TensorBasisMap {
    vertex_count: usize,
    left_dims: Vec<Vec<usize>>,
    right_dims: Vec<Vec<usize>>,
    blocks: Vec<Vec<(usize, usize, usize)>>,
}

impl TensorBasisMap {
    pub fn block(&self, v: usize, w: usize) -> &[(usize, usize, usize)] {
        &self.blocks[v * self.vertex_count + w]
    }

    /// Position of e^X_{(v,u),p} ⊗ e^Y_{(u,w),q} within block (v, w).
    pub fn index_of(&self, v: usize, w: usize, u: usize, p: usize, q: usize) -> usize {
        let mut idx = 0;
        for u2 in 0..u {
            idx += self.left_dims[v][u2] * self.right_dims[u2][w];
        }
        idx + p * self.right_dims[u][w] + q
    }
}

/// Balanced tensor product over c₀(V): dims multiply as matrices.
pub fn tensor(
    x: &Correspondence,
    y: &Correspondence,
) -> Result<(Correspondence, TensorBasisMap), CorrError> {
    if x.vertex_count != y.vertex_count {
        return Err(CorrError::VertexCountMismatch(
            x.vertex_count,
            y.vertex_count,
        ));
    }
    let n = x.vertex_count;
    let mut dims = vec![vec![0usize; n]; n];
    let mut blocks = Vec::with_capacity(n * n);
    for v in 0..n {
        for w in 0..n {
            let mut basis = Vec::new();
            for u in 0..n {
                for p in 0..x.dims[v][u] {
                    for q in 0..y.dims[u][w] {
                        basis.push((u, p, q));
                    }
                }
            }
            dims[v][w] = basis.len();
            blocks.push(basis);
        }
    }
    let corr = Correspondence::new(n, dims)?;
    Ok((
        corr,
        TensorBasisMap {
            vertex_count: n,
            left_dims: x.dims.clone(),
            right_dims: y.dims.clone(),
            blocks,
        },
    ))
}

/// An adjointable bimodule map between correspondences over the same
/// vertex set. c₀(V)-bilinearity forces the (v, w)-grading to be
/// preserved, so only the diagonal blocks are stored: block (v, w) is
/// a target.dims[v][w] × source.dims[v][w] complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrMorphism {
    source: Correspondence,
    target: Correspondence,
    blocks: Vec<CMatrix>,
}

impl CorrMorphism {
    pub fn new(
        source: Correspondence,
        target: Correspondence,
        blocks: Vec<CMatrix>,
    ) -> Result<Self, CorrError> {
        if source.vertex_count != target.vertex_count {
            return Err(CorrError::VertexCountMismatch(
                source.vertex_count,
                target.vertex_count,
            ));
        }
        let n = source.vertex_count;
        if blocks.len() != n * n {
            return Err(CorrError::BadDimsShape(n));
        }
        for v in 0..n {
            for w in 0..n {
                let b = &blocks[v * n + w];
                if b.nrows() != target.dims[v][w] || b.ncols() != source.dims[v][w] {
                    return Err(CorrError::BlockShapeMismatch {
                        v,
                        w,
                        rows: b.nrows(),
                        cols: b.ncols(),
                        exp_rows: target.dims[v][w],
                        exp_cols: source.dims[v][w],
                    });
                }
            }
        }
        Ok(CorrMorphism {
            source,
            target,
            blocks,
        })
    }

    /// Builds blocks from a closure over (v, w).
    pub fn from_fn(
        source: Correspondence,
        target: Correspondence,
        mut f: impl FnMut(usize, usize) -> CMatrix,
    ) -> Result<Self, CorrError> {
        let n = source.vertex_count;
        let mut blocks = Vec::with_capacity(n * n);
        for v in 0..n {
            for w in 0..n {
                blocks.push(f(v, w));
            }
        }
        CorrMorphism::new(source, target, blocks)
    }

    pub fn identity(x: &Correspondence) -> Self {
        let n = x.vertex_count;
        let mut blocks = Vec::with_capacity(n * n);
        for v in 0..n {
            for w in 0..n {
                let d = x.dims[v][w];
                blocks.push(CMatrix::identity(d, d));
            }
        }
        CorrMorphism {
            source: x.clone(),
            target: x.clone(),
            blocks,
        }
    }

    pub fn source(&self) -> &Correspondence {
        &self.source
    }

    pub fn target(&self) -> &Correspondence {
        &self.target
    }

    pub fn block(&self, v: usize, w: usize) -> &CMatrix {
        &self.blocks[v * self.source.vertex_count + w]
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    /// self ∘ other: first `other`, then `self`.
    pub fn compose(&self, other: &CorrMorphism) -> Result<CorrMorphism, CorrError> {
        if !other.target.same_shape(&self.source) {
            return Err(CorrError::NotComposable);
        }
        let blocks = self
            .blocks
            .iter()
            .zip(other.blocks.iter())
            .map(|(a, b)| a * b)
            .collect();
        Ok(CorrMorphism {
            source: other.source.clone(),
            target: self.target.clone(),
            blocks,
        })
    }

    pub fn adjoint(&self) -> CorrMorphism {
        CorrMorphism {
            source: self.target.clone(),
            target: self.source.clone(),
            blocks: self.blocks.iter().map(|b| b.adjoint()).collect(),
        }
    }

    pub fn scalar_mul(&self, c: Complex64) -> CorrMorphism {
        CorrMorphism {
            source: self.source.clone(),
            target: self.target.clone(),
            blocks: self.blocks.iter().map(|b| b.scale(1.0) * c).collect(),
        }
    }

    /// Max over blocks of ‖U*U − I‖_max and ‖UU* − I‖_max.
    pub fn unitarity_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for b in &self.blocks {
            let id_s = CMatrix::identity(b.ncols(), b.ncols());
            let id_t = CMatrix::identity(b.nrows(), b.nrows());
            worst = worst
                .max(max_abs(&(b.adjoint() * b - id_s)))
                .max(max_abs(&(b * b.adjoint() - id_t)));
        }
        worst
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() < tol
    }

    /// Max-entry difference; infinite when shapes differ.
    pub fn max_entry_diff(&self, other: &CorrMorphism) -> f64 {
        if !self.source.same_shape(&other.source) || !self.target.same_shape(&other.target) {
            return f64::INFINITY;
        }
        self.blocks
            .iter()
            .zip(other.blocks.iter())
            .map(|(a, b)| max_abs(&(a - b)))
            .fold(0.0, f64::max)
    }
}

/// (U⊗W)(x⊗y) = Ux ⊗ Wy, block-wise on the tensor bases.
pub fn tensor_morphism(
    u: &CorrMorphism,
    w: &CorrMorphism,
) -> Result<CorrMorphism, CorrError> {
    let (src, src_map) = tensor(&u.source, &w.source)?;
    let (tgt, tgt_map) = tensor(&u.target, &w.target)?;
    let n = src.vertex_count();
    let mut blocks = Vec::with_capacity(n * n);
    for v in 0..n {
        for ww in 0..n {
            let src_basis = src_map.block(v, ww);
            let tgt_basis = tgt_map.block(v, ww);
            let mut m = CMatrix::zeros(tgt_basis.len(), src_basis.len());
            for (col, &(a, p, q)) in src_basis.iter().enumerate() {
                for (row, &(a2, p2, q2)) in tgt_basis.iter().enumerate() {
                    if a == a2 {
                        m[(row, col)] = u.block(v, a)[(p2, p)] * w.block(a, ww)[(q2, q)];
                    }
                }
            }
            blocks.push(m);
        }
    }
    CorrMorphism::new(src, tgt, blocks)
}

/// The flip map Σ: Y₁⊗Y₂ → Y₂⊗Y₁ over a one-point vertex space,
/// sending e_p ⊗ f_q to f_q ⊗ e_p. Over more vertices the factor swap
/// is not a bimodule map, so it is rejected.
pub fn flip_map(y1: &Correspondence, y2: &Correspondence) -> Result<CorrMorphism, CorrError> {
    if y1.vertex_count != 1 || y2.vertex_count != 1 {
        return Err(CorrError::FlipNeedsOneVertex(
            y1.vertex_count.max(y2.vertex_count),
        ));
    }
    let d1 = y1.dims[0][0];
    let d2 = y2.dims[0][0];
    let (src, _) = tensor(y1, y2)?;
    let (tgt, _) = tensor(y2, y1)?;
    let mut m = CMatrix::zeros(d1 * d2, d1 * d2);
    for p in 0..d1 {
        for q in 0..d2 {
            // source index (p, q), target index (q, p)
            m[(q * d1 + p, p * d2 + q)] = Complex64::new(1.0, 0.0);
        }
    }
    CorrMorphism::new(src, tgt, vec![m])
}

/// The canonical reindexing (X⊗Y)⊗Z → X⊗(Y⊗Z): a block permutation
/// matrix acting as the identity on triple basis vectors.
pub fn associator(
    x: &Correspondence,
    y: &Correspondence,
    z: &Correspondence,
) -> Result<CorrMorphism, CorrError> {
    let (xy, xy_map) = tensor(x, y)?;
    let (yz, yz_map) = tensor(y, z)?;
    let (left, left_map) = tensor(&xy, z)?;
    let (right, right_map) = tensor(x, &yz)?;
    let n = x.vertex_count;
    let one = Complex64::new(1.0, 0.0);
    let mut blocks = Vec::with_capacity(n * n);
    for v in 0..n {
        for w in 0..n {
            let left_basis = left_map.block(v, w);
            let mut m = CMatrix::zeros(left_basis.len(), left_basis.len());
            for (col, &(b, pq, r)) in left_basis.iter().enumerate() {
                let (a, p, q) = xy_map.block(v, b)[pq];
                let qr = yz_map.index_of(a, w, b, q, r);
                let row = right_map.index_of(v, w, a, p, qr);
                m[(row, col)] = one;
            }
            blocks.push(m);
        }
    }
    CorrMorphism::new(left, right, blocks)
}
