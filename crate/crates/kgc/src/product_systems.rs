//! Skeletons of product systems over ℕᵏ.
//!
//! A product system of c₀(V)-correspondences is determined up to
//! isomorphism by its skeleton: the generator fibers Y₁..Y_k together
//! with the braiding isomorphisms T_{i,j}: Yᵢ⊗Yⱼ → Yⱼ⊗Yᵢ for i < j,
//! subject to the hexagonal equations when k ≥ 3. This module builds
//! skeletons from k-graph presentations, reconstructs arbitrary fibers
//! and structure maps in normal form, computes the ω invariant for
//! rank-2 one-dimensional systems, searches for skeleton isomorphisms,
//! and decides graph-realizability where an exact criterion exists.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::correspondences::{
    graph_correspondence, tensor, tensor_morphism, CorrError, CorrMorphism, Correspondence,
};
use crate::graphs::{DirectedGraph, Edge, GraphError, KGraphPresentation, SquareEnumerator};
use crate::linalg::{haar_unitary, polar_unitary, CMatrix};

/// Unitarity tolerance for stored braids and structural comparisons.
pub const STRUCTURAL_TOL: f64 = 1e-9;
/// Tolerance on |ω| = 1.
pub const OMEGA_TOL: f64 = 1e-12;
/// Proximal weight in the alternating unitary updates of the
/// isomorphism search; pure alternating maximization tends to lock
/// into two-cycles without it.
const ISO_DAMPING: f64 = 0.5;

#[derive(Debug, Error)]
pub enum SkeletonError {
    #[error("skeleton needs rank at least 1")]
    RankZero,
    #[error("fiber {0} has vertex count {1}, expected {2}")]
    VertexCountMismatch(usize, usize, usize),
    #[error("missing braid for colors ({0}, {1})")]
    MissingBraid(usize, usize),
    #[error("braid ({0}, {1}) does not map Y{0}⊗Y{1} to Y{1}⊗Y{0}")]
    BraidShapeMismatch(usize, usize),
    #[error("braid ({0}, {1}) is not unitary: defect {2:.3e}")]
    BraidNotUnitary(usize, usize, f64),
    #[error("invalid k-graph presentation: {0}")]
    InvalidPresentation(String),
    #[error("degree vector has length {0}, expected rank {1}")]
    BadDegree(usize, usize),
    #[error("omega needs k = 2, one vertex, and 1-dimensional fibers; {0}")]
    OmegaPrecondition(String),
    #[error("|omega| = {0} is not 1 within {OMEGA_TOL:e}")]
    OmegaNotUnimodular(f64),
    #[error("invalid sorting schedule: {0}")]
    BadSchedule(String),
    #[error("witness count {0} does not match rank {1}")]
    BadWitnessCount(usize, usize),
    #[error("witness {0} is not unitary or has wrong shape")]
    BadWitness(usize),
    #[error(transparent)]
    Corr(#[from] CorrError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// The skeleton (Y, T) of a product system over ℕᵏ: fibers Y₁..Y_k
/// and unitary braids T_{i,j}: Yᵢ⊗Yⱼ → Yⱼ⊗Yᵢ for i < j. Braids for
/// i > j are derived as inverses and never stored.
///
/// Construction enforces shapes and unitarity; the hexagonal
/// equations for k ≥ 3 are verified by [`hexagon_check`], which is
/// also usable on deliberately broken skeletons.
#[derive(Debug, Clone)]
pub struct Skeleton {
    fibers: Vec<Correspondence>,
    braids: BTreeMap<(usize, usize), CorrMorphism>,
}

impl Skeleton {
    pub fn new(
        fibers: Vec<Correspondence>,
        braids: BTreeMap<(usize, usize), CorrMorphism>,
    ) -> Result<Self, SkeletonError> {
        let k = fibers.len();
        if k == 0 {
            return Err(SkeletonError::RankZero);
        }
        let n = fibers[0].vertex_count();
        for (i, f) in fibers.iter().enumerate() {
            if f.vertex_count() != n {
                return Err(SkeletonError::VertexCountMismatch(i, f.vertex_count(), n));
            }
        }
        for i in 0..k {
            for j in (i + 1)..k {
                let t = braids
                    .get(&(i, j))
                    .ok_or(SkeletonError::MissingBraid(i, j))?;
                let (src, _) = tensor(&fibers[i], &fibers[j])?;
                let (tgt, _) = tensor(&fibers[j], &fibers[i])?;
                if !t.source().same_shape(&src) || !t.target().same_shape(&tgt) {
                    return Err(SkeletonError::BraidShapeMismatch(i, j));
                }
                let defect = t.unitarity_defect();
                if defect >= STRUCTURAL_TOL {
                    return Err(SkeletonError::BraidNotUnitary(i, j, defect));
                }
            }
        }
        Ok(Skeleton { fibers, braids })
    }

    /// The rank-2, single-vertex skeleton with 1-dimensional fibers
    /// and T_{1,2} = ω·Σ. Requires |ω| = 1.
    pub fn one_dimensional(omega: Complex64) -> Result<Self, SkeletonError> {
        if (omega.norm() - 1.0).abs() >= OMEGA_TOL {
            return Err(SkeletonError::OmegaNotUnimodular(omega.norm()));
        }
        let y = Correspondence::new(1, vec![vec![1]])?;
        let (src, _) = tensor(&y, &y)?;
        let t = CorrMorphism::new(
            src.clone(),
            src,
            vec![CMatrix::from_element(1, 1, omega)],
        )?;
        let mut braids = BTreeMap::new();
        braids.insert((0, 1), t);
        Skeleton::new(vec![y.clone(), y], braids)
    }

    pub fn rank(&self) -> usize {
        self.fibers.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.fibers[0].vertex_count()
    }

    pub fn fibers(&self) -> &[Correspondence] {
        &self.fibers
    }

    pub fn fiber_correspondence(&self, i: usize) -> &Correspondence {
        &self.fibers[i]
    }

    /// The stored braid T_{i,j} for i < j.
    pub fn braid(&self, i: usize, j: usize) -> &CorrMorphism {
        &self.braids[&(i, j)]
    }

    /// T_{i,j} for any i ≠ j, with T_{j,i} := T_{i,j}⁻¹ (= adjoint,
    /// braids being unitary).
    pub fn braid_any(&self, i: usize, j: usize) -> CorrMorphism {
        if i < j {
            self.braids[&(i, j)].clone()
        } else {
            self.braids[&(j, i)].adjoint()
        }
    }

    /// True when the ω invariant is defined: k = 2, one vertex, both
    /// fibers 1-dimensional.
    pub fn omega_eligible(&self) -> bool {
        self.rank() == 2
            && self.vertex_count() == 1
            && self.fibers[0].dim(0, 0) == 1
            && self.fibers[1].dim(0, 0) == 1
    }
}

// ---------------------------------------------------------------------------
// Normal-form words and lifted braid actions
// ---------------------------------------------------------------------------

/// A path through the factors of a word: `vertices` has one more entry
/// than the word, `indices[t]` picks a basis vector of factor t in
/// block (vertices[t], vertices[t+1]).
type Path = (Vec<usize>, Vec<usize>);

fn enumerate_paths(
    dims_seq: &[&Vec<Vec<usize>>],
    n: usize,
    v: usize,
    w: usize,
) -> Vec<Path> {
    if dims_seq.is_empty() {
        return if v == w {
            vec![(vec![v], vec![])]
        } else {
            vec![]
        };
    }
    let mut out = Vec::new();
    for u in 0..n {
        for p in 0..dims_seq[0][v][u] {
            for (mut verts, mut idxs) in enumerate_paths(&dims_seq[1..], n, u, w) {
                verts.insert(0, v);
                idxs.insert(0, p);
                out.push((verts, idxs));
            }
        }
    }
    out
}

fn mat_mul_usize(a: &[Vec<usize>], b: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = a.len();
    let mut c = vec![vec![0usize; n]; n];
    for v in 0..n {
        for w in 0..n {
            c[v][w] = (0..n).map(|u| a[v][u] * b[u][w]).sum();
        }
    }
    c
}

impl Skeleton {
    /// The sorted generator word 1^{m₁}…k^{m_k} of a degree vector
    /// (colors are 0-based here).
    pub fn word_of_degree(&self, degree: &[usize]) -> Result<Vec<usize>, SkeletonError> {
        if degree.len() != self.rank() {
            return Err(SkeletonError::BadDegree(degree.len(), self.rank()));
        }
        let mut word = Vec::new();
        for (color, &mult) in degree.iter().enumerate() {
            word.extend(std::iter::repeat(color).take(mult));
        }
        Ok(word)
    }

    /// The correspondence of a tensor word of fibers, with the
    /// normal-form path basis: block (v, w) is spanned by paths
    /// ordered lexicographically in (u₁, p₁, u₂, p₂, …, p_m). The
    /// empty word yields the base correspondence c₀(V).
    pub fn word_correspondence(&self, word: &[usize]) -> Correspondence {
        let n = self.vertex_count();
        let mut dims: Vec<Vec<usize>> = (0..n)
            .map(|v| (0..n).map(|w| usize::from(v == w)).collect())
            .collect();
        for &c in word {
            dims = mat_mul_usize(&dims, self.fibers[c].dims());
        }
        Correspondence::new(n, dims).expect("square dims")
    }

    fn word_paths(&self, word: &[usize], v: usize, w: usize) -> Vec<Path> {
        let dims_seq: Vec<_> = word.iter().map(|&c| self.fibers[c].dims()).collect();
        enumerate_paths(&dims_seq, self.vertex_count(), v, w)
    }

    /// Applies the braid swapping positions (pos, pos+1) of `word`,
    /// tensored with identities elsewhere. Returns the lifted morphism
    /// and the swapped word.
    fn swap_morphism(
        &self,
        word: &[usize],
        pos: usize,
    ) -> Result<(CorrMorphism, Vec<usize>), SkeletonError> {
        let a = word[pos];
        let b = word[pos + 1];
        debug_assert_ne!(a, b, "swapping equal colors is never scheduled");
        let pair_map = self.braid_any(a, b);
        let mut new_word = word.to_vec();
        new_word.swap(pos, pos + 1);

        let n = self.vertex_count();
        let src_corr = self.word_correspondence(word);
        let tgt_corr = self.word_correspondence(&new_word);
        let (_, src_pair_basis) = tensor(&self.fibers[a], &self.fibers[b])?;
        let (_, tgt_pair_basis) = tensor(&self.fibers[b], &self.fibers[a])?;

        let mut blocks = Vec::with_capacity(n * n);
        for v in 0..n {
            for w in 0..n {
                let src_paths = self.word_paths(word, v, w);
                let tgt_paths = self.word_paths(&new_word, v, w);
                let tgt_index: HashMap<&Path, usize> =
                    tgt_paths.iter().zip(0..).collect();
                let mut m = CMatrix::zeros(tgt_paths.len(), src_paths.len());
                for (col, path) in src_paths.iter().enumerate() {
                    let (verts, idxs) = path;
                    let x = verts[pos];
                    let y = verts[pos + 2];
                    let col_in_pair =
                        src_pair_basis.index_of(x, y, verts[pos + 1], idxs[pos], idxs[pos + 1]);
                    for (row_in_pair, &(u2, p2, q2)) in
                        tgt_pair_basis.block(x, y).iter().enumerate()
                    {
                        let coeff = pair_map.block(x, y)[(row_in_pair, col_in_pair)];
                        if coeff == Complex64::new(0.0, 0.0) {
                            continue;
                        }
                        let mut tv = verts.clone();
                        let mut ti = idxs.clone();
                        tv[pos + 1] = u2;
                        ti[pos] = p2;
                        ti[pos + 1] = q2;
                        let key = (tv, ti);
                        let row = tgt_index[&key];
                        m[(row, col)] += coeff;
                    }
                }
                blocks.push(m);
            }
        }
        Ok((CorrMorphism::new(src_corr, tgt_corr, blocks)?, new_word))
    }

    /// Composes the lifted swaps at the given positions, left to right.
    fn braid_route(
        &self,
        word: &[usize],
        swaps: &[usize],
    ) -> Result<CorrMorphism, SkeletonError> {
        let mut cur_word = word.to_vec();
        let mut cur = CorrMorphism::identity(&self.word_correspondence(word));
        for &pos in swaps {
            let (m, next_word) = self.swap_morphism(&cur_word, pos)?;
            cur = m.compose(&cur)?;
            cur_word = next_word;
        }
        Ok(cur)
    }
}

// ---------------------------------------------------------------------------
// Skeleton extraction from k-graphs
// ---------------------------------------------------------------------------

/// The skeleton of the k-graph correspondence of a presentation:
/// Yᵢ = X_{Eᵢ}, and T_{i,j} is the 0/1 permutation matrix sending
/// χ_e⊗χ_f to χ_{f̃}⊗χ_{ẽ} with (f̃, ẽ) = θ_{i,j}(e, f).
pub fn skeleton_from_kgraph(p: &KGraphPresentation) -> Result<Skeleton, SkeletonError> {
    let validation = p.validate();
    if !validation.is_valid() {
        return Err(SkeletonError::InvalidPresentation(
            validation
                .violations
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join("; "),
        ));
    }
    let k = p.rank();
    let n = p.vertex_count();
    let fibers: Vec<_> = (0..k)
        .map(|i| graph_correspondence(p.skeleton_graph(i)))
        .collect();
    let one = Complex64::new(1.0, 0.0);
    let mut braids = BTreeMap::new();
    for i in 0..k {
        for j in (i + 1)..k {
            let ei = p.skeleton_graph(i);
            let ej = p.skeleton_graph(j);
            let (src, src_map) = tensor(&fibers[i], &fibers[j])?;
            let (tgt, tgt_map) = tensor(&fibers[j], &fibers[i])?;
            let mut blocks = Vec::with_capacity(n * n);
            for v in 0..n {
                for w in 0..n {
                    let src_basis = src_map.block(v, w);
                    let tgt_basis = tgt_map.block(v, w);
                    let mut m = CMatrix::zeros(tgt_basis.len(), src_basis.len());
                    for (col, &(u, pp, qq)) in src_basis.iter().enumerate() {
                        let e = ei.block_edges(v, u)[pp];
                        let f = ej.block_edges(u, w)[qq];
                        let (f_tilde, e_tilde) = p.factor(i, j, e, f)?;
                        let u2 = ei.edge(e_tilde)?.range;
                        let p2 = ej
                            .block_edges(v, u2)
                            .iter()
                            .position(|&x| x == f_tilde)
                            .expect("range/source preserved");
                        let q2 = ei
                            .block_edges(u2, w)
                            .iter()
                            .position(|&x| x == e_tilde)
                            .expect("range/source preserved");
                        let row = tgt_map.index_of(v, w, u2, p2, q2);
                        m[(row, col)] = one;
                    }
                    blocks.push(m);
                }
            }
            braids.insert((i, j), CorrMorphism::new(src, tgt, blocks)?);
        }
    }
    Skeleton::new(fibers, braids)
}

// ---------------------------------------------------------------------------
// Hexagon verification
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct HexagonReport {
    /// (i, j, l) with the max-entry difference of the two hexagon sides.
    pub residuals: Vec<((usize, usize, usize), f64)>,
    pub max_residual: f64,
    pub pass: bool,
}

/// Verifies the hexagonal equations on all color triples i < j < l.
/// For k ≤ 2 there are none and the check passes vacuously.
pub fn hexagon_check(s: &Skeleton, tol: f64) -> Result<HexagonReport, SkeletonError> {
    let k = s.rank();
    let mut residuals = Vec::new();
    let mut max_residual: f64 = 0.0;
    for i in 0..k {
        for j in (i + 1)..k {
            for l in (j + 1)..k {
                let word = vec![i, j, l];
                // (T_{j,l}⊗id)(id⊗T_{i,l})(T_{i,j}⊗id)
                let lhs = s.braid_route(&word, &[0, 1, 0])?;
                // (id⊗T_{i,j})(T_{i,l}⊗id)(id⊗T_{j,l})
                let rhs = s.braid_route(&word, &[1, 0, 1])?;
                let r = lhs.max_entry_diff(&rhs);
                max_residual = max_residual.max(r);
                residuals.push(((i, j, l), r));
            }
        }
    }
    Ok(HexagonReport {
        residuals,
        max_residual,
        pass: max_residual < tol,
    })
}

// ---------------------------------------------------------------------------
// Fibers and structure maps
// ---------------------------------------------------------------------------

/// A fiber X_m realized in normal form: the ascending generator word
/// and the correspondence it spans.
#[derive(Debug, Clone)]
pub struct FiberView {
    pub degree: Vec<usize>,
    pub word: Vec<usize>,
    pub correspondence: Correspondence,
}

/// The degree-m fiber; m = 0 yields the base correspondence c₀(V).
pub fn fiber(s: &Skeleton, degree: &[usize]) -> Result<FiberView, SkeletonError> {
    let word = s.word_of_degree(degree)?;
    let correspondence = s.word_correspondence(&word);
    Ok(FiberView {
        degree: degree.to_vec(),
        word,
        correspondence,
    })
}

/// The canonical sorting schedule of a word: repeatedly swap the
/// leftmost adjacent out-of-order pair (stable bubble sort).
pub fn canonical_schedule(word: &[usize]) -> Vec<usize> {
    let mut w = word.to_vec();
    let mut swaps = Vec::new();
    loop {
        match (0..w.len().saturating_sub(1)).find(|&t| w[t] > w[t + 1]) {
            Some(t) => {
                w.swap(t, t + 1);
                swaps.push(t);
            }
            None => return swaps,
        }
    }
}

/// β_{m,n}: fiber(m)⊗fiber(n) → fiber(m+n), computed by sorting the
/// concatenated word with the canonical schedule and composing the
/// lifted braids. The source identification fiber(m)⊗fiber(n) ↔
/// concatenated word is the identity in the path bases.
pub fn structure_map(
    s: &Skeleton,
    m: &[usize],
    n: &[usize],
) -> Result<CorrMorphism, SkeletonError> {
    let mut word = s.word_of_degree(m)?;
    word.extend(s.word_of_degree(n)?);
    let schedule = canonical_schedule(&word);
    s.braid_route(&word, &schedule)
}

/// β_{m,n} along a caller-chosen sorting schedule; every swap must hit
/// a strictly out-of-order adjacent pair and the schedule must fully
/// sort the concatenated word.
pub fn structure_map_with_schedule(
    s: &Skeleton,
    m: &[usize],
    n: &[usize],
    schedule: &[usize],
) -> Result<CorrMorphism, SkeletonError> {
    let mut word = s.word_of_degree(m)?;
    word.extend(s.word_of_degree(n)?);
    let mut check = word.clone();
    for &t in schedule {
        if t + 1 >= check.len() {
            return Err(SkeletonError::BadSchedule(format!(
                "swap position {t} out of range"
            )));
        }
        if check[t] <= check[t + 1] {
            return Err(SkeletonError::BadSchedule(format!(
                "swap at {t} does not hit an out-of-order pair"
            )));
        }
        check.swap(t, t + 1);
    }
    if check.windows(2).any(|p| p[0] > p[1]) {
        return Err(SkeletonError::BadSchedule(
            "schedule does not sort the word".into(),
        ));
    }
    s.braid_route(&word, schedule)
}

/// Max-entry difference of the two associativity routes
/// β_{m+n,p}∘(β_{m,n}⊗id_p) and β_{m,n+p}∘(id_m⊗β_{n,p}), each
/// computed as its own composition of lifted braids.
pub fn associativity_residual(
    s: &Skeleton,
    m: &[usize],
    n: &[usize],
    p: &[usize],
) -> Result<f64, SkeletonError> {
    let wm = s.word_of_degree(m)?;
    let wn = s.word_of_degree(n)?;
    let wp = s.word_of_degree(p)?;
    let full: Vec<usize> = wm.iter().chain(&wn).chain(&wp).copied().collect();
    let mn_sum: Vec<usize> = m.iter().zip(n).map(|(a, b)| a + b).collect();
    let np_sum: Vec<usize> = n.iter().zip(p).map(|(a, b)| a + b).collect();

    // β_{m,n}⊗id_p: sort the (m, n) prefix in place
    let prefix: Vec<usize> = wm.iter().chain(&wn).copied().collect();
    let first_lhs = s.braid_route(&full, &canonical_schedule(&prefix))?;
    let lhs = structure_map(s, &mn_sum, p)?.compose(&first_lhs)?;

    // id_m⊗β_{n,p}: sort the (n, p) suffix in place
    let suffix: Vec<usize> = wn.iter().chain(&wp).copied().collect();
    let offset = wm.len();
    let shifted: Vec<usize> = canonical_schedule(&suffix)
        .into_iter()
        .map(|t| t + offset)
        .collect();
    let first_rhs = s.braid_route(&full, &shifted)?;
    let rhs = structure_map(s, m, &np_sum)?.compose(&first_rhs)?;

    Ok(lhs.max_entry_diff(&rhs))
}

// ---------------------------------------------------------------------------
// The ω invariant
// ---------------------------------------------------------------------------

/// The unimodular scalar with T_{1,2} = ω·Σ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaInvariant {
    pub value: Complex64,
}

/// ω of a rank-2, single-vertex skeleton with 1-dimensional fibers:
/// the single entry of T_{1,2} relative to the normative bases.
pub fn omega(s: &Skeleton) -> Result<OmegaInvariant, SkeletonError> {
    if !s.omega_eligible() {
        return Err(SkeletonError::OmegaPrecondition(format!(
            "got k = {}, {} vertices, fiber dims {:?} and {:?}",
            s.rank(),
            s.vertex_count(),
            s.fibers[0].dims(),
            s.fibers().get(1).map(|f| f.dims().clone()).unwrap_or_default(),
        )));
    }
    let value = s.braid(0, 1).block(0, 0)[(0, 0)];
    if (value.norm() - 1.0).abs() >= OMEGA_TOL {
        return Err(SkeletonError::OmegaNotUnimodular(value.norm()));
    }
    Ok(OmegaInvariant { value })
}

// ---------------------------------------------------------------------------
// Skeleton isomorphism
// ---------------------------------------------------------------------------

/// Conjugates a skeleton by fiber-wise unitaries θ₁..θ_k:
/// T'_{i,j} = (θⱼ⊗θᵢ)∘T_{i,j}∘(θᵢ⊗θⱼ)⁻¹. The result is the skeleton
/// of an isomorphic product system.
pub fn conjugate(s: &Skeleton, thetas: &[CorrMorphism]) -> Result<Skeleton, SkeletonError> {
    if thetas.len() != s.rank() {
        return Err(SkeletonError::BadWitnessCount(thetas.len(), s.rank()));
    }
    for (i, th) in thetas.iter().enumerate() {
        if !th.source().same_shape(&s.fibers[i]) || !th.is_unitary(STRUCTURAL_TOL) {
            return Err(SkeletonError::BadWitness(i));
        }
    }
    let fibers: Vec<_> = thetas.iter().map(|th| th.target().clone()).collect();
    let mut braids = BTreeMap::new();
    for i in 0..s.rank() {
        for j in (i + 1)..s.rank() {
            let left = tensor_morphism(&thetas[j], &thetas[i])?;
            let right = tensor_morphism(&thetas[i], &thetas[j])?;
            let t = left
                .compose(s.braid(i, j))?
                .compose(&right.adjoint())?;
            braids.insert((i, j), t);
        }
    }
    Skeleton::new(fibers, braids)
}

/// Haar-random fiber-wise unitaries Yᵢ → Yᵢ, one independent block per
/// nonzero (v, w).
pub fn random_fiber_unitaries(
    s: &Skeleton,
    rng: &mut ChaCha8Rng,
) -> Vec<CorrMorphism> {
    s.fibers
        .iter()
        .map(|y| {
            CorrMorphism::from_fn(y.clone(), y.clone(), |v, w| haar_unitary(y.dim(v, w), rng))
            .expect("square blocks")
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsoStatus {
    Isomorphic,
    NotIsomorphic,
    Unknown,
}

#[derive(Debug, Clone)]
pub struct IsoVerdict {
    pub status: IsoStatus,
    pub witness: Option<Vec<CorrMorphism>>,
    pub residual: Option<f64>,
    pub reason: String,
}

#[derive(Debug, Clone, Copy)]
pub struct IsoSearchOptions {
    pub restarts: usize,
    pub max_iter: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for IsoSearchOptions {
    fn default() -> Self {
        IsoSearchOptions {
            restarts: 20,
            max_iter: 500,
            tol: 1e-6,
            seed: 0,
        }
    }
}

/// Max over i<j of ‖(θⱼ⊗θᵢ)T_{i,j} − R_{i,j}(θᵢ⊗θⱼ)‖_max.
pub fn witness_residual(
    s: &Skeleton,
    other: &Skeleton,
    thetas: &[CorrMorphism],
) -> Result<f64, SkeletonError> {
    let mut worst: f64 = 0.0;
    for i in 0..s.rank() {
        for j in (i + 1)..s.rank() {
            let lhs = tensor_morphism(&thetas[j], &thetas[i])?.compose(s.braid(i, j))?;
            let rhs = other
                .braid(i, j)
                .compose(&tensor_morphism(&thetas[i], &thetas[j])?)?;
            worst = worst.max(lhs.max_entry_diff(&rhs));
        }
    }
    Ok(worst)
}

fn identity_witness(s: &Skeleton) -> Vec<CorrMorphism> {
    s.fibers.iter().map(CorrMorphism::identity).collect()
}

/// Adds the partial traces of a pair-tensor alignment matrix `g`
/// against the fixed factor to the per-block accumulators of the free
/// factor. `g` is indexed by `basis` on both sides; when
/// `fixed_in_first` the fixed unitary occupies the first tensor slot
/// and the free factor the second, otherwise the reverse.
fn accumulate_partial_traces(
    g: &CorrMorphism,
    basis: &crate::correspondences::TensorBasisMap,
    n: usize,
    fixed: &CorrMorphism,
    fixed_in_first: bool,
    acc: &mut [CMatrix],
) {
    for v in 0..n {
        for w in 0..n {
            let triples = basis.block(v, w);
            let gb = g.block(v, w);
            for (row, &(u, pp, qp)) in triples.iter().enumerate() {
                for (col, &(u2, p, q)) in triples.iter().enumerate() {
                    if u != u2 {
                        continue;
                    }
                    if fixed_in_first {
                        acc[u * n + w][(qp, q)] +=
                            gb[(row, col)] * fixed.block(v, u)[(pp, p)].conj();
                    } else {
                        acc[v * n + u][(pp, p)] +=
                            gb[(row, col)] * fixed.block(u, w)[(qp, q)].conj();
                    }
                }
            }
        }
    }
}

/// One alternating-optimization update of θᵢ: for each braid pair the
/// alignment objective is linearized by freezing the other occurrences
/// at their current values, partial traces from both occurrences of θᵢ
/// are accumulated, and the maximizer over the unitary group is the
/// block-wise polar factor. A proximal term `damping·‖M‖_F·θᵢ` keeps
/// successive iterates from overshooting into two-cycles.
fn update_theta(
    s: &Skeleton,
    other: &Skeleton,
    thetas: &mut [CorrMorphism],
    i: usize,
    damping: f64,
) -> Result<(), SkeletonError> {
    let n = s.vertex_count();
    let k = s.rank();
    let yi = &s.fibers[i];
    let mut acc: Vec<CMatrix> = (0..n * n)
        .map(|b| {
            let (v, w) = (b / n, b % n);
            CMatrix::zeros(yi.dim(v, w), yi.dim(v, w))
        })
        .collect();
    for j in 0..k {
        if j == i {
            continue;
        }
        if i < j {
            // θᵢ in the second slot of (θⱼ⊗θᵢ):
            // maximize Re⟨θⱼ⊗θᵢ, R_{i,j}(θᵢ⊗θⱼ)T_{i,j}†⟩
            let g = other
                .braid(i, j)
                .compose(&tensor_morphism(&thetas[i], &thetas[j])?)?
                .compose(&s.braid(i, j).adjoint())?;
            let (_, basis) = tensor(&s.fibers[j], &s.fibers[i])?;
            accumulate_partial_traces(&g, &basis, n, &thetas[j], true, &mut acc);
            // θᵢ in the first slot of (θᵢ⊗θⱼ):
            // maximize Re⟨θᵢ⊗θⱼ, R_{i,j}†(θⱼ⊗θᵢ)T_{i,j}⟩
            let g = other
                .braid(i, j)
                .adjoint()
                .compose(&tensor_morphism(&thetas[j], &thetas[i])?)?
                .compose(s.braid(i, j))?;
            let (_, basis) = tensor(&s.fibers[i], &s.fibers[j])?;
            accumulate_partial_traces(&g, &basis, n, &thetas[j], false, &mut acc);
        } else {
            // pair (j, i) with j < i; θᵢ in the first slot of (θᵢ⊗θⱼ):
            // maximize Re⟨θᵢ⊗θⱼ, R_{j,i}(θⱼ⊗θᵢ)T_{j,i}†⟩
            let g = other
                .braid(j, i)
                .compose(&tensor_morphism(&thetas[j], &thetas[i])?)?
                .compose(&s.braid(j, i).adjoint())?;
            let (_, basis) = tensor(&s.fibers[i], &s.fibers[j])?;
            accumulate_partial_traces(&g, &basis, n, &thetas[j], false, &mut acc);
            // θᵢ in the second slot of (θⱼ⊗θᵢ):
            // maximize Re⟨θⱼ⊗θᵢ, R_{j,i}†(θᵢ⊗θⱼ)T_{j,i}⟩
            let g = other
                .braid(j, i)
                .adjoint()
                .compose(&tensor_morphism(&thetas[i], &thetas[j])?)?
                .compose(s.braid(j, i))?;
            let (_, basis) = tensor(&s.fibers[j], &s.fibers[i])?;
            accumulate_partial_traces(&g, &basis, n, &thetas[j], true, &mut acc);
        }
    }
    let updated = CorrMorphism::from_fn(yi.clone(), other.fibers[i].clone(), |v, w| {
        let m = &acc[v * n + w];
        if m.nrows() == 0 {
            return m.clone();
        }
        let scale = m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let damped = m + thetas[i].block(v, w) * Complex64::new(damping * scale, 0.0);
        polar_unitary(&damped)
    })?;
    thetas[i] = updated;
    Ok(())
}

/// Decides whether two skeletons are isomorphic.
///
/// Exact fast paths: fiber dimension mismatch refutes isomorphism,
/// and for rank-2 one-dimensional systems the ω invariant decides
/// completely. Otherwise a seeded alternating unitary search looks for
/// a witness; failure to find one is reported as UNKNOWN, never as a
/// refutation.
pub fn skeleton_iso_search(
    s: &Skeleton,
    other: &Skeleton,
    opts: IsoSearchOptions,
) -> Result<IsoVerdict, SkeletonError> {
    if s.rank() != other.rank() {
        return Ok(IsoVerdict {
            status: IsoStatus::NotIsomorphic,
            witness: None,
            residual: None,
            reason: format!("rank mismatch: {} vs {}", s.rank(), other.rank()),
        });
    }
    if s.vertex_count() != other.vertex_count() {
        return Ok(IsoVerdict {
            status: IsoStatus::NotIsomorphic,
            witness: None,
            residual: None,
            reason: format!(
                "vertex count mismatch: {} vs {}",
                s.vertex_count(),
                other.vertex_count()
            ),
        });
    }
    for i in 0..s.rank() {
        if s.fibers[i].dims() != other.fibers[i].dims() {
            return Ok(IsoVerdict {
                status: IsoStatus::NotIsomorphic,
                witness: None,
                residual: None,
                reason: format!("fiber {i} dimension matrices differ"),
            });
        }
    }
    if s.rank() == 1 {
        // no braids: any fiber-wise unitary is a witness
        return Ok(IsoVerdict {
            status: IsoStatus::Isomorphic,
            witness: Some(identity_witness(s)),
            residual: Some(0.0),
            reason: "rank 1: equal fiber dimensions suffice".into(),
        });
    }
    if s.omega_eligible() && other.omega_eligible() {
        let w1 = omega(s)?.value;
        let w2 = omega(other)?.value;
        let d = (w1 - w2).norm();
        return if d < STRUCTURAL_TOL {
            let thetas = identity_witness(s);
            let residual = witness_residual(s, other, &thetas)?;
            Ok(IsoVerdict {
                status: IsoStatus::Isomorphic,
                witness: Some(thetas),
                residual: Some(residual),
                reason: "omega invariants agree".into(),
            })
        } else {
            Ok(IsoVerdict {
                status: IsoStatus::NotIsomorphic,
                witness: None,
                residual: None,
                reason: format!("omega invariants differ by {d:.3e}"),
            })
        };
    }

    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut best_residual = f64::INFINITY;
    for restart in 0..opts.restarts {
        // the first restart starts at the identity, the rest at Haar
        // random unitaries
        let mut thetas = if restart == 0 {
            identity_witness(s)
        } else {
            random_fiber_unitaries(s, &mut rng)
        };
        let mut last = witness_residual(s, other, &thetas)?;
        for _ in 0..opts.max_iter {
            for i in 0..s.rank() {
                update_theta(s, other, &mut thetas, i, ISO_DAMPING)?;
            }
            let residual = witness_residual(s, other, &thetas)?;
            if residual < opts.tol {
                // soundness is re-checked unconditionally
                debug_assert!(witness_residual(s, other, &thetas)? < opts.tol);
                return Ok(IsoVerdict {
                    status: IsoStatus::Isomorphic,
                    witness: Some(thetas),
                    residual: Some(residual),
                    reason: format!("witness found on restart {restart}"),
                });
            }
            if last - residual < 1e-10 {
                break;
            }
            last = residual;
        }
        best_residual = best_residual.min(last);
    }
    Ok(IsoVerdict {
        status: IsoStatus::Unknown,
        witness: None,
        residual: Some(best_residual),
        reason: format!(
            "no witness after {} restarts; best residual {best_residual:.3e}",
            opts.restarts
        ),
    })
}

// ---------------------------------------------------------------------------
// Realizability
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub enum Realizability {
    Realizable(KGraphPresentation),
    NotRealizable(String),
    Unknown(String),
}

#[derive(Debug, Clone, Copy)]
pub struct RealizabilityOptions {
    pub max_candidates: usize,
    pub iso: IsoSearchOptions,
}

impl Default for RealizabilityOptions {
    fn default() -> Self {
        RealizabilityOptions {
            max_candidates: 1_000_000,
            iso: IsoSearchOptions::default(),
        }
    }
}

fn color_prefix(i: usize) -> String {
    match i {
        0 => "e".into(),
        1 => "f".into(),
        2 => "g".into(),
        3 => "h".into(),
        _ => format!("c{i}"),
    }
}

/// The graph with dims[v][w] edges of range v and source w, edges
/// ordered lexicographically in (v, w, p).
pub fn canonical_graph(dims: &[Vec<usize>], prefix: &str) -> DirectedGraph {
    let n = dims.len();
    let mut edges = Vec::new();
    for v in 0..n {
        for w in 0..n {
            for p in 0..dims[v][w] {
                edges.push(Edge::new(format!("{prefix}{v}_{w}_{p}"), v, w));
            }
        }
    }
    DirectedGraph::new(n, edges).expect("dims are square")
}

/// Decides whether a skeleton is the skeleton of a k-graph
/// correspondence.
///
/// Rank 1 is always realizable; the rank-2 one-dimensional case is
/// decided exactly by ω = 1; general rank 2 is decided by enumerating
/// candidate presentations over the forced skeleton graphs. Higher
/// ranks have no known decision procedure and report UNKNOWN.
pub fn realizability(
    s: &Skeleton,
    opts: RealizabilityOptions,
) -> Result<Realizability, SkeletonError> {
    if s.rank() == 1 {
        let graph = canonical_graph(s.fibers[0].dims(), "e");
        let p = KGraphPresentation::new(vec![graph], BTreeMap::new())?;
        return Ok(Realizability::Realizable(p));
    }
    if s.omega_eligible() {
        let w = omega(s)?.value;
        let d = (w - Complex64::new(1.0, 0.0)).norm();
        if d < STRUCTURAL_TOL {
            let e1 = canonical_graph(s.fibers[0].dims(), &color_prefix(0));
            let e2 = canonical_graph(s.fibers[1].dims(), &color_prefix(1));
            let mut squares = BTreeMap::new();
            squares.insert((0, 1), vec![0]);
            let p = KGraphPresentation::new(vec![e1, e2], squares)?;
            return Ok(Realizability::Realizable(p));
        }
        return Ok(Realizability::NotRealizable(format!(
            "omega = {w} differs from 1 by {d:.3e}"
        )));
    }
    if s.rank() > 2 {
        return Ok(Realizability::Unknown(
            "no decision procedure for rank > 2".into(),
        ));
    }

    // general rank 2: enumerate presentations over the forced skeleton
    // graphs and compare skeletons
    let e1 = canonical_graph(s.fibers[0].dims(), &color_prefix(0));
    let e2 = canonical_graph(s.fibers[1].dims(), &color_prefix(1));
    let enumerator = SquareEnumerator::new(&e1, &e2)?;
    let mut any_unknown = false;
    let mut count = 0usize;
    for square in enumerator {
        if count >= opts.max_candidates {
            return Ok(Realizability::Unknown(format!(
                "candidate cap of {} hit",
                opts.max_candidates
            )));
        }
        count += 1;
        let mut squares = BTreeMap::new();
        squares.insert((0, 1), square);
        let p = KGraphPresentation::new(vec![e1.clone(), e2.clone()], squares)?;
        let candidate = skeleton_from_kgraph(&p)?;
        let verdict = skeleton_iso_search(s, &candidate, opts.iso)?;
        match verdict.status {
            IsoStatus::Isomorphic => return Ok(Realizability::Realizable(p)),
            IsoStatus::NotIsomorphic => {}
            IsoStatus::Unknown => any_unknown = true,
        }
    }
    if any_unknown {
        Ok(Realizability::Unknown(format!(
            "{count} candidates exhausted with at least one undecided comparison"
        )))
    } else {
        Ok(Realizability::NotRealizable(format!(
            "all {count} candidate presentations refuted by exact criteria"
        )))
    }
}
