//! Property tests for the structural invariants: adjacency/dimension
//! arithmetic, associativity up to canonical identifications,
//! enumeration counts, and invariance of omega.

use std::collections::{BTreeMap, HashSet};

use kgc::correspondences::{tensor, Correspondence};
use kgc::graphs::{fibred_product, DirectedGraph, Edge, KGraphPresentation, SquareEnumerator};
use kgc::product_systems::{omega, Skeleton};
use num_complex::Complex64;
use proptest::prelude::*;

fn same_vertex_graphs(
    max_n: usize,
    max_edges: usize,
    count: usize,
) -> impl Strategy<Value = Vec<DirectedGraph>> {
    (1..=max_n).prop_flat_map(move |n| {
        prop::collection::vec(
            prop::collection::vec((0..n, 0..n), 0..=max_edges),
            count,
        )
        .prop_map(move |graphs| {
            graphs
                .into_iter()
                .enumerate()
                .map(|(gi, pairs)| {
                    let edges = pairs
                        .into_iter()
                        .enumerate()
                        .map(|(i, (r, s))| Edge::new(format!("g{gi}_{i}"), r, s))
                        .collect();
                    DirectedGraph::new(n, edges).unwrap()
                })
                .collect()
        })
    })
}

fn mat_mul(a: &[Vec<usize>], b: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = a.len();
    (0..n)
        .map(|v| (0..n).map(|w| (0..n).map(|u| a[v][u] * b[u][w]).sum()).collect())
        .collect()
}

fn factorial(k: usize) -> u128 {
    (1..=k as u128).product()
}

proptest! {
    #[test]
    fn fibred_product_adjacency_is_matrix_product(
        graphs in same_vertex_graphs(4, 6, 2)
    ) {
        let (e, f) = (&graphs[0], &graphs[1]);
        let ef = fibred_product(e, f).unwrap();
        let expected = mat_mul(&e.adjacency_matrix(), &f.adjacency_matrix());
        prop_assert_eq!(ef.base().adjacency_matrix(), expected.clone());
        let count: usize = expected.iter().flatten().sum();
        prop_assert_eq!(ef.edge_count(), count);
    }

    #[test]
    fn fibred_product_is_associative(
        graphs in same_vertex_graphs(4, 6, 3)
    ) {
        let (e, f, g) = (&graphs[0], &graphs[1], &graphs[2]);
        let ef = fibred_product(e, f).unwrap();
        let ef_g = fibred_product(ef.base(), g).unwrap();
        let fg = fibred_product(f, g).unwrap();
        let e_fg = fibred_product(e, fg.base()).unwrap();
        prop_assert_eq!(ef_g.edge_count(), e_fg.edge_count());
        // the canonical map ((e,f),g) -> (e,(f,g)) is a range/source
        // preserving bijection
        let mut seen = HashSet::new();
        for idx in 0..ef_g.edge_count() {
            let (ef_idx, g_idx) = ef_g.pair(idx);
            let (e_idx, f_idx) = ef.pair(ef_idx);
            let fg_idx = fg.index_of(f_idx, g_idx).unwrap();
            let idx2 = e_fg.index_of(e_idx, fg_idx).unwrap();
            let lhs = &ef_g.base().edges()[idx];
            let rhs = &e_fg.base().edges()[idx2];
            prop_assert_eq!(lhs.range, rhs.range);
            prop_assert_eq!(lhs.source, rhs.source);
            prop_assert!(seen.insert(idx2));
        }
    }

    #[test]
    fn enumeration_count_matches_factorial_product(
        graphs in same_vertex_graphs(3, 3, 2)
    ) {
        let (e, f) = (&graphs[0], &graphs[1]);
        let forward = mat_mul(&e.adjacency_matrix(), &f.adjacency_matrix());
        let backward = mat_mul(&f.adjacency_matrix(), &e.adjacency_matrix());
        let squares: Vec<_> = SquareEnumerator::new(e, f).unwrap().collect();
        if forward == backward {
            let expected: u128 = forward.iter().flatten().map(|&c| factorial(c)).product();
            prop_assert_eq!(squares.len() as u128, expected);
        } else {
            prop_assert!(squares.is_empty());
        }
    }

    #[test]
    fn every_two_graph_with_bijective_squares_is_valid(
        graphs in same_vertex_graphs(3, 3, 2),
        pick in any::<prop::sample::Index>()
    ) {
        let (e, f) = (&graphs[0], &graphs[1]);
        let squares: Vec<_> = SquareEnumerator::new(e, f)
            .unwrap()
            .collect_limited(500)
            .0;
        prop_assume!(!squares.is_empty());
        let sq = squares[pick.index(squares.len())].clone();
        let mut map = BTreeMap::new();
        map.insert((0, 1), sq);
        let p = KGraphPresentation::new(vec![e.clone(), f.clone()], map).unwrap();
        prop_assert!(p.validate().is_valid());
    }

    #[test]
    fn tensor_dims_is_matrix_product(
        n in 1usize..=4,
        seed in any::<u64>()
    ) {
        // derive two dims matrices from the seed
        let mut state = seed;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) as usize % 4
        };
        let a: Vec<Vec<usize>> = (0..n).map(|_| (0..n).map(|_| next()).collect()).collect();
        let b: Vec<Vec<usize>> = (0..n).map(|_| (0..n).map(|_| next()).collect()).collect();
        let x = Correspondence::new(n, a.clone()).unwrap();
        let y = Correspondence::new(n, b.clone()).unwrap();
        let (xy, _) = tensor(&x, &y).unwrap();
        prop_assert_eq!(xy.dims(), &mat_mul(&a, &b));
    }

    #[test]
    fn omega_is_invariant_under_phase_conjugation(
        angle in 0.0..std::f64::consts::TAU,
        phase1 in 0.0..std::f64::consts::TAU,
        phase2 in 0.0..std::f64::consts::TAU
    ) {
        let w = Complex64::from_polar(1.0, angle);
        let s = Skeleton::one_dimensional(w).unwrap();
        let thetas = vec![
            phase_morphism(&s, 0, phase1),
            phase_morphism(&s, 1, phase2),
        ];
        let conj = kgc::product_systems::conjugate(&s, &thetas).unwrap();
        let w2 = omega(&conj).unwrap().value;
        prop_assert!((w - w2).norm() < 1e-12);
    }
}

fn phase_morphism(
    s: &Skeleton,
    i: usize,
    angle: f64,
) -> kgc::correspondences::CorrMorphism {
    let y = &s.fibers()[i];
    kgc::correspondences::CorrMorphism::from_fn(y.clone(), y.clone(), |v, w| {
        kgc::linalg::CMatrix::from_element(
            y.dim(v, w),
            y.dim(v, w),
            Complex64::from_polar(1.0, angle),
        )
    })
    .unwrap()
}
