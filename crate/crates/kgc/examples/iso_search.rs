//! Deciding skeleton isomorphism: the exact ω criterion for
//! 1-dimensional rank-2 systems, and the seeded unitary search for
//! higher-dimensional fibers.

use kgc::product_systems::{
    conjugate, random_fiber_unitaries, skeleton_from_kgraph, skeleton_iso_search, IsoSearchOptions,
    IsoStatus, Skeleton,
};
use kgc::graphs::{DirectedGraph, Edge, KGraphPresentation, SquareEnumerator};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

fn main() {
    // exact: omega is a complete invariant, so omega = 1 vs omega = -1
    // refutes isomorphism without any search
    let s1 = Skeleton::one_dimensional(Complex64::new(1.0, 0.0)).unwrap();
    let s2 = Skeleton::one_dimensional(Complex64::new(-1.0, 0.0)).unwrap();
    let v = skeleton_iso_search(&s1, &s2, IsoSearchOptions::default()).unwrap();
    println!("omega 1 vs omega -1: {:?} ({})", v.status, v.reason);

    // numerical: conjugate a 2-dimensional skeleton by hidden Haar
    // unitaries and ask the search to recover a witness
    let e1 = DirectedGraph::new(1, vec![Edge::new("a", 0, 0), Edge::new("b", 0, 0)]).unwrap();
    let e2 = DirectedGraph::new(1, vec![Edge::new("f", 0, 0), Edge::new("g", 0, 0)]).unwrap();
    let sq = SquareEnumerator::new(&e1, &e2).unwrap().nth(7).unwrap();
    let mut squares = BTreeMap::new();
    squares.insert((0, 1), sq);
    let p = KGraphPresentation::new(vec![e1, e2], squares).unwrap();
    let s = skeleton_from_kgraph(&p).unwrap();

    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let hidden = random_fiber_unitaries(&s, &mut rng);
    let t = conjugate(&s, &hidden).unwrap();

    let v = skeleton_iso_search(&s, &t, IsoSearchOptions::default()).unwrap();
    println!("conjugated pair: {:?} ({})", v.status, v.reason);
    if let Some(res) = v.residual {
        println!("witness residual: {res:e}");
    }
    assert_eq!(v.status, IsoStatus::Isomorphic);
}
