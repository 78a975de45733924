//! From a 2-graph presentation to its skeleton (Y, T) and the ω
//! invariant of rank-2 single-vertex systems with 1-dimensional
//! fibers: ω = 1 exactly when the system comes from a 2-graph.

use std::collections::BTreeMap;

use kgc::formats::serialize_skeleton;
use kgc::graphs::{DirectedGraph, Edge, KGraphPresentation, SquareEnumerator};
use kgc::product_systems::{omega, skeleton_from_kgraph, Skeleton};
use num_complex::Complex64;

fn main() {
    // the single-vertex 2-graph with one loop per color and ef = fe
    let e1 = DirectedGraph::new(1, vec![Edge::new("e", 0, 0)]).unwrap();
    let e2 = DirectedGraph::new(1, vec![Edge::new("f", 0, 0)]).unwrap();
    let sq = SquareEnumerator::new(&e1, &e2).unwrap().next().unwrap();
    let mut squares = BTreeMap::new();
    squares.insert((0, 1), sq);
    let p = KGraphPresentation::new(vec![e1, e2], squares).unwrap();

    let s = skeleton_from_kgraph(&p).unwrap();
    println!("skeleton of the commuting-loops 2-graph:");
    print!("{}", serialize_skeleton(&s));
    println!("omega = {}", omega(&s).unwrap().value);

    // skeletons with any unimodular ω exist, but only ω = 1 is a
    // 2-graph skeleton
    for (name, w) in [
        ("i", Complex64::new(0.0, 1.0)),
        ("exp(iπ/3)", Complex64::from_polar(1.0, std::f64::consts::PI / 3.0)),
    ] {
        let s = Skeleton::one_dimensional(w).unwrap();
        println!("omega({name} skeleton) = {}", omega(&s).unwrap().value);
    }
}
