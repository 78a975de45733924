//! Structure maps β_{m,n} of the product system a skeleton determines:
//! normal-form fibers, associativity, and independence of the sorting
//! route.

use std::collections::BTreeMap;

use kgc::graphs::{DirectedGraph, Edge, KGraphPresentation, SquareEnumerator};
use kgc::product_systems::{
    associativity_residual, canonical_schedule, fiber, skeleton_from_kgraph, structure_map,
    structure_map_with_schedule,
};

fn main() {
    // a 2-graph with two loops in color 1 and one in color 2
    let e1 = DirectedGraph::new(1, vec![Edge::new("a", 0, 0), Edge::new("b", 0, 0)]).unwrap();
    let e2 = DirectedGraph::new(1, vec![Edge::new("f", 0, 0)]).unwrap();
    let sq = SquareEnumerator::new(&e1, &e2).unwrap().nth(1).unwrap();
    let mut squares = BTreeMap::new();
    squares.insert((0, 1), sq);
    let p = KGraphPresentation::new(vec![e1, e2], squares).unwrap();
    let s = skeleton_from_kgraph(&p).unwrap();

    for m in [vec![0, 0], vec![2, 1], vec![1, 2]] {
        let f = fiber(&s, &m).unwrap();
        println!(
            "fiber {:?}: word {:?}, dims {:?}",
            m, f.word, f.correspondence.dims()
        );
    }

    let beta = structure_map(&s, &[1, 1], &[1, 0]).unwrap();
    println!(
        "beta((1,1),(1,0)) is {}x{}, unitary defect {:e}",
        beta.block(0, 0).nrows(),
        beta.block(0, 0).ncols(),
        beta.unitarity_defect()
    );

    // associativity of the multiplication
    let res = associativity_residual(&s, &[1, 0], &[0, 1], &[1, 1]).unwrap();
    println!("associativity residual: {res:e}");

    // any valid sorting schedule gives the same matrix; the canonical
    // one swaps the leftmost out-of-order pair first
    let word = [1usize, 1, 0, 0];
    println!("canonical schedule of {word:?}: {:?}", canonical_schedule(&word));
    let canonical = structure_map(&s, &[0, 2], &[2, 0]).unwrap();
    // resolve the crossings in a different order
    let alt = structure_map_with_schedule(&s, &[0, 2], &[2, 0], &[1, 2, 0, 1]).unwrap();
    println!("route difference: {:e}", canonical.max_entry_diff(&alt));
}
