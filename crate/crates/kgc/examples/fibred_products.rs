//! Fibred products of directed graphs: composable edge pairs, the
//! adjacency-product identity, and the identity graph as a unit.

use kgc::graphs::{fibred_product, identity_graph, DirectedGraph, Edge};

fn main() {
    let e = DirectedGraph::new(
        2,
        vec![
            Edge::new("e1", 0, 1),
            Edge::new("e2", 0, 0),
        ],
    )
    .unwrap();
    let f = DirectedGraph::new(
        2,
        vec![
            Edge::new("f1", 1, 0),
            Edge::new("f2", 0, 0),
        ],
    )
    .unwrap();

    let ef = fibred_product(&e, &f).unwrap();
    println!("E*F has {} edges:", ef.edge_count());
    for idx in 0..ef.edge_count() {
        let (ei, fi) = ef.pair(idx);
        let edge = &ef.base().edges()[idx];
        println!(
            "  ({}, {})  r={} s={}",
            e.edges()[ei].label,
            f.edges()[fi].label,
            edge.range,
            edge.source
        );
    }

    // adjacency of E*F is the matrix product A_E · A_F
    println!("A_E   = {:?}", e.adjacency_matrix());
    println!("A_F   = {:?}", f.adjacency_matrix());
    println!("A_E*F = {:?}", ef.base().adjacency_matrix());

    // the identity graph is a unit: E * id ≅ E vertex-fixingly
    let id = identity_graph(2);
    let e_id = fibred_product(&e, &id).unwrap();
    assert_eq!(e_id.base().adjacency_matrix(), e.adjacency_matrix());
    println!("E * identity has the adjacency of E");
}
