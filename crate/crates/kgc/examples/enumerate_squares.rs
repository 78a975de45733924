//! Enumerating commuting-square bijections (E*F)¹ → (F*E)¹. The
//! stream is nonempty exactly when the adjacency products commute,
//! and its length is ∏_{v,w} ((A_E·A_F)[v,w])!.

use kgc::graphs::{DirectedGraph, Edge, SquareEnumerator};

fn main() {
    // single vertex, 2 loops each: (2·2)! = 24 squares
    let e = DirectedGraph::new(1, vec![Edge::new("e1", 0, 0), Edge::new("e2", 0, 0)]).unwrap();
    let f = DirectedGraph::new(1, vec![Edge::new("f1", 0, 0), Edge::new("f2", 0, 0)]).unwrap();
    let squares: Vec<_> = SquareEnumerator::new(&e, &f).unwrap().collect();
    println!("2 loops x 2 loops: {} squares", squares.len());
    println!("first: {:?}", squares[0]);
    println!("last:  {:?}", squares[squares.len() - 1]);

    // truncation via collect_limited
    let (some, truncated) = SquareEnumerator::new(&e, &f).unwrap().collect_limited(5);
    println!("limit 5: got {} (truncated = {truncated})", some.len());

    // non-commuting adjacency products have no squares at all
    let g = DirectedGraph::new(2, vec![Edge::new("g", 0, 1)]).unwrap();
    let h = DirectedGraph::new(2, vec![Edge::new("h", 0, 0)]).unwrap();
    let count = SquareEnumerator::new(&g, &h).unwrap().count();
    println!("non-commuting pair: {count} squares");
}
