//! Building k-graph presentations and checking their validity,
//! including a rank-3 presentation that fails the cube condition.

use std::collections::BTreeMap;

use kgc::graphs::{DirectedGraph, Edge, KGraphPresentation, SquareEnumerator};

fn loop_graph(labels: &[&str]) -> DirectedGraph {
    let edges = labels.iter().map(|l| Edge::new(*l, 0, 0)).collect();
    DirectedGraph::new(1, edges).unwrap()
}

fn main() {
    // one loop per color: every square is forced, the 3-graph is valid
    let graphs = vec![loop_graph(&["e"]), loop_graph(&["f"]), loop_graph(&["g"])];
    let mut squares = BTreeMap::new();
    for i in 0..3 {
        for j in (i + 1)..3 {
            let sq = SquareEnumerator::new(&graphs[i], &graphs[j])
                .unwrap()
                .next()
                .unwrap();
            squares.insert((i, j), sq);
        }
    }
    let p = KGraphPresentation::new(graphs, squares).unwrap();
    let v = p.validate();
    println!("forced 3-graph: valid = {}", v.is_valid());

    // 1 vertex, |E1|=|E2|=1, |E3|=2: the cube condition now has teeth.
    // Classify every choice of (θ13, θ23).
    let e1 = loop_graph(&["e"]);
    let e2 = loop_graph(&["f"]);
    let e3 = loop_graph(&["g1", "g2"]);
    let sq12 = SquareEnumerator::new(&e1, &e2).unwrap().next().unwrap();
    let choices13: Vec<_> = SquareEnumerator::new(&e1, &e3).unwrap().collect();
    let choices23: Vec<_> = SquareEnumerator::new(&e2, &e3).unwrap().collect();
    let mut valid = 0;
    let mut invalid = 0;
    for s13 in &choices13 {
        for s23 in &choices23 {
            let mut squares = BTreeMap::new();
            squares.insert((0, 1), sq12.clone());
            squares.insert((0, 2), s13.clone());
            squares.insert((1, 2), s23.clone());
            let p =
                KGraphPresentation::new(vec![e1.clone(), e2.clone(), e3.clone()], squares).unwrap();
            let verdict = p.validate();
            if verdict.is_valid() {
                valid += 1;
            } else {
                invalid += 1;
                for violation in verdict.violations.iter().take(1) {
                    println!("violation: {violation}");
                }
            }
        }
    }
    println!("square choices: {valid} valid, {invalid} invalid");
}
