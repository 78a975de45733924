//! Hexagonal equations for rank-3 skeletons: a 2-graph-derived
//! skeleton passes exactly, while a hand-built braid family with
//! non-commuting blocks fails.

use std::collections::BTreeMap;

use kgc::correspondences::{CorrMorphism, Correspondence};
use kgc::graphs::{DirectedGraph, Edge, KGraphPresentation, SquareEnumerator};
use kgc::linalg::CMatrix;
use kgc::product_systems::{hexagon_check, skeleton_from_kgraph, Skeleton};
use num_complex::Complex64;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn main() {
    // skeleton of a valid 3-graph: exact permutation braids, residual 0
    let graphs: Vec<DirectedGraph> = ["e", "f", "g"]
        .iter()
        .map(|l| DirectedGraph::new(1, vec![Edge::new(*l, 0, 0)]).unwrap())
        .collect();
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
    let s = skeleton_from_kgraph(&p).unwrap();
    let report = hexagon_check(&s, 1e-9).unwrap();
    println!(
        "3-graph skeleton: pass = {}, max residual = {:e}",
        report.pass, report.max_residual
    );

    // dims (2, 1, 1) with T_{1,2} = swap, T_{1,3} = diag(1, -1),
    // T_{2,3} = [[1]]: both hexagon sides reduce to 2x2 products that
    // differ because the blocks do not commute
    let y1 = Correspondence::new(1, vec![vec![2]]).unwrap();
    let y2 = Correspondence::new(1, vec![vec![1]]).unwrap();
    let y3 = Correspondence::new(1, vec![vec![1]]).unwrap();
    let swap = CMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
    let diag = CMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c(-1.0)]);
    let one = CMatrix::from_element(1, 1, c(1.0));
    let braid = |src: &Correspondence, tgt: &Correspondence, m: CMatrix| {
        let (s, _) = kgc::correspondences::tensor(src, tgt).unwrap();
        let (t, _) = kgc::correspondences::tensor(tgt, src).unwrap();
        CorrMorphism::new(s, t, vec![m]).unwrap()
    };
    let mut braids = BTreeMap::new();
    braids.insert((0, 1), braid(&y1, &y2, swap));
    braids.insert((0, 2), braid(&y1, &y3, diag));
    braids.insert((1, 2), braid(&y2, &y3, one));
    let bad = Skeleton::new(vec![y1, y2, y3], braids).unwrap();
    let report = hexagon_check(&bad, 1e-9).unwrap();
    println!(
        "non-commuting braids: pass = {}, max residual = {:e}",
        report.pass, report.max_residual
    );
    for ((i, j, l), res) in &report.residuals {
        println!("  triple ({}, {}, {}): {res:e}", i + 1, j + 1, l + 1);
    }
}
