//! Imprimitivity bimodules over a finite vertex set: detection, the
//! Rieffel permutation, and realization as a graph correspondence
//! (V, V, h, id).

use kgc::correspondences::{graph_correspondence, tensor, Correspondence};
use kgc::formats::serialize_graph;
use kgc::imprimitivity::{analyze, realize_as_graph};

fn main() {
    for dims in [
        vec![vec![1, 0], vec![0, 1]],
        vec![vec![0, 1], vec![1, 0]],
        vec![vec![2]],
        vec![vec![1, 1], vec![0, 0]],
    ] {
        let x = Correspondence::new(dims.len(), dims.clone()).unwrap();
        let r = analyze(&x);
        println!("dims {dims:?}:");
        println!("  imprimitivity = {}, symmetric = {}", r.is_imprimitivity, r.is_symmetric);
        println!("  {}", r.reason);
        if r.is_imprimitivity {
            let (graph, iso) = realize_as_graph(&x).unwrap();
            println!("  h = {:?}", r.rieffel_permutation.unwrap());
            print!("{}", serialize_graph(&graph));
            assert_eq!(graph_correspondence(&graph).dims(), x.dims());
            assert!(iso.is_unitary(1e-12));
        }
    }

    // tensoring imprimitivity bimodules composes the permutations
    let x = Correspondence::new(3, vec![vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]]).unwrap();
    let (xx, _) = tensor(&x, &x).unwrap();
    println!(
        "3-cycle tensored with itself: h = {:?}",
        analyze(&xx).rieffel_permutation.unwrap()
    );
}
