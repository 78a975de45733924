//! Which skeletons come from k-graphs? Rank 1 always does; the
//! ω invariant decides the rank-2 single-vertex 1-dimensional case
//! exactly; other rank-2 skeletons are matched against enumerated
//! candidate presentations.

use kgc::formats::serialize_kgraph;
use kgc::product_systems::{realizability, Realizability, RealizabilityOptions, Skeleton};
use num_complex::Complex64;

fn main() {
    let opts = RealizabilityOptions::default();

    let s = Skeleton::one_dimensional(Complex64::new(1.0, 0.0)).unwrap();
    match realizability(&s, opts).unwrap() {
        Realizability::Realizable(witness) => {
            println!("omega = 1: REALIZABLE by");
            print!("{}", serialize_kgraph(&witness));
        }
        other => println!("omega = 1: {other:?}"),
    }

    for theta in [std::f64::consts::FRAC_PI_2, 2.0 * std::f64::consts::PI / 3.0] {
        let s = Skeleton::one_dimensional(Complex64::from_polar(1.0, theta)).unwrap();
        match realizability(&s, opts).unwrap() {
            Realizability::NotRealizable(reason) => {
                println!("omega = exp({theta:.3}i): NOT_REALIZABLE ({reason})");
            }
            other => println!("omega = exp({theta:.3}i): {other:?}"),
        }
    }
}
