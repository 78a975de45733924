//! The five text formats: parsing with positioned errors and
//! canonical, byte-stable serialization.

use kgc::formats::{
    parse_graph, parse_skeleton, serialize_graph, serialize_skeleton,
};
use kgc::product_systems::Skeleton;
use num_complex::Complex64;

fn main() {
    let text = "\
# a two-vertex graph
kgc-graph v1
vertices 2
edges 2
up   r=0 s=1
down r=1 s=0
";
    let g = parse_graph(text).unwrap();
    println!("parsed {} edges; canonical form:", g.edge_count());
    print!("{}", serialize_graph(&g));

    // errors carry line and column
    let bad = "kgc-graph v1\nvertices 2\nedges 1\nloop r=0 s=5\n";
    println!("error: {}", parse_graph(bad).unwrap_err());

    // skeleton files carry complex matrices in <re><sign><im>i form
    let s = Skeleton::one_dimensional(Complex64::new(0.0, -1.0)).unwrap();
    let doc = serialize_skeleton(&s);
    print!("{doc}");
    let back = parse_skeleton(&doc).unwrap();
    assert_eq!(serialize_skeleton(&back), doc);
    println!("round trip is byte-identical");
}
