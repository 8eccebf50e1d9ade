use commbell::polytope::{enumerate_facets, DdOptions, InsertionOrder, VRep};
use commbell::scenario::Scenario;
use std::time::Instant;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let x: usize = args[1].parse().unwrap();
    let y: usize = args[2].parse().unwrap();
    let comm: u8 = args[3].parse().unwrap();
    let ord = match args.get(4).map(|s| s.as_str()) {
        Some("lex") => InsertionOrder::Lexicographic,
        Some("input") => InsertionOrder::Input,
        _ => InsertionOrder::MaxCutoff,
    };
    let s = Scenario::new(x, y, comm).unwrap();
    let v = VRep::from_scenario(&s).unwrap();
    let t = Instant::now();
    let facets = enumerate_facets(
        &v,
        &DdOptions {
            ordering: ord,
            ..DdOptions::default()
        },
    )
    .unwrap();
    println!(
        "{x}{y}+{comm} {ord:?}: {} vertices, dim {}, {} facets in {:?}",
        v.len(),
        v.dim(),
        facets.len(),
        t.elapsed()
    );
}
