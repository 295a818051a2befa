//! Build groupoids from specs, inspect fibres, and decompose a principal
//! groupoid into its orbit blocks.
//!
//! ```bash
//! cargo run --example groupoid_basics
//! ```

use groupoid_homology::groupoid::{
    generated_subgroupoid, principal_blocks, FiberKind, GroupoidSpec, Subgroupoid,
};
use std::sync::Arc;

fn main() {
    // the pair groupoid on three units: arrows (i,j) run from x_j to x_i
    let pair3 = Arc::new(GroupoidSpec::Pair { n: 3 }.build().unwrap());
    println!(
        "pair(3): {} arrows over {} units, principal = {}",
        pair3.n_arrows(),
        pair3.n_units(),
        pair3.is_principal()
    );
    let fibre = pair3.fiber("(1,1)", FiberKind::Range).unwrap();
    let ids: Vec<&str> = fibre.iter().map(|&a| pair3.id(a)).collect();
    println!("range fibre at (1,1): {ids:?}");

    // a cyclic group is a one-unit groupoid with isotropy
    let z4 = Arc::new(GroupoidSpec::CyclicGroup { m: 4 }.build().unwrap());
    println!("cyclic(4): principal = {}", z4.is_principal());
    let h = generated_subgroupoid(&z4, &[z4.index_of("g1").unwrap()]);
    println!("subgroupoid generated by g1 has {} arrows", h.len());

    // an action groupoid: the swap action of the two-element group
    let swap = GroupoidSpec::Action {
        group: Box::new(GroupoidSpec::CyclicGroup { m: 2 }),
        points: vec!["a".into(), "b".into()],
        act: vec![
            ["g0".into(), "a".into(), "a".into()],
            ["g0".into(), "b".into(), "b".into()],
            ["g1".into(), "a".into(), "b".into()],
            ["g1".into(), "b".into(), "a".into()],
        ],
    };
    let swap = Arc::new(swap.build().unwrap());
    println!(
        "swap action: {} arrows, principal = {} (a free action)",
        swap.n_arrows(),
        swap.is_principal()
    );

    // blocks of a principal groupoid: one pair groupoid per orbit, with the
    // section tau reaching every unit from the orbit basepoint
    let whole = Subgroupoid::new(pair3.clone(), (0..pair3.n_arrows()).collect()).unwrap();
    let blocks = principal_blocks(&whole).unwrap();
    for block in &blocks.blocks {
        println!(
            "orbit of size {} based at {}",
            block.orbit_units.len(),
            pair3.unit_id(block.basepoint)
        );
        for &x in &block.orbit_units {
            let t = blocks.tau(x).unwrap();
            println!("  tau({}) = {}", pair3.unit_id(x), pair3.id(t));
        }
    }
}
