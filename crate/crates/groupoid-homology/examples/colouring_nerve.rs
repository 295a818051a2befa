//! Colourings, their covers, nerve levels, and the sorting permutations.
//!
//! ```bash
//! cargo run --example colouring_nerve
//! ```

use groupoid_homology::colouring::{colour_map, nerve, sigma_a, sigma_x, Colouring};
use groupoid_homology::groupoid::{GroupoidSpec, Subgroupoid};
use groupoid_homology::ss::DEFAULT_CAP;
use std::sync::Arc;

fn main() {
    let g = Arc::new(GroupoidSpec::Pair { n: 2 }.build().unwrap());
    // two colours, both the whole groupoid: cover elements repeat per colour
    let all = Subgroupoid::new(g.clone(), (0..g.n_arrows()).collect()).unwrap();
    let colouring = Colouring::new(g.clone(), vec![all.clone(), all]).unwrap();
    let data = nerve(&colouring, 3, DEFAULT_CAP).unwrap();

    println!("cover has {} elements:", data.cover.len());
    for (i, e) in data.cover.elements.iter().enumerate() {
        let ids: Vec<&str> = e.arrows.iter().map(|&a| g.id(a as usize)).collect();
        println!(
            "  U{i}: colour {}, anchor {}, arrows {ids:?}",
            e.colour,
            g.unit_id(e.anchor)
        );
    }
    for n in 0..=3 {
        println!(
            "nerve level {n}: {} simplices ({} weakly ordered, {} strictly ordered)",
            data.full.dim(n),
            data.weak.dim(n),
            data.strict.dim(n)
        );
    }
    // colour vectors drive the sorting permutations used by the homotopies
    let level = data.full.level(2);
    let simplex = level.point(0);
    let colours = colour_map(&data.cover, simplex);
    let sigma = sigma_x(&colours);
    println!(
        "simplex {} has colours {colours:?}, sorting permutation {:?} (sign {})",
        data.full.point_name(2, 0),
        sigma.images(),
        sigma.sign()
    );
    for a in 0..=2 {
        let sa = sigma_a(&sigma, a).unwrap();
        println!("  partial rearrangement at {a}: {:?} (sign {})", sa.images(), sa.sign());
    }
}
