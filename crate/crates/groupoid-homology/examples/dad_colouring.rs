//! One-scale dimension witnesses and the colourings they induce.
//!
//! A witness at a scale is a cover of the unit space whose pieces generate
//! small subgroupoids from the scale arrows. The search finds the least
//! number of pieces under an arrow-count cap; the witness then converts to a
//! Lebesgue colouring whose homology vanishes above the dimension.
//!
//! ```bash
//! cargo run --example dad_colouring
//! ```

use groupoid_homology::anticech::is_k_lebesgue;
use groupoid_homology::colouring::colouring_homology_table;
use groupoid_homology::dad::{dad_witness_to_colouring, search_witness, WitnessSearch};
use groupoid_homology::groupoid::{GroupoidSpec, ScaleSet};
use groupoid_homology::ss::DEFAULT_CAP;
use std::sync::Arc;

fn main() {
    let g = Arc::new(GroupoidSpec::Pair { n: 4 }.build().unwrap());
    let k = ScaleSet::all(&g);
    let k3 = k.cube(&g);

    // with a cap of four arrows a single piece cannot work: the whole unit
    // space would generate all sixteen arrows
    match search_witness(&g, &k3, 0, 4).unwrap() {
        WitnessSearch::NotFound => println!("cap 4: no witness with one piece, as expected"),
        WitnessSearch::Found(_) => unreachable!(),
    }
    // two pieces suffice: split the orbit into halves
    let w = match search_witness(&g, &k3, 1, 4).unwrap() {
        WitnessSearch::Found(w) => w,
        WitnessSearch::NotFound => unreachable!(),
    };
    println!("cap 4: witness with d = {} found by exact search", w.d());
    for (i, piece) in w.cover.iter().enumerate() {
        let units: Vec<&str> = piece.iter().map(|&u| g.unit_id(u)).collect();
        println!("  piece {i}: {units:?} generating {} arrows", w.generated[i].len());
    }

    let colouring = dad_witness_to_colouring(&g, &k, &w).unwrap();
    println!(
        "derived colouring: {} parts, Lebesgue at the full scale: {}",
        colouring.parts().len(),
        is_k_lebesgue(&colouring, &k)
    );
    let table = colouring_homology_table(&colouring, w.d() + 2, DEFAULT_CAP).unwrap();
    for (n, h) in table.iter().enumerate() {
        println!("  H_{n} = {h}");
    }
    println!(
        "top homology is torsion-free: {}",
        table[w.d()].is_torsion_free()
    );
}
