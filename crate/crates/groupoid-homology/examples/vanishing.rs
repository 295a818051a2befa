//! Homology of a colouring vanishes above its colour count, exactly.
//!
//! ```bash
//! cargo run --example vanishing
//! ```

use groupoid_homology::colouring::{colouring_homology_table, nerve, Colouring};
use groupoid_homology::groupoid::{GroupoidSpec, Subgroupoid};
use groupoid_homology::ss::DEFAULT_CAP;
use std::sync::Arc;

fn main() {
    let g = Arc::new(GroupoidSpec::Pair { n: 4 }.build().unwrap());
    // two colours: the whole groupoid and the trivial groupoid on the units
    let all = Subgroupoid::new(g.clone(), (0..g.n_arrows()).collect()).unwrap();
    let units = Subgroupoid::new(g.clone(), (0..g.n_units()).map(|u| g.unit_arrow(u)).collect()).unwrap();
    let colouring = Colouring::new(g.clone(), vec![all, units]).unwrap();
    let d = colouring.d();

    let table = colouring_homology_table(&colouring, d + 3, DEFAULT_CAP).unwrap();
    println!("colouring with {} colours over pair(4):", d + 1);
    for (n, h) in table.iter().enumerate() {
        let note = if n > d { "  (above the colour count)" } else { "" };
        println!("  H_{n} = {h}{note}");
    }

    // the strictly ordered subnerve is empty above degree d, which forces
    // the vanishing; the homology table above already cross-checked equality
    // with the ordered subnerve in every degree
    let data = nerve(&colouring, d + 3, DEFAULT_CAP).unwrap();
    for n in 0..=d + 3 {
        println!("  strictly ordered simplices in degree {n}: {}", data.strict.dim(n));
    }
}
