//! The two ordering homotopies, certified exactly on a two-colour nerve.
//!
//! The first homotopy retracts the nerve onto simplices with weakly
//! increasing colours; the second retracts those onto strictly increasing
//! ones. Both identities are checked entry by entry, at the chain level and
//! after coinvariants.
//!
//! ```bash
//! cargo run --example colouring_homotopies
//! ```

use groupoid_homology::colouring::{homotopy_h, homotopy_k, nerve, Colouring};
use groupoid_homology::groupoid::{GroupoidSpec, Subgroupoid};
use groupoid_homology::ss::DEFAULT_CAP;
use std::sync::Arc;

fn main() {
    let g = Arc::new(GroupoidSpec::Pair { n: 3 }.build().unwrap());
    let all = Subgroupoid::new(g.clone(), (0..g.n_arrows()).collect()).unwrap();
    let units = Subgroupoid::new(g.clone(), (0..g.n_units()).map(|u| g.unit_arrow(u)).collect()).unwrap();
    let colouring = Colouring::new(g.clone(), vec![all, units]).unwrap();
    let data = nerve(&colouring, 4, DEFAULT_CAP).unwrap();

    let h = homotopy_h(&data).unwrap();
    println!("h identity: {}", h.chain_level.claimed_identity);
    println!("  chain level: {}", verdict(h.chain_level.holds().unwrap()));
    println!("  coinvariants: {}", verdict(h.coinvariant_level.holds().unwrap()));

    let k = homotopy_k(&data).unwrap();
    println!("k identity: {}", k.chain_level.claimed_identity);
    println!("  chain level: {}", verdict(k.chain_level.holds().unwrap()));
    println!("  coinvariants: {}", verdict(k.coinvariant_level.holds().unwrap()));
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "holds exactly"
    } else {
        "FAILS"
    }
}
