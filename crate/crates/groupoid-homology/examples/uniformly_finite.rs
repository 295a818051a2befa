//! Uniformly finite chains on a finite metric space and the translation to
//! pair-groupoid coinvariants.
//!
//! ```bash
//! cargo run --example uniformly_finite
//! ```

use groupoid_homology::complex::homology;
use groupoid_homology::uf::{uf_boundary, uf_complex, uf_translation, FiniteMetricSpace, UfChain};
use num_bigint::BigInt;
use num_rational::BigRational;

fn main() {
    let d = |v: i64| BigRational::from_integer(BigInt::from(v));
    let space = FiniteMetricSpace::new(
        vec!["a".into(), "b".into(), "c".into(), "d".into()],
        vec![
            vec![d(0), d(1), d(2), d(3)],
            vec![d(1), d(0), d(1), d(2)],
            vec![d(2), d(1), d(0), d(1)],
            vec![d(3), d(2), d(1), d(0)],
        ],
    )
    .unwrap();

    // a chain and its boundary; propagation never grows
    let edge = UfChain::delta(vec![0, 3]);
    println!("edge (a,d) has propagation {}", edge.propagation(&space));
    let boundary = uf_boundary(&edge).unwrap();
    println!(
        "boundary supported on {} points, propagation {}",
        boundary.coefficients.len(),
        boundary.propagation(&space)
    );

    // homology of the full tuple complex: a single connected blob
    let complex = uf_complex(&space, 3).unwrap();
    for n in 0..=2 {
        println!("H_{n} = {}", homology(&complex, n));
    }

    // translation to pair-groupoid coinvariants: mutually inverse chain maps
    let tr = uf_translation(&space, 2, 1_000_000).unwrap();
    println!(
        "round trips are the identity: {}, chain maps commute: {}",
        tr.round_trips_are_identity(),
        tr.chain_maps_commute()
    );
}
