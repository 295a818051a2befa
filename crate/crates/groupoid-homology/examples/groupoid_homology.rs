//! Homology tables of groupoids from the composable-tuple complex.
//!
//! ```bash
//! cargo run --example groupoid_homology
//! ```

use groupoid_homology::groupoid::GroupoidSpec;
use groupoid_homology::matui::groupoid_homology_table;
use groupoid_homology::ss::DEFAULT_CAP;
use std::sync::Arc;

fn main() {
    let examples = vec![
        ("pair(3)", GroupoidSpec::Pair { n: 3 }),
        ("cyclic(2)", GroupoidSpec::CyclicGroup { m: 2 }),
        ("cyclic(6)", GroupoidSpec::CyclicGroup { m: 6 }),
        (
            "pair(2) + pair(2)",
            GroupoidSpec::DisjointUnion {
                parts: vec![GroupoidSpec::Pair { n: 2 }, GroupoidSpec::Pair { n: 2 }],
            },
        ),
    ];
    for (name, spec) in examples {
        let g = Arc::new(spec.build().unwrap());
        let table = groupoid_homology_table(&g, 3, DEFAULT_CAP).unwrap();
        let shown: Vec<String> = table.iter().map(|h| h.to_string()).collect();
        println!("{name:>16}: H_0..H_3 = {}", shown.join(", "));
    }
    // groups contribute their group homology: a cyclic group shows its
    // period-two torsion pattern, while principal groupoids are homologically
    // a disjoint union of points
}
