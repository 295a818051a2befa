//! Deterministic families of small groupoids and colourings.
//!
//! These are the instances the integration and acceptance suites run over:
//! pair groupoids, cyclic groups, a couple of non-abelian group tables,
//! disjoint unions, free and non-free cyclic actions, and restrictions.
//! Everything stays at or below sixty arrows.

use crate::colouring::Colouring;
use crate::dad::k_lebesgue_colouring;
use crate::error::Result;
use crate::groupoid::{FiniteAmpleGroupoid, GroupoidSpec, ScaleSet, Subgroupoid};
use std::sync::Arc;

pub struct CorpusEntry {
    pub name: String,
    pub g: Arc<FiniteAmpleGroupoid>,
}

fn entry(name: &str, spec: GroupoidSpec) -> CorpusEntry {
    CorpusEntry {
        name: name.to_string(),
        g: Arc::new(spec.build().expect("corpus specs are valid")),
    }
}

/// Free action of Z/m on `orbits` disjoint m-cycles.
pub fn free_cyclic_action(m: u32, orbits: u32) -> GroupoidSpec {
    let points: Vec<String> = (0..orbits)
        .flat_map(|o| (0..m).map(move |i| format!("p{o}_{i}")))
        .collect();
    let mut act = Vec::new();
    for j in 0..m {
        for o in 0..orbits {
            for i in 0..m {
                act.push([
                    format!("g{j}"),
                    format!("p{o}_{i}"),
                    format!("p{o}_{}", (i + j) % m),
                ]);
            }
        }
    }
    GroupoidSpec::Action {
        group: Box::new(GroupoidSpec::CyclicGroup { m }),
        points,
        act,
    }
}

/// Action of Z/m on one m-cycle plus `fixed` fixed points (not principal for
/// m > 1 and fixed > 0).
pub fn cyclic_action_with_fixed(m: u32, fixed: u32) -> GroupoidSpec {
    let mut points: Vec<String> = (0..m).map(|i| format!("p0_{i}")).collect();
    points.extend((0..fixed).map(|f| format!("q{f}")));
    let mut act = Vec::new();
    for j in 0..m {
        for i in 0..m {
            act.push([format!("g{j}"), format!("p0_{i}"), format!("p0_{}", (i + j) % m)]);
        }
        for f in 0..fixed {
            act.push([format!("g{j}"), format!("q{f}"), format!("q{f}")]);
        }
    }
    GroupoidSpec::Action {
        group: Box::new(GroupoidSpec::CyclicGroup { m }),
        points,
        act,
    }
}

/// Multiplication table of the symmetric group on three letters.
pub fn s3_table() -> GroupoidSpec {
    // elements as permutation words: e, r, rr (rotations), s, sr, srr
    let names = ["e", "r", "rr", "s", "sr", "srr"];
    let index = |w: &str| names.iter().position(|&n| n == w).unwrap();
    // r = (0 1 2), s = (0 1); compose as functions, left acts after right
    let perm_of = |w: &str| -> [usize; 3] {
        match w {
            "e" => [0, 1, 2],
            "r" => [1, 2, 0],
            "rr" => [2, 0, 1],
            "s" => [1, 0, 2],
            "sr" => [2, 1, 0],
            "srr" => [0, 2, 1],
            _ => unreachable!(),
        }
    };
    let mut mul = Vec::new();
    for &a in &names {
        for &b in &names {
            let pa = perm_of(a);
            let pb = perm_of(b);
            let prod = [pa[pb[0]], pa[pb[1]], pa[pb[2]]];
            let c = names
                .iter()
                .position(|&n| perm_of(n) == prod)
                .expect("closed");
            mul.push([a.to_string(), b.to_string(), names[c].to_string()]);
            let _ = index;
        }
    }
    GroupoidSpec::GroupTable {
        elements: names.iter().map(|s| s.to_string()).collect(),
        mul,
    }
}

/// Klein four-group table.
pub fn klein_table() -> GroupoidSpec {
    let names = ["e", "a", "b", "c"];
    let table = [
        ["e", "a", "b", "c"],
        ["a", "e", "c", "b"],
        ["b", "c", "e", "a"],
        ["c", "b", "a", "e"],
    ];
    let mut mul = Vec::new();
    for (i, &x) in names.iter().enumerate() {
        for (j, &y) in names.iter().enumerate() {
            mul.push([x.to_string(), y.to_string(), table[i][j].to_string()]);
        }
    }
    GroupoidSpec::GroupTable {
        elements: names.iter().map(|s| s.to_string()).collect(),
        mul,
    }
}

/// The test corpus: at least thirty groupoids with at most sixty arrows.
pub fn corpus_groupoids() -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    for n in 1..=6 {
        out.push(entry(&format!("pair{n}"), GroupoidSpec::Pair { n }));
    }
    for m in [1, 2, 3, 4, 5, 6, 8] {
        out.push(entry(&format!("cyclic{m}"), GroupoidSpec::CyclicGroup { m }));
    }
    out.push(entry("s3", s3_table()));
    out.push(entry("klein", klein_table()));
    let unions: Vec<(&str, Vec<GroupoidSpec>)> = vec![
        ("pair2+pair2", vec![GroupoidSpec::Pair { n: 2 }, GroupoidSpec::Pair { n: 2 }]),
        ("pair2+pair3", vec![GroupoidSpec::Pair { n: 2 }, GroupoidSpec::Pair { n: 3 }]),
        ("pair3+pair3", vec![GroupoidSpec::Pair { n: 3 }, GroupoidSpec::Pair { n: 3 }]),
        (
            "pair2+pair2+pair2",
            vec![
                GroupoidSpec::Pair { n: 2 },
                GroupoidSpec::Pair { n: 2 },
                GroupoidSpec::Pair { n: 2 },
            ],
        ),
        ("pair4+pair2", vec![GroupoidSpec::Pair { n: 4 }, GroupoidSpec::Pair { n: 2 }]),
        ("pair5+pair3", vec![GroupoidSpec::Pair { n: 5 }, GroupoidSpec::Pair { n: 3 }]),
        (
            "cyclic2+pair2",
            vec![GroupoidSpec::CyclicGroup { m: 2 }, GroupoidSpec::Pair { n: 2 }],
        ),
        (
            "cyclic3+cyclic3",
            vec![GroupoidSpec::CyclicGroup { m: 3 }, GroupoidSpec::CyclicGroup { m: 3 }],
        ),
    ];
    for (name, parts) in unions {
        out.push(entry(name, GroupoidSpec::DisjointUnion { parts }));
    }
    out.push(entry("act-z2-swap", free_cyclic_action(2, 1)));
    out.push(entry("act-z2-two-orbits", free_cyclic_action(2, 2)));
    out.push(entry("act-z2-three-orbits", free_cyclic_action(2, 3)));
    out.push(entry("act-z3-rot", free_cyclic_action(3, 1)));
    out.push(entry("act-z3-two-orbits", free_cyclic_action(3, 2)));
    out.push(entry("act-z4-rot", free_cyclic_action(4, 1)));
    out.push(entry("act-z5-rot", free_cyclic_action(5, 1)));
    out.push(entry("act-z6-rot", free_cyclic_action(6, 1)));
    out.push(entry("act-z2-fixed", cyclic_action_with_fixed(2, 1)));
    out.push(entry("act-z3-fixed", cyclic_action_with_fixed(3, 2)));
    out.push(entry(
        "pair6-restricted",
        GroupoidSpec::Restriction {
            inner: Box::new(GroupoidSpec::Pair { n: 6 }),
            units: vec!["(1,1)".into(), "(3,3)".into(), "(5,5)".into()],
        },
    ));
    out.push(entry(
        "union-restricted",
        GroupoidSpec::Restriction {
            inner: Box::new(GroupoidSpec::DisjointUnion {
                parts: vec![GroupoidSpec::Pair { n: 3 }, GroupoidSpec::Pair { n: 3 }],
            }),
            units: vec!["0:(1,1)".into(), "0:(2,2)".into(), "1:(2,2)".into()],
        },
    ));
    out
}

/// The principal members of the corpus.
pub fn principal_corpus() -> Vec<CorpusEntry> {
    corpus_groupoids()
        .into_iter()
        .filter(|e| e.g.is_principal())
        .collect()
}

pub struct ColouringEntry {
    pub name: String,
    pub colouring: Colouring,
}

/// Trivial subgroupoid on a set of unit positions.
fn unit_part(g: &Arc<FiniteAmpleGroupoid>, units: &[usize]) -> Subgroupoid {
    Subgroupoid::new(g.clone(), units.iter().map(|&u| g.unit_arrow(u)).collect())
        .expect("identity arrows form a subgroupoid")
}

/// Full subgroupoid on one orbit of the unit space.
fn orbit_part(g: &Arc<FiniteAmpleGroupoid>, orbit: &[usize]) -> Subgroupoid {
    let inside: Vec<bool> = {
        let mut v = vec![false; g.n_units()];
        for &u in orbit {
            v[u] = true;
        }
        v
    };
    let members: Vec<usize> = (0..g.n_arrows())
        .filter(|&a| inside[g.src_pos(a)] && inside[g.rng_pos(a)])
        .collect();
    Subgroupoid::new(g.clone(), members).expect("orbit arrows form a subgroupoid")
}

/// At least fifty colourings over the corpus, each over a groupoid with at
/// most sixty arrows and at most four colours.
pub fn corpus_colourings() -> Result<Vec<ColouringEntry>> {
    let mut out: Vec<ColouringEntry> = Vec::new();
    let mut push = |name: String, colouring: Colouring| out.push(ColouringEntry { name, colouring });
    for e in corpus_groupoids() {
        let g = &e.g;
        // single part and the same part twice
        push(format!("{}/whole", e.name), Colouring::whole(g.clone()));
        let all = Subgroupoid::new(g.clone(), (0..g.n_arrows()).collect()).expect("full subgroupoid");
        push(
            format!("{}/whole-twice", e.name),
            Colouring::new(g.clone(), vec![all.clone(), all.clone()])?,
        );
        // unit partition into two halves
        let n_units = g.n_units();
        if n_units >= 2 {
            let mid = n_units / 2;
            let first: Vec<usize> = (0..mid).collect();
            let second: Vec<usize> = (mid..n_units).collect();
            push(
                format!("{}/unit-partition", e.name),
                Colouring::new(g.clone(), vec![unit_part(g, &first), unit_part(g, &second)])?,
            );
            // overlapping unit cover
            let first_wide: Vec<usize> = (0..=mid.min(n_units - 1)).collect();
            push(
                format!("{}/unit-overlap", e.name),
                Colouring::new(g.clone(), vec![unit_part(g, &first_wide), unit_part(g, &second)])?,
            );
        }
        // orbit colouring when there are several orbits (at most 4 colours)
        let orbits = g.unit_orbits();
        if orbits.len() >= 2 && orbits.len() <= 4 {
            let parts: Vec<Subgroupoid> = orbits.iter().map(|o| orbit_part(g, o)).collect();
            push(format!("{}/orbits", e.name), Colouring::new(g.clone(), parts)?);
        }
        // whole part plus trivial part: two colours, maximal overlap
        let trivial_all = unit_part(g, &(0..n_units).collect::<Vec<_>>());
        push(
            format!("{}/whole+units", e.name),
            Colouring::new(g.clone(), vec![all, trivial_all])?,
        );
        if g.is_principal() {
            let k_units = ScaleSet::units_only(g);
            push(
                format!("{}/lebesgue-units", e.name),
                k_lebesgue_colouring(g, &k_units)?,
            );
        }
    }
    Ok(out)
}
