#![allow(clippy::needless_range_loop)]

//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the quantities it checked. Every tolerance here is exact; no criterion is
//! checked up to rounding.

use groupoid_homology::anticech::{anti_cech_homology, build_anti_cech, compare_with_groupoid, ScaleSet};
use groupoid_homology::colouring::{colouring_homology_table, homotopy_h, homotopy_k, nerve};
use groupoid_homology::complex::{homology, HomologyGroup, IntegerChainComplex};
use groupoid_homology::corpus::{corpus_colourings, corpus_groupoids, principal_corpus};
use groupoid_homology::dad::{dad_witness_to_colouring, search_witness, WitnessSearch};
use groupoid_homology::groupoid::GroupoidSpec;
use groupoid_homology::matrix::IntMatrix;
use groupoid_homology::matui::{groupoid_homology_table, resolution_contraction};
use groupoid_homology::snf::{invariant_factors, smith_normal_form};
use groupoid_homology::ss::DEFAULT_CAP;
use groupoid_homology::uf::{uf_translation, FiniteMetricSpace, UfChain};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::collections::BTreeMap;
use std::time::Instant;

/// Criterion 1: the homology of cyclic groups from the composable-tuple
/// complex equals the periodic-resolution values (Z, Z/m, 0, Z/m, 0) for
/// m in {2,3,4,6} and degrees <= 4, within thirty seconds.
#[test]
fn acceptance_1_cyclic_group_oracle() {
    let started = Instant::now();
    for m in [2u32, 3, 4, 6] {
        // periodic resolution: alternating boundaries 0 and multiplication
        // by m on a single generator per degree
        let dims = vec![1usize; 6];
        let mut boundaries = vec![IntMatrix::zero(0, 1)];
        for n in 1..6 {
            let mut b = IntMatrix::zero(1, 1);
            if n % 2 == 0 {
                b.set(0, 0, BigInt::from(m));
            }
            boundaries.push(b);
        }
        let oracle = IntegerChainComplex::from_boundaries(dims, boundaries).unwrap();
        let g = std::sync::Arc::new(GroupoidSpec::CyclicGroup { m }.build().unwrap());
        let table = groupoid_homology_table(&g, 4, DEFAULT_CAP).unwrap();
        for (n, h) in table.iter().enumerate() {
            let expected = homology(&oracle, n);
            assert_eq!(
                (h.free_rank, &h.torsion),
                (expected.free_rank, &expected.torsion),
                "cyclic {m}, degree {n}"
            );
        }
        let shown: Vec<String> = table.iter().map(|h| h.to_string()).collect();
        let want = vec![
            "Z".to_string(),
            format!("Z/{m}"),
            "0".to_string(),
            format!("Z/{m}"),
            "0".to_string(),
        ];
        assert_eq!(shown, want, "cyclic {m}");
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 30, "criterion 1 took {elapsed:?}");
    println!("ACCEPTANCE 1: PASS - cyclic group homology matches the periodic resolution (m in {{2,3,4,6}}, degrees <= 4, {elapsed:?})");
}

/// Criterion 2: the resolution contraction certificate passes for every
/// corpus groupoid (>= 30 instances, <= 60 arrows) through degree 3, as an
/// exact matrix identity.
#[test]
fn acceptance_2_resolution_exactness() {
    let corpus = corpus_groupoids();
    assert!(corpus.len() >= 30);
    for e in &corpus {
        assert!(e.g.n_arrows() <= 60);
        let cert = resolution_contraction(&e.g, 3, DEFAULT_CAP)
            .unwrap_or_else(|err| panic!("{}: {err}", e.name));
        match cert.verify().unwrap() {
            Ok(()) => {}
            Err(d) => panic!("{}: contraction fails at {d}", e.name),
        }
    }
    println!(
        "ACCEPTANCE 2: PASS - resolution contraction certificates hold on {} groupoids (degrees <= 3, exact)",
        corpus.len()
    );
}

/// Criterion 3: the two ordering homotopies hold on >= 50 corpus colourings
/// through degree 4, before and after coinvariants, exactly.
#[test]
fn acceptance_3_homotopy_identities() {
    let colourings = corpus_colourings().unwrap();
    assert!(colourings.len() >= 50);
    for entry in &colourings {
        let data = nerve(&entry.colouring, 5, DEFAULT_CAP)
            .unwrap_or_else(|err| panic!("{}: {err}", entry.name));
        let h = homotopy_h(&data).unwrap();
        assert!(h.chain_level.holds().unwrap(), "{}: h (chains)", entry.name);
        assert!(h.coinvariant_level.holds().unwrap(), "{}: h (coinvariants)", entry.name);
        let k = homotopy_k(&data).unwrap();
        assert!(k.chain_level.holds().unwrap(), "{}: k (chains)", entry.name);
        assert!(k.coinvariant_level.holds().unwrap(), "{}: k (coinvariants)", entry.name);
    }
    println!(
        "ACCEPTANCE 3: PASS - ordering homotopies certified on {} colourings (degrees <= 4, chain level and coinvariants)",
        colourings.len()
    );
}

/// Criterion 4: homology of a colouring with d+1 colours vanishes exactly in
/// degrees d < n <= d+3, and agrees with the ordered-subnerve homology in
/// every computed degree (the equality is asserted inside the table call).
#[test]
fn acceptance_4_vanishing() {
    let colourings = corpus_colourings().unwrap();
    let mut checked = 0usize;
    for entry in &colourings {
        let d = entry.colouring.d();
        let table = colouring_homology_table(&entry.colouring, d + 3, DEFAULT_CAP)
            .unwrap_or_else(|err| panic!("{}: {err}", entry.name));
        for n in d + 1..=d + 3 {
            assert!(
                table[n].is_zero(),
                "{}: H_{n} = {} with {} colours",
                entry.name,
                table[n],
                d + 1
            );
            checked += 1;
        }
    }
    println!(
        "ACCEPTANCE 4: PASS - {} vanishing degrees above the colour count, ordered-subnerve homology equal in all computed degrees",
        checked
    );
}

/// Criterion 5: for every principal corpus groupoid the anti-Cech homology
/// equals the groupoid homology in degrees <= 3 and the induced comparison
/// maps compose to the identity on homology in both orders.
#[test]
fn acceptance_5_comparison() {
    let corpus = principal_corpus();
    for e in &corpus {
        let mut steps = 1;
        while (1usize << steps) < e.g.n_arrows() {
            steps += 1;
        }
        let seq = build_anti_cech(&e.g, steps + 2, 3, DEFAULT_CAP)
            .unwrap_or_else(|err| panic!("{}: {err}", e.name));
        let report = compare_with_groupoid(&seq, 3, DEFAULT_CAP)
            .unwrap_or_else(|err| panic!("{}: {err}", e.name));
        assert!(report.iso, "{}: comparison failed", e.name);
        for n in 0..=3 {
            let ha = anti_cech_homology(&seq, n).unwrap();
            let hg = groupoid_homology_table(&e.g, n, DEFAULT_CAP).unwrap().pop().unwrap();
            assert_eq!(ha, hg, "{}: degree {n}", e.name);
        }
    }
    println!(
        "ACCEPTANCE 5: PASS - anti-Cech homology equals groupoid homology with mutually inverse induced maps on {} principal groupoids (degrees <= 3)",
        corpus.len()
    );
}

/// Criterion 6: every witness-derived colouring is Lebesgue at its scale,
/// has at most d+1 parts, vanishes above d, and has torsion-free H_d.
#[test]
fn acceptance_6_dad_pipeline() {
    let mut produced = 0usize;
    for e in principal_corpus() {
        if e.g.n_units() > 12 {
            continue; // stay within the exact witness search
        }
        let k = ScaleSet::all(&e.g);
        let k3 = k.cube(&e.g);
        // a spread of caps: the whole groupoid, and a per-orbit budget
        let caps = [e.g.n_arrows(), (e.g.n_arrows() / 2).max(1)];
        for cap in caps {
            let found = search_witness(&e.g, &k3, 3, cap).unwrap();
            let WitnessSearch::Found(w) = found else { continue };
            let d = w.d();
            let colouring = dad_witness_to_colouring(&e.g, &k, &w)
                .unwrap_or_else(|err| panic!("{}: {err}", e.name));
            assert!(
                groupoid_homology::anticech::is_k_lebesgue(&colouring, &k),
                "{}: derived colouring not Lebesgue",
                e.name
            );
            assert!(colouring.parts().len() <= d + 1, "{}: too many parts", e.name);
            let table = colouring_homology_table(&colouring, d + 3, DEFAULT_CAP).unwrap();
            for n in d + 1..=d + 3 {
                assert!(table[n].is_zero(), "{}: H_{n} nonzero", e.name);
            }
            assert!(
                table[d].is_torsion_free(),
                "{}: H_d has torsion {:?}",
                e.name,
                table[d].torsion
            );
            produced += 1;
        }
    }
    assert!(produced >= 10, "only {produced} witness-derived colourings");
    println!(
        "ACCEPTANCE 6: PASS - {} witness-derived colourings: Lebesgue, <= d+1 parts, vanishing above d, torsion-free H_d",
        produced
    );
}

/// Criterion 7: the two translations between point-tuple chains and
/// pair-groupoid coinvariants are mutually inverse chain maps, exactly, for
/// |X| <= 8 and degrees <= 3, across 100 random chains.
#[test]
fn acceptance_7_uniformly_finite_translation() {
    let mut rng = StdRng::seed_from_u64(23);
    let mut spaces = Vec::new();
    for size in [2usize, 3, 5, 8] {
        let points: Vec<String> = (0..size).map(|i| format!("x{i}")).collect();
        let dist: Vec<Vec<BigRational>> = (0..size)
            .map(|i| {
                (0..size)
                    .map(|j| {
                        let d = (i as i64 - j as i64).abs();
                        BigRational::from_integer(BigInt::from(d))
                    })
                    .collect()
            })
            .collect();
        spaces.push(FiniteMetricSpace::new(points, dist).unwrap());
    }
    let mut chains_checked = 0usize;
    for space in &spaces {
        let max_degree = 3.min(if space.len() >= 8 { 2 } else { 3 });
        let tr = uf_translation(space, max_degree, DEFAULT_CAP).unwrap();
        assert!(tr.round_trips_are_identity(), "|X| = {}", space.len());
        assert!(tr.chain_maps_commute(), "|X| = {}", space.len());
        // random chains round-trip through the matrices
        for _ in 0..(100 / spaces.len() + 1) {
            let degree = rng.gen_range(0..=max_degree);
            let mut coeffs = BTreeMap::new();
            for _ in 0..rng.gen_range(1..=6) {
                let tuple: Vec<u32> = (0..=degree)
                    .map(|_| rng.gen_range(0..space.len() as u32))
                    .collect();
                coeffs.insert(tuple, BigInt::from(rng.gen_range(-4i64..=4)));
            }
            let chain = UfChain::new(degree, coeffs);
            let n = space.len();
            let mut col = IntMatrix::zero(tr.uf.dim(degree), 1);
            for (t, v) in &chain.coefficients {
                let idx = t.iter().fold(0usize, |acc, &p| acc * n + p as usize);
                col.add_at(idx, 0, v);
            }
            let round = tr.alphas[degree].mul(&tr.beta_of_chain(&chain));
            assert_eq!(round, col, "alpha(beta(c)) != c on |X| = {n}");
            chains_checked += 1;
        }
    }
    assert!(chains_checked >= 100);
    println!(
        "ACCEPTANCE 7: PASS - alpha/beta mutually inverse chain maps on {} random chains (|X| <= 8, degrees <= 3, exact)",
        chains_checked
    );
}

/// Criterion 8: engine soundness. Smith form invariants on 500 random
/// matrices; homology free rank against a fraction-free rational oracle on
/// 200 random complexes.
#[test]
fn acceptance_8_engine_soundness() {
    fn bareiss_det(a: &IntMatrix) -> BigInt {
        let n = a.rows();
        if n == 0 {
            return BigInt::one();
        }
        let mut m: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| a.get(i, j)).collect()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                let Some(swap) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                    return BigInt::zero();
                };
                m.swap(k, swap);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    m[i][j] = num.div_floor(&prev);
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        sign * m[n - 1][n - 1].clone()
    }
    fn rational_rank(a: &IntMatrix) -> usize {
        let (rows, cols) = (a.rows(), a.cols());
        let mut m: Vec<Vec<BigInt>> = (0..rows)
            .map(|i| (0..cols).map(|j| a.get(i, j)).collect())
            .collect();
        let mut rank = 0;
        let mut prev = BigInt::one();
        for col in 0..cols {
            let Some(p) = (rank..rows).find(|&r| !m[r][col].is_zero()) else { continue };
            m.swap(rank, p);
            for i in rank + 1..rows {
                for j in col + 1..cols {
                    let num = &m[i][j] * &m[rank][col] - &m[i][col] * &m[rank][j];
                    m[i][j] = num.div_floor(&prev);
                }
                m[i][col] = BigInt::zero();
            }
            prev = m[rank][col].clone();
            rank += 1;
            if rank == rows {
                break;
            }
        }
        rank
    }

    fn random_unimodular(rng: &mut StdRng, n: usize) -> IntMatrix {
        let mut m = IntMatrix::identity(n);
        for _ in 0..2 * n {
            let i = rng.gen_range(0..n);
            let j = rng.gen_range(0..n);
            if i == j {
                continue;
            }
            let c = BigInt::from(rng.gen_range(-2i64..=2));
            for col in 0..n {
                let v = m.get(i, col) + &c * m.get(j, col);
                m.set(i, col, v);
            }
        }
        m
    }

    let mut rng = StdRng::seed_from_u64(29);
    for trial in 0..500 {
        let rows = rng.gen_range(1..=40);
        let cols = rng.gen_range(1..=40);
        let mut a = IntMatrix::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if rng.gen_bool(0.12) {
                    a.set(i, j, BigInt::from(rng.gen_range(-9i64..=9)));
                }
            }
        }
        let f = smith_normal_form(&a);
        assert_eq!(f.u.mul(&a).mul(&f.v), f.d, "trial {trial}: U A V != D");
        assert_eq!(bareiss_det(&f.u).abs(), BigInt::one(), "trial {trial}: U");
        assert_eq!(bareiss_det(&f.v).abs(), BigInt::one(), "trial {trial}: V");
        let mut prev: Option<BigInt> = None;
        for i in 0..rows.min(cols) {
            let d = f.d.get(i, i);
            assert!(!d.is_negative(), "trial {trial}");
            if d.is_zero() {
                prev = Some(d);
                continue;
            }
            if let Some(p) = &prev {
                assert!(!p.is_zero(), "trial {trial}: nonzero after zero");
                assert!(d.mod_floor(p).is_zero(), "trial {trial}: chain");
            }
            prev = Some(d);
        }
        // transform-free query agrees with the transform-tracking one
        let fast: Vec<BigInt> = invariant_factors(&a);
        let from_d: Vec<BigInt> = (0..rows.min(cols))
            .map(|i| f.d.get(i, i))
            .filter(|d| !d.is_zero())
            .collect();
        assert_eq!(fast, from_d, "trial {trial}: query paths disagree");
        // the diagonal is invariant under unimodular pre/post multiplication
        let twist_rows = random_unimodular(&mut rng, rows);
        let twist_cols = random_unimodular(&mut rng, cols);
        let twisted = twist_rows.mul(&a).mul(&twist_cols);
        assert_eq!(invariant_factors(&twisted), fast, "trial {trial}: twist");
    }
    // 200 random complexes: free rank against the rational oracle
    let mut rng = StdRng::seed_from_u64(31);
    for trial in 0..200 {
        let degrees = rng.gen_range(2..=4);
        let dims: Vec<usize> = (0..degrees).map(|_| rng.gen_range(1..=6)).collect();
        let mut boundaries = vec![IntMatrix::zero(0, dims[0])];
        for n in 1..degrees {
            let mut b = IntMatrix::zero(dims[n - 1], dims[n]);
            if n % 2 == 1 {
                for i in 0..dims[n - 1].min(dims[n]) {
                    if rng.gen_bool(0.6) {
                        b.set(i, i, BigInt::from(rng.gen_range(1i64..=5)));
                    }
                }
            }
            boundaries.push(b);
        }
        let c = IntegerChainComplex::from_boundaries(dims.clone(), boundaries).unwrap();
        for n in 0..degrees {
            let h = homology(&c, n);
            let expect = c.dim(n) - rational_rank(&c.boundary(n)) - rational_rank(&c.boundary(n + 1));
            assert_eq!(h.free_rank, expect, "trial {trial} degree {n}");
        }
    }
    println!("ACCEPTANCE 8: PASS - Smith form invariants on 500 random matrices; free ranks match the rational oracle on 200 complexes");
}

/// Criterion 9: two runs of the full command suite with different thread
/// counts produce byte-identical reports under --deterministic.
#[test]
fn acceptance_9_deterministic_cli() {
    use std::process::Command;
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, text: &str| {
        let path = dir.path().join(name);
        std::fs::write(&path, text).unwrap();
        path
    };
    let pair3 = write("pair3.json", r#"{"kind": "pair", "n": 3}"#);
    let cyclic4 = write("cyclic4.json", r#"{"kind": "cyclic_group", "m": 4}"#);
    let matrix = write("m.txt", "2 2\n2 4\n6 8\n");
    let colouring = write(
        "col.json",
        r#"{"parts": [["(1,1)","(1,2)","(2,1)","(2,2)","(1,3)","(3,1)","(2,3)","(3,2)","(3,3)"], ["(1,1)","(2,2)","(3,3)"]]}"#,
    );
    let metric = write(
        "metric.json",
        r#"{"points":["a","b","c"],"dist":[[0,1,2],[1,0,1],[2,1,0]]}"#,
    );
    let scale = write("scale.json", r#"["(1,2)","(2,1)"]"#);
    let exe = env!("CARGO_BIN_EXE_ghom");
    let suite: Vec<Vec<String>> = vec![
        vec!["homology".into(), pair3.display().to_string(), "--max-degree".into(), "2".into()],
        vec!["homology".into(), cyclic4.display().to_string(), "--max-degree".into(), "3".into()],
        vec!["snf".into(), matrix.display().to_string()],
        vec![
            "verify".into(),
            pair3.display().to_string(),
            "--suite".into(),
            "resolution".into(),
            "--max-degree".into(),
            "2".into(),
        ],
        vec![
            "verify".into(),
            pair3.display().to_string(),
            "--suite".into(),
            "homotopies".into(),
            "--colouring".into(),
            colouring.display().to_string(),
            "--max-degree".into(),
            "2".into(),
        ],
        vec![
            "colouring-homology".into(),
            pair3.display().to_string(),
            colouring.display().to_string(),
            "--max-degree".into(),
            "2".into(),
        ],
        vec!["anticech".into(), pair3.display().to_string(), "--steps".into(), "6".into()],
        vec![
            "dad-colouring".into(),
            pair3.display().to_string(),
            scale.display().to_string(),
            "--cap".into(),
            "9".into(),
        ],
        vec!["uf-homology".into(), metric.display().to_string(), "--max-degree".into(), "2".into()],
    ];
    let run_suite = |threads: &str| -> Vec<(String, i32)> {
        suite
            .iter()
            .map(|args| {
                let out = Command::new(exe)
                    .args(args)
                    .arg("--deterministic")
                    .arg("--threads")
                    .arg(threads)
                    .output()
                    .expect("binary runs");
                (
                    String::from_utf8(out.stdout).unwrap(),
                    out.status.code().unwrap_or(-1),
                )
            })
            .collect()
    };
    let first = run_suite("1");
    let second = run_suite("8");
    for ((a, ca), (b, cb)) in first.iter().zip(&second) {
        assert_eq!(a, b, "outputs differ between thread counts");
        assert_eq!(ca, cb, "exit codes differ between thread counts");
        assert_eq!(*ca, 0, "suite command failed:\n{a}");
    }
    println!(
        "ACCEPTANCE 9: PASS - {} commands byte-identical across thread counts under --deterministic",
        suite.len()
    );
}

/// Redundant summary helper so the suite prints the headline groups too.
#[test]
fn acceptance_headline_values() {
    let g = std::sync::Arc::new(GroupoidSpec::Pair { n: 3 }.build().unwrap());
    let table = groupoid_homology_table(&g, 2, DEFAULT_CAP).unwrap();
    assert_eq!(table[0], HomologyGroup::free(1));
    assert!(table[1].is_zero());
    assert!(table[2].is_zero());
}
