#![allow(clippy::needless_range_loop)]

//! Cross-module invariants checked against independent oracles: fraction-free
//! rank and determinant for the linear algebra, exhaustive combinatorics for
//! the permutation signs and the cover overlap property, and structural round
//! trips for groupoids.

use groupoid_homology::colouring::{colour_map, cover, nerve, sigma_a, sigma_x};
use groupoid_homology::complex::{homology, IntegerChainComplex};
use groupoid_homology::corpus::{corpus_colourings, corpus_groupoids, principal_corpus};
use groupoid_homology::dad::comb_blocks;
use groupoid_homology::groupoid::{
    generated_subgroupoid, principal_blocks, FiniteAmpleGroupoid, GroupoidSpec, ScaleSet, Subgroupoid,
};
use groupoid_homology::matrix::IntMatrix;
use groupoid_homology::matui::{
    eg_complex, groupoid_homology_table, matui_complex, matui_eg_identification, tensor_shift_check,
};
use groupoid_homology::snf::{invariant_factors, smith_normal_form};
use groupoid_homology::ss::DEFAULT_CAP;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::sync::Arc;

// ---------------------------------------------------------------------------
// independent linear-algebra oracles (fraction-free elimination)
// ---------------------------------------------------------------------------

/// Bareiss determinant of a square matrix.
fn bareiss_det(a: &IntMatrix) -> BigInt {
    let n = a.rows();
    assert_eq!(n, a.cols());
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
        }
        for i in k + 1..n {
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    sign * m[n - 1][n - 1].clone()
}

/// Rank over the rationals by fraction-free elimination.
fn rational_rank(a: &IntMatrix) -> usize {
    let (rows, cols) = (a.rows(), a.cols());
    let mut m: Vec<Vec<BigInt>> = (0..rows)
        .map(|i| (0..cols).map(|j| a.get(i, j)).collect())
        .collect();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        let Some(pivot_row) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot_row);
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

fn random_sparse(rng: &mut StdRng, rows: usize, cols: usize) -> IntMatrix {
    let mut m = IntMatrix::zero(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            if rng.gen_bool(0.2) {
                let v = rng.gen_range(-9i64..=9);
                m.set(i, j, BigInt::from(v));
            }
        }
    }
    m
}

/// Random unimodular matrix: a product of elementary row operations.
fn random_unimodular(rng: &mut StdRng, n: usize) -> IntMatrix {
    let mut m = IntMatrix::identity(n);
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i == j {
            continue;
        }
        let c = BigInt::from(rng.gen_range(-2i64..=2));
        // row_i += c * row_j
        for col in 0..n {
            let v = m.get(i, col) + &c * m.get(j, col);
            m.set(i, col, v);
        }
    }
    m
}

#[test]
fn snf_invariants_on_random_matrices() {
    let mut rng = StdRng::seed_from_u64(7);
    for trial in 0..60 {
        let rows = rng.gen_range(1..=12);
        let cols = rng.gen_range(1..=12);
        let a = random_sparse(&mut rng, rows, cols);
        let f = smith_normal_form(&a);
        assert_eq!(f.u.mul(&a).mul(&f.v), f.d, "U A V != D on trial {trial}");
        assert_eq!(bareiss_det(&f.u).abs(), BigInt::one(), "U not unimodular");
        assert_eq!(bareiss_det(&f.v).abs(), BigInt::one(), "V not unimodular");
        let mut prev: Option<BigInt> = None;
        for i in 0..rows.min(cols) {
            let d = f.d.get(i, i);
            assert!(!d.is_negative());
            if let (Some(p), false) = (&prev, d.is_zero()) {
                if !p.is_zero() {
                    assert!(d.mod_floor(p).is_zero(), "divisibility chain broken");
                }
            }
            prev = Some(d);
        }
        // diagonal invariance under unimodular pre/post multiplication
        let u = random_unimodular(&mut rng, rows);
        let v = random_unimodular(&mut rng, cols);
        assert_eq!(invariant_factors(&u.mul(&a).mul(&v)), invariant_factors(&a));
        // rank agrees with fraction-free elimination
        assert_eq!(invariant_factors(&a).len(), rational_rank(&a));
    }
}

// ---------------------------------------------------------------------------
// random chain complexes with controlled homology
// ---------------------------------------------------------------------------

/// A random complex of length <= 4 built from shifted elementary pieces and
/// conjugated by unimodular basis changes, so dd = 0 holds by construction.
fn random_complex(rng: &mut StdRng) -> IntegerChainComplex {
    let degrees = rng.gen_range(2..=4);
    let dims: Vec<usize> = (0..degrees).map(|_| rng.gen_range(1..=5)).collect();
    let mut boundaries: Vec<IntMatrix> = Vec::new();
    boundaries.push(IntMatrix::zero(0, dims[0]));
    for n in 1..degrees {
        let mut b = IntMatrix::zero(dims[n - 1], dims[n]);
        // elementary pieces: match basis vector i below with i above, with a
        // random multiplier, on a random partial matching; consecutive
        // boundaries stay composable because matched targets are never
        // matched again as sources
        if n % 2 == 1 {
            for i in 0..dims[n - 1].min(dims[n]) {
                if rng.gen_bool(0.6) {
                    b.set(i, i, BigInt::from(rng.gen_range(1i64..=4)));
                }
            }
        }
        boundaries.push(b);
    }
    // conjugate by unimodular changes of basis degreewise
    let changes: Vec<IntMatrix> = dims.iter().map(|&d| random_unimodular(rng, d)).collect();
    let inverses: Vec<IntMatrix> = changes
        .iter()
        .map(|c| {
            // invert a unimodular matrix through its Smith form: C^{-1} = V D^{-1} U
            let f = smith_normal_form(c);
            f.v.mul(&f.d_inverse_for_unimodular()).mul(&f.u)
        })
        .collect();
    let mut new_boundaries = vec![IntMatrix::zero(0, dims[0])];
    for n in 1..degrees {
        new_boundaries.push(inverses[n - 1].mul(&boundaries[n]).mul(&changes[n]));
    }
    // first boundary in the new basis is still the zero map
    IntegerChainComplex::from_boundaries(dims, new_boundaries).expect("conjugated complex")
}

trait UnimodularInverseHelper {
    fn d_inverse_for_unimodular(&self) -> IntMatrix;
}

impl UnimodularInverseHelper for groupoid_homology::snf::SmithForm {
    fn d_inverse_for_unimodular(&self) -> IntMatrix {
        // for unimodular input the Smith diagonal is the identity
        assert_eq!(self.d, IntMatrix::identity(self.d.rows()));
        IntMatrix::identity(self.d.rows())
    }
}

#[test]
fn homology_free_rank_matches_rational_oracle() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..40 {
        let c = random_complex(&mut rng);
        for n in 0..=c.top_degree() {
            let h = homology(&c, n);
            let expect = c.dim(n) - rational_rank(&c.boundary(n)) - rational_rank(&c.boundary(n + 1));
            assert_eq!(h.free_rank, expect, "degree {n}");
        }
    }
}

#[test]
fn homology_invariant_under_basis_permutation() {
    let mut rng = StdRng::seed_from_u64(13);
    for _ in 0..20 {
        let c = random_complex(&mut rng);
        // permute every degree by conjugating with permutation matrices
        let perms: Vec<Vec<usize>> = (0..=c.top_degree())
            .map(|n| {
                let mut p: Vec<usize> = (0..c.dim(n)).collect();
                for i in (1..p.len()).rev() {
                    p.swap(i, rng.gen_range(0..=i));
                }
                p
            })
            .collect();
        let pmat = |p: &Vec<usize>| {
            let mut m = IntMatrix::zero(p.len(), p.len());
            for (i, &v) in p.iter().enumerate() {
                m.set(v, i, BigInt::one());
            }
            m
        };
        let pinv = |p: &Vec<usize>| pmat(p).transpose();
        let mut boundaries = vec![IntMatrix::zero(0, c.dim(0))];
        for n in 1..=c.top_degree() {
            boundaries.push(pinv(&perms[n - 1]).mul(&c.boundary(n)).mul(&pmat(&perms[n])));
        }
        let dims: Vec<usize> = (0..=c.top_degree()).map(|n| c.dim(n)).collect();
        let permuted = IntegerChainComplex::from_boundaries(dims, boundaries).unwrap();
        for n in 0..=c.top_degree() {
            assert_eq!(homology(&c, n), homology(&permuted, n));
        }
    }
}

// ---------------------------------------------------------------------------
// groupoid structure
// ---------------------------------------------------------------------------

#[test]
fn table_round_trip_revalidates() {
    for e in corpus_groupoids() {
        if e.g.n_arrows() > 64 {
            continue;
        }
        let spec = e.g.to_table_spec();
        let rebuilt = spec.build().unwrap_or_else(|err| panic!("{}: {err}", e.name));
        assert_eq!(rebuilt.n_arrows(), e.g.n_arrows());
        assert_eq!(rebuilt.n_units(), e.g.n_units());
        rebuilt.check_associativity().unwrap();
    }
}

#[test]
fn generated_subgroupoid_idempotent_and_monotone() {
    let mut rng = StdRng::seed_from_u64(17);
    for e in corpus_groupoids().into_iter().take(12) {
        let g = &e.g;
        for _ in 0..5 {
            let seed: Vec<usize> = (0..g.n_arrows()).filter(|_| rng.gen_bool(0.25)).collect();
            let h = generated_subgroupoid(g, &seed);
            let again = generated_subgroupoid(g, h.members());
            assert_eq!(h.members(), again.members(), "{}: not idempotent", e.name);
            let mut larger = seed.clone();
            larger.extend((0..g.n_arrows()).filter(|_| rng.gen_bool(0.15)));
            let h2 = generated_subgroupoid(g, &larger);
            assert!(
                h.members().iter().all(|m| h2.contains(*m)),
                "{}: not monotone",
                e.name
            );
        }
    }
}

/// Exhaustive backtracking isomorphism search for small groupoids.
fn find_isomorphism(a: &FiniteAmpleGroupoid, b: &FiniteAmpleGroupoid) -> Option<Vec<usize>> {
    if a.n_arrows() != b.n_arrows() || a.n_units() != b.n_units() {
        return None;
    }
    let n = a.n_arrows();
    fn extend(
        a: &FiniteAmpleGroupoid,
        b: &FiniteAmpleGroupoid,
        map: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        next: usize,
    ) -> bool {
        let n = a.n_arrows();
        if next == n {
            // full check of composition under the candidate bijection
            for g in 0..n {
                for h in 0..n {
                    let lhs = a.compose(g, h).map(|x| map[x].unwrap());
                    let rhs = b.compose(map[g].unwrap(), map[h].unwrap());
                    if lhs != rhs {
                        return false;
                    }
                }
            }
            return true;
        }
        for cand in 0..n {
            if used[cand] {
                continue;
            }
            if a.is_unit(next) != b.is_unit(cand) {
                continue;
            }
            // endpoints must map consistently when already assigned
            let sa = a.src_arrow(next);
            let ra = a.rng_arrow(next);
            let sb = b.src_arrow(cand);
            let rb = b.rng_arrow(cand);
            if let Some(m) = map[sa] {
                if m != sb {
                    continue;
                }
            }
            if let Some(m) = map[ra] {
                if m != rb {
                    continue;
                }
            }
            if let Some(m) = map[a.inv(next)] {
                if m != b.inv(cand) {
                    continue;
                }
            }
            map[next] = Some(cand);
            used[cand] = true;
            if extend(a, b, map, used, next + 1) {
                return true;
            }
            map[next] = None;
            used[cand] = false;
        }
        false
    }
    let mut map = vec![None; n];
    let mut used = vec![false; n];
    if extend(a, b, &mut map, &mut used, 0) {
        Some(map.into_iter().map(|m| m.unwrap()).collect())
    } else {
        None
    }
}

#[test]
fn blocks_reassemble_up_to_isomorphism() {
    for e in principal_corpus() {
        if e.g.n_arrows() > 32 {
            continue;
        }
        let whole = Subgroupoid::new(e.g.clone(), (0..e.g.n_arrows()).collect()).unwrap();
        let pbd = principal_blocks(&whole).unwrap();
        // rebuild as a disjoint union of pair groupoids on the orbit sizes
        let spec = GroupoidSpec::DisjointUnion {
            parts: pbd
                .blocks
                .iter()
                .map(|b| GroupoidSpec::Pair {
                    n: b.orbit_units.len() as u32,
                })
                .collect(),
        };
        let rebuilt = Arc::new(spec.build().unwrap());
        assert!(
            find_isomorphism(&e.g, &rebuilt).is_some(),
            "{}: blocks do not reassemble",
            e.name
        );
        // tau runs from the basepoint to each unit
        for b in &pbd.blocks {
            for &x in &b.orbit_units {
                let t = pbd.tau(x).unwrap();
                assert_eq!(e.g.rng_pos(t), x);
                assert_eq!(e.g.src_pos(t), b.basepoint);
            }
        }
    }
}

#[test]
fn action_isomorphic_to_pair_groupoid() {
    // the swap action of the two-element group matches the pair groupoid
    let act = groupoid_homology::corpus::free_cyclic_action(2, 1).build().unwrap();
    let pair = GroupoidSpec::Pair { n: 2 }.build().unwrap();
    assert!(find_isomorphism(&act, &pair).is_some());
}

// ---------------------------------------------------------------------------
// homology models
// ---------------------------------------------------------------------------

#[test]
fn h0_counts_orbits() {
    for e in corpus_groupoids() {
        let orbits = e.g.unit_orbits().len();
        let h0 = groupoid_homology::matui::homology_of_groupoid(&e.g, 0, DEFAULT_CAP).unwrap();
        assert_eq!(h0.free_rank, orbits, "{}", e.name);
        assert!(h0.torsion.is_empty(), "{}", e.name);
    }
}

#[test]
fn group_homology_of_s3_and_klein() {
    // classical values: for the symmetric group on three letters the first
    // homology is its abelianization, the Schur multiplier vanishes, and the
    // third homology has order six; for the Klein four-group the pattern
    // follows the Kunneth formula for a product of two-element groups
    let s3 = Arc::new(groupoid_homology::corpus::s3_table().build().unwrap());
    let table = groupoid_homology_table(&s3, 3, DEFAULT_CAP).unwrap();
    let shown: Vec<String> = table.iter().map(|h| h.to_string()).collect();
    assert_eq!(shown, vec!["Z", "Z/2", "0", "Z/6"]);

    let v4 = Arc::new(groupoid_homology::corpus::klein_table().build().unwrap());
    let table = groupoid_homology_table(&v4, 3, DEFAULT_CAP).unwrap();
    let shown: Vec<String> = table.iter().map(|h| h.to_string()).collect();
    assert_eq!(shown, vec!["Z", "Z/2 + Z/2", "Z/2", "Z/2 + Z/2 + Z/2"]);
}

#[test]
fn principal_groupoids_have_trivial_higher_homology() {
    for e in principal_corpus() {
        let top = if e.g.n_arrows() <= 40 { 4 } else { 3 };
        let table = groupoid_homology_table(&e.g, top, DEFAULT_CAP).unwrap();
        for (n, h) in table.iter().enumerate().skip(1) {
            assert!(h.is_zero(), "{}: H_{n} = {h}", e.name);
        }
    }
}

#[test]
fn coinvariant_identification_across_corpus() {
    for e in corpus_groupoids().into_iter().take(14) {
        let m = matui_complex(&e.g, 3, DEFAULT_CAP).unwrap();
        let eg = eg_complex(&e.g, 3, DEFAULT_CAP).unwrap();
        let (coinv, mods) = eg.coinvariant_complex().unwrap();
        matui_eg_identification(&m, &eg, &coinv, &mods)
            .unwrap_or_else(|err| panic!("{}: {err}", e.name));
    }
}

#[test]
fn pushforward_functoriality_on_face_maps() {
    use groupoid_homology::gset::pushforward_matrix;
    for e in corpus_groupoids().into_iter().take(8) {
        let eg = eg_complex(&e.g, 2, DEFAULT_CAP).unwrap();
        // deleting coordinate 1 then coordinate 0 equals the composite map
        let f21 = eg.face_map(2, 1);
        let f10 = eg.face_map(1, 0);
        let composite: Vec<usize> = f21.iter().map(|&x| f10[x]).collect();
        let lhs = pushforward_matrix(&composite, eg.dim(0));
        let rhs = pushforward_matrix(&f10, eg.dim(0)).mul(&pushforward_matrix(&f21, eg.dim(1)));
        assert_eq!(lhs, rhs, "{}", e.name);
    }
}

#[test]
fn tensor_shift_on_small_corpus() {
    for e in corpus_groupoids() {
        if e.g.n_arrows() > 12 {
            continue;
        }
        for n in 0..=1 {
            assert!(
                tensor_shift_check(&e.g, n, DEFAULT_CAP).unwrap(),
                "{} at degree {n}",
                e.name
            );
        }
    }
}

// ---------------------------------------------------------------------------
// colouring combinatorics
// ---------------------------------------------------------------------------

#[test]
fn overlap_lemma_on_corpus_covers() {
    for entry in corpus_colourings().unwrap() {
        let cov = cover(&entry.colouring);
        for i in 0..cov.len() {
            for j in i + 1..cov.len() {
                let a = &cov.elements[i];
                let b = &cov.elements[j];
                if a.colour != b.colour {
                    continue;
                }
                let intersects = a.arrows.iter().any(|x| b.arrows.binary_search(x).is_ok());
                assert!(
                    !intersects || a.arrows == b.arrows,
                    "{}: same-colour elements intersect without being equal",
                    entry.name
                );
            }
        }
    }
}

#[test]
fn colour_map_constant_on_orbits() {
    for entry in corpus_colourings().unwrap().into_iter().take(20) {
        let data = nerve(&entry.colouring, 2, DEFAULT_CAP).unwrap();
        let cov = data.cover.as_ref();
        for n in 0..=2 {
            let level = data.full.level(n);
            for p in 0..level.len() {
                let colours = colour_map(cov, level.point(p));
                let g = entry.colouring.parent();
                for &arrow in g.source_fiber(level.anchor(p)) {
                    let q = level.act(arrow, p).unwrap();
                    assert_eq!(colours, colour_map(cov, level.point(q)), "{}", entry.name);
                }
            }
        }
    }
}

#[test]
fn sigma_sign_recursion_exhaustive() {
    // sign(sigma_a) = sign(sigma_{a+1}) * (-1)^{i_a - a} where sigma_a(i_a) = sigma(a)
    for n1 in 1..=5usize {
        let mut vectors: Vec<Vec<u32>> = vec![Vec::new()];
        for _ in 0..n1 {
            vectors = vectors
                .into_iter()
                .flat_map(|v| {
                    (0..4u32).map(move |c| {
                        let mut w = v.clone();
                        w.push(c);
                        w
                    })
                })
                .collect();
        }
        for x in vectors {
            let sigma = sigma_x(&x);
            for a in 0..n1 - 1 {
                let sa = sigma_a(&sigma, a).unwrap();
                let sa1 = sigma_a(&sigma, a + 1).unwrap();
                let ia = (0..n1).find(|&i| sa.apply(i) == sigma.apply(a)).unwrap();
                let exponent = (ia as i64 - a as i64).rem_euclid(2);
                let twist = if exponent == 0 { 1 } else { -1 };
                assert_eq!(sa.sign(), sa1.sign() * twist, "x = {x:?}, a = {a}");
            }
        }
    }
}

#[test]
fn strict_subnerve_empty_above_colour_count() {
    for entry in corpus_colourings().unwrap().into_iter().take(20) {
        let d = entry.colouring.d();
        let depth = (d + 2).min(5);
        let data = nerve(&entry.colouring, depth, DEFAULT_CAP).unwrap();
        for n in d + 1..=depth {
            assert_eq!(data.strict.dim(n), 0, "{}: strict level {n} not empty", entry.name);
        }
    }
}

#[test]
fn every_nerve_simplex_has_an_intersection_witness() {
    for entry in corpus_colourings().unwrap().into_iter().take(15) {
        let data = nerve(&entry.colouring, 3, DEFAULT_CAP).unwrap();
        let cov = data.cover.as_ref();
        for n in 0..=3 {
            for i in 0..data.full.dim(n) {
                let w = data
                    .full
                    .intersection_witness(n, i)
                    .unwrap_or_else(|| panic!("{}: simplex without witness", entry.name));
                let tuple = data.full.level(n).point(i);
                for &e in tuple {
                    assert!(
                        cov.elements[e as usize].arrows.binary_search(&w).is_ok(),
                        "{}: witness not common",
                        entry.name
                    );
                }
            }
        }
    }
}

#[test]
fn uf_homology_matches_the_pair_groupoid() {
    use groupoid_homology::uf::{pair_groupoid_on, uf_complex, FiniteMetricSpace};
    use num_rational::BigRational;
    for size in [2usize, 4] {
        let points: Vec<String> = (0..size).map(|i| format!("x{i}")).collect();
        let dist: Vec<Vec<BigRational>> = (0..size)
            .map(|i| {
                (0..size)
                    .map(|j| BigRational::from_integer(BigInt::from((i as i64 - j as i64).abs())))
                    .collect()
            })
            .collect();
        let space = FiniteMetricSpace::new(points, dist).unwrap();
        let complex = uf_complex(&space, 3).unwrap();
        let (g, _) = pair_groupoid_on(&space).unwrap();
        let table = groupoid_homology_table(&g, 2, DEFAULT_CAP).unwrap();
        for n in 0..=2 {
            assert_eq!(homology(&complex, n), table[n], "|X| = {size}, degree {n}");
        }
    }
}

// ---------------------------------------------------------------------------
// dad machinery
// ---------------------------------------------------------------------------

#[test]
fn comb_blocks_conditions_on_corpus() {
    for e in principal_corpus().into_iter().take(10) {
        let g = &e.g;
        for k in [ScaleSet::all(g), ScaleSet::units_only(g)] {
            for x in 0..g.n_units() {
                let comb = comb_blocks(g, &k, x).unwrap();
                // (i) the blocks partition the window
                let mut window: Vec<usize> = g
                    .range_fiber(x)
                    .iter()
                    .copied()
                    .filter(|&a| k.contains(a))
                    .collect();
                window.sort_unstable();
                let mut blocks: Vec<usize> =
                    comb.blocks.iter().flat_map(|b| b.arrows().to_vec()).collect();
                blocks.sort_unstable();
                assert_eq!(window, blocks, "{}", e.name);
                // (ii) each block ranges onto the base
                for b in &comb.blocks {
                    assert!(b.arrows().iter().all(|&a| g.rng_pos(a) == x));
                    assert_eq!(b.arrows().len(), comb.base.len());
                }
                // (iii) sources pairwise disjoint
                let mut sources: Vec<usize> = comb
                    .blocks
                    .iter()
                    .flat_map(|b| b.arrows().iter().map(|&a| g.src_pos(a)))
                    .collect();
                let before = sources.len();
                sources.sort_unstable();
                sources.dedup();
                assert_eq!(before, sources.len(), "{}", e.name);
            }
        }
    }
}
