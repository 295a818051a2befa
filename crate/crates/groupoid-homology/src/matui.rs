//! Homology models for a finite groupoid.
//!
//! Three interlocking models are built here: the complex on composable
//! tuples whose homology is H_*(G), the equivariant complex on common-range
//! tuples with its levelwise G-action, and the coinvariants of the latter,
//! which identify with the former by explicit mutually inverse basis maps.
//! The contraction certifying exactness of the augmented common-range
//! complex and the rank check for the tensor-shift isomorphism both live
//! here as exact certificates.

use crate::certificate::ChainMapCertificate;
use crate::complex::{homology, HomologyGroup, IntegerChainComplex};
use crate::error::{Error, Result};
use crate::groupoid::FiniteAmpleGroupoid;
use crate::gset::CoinvariantModule;
use crate::matrix::IntMatrix;
use crate::ss::{tuple_space, SsGSpace};
use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

// ---------------------------------------------------------------------------
// the convolution ring
// ---------------------------------------------------------------------------

/// Finitely supported Z-valued function on arrows.
pub type ArrowFunction = BTreeMap<usize, BigInt>;

pub fn indicator(arrows: &[usize]) -> ArrowFunction {
    arrows.iter().map(|&a| (a, BigInt::from(1))).collect()
}

fn normalize(f: ArrowFunction) -> ArrowFunction {
    f.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

/// Convolution product: (f * h)(k) = sum over factorizations k = a b.
pub fn convolution(g: &FiniteAmpleGroupoid, f: &ArrowFunction, h: &ArrowFunction) -> ArrowFunction {
    let mut out = ArrowFunction::new();
    for (&a, va) in f {
        for (&b, vb) in h {
            if let Some(ab) = g.compose(a, b) {
                let e = out.entry(ab).or_insert_with(BigInt::zero);
                *e += va * vb;
            }
        }
    }
    normalize(out)
}

/// Augmentation: sums a function over source fibres, landing on units
/// (keyed by unit position).
pub fn augmentation(g: &FiniteAmpleGroupoid, f: &ArrowFunction) -> BTreeMap<usize, BigInt> {
    let mut out: BTreeMap<usize, BigInt> = BTreeMap::new();
    for (&a, v) in f {
        let e = out.entry(g.src_pos(a)).or_insert_with(BigInt::zero);
        *e += v;
    }
    out.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

// ---------------------------------------------------------------------------
// the composable-tuple complex
// ---------------------------------------------------------------------------

/// The chain complex on composable tuples: degree 0 is the unit space,
/// degree n the chains of n composable arrows, and the boundary alternates
/// dropping the outer entries with multiplying adjacent ones. Its homology
/// is the homology of the groupoid.
pub struct MatuiComplex {
    pub g: Arc<FiniteAmpleGroupoid>,
    /// Per degree: the tuples (degree 0 stores one singleton per unit).
    pub tuples: Vec<Vec<Vec<u32>>>,
    index: Vec<HashMap<Vec<u32>, usize>>,
    pub complex: IntegerChainComplex,
}

impl MatuiComplex {
    pub fn tuple_index(&self, degree: usize, tuple: &[u32]) -> Option<usize> {
        self.index[degree].get(tuple).copied()
    }
}

pub fn matui_complex(g: &Arc<FiniteAmpleGroupoid>, max_degree: usize, cap: usize) -> Result<MatuiComplex> {
    let mut tuples: Vec<Vec<Vec<u32>>> = Vec::new();
    tuples.push((0..g.n_units()).map(|u| vec![u as u32]).collect());
    for n in 1..=max_degree {
        let mut level: Vec<Vec<u32>> = Vec::new();
        let mut stack: Vec<Vec<u32>> = (0..g.n_arrows()).rev().map(|a| vec![a as u32]).collect();
        while let Some(prefix) = stack.pop() {
            if prefix.len() == n {
                level.push(prefix);
                if level.len() > cap {
                    return Err(Error::EnumerationCapExceeded {
                        degree: n,
                        count: level.len(),
                        cap,
                    });
                }
                continue;
            }
            let last = *prefix.last().unwrap() as usize;
            for &b in g.range_fiber(g.src_pos(last)).iter().rev() {
                let mut next = prefix.clone();
                next.push(b as u32);
                stack.push(next);
            }
        }
        tuples.push(level);
    }
    let index: Vec<HashMap<Vec<u32>, usize>> = tuples
        .iter()
        .map(|lvl| lvl.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect())
        .collect();
    let mut boundaries = Vec::new();
    boundaries.push(IntMatrix::zero(0, tuples[0].len()));
    for n in 1..=max_degree {
        let mut m = IntMatrix::zero(tuples[n - 1].len(), tuples[n].len());
        for (col, t) in tuples[n].iter().enumerate() {
            let mut sign = BigInt::from(1);
            for i in 0..=n {
                let face: Vec<u32> = if n == 1 {
                    // degree one: source unit minus range unit
                    let a = t[0] as usize;
                    if i == 0 {
                        vec![g.src_pos(a) as u32]
                    } else {
                        vec![g.rng_pos(a) as u32]
                    }
                } else if i == 0 {
                    t[1..].to_vec()
                } else if i == n {
                    t[..n - 1].to_vec()
                } else {
                    let mut f = Vec::with_capacity(n - 1);
                    f.extend_from_slice(&t[..i - 1]);
                    let prod = g
                        .compose(t[i - 1] as usize, t[i] as usize)
                        .expect("adjacent entries compose");
                    f.push(prod as u32);
                    f.extend_from_slice(&t[i + 1..]);
                    f
                };
                let row = index[n - 1][&face];
                m.add_at(row, col, &sign);
                sign = -sign;
            }
        }
        boundaries.push(m);
    }
    let bases = tuples
        .iter()
        .enumerate()
        .map(|(n, lvl)| {
            lvl.iter()
                .map(|t| {
                    if n == 0 {
                        g.unit_id(t[0] as usize).to_string()
                    } else {
                        let parts: Vec<String> = t.iter().map(|&a| g.id(a as usize).to_string()).collect();
                        format!("({})", parts.join(","))
                    }
                })
                .collect()
        })
        .collect();
    let complex = IntegerChainComplex::new(bases, boundaries)?;
    Ok(MatuiComplex {
        g: g.clone(),
        tuples,
        index,
        complex,
    })
}

/// H_n(G) from the composable-tuple complex.
pub fn homology_of_groupoid(g: &Arc<FiniteAmpleGroupoid>, n: usize, cap: usize) -> Result<HomologyGroup> {
    let m = matui_complex(g, n + 1, cap)?;
    Ok(homology(&m.complex, n))
}

/// H_0..H_max in one pass over a single complex.
pub fn groupoid_homology_table(
    g: &Arc<FiniteAmpleGroupoid>,
    max_degree: usize,
    cap: usize,
) -> Result<Vec<HomologyGroup>> {
    let m = matui_complex(g, max_degree + 1, cap)?;
    Ok((0..=max_degree).map(|n| homology(&m.complex, n)).collect())
}

// ---------------------------------------------------------------------------
// the common-range tuple complex and its coinvariants
// ---------------------------------------------------------------------------

/// The levelwise free G-space of common-range tuples, with boundaries.
pub fn eg_complex(g: &Arc<FiniteAmpleGroupoid>, max_degree: usize, cap: usize) -> Result<SsGSpace> {
    tuple_space(g, None, max_degree, cap)
}

/// The mutually inverse basis maps between composable tuples and the orbits
/// of common-range tuples, checked to commute with both boundaries.
pub struct EgIdentification {
    /// Per degree, composable tuple index -> orbit index.
    pub to_orbits: Vec<Vec<usize>>,
    /// Per degree, orbit index -> composable tuple index.
    pub from_orbits: Vec<Vec<usize>>,
}

/// Builds the identification and verifies it is a degreewise bijection
/// commuting with the boundaries, as exact matrix identities.
pub fn matui_eg_identification(
    m: &MatuiComplex,
    eg: &SsGSpace,
    eg_coinv: &IntegerChainComplex,
    coinvs: &[CoinvariantModule],
) -> Result<EgIdentification> {
    let g = m.g.as_ref();
    let degrees = (m.tuples.len()).min(coinvs.len());
    let mut to_orbits: Vec<Vec<usize>> = Vec::new();
    let mut from_orbits: Vec<Vec<usize>> = Vec::new();
    for n in 0..degrees {
        let coinv = &coinvs[n];
        let mut fwd = Vec::with_capacity(m.tuples[n].len());
        for t in &m.tuples[n] {
            // (g_1,...,g_n) -> orbit of (e, g_1, g_1 g_2, ..., g_1...g_n)
            let mut tuple: Vec<u32> = Vec::with_capacity(n + 1);
            if n == 0 {
                tuple.push(g.unit_arrow(t[0] as usize) as u32);
            } else {
                let e = g.unit_arrow(g.rng_pos(t[0] as usize));
                tuple.push(e as u32);
                let mut acc = t[0] as usize;
                tuple.push(acc as u32);
                for &next in &t[1..] {
                    acc = g.compose(acc, next as usize).expect("composable chain");
                    tuple.push(acc as u32);
                }
            }
            let p = eg.level(n).index_of(&tuple).ok_or_else(|| Error::DimensionMismatch {
                context: format!("identification at degree {n}"),
                expected: "tuple present".into(),
                got: "missing".into(),
            })?;
            fwd.push(coinv.orbit_of[p]);
        }
        // inverse: orbit rep (c_0,...,c_n) -> (inv(c_0) c_1, ..., inv(c_{n-1}) c_n)
        let mut bwd = Vec::with_capacity(coinv.n_orbits());
        for &rep in &coinv.orbit_reps {
            let tuple = eg.level(n).point(rep);
            let bg: Vec<u32> = if n == 0 {
                vec![g.src_pos(tuple[0] as usize) as u32]
            } else {
                tuple
                    .windows(2)
                    .map(|w| {
                        g.compose(g.inv(w[0] as usize), w[1] as usize)
                            .expect("common range") as u32
                    })
                    .collect()
            };
            let i = m.tuple_index(n, &bg).ok_or_else(|| Error::DimensionMismatch {
                context: format!("identification inverse at degree {n}"),
                expected: "tuple present".into(),
                got: "missing".into(),
            })?;
            bwd.push(i);
        }
        // mutually inverse
        for (i, &o) in fwd.iter().enumerate() {
            if bwd[o] != i {
                return Err(Error::DimensionMismatch {
                    context: format!("identification at degree {n} is not a bijection"),
                    expected: format!("tuple {i}"),
                    got: format!("tuple {}", bwd[o]),
                });
            }
        }
        for (o, &i) in bwd.iter().enumerate() {
            if fwd[i] != o {
                return Err(Error::DimensionMismatch {
                    context: format!("identification at degree {n} is not a bijection"),
                    expected: format!("orbit {o}"),
                    got: format!("orbit {}", fwd[i]),
                });
            }
        }
        to_orbits.push(fwd);
        from_orbits.push(bwd);
    }
    // boundary compatibility: theta_{n-1} . d^{BG} = d^{EG-coinv} . theta_n
    for n in 1..degrees {
        let mut theta_n = IntMatrix::zero(coinvs[n].n_orbits(), m.tuples[n].len());
        for (i, &o) in to_orbits[n].iter().enumerate() {
            theta_n.set(o, i, BigInt::from(1));
        }
        let mut theta_prev = IntMatrix::zero(coinvs[n - 1].n_orbits(), m.tuples[n - 1].len());
        for (i, &o) in to_orbits[n - 1].iter().enumerate() {
            theta_prev.set(o, i, BigInt::from(1));
        }
        let lhs = eg_coinv.boundary(n).mul(&theta_n);
        let rhs = theta_prev.mul(&m.complex.boundary(n));
        if let Some((r, c, l, rr)) = lhs.first_difference(&rhs) {
            return Err(Error::DimensionMismatch {
                context: format!("identification does not commute with boundary at degree {n}"),
                expected: format!("{l} at ({r},{c})"),
                got: rr.to_string(),
            });
        }
    }
    Ok(EgIdentification { to_orbits, from_orbits })
}

// ---------------------------------------------------------------------------
// the resolution contraction
// ---------------------------------------------------------------------------

/// The augmented complex Z[EG_*] -> Z[G^0] -> 0 together with the contraction
/// prepending the common range, packaged as a certificate that the identity
/// map is null-homotopic (equivalently, that the resolution is exact).
pub fn resolution_contraction(
    g: &Arc<FiniteAmpleGroupoid>,
    max_degree: usize,
    cap: usize,
) -> Result<ChainMapCertificate> {
    let eg = eg_complex(g, max_degree, cap)?;
    // augmented complex: degree 0 = units, degree n+1 = EG_n
    let mut bases: Vec<Vec<String>> = Vec::new();
    bases.push((0..g.n_units()).map(|u| g.unit_id(u).to_string()).collect());
    for n in 0..=max_degree {
        bases.push((0..eg.dim(n)).map(|i| eg.point_name(n, i)).collect());
    }
    let mut boundaries: Vec<IntMatrix> = Vec::new();
    boundaries.push(IntMatrix::zero(0, g.n_units()));
    // augmentation induced by the range map
    let mut aug = IntMatrix::zero(g.n_units(), eg.dim(0));
    for i in 0..eg.dim(0) {
        let a = eg.level(0).point(i)[0] as usize;
        aug.add_at(g.rng_pos(a), i, &BigInt::from(1));
    }
    boundaries.push(aug);
    for n in 1..=max_degree {
        boundaries.push(eg.boundary(n));
    }
    let augmented = IntegerChainComplex::new(bases, boundaries)?;
    // contraction: units into EG_0, then prepend the common range
    let mut homotopies: Vec<IntMatrix> = Vec::new();
    let mut h0 = IntMatrix::zero(eg.dim(0), g.n_units());
    for u in 0..g.n_units() {
        let p = eg
            .level(0)
            .index_of(&[g.unit_arrow(u) as u32])
            .expect("units are arrows");
        h0.set(p, u, BigInt::from(1));
    }
    homotopies.push(h0);
    for n in 0..max_degree {
        let mut h = IntMatrix::zero(eg.dim(n + 1), eg.dim(n));
        for i in 0..eg.dim(n) {
            let t = eg.level(n).point(i);
            let e = g.unit_arrow(g.rng_pos(t[0] as usize)) as u32;
            let mut out = Vec::with_capacity(t.len() + 1);
            out.push(e);
            out.extend_from_slice(t);
            let row = eg
                .level(n + 1)
                .index_of(&out)
                .expect("prepending the range stays in the fibre");
            h.set(row, i, BigInt::from(1));
        }
        homotopies.push(h);
    }
    let maps: Vec<IntMatrix> = (0..=max_degree)
        .map(|n| IntMatrix::identity(augmented.dim(n)))
        .collect();
    Ok(ChainMapCertificate {
        source: augmented.clone(),
        target: augmented,
        map_matrices: maps,
        homotopy_matrices: Some(homotopies),
        claimed_identity: "dh + hd = id (augmented tuple complex is exact)".into(),
    })
}

// ---------------------------------------------------------------------------
// tensor shift
// ---------------------------------------------------------------------------

/// Checks that the balanced tensor product of the convolution ring with the
/// degree-n tuple module has exactly the rank of the degree-(n+1) module, and
/// that (f, a) -> (g_0 -> f(g_0) a(inv(g_0) g_1, ...)) is a basis bijection.
/// The quotient rank is computed from the relation matrix via Smith form.
pub fn tensor_shift_check(g: &Arc<FiniteAmpleGroupoid>, n: usize, cap: usize) -> Result<bool> {
    let eg = eg_complex(g, n + 1, cap)?;
    let en = eg.level(n);
    let en1 = eg.level(n + 1);
    let n_pairs = g.n_arrows() * en.len();
    if n_pairs > cap {
        return Err(Error::EnumerationCapExceeded {
            degree: n,
            count: n_pairs,
            cap,
        });
    }
    let pair_idx = |a: usize, t: usize| a * en.len() + t;
    // relations (a phi) x t - a x (phi t) over unit indicators phi
    let mut rel_cols: Vec<(usize, i64)> = Vec::new();
    for a in 0..g.n_arrows() {
        for t in 0..en.len() {
            let s_a = g.src_pos(a);
            let p_t = en.anchor(t);
            if s_a != p_t {
                // phi = unit of s(a) keeps the left side only
                rel_cols.push((pair_idx(a, t), 1));
            }
        }
    }
    let mut relations = IntMatrix::zero(n_pairs, rel_cols.len());
    for (j, &(row, v)) in rel_cols.iter().enumerate() {
        relations.set(row, j, BigInt::from(v));
    }
    let quotient_rank = n_pairs - crate::snf::rank(&relations);
    if quotient_rank != en1.len() {
        return Ok(false);
    }
    // surviving pairs map bijectively onto degree-(n+1) tuples
    let mut hit = vec![false; en1.len()];
    for a in 0..g.n_arrows() {
        for t in 0..en.len() {
            if g.src_pos(a) != en.anchor(t) {
                continue;
            }
            let tup = en.point(t);
            let mut image: Vec<u32> = Vec::with_capacity(tup.len() + 1);
            image.push(a as u32);
            for &c in tup {
                match g.compose(a, c as usize) {
                    Some(ac) => image.push(ac as u32),
                    None => return Ok(false),
                }
            }
            let Some(i) = en1.index_of(&image) else {
                return Ok(false);
            };
            if hit[i] {
                return Ok(false);
            }
            hit[i] = true;
        }
    }
    Ok(hit.into_iter().all(|b| b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{Bisection, GroupoidSpec};
    use crate::ss::DEFAULT_CAP;

    fn pair(n: u32) -> Arc<FiniteAmpleGroupoid> {
        Arc::new(GroupoidSpec::Pair { n }.build().unwrap())
    }

    fn cyclic(m: u32) -> Arc<FiniteAmpleGroupoid> {
        Arc::new(GroupoidSpec::CyclicGroup { m }.build().unwrap())
    }

    #[test]
    fn convolution_of_bisections() {
        let g = pair(3);
        // B = {(2,1)}, C = {(1,3)}: BC = {(2,3)}
        let b = Bisection::new(&g, vec![g.index_of("(2,1)").unwrap()]).unwrap();
        let c = Bisection::new(&g, vec![g.index_of("(1,3)").unwrap()]).unwrap();
        let prod = convolution(&g, &indicator(b.arrows()), &indicator(c.arrows()));
        let expected = indicator(&[g.index_of("(2,3)").unwrap()]);
        assert_eq!(prod, expected);
        // unit delta acts as restriction to the range fibre
        let u = indicator(&[g.index_of("(1,1)").unwrap()]);
        let f = indicator(&[g.index_of("(1,2)").unwrap(), g.index_of("(2,3)").unwrap()]);
        let uf = convolution(&g, &u, &f);
        assert_eq!(uf, indicator(&[g.index_of("(1,2)").unwrap()]));
        // f * 0 = 0
        assert!(convolution(&g, &f, &ArrowFunction::new()).is_empty());
    }

    #[test]
    fn augmentation_of_bisection_indicator() {
        let g = pair(3);
        let b = vec![g.index_of("(2,1)").unwrap(), g.index_of("(3,2)").unwrap()];
        let eps = augmentation(&g, &indicator(&b));
        // sources are x1 and x2
        let keys: Vec<usize> = eps.keys().copied().collect();
        assert_eq!(keys, vec![0, 1]);
        assert!(eps.values().all(|v| *v == BigInt::from(1)));
    }

    #[test]
    fn boundary_examples() {
        let g = cyclic(2);
        let m = matui_complex(&g, 2, DEFAULT_CAP).unwrap();
        // degree-1 boundary over a group is zero
        assert!(m.complex.boundary(1).is_zero_matrix());
        // d2 of (t,t) is 2t - e
        let t = g.index_of("g1").unwrap() as u32;
        let e = g.index_of("g0").unwrap() as u32;
        let col = m.tuple_index(2, &[t, t]).unwrap();
        let d2 = m.complex.boundary(2);
        let e_row = m.tuple_index(1, &[e]).unwrap();
        let t_row = m.tuple_index(1, &[t]).unwrap();
        assert_eq!(d2.get(e_row, col), BigInt::from(-1));
        assert_eq!(d2.get(t_row, col), BigInt::from(2));

        let p = pair(2);
        let mp = matui_complex(&p, 1, DEFAULT_CAP).unwrap();
        let a12 = p.index_of("(1,2)").unwrap() as u32;
        let col = mp.tuple_index(1, &[a12]).unwrap();
        let d1 = mp.complex.boundary(1);
        // d1 (1,2) = x2 - x1
        let x1 = p.unit_position("(1,1)").unwrap();
        let x2 = p.unit_position("(2,2)").unwrap();
        assert_eq!(d1.get(x2, col), BigInt::from(1));
        assert_eq!(d1.get(x1, col), BigInt::from(-1));
    }

    #[test]
    fn homology_tables() {
        let g = cyclic(2);
        let table = groupoid_homology_table(&g, 3, DEFAULT_CAP).unwrap();
        let shown: Vec<String> = table.iter().map(|h| h.to_string()).collect();
        assert_eq!(shown, vec!["Z", "Z/2", "0", "Z/2"]);

        let p = pair(3);
        assert_eq!(homology_of_groupoid(&p, 0, DEFAULT_CAP).unwrap().to_string(), "Z");
        assert!(homology_of_groupoid(&p, 1, DEFAULT_CAP).unwrap().is_zero());

        let two = Arc::new(
            GroupoidSpec::DisjointUnion {
                parts: vec![GroupoidSpec::Pair { n: 2 }, GroupoidSpec::Pair { n: 2 }],
            }
            .build()
            .unwrap(),
        );
        assert_eq!(homology_of_groupoid(&two, 0, DEFAULT_CAP).unwrap(), HomologyGroup::free(2));
    }

    #[test]
    fn resolution_contracts() {
        for g in [pair(2), cyclic(2)] {
            let cert = resolution_contraction(&g, 3, DEFAULT_CAP).unwrap();
            assert!(cert.holds().unwrap());
        }
    }

    #[test]
    fn perturbed_contraction_fails() {
        let g = pair(2);
        let mut cert = resolution_contraction(&g, 2, DEFAULT_CAP).unwrap();
        let hs = cert.homotopy_matrices.as_mut().unwrap();
        let old = hs[1].get(0, 0);
        hs[1].set(0, 0, old + BigInt::from(1));
        let d = cert.verify().unwrap();
        assert!(d.is_err());
    }

    #[test]
    fn coinvariant_identification() {
        for g in [pair(2), pair(3), cyclic(3)] {
            let m = matui_complex(&g, 3, DEFAULT_CAP).unwrap();
            let eg = eg_complex(&g, 3, DEFAULT_CAP).unwrap();
            let (coinv_complex, coinvs) = eg.coinvariant_complex().unwrap();
            matui_eg_identification(&m, &eg, &coinv_complex, &coinvs).unwrap();
        }
    }

    #[test]
    fn tensor_shift_examples() {
        let g = pair(2);
        assert!(tensor_shift_check(&g, 0, DEFAULT_CAP).unwrap());
        // both sides have rank |EG_1| = 4 + 4
        let eg = eg_complex(&g, 1, DEFAULT_CAP).unwrap();
        assert_eq!(eg.dim(1), 8);
        let c3 = cyclic(3);
        assert!(tensor_shift_check(&c3, 1, DEFAULT_CAP).unwrap());
        let eg = eg_complex(&c3, 2, DEFAULT_CAP).unwrap();
        assert_eq!(eg.dim(2), 27);
    }

    #[test]
    fn eg_level_sizes() {
        let c3 = cyclic(3);
        let eg = eg_complex(&c3, 1, DEFAULT_CAP).unwrap();
        assert_eq!(eg.dim(1), 9);
    }
}
