//! Colourings of a groupoid, their covers and nerves, and the ordering
//! homotopies.
//!
//! A colouring is an ordered tuple of subgroupoids whose unit spaces cover
//! the base. Each colour contributes left translates of its source fibres to
//! a cover of the arrow set; tuples of cover elements with a common point
//! form the nerve. Two chain homotopies compress the nerve onto its
//! colour-ordered part: `h` (built from the sorting permutations sigma^x and
//! their partial versions sigma_a) retracts onto weakly increasing colour
//! vectors, and `k` (duplicating the first repeated colour) retracts further
//! onto strictly increasing ones. Both are certified as exact matrix
//! identities, before and after coinvariants.

use crate::certificate::ChainMapCertificate;
use crate::complex::{homology, HomologyGroup};
use crate::error::{Error, Result};
use crate::groupoid::{FiniteAmpleGroupoid, Subgroupoid};
use crate::matrix::IntMatrix;
use crate::ss::{nerve_space, ColourFilter, SsGSpace};
use num_bigint::BigInt;
use serde::Deserialize;
use std::collections::HashMap;
use std::sync::Arc;

/// An ordered list of subgroupoids whose unit spaces cover the base.
#[derive(Clone)]
pub struct Colouring {
    parent: Arc<FiniteAmpleGroupoid>,
    parts: Vec<Subgroupoid>,
}

impl Colouring {
    pub fn new(parent: Arc<FiniteAmpleGroupoid>, parts: Vec<Subgroupoid>) -> Result<Colouring> {
        for u in 0..parent.n_units() {
            if !parts.iter().any(|p| p.has_unit(u)) {
                return Err(Error::MalformedSpec {
                    reason: "colouring parts do not cover the unit space".into(),
                    witness: parent.unit_id(u).to_string(),
                });
            }
        }
        Ok(Colouring { parent, parts })
    }

    /// Single-part colouring by the whole groupoid.
    pub fn whole(parent: Arc<FiniteAmpleGroupoid>) -> Colouring {
        let all = Subgroupoid::new(parent.clone(), (0..parent.n_arrows()).collect())
            .expect("the full arrow set is a subgroupoid");
        Colouring::new(parent, vec![all]).expect("one part covers")
    }

    pub fn parent(&self) -> &Arc<FiniteAmpleGroupoid> {
        &self.parent
    }

    pub fn parts(&self) -> &[Subgroupoid] {
        &self.parts
    }

    /// Number of colours minus one.
    pub fn d(&self) -> usize {
        self.parts.len() - 1
    }

    pub fn from_json(parent: &Arc<FiniteAmpleGroupoid>, text: &str) -> Result<Colouring> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct ColouringFile {
            parts: Vec<Vec<String>>,
        }
        let file: ColouringFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("colouring: {e}")))?;
        let mut parts = Vec::new();
        for ids in &file.parts {
            let mut arrows = Vec::new();
            for id in ids {
                arrows.push(parent.index_of(id).ok_or_else(|| Error::MalformedSpec {
                    reason: "colouring part mentions unknown arrow".into(),
                    witness: id.clone(),
                })?);
            }
            parts.push(Subgroupoid::new(parent.clone(), arrows)?);
        }
        Colouring::new(parent.clone(), parts)
    }
}

impl PartialEq for Colouring {
    fn eq(&self, other: &Self) -> bool {
        self.parts.len() == other.parts.len()
            && self
                .parts
                .iter()
                .zip(&other.parts)
                .all(|(a, b)| a.members() == b.members())
    }
}

/// One element of the cover: a left translate of a colour's source fibre,
/// tagged with its colour. All members share the anchor as range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverElement {
    pub arrows: Vec<u32>,
    pub colour: u32,
    pub anchor: usize,
}

/// The deduplicated cover associated to a colouring. Same-colour elements
/// that intersect are equal, so (colour, arrow set) is a faithful key.
pub struct Cover {
    pub g: Arc<FiniteAmpleGroupoid>,
    pub elements: Vec<CoverElement>,
    index: HashMap<(u32, Vec<u32>), usize>,
}

impl Cover {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn lookup(&self, colour: u32, arrows: &[u32]) -> Option<usize> {
        self.index.get(&(colour, arrows.to_vec())).copied()
    }

    /// Left translation g.U; defined when src(g) = anchor(U).
    pub fn translate(&self, arrow: usize, element: usize) -> Option<usize> {
        let e = &self.elements[element];
        if self.g.src_pos(arrow) != e.anchor {
            return None;
        }
        let mut out: Vec<u32> = e
            .arrows
            .iter()
            .map(|&a| self.g.compose(arrow, a as usize).expect("same fibre") as u32)
            .collect();
        out.sort_unstable();
        self.lookup(e.colour, &out)
    }

    pub fn colour_of(&self, element: usize) -> u32 {
        self.elements[element].colour
    }
}

/// The cover {(g G_i^{s(g)}, i)} of a colouring, deduplicated and in a fixed
/// order (by colour, then arrow set).
pub fn cover(c: &Colouring) -> Arc<Cover> {
    let g = c.parent().clone();
    let mut elements: Vec<CoverElement> = Vec::new();
    for (i, part) in c.parts().iter().enumerate() {
        for arrow in 0..g.n_arrows() {
            let fibre = part.range_fiber(g.src_pos(arrow));
            if fibre.is_empty() {
                continue;
            }
            let mut arrows: Vec<u32> = fibre
                .iter()
                .map(|&h| g.compose(arrow, h).expect("fibre has matching range") as u32)
                .collect();
            arrows.sort_unstable();
            elements.push(CoverElement {
                arrows,
                colour: i as u32,
                anchor: g.rng_pos(arrow),
            });
        }
    }
    elements.sort_by(|a, b| (a.colour, &a.arrows).cmp(&(b.colour, &b.arrows)));
    elements.dedup_by(|a, b| a.colour == b.colour && a.arrows == b.arrows);
    let index = elements
        .iter()
        .enumerate()
        .map(|(i, e)| ((e.colour, e.arrows.clone()), i))
        .collect();
    Arc::new(Cover { g, elements, index })
}

/// Componentwise colours of a simplex.
pub fn colour_map(cover: &Cover, simplex: &[u32]) -> Vec<u32> {
    simplex.iter().map(|&e| cover.elements[e as usize].colour).collect()
}

// ---------------------------------------------------------------------------
// sorting permutations
// ---------------------------------------------------------------------------

/// A permutation of {0,...,n} given by its image list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, k: usize) -> usize {
        self.0[k]
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn sign(&self) -> i64 {
        let mut inv = 0usize;
        for i in 0..self.0.len() {
            for j in i + 1..self.0.len() {
                if self.0[i] > self.0[j] {
                    inv += 1;
                }
            }
        }
        if inv.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

/// The unique permutation sorting a colour vector non-decreasingly while
/// staying order-preserving on each set of equal-colour indices (a stable
/// sort by colour).
pub fn sigma_x(colours: &[u32]) -> Perm {
    let mut idx: Vec<usize> = (0..colours.len()).collect();
    idx.sort_by_key(|&j| (colours[j], j));
    Perm(idx)
}

/// The partial rearrangement sigma_a: agrees with sigma on {0,...,a-1} and is
/// the order-preserving bijection from {a,...,n} onto the complement of the
/// first a images. sigma_0 is the identity and sigma_n = sigma.
pub fn sigma_a(sigma: &Perm, a: usize) -> Result<Perm> {
    let n1 = sigma.len();
    if a > n1 {
        return Err(Error::IndexOutOfRange(format!("sigma_a with a = {a} on {n1} letters")));
    }
    if a == 0 {
        return Ok(Perm::identity(n1));
    }
    let mut used = vec![false; n1];
    let mut out = Vec::with_capacity(n1);
    for k in 0..a {
        let v = sigma.apply(k);
        used[v] = true;
        out.push(v);
    }
    for (v, taken) in used.iter().enumerate() {
        if !taken {
            out.push(v);
        }
    }
    Ok(Perm(out))
}

// ---------------------------------------------------------------------------
// nerves and the ordering homotopies
// ---------------------------------------------------------------------------

/// A nerve together with its colour-ordered subnerves.
pub struct NerveData {
    pub colouring: Colouring,
    pub cover: Arc<Cover>,
    pub full: Arc<SsGSpace>,
    pub weak: Arc<SsGSpace>,
    pub strict: Arc<SsGSpace>,
}

/// Builds the nerve levels 0..=max_degree with face maps and G-actions, plus
/// the weakly and strictly colour-ordered subnerves.
pub fn nerve(c: &Colouring, max_degree: usize, cap: usize) -> Result<NerveData> {
    let cov = cover(c);
    let g = c.parent();
    let full = Arc::new(nerve_space(g, &cov, ColourFilter::All, max_degree, cap)?);
    let weak = Arc::new(nerve_space(g, &cov, ColourFilter::Weak, max_degree, cap)?);
    let strict = Arc::new(nerve_space(g, &cov, ColourFilter::Strict, max_degree, cap)?);
    Ok(NerveData {
        colouring: c.clone(),
        cover: cov,
        full,
        weak,
        strict,
    })
}

/// The two ordered subnerves (strictly increasing, weakly increasing).
pub fn ordered_subnerves(n: &NerveData) -> (&Arc<SsGSpace>, &Arc<SsGSpace>) {
    (&n.strict, &n.weak)
}

/// A certified identity at the chain level and after coinvariants.
pub struct HomotopyCertificates {
    pub chain_level: ChainMapCertificate,
    pub coinvariant_level: ChainMapCertificate,
}

impl HomotopyCertificates {
    pub fn both_hold(&self) -> Result<bool> {
        Ok(self.chain_level.holds()? && self.coinvariant_level.holds()?)
    }
}

fn inclusion_matrix(sub: &SsGSpace, full: &SsGSpace, n: usize) -> IntMatrix {
    let mut m = IntMatrix::zero(full.dim(n), sub.dim(n));
    for i in 0..sub.dim(n) {
        let idx = full
            .level(n)
            .index_of(sub.level(n).point(i))
            .expect("subnerve point sits in the nerve");
        m.set(idx, i, BigInt::from(1));
    }
    m
}

fn descend_endomorphism(
    space: &SsGSpace,
    coinvs: &[crate::gset::CoinvariantModule],
    mats: &[IntMatrix],
    raise: bool,
) -> Vec<IntMatrix> {
    let _ = space;
    mats.iter()
        .enumerate()
        .map(|(n, m)| {
            let tgt = if raise { &coinvs[n + 1] } else { &coinvs[n] };
            tgt.induce(m, &coinvs[n])
        })
        .collect()
}

/// The retraction homotopy onto the weakly ordered subnerve: certifies
/// `d h + h d = id - i.p` on Z[N_n] for 0 <= n <= max_degree - 1, at the
/// chain level and on coinvariants.
pub fn homotopy_h(nerve: &NerveData) -> Result<HomotopyCertificates> {
    let full = &nerve.full;
    let weak = &nerve.weak;
    let cov = nerve.cover.as_ref();
    let top = full.max_degree();
    let mut maps: Vec<IntMatrix> = Vec::new();
    let mut homotopies: Vec<IntMatrix> = Vec::new();
    for n in 0..top {
        // p: reorder by sigma^x with its sign, landing in the weak subnerve
        let mut p = IntMatrix::zero(weak.dim(n), full.dim(n));
        for s in 0..full.dim(n) {
            let tuple = full.level(n).point(s);
            let colours = colour_map(cov, tuple);
            let sigma = sigma_x(&colours);
            let sorted: Vec<u32> = (0..tuple.len()).map(|k| tuple[sigma.apply(k)]).collect();
            let row = weak
                .level(n)
                .index_of(&sorted)
                .expect("sorted simplex is weakly ordered");
            p.add_at(row, s, &BigInt::from(sigma.sign()));
        }
        let incl = inclusion_matrix(weak, full, n);
        let f = IntMatrix::identity(full.dim(n)).sub(&incl.mul(&p));
        maps.push(f);
        // h: alternating rearrangements with one inserted coordinate
        let mut h = IntMatrix::zero(full.dim(n + 1), full.dim(n));
        for s in 0..full.dim(n) {
            let tuple = full.level(n).point(s);
            let colours = colour_map(cov, tuple);
            let sigma = sigma_x(&colours);
            for a in 0..tuple.len() {
                let sa = sigma_a(&sigma, a)?;
                let mut out: Vec<u32> = Vec::with_capacity(tuple.len() + 1);
                for k in 0..a {
                    out.push(tuple[sa.apply(k)]);
                }
                out.push(tuple[sigma.apply(a)]);
                for k in a..tuple.len() {
                    out.push(tuple[sa.apply(k)]);
                }
                let row = full
                    .level(n + 1)
                    .index_of(&out)
                    .expect("rearranged simplex has the same intersection");
                let parity = if a % 2 == 0 { 1 } else { -1 };
                h.add_at(row, s, &BigInt::from(parity * sa.sign()));
            }
        }
        homotopies.push(h);
    }
    let chain = full.chain_complex()?;
    let (coinv_complex, coinvs) = full.coinvariant_complex()?;
    let claimed = "dh + hd = id - i.p".to_string();
    let chain_level = ChainMapCertificate {
        source: chain.clone(),
        target: chain,
        map_matrices: maps.clone(),
        homotopy_matrices: Some(homotopies.clone()),
        claimed_identity: claimed.clone(),
    };
    let coinvariant_level = ChainMapCertificate {
        source: coinv_complex.clone(),
        target: coinv_complex,
        map_matrices: descend_endomorphism(full, &coinvs, &maps, false),
        homotopy_matrices: Some(descend_endomorphism(full, &coinvs, &homotopies, true)),
        claimed_identity: claimed,
    };
    Ok(HomotopyCertificates {
        chain_level,
        coinvariant_level,
    })
}

/// The retraction homotopy from the weakly ordered subnerve onto the strictly
/// ordered one: certifies `d k + k d = id - j.q` on Z[N^>=_n].
pub fn homotopy_k(nerve: &NerveData) -> Result<HomotopyCertificates> {
    let weak = &nerve.weak;
    let strict = &nerve.strict;
    let cov = nerve.cover.as_ref();
    let top = weak.max_degree();
    let mut maps: Vec<IntMatrix> = Vec::new();
    let mut homotopies: Vec<IntMatrix> = Vec::new();
    for n in 0..top {
        let mut q = IntMatrix::zero(strict.dim(n), weak.dim(n));
        for s in 0..weak.dim(n) {
            let tuple = weak.level(n).point(s);
            if let Some(row) = strict.level(n).index_of(tuple) {
                q.set(row, s, BigInt::from(1));
            }
        }
        let incl = inclusion_matrix(strict, weak, n);
        let f = IntMatrix::identity(weak.dim(n)).sub(&incl.mul(&q));
        maps.push(f);
        let mut k = IntMatrix::zero(weak.dim(n + 1), weak.dim(n));
        for s in 0..weak.dim(n) {
            let tuple = weak.level(n).point(s);
            let colours = colour_map(cov, tuple);
            let Some(a) = colours.windows(2).position(|w| w[0] == w[1]) else {
                continue; // strictly increasing: k vanishes
            };
            let mut out: Vec<u32> = Vec::with_capacity(tuple.len() + 1);
            out.extend_from_slice(&tuple[..=a]);
            out.push(tuple[a]);
            out.extend_from_slice(&tuple[a + 1..]);
            let row = weak
                .level(n + 1)
                .index_of(&out)
                .expect("duplicated simplex has the same intersection");
            let parity = if a % 2 == 0 { 1 } else { -1 };
            k.add_at(row, s, &BigInt::from(parity));
        }
        homotopies.push(k);
    }
    let chain = weak.chain_complex()?;
    let (coinv_complex, coinvs) = weak.coinvariant_complex()?;
    let claimed = "dk + kd = id - j.q".to_string();
    let chain_level = ChainMapCertificate {
        source: chain.clone(),
        target: chain,
        map_matrices: maps.clone(),
        homotopy_matrices: Some(homotopies.clone()),
        claimed_identity: claimed.clone(),
    };
    let coinvariant_level = ChainMapCertificate {
        source: coinv_complex.clone(),
        target: coinv_complex,
        map_matrices: descend_endomorphism(weak, &coinvs, &maps, false),
        homotopy_matrices: Some(descend_endomorphism(weak, &coinvs, &homotopies, true)),
        claimed_identity: claimed,
    };
    Ok(HomotopyCertificates {
        chain_level,
        coinvariant_level,
    })
}

// ---------------------------------------------------------------------------
// homology of a colouring
// ---------------------------------------------------------------------------

/// Homology groups of the coinvariant nerve complex in degrees 0..=max. Each
/// degree is also computed on the strictly ordered subnerve; the two must
/// agree, and a mismatch is a bug in this crate.
pub fn colouring_homology_table(c: &Colouring, max_degree: usize, cap: usize) -> Result<Vec<HomologyGroup>> {
    let data = nerve(c, max_degree + 1, cap)?;
    let (full_coinv, _) = data.full.coinvariant_complex()?;
    let (strict_coinv, _) = data.strict.coinvariant_complex()?;
    let mut out = Vec::new();
    for n in 0..=max_degree {
        let h = homology(&full_coinv, n);
        let h_strict = homology(&strict_coinv, n);
        assert_eq!(
            h, h_strict,
            "ordered subnerve computes different homology in degree {n}"
        );
        out.push(h);
    }
    Ok(out)
}

/// H_n of the colouring, cross-checked against the ordered subnerve.
pub fn homology_of_colouring(c: &Colouring, n: usize, cap: usize) -> Result<HomologyGroup> {
    Ok(colouring_homology_table(c, n, cap)?.pop().expect("table nonempty"))
}
