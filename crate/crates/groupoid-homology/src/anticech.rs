//! Comparison maps between nerves and tuple spaces, closeness, and
//! anti-Cech sequences.
//!
//! At a scale K, a K-Lebesgue colouring receives a morphism from the
//! K-constrained tuple space (each arrow is sent to a translated fibre that
//! swallows its K-neighbourhood), and a K-bounded colouring of a principal
//! groupoid maps back by picking the canonical member of each cover element
//! through the basepoint sections of its colour. Composing the two inflates
//! every cover element by K, which is exactly what an anti-Cech step needs.
//! Closeness of two morphisms is witnessed by an explicit prism homotopy,
//! so close morphisms agree on homology.

use crate::certificate::ChainMapCertificate;
use crate::colouring::{nerve, Colouring, NerveData};
use crate::complex::{equal_on_homology, homology, is_identity_on_homology, HomologyGroup};
use crate::dad::k_lebesgue_colouring;
use crate::error::{Error, Result};
use crate::groupoid::{principal_blocks, FiniteAmpleGroupoid};
pub use crate::groupoid::ScaleSet;
use crate::matrix::IntMatrix;
use crate::matui::groupoid_homology_table;
use crate::ss::{tuple_space, SsBase, SsGSpace, SsMorphism};
use num_bigint::BigInt;
use std::sync::Arc;

/// Every part of the colouring is contained in the scale.
pub fn is_k_bounded(c: &Colouring, k: &ScaleSet) -> bool {
    bounded_witness(c, k).is_none()
}

fn bounded_witness(c: &Colouring, k: &ScaleSet) -> Option<(usize, usize)> {
    for (i, part) in c.parts().iter().enumerate() {
        for &m in part.members() {
            if !k.contains(m) {
                return Some((i, m));
            }
        }
    }
    None
}

/// Every fibre window r^{-1}(x) cap K is swallowed by some part.
pub fn is_k_lebesgue(c: &Colouring, k: &ScaleSet) -> bool {
    lebesgue_witness(c, k).is_none()
}

/// A unit at which the Lebesgue condition fails, if any.
pub fn lebesgue_witness(c: &Colouring, k: &ScaleSet) -> Option<usize> {
    let g = c.parent().as_ref();
    (0..g.n_units()).find(|&x| {
        let window: Vec<usize> = g.range_fiber(x).iter().copied().filter(|&a| k.contains(a)).collect();
        !c.parts().iter().any(|p| window.iter().all(|&a| p.contains(a)))
    })
}

/// A morphism of semi-simplicial G-spaces between nerve and tuple levels.
pub type NerveMorphism = SsMorphism;

/// Per-unit colour assignment used by the points-to-sets map: each unit gets
/// the smallest colour whose part swallows its fibre window and contains it.
fn colour_assignment(c: &Colouring, k: &ScaleSet) -> Result<Vec<usize>> {
    let g = c.parent().as_ref();
    let mut out = Vec::with_capacity(g.n_units());
    for x in 0..g.n_units() {
        let window: Vec<usize> = g.range_fiber(x).iter().copied().filter(|&a| k.contains(a)).collect();
        let i = c
            .parts()
            .iter()
            .position(|p| p.has_unit(x) && window.iter().all(|&a| p.contains(a)))
            .ok_or_else(|| Error::NotLebesgue {
                scale: format!("{}-arrow scale", k.len()),
                witness: g.unit_id(x).to_string(),
            })?;
        out.push(i);
    }
    Ok(out)
}

fn phi_level0(egk: &SsGSpace, nerve_data: &NerveData, k: &ScaleSet) -> Result<Vec<usize>> {
    let c = &nerve_data.colouring;
    let g = c.parent().as_ref();
    let colour_of_unit = colour_assignment(c, k)?;
    let cov = nerve_data.cover.as_ref();
    let mut level0 = Vec::with_capacity(egk.dim(0));
    for p in 0..egk.dim(0) {
        let a = egk.level(0).point(p)[0] as usize;
        let i = colour_of_unit[g.src_pos(a)];
        let fibre = c.parts()[i].range_fiber(g.src_pos(a));
        let mut arrows: Vec<u32> = fibre
            .iter()
            .map(|&h| g.compose(a, h).expect("matching range") as u32)
            .collect();
        arrows.sort_unstable();
        let e = cov.lookup(i as u32, &arrows).ok_or_else(|| Error::MalformedSpec {
            reason: "translated fibre missing from the cover".into(),
            witness: g.id(a).to_string(),
        })?;
        level0.push(e);
    }
    Ok(level0)
}

/// Verifies that cover element arrows contain the K-translate a.K.
fn contains_translate(g: &FiniteAmpleGroupoid, arrows: &[u32], a: usize, k: &ScaleSet) -> bool {
    for &kk in k.arrows() {
        if let Some(ak) = g.compose(a, kk) {
            if arrows.binary_search(&(ak as u32)).is_err() {
                return false;
            }
        }
    }
    true
}

/// The points-to-sets morphism from the K-constrained tuple space to the
/// nerve of a K-Lebesgue colouring. Sends an arrow to the translated fibre of
/// the colour assigned to its source; the image contains the arrow's
/// K-translate, which is verified for every arrow.
pub fn phi(egk: &Arc<SsGSpace>, nerve_data: &NerveData, k: &ScaleSet) -> Result<NerveMorphism> {
    let g = nerve_data.colouring.parent().as_ref();
    if !k.contains_units(g) {
        return Err(Error::MalformedSpec {
            reason: "points-to-sets needs a scale containing the units".into(),
            witness: String::new(),
        });
    }
    let level0 = phi_level0(egk, nerve_data, k)?;
    let cov = nerve_data.cover.as_ref();
    for p in 0..egk.dim(0) {
        let a = egk.level(0).point(p)[0] as usize;
        let e = &cov.elements[level0[p]];
        if !contains_translate(g, &e.arrows, a, k) {
            return Err(Error::MalformedSpec {
                reason: "image does not contain the K-translate".into(),
                witness: g.id(a).to_string(),
            });
        }
    }
    SsMorphism::from_level0(egk, &nerve_data.full, level0)
}

/// The sets-to-points morphism from the nerve of a K-bounded colouring of a
/// principal groupoid to the tuple space at scale K K^{-1}. Picks in each
/// cover element the member reaching the basepoint section of its colour;
/// membership and representative-independence are verified exhaustively.
pub fn psi(nerve_data: &NerveData, eg_target: &Arc<SsGSpace>, k: &ScaleSet) -> Result<NerveMorphism> {
    let c = &nerve_data.colouring;
    let g_arc = c.parent().clone();
    let g = g_arc.as_ref();
    g.require_principal()?;
    if !k.contains_units(g) {
        return Err(Error::MalformedSpec {
            reason: "sets-to-points needs a scale containing the units".into(),
            witness: String::new(),
        });
    }
    if let Some((part, witness)) = bounded_witness(c, k) {
        return Err(Error::NotBounded {
            part,
            witness: g.id(witness).to_string(),
        });
    }
    let taus: Vec<_> = c
        .parts()
        .iter()
        .map(principal_blocks)
        .collect::<Result<Vec<_>>>()?;
    let cov = nerve_data.cover.as_ref();
    let mut level0 = Vec::with_capacity(cov.len());
    for e in &cov.elements {
        let tau = &taus[e.colour as usize];
        // every member is a representative; all must give the same arrow
        let mut image: Option<usize> = None;
        for &m in &e.arrows {
            let m = m as usize;
            let t = tau.tau(g.src_pos(m)).expect("member sources lie in the part");
            let out = g.compose(m, t).expect("tau has range at the source");
            match image {
                None => image = Some(out),
                Some(prev) => {
                    if prev != out {
                        return Err(Error::MalformedSpec {
                            reason: "sets-to-points depends on the representative".into(),
                            witness: g.id(m).to_string(),
                        });
                    }
                }
            }
        }
        let out = image.expect("cover elements are nonempty");
        // membership in the element itself
        if e.arrows.binary_search(&(out as u32)).is_err() {
            return Err(Error::MalformedSpec {
                reason: "sets-to-points image misses its cover element".into(),
                witness: g.id(out).to_string(),
            });
        }
        let p = eg_target
            .level(0)
            .index_of(&[out as u32])
            .expect("tuple level 0 is all arrows");
        level0.push(p);
    }
    SsMorphism::from_level0(&nerve_data.full, eg_target, level0)
}

/// One anti-Cech step: sets-to-sets from a K-bounded colouring into a
/// K^3-Lebesgue one, inflating every cover element by K. The intermediate
/// tuple space is not materialized; the two level-0 maps are composed
/// directly.
pub fn iota(source: &NerveData, target: &NerveData, k: &ScaleSet) -> Result<NerveMorphism> {
    let c_src = &source.colouring;
    let c_tgt = &target.colouring;
    let g_arc = c_src.parent().clone();
    let g = g_arc.as_ref();
    g.require_principal()?;
    if !k.is_admissible(g) {
        return Err(Error::MalformedSpec {
            reason: "sets-to-sets needs an admissible scale".into(),
            witness: String::new(),
        });
    }
    if let Some((part, witness)) = bounded_witness(c_src, k) {
        return Err(Error::NotBounded {
            part,
            witness: g.id(witness).to_string(),
        });
    }
    let k3 = k.cube(g);
    if let Some(x) = lebesgue_witness(c_tgt, &k3) {
        return Err(Error::NotLebesgue {
            scale: "K^3".into(),
            witness: g.unit_id(x).to_string(),
        });
    }
    // sets-to-points on the source cover
    let taus: Vec<_> = c_src
        .parts()
        .iter()
        .map(principal_blocks)
        .collect::<Result<Vec<_>>>()?;
    let src_cov = source.cover.as_ref();
    let tgt_cov = target.cover.as_ref();
    let colour_of_unit = colour_assignment(c_tgt, &k3)?;
    let mut level0 = Vec::with_capacity(src_cov.len());
    for e in &src_cov.elements {
        let tau = &taus[e.colour as usize];
        let m = e.arrows[0] as usize;
        let t = tau.tau(g.src_pos(m)).expect("member sources lie in the part");
        let rep = g.compose(m, t).expect("tau has range at the source");
        // points-to-sets at scale K^3 on the representative
        let i = colour_of_unit[g.src_pos(rep)];
        let fibre = c_tgt.parts()[i].range_fiber(g.src_pos(rep));
        let mut arrows: Vec<u32> = fibre
            .iter()
            .map(|&h| g.compose(rep, h).expect("matching range") as u32)
            .collect();
        arrows.sort_unstable();
        let idx = tgt_cov.lookup(i as u32, &arrows).ok_or_else(|| Error::MalformedSpec {
            reason: "translated fibre missing from the target cover".into(),
            witness: g.id(rep).to_string(),
        })?;
        level0.push(idx);
    }
    let morphism = SsMorphism::from_level0(&source.full, &target.full, level0)?;
    // the defining inflation: iota(U) contains U K
    for (e, &img) in src_cov.elements.iter().zip(&morphism.levels[0]) {
        let target_arrows = &tgt_cov.elements[target.full.level(0).point(img)[0] as usize].arrows;
        for &u in &e.arrows {
            for &kk in k.arrows() {
                if let Some(uk) = g.compose(u as usize, kk) {
                    if target_arrows.binary_search(&(uk as u32)).is_err() {
                        return Err(Error::MalformedSpec {
                            reason: "anti-Cech step does not inflate by the scale".into(),
                            witness: g.id(u as usize).to_string(),
                        });
                    }
                }
            }
        }
    }
    Ok(morphism)
}

/// Exact closeness predicate for two morphisms with the same source and
/// target. For a nerve target both images must fit in a common K-translate;
/// for a tuple target the quotient of the two image arrows must lie in K.
pub fn closeness(alpha: &NerveMorphism, beta: &NerveMorphism, k: &ScaleSet) -> Result<bool> {
    if !Arc::ptr_eq(&alpha.source, &beta.source) || !Arc::ptr_eq(&alpha.target, &beta.target) {
        return Err(Error::TargetKindMismatch {
            left: alpha.target.base.kind_name().into(),
            right: beta.target.base.kind_name().into(),
        });
    }
    let g = alpha.target.g.as_ref();
    match &alpha.target.base {
        SsBase::Nerve(cov) => {
            for x in 0..alpha.source.dim(0) {
                let ea = &cov.elements[alpha.target.level(0).point(alpha.levels[0][x])[0] as usize];
                let eb = &cov.elements[beta.target.level(0).point(beta.levels[0][x])[0] as usize];
                let anchor = ea.anchor;
                let found = g.range_fiber(anchor).iter().any(|&cand| {
                    let inside = |arrows: &[u32]| {
                        arrows.iter().all(|&m| {
                            g.compose(g.inv(cand), m as usize)
                                .map(|q| k.contains(q))
                                .unwrap_or(false)
                        })
                    };
                    inside(&ea.arrows) && inside(&eb.arrows)
                });
                if !found {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        SsBase::Tuples { .. } => {
            for x in 0..alpha.source.dim(0) {
                let a = alpha.target.level(0).point(alpha.levels[0][x])[0] as usize;
                let b = beta.target.level(0).point(beta.levels[0][x])[0] as usize;
                match g.compose(g.inv(a), b) {
                    Some(q) if k.contains(q) => {}
                    _ => return Ok(false),
                }
            }
            Ok(true)
        }
    }
}

/// Certificates produced by the closeness prism, plus the resulting equality
/// of induced maps on homology.
pub struct ClosenessCertificates {
    pub chain_level: ChainMapCertificate,
    pub coinvariant_level: ChainMapCertificate,
    pub equal_on_homology: bool,
}

impl ClosenessCertificates {
    /// The certified difference map vanishes (the two composites coincide on
    /// the nose, not just up to homotopy).
    pub fn map_is_zero(&self) -> bool {
        self.chain_level.map_matrices.iter().all(|m| m.is_zero_matrix())
    }
}

/// The prism homotopy between iota.alpha and iota.beta for close morphisms
/// alpha, beta into a space that `iota` inflates enough to absorb the
/// closeness constant. Certifies dh + hd = (iota.beta) - (iota.alpha) at the
/// chain level and on coinvariants, and checks the two composites induce the
/// same map on homology.
pub fn closeness_homotopy(
    alpha: &NerveMorphism,
    beta: &NerveMorphism,
    iota_map: &NerveMorphism,
) -> Result<ClosenessCertificates> {
    assert!(Arc::ptr_eq(&alpha.source, &beta.source), "common source required");
    assert!(
        Arc::ptr_eq(&alpha.target, &iota_map.source),
        "iota must leave the common target"
    );
    let source = alpha.source.clone();
    let big = iota_map.target.clone();
    let ia = alpha.then(iota_map);
    let ib = beta.then(iota_map);
    let degrees = ia.degrees().min(ib.degrees());
    let mut maps: Vec<IntMatrix> = Vec::new();
    let mut homotopies: Vec<IntMatrix> = Vec::new();
    for n in 0..degrees {
        if n + 1 < degrees {
            maps.push(ib.matrix(n).sub(&ia.matrix(n)));
            let mut h = IntMatrix::zero(big.dim(n + 1), source.dim(n));
            for x in 0..source.dim(n) {
                let tuple = source.level(n).point(x).to_vec();
                let mut sign = BigInt::from(1);
                for i in 0..=n {
                    let mut out: Vec<u32> = Vec::with_capacity(n + 2);
                    for &c in &tuple[..=i] {
                        out.push(big.level(0).point(ia.apply0(c as usize))[0]);
                    }
                    for &c in &tuple[i..] {
                        out.push(big.level(0).point(ib.apply0(c as usize))[0]);
                    }
                    let row = big.level(n + 1).index_of(&out).ok_or_else(|| {
                        Error::IntersectionWitnessNotFound {
                            degree: n,
                            simplex: source.point_name(n, x),
                        }
                    })?;
                    h.add_at(row, x, &sign);
                    sign = -sign;
                }
            }
            homotopies.push(h);
        }
    }
    let source_chain = source.chain_complex()?;
    let target_chain = big.chain_complex()?;
    let (source_coinv, source_mods) = source.coinvariant_complex()?;
    let (target_coinv, target_mods) = big.coinvariant_complex()?;
    let claimed = "dh + hd = (iota.beta) - (iota.alpha)".to_string();
    let chain_level = ChainMapCertificate {
        source: source_chain,
        target: target_chain,
        map_matrices: maps.clone(),
        homotopy_matrices: Some(homotopies.clone()),
        claimed_identity: claimed.clone(),
    };
    let descend = |mats: &[IntMatrix], raise: bool| -> Vec<IntMatrix> {
        mats.iter()
            .enumerate()
            .map(|(n, m)| {
                let tgt = if raise { &target_mods[n + 1] } else { &target_mods[n] };
                tgt.induce(m, &source_mods[n])
            })
            .collect()
    };
    let coinvariant_level = ChainMapCertificate {
        source: source_coinv.clone(),
        target: target_coinv.clone(),
        map_matrices: descend(&maps, false),
        homotopy_matrices: Some(descend(&homotopies, true)),
        claimed_identity: claimed,
    };
    let ia_bar = ia.induced_matrices(&source_mods, &target_mods);
    let ib_bar = ib.induced_matrices(&source_mods, &target_mods);
    let mut equal = true;
    for n in 0..degrees.saturating_sub(1) {
        if !equal_on_homology(&source_coinv, &target_coinv, n, &ia_bar[n], &ib_bar[n]) {
            equal = false;
        }
    }
    Ok(ClosenessCertificates {
        chain_level,
        coinvariant_level,
        equal_on_homology: equal,
    })
}

// ---------------------------------------------------------------------------
// anti-Cech sequences
// ---------------------------------------------------------------------------

/// A finite run of colourings with inflating step morphisms at growing
/// scales. On a finite groupoid the scales exhaust the arrow set and the
/// sequence stabilizes; the stabilization index is recorded when detected.
pub struct AntiCechSequence {
    pub g: Arc<FiniteAmpleGroupoid>,
    pub colourings: Vec<Colouring>,
    pub nerves: Vec<NerveData>,
    /// morphisms[m]: nerve m -> nerve m+1, at scale scales[m+1].
    pub morphisms: Vec<NerveMorphism>,
    pub scales: Vec<ScaleSet>,
    pub stabilized_at: Option<usize>,
}

/// Builds an anti-Cech sequence by alternating Lebesgue colourings with
/// inflating morphisms, growing the scale until it exhausts the arrow set.
pub fn build_anti_cech(
    g: &Arc<FiniteAmpleGroupoid>,
    steps: usize,
    max_degree: usize,
    cap: usize,
) -> Result<AntiCechSequence> {
    g.require_principal()?;
    let exhaustion = |j: usize| -> ScaleSet {
        let take = (1usize << j.min(30)).min(g.n_arrows());
        ScaleSet::new(g, (0..take).collect()).admissible_hull(g)
    };
    let mut scales: Vec<ScaleSet> = Vec::new();
    let mut colourings: Vec<Colouring> = Vec::new();
    let mut nerves: Vec<NerveData> = Vec::new();
    let mut morphisms: Vec<NerveMorphism> = Vec::new();
    for m in 0..=steps {
        let k_m = if m == 0 {
            exhaustion(0)
        } else {
            let parts_hull = colourings[m - 1]
                .parts()
                .iter()
                .fold(ScaleSet::new(g, Vec::new()), |acc, p| {
                    acc.union(g, &ScaleSet::new(g, p.members().to_vec()))
                })
                .admissible_hull(g);
            scales[m - 1].union(g, &exhaustion(m)).union(g, &parts_hull)
        };
        let c_m = k_lebesgue_colouring(g, &k_m.cube(g))?;
        let n_m = nerve(&c_m, max_degree + 1, cap)?;
        if m > 0 {
            morphisms.push(iota(&nerves[m - 1], &n_m, &k_m)?);
        }
        scales.push(k_m);
        colourings.push(c_m);
        nerves.push(n_m);
    }
    // stabilization: the maximal tail run of identical colourings joined by
    // identity-acting steps, once the scale has exhausted the arrow set (so
    // every later step would repeat the same construction). An early
    // coincidence of consecutive colourings is not stability: on a
    // disconnected groupoid the components saturate at different rates.
    let mut stabilized_at = None;
    let exhausted = scales.last().map(|k| k.len() == g.n_arrows()).unwrap_or(false);
    if exhausted {
        let mut s = colourings.len() - 1;
        while s >= 1 && colourings[s - 1] == colourings[s] && identity_like(&morphisms[s - 1]) {
            s -= 1;
        }
        if s < colourings.len() - 1 {
            stabilized_at = Some(s);
        }
    }
    Ok(AntiCechSequence {
        g: g.clone(),
        colourings,
        nerves,
        morphisms,
        scales,
        stabilized_at,
    })
}

/// The step acts as the identity on every level (source and target are equal
/// colourings, so the point sets match up).
fn identity_like(m: &NerveMorphism) -> bool {
    m.levels.iter().enumerate().all(|(n, lvl)| {
        lvl.iter()
            .enumerate()
            .all(|(i, &v)| m.source.level(n).point(i) == m.target.level(n).point(v))
    })
}

/// H_n of the sequence: the stabilized value of the colouring homologies.
pub fn anti_cech_homology(seq: &AntiCechSequence, n: usize) -> Result<HomologyGroup> {
    let s = seq.stabilized_at.ok_or(Error::NotStabilized {
        steps: seq.colourings.len(),
    })?;
    let (coinv, _) = seq.nerves[s].full.coinvariant_complex()?;
    Ok(homology(&coinv, n))
}

/// The outcome of comparing anti-Cech homology with groupoid homology.
pub struct ComparisonReport {
    /// Per degree: H_n of the sequence, H_n of the groupoid, equality.
    pub degrees: Vec<(usize, HomologyGroup, HomologyGroup, bool)>,
    pub phi_then_psi_identity: bool,
    pub psi_then_phi_identity: bool,
    pub closeness_certified: bool,
    pub iso: bool,
}

/// Realizes both comparison maps at the stabilized scale, certifies the two
/// closeness prisms, and checks that the induced maps on homology compose to
/// the identity in both orders.
pub fn compare_with_groupoid(
    seq: &AntiCechSequence,
    max_degree: usize,
    cap: usize,
) -> Result<ComparisonReport> {
    let s = seq.stabilized_at.ok_or(Error::NotStabilized {
        steps: seq.colourings.len(),
    })?;
    let g = &seq.g;
    let nerve_data = &seq.nerves[s];
    let k_all = ScaleSet::all(g);
    let top = nerve_data.full.max_degree();
    let eg = Arc::new(tuple_space(g, None, top, cap)?);
    let phi_map = phi(&eg, nerve_data, &k_all)?;
    let psi_map = psi(nerve_data, &eg, &k_all)?;
    let phi_psi = psi_map.then(&phi_map); // nerve -> nerve
    let psi_phi = phi_map.then(&psi_map); // tuples -> tuples
    let id_nerve = SsMorphism::identity(&nerve_data.full);
    let id_eg = SsMorphism::identity(&eg);
    // closeness of each composite with the identity, then the prisms
    let close_nerve = closeness(&phi_psi, &id_nerve, &k_all)?;
    let close_eg = closeness(&psi_phi, &id_eg, &k_all)?;
    let prism_nerve = closeness_homotopy(&phi_psi, &id_nerve, &id_nerve)?;
    let prism_eg = closeness_homotopy(&psi_phi, &id_eg, &id_eg)?;
    let closeness_certified = close_nerve
        && close_eg
        && prism_nerve.chain_level.holds()?
        && prism_nerve.coinvariant_level.holds()?
        && prism_nerve.equal_on_homology
        && prism_eg.chain_level.holds()?
        && prism_eg.coinvariant_level.holds()?
        && prism_eg.equal_on_homology;
    // induced maps on homology compose to identities
    let (nerve_coinv, nerve_mods) = nerve_data.full.coinvariant_complex()?;
    let (eg_coinv, eg_mods) = eg.coinvariant_complex()?;
    let phi_psi_bar = phi_psi.induced_matrices(&nerve_mods, &nerve_mods);
    let psi_phi_bar = psi_phi.induced_matrices(&eg_mods, &eg_mods);
    let mut phi_then_psi_identity = true;
    let mut psi_then_phi_identity = true;
    for n in 0..=max_degree {
        if !is_identity_on_homology(&nerve_coinv, n, &phi_psi_bar[n]) {
            phi_then_psi_identity = false;
        }
        if !is_identity_on_homology(&eg_coinv, n, &psi_phi_bar[n]) {
            psi_then_phi_identity = false;
        }
    }
    let groupoid_table = groupoid_homology_table(g, max_degree, cap)?;
    let mut degrees = Vec::new();
    let mut all_equal = true;
    for n in 0..=max_degree {
        let ha = homology(&nerve_coinv, n);
        let hg = groupoid_table[n].clone();
        let eq = ha == hg;
        all_equal &= eq;
        degrees.push((n, ha, hg, eq));
    }
    let iso = all_equal && phi_then_psi_identity && psi_then_phi_identity && closeness_certified;
    Ok(ComparisonReport {
        degrees,
        phi_then_psi_identity,
        psi_then_phi_identity,
        closeness_certified,
        iso,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::GroupoidSpec;
    use crate::ss::DEFAULT_CAP;

    fn pair(n: u32) -> Arc<FiniteAmpleGroupoid> {
        Arc::new(GroupoidSpec::Pair { n }.build().unwrap())
    }

    #[test]
    fn bounded_and_lebesgue_predicates() {
        let g = pair(2);
        let c = Colouring::whole(g.clone());
        let all = ScaleSet::all(&g);
        assert!(is_k_bounded(&c, &all));
        assert!(is_k_lebesgue(&c, &all));
        // unit partition is not Lebesgue at full scale
        let units: Vec<usize> = (0..2).map(|u| g.unit_arrow(u)).collect();
        let parts = vec![
            crate::groupoid::Subgroupoid::new(g.clone(), vec![units[0]]).unwrap(),
            crate::groupoid::Subgroupoid::new(g.clone(), vec![units[1]]).unwrap(),
        ];
        let cu = Colouring::new(g.clone(), parts).unwrap();
        assert!(!is_k_lebesgue(&cu, &all));
        // every colouring is units-Lebesgue
        assert!(is_k_lebesgue(&cu, &ScaleSet::units_only(&g)));
        assert!(!is_k_bounded(&c, &ScaleSet::units_only(&g)));
    }

    #[test]
    fn phi_on_single_colour_pair() {
        let g = pair(2);
        let c = Colouring::whole(g.clone());
        let data = nerve(&c, 3, DEFAULT_CAP).unwrap();
        let k = ScaleSet::all(&g);
        let eg = Arc::new(tuple_space(&g, None, 3, DEFAULT_CAP).unwrap());
        let m = phi(&eg, &data, &k).unwrap();
        // every arrow goes to its full range fibre
        for p in 0..eg.dim(0) {
            let a = eg.level(0).point(p)[0] as usize;
            let e = &data.cover.elements[data.full.level(0).point(m.levels[0][p])[0] as usize];
            assert_eq!(e.arrows.len(), 2);
            assert_eq!(e.anchor, g.rng_pos(a));
        }
    }

    #[test]
    fn psi_picks_members() {
        let g = pair(2);
        let c = Colouring::whole(g.clone());
        let data = nerve(&c, 3, DEFAULT_CAP).unwrap();
        let k = ScaleSet::all(&g);
        let eg = Arc::new(tuple_space(&g, None, 3, DEFAULT_CAP).unwrap());
        let m = psi(&data, &eg, &k).unwrap();
        // basepoint is x1: the fibre at x1 maps to (1,1), at x2 to (2,1)
        let cov = data.cover.as_ref();
        for (e_idx, e) in cov.elements.iter().enumerate() {
            let p0 = data.full.level(0).index_of(&[e_idx as u32]).unwrap();
            let img = eg.level(0).point(m.levels[0][p0])[0] as usize;
            let expected = if g.unit_id(e.anchor) == "(1,1)" { "(1,1)" } else { "(2,1)" };
            assert_eq!(g.id(img), expected);
            assert!(e.arrows.binary_search(&(img as u32)).is_ok());
        }
    }

    #[test]
    fn anti_cech_pair_two() {
        let g = pair(2);
        let seq = build_anti_cech(&g, 4, 2, DEFAULT_CAP).unwrap();
        assert!(seq.stabilized_at.is_some());
        assert_eq!(anti_cech_homology(&seq, 0).unwrap(), HomologyGroup::free(1));
        assert!(anti_cech_homology(&seq, 1).unwrap().is_zero());
        let report = compare_with_groupoid(&seq, 2, DEFAULT_CAP).unwrap();
        assert!(report.iso, "comparison failed: {:?}", report.degrees);
    }

    #[test]
    fn anti_cech_requires_principal() {
        let g = Arc::new(GroupoidSpec::CyclicGroup { m: 2 }.build().unwrap());
        assert!(matches!(
            build_anti_cech(&g, 2, 1, DEFAULT_CAP),
            Err(Error::NotPrincipal { .. })
        ));
    }

    #[test]
    fn phi_rejects_non_lebesgue_colourings() {
        let g = pair(2);
        let units: Vec<usize> = (0..2).map(|u| g.unit_arrow(u)).collect();
        let parts = vec![
            crate::groupoid::Subgroupoid::new(g.clone(), vec![units[0]]).unwrap(),
            crate::groupoid::Subgroupoid::new(g.clone(), vec![units[1]]).unwrap(),
        ];
        let c = Colouring::new(g.clone(), parts).unwrap();
        let data = nerve(&c, 2, DEFAULT_CAP).unwrap();
        let eg = Arc::new(tuple_space(&g, None, 2, DEFAULT_CAP).unwrap());
        let err = phi(&eg, &data, &ScaleSet::all(&g));
        assert!(matches!(err, Err(Error::NotLebesgue { .. })));
    }

    #[test]
    fn closeness_needs_matching_targets() {
        let g = pair(2);
        let c = Colouring::whole(g.clone());
        let data = nerve(&c, 2, DEFAULT_CAP).unwrap();
        let k = ScaleSet::all(&g);
        let eg = Arc::new(tuple_space(&g, None, 2, DEFAULT_CAP).unwrap());
        let psi_map = psi(&data, &eg, &k).unwrap();
        let id_nerve = SsMorphism::identity(&data.full);
        assert!(matches!(
            closeness(&psi_map, &id_nerve, &k),
            Err(Error::TargetKindMismatch { .. })
        ));
    }

    #[test]
    fn equal_morphisms_are_close() {
        let g = pair(2);
        // tuple-space targets: a morphism is close to itself already at the
        // units scale, since the image quotients are identity arrows
        let eg = Arc::new(tuple_space(&g, None, 2, DEFAULT_CAP).unwrap());
        let id_eg = SsMorphism::identity(&eg);
        assert!(closeness(&id_eg, &id_eg, &ScaleSet::units_only(&g)).unwrap());
        // nerve targets need the scale to absorb a whole cover element: a
        // singleton cover is units-close, a fibre cover is not
        let units: Vec<usize> = (0..2).map(|u| g.unit_arrow(u)).collect();
        let parts = vec![
            crate::groupoid::Subgroupoid::new(g.clone(), vec![units[0]]).unwrap(),
            crate::groupoid::Subgroupoid::new(g.clone(), vec![units[1]]).unwrap(),
        ];
        let singleton = Colouring::new(g.clone(), parts).unwrap();
        let sdata = nerve(&singleton, 2, DEFAULT_CAP).unwrap();
        let id_s = SsMorphism::identity(&sdata.full);
        assert!(closeness(&id_s, &id_s, &ScaleSet::units_only(&g)).unwrap());
        let whole = Colouring::whole(g.clone());
        let wdata = nerve(&whole, 2, DEFAULT_CAP).unwrap();
        let id_w = SsMorphism::identity(&wdata.full);
        assert!(!closeness(&id_w, &id_w, &ScaleSet::units_only(&g)).unwrap());
        assert!(closeness(&id_w, &id_w, &ScaleSet::all(&g)).unwrap());
        // the prism between a morphism and itself certifies the zero map
        let prism = closeness_homotopy(&id_w, &id_w, &id_w).unwrap();
        assert!(prism.chain_level.holds().unwrap());
        assert!(prism.map_is_zero());
    }

    #[test]
    fn too_few_steps_is_not_stabilized() {
        let g = pair(4);
        let seq = build_anti_cech(&g, 1, 1, DEFAULT_CAP).unwrap();
        assert!(seq.stabilized_at.is_none());
        assert!(matches!(
            anti_cech_homology(&seq, 0),
            Err(Error::NotStabilized { .. })
        ));
    }
}
