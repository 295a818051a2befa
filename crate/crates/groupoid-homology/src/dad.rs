//! One-scale dynamic asymptotic dimension witnesses and the constructive
//! colouring machinery.
//!
//! Relative compactness has no content on a finite groupoid, so a witness
//! carries an explicit arrow-count cap: a cover of the unit space is a
//! witness for dimension d at scale K when each of its d+1 pieces generates,
//! from the K-arrows moving inside the piece, a subgroupoid of at most
//! `size_cap` arrows. Witnesses convert to Lebesgue colourings, and a
//! Lebesgue colouring exists at every scale by combing fibre windows into
//! block groupoids around each unit.

use crate::colouring::Colouring;
use crate::error::{Error, Result};
use crate::groupoid::{generated_subgroupoid, Bisection, FiniteAmpleGroupoid, ScaleSet, Subgroupoid};
use std::collections::BTreeSet;
use std::sync::Arc;

/// Blocks combed out of a fibre window: a base set of units and bisections
/// partitioning the window, each ranging bijectively onto the base with
/// pairwise disjoint sources.
pub struct CombBlocks {
    pub base: Vec<usize>,
    pub blocks: Vec<Bisection>,
}

/// Combs the window r^{-1}(x) cap K over the singleton base {x}. In the
/// finite discrete setting the singleton base always satisfies the three
/// block conditions exactly: the window is partitioned by singleton
/// bisections whose sources are distinct by principality.
pub fn comb_blocks(g: &Arc<FiniteAmpleGroupoid>, k: &ScaleSet, x: usize) -> Result<CombBlocks> {
    g.require_principal()?;
    let window: Vec<usize> = g
        .range_fiber(x)
        .iter()
        .copied()
        .filter(|&a| k.contains(a))
        .collect();
    let mut seen_sources = BTreeSet::new();
    let mut blocks = Vec::with_capacity(window.len());
    for &a in &window {
        if !seen_sources.insert(g.src_pos(a)) {
            // cannot happen over a principal groupoid; keep the check exact
            return Err(Error::NotPrincipal {
                witness: g.id(a).to_string(),
            });
        }
        blocks.push(Bisection::new(g, vec![a]).expect("singletons are bisections"));
    }
    Ok(CombBlocks { base: vec![x], blocks })
}

/// The block groupoid combed around `x`: all quotients of two window arrows,
/// a pair groupoid on the window's source units.
fn block_groupoid(g: &Arc<FiniteAmpleGroupoid>, k: &ScaleSet, x: usize) -> Subgroupoid {
    let comb = comb_blocks(g, k, x).expect("caller checks principality");
    let mut members = Vec::new();
    for bi in &comb.blocks {
        for bj in &comb.blocks {
            let a = bi.arrows()[0];
            let b = bj.arrows()[0];
            if let Some(q) = g.compose(g.inv(a), b) {
                members.push(q);
            }
        }
    }
    Subgroupoid::new(g.clone(), members).expect("quotients of a combed window form a subgroupoid")
}

/// Units whose whole fibre window is swallowed by the part.
fn lebesgue_set(g: &FiniteAmpleGroupoid, k: &ScaleSet, part: &Subgroupoid) -> Vec<usize> {
    (0..g.n_units())
        .filter(|&y| {
            g.range_fiber(y)
                .iter()
                .filter(|&&a| k.contains(a))
                .all(|&a| part.contains(a))
        })
        .collect()
}

/// A K-Lebesgue colouring of a principal groupoid: block groupoids combed
/// around units, greedily selected (largest unit space first, ties by the
/// base unit) until the sets where each part swallows the fibre window cover
/// the unit space.
pub fn k_lebesgue_colouring(g: &Arc<FiniteAmpleGroupoid>, k: &ScaleSet) -> Result<Colouring> {
    g.require_principal()?;
    let candidates: Vec<(usize, Subgroupoid)> = (0..g.n_units())
        .map(|x| (x, block_groupoid(g, k, x)))
        .collect();
    let mut order: Vec<usize> = (0..candidates.len()).collect();
    order.sort_by(|&a, &b| {
        let ka = candidates[a].1.unit_positions().len();
        let kb = candidates[b].1.unit_positions().len();
        kb.cmp(&ka).then(candidates[a].0.cmp(&candidates[b].0))
    });
    let mut covered = vec![false; g.n_units()];
    let mut parts: Vec<Subgroupoid> = Vec::new();
    for idx in order {
        let (_, part) = &candidates[idx];
        let leb = lebesgue_set(g, k, part);
        if leb.iter().any(|&y| !covered[y]) {
            for &y in &leb {
                covered[y] = true;
            }
            parts.push(part.clone());
        }
        if covered.iter().all(|&c| c) {
            break;
        }
    }
    debug_assert!(covered.iter().all(|&c| c), "base units always cover");
    let colouring = Colouring::new(g.clone(), parts)?;
    debug_assert!(crate::anticech::is_k_lebesgue(&colouring, k));
    Ok(colouring)
}

/// A one-scale witness for dynamic asymptotic dimension at most d: a cover
/// of the unit space by d+1 pieces whose scale-restricted generated
/// subgroupoids respect the arrow-count cap.
pub struct DadWitness {
    pub scale: ScaleSet,
    pub cover: Vec<Vec<usize>>,
    pub generated: Vec<Subgroupoid>,
    pub size_cap: usize,
    /// Set when the witness came from the greedy (non-exhaustive) search.
    pub greedy: bool,
}

impl DadWitness {
    pub fn d(&self) -> usize {
        self.cover.len() - 1
    }

    /// Re-validates the witness invariants against a groupoid.
    pub fn validate(&self, g: &Arc<FiniteAmpleGroupoid>) -> Result<()> {
        if self.cover.is_empty() {
            return Err(Error::WitnessInvalid("empty cover".into()));
        }
        let mut covered = vec![false; g.n_units()];
        for piece in &self.cover {
            for &u in piece {
                if u >= g.n_units() {
                    return Err(Error::WitnessInvalid(format!("unknown unit position {u}")));
                }
                covered[u] = true;
            }
        }
        // the cover must reach the sources and ranges of the scale
        for &a in self.scale.arrows() {
            if !covered[g.src_pos(a)] || !covered[g.rng_pos(a)] {
                return Err(Error::WitnessInvalid(format!(
                    "cover misses an endpoint of scale arrow `{}`",
                    g.id(a)
                )));
            }
        }
        if self.generated.len() != self.cover.len() {
            return Err(Error::WitnessInvalid("one generated subgroupoid per piece".into()));
        }
        for (piece, gen) in self.cover.iter().zip(&self.generated) {
            let expected = generated_piece(g, &self.scale, piece);
            if expected.members() != gen.members() {
                return Err(Error::WitnessInvalid("generated subgroupoid mismatch".into()));
            }
            if gen.len() > self.size_cap {
                return Err(Error::WitnessInvalid(format!(
                    "generated subgroupoid has {} arrows over the cap {}",
                    gen.len(),
                    self.size_cap
                )));
            }
        }
        Ok(())
    }
}

fn generated_piece(g: &Arc<FiniteAmpleGroupoid>, k: &ScaleSet, piece: &[usize]) -> Subgroupoid {
    let inside: Vec<bool> = {
        let mut v = vec![false; g.n_units()];
        for &u in piece {
            v[u] = true;
        }
        v
    };
    let seed: Vec<usize> = k
        .arrows()
        .iter()
        .copied()
        .filter(|&a| inside[g.src_pos(a)] && inside[g.rng_pos(a)])
        .collect();
    generated_subgroupoid(g, &seed)
}

/// Converts a witness at the cubed scale into a K-Lebesgue colouring with at
/// most d+1 parts: each piece is inflated to the sources of the window
/// arrows entering it, and the K-arrows moving inside the inflation generate
/// the part.
pub fn dad_witness_to_colouring(
    g: &Arc<FiniteAmpleGroupoid>,
    k: &ScaleSet,
    witness: &DadWitness,
) -> Result<Colouring> {
    witness.validate(g)?;
    if witness.scale != k.cube(g) {
        return Err(Error::WitnessInvalid(
            "witness scale is not the cube of the requested scale".into(),
        ));
    }
    let mut parts = Vec::with_capacity(witness.cover.len());
    for piece in &witness.cover {
        let in_piece: Vec<bool> = {
            let mut v = vec![false; g.n_units()];
            for &u in piece {
                v[u] = true;
            }
            v
        };
        // W = s(r^{-1}(V) cap K)
        let mut inflated = vec![false; g.n_units()];
        for &a in k.arrows() {
            if in_piece[g.rng_pos(a)] {
                inflated[g.src_pos(a)] = true;
            }
        }
        let seed: Vec<usize> = k
            .arrows()
            .iter()
            .copied()
            .filter(|&a| inflated[g.src_pos(a)] && inflated[g.rng_pos(a)])
            .collect();
        parts.push(generated_subgroupoid(g, &seed));
    }
    let colouring = Colouring::new(g.clone(), parts)?;
    if let Some(x) = crate::anticech::lebesgue_witness(&colouring, k) {
        return Err(Error::WitnessInvalid(format!(
            "derived colouring is not Lebesgue at unit `{}`",
            g.unit_id(x)
        )));
    }
    Ok(colouring)
}

/// Outcome of the witness search.
pub enum WitnessSearch {
    Found(DadWitness),
    NotFound,
}

const EXACT_SEARCH_UNITS: usize = 12;

/// Searches for the smallest d <= d_max admitting a witness at the given
/// scale and cap. Partitions of the unit space are enumerated exhaustively
/// (restricted growth strings, pruned by the cap) when the unit space has at
/// most twelve units, greedily beyond; greedy results are flagged.
pub fn search_witness(
    g: &Arc<FiniteAmpleGroupoid>,
    k: &ScaleSet,
    d_max: usize,
    size_cap: usize,
) -> Result<WitnessSearch> {
    let n_units = g.n_units();
    let exact = n_units <= EXACT_SEARCH_UNITS;
    for d in 0..=d_max {
        let found = if exact {
            exact_partition_search(g, k, d + 1, size_cap)
        } else {
            greedy_partition_search(g, k, d + 1, size_cap)
        };
        if let Some(cover) = found {
            let generated: Vec<Subgroupoid> =
                cover.iter().map(|p| generated_piece(g, k, p)).collect();
            let witness = DadWitness {
                scale: k.clone(),
                cover,
                generated,
                size_cap,
                greedy: !exact,
            };
            witness.validate(g)?;
            return Ok(WitnessSearch::Found(witness));
        }
    }
    Ok(WitnessSearch::NotFound)
}

/// Depth-first enumeration of unit partitions into at most `colours` blocks
/// in restricted-growth order, pruning any prefix whose block already
/// exceeds the cap (adding units never shrinks a generated subgroupoid).
fn exact_partition_search(
    g: &Arc<FiniteAmpleGroupoid>,
    k: &ScaleSet,
    colours: usize,
    size_cap: usize,
) -> Option<Vec<Vec<usize>>> {
    fn rec(
        g: &Arc<FiniteAmpleGroupoid>,
        k: &ScaleSet,
        colours: usize,
        size_cap: usize,
        unit: usize,
        blocks: &mut Vec<Vec<usize>>,
    ) -> bool {
        let n_units = g.n_units();
        if unit == n_units {
            return !blocks.is_empty();
        }
        let open = blocks.len();
        let limit = (open + 1).min(colours);
        for b in 0..limit {
            if b == open {
                blocks.push(vec![unit]);
            } else {
                blocks[b].push(unit);
            }
            let ok = generated_piece(g, k, &blocks[b]).len() <= size_cap;
            if ok && rec(g, k, colours, size_cap, unit + 1, blocks) {
                return true;
            }
            if b == open {
                blocks.pop();
            } else {
                blocks[b].pop();
            }
        }
        false
    }
    if g.n_units() == 0 {
        return None;
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    if rec(g, k, colours, size_cap, 0, &mut blocks) {
        Some(blocks)
    } else {
        None
    }
}

fn greedy_partition_search(
    g: &Arc<FiniteAmpleGroupoid>,
    k: &ScaleSet,
    colours: usize,
    size_cap: usize,
) -> Option<Vec<Vec<usize>>> {
    let mut blocks: Vec<Vec<usize>> = vec![Vec::new(); colours];
    for unit in 0..g.n_units() {
        let mut placed = false;
        for b in 0..colours {
            blocks[b].push(unit);
            if generated_piece(g, k, &blocks[b]).len() <= size_cap {
                placed = true;
                break;
            }
            blocks[b].pop();
        }
        if !placed {
            return None;
        }
    }
    blocks.retain(|b| !b.is_empty());
    if blocks.is_empty() {
        None
    } else {
        Some(blocks)
    }
}
