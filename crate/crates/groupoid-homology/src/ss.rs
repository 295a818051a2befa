//! Semi-simplicial G-spaces built from tuples over a level-0 ground set.
//!
//! Two instances share this machinery: the spaces of common-range arrow
//! tuples (optionally scale-constrained), and nerves of colourings whose
//! level-0 points are cover elements. Points at level n are (n+1)-tuples of
//! level-0 indices; face maps delete a coordinate, the groupoid acts
//! componentwise, and the alternating sum of faces turns the levels into a
//! chain complex, before or after coinvariants.

use crate::colouring::Cover;
use crate::complex::IntegerChainComplex;
use crate::error::{Error, Result};
use crate::groupoid::{FiniteAmpleGroupoid, ScaleSet};
use crate::gset::{coinvariants, is_equivariant, pushforward_matrix, CoinvariantModule, FiniteGSet};
use crate::matrix::IntMatrix;
use num_bigint::BigInt;
use std::sync::Arc;

pub const DEFAULT_CAP: usize = 2_000_000;

#[derive(Clone)]
pub enum SsBase {
    /// Level-0 points are the cover elements of a colouring.
    Nerve(Arc<Cover>),
    /// Level-0 points are all arrows; level n >= 1 keeps common-range tuples
    /// whose pairwise quotients lie in the scale (no constraint when None).
    Tuples { scale: Option<ScaleSet> },
}

impl SsBase {
    pub fn kind_name(&self) -> &'static str {
        match self {
            SsBase::Nerve(_) => "nerve",
            SsBase::Tuples { .. } => "range-tuples",
        }
    }
}

/// Levels 0..=max_degree of a semi-simplicial G-space.
#[derive(Clone)]
pub struct SsGSpace {
    pub g: Arc<FiniteAmpleGroupoid>,
    pub base: SsBase,
    pub levels: Vec<FiniteGSet>,
}

fn cap_guard(degree: usize, count: usize, cap: usize) -> Result<()> {
    if count > cap {
        Err(Error::EnumerationCapExceeded { degree, count, cap })
    } else {
        Ok(())
    }
}

/// The space of (n+1)-tuples of arrows with common range, levels up to
/// `max_degree`. Level 0 is always all arrows, whatever the scale. For n >= 1
/// a scale K keeps the tuples with inv(g_i) g_j in K for all i, j.
pub fn tuple_space(
    g: &Arc<FiniteAmpleGroupoid>,
    scale: Option<&ScaleSet>,
    max_degree: usize,
    cap: usize,
) -> Result<SsGSpace> {
    let pair_ok = |a: usize, b: usize| -> bool {
        match scale {
            None => true,
            Some(k) => {
                let q = g.compose(g.inv(a), b).expect("same range");
                k.contains(q)
            }
        }
    };
    let diag_ok = |a: usize| -> bool {
        match scale {
            None => true,
            Some(k) => k.contains(g.src_arrow(a)),
        }
    };
    let mut levels_points: Vec<Vec<Vec<u32>>> = Vec::new();
    let level0: Vec<Vec<u32>> = (0..g.n_arrows()).map(|a| vec![a as u32]).collect();
    cap_guard(0, level0.len(), cap)?;
    levels_points.push(level0);
    for n in 1..=max_degree {
        let mut tuples: Vec<Vec<u32>> = Vec::new();
        for u in 0..g.n_units() {
            let fiber = g.range_fiber(u);
            let mut stack: Vec<Vec<u32>> = vec![Vec::new()];
            // depth-first over tuple prefixes within one fibre
            while let Some(prefix) = stack.pop() {
                if prefix.len() == n + 1 {
                    tuples.push(prefix);
                    cap_guard(n, tuples.len(), cap)?;
                    continue;
                }
                // extend with fibre arrows in descending order so the stack
                // pops ascending
                for &a in fiber.iter().rev() {
                    if !diag_ok(a) {
                        continue;
                    }
                    if prefix.iter().all(|&p| pair_ok(p as usize, a) && pair_ok(a, p as usize)) {
                        let mut next = prefix.clone();
                        next.push(a as u32);
                        stack.push(next);
                    }
                }
            }
        }
        levels_points.push(tuples);
    }
    let levels = levels_points
        .into_iter()
        .map(|points| {
            FiniteGSet::build(
                g.clone(),
                points,
                |p| g.rng_pos(p[0] as usize),
                |arrow, p| {
                    p.iter()
                        .map(|&a| g.compose(arrow, a as usize).map(|c| c as u32))
                        .collect::<Option<Vec<u32>>>()
                },
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SsGSpace {
        g: g.clone(),
        base: SsBase::Tuples {
            scale: scale.cloned(),
        },
        levels,
    })
}

/// Which simplices of a nerve to keep, by colour vector.
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum ColourFilter {
    All,
    /// Weakly increasing colour vectors.
    Weak,
    /// Strictly increasing colour vectors.
    Strict,
}

impl ColourFilter {
    fn admits(&self, cover: &Cover, tuple: &[u32]) -> bool {
        match self {
            ColourFilter::All => true,
            ColourFilter::Weak => tuple
                .windows(2)
                .all(|w| cover.elements[w[0] as usize].colour <= cover.elements[w[1] as usize].colour),
            ColourFilter::Strict => tuple
                .windows(2)
                .all(|w| cover.elements[w[0] as usize].colour < cover.elements[w[1] as usize].colour),
        }
    }
}

/// Nerve levels of a cover: tuples of cover elements with a nonempty common
/// intersection of their arrow sets (colours ignored for the intersection).
pub fn nerve_space(
    g: &Arc<FiniteAmpleGroupoid>,
    cover: &Arc<Cover>,
    filter: ColourFilter,
    max_degree: usize,
    cap: usize,
) -> Result<SsGSpace> {
    let n_elts = cover.elements.len();
    let mut levels_points: Vec<Vec<Vec<u32>>> = Vec::new();
    for n in 0..=max_degree {
        let mut tuples: Vec<Vec<u32>> = Vec::new();
        // running intersection alongside each prefix
        let mut stack: Vec<(Vec<u32>, Vec<u32>)> = Vec::new();
        for e in (0..n_elts).rev() {
            stack.push((vec![e as u32], cover.elements[e].arrows.clone()));
        }
        while let Some((prefix, inter)) = stack.pop() {
            if !filter.admits(cover, &prefix) {
                continue;
            }
            if prefix.len() == n + 1 {
                tuples.push(prefix);
                cap_guard(n, tuples.len(), cap)?;
                continue;
            }
            for e in (0..n_elts).rev() {
                let elt = &cover.elements[e];
                let next_inter: Vec<u32> = inter
                    .iter()
                    .copied()
                    .filter(|a| elt.arrows.binary_search(a).is_ok())
                    .collect();
                if next_inter.is_empty() {
                    continue;
                }
                let mut next = prefix.clone();
                next.push(e as u32);
                stack.push((next, next_inter));
            }
        }
        levels_points.push(tuples);
    }
    let cov = cover.clone();
    let levels = levels_points
        .into_iter()
        .map(|points| {
            let cov = cov.clone();
            FiniteGSet::build(
                g.clone(),
                points,
                |p| cov.elements[p[0] as usize].anchor,
                |arrow, p| {
                    p.iter()
                        .map(|&e| cov.translate(arrow, e as usize).map(|t| t as u32))
                        .collect::<Option<Vec<u32>>>()
                },
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SsGSpace {
        g: g.clone(),
        base: SsBase::Nerve(cover.clone()),
        levels,
    })
}

impl SsGSpace {
    pub fn max_degree(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, n: usize) -> &FiniteGSet {
        &self.levels[n]
    }

    pub fn dim(&self, n: usize) -> usize {
        self.levels.get(n).map_or(0, |l| l.len())
    }

    /// The j-th face map at level n as a point map (coordinate deletion).
    pub fn face_map(&self, n: usize, j: usize) -> Vec<usize> {
        assert!(n >= 1 && j <= n);
        let src = &self.levels[n];
        let tgt = &self.levels[n - 1];
        (0..src.len())
            .map(|i| {
                let mut t = src.point(i).to_vec();
                t.remove(j);
                tgt.index_of(&t).expect("faces stay in the level below")
            })
            .collect()
    }

    /// Alternating sum of the face maps, level n to n-1; zero map at n = 0.
    pub fn boundary(&self, n: usize) -> IntMatrix {
        if n == 0 {
            return IntMatrix::zero(0, self.dim(0));
        }
        let rows = self.dim(n - 1);
        let cols = self.dim(n);
        let mut m = IntMatrix::zero(rows, cols);
        let mut sign = BigInt::from(1);
        for j in 0..=n {
            let f = self.face_map(n, j);
            for (x, &fx) in f.iter().enumerate() {
                m.add_at(fx, x, &sign);
            }
            sign = -sign;
        }
        m
    }

    /// Chain complex on the point bases.
    pub fn chain_complex(&self) -> Result<IntegerChainComplex> {
        let bases: Vec<Vec<String>> = (0..=self.max_degree())
            .map(|n| (0..self.dim(n)).map(|i| self.point_name(n, i)).collect())
            .collect();
        let boundaries: Vec<IntMatrix> = (0..=self.max_degree()).map(|n| self.boundary(n)).collect();
        IntegerChainComplex::new(bases, boundaries)
    }

    /// Chain complex on the orbit bases, with the per-level coinvariants.
    pub fn coinvariant_complex(&self) -> Result<(IntegerChainComplex, Vec<CoinvariantModule>)> {
        let coinvs: Vec<CoinvariantModule> = self.levels.iter().map(coinvariants).collect();
        let mut bases = Vec::new();
        let mut boundaries = Vec::new();
        for n in 0..=self.max_degree() {
            bases.push(
                coinvs[n]
                    .orbit_reps
                    .iter()
                    .map(|&rep| format!("[{}]", self.point_name(n, rep)))
                    .collect(),
            );
            let b = if n == 0 {
                IntMatrix::zero(0, coinvs[0].n_orbits())
            } else {
                coinvs[n - 1].induce(&self.boundary(n), &coinvs[n])
            };
            boundaries.push(b);
        }
        Ok((IntegerChainComplex::new(bases, boundaries)?, coinvs))
    }

    /// Witness arrow of the nonempty common intersection of a nerve simplex
    /// (the least member of the intersection). None for tuple bases.
    pub fn intersection_witness(&self, n: usize, i: usize) -> Option<u32> {
        let SsBase::Nerve(cov) = &self.base else {
            return None;
        };
        let tuple = self.levels[n].point(i);
        let first = &cov.elements[tuple[0] as usize].arrows;
        first
            .iter()
            .copied()
            .find(|a| {
                tuple[1..]
                    .iter()
                    .all(|&e| cov.elements[e as usize].arrows.binary_search(a).is_ok())
            })
    }

    pub fn point_name(&self, n: usize, i: usize) -> String {
        let tuple = self.levels[n].point(i);
        let parts: Vec<String> = match &self.base {
            SsBase::Nerve(_) => tuple.iter().map(|&e| format!("U{e}")).collect(),
            SsBase::Tuples { .. } => tuple.iter().map(|&a| self.g.id(a as usize).to_string()).collect(),
        };
        format!("({})", parts.join(","))
    }
}

/// A morphism of semi-simplicial G-spaces: a level-0 point map applied
/// componentwise at every level. Construction validates well-definedness,
/// equivariance, anchor preservation and face compatibility exactly.
#[derive(Clone)]
pub struct SsMorphism {
    pub source: Arc<SsGSpace>,
    pub target: Arc<SsGSpace>,
    pub levels: Vec<Vec<usize>>,
}

impl SsMorphism {
    pub fn from_level0(
        source: &Arc<SsGSpace>,
        target: &Arc<SsGSpace>,
        level0: Vec<usize>,
    ) -> Result<SsMorphism> {
        if level0.len() != source.dim(0) {
            return Err(Error::DimensionMismatch {
                context: "morphism level-0 map".into(),
                expected: source.dim(0).to_string(),
                got: level0.len().to_string(),
            });
        }
        let degrees = source.max_degree().min(target.max_degree());
        let mut levels: Vec<Vec<usize>> = Vec::with_capacity(degrees + 1);
        for n in 0..=degrees {
            let src = source.level(n);
            let tgt = target.level(n);
            let mut map = Vec::with_capacity(src.len());
            for i in 0..src.len() {
                let image: Vec<u32> = src.point(i).iter().map(|&e| level0[e as usize] as u32).collect();
                let Some(idx) = tgt.index_of(&image) else {
                    return Err(Error::MalformedSpec {
                        reason: format!("componentwise image misses the target at level {n}"),
                        witness: source.point_name(n, i),
                    });
                };
                map.push(idx);
            }
            if !is_equivariant(&map, src, tgt) {
                return Err(Error::MalformedSpec {
                    reason: format!("morphism is not equivariant at level {n}"),
                    witness: String::new(),
                });
            }
            levels.push(map);
        }
        let m = SsMorphism {
            source: source.clone(),
            target: target.clone(),
            levels,
        };
        m.check_faces()?;
        Ok(m)
    }

    fn check_faces(&self) -> Result<()> {
        for n in 1..self.levels.len() {
            for j in 0..=n {
                let sf = self.source.face_map(n, j);
                let tf = self.target.face_map(n, j);
                for x in 0..self.source.dim(n) {
                    if tf[self.levels[n][x]] != self.levels[n - 1][sf[x]] {
                        return Err(Error::MalformedSpec {
                            reason: format!("morphism does not commute with face {j} at level {n}"),
                            witness: self.source.point_name(n, x),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn degrees(&self) -> usize {
        self.levels.len()
    }

    /// Image of a level-0 point.
    pub fn apply0(&self, point: usize) -> usize {
        self.levels[0][point]
    }

    pub fn matrix(&self, n: usize) -> IntMatrix {
        pushforward_matrix(&self.levels[n], self.target.dim(n))
    }

    /// Induced matrices on coinvariants, one per shared degree.
    pub fn induced_matrices(
        &self,
        source_coinv: &[CoinvariantModule],
        target_coinv: &[CoinvariantModule],
    ) -> Vec<IntMatrix> {
        (0..self.levels.len())
            .map(|n| target_coinv[n].induce(&self.matrix(n), &source_coinv[n]))
            .collect()
    }

    /// Composition `other . self` (self first). The intermediate spaces must
    /// be the same object.
    pub fn then(&self, other: &SsMorphism) -> SsMorphism {
        assert!(
            Arc::ptr_eq(&self.target, &other.source),
            "composition through different spaces"
        );
        let degrees = self.levels.len().min(other.levels.len());
        SsMorphism {
            source: self.source.clone(),
            target: other.target.clone(),
            levels: (0..degrees)
                .map(|n| self.levels[n].iter().map(|&x| other.levels[n][x]).collect())
                .collect(),
        }
    }

    pub fn identity(space: &Arc<SsGSpace>) -> SsMorphism {
        SsMorphism {
            source: space.clone(),
            target: space.clone(),
            levels: (0..=space.max_degree()).map(|n| (0..space.dim(n)).collect()).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        Arc::ptr_eq(&self.source, &self.target)
            && self
                .levels
                .iter()
                .all(|lvl| lvl.iter().enumerate().all(|(i, &v)| i == v))
    }
}
