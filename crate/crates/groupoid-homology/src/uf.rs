//! Uniformly finite chains on finite metric spaces at fixed propagation, and
//! the translation to coinvariants of the pair-groupoid tuple complex.
//!
//! On a finite space every chain is bounded and of finite propagation, so the
//! chain groups are simply the free groups on point tuples. The comparison
//! with the pair groupoid is realized by two explicit mutually inverse maps:
//! normalizing a common-range tuple so that its first arrow is a unit reads
//! off a point tuple, and conversely a point tuple lifts to the tuple of
//! arrows leaving its first point. Distances are exact rationals throughout.

use crate::complex::IntegerChainComplex;
use crate::error::{Error, Result};
use crate::groupoid::{FiniteAmpleGroupoid, GroupoidSpec};
use crate::gset::{coinvariants, CoinvariantModule};
use crate::matrix::IntMatrix;
use crate::ss::{tuple_space, SsGSpace};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Deserialize;
use std::collections::BTreeMap;
use std::sync::Arc;

/// A finite metric space with exact rational distances.
#[derive(Clone, Debug)]
pub struct FiniteMetricSpace {
    points: Vec<String>,
    dist: Vec<BigRational>,
}

impl FiniteMetricSpace {
    pub fn new(points: Vec<String>, dist: Vec<Vec<BigRational>>) -> Result<FiniteMetricSpace> {
        let n = points.len();
        if n == 0 {
            return Err(Error::BadMetric("empty point set".into()));
        }
        if dist.len() != n || dist.iter().any(|row| row.len() != n) {
            return Err(Error::BadMetric("distance matrix shape mismatch".into()));
        }
        let flat: Vec<BigRational> = dist.into_iter().flatten().collect();
        let at = |i: usize, j: usize| &flat[i * n + j];
        for i in 0..n {
            if !at(i, i).is_zero() {
                return Err(Error::BadMetric(format!("nonzero diagonal at {}", points[i])));
            }
            for j in 0..n {
                if at(i, j).is_negative() {
                    return Err(Error::BadMetric(format!(
                        "negative distance between {} and {}",
                        points[i], points[j]
                    )));
                }
                if at(i, j) != at(j, i) {
                    return Err(Error::BadMetric(format!(
                        "asymmetric distance between {} and {}",
                        points[i], points[j]
                    )));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if at(i, k) > &(at(i, j) + at(j, k)) {
                        return Err(Error::BadMetric(format!(
                            "triangle inequality fails on ({}, {}, {})",
                            points[i], points[j], points[k]
                        )));
                    }
                }
            }
        }
        Ok(FiniteMetricSpace { points, dist: flat })
    }

    pub fn from_json(text: &str) -> Result<FiniteMetricSpace> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Entry {
            Int(i64),
            Str(String),
        }
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct MetricFile {
            points: Vec<String>,
            dist: Vec<Vec<Entry>>,
        }
        let file: MetricFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("metric space: {e}")))?;
        let parse_entry = |e: &Entry| -> Result<BigRational> {
            match e {
                Entry::Int(v) => Ok(BigRational::from_integer(BigInt::from(*v))),
                Entry::Str(s) => {
                    let mut parts = s.splitn(2, '/');
                    let p = parts
                        .next()
                        .and_then(|v| v.trim().parse::<i64>().ok())
                        .ok_or_else(|| Error::Parse(format!("bad rational `{s}`")))?;
                    let q = match parts.next() {
                        None => 1,
                        Some(v) => v
                            .trim()
                            .parse::<i64>()
                            .ok()
                            .filter(|&q| q != 0)
                            .ok_or_else(|| Error::Parse(format!("bad rational `{s}`")))?,
                    };
                    Ok(BigRational::new(BigInt::from(p), BigInt::from(q)))
                }
            }
        };
        let dist = file
            .dist
            .iter()
            .map(|row| row.iter().map(parse_entry).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        FiniteMetricSpace::new(file.points, dist)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &str {
        &self.points[i]
    }

    pub fn dist(&self, i: usize, j: usize) -> &BigRational {
        &self.dist[i * self.points.len() + j]
    }

    /// Max pairwise distance within a tuple of point indices.
    pub fn diameter(&self, tuple: &[u32]) -> BigRational {
        let mut best = BigRational::zero();
        for (k, &i) in tuple.iter().enumerate() {
            for &j in &tuple[k + 1..] {
                let d = self.dist(i as usize, j as usize).clone();
                if d > best {
                    best = d;
                }
            }
        }
        best
    }
}

/// A chain in degree n: finitely supported integer coefficients on
/// (n+1)-tuples of points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UfChain {
    pub degree: usize,
    pub coefficients: BTreeMap<Vec<u32>, BigInt>,
}

impl UfChain {
    pub fn new(degree: usize, coefficients: BTreeMap<Vec<u32>, BigInt>) -> UfChain {
        let coefficients = coefficients.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        UfChain { degree, coefficients }
    }

    pub fn delta(tuple: Vec<u32>) -> UfChain {
        let degree = tuple.len() - 1;
        let mut coefficients = BTreeMap::new();
        coefficients.insert(tuple, BigInt::from(1));
        UfChain { degree, coefficients }
    }

    /// Max diameter of the supported tuples (zero for the empty chain).
    pub fn propagation(&self, space: &FiniteMetricSpace) -> BigRational {
        let mut best = BigRational::zero();
        for tuple in self.coefficients.keys() {
            let d = space.diameter(tuple);
            if d > best {
                best = d;
            }
        }
        best
    }
}

/// Alternating sum of coordinate deletions. Propagation never grows.
pub fn uf_boundary(chain: &UfChain) -> Result<UfChain> {
    if chain.degree == 0 {
        return Err(Error::DegreeZero);
    }
    let mut out: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
    for (tuple, v) in &chain.coefficients {
        let mut sign = BigInt::from(1);
        for i in 0..tuple.len() {
            let mut face = tuple.clone();
            face.remove(i);
            let e = out.entry(face).or_insert_with(BigInt::zero);
            *e += v * &sign;
            sign = -sign;
        }
    }
    Ok(UfChain::new(chain.degree - 1, out))
}

fn tuple_basis(n_points: usize, len: usize) -> Vec<Vec<u32>> {
    let mut out: Vec<Vec<u32>> = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n_points as u32).map(move |p| {
                    let mut s = t.clone();
                    s.push(p);
                    s
                })
            })
            .collect();
    }
    out
}

/// The full chain complex of point tuples up to max_degree (on a finite
/// space every tuple has finite propagation, so nothing is filtered).
pub fn uf_complex(space: &FiniteMetricSpace, max_degree: usize) -> Result<IntegerChainComplex> {
    let n = space.len();
    let mut bases: Vec<Vec<String>> = Vec::new();
    let mut boundaries: Vec<IntMatrix> = Vec::new();
    let mut prev_index: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
    for degree in 0..=max_degree {
        let tuples = tuple_basis(n, degree + 1);
        let index: BTreeMap<Vec<u32>, usize> =
            tuples.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        bases.push(
            tuples
                .iter()
                .map(|t| {
                    let names: Vec<&str> = t.iter().map(|&p| space.point(p as usize)).collect();
                    format!("({})", names.join(","))
                })
                .collect(),
        );
        let b = if degree == 0 {
            IntMatrix::zero(0, tuples.len())
        } else {
            let mut m = IntMatrix::zero(prev_index.len(), tuples.len());
            for (col, t) in tuples.iter().enumerate() {
                let mut sign = BigInt::from(1);
                for i in 0..t.len() {
                    let mut face = t.clone();
                    face.remove(i);
                    m.add_at(prev_index[&face], col, &sign);
                    sign = -sign;
                }
            }
            m
        };
        boundaries.push(b);
        prev_index = index;
    }
    IntegerChainComplex::new(bases, boundaries)
}

/// The two chain-level translations between coinvariants of the
/// pair-groupoid tuple complex and point-tuple chains, as exact mutually
/// inverse matrices commuting with the boundaries.
pub struct UfTranslation {
    pub space: FiniteMetricSpace,
    pub g: Arc<FiniteAmpleGroupoid>,
    pub eg: SsGSpace,
    pub coinvs: Vec<CoinvariantModule>,
    pub eg_coinv: IntegerChainComplex,
    pub uf: IntegerChainComplex,
    /// alpha[n]: coinvariant orbit basis -> point-tuple basis.
    pub alphas: Vec<IntMatrix>,
    /// beta[n]: point-tuple basis -> coinvariant orbit basis.
    pub betas: Vec<IntMatrix>,
}

/// The pair groupoid on the points of a metric space. Units are indexed in
/// point order through an explicit dictionary.
pub fn pair_groupoid_on(space: &FiniteMetricSpace) -> Result<(Arc<FiniteAmpleGroupoid>, Vec<usize>)> {
    let g = Arc::new(GroupoidSpec::Pair { n: space.len() as u32 }.build()?);
    let unit_of_point: Vec<usize> = (0..space.len())
        .map(|i| {
            g.unit_position(&format!("({},{})", i + 1, i + 1))
                .expect("pair units exist")
        })
        .collect();
    Ok((g, unit_of_point))
}

pub fn uf_translation(space: &FiniteMetricSpace, max_degree: usize, cap: usize) -> Result<UfTranslation> {
    let (g, unit_of_point) = pair_groupoid_on(space)?;
    let mut point_of_unit = vec![0usize; g.n_units()];
    for (p, &u) in unit_of_point.iter().enumerate() {
        point_of_unit[u] = p;
    }
    let arrow_between = |r_point: usize, s_point: usize| -> usize {
        g.index_of(&format!("({},{})", r_point + 1, s_point + 1))
            .expect("pair arrows exist")
    };
    let eg = tuple_space(&g, None, max_degree, cap)?;
    let coinvs: Vec<CoinvariantModule> = eg.levels.iter().map(coinvariants).collect();
    let (eg_coinv, _) = eg.coinvariant_complex()?;
    let uf = uf_complex(space, max_degree)?;
    let n = space.len();
    let uf_index = |tuple: &[u32]| -> usize {
        tuple.iter().fold(0usize, |acc, &p| acc * n + p as usize)
    };
    let mut alphas = Vec::new();
    let mut betas = Vec::new();
    for degree in 0..=max_degree {
        let coinv = &coinvs[degree];
        let mut alpha = IntMatrix::zero(uf.dim(degree), coinv.n_orbits());
        for (o, &rep) in coinv.orbit_reps.iter().enumerate() {
            // normalize: translate the representative so its first arrow is
            // a unit, then read off the source points
            let arrows = eg.level(degree).point(rep);
            let tuple: Vec<u32> = arrows
                .iter()
                .map(|&a| point_of_unit[g.src_pos(a as usize)] as u32)
                .collect();
            alpha.set(uf_index(&tuple), o, BigInt::from(1));
        }
        let mut beta = IntMatrix::zero(coinv.n_orbits(), uf.dim(degree));
        for (col, t) in tuple_basis(n, degree + 1).iter().enumerate() {
            let arrows: Vec<u32> = t
                .iter()
                .map(|&p| arrow_between(t[0] as usize, p as usize) as u32)
                .collect();
            let idx = eg.level(degree).index_of(&arrows).expect("common-range tuple");
            beta.set(coinv.orbit_of[idx], col, BigInt::from(1));
        }
        alphas.push(alpha);
        betas.push(beta);
    }
    Ok(UfTranslation {
        space: space.clone(),
        g,
        eg,
        coinvs,
        eg_coinv,
        uf,
        alphas,
        betas,
    })
}

impl UfTranslation {
    /// alpha . beta = id on point tuples and beta . alpha = id on orbits.
    pub fn round_trips_are_identity(&self) -> bool {
        self.alphas.iter().zip(&self.betas).all(|(a, b)| {
            a.mul(b) == IntMatrix::identity(a.rows()) && b.mul(a) == IntMatrix::identity(b.rows())
        })
    }

    /// Both translations commute with the boundaries.
    pub fn chain_maps_commute(&self) -> bool {
        for degree in 1..self.alphas.len() {
            let lhs = self.uf.boundary(degree).mul(&self.alphas[degree]);
            let rhs = self.alphas[degree - 1].mul(&self.eg_coinv.boundary(degree));
            if lhs != rhs {
                return false;
            }
            let lhs = self.eg_coinv.boundary(degree).mul(&self.betas[degree]);
            let rhs = self.betas[degree - 1].mul(&self.uf.boundary(degree));
            if lhs != rhs {
                return false;
            }
        }
        true
    }

    /// Applies beta to a sparse chain and returns the orbit-basis column.
    pub fn beta_of_chain(&self, chain: &UfChain) -> IntMatrix {
        let n = self.space.len();
        let mut col = IntMatrix::zero(self.uf.dim(chain.degree), 1);
        for (t, v) in &chain.coefficients {
            let idx = t.iter().fold(0usize, |acc, &p| acc * n + p as usize);
            col.add_at(idx, 0, v);
        }
        self.betas[chain.degree].mul(&col)
    }
}
