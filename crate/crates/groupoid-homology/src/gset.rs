//! Finite left G-sets, equivariant maps, and coinvariants.
//!
//! Points carry a tuple payload (indices into some level-0 ground set) so the
//! tuple complexes and nerves can share one action model. The coinvariants of
//! Z[X] are computed by orbit relations: on delta-function bases the
//! generators of the relation submodule reduce to differences between a point
//! and its translates, so the quotient is free on orbits.

use crate::error::{Error, Result};
use crate::groupoid::{FiniteAmpleGroupoid, UnionFind};
use crate::matrix::IntMatrix;
use num_bigint::BigInt;
use num_traits::One;
use std::collections::HashMap;
use std::sync::Arc;

/// A finite set with a left groupoid action. `anchor` sends each point to a
/// unit position; `g . x` is defined exactly when src(g) = anchor(x).
#[derive(Clone, Debug)]
pub struct FiniteGSet {
    g: Arc<FiniteAmpleGroupoid>,
    points: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
    anchor: Vec<usize>,
    action: HashMap<(u32, u32), u32>,
}

impl FiniteGSet {
    /// Builds the action table from a pointwise rule and validates the action
    /// axioms exactly.
    pub fn build(
        g: Arc<FiniteAmpleGroupoid>,
        points: Vec<Vec<u32>>,
        anchor_of: impl Fn(&[u32]) -> usize,
        act: impl Fn(usize, &[u32]) -> Option<Vec<u32>>,
    ) -> Result<FiniteGSet> {
        let mut index = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            if index.insert(p.clone(), i).is_some() {
                return Err(Error::MalformedSpec {
                    reason: "duplicate point in G-set".into(),
                    witness: format!("{p:?}"),
                });
            }
        }
        let anchor: Vec<usize> = points.iter().map(|p| anchor_of(p)).collect();
        let mut action = HashMap::new();
        for (xi, p) in points.iter().enumerate() {
            for &arrow in g.source_fiber(anchor[xi]) {
                let image = act(arrow, p).ok_or_else(|| Error::MalformedSpec {
                    reason: "action rule undefined on a composable pair".into(),
                    witness: format!("({}, {p:?})", g.id(arrow)),
                })?;
                let yi = *index.get(&image).ok_or_else(|| Error::MalformedSpec {
                    reason: "action leaves the point set".into(),
                    witness: format!("({}, {p:?})", g.id(arrow)),
                })?;
                action.insert((arrow as u32, xi as u32), yi as u32);
            }
        }
        let out = FiniteGSet {
            g,
            points,
            index,
            anchor,
            action,
        };
        out.validate()?;
        Ok(out)
    }

    fn validate(&self) -> Result<()> {
        let g = self.g.as_ref();
        for xi in 0..self.points.len() {
            let a = self.anchor[xi];
            let e = g.unit_arrow(a);
            if self.act(e, xi) != Some(xi) {
                return Err(Error::MalformedSpec {
                    reason: "unit does not act trivially".into(),
                    witness: format!("point {xi}"),
                });
            }
            for &h in g.source_fiber(a) {
                let hx = self.act(h, xi).expect("table is total on composable pairs");
                if self.anchor[hx] != g.rng_pos(h) {
                    return Err(Error::MalformedSpec {
                        reason: "anchor not compatible with the action".into(),
                        witness: format!("({}, point {xi})", g.id(h)),
                    });
                }
                for &k in g.source_fiber(g.rng_pos(h)) {
                    let kh = g.compose(k, h).expect("composable");
                    if self.act(kh, xi) != self.act(k, hx) {
                        return Err(Error::MalformedSpec {
                            reason: "action not compatible with composition".into(),
                            witness: format!("({}, {}, point {xi})", g.id(k), g.id(h)),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn groupoid(&self) -> &Arc<FiniteAmpleGroupoid> {
        &self.g
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &[u32] {
        &self.points[i]
    }

    pub fn index_of(&self, p: &[u32]) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn anchor(&self, i: usize) -> usize {
        self.anchor[i]
    }

    pub fn act(&self, arrow: usize, point: usize) -> Option<usize> {
        self.action.get(&(arrow as u32, point as u32)).map(|&v| v as usize)
    }

    /// True when only units fix points.
    pub fn is_free(&self) -> bool {
        self.action
            .iter()
            .all(|(&(arrow, x), &y)| x != y || self.g.is_unit(arrow as usize))
    }

    /// Orbit partition; representatives are minimal point indices.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.points.len());
        for (&(_, x), &y) in &self.action {
            uf.union(x as usize, y as usize);
        }
        uf.classes()
    }
}

/// The coinvariants Z[X]_G presented on the orbit basis, with the quotient
/// map from Z[points].
#[derive(Clone, Debug)]
pub struct CoinvariantModule {
    pub orbit_reps: Vec<usize>,
    pub orbit_of: Vec<usize>,
    pub quotient: IntMatrix,
}

impl CoinvariantModule {
    pub fn n_orbits(&self) -> usize {
        self.orbit_reps.len()
    }

    /// Section of the quotient: orbit basis vector to its representative.
    pub fn section(&self) -> IntMatrix {
        let mut s = IntMatrix::zero(self.orbit_of.len(), self.orbit_reps.len());
        for (o, &rep) in self.orbit_reps.iter().enumerate() {
            s.set(rep, o, BigInt::one());
        }
        s
    }

    /// Induced map on coinvariants of an equivariant map given as a matrix on
    /// points: quotient . f . section of the source.
    pub fn induce(&self, f: &IntMatrix, source: &CoinvariantModule) -> IntMatrix {
        self.quotient.mul(&f.mul(&source.section()))
    }
}

pub fn coinvariants(x: &FiniteGSet) -> CoinvariantModule {
    let orbits = x.orbits();
    let mut orbit_of = vec![0usize; x.len()];
    let mut orbit_reps = Vec::with_capacity(orbits.len());
    for (o, class) in orbits.iter().enumerate() {
        orbit_reps.push(class[0]);
        for &p in class {
            orbit_of[p] = o;
        }
    }
    let mut quotient = IntMatrix::zero(orbit_reps.len(), x.len());
    for (p, &o) in orbit_of.iter().enumerate() {
        quotient.set(o, p, BigInt::one());
    }
    CoinvariantModule {
        orbit_reps,
        orbit_of,
        quotient,
    }
}

/// The averaging map from functions on points to functions on orbits, summing
/// a function over the translates of a point: on the class of x it sends f to
/// the sum of f(g.x) over the source fibre of the anchor. Only well defined
/// over representatives for free actions; computed from every representative
/// and checked for agreement.
pub fn epsilon_tilde(x: &FiniteGSet, coinv: &CoinvariantModule) -> Result<IntMatrix> {
    let g = x.groupoid().as_ref();
    let mut m = IntMatrix::zero(coinv.n_orbits(), x.len());
    for (o, &rep) in coinv.orbit_reps.iter().enumerate() {
        for &arrow in g.source_fiber(x.anchor(rep)) {
            let y = x.act(arrow, rep).expect("total");
            m.add_at(o, y, &BigInt::one());
        }
    }
    // well-definedness over representatives
    for p in 0..x.len() {
        let o = coinv.orbit_of[p];
        let mut row = IntMatrix::zero(1, x.len());
        for &arrow in g.source_fiber(x.anchor(p)) {
            let y = x.act(arrow, p).expect("total");
            row.add_at(0, y, &BigInt::one());
        }
        if row != m.row_block(o, o + 1) {
            return Err(Error::MalformedSpec {
                reason: "averaging map depends on the representative (action is not free)".into(),
                witness: format!("point {p}"),
            });
        }
    }
    Ok(m)
}

/// For a free action: checks that the averaging map and the orbit section
/// are mutually inverse, one exactly and one on the quotient.
pub fn verify_free_coinvariants(x: &FiniteGSet, coinv: &CoinvariantModule) -> Result<()> {
    if !x.is_free() {
        return Err(Error::MalformedSpec {
            reason: "mutual-inverse identities require a free action".into(),
            witness: String::new(),
        });
    }
    let e = epsilon_tilde(x, coinv)?;
    let s = coinv.section();
    let fail = |what: &str| Error::MalformedSpec {
        reason: format!("free coinvariants identity fails: {what}"),
        witness: String::new(),
    };
    if e.mul(&s) != IntMatrix::identity(coinv.n_orbits()) {
        return Err(fail("averaging . section != id"));
    }
    if coinv.quotient.mul(&s.mul(&e)) != coinv.quotient {
        return Err(fail("section . averaging != id on the quotient"));
    }
    Ok(())
}

/// Matrix of the pushforward along a point map: column x has a single 1 in
/// row f(x); non-injective maps accumulate.
pub fn pushforward_matrix(f: &[usize], target_len: usize) -> IntMatrix {
    let mut m = IntMatrix::zero(target_len, f.len());
    for (x, &fx) in f.iter().enumerate() {
        m.add_at(fx, x, &BigInt::one());
    }
    m
}

/// Exact equivariance check of a point map between G-sets over one groupoid.
pub fn is_equivariant(f: &[usize], source: &FiniteGSet, target: &FiniteGSet) -> bool {
    if f.len() != source.len() {
        return false;
    }
    for x in 0..source.len() {
        if target.anchor(f[x]) != source.anchor(x) {
            return false;
        }
        for &arrow in source.groupoid().source_fiber(source.anchor(x)) {
            let gx = source.act(arrow, x).expect("total");
            let fgx = f[gx];
            let gfx = target.act(arrow, f[x]);
            if gfx != Some(fgx) {
                return false;
            }
        }
    }
    true
}
