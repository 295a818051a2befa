//! Chain complexes of free Z-modules and their homology.

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::snf::{self, SnfOptions};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::fmt;

/// A bounded chain complex of finitely generated free Z-modules with named
/// bases. `boundaries[n]` maps degree n to degree n-1; `boundaries[0]` maps
/// into the zero module and must have zero rows.
#[derive(Clone, Debug)]
pub struct IntegerChainComplex {
    bases: Vec<Vec<String>>,
    boundaries: Vec<IntMatrix>,
}

impl IntegerChainComplex {
    /// Validates dimension chaining and dd = 0 in every represented degree.
    pub fn new(bases: Vec<Vec<String>>, boundaries: Vec<IntMatrix>) -> Result<Self> {
        assert_eq!(bases.len(), boundaries.len(), "one boundary per degree");
        for n in 0..bases.len() {
            let expected_rows = if n == 0 { 0 } else { bases[n - 1].len() };
            if boundaries[n].rows() != expected_rows || boundaries[n].cols() != bases[n].len() {
                return Err(Error::DimensionMismatch {
                    context: format!("boundary of degree {n}"),
                    expected: format!("{} x {}", expected_rows, bases[n].len()),
                    got: format!("{} x {}", boundaries[n].rows(), boundaries[n].cols()),
                });
            }
        }
        for n in 1..boundaries.len() {
            let prod = boundaries[n - 1].mul(&boundaries[n]);
            if let Some((r, c, v, _)) = prod.first_difference(&IntMatrix::zero(prod.rows(), prod.cols())) {
                return Err(Error::NotAComplex {
                    degree: n - 1,
                    row: r,
                    col: c,
                    value: v.to_string(),
                });
            }
        }
        Ok(IntegerChainComplex { bases, boundaries })
    }

    /// Complex with unnamed bases (names are positional).
    pub fn from_boundaries(dims: Vec<usize>, boundaries: Vec<IntMatrix>) -> Result<Self> {
        let bases = dims
            .iter()
            .enumerate()
            .map(|(n, &d)| (0..d).map(|i| format!("c{n}_{i}")).collect())
            .collect();
        Self::new(bases, boundaries)
    }

    pub fn top_degree(&self) -> usize {
        self.bases.len().saturating_sub(1)
    }

    pub fn degrees(&self) -> usize {
        self.bases.len()
    }

    pub fn dim(&self, n: usize) -> usize {
        self.bases.get(n).map_or(0, |b| b.len())
    }

    pub fn basis(&self, n: usize) -> &[String] {
        &self.bases[n]
    }

    /// Boundary map C_n -> C_{n-1}; degrees beyond the top are zero modules.
    pub fn boundary(&self, n: usize) -> IntMatrix {
        if n < self.boundaries.len() {
            self.boundaries[n].clone()
        } else if n == self.boundaries.len() {
            IntMatrix::zero(self.dim(n - 1), 0)
        } else {
            IntMatrix::zero(0, 0)
        }
    }
}

/// Normal form of a finitely generated abelian group: free rank plus an
/// ordered list of torsion coefficients, each dividing the next.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn free(rank: usize) -> Self {
        HomologyGroup {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Homology at degree n: free rank from rank-nullity, torsion from the
/// invariant factors of the incoming boundary. Valid because the cycle module
/// is a direct summand of the chain module.
pub fn homology(c: &IntegerChainComplex, n: usize) -> HomologyGroup {
    let d_n = c.boundary(n);
    let d_in = c.boundary(n + 1);
    let rank_out = snf::rank(&d_n);
    let factors_in = snf::invariant_factors(&d_in);
    let free_rank = c.dim(n) - rank_out - factors_in.len();
    let torsion: Vec<BigInt> = factors_in.into_iter().filter(|f| *f > BigInt::one()).collect();
    HomologyGroup { free_rank, torsion }
}

/// Coordinates on homology at a fixed degree: lets cycles be compared up to
/// boundaries and induced maps be evaluated on an explicit cycle basis.
pub struct HomologyClasses {
    dim: usize,
    rank_out: usize,
    vinv: IntMatrix,
    kernel: IntMatrix,
    u_w: IntMatrix,
    /// One entry per kernel basis vector: the invariant factor it is reduced
    /// by (zero means a free coordinate).
    moduli: Vec<BigInt>,
}

impl HomologyClasses {
    pub fn new(c: &IntegerChainComplex, n: usize) -> HomologyClasses {
        let d_n = c.boundary(n);
        let d_in = c.boundary(n + 1);
        let r = snf::snf(
            &d_n,
            SnfOptions {
                want_u: false,
                want_v: true,
                want_vinv: true,
            },
        );
        let v = r.v.unwrap();
        let vinv = r.vinv.unwrap();
        let kernel = v.col_block(r.rank, d_n.cols());
        let z = d_n.cols() - r.rank;
        // image of d_{n+1} in kernel coordinates
        let coords = vinv.mul(&d_in);
        debug_assert!(coords.row_block(0, r.rank).is_zero_matrix(), "dd != 0");
        let w = coords.row_block(r.rank, d_n.cols());
        let ws = snf::snf(
            &w,
            SnfOptions {
                want_u: true,
                want_v: false,
                want_vinv: false,
            },
        );
        let mut moduli = vec![BigInt::zero(); z];
        for (i, f) in ws.factors.iter().enumerate() {
            moduli[i] = f.clone();
        }
        HomologyClasses {
            dim: c.dim(n),
            rank_out: r.rank,
            vinv,
            kernel,
            u_w: ws.u.unwrap(),
            moduli,
        }
    }

    pub fn cycle_rank(&self) -> usize {
        self.kernel.cols()
    }

    /// Integer basis of the cycle module, one column per basis vector.
    pub fn kernel_basis(&self) -> &IntMatrix {
        &self.kernel
    }

    pub fn group(&self) -> HomologyGroup {
        let mut free_rank = 0;
        let mut torsion = Vec::new();
        for m in &self.moduli {
            if m.is_zero() {
                free_rank += 1;
            } else if *m > BigInt::one() {
                torsion.push(m.clone());
            }
        }
        HomologyGroup { free_rank, torsion }
    }

    /// Normal-form coordinates of the homology class of a cycle (a dim x 1
    /// column). Returns None if the vector is not a cycle.
    pub fn class_of(&self, cycle: &IntMatrix) -> Option<Vec<BigInt>> {
        assert_eq!(cycle.rows(), self.dim);
        assert_eq!(cycle.cols(), 1);
        let y = self.vinv.mul(cycle);
        for i in 0..self.rank_out {
            if !y.get(i, 0).is_zero() {
                return None;
            }
        }
        let zeta = y.row_block(self.rank_out, self.dim);
        let eta = self.u_w.mul(&zeta);
        let mut out = Vec::with_capacity(self.moduli.len());
        for (i, m) in self.moduli.iter().enumerate() {
            let v = eta.get(i, 0);
            if m.is_zero() {
                out.push(v);
            } else {
                out.push(v.mod_floor(m));
            }
        }
        Some(out)
    }

    /// True when the classes of two cycles agree.
    pub fn same_class(&self, a: &IntMatrix, b: &IntMatrix) -> bool {
        match (self.class_of(a), self.class_of(b)) {
            (Some(x), Some(y)) => x == y,
            _ => false,
        }
    }
}

/// Checks whether two chain maps `f, g: c -> d` (given on degree n) induce
/// the same map on n-th homology, by comparing classes on a cycle basis.
pub fn equal_on_homology(
    source: &IntegerChainComplex,
    target: &IntegerChainComplex,
    n: usize,
    f_n: &IntMatrix,
    g_n: &IntMatrix,
) -> bool {
    let src = HomologyClasses::new(source, n);
    let tgt = HomologyClasses::new(target, n);
    let kb = src.kernel_basis();
    for j in 0..kb.cols() {
        let z = kb.column(j);
        let fz = f_n.mul(&z);
        let gz = g_n.mul(&z);
        if !tgt.same_class(&fz, &gz) {
            return false;
        }
    }
    true
}

/// Checks whether an endo-map on degree n (a chain self-map of `c`) induces
/// the identity on n-th homology.
pub fn is_identity_on_homology(c: &IntegerChainComplex, n: usize, f_n: &IntMatrix) -> bool {
    let classes = HomologyClasses::new(c, n);
    let kb = classes.kernel_basis();
    for j in 0..kb.cols() {
        let z = kb.column(j);
        let fz = f_n.mul(&z);
        if !classes.same_class(&fz, &z) {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_torsion_complex() -> IntegerChainComplex {
        // 0 -> Z --(x2)--> Z -> 0
        let d0 = IntMatrix::zero(0, 1);
        let d1 = IntMatrix::from_rows(&[vec![2]]);
        IntegerChainComplex::from_boundaries(vec![1, 1], vec![d0, d1]).unwrap()
    }

    #[test]
    fn cokernel_of_two() {
        let c = two_torsion_complex();
        let h0 = homology(&c, 0);
        assert_eq!(h0.free_rank, 0);
        assert_eq!(h0.torsion, vec![BigInt::from(2)]);
        assert_eq!(h0.to_string(), "Z/2");
        let h1 = homology(&c, 1);
        assert!(h1.is_zero());
    }

    #[test]
    fn free_degree() {
        // 0 -> Z^3 -> 0 concentrated in degree 0
        let c = IntegerChainComplex::from_boundaries(vec![3], vec![IntMatrix::zero(0, 3)]).unwrap();
        assert_eq!(homology(&c, 0), HomologyGroup::free(3));
        assert_eq!(homology(&c, 0).to_string(), "Z^3");
        assert_eq!(homology(&c, 5), HomologyGroup::free(0));
    }

    #[test]
    fn rejects_non_complex() {
        let d0 = IntMatrix::zero(0, 1);
        let d1 = IntMatrix::from_rows(&[vec![1]]);
        let d2 = IntMatrix::from_rows(&[vec![1]]);
        let err = IntegerChainComplex::from_boundaries(vec![1, 1, 1], vec![d0, d1, d2]);
        assert!(matches!(err, Err(Error::NotAComplex { degree: 1, .. })));
    }

    #[test]
    fn classes_distinguish_torsion() {
        let c = two_torsion_complex();
        let classes = HomologyClasses::new(&c, 0);
        assert_eq!(classes.group().to_string(), "Z/2");
        let e = IntMatrix::basis_column(1, 0);
        let two_e = e.scale(&BigInt::from(2));
        assert!(classes.same_class(&two_e, &IntMatrix::zero(1, 1)));
        assert!(!classes.same_class(&e, &IntMatrix::zero(1, 1)));
    }

    #[test]
    fn circle_homology() {
        // simplicial circle: 3 vertices, 3 edges
        let d0 = IntMatrix::zero(0, 3);
        let d1 = IntMatrix::from_rows(&[
            vec![-1, 0, 1],
            vec![1, -1, 0],
            vec![0, 1, -1],
        ]);
        let c = IntegerChainComplex::from_boundaries(vec![3, 3], vec![d0, d1]).unwrap();
        assert_eq!(homology(&c, 0), HomologyGroup::free(1));
        assert_eq!(homology(&c, 1), HomologyGroup::free(1));
    }
}
