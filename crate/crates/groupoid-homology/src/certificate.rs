//! Exact certification of chain maps and chain homotopies.
//!
//! A certificate packages degree-indexed matrices together with the identity
//! they are supposed to satisfy; verification is exact integer matrix
//! arithmetic, never numeric.

use crate::complex::IntegerChainComplex;
use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use num_bigint::BigInt;

/// First failing entry of a certified identity.
#[derive(Clone, Debug)]
pub struct Discrepancy {
    pub degree: usize,
    pub row: usize,
    pub col: usize,
    pub lhs: BigInt,
    pub rhs: BigInt,
}

impl std::fmt::Display for Discrepancy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "degree {} entry ({},{}): lhs {} != rhs {}",
            self.degree, self.row, self.col, self.lhs, self.rhs
        )
    }
}

/// Degree-indexed map data with an optional homotopy.
///
/// With a homotopy present, the certified identity is
/// `d h + h d = map` in every degree where the homotopy is defined
/// (so a homotopy between chain maps f and g stores `map = f - g`).
/// Without one, the certified identity is that `map` is a chain map:
/// `d map = map d`.
#[derive(Clone)]
pub struct ChainMapCertificate {
    pub source: IntegerChainComplex,
    pub target: IntegerChainComplex,
    /// map_matrices[n]: source degree n -> target degree n.
    pub map_matrices: Vec<IntMatrix>,
    /// homotopy_matrices[n]: source degree n -> target degree n+1.
    pub homotopy_matrices: Option<Vec<IntMatrix>>,
    pub claimed_identity: String,
}

impl ChainMapCertificate {
    fn check_shapes(&self) -> Result<()> {
        for (n, f) in self.map_matrices.iter().enumerate() {
            if f.rows() != self.target.dim(n) || f.cols() != self.source.dim(n) {
                return Err(Error::DimensionMismatch {
                    context: format!("map matrix at degree {n}"),
                    expected: format!("{} x {}", self.target.dim(n), self.source.dim(n)),
                    got: format!("{} x {}", f.rows(), f.cols()),
                });
            }
        }
        if let Some(hs) = &self.homotopy_matrices {
            for (n, h) in hs.iter().enumerate() {
                if h.rows() != self.target.dim(n + 1) || h.cols() != self.source.dim(n) {
                    return Err(Error::DimensionMismatch {
                        context: format!("homotopy matrix at degree {n}"),
                        expected: format!("{} x {}", self.target.dim(n + 1), self.source.dim(n)),
                        got: format!("{} x {}", h.rows(), h.cols()),
                    });
                }
            }
        }
        Ok(())
    }

    /// Verifies the claimed identity exactly; `Ok(Err(d))` carries the first
    /// discrepancy when the identity fails to hold.
    pub fn verify(&self) -> Result<std::result::Result<(), Discrepancy>> {
        self.check_shapes()?;
        match &self.homotopy_matrices {
            Some(hs) => {
                // d_{n+1} h_n + h_{n-1} d_n = map_n for all n with h_n present
                for n in 0..hs.len() {
                    let mut lhs = self.target.boundary(n + 1).mul(&hs[n]);
                    if n > 0 {
                        lhs = lhs.add(&hs[n - 1].mul(&self.source.boundary(n)));
                    }
                    let rhs = &self.map_matrices[n];
                    if let Some((r, c, l, rv)) = lhs.first_difference(rhs) {
                        return Ok(Err(Discrepancy {
                            degree: n,
                            row: r,
                            col: c,
                            lhs: l,
                            rhs: rv,
                        }));
                    }
                }
            }
            None => {
                for n in 1..self.map_matrices.len() {
                    let lhs = self.target.boundary(n).mul(&self.map_matrices[n]);
                    let rhs = self.map_matrices[n - 1].mul(&self.source.boundary(n));
                    if let Some((r, c, l, rv)) = lhs.first_difference(&rhs) {
                        return Ok(Err(Discrepancy {
                            degree: n,
                            row: r,
                            col: c,
                            lhs: l,
                            rhs: rv,
                        }));
                    }
                }
            }
        }
        Ok(Ok(()))
    }

    /// Convenience wrapper: true iff the identity holds.
    pub fn holds(&self) -> Result<bool> {
        Ok(self.verify()?.is_ok())
    }
}

/// Spec-level entry point: exact certification, propagating the discrepancy.
pub fn certify_homotopy(cert: &ChainMapCertificate) -> Result<std::result::Result<(), Discrepancy>> {
    cert.verify()
}
