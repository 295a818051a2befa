//! Smith normal form with unimodular transforms and invariant factors.
//!
//! ```bash
//! cargo run --example smith_normal_form
//! ```

use groupoid_homology::matrix::IntMatrix;
use groupoid_homology::snf::{invariant_factors, kernel_basis, smith_normal_form};

fn main() {
    let a = IntMatrix::from_rows(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, 4, 16]]);
    println!("A = {a:?}");
    let f = smith_normal_form(&a);
    println!("D = {:?}", f.d);
    assert_eq!(f.u.mul(&a).mul(&f.v), f.d);
    println!("U A V = D verified exactly");
    println!("invariant factors: {:?}", invariant_factors(&a));

    let b = IntMatrix::from_rows(&[vec![1, 2, 3], vec![2, 4, 6]]);
    let k = kernel_basis(&b);
    println!("kernel of a rank-one matrix has {} basis vectors", k.cols());
    assert!(b.mul(&k).is_zero_matrix());
}
