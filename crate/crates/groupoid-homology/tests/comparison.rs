//! Anti-Cech sequences over the principal corpus: stabilization, inflation,
//! and the two-sided comparison with groupoid homology.

use groupoid_homology::anticech::{anti_cech_homology, build_anti_cech, compare_with_groupoid};
use groupoid_homology::corpus::principal_corpus;
use groupoid_homology::matui::homology_of_groupoid;
use groupoid_homology::ss::DEFAULT_CAP;

fn steps_for(n_arrows: usize) -> usize {
    let mut s = 1;
    while (1usize << s) < n_arrows {
        s += 1;
    }
    s + 2
}

#[test]
fn comparison_isomorphism_on_principal_corpus() {
    for entry in principal_corpus() {
        let steps = steps_for(entry.g.n_arrows());
        let seq = build_anti_cech(&entry.g, steps, 3, DEFAULT_CAP)
            .unwrap_or_else(|e| panic!("{}: sequence failed: {e}", entry.name));
        assert!(
            seq.stabilized_at.is_some(),
            "{}: did not stabilize in {steps} steps",
            entry.name
        );
        let report = compare_with_groupoid(&seq, 3, DEFAULT_CAP)
            .unwrap_or_else(|e| panic!("{}: comparison failed: {e}", entry.name));
        assert!(report.closeness_certified, "{}: closeness prisms", entry.name);
        assert!(
            report.phi_then_psi_identity && report.psi_then_phi_identity,
            "{}: induced maps are not mutually inverse",
            entry.name
        );
        for (n, ha, hg, eq) in &report.degrees {
            assert!(eq, "{}: H_{n} mismatch: {ha} vs {hg}", entry.name);
        }
        // direct cross-check of one low degree against the tuple complex
        let h0 = anti_cech_homology(&seq, 0).unwrap();
        assert_eq!(h0, homology_of_groupoid(&entry.g, 0, DEFAULT_CAP).unwrap());
    }
}
