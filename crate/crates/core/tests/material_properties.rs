//! Randomized invariants of the constitutive updates.

use curvem_core::materials::{hencky_von_mises, j2_return_map, J2Params, PlasticState, Strain};
use proptest::prelude::*;

const J2: J2Params = J2Params {
    e: 7000.0,
    nu: 0.3,
    sigma_y: 24.3,
};

fn strain() -> impl Strategy<Value = Strain> {
    (-0.02..0.02f64, -0.02..0.02f64, -0.04..0.04f64).prop_map(|(a, b, c)| Strain::new(a, b, c))
}

proptest! {
    #[test]
    fn j2_stress_stays_admissible(e1 in strain(), e2 in strain()) {
        let (_, _, s1) = j2_return_map(&e1, &PlasticState::default(), &J2);
        let (_, c, s2) = j2_return_map(&e2, &s1, &J2);
        // the returned state is on or inside the yield surface: re-evaluating is elastic
        let (_, _, s3) = j2_return_map(&e2, &s2, &J2);
        prop_assert!((s3.alpha - s2.alpha).abs() <= 1e-12 * (1.0 + s2.alpha));
        prop_assert!(s2.alpha >= s1.alpha);
        let g = J2.e / (2.0 * (1.0 + J2.nu));
        prop_assert!((c - c.transpose()).norm() <= 1e-9 * c.norm());
        prop_assert!(c.symmetric_eigen().eigenvalues.min() > -1e-9 * g);
    }

    #[test]
    fn hencky_tangent_matches_finite_differences(e in strain()) {
        let (_, c) = hencky_von_mises(&e);
        let h = 1e-7;
        for j in 0..3 {
            let mut ep = e;
            let mut em = e;
            ep[j] += h;
            em[j] -= h;
            let fd = (hencky_von_mises(&ep).0 - hencky_von_mises(&em).0) / (2.0 * h);
            prop_assert!((fd - c.column(j)).norm() <= 1e-5 * c.norm());
        }
    }
}
