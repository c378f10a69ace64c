use expwell::solver::spectrum;
use expwell::{PotentialParams, SolverConfig};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn spectrum_is_ordered_and_bounded(z0 in 0.5f64..40.0, beta in 0.2f64..5.0) {
        let p = PotentialParams::natural((0.5 * z0 * beta).powi(2), beta).unwrap();
        let cfg = SolverConfig::default();
        let states = spectrum(&p, &cfg).unwrap().states;
        for (i, s) in states.iter().enumerate() {
            prop_assert_eq!(s.n, i);
            prop_assert!(s.nu > 0.0 && s.nu < p.z0());
            prop_assert!(-p.v0() < s.energy && s.energy < 0.0);
            prop_assert_eq!(s.alpha, 0.5 * s.nu * beta);
            prop_assert_eq!(s.energy, -s.alpha * s.alpha);
        }
        prop_assert!(states.windows(2).all(|w| w[0].nu > w[1].nu && w[0].energy < w[1].energy));
    }

    #[test]
    fn scaling_preserves_orders(v0 in 1.0f64..200.0, beta in 0.5f64..3.0) {
        let cfg = SolverConfig::default();
        let a = spectrum(&PotentialParams::natural(v0, beta).unwrap(), &cfg).unwrap().states;
        let b = spectrum(&PotentialParams::natural(4.0 * v0, 2.0 * beta).unwrap(), &cfg).unwrap().states;
        prop_assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x.nu - y.nu).abs() <= cfg.root_tol);
            prop_assert!((y.energy / x.energy - 4.0).abs() <= 4e-10);
        }
    }

    #[test]
    fn r_of_x_inverts_x_of_r(v0 in 0.1f64..100.0, beta in 0.1f64..10.0, r in 0.0f64..30.0) {
        let p = PotentialParams::natural(v0, beta).unwrap();
        let back = p.r_of_x(p.x_of_r(r)).unwrap();
        prop_assert!((back - r).abs() <= 1e-14 * r.max(1.0 / beta));
    }
}
