use adsres_core::resolvent::{resonance_list, ContourSpec};
use num_complex::Complex64;
use proptest::prelude::*;

proptest! {
    #[test]
    fn resonances_satisfy_z_equals_zeta_squared_plus_one(lmax in 0u32..60) {
        let list = resonance_list(lmax);
        prop_assert_eq!(list.len(), lmax as usize + 1);
        for r in list {
            prop_assert_eq!(r.z, r.zeta * r.zeta + Complex64::new(1.0, 0.0));
            prop_assert_eq!(r.parity == 0, r.l % 2 == 1);
        }
    }

    #[test]
    fn contour_rejects_integer_heights(k in 0u32..50) {
        prop_assert!(ContourSpec::new(k as f64).validate().is_err());
    }

    #[test]
    fn contour_accepts_positive_non_integer_heights(y in 0.01..50.0f64) {
        prop_assume!((y - y.round()).abs() > 1e-9);
        prop_assert!(ContourSpec::new(y).validate().is_ok());
    }
}

mod linearity {
    use adsres_core::differential_ops::{RadialProfile, TestFunction};
    use adsres_core::geometry::GroupElement;
    use adsres_core::resolvent::resolvent_physical;
    use num_complex::Complex64;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(3))]

        #[test]
        fn physical_resolvent_is_linear_in_f(a in -2.0..2.0f64, b in -2.0..2.0f64, c in 2.0..2.2f64) {
            let f = TestFunction::new(4.5).unwrap()
                .with_component(0, 0, RadialProfile::bump(c, 2.0, 20.0)).unwrap();
            let g = TestFunction::new(4.5).unwrap()
                .with_component(1, 1, RadialProfile::bump(2.1, 2.0, 20.0)).unwrap();
            let (a, b) = (Complex64::new(a, 0.5), Complex64::new(b, -0.25));
            let x = GroupElement::rotation(0.2) * GroupElement::boost(0.4);
            let z = Complex64::new(-3.0, 0.0);
            let lhs = resolvent_physical(&f.linear_combination(a, &g, b), z, x).unwrap().value;
            let rhs = a * resolvent_physical(&f, z, x).unwrap().value + b * resolvent_physical(&g, z, x).unwrap().value;
            prop_assert!((lhs - rhs).norm() <= 1e-8 * (1.0 + rhs.norm()));
        }
    }
}
