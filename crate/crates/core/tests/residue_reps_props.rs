use adsres_core::principal_series::parity_of_level;
use adsres_core::residue_reps::{classify_kxk_type, residue_rep, KxKType, SubquotientLabel};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4000))]

    #[test]
    fn swap_symmetry(l in 0u32..40, n in -200i64..200, m in -200i64..200) {
        prop_assert_eq!(classify_kxk_type(l, n, m), classify_kxk_type(l, m, n));
    }

    #[test]
    fn diagonal_is_covered(l in 0u32..40, n in -200i64..200) {
        let n = 2 * n + parity_of_level(l as i64) as i64;
        prop_assert_ne!(classify_kxk_type(l, n, n), SubquotientLabel::NotInResidueRep);
    }

    #[test]
    fn components_partition_the_sublattice(l in 0u32..25, n in -120i64..120, m in -120i64..120) {
        let desc = residue_rep(l);
        let t = KxKType { n, m };
        let hits: Vec<SubquotientLabel> = desc
            .components
            .iter()
            .filter(|c| c.predicate.contains(t))
            .map(|c| c.label)
            .collect();
        let label = classify_kxk_type(l, n, m);
        prop_assert!(hits.len() <= 1);
        match label {
            SubquotientLabel::ParityExcluded => prop_assert!(hits.is_empty()),
            SubquotientLabel::NotInResidueRep => prop_assert!(hits.is_empty()),
            other => prop_assert_eq!(hits, vec![other]),
        }
    }
}
