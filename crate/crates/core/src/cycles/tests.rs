use std::collections::BTreeMap;
use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;

/// Random poset of `size` strata with a random unit-diagonal table and cycle.
fn random_triple(
    seed: u64,
    size: usize,
) -> (
    Arc<StratificationPoset>,
    EulerObstructionTable,
    LagrangianCycle,
) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let strata: Vec<Stratum> = (0..size)
        .map(|i| Stratum::new(format!("S{i}"), rng.gen_range(0..4), 4))
        .collect();
    let mut rel = Vec::new();
    for s in &strata {
        for t in &strata {
            if t.dimension < s.dimension && rng.gen_bool(0.5) {
                rel.push((t.label.clone(), s.label.clone()));
            }
        }
    }
    let rel: Vec<(&str, &str)> = rel.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let poset = Arc::new(StratificationPoset::new(strata, &rel).unwrap());
    let mut eu = EulerObstructionTable::unit_diagonal(&poset);
    let labels: Vec<String> = poset.labels().map(String::from).collect();
    for s in &labels {
        for t in poset.closure(s) {
            if t != s {
                eu.set(&poset, s, t, rng.gen_range(-5..=5)).unwrap();
            }
        }
    }
    let pairs: Vec<(&str, i64)> = labels
        .iter()
        .map(|l| (l.as_str(), rng.gen_range(-4..=4)))
        .collect();
    let cycle = LagrangianCycle::from_pairs(&poset, pairs).unwrap();
    (poset, eu, cycle)
}

proptest! {
    #[test]
    fn index_calculus_round_trip(seed in any::<u64>(), size in 1usize..=8) {
        let (_, eu, c) = random_triple(seed, size);
        let chi = chi_from_cc(&c, &eu).unwrap();
        prop_assert_eq!(cc_from_chi(&chi, &eu).unwrap(), c.clone());
        prop_assert_eq!(chi_from_cc(&cc_from_chi(&chi, &eu).unwrap(), &eu).unwrap(), chi);
    }

    #[test]
    fn shift_inverse_and_pairing_linearity(seed in any::<u64>(), k in -5i64..5, s in -3i64..3) {
        let (poset, _, c) = random_triple(seed, 6);
        prop_assert_eq!(c.shift(k).shift(-k), c.clone());
        let (_, _, d) = random_triple(seed.wrapping_add(1), 6);
        let d = LagrangianCycle::from_pairs(&poset, d.support().collect::<Vec<_>>()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data: BTreeMap<String, Vec<u32>> =
            poset.labels().map(|l| (l.to_string(), (0..rng.gen_range(0..4)).map(|_| rng.gen_range(0..4)).collect())).collect();
        let lhs = pair_with_test(&c.scale(s).add(&d).unwrap(), &data).unwrap();
        let rhs = s * pair_with_test(&c, &data).unwrap() + pair_with_test(&d, &data).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn constant_families_have_their_value_as_limit(v in -10i64..10, len in 3u32..7) {
        let fam = FamilyOfCycles::new(geometric_schedule(len).into_iter().map(|a| (a, v)).collect()).unwrap();
        prop_assert!(constancy_check(&fam).constant);
        prop_assert_eq!(limit_of_family(&fam, DEFAULT_STABILITY_WINDOW).unwrap(), v);
    }
}

#[test]
fn normal_crossings_vanishing_cycle_from_euler_table() {
    let strata = vec![
        Stratum::new("H1", 2, 3),
        Stratum::new("H2", 2, 3),
        Stratum::new("H3", 2, 3),
        Stratum::new("L1", 1, 3),
        Stratum::new("L2", 1, 3),
        Stratum::new("L3", 1, 3),
        Stratum::new("0", 0, 3),
    ];
    // L1 = {y = z = 0} lies in H2 = {y = 0} and H3 = {z = 0}
    let rel = [
        ("L1", "H2"),
        ("L1", "H3"),
        ("L2", "H1"),
        ("L2", "H3"),
        ("L3", "H1"),
        ("L3", "H2"),
        ("0", "L1"),
        ("0", "L2"),
        ("0", "L3"),
    ];
    let poset = Arc::new(StratificationPoset::new(strata, &rel).unwrap());
    let eu = EulerObstructionTable::smooth_closures(&poset);
    let chi =
        ConstructibleFunction::from_pairs(&poset, [("L1", -1), ("L2", -1), ("L3", -1), ("0", -1)])
            .unwrap();
    let cc = cc_from_chi(&chi, &eu).unwrap();
    let expected =
        LagrangianCycle::from_pairs(&poset, [("L1", -1), ("L2", -1), ("L3", -1), ("0", 2)])
            .unwrap();
    assert_eq!(cc, expected);
    assert_eq!(chi_from_cc(&expected, &eu).unwrap(), chi);
}
