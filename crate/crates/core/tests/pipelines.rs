use charcycle_core::invariants::{ORIGIN, Z_REG};
use charcycle_core::nearby::{analyze, FamilySpec, Mode};
use charcycle_core::report::{catalog_suite, Status};
use charcycle_core::{parse_poly, Polynomial};
use proptest::prelude::*;

fn curve(c: i64, a: u32, d: i64, b: u32) -> Polynomial {
    let op = if d < 0 { '-' } else { '+' };
    parse_poly(
        &format!("{c}*x^{a} {op} {}*y^{b}", d.abs()),
        &["x".to_string(), "y".to_string()],
    )
    .unwrap()
}

#[test]
fn suite_is_seed_invariant() {
    let runs: Vec<Vec<(String, Option<String>)>> = [0, 1, 99]
        .iter()
        .map(|&seed| {
            let r = catalog_suite(seed);
            assert_eq!(r.status, Status::Pass, "seed {seed}:\n{}", r.render_text());
            r.entries
                .into_iter()
                .map(|e| (e.name, e.computed))
                .collect()
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    assert_eq!(runs[0], runs[2]);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    // c x^a + d y^b: m_Z = (a-1)(b-1), generic line section min(a,b) - 1
    #[test]
    fn brieskorn_curves(a in 2u32..=6, b in 2u32..=5, c in 1i64..=7, d in -7i64..=7, seed in 0u64..1000) {
        prop_assume!(d != 0);
        let f = curve(c, a, d, b);
        let mu = ((a - 1) * (b - 1)) as i64;
        let mu_h = a.min(b) as i64 - 1;

        let nearby = analyze(&FamilySpec::new(f.clone(), Mode::Nearby).with_seed(seed)).unwrap();
        prop_assert!(nearby.report.passed, "{:?}", nearby.report.checks);
        prop_assert_eq!(nearby.cycle.multiplicity(Z_REG), -1);
        prop_assert_eq!(nearby.cycle.multiplicity(ORIGIN), mu + mu_h);

        let vanishing = analyze(&FamilySpec::new(f, Mode::Vanishing).with_seed(seed)).unwrap();
        prop_assert!(vanishing.report.passed, "{:?}", vanishing.report.checks);
        prop_assert_eq!(vanishing.cycle.multiplicity(ORIGIN), mu);
        prop_assert_eq!(vanishing.cycle.support().count(), 1);
    }

    // nearby - vanishing only depends on the generic section
    #[test]
    fn triangle_difference(a in 2u32..=6, b in 2u32..=6, seed in 0u64..1000) {
        let f = curve(1, a, 1, b);
        let nearby = analyze(&FamilySpec::new(f.clone(), Mode::Nearby).with_seed(seed)).unwrap().cycle;
        let vanishing = analyze(&FamilySpec::new(f, Mode::Vanishing).with_seed(seed)).unwrap().cycle;
        let restriction = nearby.sub(&vanishing).unwrap();
        prop_assert_eq!(restriction.multiplicity(Z_REG), -1);
        prop_assert_eq!(restriction.multiplicity(ORIGIN), a.min(b) as i64 - 1);
    }
}
