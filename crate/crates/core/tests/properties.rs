use proptest::prelude::*;

use shtuka_crit::brauer::{AlgebraSpec, Place};
use shtuka_crit::coweight::{BoundTuple, Coweight};
use shtuka_crit::criteria::{
    check_lau, check_main, check_quasicompact, check_quasicompact_exhaustive, Scenario, Variant,
};
use shtuka_crit::exactq::{QModZ, Rational};

fn scenario() -> impl Strategy<Value = Scenario> {
    (2usize..=4)
        .prop_flat_map(|d| {
            let invs = prop::collection::vec((1..d as i64, 1u32..=2), 1..6);
            let legs = prop::collection::vec(prop::collection::vec(-2i64..=2, d), 1..4);
            (Just(d), invs, legs)
        })
        .prop_map(|(d, mut invs, mut legs)| {
            invs[0].0 = 1;
            let s: i64 = invs.iter().map(|p| p.0).sum();
            let last = (-s).rem_euclid(d as i64);
            if last != 0 {
                invs.push((last, 1));
            }
            let algebra = AlgebraSpec {
                d,
                places: (0..invs.len())
                    .map(|k| Place::new(format!("x{k}"), invs[k].1))
                    .collect(),
                invariants: invs
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| p.0 % d as i64 != 0)
                    .map(|(k, p)| {
                        (
                            format!("x{k}"),
                            QModZ::new(Rational::new(p.0, d as i64).unwrap()),
                        )
                    })
                    .collect(),
            };
            for v in legs.iter_mut() {
                v.sort_unstable_by(|a, b| b.cmp(a));
            }
            let deg: i64 = legs.iter().flatten().sum();
            let last = legs.last_mut().unwrap();
            if deg > 0 {
                last[d - 1] -= deg;
            } else {
                last[0] -= deg;
            }
            let bounds = BoundTuple::new(
                legs.into_iter()
                    .enumerate()
                    .map(|(i, v)| (i as u32 + 1, Coweight::new(v).unwrap())),
            )
            .unwrap();
            Scenario::generic(algebra, bounds)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn lau_witnesses_recompute(s in scenario()) {
        let v = check_lau(&s);
        prop_assert_eq!(v.holds, v.witnesses.is_empty());
        for w in &v.witnesses {
            let m = w.m.unwrap();
            let lhs = s.bracket_sum(m, &s.ram());
            prop_assert_eq!(w.lhs.as_ref(), Some(&lhs));
            prop_assert_eq!(w.rhs.as_ref(), Some(&s.lambda_side(m)));
            prop_assert!(lhs <= s.lambda_side(m));
        }
    }

    #[test]
    fn main_witnesses_recompute(s in scenario()) {
        for variant in [Variant::Intro, Variant::Theorem] {
            let v = check_main(&s, variant);
            for w in &v.witnesses {
                let m = w.m.unwrap();
                let lhs = s.bracket_sum(m, &w.places);
                prop_assert_eq!(w.lhs.as_ref(), Some(&lhs));
                prop_assert!(lhs <= s.lambda_side(m));
            }
        }
    }

    #[test]
    fn quasicompact_shortcut_matches_search(s in scenario()) {
        let fast = check_quasicompact(&s);
        let slow = check_quasicompact_exhaustive(&s);
        prop_assert_eq!(fast.status, slow.status);
    }
}
