use icnash::channel::{sample_channel, utility_raw, ChannelRealization, Player};
use icnash::cs::{cs_ne_conditions, enumerate_cs_nash, find_one_cs_nash, Selection};
use icnash::oracle::{cross_validate, OracleConfig};
use icnash::pa::{
    alpha_dagger, best_response, enumerate_pa_nash, uniqueness_conditions, Fig1Type, GammaLines,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn gain() -> impl Strategy<Value = f64> {
    prop_oneof![0.01f64..1.0, 1.0f64..10.0, 10.0f64..100.0]
}

fn realization() -> impl Strategy<Value = ChannelRealization> {
    [
        [[gain(), gain()], [gain(), gain()]],
        [[gain(), gain()], [gain(), gain()]],
    ]
    .prop_map(|g| ChannelRealization::new(g).expect("positive gains"))
}

fn sampled() -> impl Strategy<Value = ChannelRealization> {
    (any::<u64>(), prop::sample::select(vec![0.1, 1.0, 10.0]))
        .prop_map(|(seed, snr)| sample_channel(&mut ChaCha8Rng::seed_from_u64(seed), snr))
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn utility_is_concave_in_own_action(ch in realization(), other in 0.0f64..=1.0, x in 0.0f64..=1.0, y in 0.0f64..=1.0) {
        for k in Player::BOTH {
            let mid = utility_raw(&ch, k, 0.5 * (x + y), other);
            let avg = 0.5 * (utility_raw(&ch, k, x, other) + utility_raw(&ch, k, y, other));
            prop_assert!(mid >= avg - 1e-12);
        }
    }

    #[test]
    fn best_response_beats_every_alternative(ch in realization(), other in 0.0f64..=1.0, alt in 0.0f64..=1.0) {
        for k in Player::BOTH {
            let br = best_response(&ch, k, other);
            prop_assert!((0.0..=1.0).contains(&br));
            prop_assert!(utility_raw(&ch, k, br, other) >= utility_raw(&ch, k, alt, other) - 1e-12);
        }
    }

    #[test]
    fn best_response_is_nonincreasing(ch in realization(), x in 0.0f64..=1.0, y in 0.0f64..=1.0) {
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        for k in Player::BOTH {
            prop_assert!(best_response(&ch, k, lo) >= best_response(&ch, k, hi) - 1e-12);
        }
    }

    #[test]
    fn enumerated_equilibria_are_fixed_points(ch in realization()) {
        let set = enumerate_pa_nash(&ch);
        for p in set.representatives(11) {
            prop_assert!((best_response(&ch, Player::One, p.alpha2()) - p.alpha1()).abs() < 1e-7);
            prop_assert!((best_response(&ch, Player::Two, p.alpha1()) - p.alpha2()).abs() < 1e-7);
        }
    }

    #[test]
    fn pa_equilibria_follow_channel_relabeling(ch in realization()) {
        let a = enumerate_pa_nash(&ch);
        let b = enumerate_pa_nash(&ch.swap_channels());
        prop_assert_eq!(a.count(), b.count());
        for p in a.representatives(11) {
            prop_assert!(b.distance_to(&p.swap_channels()) < 1e-7);
        }
    }

    #[test]
    fn pa_equilibria_follow_player_relabeling(ch in realization()) {
        let a = enumerate_pa_nash(&ch);
        let b = enumerate_pa_nash(&ch.swap_players());
        prop_assert_eq!(a.count(), b.count());
        for p in a.representatives(11) {
            prop_assert!(b.distance_to(&p.swap_players()) < 1e-7);
        }
    }

    #[test]
    fn pa_count_law_and_uniqueness(ch in sampled()) {
        let set = enumerate_pa_nash(&ch);
        let count = set.count();
        prop_assert!(count == Some(1) || count == Some(3), "type {:?}", set.fig1_type);
        prop_assert_eq!(uniqueness_conditions(&ch).any(), count == Some(1));
        if count == Some(3) {
            prop_assert_eq!(set.fig1_type, Fig1Type::D);
            let dagger = alpha_dagger(&GammaLines::of(&ch)).expect("three equilibria need a crossing");
            prop_assert!(set.contains(&icnash::ActionProfile::new(dagger[0], dagger[1]).unwrap(), 1e-9));
        }
    }

    #[test]
    fn cs_closed_form_matches_enumeration(ch in realization()) {
        let out = enumerate_cs_nash(&ch);
        prop_assert!(out.count() >= 1);
        if !out.tie_flag {
            prop_assert!(out.count() <= 2);
            for s in Selection::ALL {
                prop_assert_eq!(cs_ne_conditions(&ch, s), out.contains(s));
            }
            prop_assert!(!(out.contains(Selection::new(1, 1)) && out.contains(Selection::new(0, 0))));
        }
        prop_assert!(out.contains(find_one_cs_nash(&ch)));
    }

    #[test]
    fn cs_equilibria_follow_relabeling(ch in realization()) {
        let out = enumerate_cs_nash(&ch);
        let by_channel = enumerate_cs_nash(&ch.swap_channels());
        let by_player = enumerate_cs_nash(&ch.swap_players());
        for s in out.equilibria {
            prop_assert!(by_channel.contains(s.swap_channels()));
            prop_assert!(by_player.contains(s.swap_players()));
        }
    }

    #[test]
    fn json_round_trip(ch in realization()) {
        let back = ChannelRealization::from_json(&ch.to_json()).unwrap();
        prop_assert_eq!(back.gains(), ch.gains());
    }
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn oracle_agrees_with_closed_forms(ch in sampled()) {
        let cfg = OracleConfig::new(1e-2, 1e-9).unwrap();
        prop_assert!(cross_validate(&ch, &cfg).is_ok());
    }
}
