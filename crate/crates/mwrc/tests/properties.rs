use mwrc::fractional::{alternating_gee2, maximize_gee1, AlternatingOptions};
use mwrc::game::{br_relay, br_sources, brd, is_nash, BrdStart, GameSpec};
use mwrc::gee::{gee_value, Gee1Params, Gee2Params};
use mwrc::oracle::{af_snd_region, df_region, grid_search_gee, lp_max_sum_rate, nnc_region, outer_bound_region};
use mwrc::rates::{
    af_ian_rate, af_snd_rate, df_meets_outer_bound, df_rate, nnc_q0_opt, nnc_rate, outer_bound, sum_rate,
};
use mwrc::{PowerCost, PowerLimits, PowerProfile, RateModel, SchemeId, SymmetricChannel};
use proptest::prelude::*;

fn log_uniform(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
    (lo.log10()..hi.log10()).prop_map(|e| 10f64.powf(e))
}

fn channel() -> impl Strategy<Value = SymmetricChannel> {
    (log_uniform(1e-3, 1e3), log_uniform(1e-3, 1e3), log_uniform(1e-2, 1e2), log_uniform(1e-2, 1e2))
        .prop_map(|(p_s, p_r, n_s, n_r)| SymmetricChannel::new(p_s, p_r, n_s, n_r).unwrap())
}

fn compound_scheme() -> impl Strategy<Value = SchemeId> {
    prop_oneof![Just(SchemeId::NNC), Just(SchemeId::AfSnd), Just(SchemeId::AfIan)]
}

fn any_scheme() -> impl Strategy<Value = SchemeId> {
    prop_oneof![
        Just(SchemeId::OuterBound),
        Just(SchemeId::DF),
        Just(SchemeId::NNC),
        Just(SchemeId::AfSnd),
        Just(SchemeId::AfIan)
    ]
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn outer_bound_dominates(ch in channel()) {
        let ob = outer_bound(&ch).value;
        for s in SchemeId::ACHIEVABLE {
            prop_assert!(sum_rate(s, &ch).value <= ob * (1.0 + 1e-12));
        }
    }

    #[test]
    fn achievable_ordering(ch in channel()) {
        let (n, snd, ian) = (nnc_rate(&ch).value, af_snd_rate(&ch).value, af_ian_rate(&ch).value);
        prop_assert!(snd <= n + 1e-12 && ian <= snd + 1e-12);
    }

    #[test]
    fn rates_grow_with_power(ch in channel(), k in 1.0f64..10.0, scheme in any_scheme()) {
        let base = sum_rate(scheme, &ch).value;
        let more_s = SymmetricChannel::new(ch.p_s * k, ch.p_r, ch.n_s, ch.n_r).unwrap();
        let more_r = SymmetricChannel::new(ch.p_s, ch.p_r * k, ch.n_s, ch.n_r).unwrap();
        prop_assert!(sum_rate(scheme, &more_s).value >= base * (1.0 - 1e-12));
        prop_assert!(sum_rate(scheme, &more_r).value >= base * (1.0 - 1e-12));
    }

    #[test]
    fn df_meets_bound_iff_rates_equal(ch in channel()) {
        let (ob, df) = (outer_bound(&ch).value, df_rate(&ch).value);
        if df_meets_outer_bound(&ch) {
            prop_assert!(close(ob, df, 1e-9));
        } else {
            prop_assert!(df < ob);
        }
    }

    #[test]
    fn lp_matches_closed_forms(ch in channel()) {
        prop_assert!(close(lp_max_sum_rate(&outer_bound_region(&ch)).unwrap(), outer_bound(&ch).value, 1e-9));
        prop_assert!(close(lp_max_sum_rate(&df_region(&ch)).unwrap(), df_rate(&ch).value, 1e-9));
        prop_assert!(close(lp_max_sum_rate(&af_snd_region(&ch)).unwrap(), af_snd_rate(&ch).value, 1e-9));
        let q0 = nnc_q0_opt(&ch).unwrap();
        prop_assert!(close(lp_max_sum_rate(&nnc_region(&ch, q0)).unwrap(), nnc_rate(&ch).value, 1e-9));
    }

    #[test]
    fn nnc_q0_is_the_best_compression(ch in channel(), k in prop_oneof![0.2f64..0.9, 1.1f64..5.0]) {
        let q0 = nnc_q0_opt(&ch).unwrap();
        let best = lp_max_sum_rate(&nnc_region(&ch, q0)).unwrap();
        prop_assert!(lp_max_sum_rate(&nnc_region(&ch, q0 * k)).unwrap() <= best * (1.0 + 1e-12));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn alternating_beats_grid(
        scheme in compound_scheme(),
        n in log_uniform(0.1, 10.0),
        p_max in log_uniform(0.1, 100.0),
        phi in 3.0f64..8.0,
        psi in 1.0f64..3.0,
        p_c in log_uniform(0.1, 10.0),
    ) {
        let params = Gee2Params::for_scheme(scheme, n, n).unwrap();
        let cost = PowerCost::equal_share(phi, psi, p_c).unwrap();
        let limits = PowerLimits::new(p_max, p_max).unwrap();
        let alt = alternating_gee2(&params, &cost, &limits, AlternatingOptions::default()).unwrap();
        let (_, grid) = grid_search_gee(&RateModel::Compound(params), &cost, &limits, 101).unwrap();
        prop_assert!(alt.gee >= grid * (1.0 - 1e-9));
        prop_assert!(alt.trajectory.windows(2).all(|w| w[1] >= w[0] - 1e-15));
        prop_assert!(limits.contains(alt.profile.p_s, alt.profile.p_r));
    }

    #[test]
    fn min_form_optimum_beats_grid(
        scheme in prop_oneof![Just(SchemeId::DF), Just(SchemeId::OuterBound)],
        n in log_uniform(0.1, 10.0),
        p_max in log_uniform(0.1, 100.0),
        p_c in log_uniform(0.1, 10.0),
    ) {
        let params = Gee1Params::for_scheme(scheme).unwrap();
        let cost = PowerCost::equal_share(3.0, 1.0, p_c).unwrap();
        let limits = PowerLimits::new(p_max, p_max).unwrap();
        let r = maximize_gee1(&params, &cost, &limits, n, n, 1e-12).unwrap();
        let model = RateModel::MinForm { params, n_s: n, n_r: n };
        let (_, grid) = grid_search_gee(&model, &cost, &limits, 201).unwrap();
        prop_assert!(r.gee >= grid * (1.0 - 1e-9));
        prop_assert!(close(r.gee, gee_value(&model, r.profile, &cost), 1e-12));
    }

    #[test]
    fn best_responses_are_monotone(
        scheme in any_scheme(),
        n in log_uniform(0.1, 10.0),
        p_max in log_uniform(0.1, 100.0),
        a in 0.0f64..1.0,
        b in 0.0f64..1.0,
    ) {
        let cost = PowerCost::new(3.0, 1.0, 1.0, 0.75, 0.25).unwrap();
        let spec = GameSpec::new(scheme, n, n, cost, PowerLimits::new(p_max, p_max).unwrap()).unwrap();
        let (lo, hi) = (a.min(b) * p_max, a.max(b) * p_max);
        prop_assert!(br_sources(&spec, lo).unwrap() <= br_sources(&spec, hi).unwrap() * (1.0 + 1e-12));
        prop_assert!(br_relay(&spec, lo).unwrap() <= br_relay(&spec, hi).unwrap() * (1.0 + 1e-12));
    }

    #[test]
    fn brd_is_monotone_and_ends_at_equilibrium(
        scheme in any_scheme(),
        n in log_uniform(0.1, 10.0),
        p_max in log_uniform(0.1, 100.0),
        frac in 0.01f64..1.0,
        relay_first in any::<bool>(),
    ) {
        let cost = PowerCost::new(3.0, 1.0, 1.0, 0.75, 0.25).unwrap();
        let spec = GameSpec::new(scheme, n, n, cost, PowerLimits::new(p_max, p_max).unwrap()).unwrap();
        let start = if relay_first { BrdStart::Sources(frac * p_max) } else { BrdStart::Relay(frac * p_max) };
        let trace = brd(&spec, start, 1e-12, 1000).unwrap();
        prop_assert!(trace.converged);
        let s: Vec<f64> = trace.steps.iter().map(|x| x.p_s).collect();
        let up = s.windows(2).all(|w| w[1] >= w[0] * (1.0 - 1e-12));
        let down = s.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12));
        prop_assert!(up || down);
        let p = trace.profile();
        prop_assert!(is_nash(&spec, PowerProfile::new(p.p_s, p.p_r), 1e-6 * p_max).unwrap());
    }
}
