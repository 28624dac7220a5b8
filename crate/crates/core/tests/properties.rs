//! Property-based invariants over randomized parameters.

use proptest::prelude::*;

use mrleq_core::equilibrium::{efficiency_ratio, fundamentals, poa, profit_ratio, solve};
use mrleq_core::orders;
use mrleq_core::reliability::{GridSpec, Reliability};
use mrleq_core::Dist;

fn family() -> impl Strategy<Value = Dist> {
    prop_oneof![
        (0.3..4.0f64).prop_map(|r| Dist::exponential(r).unwrap()),
        (0.0..2.0f64, 0.1..4.0f64).prop_map(|(a, w)| Dist::uniform(a, a + w).unwrap()),
        (0.5..6.0f64, 0.2..2.0f64).prop_map(|(m, s)| Dist::truncated_normal(m, s).unwrap()),
        (0.0..6.0f64, 0.3..2.0f64, 0.0..2.0f64)
            .prop_map(|(o, k, p)| Dist::sinusoid(o, k, p).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quantile_cdf_roundtrip(d in family(), p in 0.01..0.99f64) {
        let x = d.quantile(p);
        prop_assert!((d.cdf(x) - p).abs() < 1e-6, "cdf(quantile({p})) = {}", d.cdf(x));
    }

    #[test]
    fn survival_complements_cdf(d in family(), p in 0.001..0.999f64) {
        let x = d.quantile(p);
        prop_assert!((d.survival(x) + d.cdf(x) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn cdf_monotone(d in family(), p1 in 0.001..0.999f64, p2 in 0.001..0.999f64) {
        let (lo, hi) = if p1 <= p2 { (p1, p2) } else { (p2, p1) };
        prop_assert!(d.cdf(d.quantile(lo)) <= d.cdf(d.quantile(hi)) + 1e-12);
    }

    #[test]
    fn second_moment_dominates(d in family()) {
        let m = d.moments();
        prop_assert!(m.second_moment >= m.mean * m.mean - 1e-9);
        prop_assert!(m.variance >= 0.0);
    }

    #[test]
    fn shift_scale_quantiles_affine(d in family(), delta in 0.0..3.0f64, lambda in 0.1..5.0f64, p in 0.01..0.99f64) {
        let t = d.shift_scale(delta, lambda).unwrap();
        let want = delta + lambda * d.quantile(p);
        prop_assert!((t.quantile(p) - want).abs() <= 1e-9 * (1.0 + want.abs()));
    }

    #[test]
    fn fundamentals_decomposition(r_star in 0.01..5.0f64, alpha in 0.0..10.0f64, n in 1u32..12) {
        let out = fundamentals(r_star, alpha, n).unwrap();
        // decentralized total decomposes exactly
        prop_assert_eq!(
            out.profit_decentralized,
            out.profit_supplier + n as f64 * out.profit_retailer_each
        );
        // quantity and price from the second stage
        let gap = (alpha - r_star).max(0.0);
        prop_assert!((out.q_star - n as f64 / (n as f64 + 1.0) * gap).abs() < 1e-12);
        prop_assert!((out.p_star - (alpha - out.q_star)).abs() < 1e-12);
        if alpha <= r_star {
            prop_assert_eq!(out.profit_supplier, 0.0);
            prop_assert_eq!(out.profit_retailer_each, 0.0);
            prop_assert_eq!(out.profit_integrated, 0.0);
        }
    }

    #[test]
    fn profit_ratio_matches_fundamentals(r_star in 0.01..5.0f64, mult in 1.001..8.0f64, n in 1u32..12) {
        let alpha = r_star * mult;
        let closed = profit_ratio(alpha, r_star, n).unwrap();
        let out = fundamentals(r_star, alpha, n).unwrap();
        prop_assert!((closed - out.ratio.unwrap()).abs() <= 1e-12 * (1.0 + closed));
    }

    #[test]
    fn efficiency_bounded_by_poa(r_star in 0.01..5.0f64, mult in 1.0001..10.0f64, n in 1u32..12) {
        // the worst case over alpha is attained as alpha -> r*, where the
        // ratio reaches (n+1)/n; far above r* it can drop below 1 (the
        // integrated chain committed to a price too low for the realization)
        let alpha = r_star * mult;
        let eff = efficiency_ratio(alpha, r_star, n).unwrap();
        prop_assert!(eff <= poa(n).unwrap() + 1e-12);
        prop_assert!(eff > 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn mrl_at_zero_is_mean(d in family()) {
        let rel = Reliability::new(&d).unwrap();
        let mean = d.mean();
        prop_assert!((rel.mrl(0.0) - mean).abs() <= 1e-7 * (1.0 + mean));
    }

    #[test]
    fn uniform_fixed_point_scales(b in 0.2..8.0f64) {
        let eq = solve(&Dist::uniform(0.0, b).unwrap()).unwrap();
        prop_assert!((eq.r_star - b / 3.0).abs() < 1e-7 * (1.0 + b));
        prop_assert!(eq.residual < 1e-9 * (1.0 + eq.r_star));
    }

    #[test]
    fn orders_reflexive(d in family()) {
        let grid = GridSpec::with_points(400);
        let st = orders::check_st(&d, &d, &grid).unwrap();
        prop_assert!(st.forward_holds() && st.backward_holds());
        let mrl = orders::check_mrl(&d, &d, &grid).unwrap();
        prop_assert!(mrl.forward_holds() && mrl.backward_holds());
        let disp = orders::check_disp(&d, &d, 50).unwrap();
        prop_assert!(disp.forward_holds() && disp.backward_holds());
        let ew = orders::check_ew(&d, &d, 100).unwrap();
        prop_assert!(ew.forward_holds() && ew.backward_holds());
    }

    #[test]
    fn scaling_orders_prices(lam in 0.4..3.0f64, c in 1.0..4.0f64) {
        let d = Dist::exponential(lam).unwrap();
        let eq1 = solve(&d).unwrap();
        let eq2 = solve(&d.scale(c).unwrap()).unwrap();
        prop_assert!(eq1.r_star <= eq2.r_star + 1e-7);
    }
}
