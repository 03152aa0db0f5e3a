use latsym::decreasing::{
    decreasing_rearrangement, hardy_littlewood_pair, lp_contraction_pair, weighted_ps_pair,
};
use latsym::fourier::{forward_transform, fourier_rearrange, grid_sdr, FourierParams};
use latsym::hardy::{hardy_chain_report, hardy_constant, hardy_pair};
use latsym::{
    layer_cake_reconstruct, level_decomposition, HalfLineSequence, LatticeSequence, Weight, C64,
};
use proptest::prelude::*;

fn half_line(max_len: usize) -> impl Strategy<Value = HalfLineSequence> {
    prop::collection::vec((-4.0f64..4.0, -4.0f64..4.0), 0..max_len)
        .prop_map(|v| HalfLineSequence::new(v.into_iter().map(|(a, b)| C64::new(a, b)).collect()))
}

fn real_half_line(max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    // integers force ties between levels
    prop::collection::vec(
        prop_oneof![(-5i32..6).prop_map(f64::from), -5.0f64..5.0],
        1..max_len,
    )
}

fn moduli(u: &HalfLineSequence) -> Vec<f64> {
    let mut m: Vec<f64> = u
        .values()
        .iter()
        .map(|z| z.norm())
        .filter(|&x| x > 0.0)
        .collect();
    m.sort_by(|a, b| b.total_cmp(a));
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn rearrangement_is_sorted_and_equimeasurable(u in half_line(40)) {
        let r = decreasing_rearrangement(&u);
        let vals = r.real_parts();
        prop_assert!(vals.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!(r.values().iter().all(|z| z.im == 0.0 && z.re >= 0.0));
        let nonzero: Vec<f64> = vals.into_iter().filter(|&x| x > 0.0).collect();
        prop_assert_eq!(nonzero, moduli(&u));
        prop_assert_eq!(decreasing_rearrangement(&r), r);
    }

    #[test]
    fn rearrangement_ignores_order_and_phase(u in half_line(20), seed in any::<u64>()) {
        let mut v = u.values().to_vec();
        let n = v.len();
        for i in (1..n).rev() {
            v.swap(i, (seed.rotate_left(i as u32) as usize) % (i + 1));
        }
        let w = HalfLineSequence::new(v.into_iter().map(|z| z * C64::from_polar(1.0, seed as f64)).collect());
        let (a, b) = (decreasing_rearrangement(&u), decreasing_rearrangement(&w));
        prop_assert_eq!(a.len(), b.len());
        for (x, y) in a.values().iter().zip(b.values()) {
            prop_assert!((x - y).norm() <= 1e-12 * (1.0 + x.norm()));
        }
    }

    #[test]
    fn layer_cake_round_trip(u in real_half_line(30)) {
        let seq = HalfLineSequence::from_real(&u);
        let d = level_decomposition(&seq);
        let back = layer_cake_reconstruct(&d).unwrap();
        for (i, x) in u.iter().enumerate() {
            prop_assert!((back.get(i as i64).re - x.abs()).abs() <= 1e-12 * (1.0 + x.abs()));
        }
    }

    #[test]
    fn hardy_littlewood_and_contraction(u in half_line(30), v in half_line(30), p in 1.0f64..4.0) {
        let hl = hardy_littlewood_pair(&u, &v);
        prop_assert!(hl.margin >= -1e-12 * (1.0 + hl.rhs));
        let c = lp_contraction_pair(&u, &v, p).unwrap();
        prop_assert!(c.margin >= -1e-12 * (1.0 + c.rhs));
    }

    #[test]
    fn weighted_polya_szego(u in half_line(30), p in 1.0f64..4.0, e in 0.0f64..3.0) {
        for w in [Weight::unit(), Weight::power(e)] {
            let pair = weighted_ps_pair(&u, &w, p).unwrap();
            prop_assert!(pair.margin >= -1e-12 * (1.0 + pair.lhs), "{pair:?}");
        }
    }

    #[test]
    fn hardy_inequality_on_rearranged_inputs(u in half_line(25), alpha in 1.05f64..=2.0) {
        let r = decreasing_rearrangement(&u);
        let h = hardy_pair(&r, alpha).unwrap();
        prop_assert!(h.lhs >= hardy_constant(alpha) * h.mass * (1.0 - 1e-12));
        for report in hardy_chain_report(&u, alpha, true).unwrap() {
            prop_assert!(report.pass, "{report:?}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn grid_rearrangement_is_even_sorted_and_energy_preserving(
        vals in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 1..12),
        offset in -20i64..20,
    ) {
        let u = LatticeSequence::new(offset, vals.into_iter().map(|(a, b)| C64::new(a, b)).collect());
        let f = forward_transform(&u, 256).unwrap();
        let g = grid_sdr(&f);
        let m = g.size();
        let s = g.samples();
        for j in 0..m / 2 {
            prop_assert_eq!(s[j], s[m - 1 - j]);
            if j + 1 < m / 2 {
                prop_assert!(s[j].re <= s[j + 1].re);
            }
        }
        prop_assert!((g.energy() - f.energy()).abs() <= 1e-12 * (1.0 + f.energy()));
    }

    #[test]
    fn fourier_rearrangement_is_real_even_and_peaked(
        vals in prop::collection::vec(-2.0f64..2.0, 1..8),
        offset in -10i64..10,
    ) {
        let u = LatticeSequence::from_real(offset, &vals);
        let params = FourierParams { grid: 4096, n_max: 64, tail_tol: 1.0 };
        let r = fourier_rearrange(&u, &params).unwrap();
        let peak = r.get(0);
        for n in 1..=64 {
            prop_assert_eq!(r.get(n), r.get(-n));
            prop_assert!(r.get(n).abs() <= peak + 1e-12);
            prop_assert!(r.sequence.get(n).im.abs() <= 1e-12 * (1.0 + peak));
        }
        prop_assert!((r.retained_energy - r.input_energy) <= 1e-9 * (1.0 + r.input_energy));
    }
}
