use std::f64::consts::{PI, TAU};

use conjugate_jumps::detector::{y_n, y_n_field};
use conjugate_jumps::series::{
    coefficient_mass, conjugate_partial_sum_complex, partial_sum_complex,
};
use conjugate_jumps::signal::{corpus, make_pulse, make_staircase};
use conjugate_jumps::{coefficients_analytic, conjugate_dirichlet, dirichlet};
use proptest::prelude::*;

fn away_from_origin() -> impl Strategy<Value = f64> {
    (-10.0f64..10.0).prop_filter("removable singularity", |x| {
        let r = x.rem_euclid(TAU);
        r.min(TAU - r) >= 1e-6
    })
}

fn pulse() -> impl Strategy<Value = (f64, f64, f64)> {
    (
        0.05f64..3.0,
        0.05f64..3.0,
        prop_oneof![-3.0f64..-0.1, 0.1f64..3.0],
    )
        .prop_map(|(a, w, h)| (a, a + w, h))
        .prop_filter("avoid π", |(a, b, _)| {
            (a - PI).abs() > 1e-3 && (b - PI).abs() > 1e-3
        })
}

proptest! {
    #[test]
    fn kernels_match_trigonometric_sums(n in 1usize..=64, x in away_from_origin()) {
        let d = 0.5 + (1..=n).map(|k| (k as f64 * x).cos()).sum::<f64>();
        let c: f64 = (1..=n).map(|k| (k as f64 * x).sin()).sum();
        prop_assert!((dirichlet(n, x) - d).abs() <= 1e-9);
        prop_assert!((conjugate_dirichlet(n, x) - c).abs() <= 1e-9);
    }

    #[test]
    fn parseval_bound((a, b, h) in pulse(), n in 0usize..200) {
        let spec = make_pulse(a, b, h).unwrap();
        let c = coefficients_analytic(&spec, n);
        let energy: f64 = c.values().iter().map(|z| z.norm_sqr()).sum();
        prop_assert!(energy <= spec.mean_square() + 1e-8);
    }

    #[test]
    fn real_signals_have_no_imaginary_residue((a, b, h) in pulse(), x in -7.0f64..7.0) {
        let c = coefficients_analytic(&make_pulse(a, b, h).unwrap(), 256);
        prop_assert!(partial_sum_complex(&c, 256, x).unwrap().im.abs() <= 1e-9);
        prop_assert!(conjugate_partial_sum_complex(&c, 256, x).unwrap().im.abs() <= 1e-9);
    }

    #[test]
    fn coefficient_mass_is_monotone((a, b, h) in pulse()) {
        let c = coefficients_analytic(&make_pulse(a, b, h).unwrap(), 128);
        let g: Vec<f64> = (0..=128).map(|n| coefficient_mass(&c, n).unwrap()).collect();
        prop_assert!(g.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn y_n_is_scale_equivariant(lambda in 0.01f64..50.0, x in 0.0f64..TAU, n in 2usize..512) {
        let c = coefficients_analytic(&make_staircase(), n);
        let base = y_n(&c, n, x).unwrap();
        let scaled = y_n(&c.scaled(lambda), n, x).unwrap();
        prop_assert!((scaled - lambda * base).abs() <= 1e-10, "{scaled} vs {}", lambda * base);
    }

    #[test]
    fn field_translates_with_signal(steps in 0usize..4096) {
        let (n, m) = (256, 4096);
        let c = coefficients_analytic(&make_staircase(), n);
        let delta = TAU * steps as f64 / m as f64;
        let base = y_n_field(&c, n, m).unwrap();
        let shifted = y_n_field(&c.translated(delta), n, m).unwrap();
        for (a, b) in base.rotated(steps).iter().zip(&shifted.values) {
            prop_assert!((a - b).abs() <= 1e-9);
        }
    }
}

#[test]
fn coefficient_decay_is_one_over_nu() {
    for spec in corpus() {
        let jumps = spec.true_jumps();
        if jumps.is_empty() {
            continue;
        }
        // |c_ν| ≤ (Σ|J| + ∫|f'|) / (2π|ν|)
        let slope_mass: f64 = spec
            .pieces()
            .iter()
            .map(|p| {
                let d = p.poly.derivative();
                let h = (p.end - p.start) / 1000.0;
                (0..1000)
                    .map(|i| d.eval(p.start + (i as f64 + 0.5) * h).abs() * h)
                    .sum::<f64>()
            })
            .sum();
        let jump_mass: f64 = jumps.entries.iter().map(|j| j.magnitude.abs()).sum();
        let bound = (jump_mass + slope_mass) / TAU + 1e-9;
        let c = coefficients_analytic(&spec, 4096);
        for nu in 1..=4096i64 {
            let scaled = nu as f64 * c.get(nu).norm();
            assert!(
                scaled <= bound,
                "{}: ν={nu} gives {scaled} > {bound}",
                spec.name()
            );
        }
    }
}

#[test]
fn shifted_signal_has_translated_coefficients() {
    let s = make_staircase();
    let delta = 0.37;
    let a = coefficients_analytic(&s, 64).translated(delta);
    let b = coefficients_analytic(&s.shifted(delta).unwrap(), 64);
    for nu in -64..=64 {
        assert!((a.get(nu) - b.get(nu)).norm() < 1e-13);
    }
}
