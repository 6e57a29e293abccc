use anyon_waveguide::anyon2d::{
    assemble_relative, shift_invert_smallest, LanczosOptions, RelativeProblem,
};
use anyon_waveguide::cli_io::{Cell, CsvTable};
use anyon_waveguide::experiments::{dressed_overlap, tg_eigenspace, OverlapOptions, TwoAnyonState};
use proptest::prelude::*;

fn relative_levels(alpha: f64, eps: f64, n_max: usize, m_max: usize, k: usize) -> Vec<f64> {
    let p = RelativeProblem::new(alpha, eps, n_max, m_max).unwrap();
    let m = assemble_relative(&p).unwrap();
    shift_invert_smallest(&m, k, 1.0 / eps, &LanczosOptions::default())
        .unwrap()
        .eigenvalues
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    // nested bases at fixed ω_b: Galerkin values can only go down
    #[test]
    fn enlarging_the_basis_lowers_levels(alpha in 0.05f64..1.95, eps in 0.2f64..1.0) {
        let small = relative_levels(alpha, eps, 6, 12, 4);
        let big = relative_levels(alpha, eps, 12, 24, 4);
        for (s, b) in small.iter().zip(&big) {
            prop_assert!(*b <= s + 1e-9, "{s} -> {b}");
        }
    }

    #[test]
    fn statistics_reflection_symmetry(alpha in 0.05f64..0.95, eps in 0.3f64..1.0) {
        let a = relative_levels(alpha, eps, 14, 28, 3);
        let b = relative_levels(2.0 - alpha, eps, 14, 28, 3);
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() < 1e-6 * x, "{x} vs {y}");
        }
    }

    #[test]
    fn overlaps_never_exceed_one(alpha in 0.05f64..1.95, eps in 0.3f64..1.0, seed in 0u64..1000) {
        let p = RelativeProblem::new(alpha, eps, 4, 8).unwrap();
        let dim = p.dimension();
        let mut c: Vec<f64> = (0..dim).map(|i| (((i as u64 + 1) * (seed + 7)) % 17) as f64 - 8.0).collect();
        let n = c.iter().map(|v| v * v).sum::<f64>().sqrt();
        c.iter_mut().for_each(|v| *v /= n);
        let st = TwoAnyonState::new(p, c, (0, 0)).unwrap();
        let opts = OverlapOptions { s_order: Some(60), theta_order: Some(40), x_order: 16, ..OverlapOptions::default() };
        let ov = dressed_overlap(&st, &tg_eigenspace(1).unwrap(), &opts).unwrap();
        prop_assert!(ov.dressed >= 0.0 && ov.dressed <= 1.0 + 1e-8);
        prop_assert!(ov.control >= 0.0 && ov.control <= 1.0 + 1e-8);
    }

    #[test]
    fn csv_reals_round_trip(v in any::<f64>().prop_filter("finite", |v| v.is_finite())) {
        let mut t = CsvTable::new(&["v"]);
        t.push(vec![Cell::Real(v)]);
        let text = t.render();
        let back: f64 = text.lines().nth(1).unwrap().parse().unwrap();
        prop_assert_eq!(back.to_bits(), v.to_bits());
    }
}

#[test]
fn ground_level_is_continuous_and_peaks_at_fermions() {
    let grid: Vec<f64> = (1..=19).map(|i| i as f64 / 10.0).collect();
    let g: Vec<f64> = grid
        .iter()
        .map(|&a| relative_levels(a, 0.5, 10, 20, 1)[0])
        .collect();
    for w in g.windows(2) {
        // adjacent grid points 0.1 apart
        assert!((w[1] - w[0]).abs() < 0.4, "{g:?}");
    }
    let peak = g.iter().cloned().fold(f64::MIN, f64::max);
    assert_eq!(peak, g[9]);
    for i in 0..9 {
        assert!(g[i] < g[i + 1]);
        assert!((g[i] - g[18 - i]).abs() < 1e-6 * g[i]);
    }
}
