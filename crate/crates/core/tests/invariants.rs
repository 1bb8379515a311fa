use delta_ineff::linalg::jacobi_eigenvalues;
use delta_ineff::regularized::rank_one_limit_matrix;
use delta_ineff::spectral::solve_shift;
use delta_ineff::wellbarrier::{solve_well, WellModel};
use delta_ineff::{Coupling, Dimension, SpectralProblem};
use proptest::prelude::*;

fn shift(d: f64, c: Coupling<f64>, k: usize, n: usize) -> f64 {
    let p = SpectralProblem::new(Dimension::new(d).unwrap(), c, k, n).unwrap();
    solve_shift(&p).unwrap().shift
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn repulsive_levels_stay_bracketed(d in 1.0f64..6.0, lg in -6.0f64..3.0, k in 1usize..3000, n in 0usize..25) {
        let n = n.min(k - 1);
        let s = shift(d, Coupling::Finite(10f64.powf(lg)), k, n);
        let lo = 2.0 * n as f64;
        prop_assert!(s > lo && s < lo + 2.0, "shift {s} for level {n}");
    }

    #[test]
    fn hard_core_dominates(d in 1.0f64..6.0, lg in -3.0f64..3.0, k in 1usize..3000) {
        let finite = shift(d, Coupling::Finite(10f64.powf(lg)), k, 0);
        let hard = shift(d, Coupling::HardCore, k, 0);
        prop_assert!(finite < hard);
        prop_assert!(hard < 2.0);
    }

    #[test]
    fn shift_increases_with_coupling(d in 1.0f64..6.0, lg in -4.0f64..2.0, factor in 1.5f64..10.0, k in 1usize..2000) {
        let g = 10f64.powf(lg);
        prop_assert!(shift(d, Coupling::Finite(g), k, 0) < shift(d, Coupling::Finite(g * factor), k, 0));
    }

    #[test]
    fn shift_decreases_with_truncation(d in 1.0f64..6.0, lg in -2.0f64..2.0, k in 1usize..2000, extra in 1usize..50) {
        let c = Coupling::Finite(10f64.powf(lg));
        prop_assert!(shift(d, c, k + extra, 0) < shift(d, c, k, 0));
    }

    #[test]
    fn attractive_one_dimensional_levels_drop_below(lg in -3.0f64..1.0, k in 2usize..2000, n in 0usize..10) {
        let n = n.min(k - 1);
        let s = shift(1.0, Coupling::Finite(-(10f64.powf(lg))), k, n);
        let hi = 2.0 * n as f64;
        prop_assert!(s < hi);
        if n > 0 {
            prop_assert!(s > hi - 2.0);
        }
    }

    #[test]
    fn rank_one_spectrum_interlaces(d in 1.0f64..5.0, g in 0.01f64..50.0, k in 1usize..25) {
        let dim = Dimension::new(d).unwrap();
        let ev = jacobi_eigenvalues(&rank_one_limit_matrix(dim, g, k)).unwrap();
        for (i, e) in ev.iter().enumerate() {
            prop_assert!(*e >= dim.unperturbed_energy(i) - 1e-10);
            if i < k {
                prop_assert!(*e <= dim.unperturbed_energy(i + 1) + 1e-10);
            }
        }
    }

    #[test]
    fn well_energy_sandwiched(eps in 1e-4f64..0.5, lg in -4.0f64..4.0) {
        let m = WellModel::new(1.0, eps, Coupling::Finite(10f64.powf(lg))).unwrap();
        let s = solve_well(&m).unwrap();
        prop_assert!(s.energy >= m.unperturbed_energy() && s.energy <= m.hard_core_energy());
        prop_assert!(s.residual < 1e-12);
    }

    #[test]
    fn well_energy_increases_with_coupling(eps in 1e-3f64..0.5, lg in -3.0f64..3.0, factor in 1.5f64..10.0) {
        let e = |g: f64| solve_well(&WellModel::new(1.0, eps, Coupling::Finite(g)).unwrap()).unwrap().energy;
        let g = 10f64.powf(lg);
        prop_assert!(e(g) < e(g * factor));
    }
}
