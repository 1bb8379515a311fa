use delta_ineff::fit::{extrapolate_inverse_sqrt, linear_fit};
use delta_ineff::quadrature::{tanh_sinh_many, QuadOptions};
use delta_ineff::regularized::{double_limit_study, ground_energy, rank_one_limit_matrix, eigen_lowest};
use delta_ineff::specfun::radial_basis_into;
use delta_ineff::spectral::{pt_first_order, pt_second_order_partial, solve_shift, SecularSum};
use delta_ineff::wavefn::{origin_trace, figure_data, FIGURE_TRUNCATIONS};
use delta_ineff::{Coupling, Dimension, RegularizedProblem, SpectralProblem};
use delta_ineff_oracles::{exact_reciprocal_sum, oscillator_contact_ground_1d, oscillator_gaussian_ground_1d};
use std::f64::consts::PI;

fn dim(d: f64) -> Dimension<f64> {
    Dimension::new(d).unwrap()
}

#[test]
fn basis_is_orthonormal() {
    for d in [1.0, 2.0, 3.0, 4.5] {
        let dm = dim(d);
        let k_max = 30;
        let n = k_max + 1;
        let mut basis = Vec::new();
        let gram = tanh_sinh_many(
            |r: f64, out: &mut [f64]| {
                radial_basis_into(dm, r, k_max, &mut basis);
                let w = dm.sphere_area() * r.powf(d - 1.0);
                for i in 0..n {
                    for j in 0..n {
                        out[i * n + j] = w * basis[i] * basis[j];
                    }
                }
            },
            0.0,
            14.0,
            n * n,
            &QuadOptions::default().with_abs_tol(1e-12),
        )
        .unwrap();
        for i in 0..n {
            for j in 0..n {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((gram[i * n + j] - expect).abs() < 1e-8, "D={d} ({i},{j}) {}", gram[i * n + j]);
            }
        }
    }
}

#[test]
fn two_dimensional_sum_matches_exact_rationals() {
    let exact = exact_reciprocal_sum(1000, 1, 1) / PI;
    let got = SecularSum::new(1000, dim(2.0)).evaluate(1.0).unwrap();
    assert!((got - exact).abs() <= 1e-12 * exact.abs(), "{got} vs {exact}");
    assert!((got + 1.093_595_845_218_611_3).abs() < 1e-13);
}

#[test]
fn one_dimensional_contact_matches_shooting() {
    let g = 2.0;
    let oracle = oscillator_contact_ground_1d(g);
    let ks = [1.0e3, 1.0e4, 1.0e5];
    let energies: Vec<f64> = ks
        .iter()
        .map(|&k| solve_shift(&SpectralProblem::ground(dim(1.0), Coupling::Finite(g), k as usize).unwrap()).unwrap().energy)
        .collect();
    let limit = extrapolate_inverse_sqrt(&ks, &energies).unwrap();
    assert!((limit - oracle).abs() < 1e-3, "{limit} vs {oracle}");
    assert!(energies.iter().all(|e| *e > oracle));
}

#[test]
fn one_dimensional_hard_core_reaches_odd_level() {
    let ks = [1.0e3, 1.0e4, 1.0e5];
    let energies: Vec<f64> = ks
        .iter()
        .map(|&k| solve_shift(&SpectralProblem::ground(dim(1.0), Coupling::HardCore, k as usize).unwrap()).unwrap().energy)
        .collect();
    let limit = extrapolate_inverse_sqrt(&ks, &energies).unwrap();
    assert!((limit - 1.5).abs() < 1e-3, "{limit}");
}

#[test]
fn first_order_closed_forms() {
    assert_eq!(pt_first_order(0, 0.0, dim(3.0)), 1.5);
    assert!((pt_first_order(0, 1.0, dim(3.0)) - (1.5 + PI.powf(-1.5))).abs() < 1e-14);
    assert!((pt_first_order(1, 1.0, dim(2.0)) - (3.0 + 1.0 / PI)).abs() < 1e-14);
}

#[test]
fn second_order_partial_sums() {
    let s = |d: f64, k: usize| pt_second_order_partial(0, 1.0, dim(d), k).unwrap();
    let (a, b) = (s(1.0, 10_000), s(1.0, 100_000));
    assert!((a - b).abs() < 1e-2 * b.abs());
    assert!(s(3.0, 10_000).abs() > 5.0 * s(3.0, 100).abs());
    let ks = [1e3, 1e4, 1e5, 1e6];
    let xs: Vec<f64> = ks.iter().map(|k: &f64| k.ln()).collect();
    let ys: Vec<f64> = ks.iter().map(|&k| s(2.0, k as usize)).collect();
    let fit = linear_fit(&xs, &ys).unwrap();
    let constant = -1.0 / (2.0 * PI * PI);
    assert!((fit.slope / constant - 1.0).abs() < 0.1, "{}", fit.slope);
}

#[test]
fn figure_curves() {
    let d = dim(3.0);
    let trace = origin_trace(d, Coupling::Finite(1.0), &FIGURE_TRUNCATIONS).unwrap();
    let frozen = [0.36776, 0.30034, 0.22714, 0.14210, 0.08468];
    for (row, f) in trace.iter().zip(frozen) {
        assert!((row.psi0 - f).abs() < 5e-5, "K={} {}", row.truncation, row.psi0);
    }
    let fig = figure_data(d, Coupling::Finite(1.0), &[400], &[0.0, 1.0]).unwrap();
    let reference = PI.powf(-0.75) * (-0.5f64).exp();
    assert!((fig.curves[0][1] / reference - 1.0).abs() < 0.02);
    assert!((fig.curves[0][0] - trace[4].psi0).abs() < 1e-12);
    let far = origin_trace(d, Coupling::Finite(1.0), &[10_000]).unwrap();
    assert!(far[0].psi0 < 0.1);
}

#[test]
fn regularized_one_dimensional_matches_shooting() {
    let oracle = oscillator_gaussian_ground_1d(1.0, 0.1);
    let p = RegularizedProblem::new(dim(1.0), 1.0, 0.1, 200).unwrap();
    let e = ground_energy(&p).unwrap();
    assert!((e - oracle).abs() < 1e-3, "{e} vs {oracle}");
}

#[test]
fn smooth_gaussian_keeps_a_finite_shift() {
    let d = dim(3.0);
    let es: Vec<f64> = [20, 40, 80]
        .iter()
        .map(|&k| ground_energy(&RegularizedProblem::new(d, 1.0, 0.5, k).unwrap()).unwrap())
        .collect();
    assert!((es[2] - 1.615_065_106_0).abs() < 1e-8, "{es:?}");
    assert!((es[1] - es[2]).abs() < 1e-8);
}

#[test]
fn fixed_truncation_widths_approach_rank_one() {
    let d = dim(3.0);
    let widths = [0.5, 0.2, 0.1, 0.05, 0.02, 0.01];
    let rows = double_limit_study(d, 1.0, &widths, &[20]).unwrap();
    let limit = eigen_lowest(&rank_one_limit_matrix(d, 1.0, 20), 1).unwrap()[0];
    assert_eq!(rows.last().unwrap().width, 0.0);
    assert!((rows.last().unwrap().energy - limit).abs() < 1e-9);
    let gaps: Vec<f64> = rows[..widths.len()].iter().map(|r| r.energy - limit).collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
    assert!(gaps[widths.len() - 1] < 1e-3);
}
