//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::{PI, SQRT_2};
use std::time::{Duration, Instant};

use delta_ineff::fit::{extrapolate_inverse_sqrt, geometric_grid, linear_fit, log_log_fit};
use delta_ineff::linalg::jacobi_eigenvalues;
use delta_ineff::regularized::{eigen_lowest, ground_energy, rank_one_limit_matrix};
use delta_ineff::spectral::{pt_first_order, pt_second_order_partial, solve_shift, term_exponent_fit};
use delta_ineff::variational::{kinetic_integral_2d, nbody_bound_mc, norm_defect_2d, two_particle_bound, two_particle_scaling};
use delta_ineff::wavefn::{figure_data, origin_trace, uniform_grid, FIGURE_GRID, FIGURE_TRUNCATIONS};
use delta_ineff::wellbarrier::{expansion_check, origin_suppression, solve_well, WellModel};
use delta_ineff::{Coupling, CorrelationFactor, Dimension, NbodyConfig, RegularizedProblem, SpectralProblem};
use delta_ineff_cli::main_with_args;
use delta_ineff_oracles::oscillator_contact_ground_1d;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Sub-checks of one criterion; the criterion passes when all of them hold.
#[derive(Default)]
struct Checks {
    failed: Vec<String>,
    notes: Vec<String>,
}

impl Checks {
    fn check(&mut self, ok: bool, what: impl Into<String>) {
        let what = what.into();
        if !ok {
            self.failed.push(what.clone());
        }
        self.notes.push(what);
    }

    fn within_time(&mut self, start: Instant, limit: Duration) {
        let took = start.elapsed();
        self.check(took <= limit, format!("runtime {:.2}s (limit {}s)", took.as_secs_f64(), limit.as_secs()));
    }
}

type Criterion = fn(&mut Checks);

fn dim(d: f64) -> Dimension<f64> {
    Dimension::new(d).unwrap()
}

fn shift(d: f64, coupling: Coupling<f64>, k: usize, n: usize) -> f64 {
    solve_shift(&SpectralProblem::new(dim(d), coupling, k, n).unwrap()).unwrap().shift
}

fn ground_energy_1d(coupling: Coupling<f64>, ks: &[f64]) -> f64 {
    let es: Vec<f64> = ks.iter().map(|&k| shift(1.0, coupling, k as usize, 0) + 0.5).collect();
    extrapolate_inverse_sqrt(ks, &es).unwrap()
}

fn criterion_1(c: &mut Checks) {
    let start = Instant::now();
    let ratios: Vec<f64> = [10_000usize, 100_000, 1_000_000]
        .iter()
        .map(|&k| shift(2.0, Coupling::HardCore, k, 0) * ((k as f64).ln() + 0.577_215_664_901_532_9) / 2.0)
        .collect();
    c.check(ratios.iter().all(|r| (0.93..=1.07).contains(r)), format!("ratios {ratios:.5?} in [0.93, 1.07]"));
    let gaps: Vec<f64> = ratios.iter().map(|r| (r - 1.0).abs()).collect();
    c.check(gaps.windows(2).all(|w| w[1] < w[0]), "monotone approach to 1");
    c.within_time(start, Duration::from_secs(60));
}

fn criterion_2(c: &mut Checks) {
    let ks = [1e3, 1e4, 1e5, 1e6];
    let shifts: Vec<f64> = ks.iter().map(|&k| shift(3.0, Coupling::HardCore, k as usize, 0)).collect();
    let scaled = shifts[3] * (1e6f64 + 1.5).sqrt() / (PI.sqrt() / 2.0);
    c.check((0.95..=1.05).contains(&scaled), format!("scaled shift {scaled:.5} at K=1e6"));
    let slope = log_log_fit(&ks, &shifts).unwrap().slope;
    c.check((slope + 0.5).abs() <= 0.02, format!("log-log slope {slope:.5}"));
}

fn criterion_3(c: &mut Checks) {
    for d in [1.0, 2.0, 3.0, 4.0] {
        let fit = term_exponent_fit(dim(d), 1000, 1_000_000, 1.0, 16).unwrap();
        let expected = d / 2.0 - 2.0;
        c.check((fit.exponent - expected).abs() <= 0.02, format!("D={d} exponent {:.5}", fit.exponent));
    }
}

fn criterion_4(c: &mut Checks) {
    let ks = [1e4, 1e5, 1e6];
    let oracle = oscillator_contact_ground_1d(2.0);
    let e = ground_energy_1d(Coupling::Finite(2.0), &ks);
    c.check((e - oracle).abs() <= 1e-3, format!("g=2 extrapolated {e:.6} vs oracle {oracle:.6}"));
    let hard = ground_energy_1d(Coupling::HardCore, &ks);
    c.check((hard - 1.5).abs() <= 1e-3, format!("hard-core extrapolated {hard:.6}"));
}

fn criterion_5(c: &mut Checks) {
    let start = Instant::now();
    let (lo, hi, n) = FIGURE_GRID;
    let grid = uniform_grid(lo, hi, n);
    let fig = figure_data(dim(3.0), Coupling::Finite(1.0), &FIGURE_TRUNCATIONS, &grid).unwrap();
    let origin: Vec<f64> = fig.curves.iter().map(|curve| curve[0]).collect();
    c.check(origin.windows(2).all(|w| w[1] < w[0]), format!("psi_K(0) {origin:.5?} strictly decreasing"));
    let at_one = grid.iter().position(|&r| (r - 1.0).abs() < 1e-12).unwrap();
    let reference = PI.powf(-0.75) * (-0.5f64).exp();
    let rel = fig.curves[4][at_one] / reference - 1.0;
    c.check(rel.abs() <= 0.02, format!("psi_400(1) off by {:.3}%", 100.0 * rel));
    let far = origin_trace(dim(3.0), Coupling::Finite(1.0), &[10_000]).unwrap()[0].psi0;
    c.check(far < 0.1, format!("psi_1e4(0) = {far:.5}"));
    c.within_time(start, Duration::from_secs(5));
}

fn criterion_6(c: &mut Checks) {
    let d = dim(3.0);
    let matrix = eigen_lowest(&rank_one_limit_matrix(d, 1.0, 20), 1).unwrap()[0];
    let secular = shift(3.0, Coupling::Finite(1.0), 20, 0) + 1.5;
    c.check((matrix - secular).abs() <= 1e-9, format!("rank-one {matrix:.12} vs secular {secular:.12}"));
    let es: Vec<f64> = [20, 40, 80, 160]
        .iter()
        .map(|&k| ground_energy(&RegularizedProblem::new(d, 1.0, 0.5, k).unwrap()).unwrap())
        .collect();
    let steps: Vec<f64> = es.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    c.check(steps[2] <= 1e-8 && steps[2] <= steps[0], format!("eps=0.5 energies {es:.10?}"));
    c.check(es[3] > 1.5, "eps=0.5 limit above 1.5");
}

fn criterion_7(c: &mut Checks) {
    let upper = |eps: f64| PI * PI / (1.0 - eps).powi(2);
    let widths = [0.1, 0.03, 0.01, 3e-3, 1e-3, 3e-4, 1e-4];
    let sandwiched = widths.iter().all(|&eps| {
        let e = solve_well(&WellModel::new(1.0, eps, Coupling::Finite(1.0)).unwrap()).unwrap().energy;
        PI * PI <= e && e <= upper(eps)
    });
    c.check(sandwiched, format!("sandwich on eps grid {widths:?}"));
    let ratio = expansion_check(1.0f64, Coupling::Finite(1.0), &[1e-3]).unwrap()[0].ratio.unwrap();
    c.check((ratio - 1.0).abs() <= 0.1, format!("expansion ratio {ratio:.4} at eps=1e-3"));
    let hard = solve_well(&WellModel::new(1.0, 0.1, Coupling::HardCore).unwrap()).unwrap().energy;
    c.check((hard - PI * PI / 0.81).abs() <= 1e-12, format!("hard-core E {hard:.15}"));
    let row = origin_suppression(1.0f64, Coupling::Finite(1.0), &[1e-2]).unwrap()[0];
    let law = row.predicted.ln();
    let rel = (row.ln_psi0 - law).abs() / law.abs();
    c.check(rel <= 0.15, format!("ln psi(0) {:.4} vs law {law:.4}", row.ln_psi0));
}

fn criterion_8(c: &mut Checks) {
    for alpha in [2.0, 3.0, 4.0, 6.0] {
        let identity = alpha * kinetic_integral_2d(alpha).unwrap() * 4.0 / PI;
        c.check((identity - 1.0).abs() <= 1e-8, format!("alpha={alpha}: {identity:.12}"));
    }
    let defect = norm_defect_2d(1e10f64.ln().ln()).unwrap();
    c.check(defect < 1e-8, format!("defect {defect:.3e} at beta=1e10"));
}

fn criterion_9(c: &mut Checks) {
    let start = Instant::now();
    let bs = geometric_grid(0.05, 0.4, 15);
    for d in [3.0, 4.0, 5.0] {
        let (_, fit) = two_particle_scaling(dim(d), &bs).unwrap();
        c.check((fit.slope - (d - 2.0)).abs() <= 0.1, format!("quadrature D={d} slope {:.4}", fit.slope));
    }
    let b = 1e-4;
    let prefactor = two_particle_bound(dim(3.0), b).unwrap().correction / b;
    let target = 3.0 / (4.0 * SQRT_2);
    c.check((prefactor / target - 1.0).abs() <= 0.02, format!("correction/b {prefactor:.6} vs {target:.6}"));

    let mc_bs = [0.05, 0.0707, 0.1, 0.141, 0.2];
    let excess: Vec<f64> = mc_bs
        .iter()
        .map(|&b| {
            let cfg = NbodyConfig::new(3, 3, CorrelationFactor::gaussian(b).unwrap(), 1_000_000, 17).unwrap();
            nbody_bound_mc(&cfg).unwrap().excess()
        })
        .collect();
    let slope = log_log_fit(&mc_bs, &excess).unwrap().slope;
    c.check((slope - 1.0).abs() <= 0.15, format!("N=3 MC slope {slope:.4}"));
    let b = 0.2;
    let cfg = NbodyConfig::new(2, 3, CorrelationFactor::gaussian(b).unwrap(), 1_000_000, 2024).unwrap();
    let mc = nbody_bound_mc(&cfg).unwrap();
    let quad = two_particle_bound(dim(3.0), b / SQRT_2).unwrap();
    let z = (mc.excess() - quad.excess()) / mc.stderr;
    c.check(z.abs() <= 3.0, format!("N=2 MC vs quadrature z = {z:.2}"));
    c.within_time(start, Duration::from_secs(120));
}

fn criterion_10(c: &mut Checks) {
    let cases = [(0, 0.0, 3.0, 1.5), (0, 1.0, 3.0, 1.5 + PI.powf(-1.5)), (1, 1.0, 2.0, 3.0 + 1.0 / PI)];
    for (n, g, d, exact) in cases {
        let got = pt_first_order(n, g, dim(d));
        c.check((got - exact).abs() <= 1e-14, format!("first order n={n} g={g} D={d}: {got:.15}"));
    }
    let partial = |d: f64, k: usize| pt_second_order_partial(0, 1.0, dim(d), k).unwrap();
    let (a, b) = (partial(1.0, 10_000), partial(1.0, 100_000));
    c.check((a - b).abs() < 1e-2 * b.abs(), "D=1 partial sums converge");
    let (small, large) = (partial(3.0, 100), partial(3.0, 10_000));
    c.check(large.abs() > 5.0 * small.abs(), format!("D=3 growth {:.2}x", large.abs() / small.abs()));
    let ks = [1e3, 1e4, 1e5, 1e6];
    let xs: Vec<f64> = ks.iter().map(|k: &f64| k.ln()).collect();
    let ys: Vec<f64> = ks.iter().map(|&k| partial(2.0, k as usize)).collect();
    let slope = linear_fit(&xs, &ys).unwrap().slope;
    let constant = -1.0 / (2.0 * PI * PI);
    c.check((slope / constant - 1.0).abs() < 0.1, format!("D=2 ln K slope {slope:.5} vs {constant:.5}"));
}

fn run_cli(args: &[&str]) -> Vec<u8> {
    let mut out = Vec::new();
    let code = main_with_args(std::iter::once("delta-ineff").chain(args.iter().copied()), &mut out, &mut Vec::new());
    assert_eq!(code, 0, "{args:?}");
    out
}

fn criterion_11(c: &mut Checks) {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut bracketed, mut in_g, mut in_k) = (0, 0, 0);
    const DRAWS: usize = 1000;
    for _ in 0..DRAWS {
        let d = rng.random_range(1.0..6.0);
        let g = 10f64.powf(rng.random_range(-6.0..3.0));
        let k = rng.random_range(1..5000usize);
        let n = rng.random_range(0..=k.min(30));
        let s = shift(d, Coupling::Finite(g), k, n);
        let lo = 2.0 * n as f64;
        bracketed += usize::from(lo < s && s < lo + 2.0);
        in_g += usize::from(shift(d, Coupling::Finite(2.0 * g), k, n) > s);
        let s0 = shift(d, Coupling::Finite(g), k, 0);
        in_k += usize::from(shift(d, Coupling::Finite(g), k + 1, 0) < s0);
    }
    c.check(bracketed == DRAWS, format!("bracket {bracketed}/{DRAWS}"));
    c.check(in_g == DRAWS, format!("monotone in g {in_g}/{DRAWS}"));
    c.check(in_k == DRAWS, format!("monotone in K {in_k}/{DRAWS}"));

    let mut interlaced = 0;
    for _ in 0..100 {
        let d = dim(rng.random_range(1.0..5.0));
        let g = rng.random_range(0.01..50.0);
        let k = rng.random_range(1..25usize);
        let ev = jacobi_eigenvalues(&rank_one_limit_matrix(d, g, k)).unwrap();
        let ok = ev.iter().enumerate().all(|(i, &e)| {
            e >= d.unperturbed_energy(i) - 1e-10 && (i == k || e <= d.unperturbed_energy(i + 1) + 1e-10)
        });
        interlaced += usize::from(ok);
    }
    c.check(interlaced == 100, format!("interlacing {interlaced}/100"));

    let runs: [&[&str]; 3] = [
        &["sweep", "--param", "D=2"],
        &["well"],
        &["nbody", "--param", "samples=20000", "--param", "threads=4"],
    ];
    for args in runs {
        let same = run_cli(args) == run_cli(args);
        c.check(same, format!("byte-identical CSV for {}", args[0]));
    }
}

fn main() {
    let criteria: [(usize, Criterion); 11] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
        (11, criterion_11),
    ];
    let mut failures = 0;
    for (id, run) in criteria {
        let mut c = Checks::default();
        run(&mut c);
        let verdict = if c.failed.is_empty() { "PASS" } else { "FAIL" };
        let detail = if c.failed.is_empty() { c.notes.join("; ") } else { format!("failed: {}", c.failed.join("; ")) };
        println!("{verdict} criterion {id:>2}: {detail}");
        failures += usize::from(!c.failed.is_empty());
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
