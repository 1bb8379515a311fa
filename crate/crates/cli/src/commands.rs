//! One function per subcommand, each producing result tables.

use delta_ineff::fit::log_log_fit;
use delta_ineff::regularized::{ground_energy, RegularizedProblem};
use delta_ineff::specfun::Dimension;
use delta_ineff::spectral::{pt_first_order, pt_second_order_partial, solve_shift, sweep_point, term_exponent_fit};
use delta_ineff::variational::{
    finish_estimate, kinetic_integral_2d, ln_defect_scale_2d, merge_blocks, nbody_block, norm_defect_2d,
    two_particle_bound, two_particle_estimate,
};
use delta_ineff::wavefn::{expansion_for, uniform_grid, FIGURE_GRID, INSET_GRID};
use delta_ineff::wellbarrier::{solve_well, WellModel};
use delta_ineff::{CorrelationFactor, Coupling, NbodyConfig, SpectralProblem};
use rayon::prelude::*;

use crate::config::{Command, RunConfig};
use crate::error::{CliError, CliResult};
use crate::table::{Cell, Table};

/// Tables produced by a run. The first is the main output; the others are
/// written next to it under their suffix.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub main: Table,
    pub extra: Vec<(&'static str, Table)>,
    pub seed: Option<u64>,
}

impl From<Table> for RunOutput {
    fn from(main: Table) -> Self {
        RunOutput { main, extra: Vec::new(), seed: None }
    }
}

pub fn execute(cfg: &RunConfig) -> CliResult<RunOutput> {
    match cfg.command {
        Command::Shift => shift(cfg),
        Command::Sweep => sweep(cfg),
        Command::Figure => figure(cfg),
        Command::Asymptotics => asymptotics(cfg),
        Command::Pt => pt(cfg),
        Command::Regularized => regularized(cfg),
        Command::Well => well(cfg),
        Command::Variational => variational(cfg),
        Command::Nbody => nbody(cfg),
    }
}

fn dimension(v: f64) -> CliResult<Dimension<f64>> {
    Ok(Dimension::new(v)?)
}

fn coupling_cell(c: Coupling<f64>) -> Cell {
    match c {
        Coupling::HardCore => "hardcore".into(),
        Coupling::Finite(g) => g.into(),
    }
}

fn increasing(key: &str, grid: &[usize]) -> CliResult<()> {
    if grid.is_empty() || grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::config(format!("`{key}` must be a strictly increasing list")));
    }
    Ok(())
}

fn decreasing(key: &str, grid: &[f64]) -> CliResult<()> {
    if grid.is_empty() || grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(CliError::config(format!("`{key}` must be a strictly decreasing list")));
    }
    Ok(())
}

fn positive(key: &str, values: &[f64]) -> CliResult<()> {
    if values.is_empty() || values.iter().any(|v| *v <= 0.0) {
        return Err(CliError::config(format!("`{key}` must be a non-empty list of positive values")));
    }
    Ok(())
}

fn shift(cfg: &RunConfig) -> CliResult<RunOutput> {
    let (d, c) = (cfg.f64("D")?, cfg.coupling("g")?);
    let (k, n) = (cfg.usize("K")?, cfg.usize("n")?);
    let sol = solve_shift(&SpectralProblem::new(dimension(d)?, c, k, n)?)?;
    let mut t = Table::new(["D", "g", "K", "n", "delta", "energy", "residual"]);
    t.push(vec![d.into(), coupling_cell(c), k.into(), n.into(), sol.shift.into(), sol.energy.into(), sol.residual.into()]);
    Ok(t.into())
}

fn sweep(cfg: &RunConfig) -> CliResult<RunOutput> {
    let (d, c, n) = (cfg.f64("D")?, cfg.coupling("g")?, cfg.usize("n")?);
    let grid = cfg.usize_list("K")?;
    increasing("K", &grid)?;
    let template = SpectralProblem::new(dimension(d)?, c, grid[0], n)?;
    let rows = grid
        .par_iter()
        .map(|&k| sweep_point(&template, k))
        .collect::<Result<Vec<_>, _>>()?;
    let mut t = Table::new(["K", "delta", "energy", "predicted", "ratio"]);
    for r in rows {
        t.push(vec![r.truncation.into(), r.shift.into(), (r.shift + d / 2.0).into(), r.predicted.into(), r.ratio.into()]);
    }
    Ok(t.into())
}

fn figure(cfg: &RunConfig) -> CliResult<RunOutput> {
    let (dim, c) = (dimension(cfg.f64("D")?)?, cfg.coupling("g")?);
    let ks = cfg.usize_list("K")?;
    increasing("K", &ks)?;
    let grids = [FIGURE_GRID, INSET_GRID].map(|(lo, hi, n)| uniform_grid(lo, hi, n));
    let curves = ks
        .par_iter()
        .map(|&k| -> CliResult<[Vec<f64>; 2]> {
            let (_, w) = expansion_for(&SpectralProblem::ground(dim, c, k)?)?;
            Ok([w.evaluate(&grids[0])?, w.evaluate(&grids[1])?])
        })
        .collect::<CliResult<Vec<_>>>()?;
    let columns: Vec<String> = std::iter::once("r".to_string())
        .chain(ks.iter().map(|k| format!("psi_K{k}")))
        .chain(std::iter::once("psi_unperturbed".to_string()))
        .collect();
    let mut tables = Vec::new();
    for (which, grid) in grids.iter().enumerate() {
        let mut t = Table::new(columns.clone());
        for (i, &r) in grid.iter().enumerate() {
            let mut row = vec![Cell::from(r)];
            row.extend(curves.iter().map(|c| Cell::from(c[which][i])));
            row.push(delta_ineff::specfun::radial_eigenfunction(0, dim, r)?.into());
            t.push(row);
        }
        tables.push(t);
    }
    let inset = tables.pop().expect("two grids");
    let main = tables.pop().expect("two grids");
    Ok(RunOutput { main, extra: vec![("inset", inset)], seed: None })
}

fn asymptotics(cfg: &RunConfig) -> CliResult<RunOutput> {
    let dims = cfg.f64_list("D")?;
    let (lo, hi, points) = (cfg.usize("k_lo")?, cfg.usize("k_hi")?, cfg.usize("points")?);
    let shift = cfg.f64("shift")?;
    let fits = dims
        .par_iter()
        .map(|&d| -> CliResult<_> { Ok(term_exponent_fit(dimension(d)?, lo, hi, shift, points)?) })
        .collect::<CliResult<Vec<_>>>()?;
    let mut t = Table::new(["D", "k_lo", "k_hi", "exponent", "expected_exponent", "prefactor"]);
    for (d, fit) in dims.iter().zip(fits) {
        t.push(vec![(*d).into(), lo.into(), hi.into(), fit.exponent.into(), (d / 2.0 - 2.0).into(), fit.prefactor.into()]);
    }
    Ok(t.into())
}

fn pt(cfg: &RunConfig) -> CliResult<RunOutput> {
    let (dim, g, n) = (dimension(cfg.f64("D")?)?, cfg.f64("g")?, cfg.usize("n")?);
    let ks = cfg.usize_list("K")?;
    increasing("K", &ks)?;
    let first = pt_first_order(n, g, dim);
    let second = ks
        .par_iter()
        .map(|&k| pt_second_order_partial(n, g, dim, k))
        .collect::<Result<Vec<_>, _>>()?;
    let mut t = Table::new(["K", "first_order", "second_order_partial", "second_order_energy"]);
    for (k, s) in ks.iter().zip(second) {
        t.push(vec![(*k).into(), first.into(), s.into(), (first + s).into()]);
    }
    Ok(t.into())
}

fn regularized(cfg: &RunConfig) -> CliResult<RunOutput> {
    let (d, g) = (cfg.f64("D")?, cfg.f64("g")?);
    let dim = dimension(d)?;
    let widths = cfg.f64_list("epsilon")?;
    let ks = cfg.usize_list("K")?;
    decreasing("epsilon", &widths)?;
    positive("epsilon", &widths)?;
    increasing("K", &ks)?;
    let pairs: Vec<(f64, usize)> = widths.iter().flat_map(|&w| ks.iter().map(move |&k| (w, k))).collect();
    let energies = pairs
        .par_iter()
        .map(|&(w, k)| ground_energy(&RegularizedProblem::new(dim, g, w, k)?))
        .collect::<Result<Vec<_>, _>>()?;
    let mut t = Table::new(["epsilon", "K", "E0"]);
    for ((w, k), e) in pairs.into_iter().zip(energies) {
        t.push(vec![w.into(), k.into(), e.into()]);
    }
    // contact limit, when it exists
    if let Ok(template) = SpectralProblem::ground(dim, Coupling::Finite(g), ks[0]) {
        for &k in &ks {
            let sol = solve_shift(&template.with_truncation(k)?)?;
            t.push(vec![0.0.into(), k.into(), sol.energy.into()]);
        }
    }
    Ok(t.into())
}

fn well(cfg: &RunConfig) -> CliResult<RunOutput> {
    let (radius, c) = (cfg.f64("R")?, cfg.coupling("g")?);
    let widths = cfg.f64_list("epsilon")?;
    decreasing("epsilon", &widths)?;
    let sols = widths
        .par_iter()
        .map(|&w| -> CliResult<_> {
            let m = WellModel::new(radius, w, c)?;
            Ok((m, solve_well(&m)?))
        })
        .collect::<CliResult<Vec<_>>>()?;
    let mut t = Table::new([
        "epsilon",
        "E",
        "E_hardcore",
        "E_unperturbed",
        "psi0",
        "predicted_psi0",
        "ln_psi0",
        "predicted_E",
        "expansion_ratio",
    ]);
    let pi = std::f64::consts::PI;
    for (w, (m, s)) in widths.iter().zip(sols) {
        let (predicted_psi0, correction) = match c {
            Coupling::HardCore => (0.0, 0.0),
            Coupling::Finite(g) => (
                2.0 * pi / radius * (-(3.0 * g / (4.0 * pi * w)).sqrt()).exp(),
                -2.0 * (4.0 * pi * w / (3.0 * g)).sqrt() * w / radius,
            ),
        };
        let hard = m.hard_core_energy();
        let ratio = (correction != 0.0 && correction.is_finite()).then(|| (s.energy / hard - 1.0) / correction);
        t.push(vec![
            (*w).into(),
            s.energy.into(),
            hard.into(),
            m.unperturbed_energy().into(),
            s.origin_value().into(),
            predicted_psi0.into(),
            s.ln_origin_value().into(),
            (hard * (1.0 + correction)).into(),
            ratio.into(),
        ]);
    }
    Ok(t.into())
}

fn slope_of(xs: &[f64], ys: &[f64]) -> Option<f64> {
    (xs.len() >= 2).then(|| log_log_fit(xs, ys).ok().map(|f| f.slope)).flatten()
}

fn variational(cfg: &RunConfig) -> CliResult<RunOutput> {
    let d = cfg.f64("D")?;
    let dim = dimension(d)?;
    if d == 2.0 {
        if cfg.raw("b").is_some() {
            return Err(CliError::config("`b` applies to D > 2; D = 2 takes `alpha`"));
        }
        let alphas = if cfg.raw("alpha").is_some() { cfg.f64_list("alpha")? } else { vec![2.0, 3.0, 4.0, 6.0] };
        let mut t = Table::new([
            "alpha",
            "kinetic_integral",
            "identity_ratio",
            "correction",
            "norm",
            "defect",
            "ln_defect_scale",
        ]);
        for a in alphas {
            let k = kinetic_integral_2d(a)?;
            let est = two_particle_estimate(dim, CorrelationFactor::two_d(a)?)?;
            t.push(vec![
                a.into(),
                k.into(),
                (a * k * 4.0 / std::f64::consts::PI).into(),
                est.correction.into(),
                est.norm.into(),
                norm_defect_2d(a)?.into(),
                ln_defect_scale_2d(a)?.into(),
            ]);
        }
        return Ok(t.into());
    }
    if cfg.raw("alpha").is_some() {
        return Err(CliError::config("`alpha` applies to D = 2 only"));
    }
    let bs = if cfg.raw("b").is_some() { cfg.f64_list("b")? } else { vec![0.05, 0.1, 0.2, 0.4] };
    positive("b", &bs)?;
    let ests = bs
        .par_iter()
        .map(|&b| two_particle_bound(dim, b))
        .collect::<Result<Vec<_>, _>>()?;
    let excess: Vec<f64> = ests.iter().map(|e| e.excess()).collect();
    let slope = slope_of(&bs, &excess);
    let mut t = Table::new(["b", "correction", "stderr", "norm", "excess", "fitted_slope"]);
    for (b, e) in bs.iter().zip(&ests) {
        t.push(vec![(*b).into(), e.correction.into(), e.stderr.into(), e.norm.into(), e.excess().into(), slope.into()]);
    }
    Ok(t.into())
}

fn nbody(cfg: &RunConfig) -> CliResult<RunOutput> {
    let (particles, dim) = (cfg.usize("N")?, cfg.usize("D")?);
    let (samples, seed) = (cfg.u64("samples")?, cfg.u64("seed")?);
    let bs = cfg.f64_list("b")?;
    positive("b", &bs)?;
    let mut ests = Vec::with_capacity(bs.len());
    for &b in &bs {
        let mc = NbodyConfig::new(particles, dim, CorrelationFactor::gaussian(b)?, samples, seed)?;
        let blocks: Vec<_> = (0..mc.blocks()).into_par_iter().map(|i| nbody_block(&mc, i)).collect();
        ests.push(finish_estimate(&mc, &merge_blocks(&blocks))?);
    }
    let excess: Vec<f64> = ests.iter().map(|e| e.excess()).collect();
    let slope = slope_of(&bs, &excess);
    let mut t = Table::new(["b", "correction", "stderr", "norm", "excess", "samples", "rejected", "fitted_slope"]);
    for (b, e) in bs.iter().zip(&ests) {
        t.push(vec![
            (*b).into(),
            e.correction.into(),
            e.stderr.into(),
            e.norm.into(),
            e.excess().into(),
            e.samples.into(),
            e.rejected.into(),
            slope.into(),
        ]);
    }
    Ok(RunOutput { main: t, extra: Vec::new(), seed: Some(seed) })
}
