//! The five subcommands. Each returns the text it would print.

use polent::transfer::distillable_ln;
use polent::{
    bounds, distillable, optimize_incident_with, p_out_analytic, region_boundary, s_max,
    s_max_quadratic, symmetry_ratio, transmit, yield_check, OptimizeConfig, PlasmonFilmSpec,
    TransmissionEigs, TransmissionMatrix,
};

use crate::error::{CliError, CliResult};
use crate::format::{self, num, Csv, Report};
use crate::scenario::{MediaSpec, Scale, Scenario, SweepGrid, Task};

pub const SWEEP_MIN: f64 = 1.0 / 30.0;
pub const SWEEP_MAX: f64 = 30.0;
pub const SWEEP_STEPS: usize = 200;

pub const REGION_P_IN: f64 = 0.5;
pub const REGION_LN_TAU_MAX: f64 = 3.0;
pub const REGION_STEPS: usize = 40;

/// Largest τ for which the closed form is cross-checked against propagation.
const ANALYTIC_CHECK_TAU: f64 = 1e6;
const ANALYTIC_CHECK_TOL: f64 = 1e-8;

/// Ratio grid for `smax-sweep`: scenario `[sweep]` values, then `--steps`,
/// then the defaults (log grid over `[1/30, 30]`, 200 points).
pub fn sweep_grid(scenario: Option<&Scenario>, steps: Option<usize>) -> CliResult<SweepGrid> {
    let o = scenario.map(|s| s.sweep.clone()).unwrap_or_default();
    SweepGrid::new(
        "ratio",
        o.min.unwrap_or(SWEEP_MIN),
        o.max.unwrap_or(SWEEP_MAX),
        steps.or(o.steps).unwrap_or(SWEEP_STEPS),
        o.scale.unwrap_or(Scale::Log),
    )
}

/// `S_max` and its quadratic expansion along a ratio grid.
///
/// When the grid straddles `ratio = 1` without sampling it, that point is
/// inserted so the peak of the curve appears in the table.
pub fn cmd_smax_sweep(grid: &SweepGrid) -> CliResult<String> {
    if grid.axis != "ratio" {
        return Err(CliError::Config(format!(
            "sweep.axis: expected \"ratio\", got {:?}",
            grid.axis
        )));
    }
    if !(grid.min > 0.0) {
        return Err(CliError::Domain(format!(
            "ratio grid must be positive, min = {}",
            grid.min
        )));
    }
    let mut ratios = grid.points();
    if grid.min < 1.0 && grid.max > 1.0 && !ratios.contains(&1.0) {
        let at = ratios.partition_point(|&r| r < 1.0);
        ratios.insert(at, 1.0);
    }
    let mut table = Csv::new(&["ratio", "s_max", "s_max_quadratic"])?;
    for r in ratios {
        table.row([num(r), num(s_max(r)?), num(s_max_quadratic(r))])?;
    }
    table.finish()
}

/// Parameters of `distill-region`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegionArgs {
    pub p_in: f64,
    pub ln_tau_max: f64,
    pub steps: usize,
}

impl Default for RegionArgs {
    fn default() -> Self {
        RegionArgs {
            p_in: REGION_P_IN,
            ln_tau_max: REGION_LN_TAU_MAX,
            steps: REGION_STEPS,
        }
    }
}

impl RegionArgs {
    /// Flags override the scenario `[region]` section, which overrides the
    /// defaults.
    pub fn resolve(
        scenario: Option<&Scenario>,
        p_in: Option<f64>,
        ln_tau_max: Option<f64>,
        steps: Option<usize>,
    ) -> Self {
        let o = scenario.map(|s| s.region.clone()).unwrap_or_default();
        let d = RegionArgs::default();
        RegionArgs {
            p_in: p_in.or(o.p_in).unwrap_or(d.p_in),
            ln_tau_max: ln_tau_max.or(o.ln_tau_max).unwrap_or(d.ln_tau_max),
            steps: steps.or(o.steps).unwrap_or(d.steps),
        }
    }
}

/// Feasibility grid over `[0, ln_tau_max]²` followed by the strip edges.
///
/// Columns `kind,ln_tau1,ln_tau2,feasible`; `kind` is `grid`, `lower`, `upper`
/// or `transverse`, and `feasible` is `1`/`0` on grid rows and empty on edges.
pub fn cmd_distill_region(args: &RegionArgs) -> CliResult<String> {
    let boundary = region_boundary(args.p_in, args.ln_tau_max, args.steps)?;
    let mut table = Csv::new(&["kind", "ln_tau1", "ln_tau2", "feasible"])?;
    let last = (args.steps - 1) as f64;
    let axis: Vec<f64> = (0..args.steps)
        .map(|k| args.ln_tau_max * k as f64 / last)
        .collect();
    for &x in &axis {
        for &y in &axis {
            let v = distillable_ln(args.p_in, x, y)?;
            table.row(["grid", &num(x), &num(y), if v.feasible { "1" } else { "0" }])?;
        }
    }
    for (kind, edge) in [
        ("lower", &boundary.lower),
        ("upper", &boundary.upper),
        ("transverse", &boundary.transverse),
    ] {
        for &(x, y) in edge.iter() {
            table.row([kind, &num(x), &num(y), ""])?;
        }
    }
    table.finish()
}

fn tau_or_inf(e: &TransmissionEigs) -> f64 {
    e.tau().unwrap_or(f64::INFINITY)
}

/// Propagates the scenario's input through its media and reports the output
/// state, the closed-form bounds, the distillation verdict and the yield.
pub fn cmd_transfer(scenario: &Scenario) -> CliResult<String> {
    scenario.expect_task(Task::Transfer)?;
    let input = scenario.require_input()?.state()?;
    let (t1, t2, omega0) = scenario.require_media()?.resolve()?;
    let p_in = input.concurrence();
    let result = transmit(&input, &t1, &t2)?;
    let (e1, e2) = (t1.eigs()?, t2.eigs()?);

    let mut r = Report::new();
    r.section("input")
        .field("state", format::matrix(input.matrix()))
        .num("p_in", p_in)
        .num("s_in", input.chsh());
    media_section(&mut r, &t1, &t2, &e1, &e2, omega0);

    let analytic = p_out_analytic(&input, &t1, &t2)?;
    let checked = e1.tau_capped() <= ANALYTIC_CHECK_TAU && e2.tau_capped() <= ANALYTIC_CHECK_TAU;
    if checked && (analytic - result.p_out).abs() > ANALYTIC_CHECK_TOL {
        return Err(CliError::Internal(format!(
            "closed-form P_out {analytic} disagrees with propagated {}",
            result.p_out
        )));
    }
    r.section("output")
        .field("a_out", format::matrix(result.state_out.matrix()))
        .num("z", result.z)
        .num("p_out", result.p_out)
        .num("s_out", result.s_out)
        .num("p_out_closed_form", analytic);

    let b = bounds(e1.tau_capped(), e2.tau_capped())?;
    r.section("bounds")
        .num("p_min", b.p_min)
        .num("p_max", b.p_max)
        .num("s_max", b.s_max);

    distillation_section(&mut r, p_in, &e1, &e2)?;

    let y = yield_check(p_in, &result, &t1, &t2)?;
    if !y.ok {
        return Err(CliError::Internal(format!(
            "yield check failed: Z*P_out = {}, expected {}",
            y.z_times_pout, y.expected
        )));
    }
    r.section("yield")
        .num("z_times_p_out", y.z_times_pout)
        .num("expected", y.expected)
        .flag("ok", y.ok);
    Ok(r.finish())
}

fn media_section(
    r: &mut Report,
    t1: &TransmissionMatrix,
    t2: &TransmissionMatrix,
    e1: &TransmissionEigs,
    e2: &TransmissionEigs,
    omega0: Option<f64>,
) {
    r.section("media");
    if let Some(w) = omega0 {
        r.num("omega0", w);
    }
    r.field("t1", format::matrix(t1.matrix()))
        .field("t2", format::matrix(t2.matrix()))
        .num("t1_plus", e1.t_plus)
        .num("t1_minus", e1.t_minus)
        .num("t2_plus", e2.t_plus)
        .num("t2_minus", e2.t_minus)
        .num("tau1", tau_or_inf(e1))
        .num("tau2", tau_or_inf(e2));
}

fn distillation_section(
    r: &mut Report,
    p_in: f64,
    e1: &TransmissionEigs,
    e2: &TransmissionEigs,
) -> CliResult<()> {
    r.section("distillation");
    if p_in > 0.0 {
        let v = distillable(p_in, e1.tau_capped(), e2.tau_capped())?;
        r.flag("feasible", v.feasible)
            .num("margin_diff", v.margin_diff)
            .num("margin_sum", v.margin_sum);
    } else {
        r.flag("feasible", false);
    }
    Ok(())
}

fn films(scenario: &Scenario) -> CliResult<(PlasmonFilmSpec, PlasmonFilmSpec)> {
    match scenario.require_media()? {
        MediaSpec::Films { film1, film2, .. } => Ok((*film1, *film2)),
        MediaSpec::Matrices(..) => Err(CliError::Config(
            "media: the plasmon command needs `film1` and `film2`".into(),
        )),
    }
}

/// Resonances, transmissions and symmetry ratios of a film pair.
///
/// When film 2 is square with film 1's `lattice_a`, the films share order,
/// linewidth, peak and dielectric constant, and the illumination sits on the
/// `lattice_a` resonance, the closed-form `τ₁/τ₂` is reported alongside.
pub fn cmd_plasmon(scenario: &Scenario) -> CliResult<String> {
    scenario.expect_task(Task::Plasmon)?;
    let (f1, f2) = films(scenario)?;
    let (t1, t2, omega0) = scenario.require_media()?.resolve()?;
    let omega0 = omega0.ok_or_else(|| CliError::Internal("film media without omega0".into()))?;
    let (e1, e2) = (t1.eigs()?, t2.eigs()?);

    let mut r = Report::new();
    r.section("illumination").num("omega0", omega0);
    for (name, f, e) in [("film1", &f1, &e1), ("film2", &f2, &e2)] {
        let (wa, wb) = f.resonances()?;
        let (ta, tb) = f.transmissions(omega0)?;
        r.section(name)
            .num("resonance_a", wa)
            .num("resonance_b", wb)
            .num("t_a", ta)
            .num("t_b", tb)
            .num("tau", tau_or_inf(e));
    }

    let (tau1, tau2) = (tau_or_inf(&e1), tau_or_inf(&e2));
    r.section("pair").num("tau1", tau1).num("tau2", tau2);
    if tau1.is_finite() && tau2.is_finite() {
        let ratio = tau1 / tau2;
        r.num("ratio", ratio).num("s_max", s_max(ratio)?);
    }
    let matched = f2.lattice_a == f2.lattice_b
        && f2.lattice_a == f1.lattice_a
        && f1.order_n == f2.order_n
        && f1.gamma == f2.gamma
        && f1.t_peak == f2.t_peak
        && f1.epsilon == f2.epsilon
        && omega0 == f1.resonances()?.0;
    if matched {
        let closed = symmetry_ratio(f1.lattice_a, f1.lattice_b, f1.order_n, f1.gamma, f1.epsilon)?;
        r.num("symmetry_ratio", closed);
    }
    Ok(r.finish())
}

/// Searches local rotations of the input for the largest transmitted
/// concurrence and compares it with the closed-form limits.
pub fn cmd_optimize(scenario: &Scenario, seed: u64) -> CliResult<String> {
    scenario.expect_task(Task::Optimize)?;
    let p_in = scenario.require_input()?.concurrence()?;
    let (t1, t2, omega0) = scenario.require_media()?.resolve()?;
    let (e1, e2) = (t1.eigs()?, t2.eigs()?);
    let config = OptimizeConfig {
        seed,
        ..OptimizeConfig::default()
    };
    let found = optimize_incident_with(&t1, &t2, p_in, &config)?;

    let mut r = Report::new();
    r.section("search")
        .field("seed", seed.to_string())
        .field("restarts", config.restarts.to_string())
        .field("evaluations", found.iterations.to_string())
        .flag("converged", found.converged)
        .num("p_in", p_in);
    media_section(&mut r, &t1, &t2, &e1, &e2, omega0);
    r.section("best")
        .num("p_out", found.best_p_out)
        .field("input_state", format::matrix(found.best_input.matrix()))
        .field("rotation1", format::matrix(&found.rotations.0))
        .field("rotation2", format::matrix(&found.rotations.1));

    let b = bounds(e1.tau_capped(), e2.tau_capped())?;
    r.section("bounds")
        .num("p_min_entangled", b.p_min)
        .num("p_max_entangled", b.p_max)
        .num("s_max", b.s_max);
    if p_in == 1.0 {
        r.num("gap_to_p_max", b.p_max - found.best_p_out);
    }
    distillation_section(&mut r, p_in, &e1, &e2)?;
    Ok(r.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lines(csv: &str) -> Vec<Vec<String>> {
        csv.lines()
            .map(|l| l.split(',').map(str::to_string).collect())
            .collect()
    }

    #[test]
    fn default_sweep_contains_the_peak() {
        let out = cmd_smax_sweep(&sweep_grid(None, None).unwrap()).unwrap();
        let rows = lines(&out);
        assert_eq!(rows[0], ["ratio", "s_max", "s_max_quadratic"]);
        assert_eq!(rows.len(), 1 + SWEEP_STEPS + 1);
        let peak = rows
            .iter()
            .skip(1)
            .find(|r| r[0].parse::<f64>().unwrap() == 1.0)
            .unwrap();
        assert_eq!(peak[1].parse::<f64>().unwrap(), 2.0 * 2f64.sqrt());
    }

    #[test]
    fn region_flags_override_scenario() {
        let s = Scenario::parse("[region]\np_in = 0.9\nsteps = 7").unwrap();
        let a = RegionArgs::resolve(Some(&s), None, Some(2.0), Some(5));
        assert_eq!(
            a,
            RegionArgs {
                p_in: 0.9,
                ln_tau_max: 2.0,
                steps: 5
            }
        );
    }

    #[test]
    fn region_rejects_bad_p_in() {
        let args = RegionArgs {
            p_in: 1.0,
            ..RegionArgs::default()
        };
        assert!(matches!(
            cmd_distill_region(&args),
            Err(CliError::Domain(_))
        ));
    }

    #[test]
    fn plasmon_needs_films() {
        let s = Scenario::parse(
            "[media]\nt1 = [[\"1\",\"0\"],[\"0\",\"1\"]]\nt2 = [[\"1\",\"0\"],[\"0\",\"1\"]]",
        )
        .unwrap();
        assert!(matches!(cmd_plasmon(&s), Err(CliError::Config(_))));
    }
}
