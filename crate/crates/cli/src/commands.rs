//! The five subcommands. Each builds a [`Table`]; rows computed in parallel
//! keep the order of the input sweep.

use std::f64::consts::SQRT_2;

use rayon::prelude::*;
use timemap_core::annulus::{radial_limit_profile, solve_radial, RESIDUAL_STEP};
use timemap_core::emden::solve_emden;
use timemap_core::gelfand::{lambda_of_mu, lambda_star, solve_branch};
use timemap_core::oracle::oracle_lq_norm_pow;
use timemap_core::profiles::{
    emden_limit_p_infty, emden_limit_p_one, green_1d, liouville_u, rescale_emden, rescale_gelfand,
    sup_distance, DEFAULT_GRID,
};
use timemap_core::{GelfandSolution, Interval, RadialSolution, Regime};

use crate::config::{CommandName, Grid, QSpec, RegimeArg, RunConfig};
use crate::CliError;

/// Simpson points for the shooting norm check.
const ORACLE_POINTS: usize = 4001;
const ORACLE_TOL: f64 = 1e-12;
const PROFILE_POINTS: usize = 201;
const RESIDUAL_POINTS: usize = 10;
const BIFURCATION_POINTS: usize = 200;
const BIFURCATION_RANGE: (f64, f64) = (1e-3, 50.0);

/// A CSV table plus trailing comment lines.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
    pub comments: Vec<String>,
    /// For `converge`: whether the distance column strictly decreased.
    pub decreasing: Option<bool>,
}

impl Table {
    fn new(header: Vec<&'static str>, rows: Vec<Vec<f64>>) -> Self {
        Table { header, rows, comments: Vec::new(), decreasing: None }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn run(config: &RunConfig) -> Result<Table, CliError> {
    match config.command {
        CommandName::Norms => norms(config),
        CommandName::Profile => profile(config),
        CommandName::Bifurcation => bifurcation(config),
        CommandName::Converge => converge(config),
        CommandName::Residual => residual(config),
    }
}

fn uniform(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| if i + 1 == n { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
        .collect()
}

fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp()).collect()
}

fn require_power(config: &RunConfig) -> Result<(), CliError> {
    if config.kind.is_exp() {
        return Err(usage("this command needs a power kind or the bare interval"));
    }
    Ok(())
}

/// Points of `[lo, hi]` requested by `--grid` (default `n` points).
fn grid_points(config: &RunConfig, lo: f64, hi: f64, default: usize) -> Result<Vec<f64>, CliError> {
    match config.grid {
        None => Ok(uniform(lo, hi, default)),
        Some(Grid::Count(n)) => Ok(uniform(lo, hi, n)),
        Some(Grid::Range { lo: g_lo, hi: g_hi, n }) => {
            if g_lo < lo || g_hi > hi {
                return Err(usage(format!("grid {g_lo}:{g_hi} leaves [{lo}, {hi}]")));
            }
            Ok(uniform(g_lo, g_hi, n))
        }
    }
}

fn grid_count(config: &RunConfig, default: usize) -> Result<usize, CliError> {
    match config.grid {
        None => Ok(default),
        Some(Grid::Count(n)) => Ok(n),
        Some(Grid::Range { .. }) => Err(usage("this command takes a grid size, not a range")),
    }
}

fn norms(config: &RunConfig) -> Result<Table, CliError> {
    require_power(config)?;
    let ps = match (&config.sweep, config.p) {
        (Some(sweep), _) => sweep.clone(),
        (None, Some(p)) => vec![p],
        (None, None) => return Err(usage("norms needs --p or --sweep")),
    };
    if let Some(p) = ps.iter().find(|p| !(**p > 1.0)) {
        return Err(usage(format!("exponent p must exceed 1, got {p}")));
    }
    if config.q.is_empty() {
        return Err(usage("norms needs --q"));
    }
    let interval = config.reduced_interval()?;
    let jobs: Vec<(f64, f64)> = ps
        .iter()
        .flat_map(|&p| {
            config.q.iter().map(move |q| match q {
                QSpec::P => (p, p),
                QSpec::Value(q) => (p, *q),
            })
        })
        .collect();
    let rows = jobs
        .par_iter()
        .map(|&(p, q)| -> Result<Vec<f64>, CliError> {
            let sol = solve_emden(interval, p)?;
            let pow = sol.lq_norm_pow(q)?;
            let norm = pow.powf(1.0 / q);
            let oracle = oracle_lq_norm_pow(interval, p, q, ORACLE_POINTS, ORACLE_TOL)?.powf(1.0 / q);
            Ok(vec![p, q, sol.xi(), norm, pow, oracle, (norm - oracle).abs() / oracle])
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Table::new(vec!["p", "q", "xi_p", "lq_norm", "lq_pow", "oracle_lq", "rel_err"], rows))
}

/// A Gelfand solution from `--mu`, or from `--lambda` with `--branch`.
fn gelfand_reduced(config: &RunConfig, interval: Interval) -> Result<GelfandSolution, CliError> {
    if let Some(mu) = config.mu {
        return Ok(GelfandSolution::from_peak(interval, mu)?);
    }
    let lambda = config.lambda.ok_or_else(|| usage("need --mu, or --lambda with --branch"))?;
    let branch = config.branch.ok_or_else(|| usage("--lambda needs --branch"))?;
    Ok(solve_branch(interval, lambda, branch)?)
}

fn radial_solution(config: &RunConfig, parameter: Option<f64>) -> Result<RadialSolution, CliError> {
    if config.kind.is_exp() {
        let probe = config.annulus(1.0)?.expect("exponential kinds are annulus kinds");
        if let Some(mu) = parameter.or(config.mu) {
            return Ok(RadialSolution::from_peak(probe, mu)?);
        }
        let lambda = config.lambda.ok_or_else(|| usage("need --mu, or --lambda with --branch"))?;
        let branch = config.branch.ok_or_else(|| usage("--lambda needs --branch"))?;
        let problem = config.annulus(lambda)?.expect("annulus kind");
        return Ok(solve_radial(problem, Some(branch))?);
    }
    let p = parameter.or(config.p).ok_or_else(|| usage("need --p"))?;
    if !(p > 1.0) {
        return Err(usage(format!("exponent p must exceed 1, got {p}")));
    }
    let problem = config.annulus(p)?.expect("annulus kind");
    Ok(solve_radial(problem, None)?)
}

/// Whether the bare interval should be read as a Gelfand problem.
fn interval_is_gelfand(config: &RunConfig) -> bool {
    config.p.is_none() && (config.mu.is_some() || config.lambda.is_some())
}

fn default_regime(config: &RunConfig) -> RegimeArg {
    if config.kind.is_exp() || interval_is_gelfand(config) {
        RegimeArg::LambdaZero
    } else {
        RegimeArg::PInfty
    }
}

fn check_regime(config: &RunConfig, regime: RegimeArg, gelfand: bool) -> Result<(), CliError> {
    let ok = match regime {
        RegimeArg::PInfty | RegimeArg::POne => !gelfand,
        RegimeArg::LambdaZero => gelfand,
        RegimeArg::Local => true,
    };
    if ok {
        Ok(())
    } else {
        Err(usage(format!("regime {regime:?} does not apply to kind {:?}", config.kind)))
    }
}

fn profile(config: &RunConfig) -> Result<Table, CliError> {
    let regime = config.regime.unwrap_or_else(|| default_regime(config));
    let gelfand = config.kind.is_exp() || interval_is_gelfand(config);
    check_regime(config, regime, gelfand)?;
    if regime == RegimeArg::Local {
        return local_profile(config, gelfand);
    }
    let points = grid_points(config, config.a, config.b, PROFILE_POINTS)?;
    let first = if config.kind.annulus().is_some() { "r" } else { "s" };
    let (second, third) = match regime {
        RegimeArg::PInfty => ("u", "tent_limit"),
        RegimeArg::POne => ("u_over_xi", "sine_limit"),
        _ => ("delta_u", "green_limit"),
    };
    let rows: Vec<(f64, f64, f64)> = if config.kind.annulus().is_some() {
        let sol = radial_solution(config, None)?;
        let problem = sol.problem();
        let (scale, core_regime) = match (regime, sol.reduced()) {
            (RegimeArg::PInfty, _) => (1.0, Regime::PInfty),
            (RegimeArg::POne, _) => (1.0 / sol.reduced_peak(), Regime::POne),
            _ => (sol.zoom(), Regime::LambdaZero),
        };
        points
            .par_iter()
            .map(|&r| Ok((r, scale * sol.eval(r)?, radial_limit_profile(&problem, core_regime, r)?)))
            .collect::<Result<_, timemap_core::Error>>()?
    } else {
        let interval = config.reduced_interval()?;
        if gelfand {
            let sol = gelfand_reduced(config, interval)?;
            let s0 = interval.midpoint();
            points
                .par_iter()
                .map(|&s| Ok((s, sol.delta() * sol.eval(s)?, 2.0 * SQRT_2 * green_1d(interval, s, s0)?)))
                .collect::<Result<_, timemap_core::Error>>()?
        } else {
            let p = config.p.ok_or_else(|| usage("need --p"))?;
            let sol = solve_emden(interval, p)?;
            points
                .par_iter()
                .map(|&s| {
                    Ok(match regime {
                        RegimeArg::POne => (s, sol.normalized(s)?, emden_limit_p_one(interval, s)?),
                        _ => (s, sol.eval(s)?, emden_limit_p_infty(interval, s)?),
                    })
                })
                .collect::<Result<_, timemap_core::Error>>()?
        }
    };
    let rows = rows.into_iter().map(|(x, u, l)| vec![x, u, l, (u - l).abs()]).collect();
    Ok(Table::new(vec![first, second, third, "abs_err"], rows))
}

/// Rescaled profile against the Liouville profile over the window.
fn local_sampler(config: &RunConfig, gelfand: bool, parameter: Option<f64>) -> Result<Box<dyn Fn(f64) -> timemap_core::Result<f64> + Sync>, CliError> {
    if config.kind.annulus().is_some() {
        let sol = radial_solution(config, parameter)?;
        return Ok(Box::new(move |t| sol.rescaled_profile(t)));
    }
    let interval = config.reduced_interval()?;
    if gelfand {
        let sol = match parameter {
            Some(mu) => GelfandSolution::from_peak(interval, mu)?,
            None => gelfand_reduced(config, interval)?,
        };
        let profile = rescale_gelfand(&sol);
        Ok(Box::new(move |t| profile.sample(t)))
    } else {
        let p = parameter.or(config.p).ok_or_else(|| usage("need --p"))?;
        let profile = rescale_emden(&solve_emden(interval, p)?);
        Ok(Box::new(move |t| profile.sample(t)))
    }
}

fn local_profile(config: &RunConfig, gelfand: bool) -> Result<Table, CliError> {
    let (lo, hi) = config.window;
    let sample = local_sampler(config, gelfand, None)?;
    let points = grid_points(config, lo, hi, PROFILE_POINTS)?;
    let rows = points
        .par_iter()
        .map(|&t| {
            let w = sample(t)?;
            let u = liouville_u(t);
            Ok(vec![t, w, u, (w - u).abs()])
        })
        .collect::<Result<Vec<_>, timemap_core::Error>>()?;
    Ok(Table::new(vec!["t", "rescaled", "liouville", "abs_err"], rows))
}

fn bifurcation(config: &RunConfig) -> Result<Table, CliError> {
    if config.kind.annulus().is_some() && !config.kind.is_exp() {
        return Err(usage("bifurcation needs an exponential kind or the bare interval"));
    }
    let interval = config.reduced_interval()?;
    let mus = match &config.sweep {
        Some(sweep) => {
            if sweep.iter().any(|&mu| !(mu > 0.0)) {
                return Err(usage("peak values mu must be positive"));
            }
            sweep.clone()
        }
        None => {
            let n = grid_count(config, BIFURCATION_POINTS)?;
            log_spaced(BIFURCATION_RANGE.0, BIFURCATION_RANGE.1, n)
        }
    };
    let rows = mus
        .par_iter()
        .map(|&mu| Ok(vec![mu, lambda_of_mu(interval, mu)?]))
        .collect::<Result<Vec<_>, timemap_core::Error>>()?;
    let fold = lambda_star(interval)?;
    let mut table = Table::new(vec!["mu", "lambda"], rows);
    table
        .comments
        .push(format!("# lambda_star={:.16e}, mu_star={:.16e}", fold.lambda_star, fold.mu_star));
    Ok(table)
}

fn strictly_monotone(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] > w[0]) || v.windows(2).all(|w| w[1] < w[0])
}

fn converge(config: &RunConfig) -> Result<Table, CliError> {
    let regime = config.regime.ok_or_else(|| usage("converge needs --regime"))?;
    let sweep = config.sweep.clone().ok_or_else(|| usage("converge needs --sweep"))?;
    if sweep.len() < 2 || !strictly_monotone(&sweep) {
        return Err(usage("converge needs a strictly monotone sweep of at least two values"));
    }
    let gelfand = match regime {
        RegimeArg::PInfty | RegimeArg::POne => false,
        RegimeArg::LambdaZero => true,
        RegimeArg::Local => config.kind.is_exp() || interval_is_gelfand(config),
    };
    check_regime(config, regime, gelfand)?;
    if gelfand && sweep.iter().any(|&mu| !(mu > 0.0)) {
        return Err(usage("the sweep holds peak values mu, which must be positive"));
    }
    if !gelfand && sweep.iter().any(|&p| !(p > 1.0)) {
        return Err(usage("the sweep holds exponents p, which must exceed 1"));
    }
    let n = grid_count(config, DEFAULT_GRID)?;
    let distances = sweep
        .par_iter()
        .map(|&x| distance(config, regime, gelfand, x, n))
        .collect::<Result<Vec<f64>, CliError>>()?;
    let decreasing = distances.windows(2).all(|w| w[1] < w[0]);
    let rows = sweep.iter().zip(&distances).map(|(&x, &d)| vec![x, d]).collect();
    let mut table = Table::new(vec![if gelfand { "mu" } else { "p" }, "sup_distance"], rows);
    table.decreasing = Some(decreasing);
    Ok(table)
}

fn distance(config: &RunConfig, regime: RegimeArg, gelfand: bool, x: f64, n: usize) -> Result<f64, CliError> {
    if regime == RegimeArg::Local {
        let (lo, hi) = config.window;
        let sample = local_sampler(config, gelfand, Some(x))?;
        return Ok(sup_distance(|t| sample(t), |t| Ok(liouville_u(t)), Interval::new(lo, hi)?, n)?);
    }
    if config.kind.annulus().is_some() {
        let sol = radial_solution(config, Some(x))?;
        let problem = sol.problem();
        let (scale, core_regime) = match regime {
            RegimeArg::PInfty => (1.0, Regime::PInfty),
            RegimeArg::POne => (1.0 / sol.reduced_peak(), Regime::POne),
            _ => (sol.zoom(), Regime::LambdaZero),
        };
        return Ok(sup_distance(
            |r| Ok(scale * sol.eval(r)?),
            |r| radial_limit_profile(&problem, core_regime, r),
            problem.radial_interval(),
            n,
        )?);
    }
    let interval = config.reduced_interval()?;
    Ok(match regime {
        RegimeArg::PInfty => {
            let sol = solve_emden(interval, x)?;
            sup_distance(|s| sol.eval(s), |s| emden_limit_p_infty(interval, s), interval, n)?
        }
        RegimeArg::POne => {
            let sol = solve_emden(interval, x)?;
            sup_distance(|s| sol.normalized(s), |s| emden_limit_p_one(interval, s), interval, n)?
        }
        _ => {
            let sol = GelfandSolution::from_peak(interval, x)?;
            let s0 = interval.midpoint();
            sup_distance(
                |s| Ok(sol.delta() * sol.eval(s)?),
                |s| Ok(2.0 * SQRT_2 * green_1d(interval, s, s0)?),
                interval,
                n,
            )?
        }
    })
}

fn residual(config: &RunConfig) -> Result<Table, CliError> {
    if config.kind.annulus().is_none() {
        return Err(usage("residual needs an annulus kind"));
    }
    let sol = radial_solution(config, None)?;
    let (a, b) = (config.a, config.b);
    let points = match config.grid {
        Some(Grid::Range { lo, hi, n }) => {
            if lo - RESIDUAL_STEP <= a || hi + RESIDUAL_STEP >= b {
                return Err(usage("residual grid must stay a finite-difference step inside (a, b)"));
            }
            uniform(lo, hi, n)
        }
        _ => {
            let n = grid_count(config, RESIDUAL_POINTS)?;
            (1..=n).map(|k| a + (b - a) * k as f64 / (n + 1) as f64).collect()
        }
    };
    let rows = points
        .par_iter()
        .map(|&r| Ok(vec![r, sol.eval(r)?, sol.residual(r, RESIDUAL_STEP)?]))
        .collect::<Result<Vec<_>, timemap_core::Error>>()?;
    Ok(Table::new(vec!["r", "u", "residual"], rows))
}
