use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use nehari_core::instanton::{limit_energy, Instanton};
use nehari_core::limit_algebra::{ground_level, roots_f_n, sobolev_constant, thresholds, LevelReport};
use nehari_core::nehari_solver::{
    eigenfunction_obstruction, ground_state_solve, lambda1, write_profile, RadialBall, SolveOptions, SolveReport,
};
use nehari_core::quadrature::QuadratureScheme;
use nehari_core::Dimension;
use rayon::prelude::*;

use crate::config::{MuSpec, RunConfig};
use crate::error::CliError;

/// Fixed 17-significant-digit scientific notation.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn dimension(cfg: &RunConfig) -> Result<Dimension, CliError> {
    Ok(Dimension::new(cfg.n)?)
}

/// The sweep values plus any regime boundary lying inside the sweep range.
fn level_mus(cfg: &RunConfig, dim: Dimension) -> Vec<f64> {
    let mut mus = cfg.mu.values();
    if let MuSpec::Sweep(s) = &cfg.mu {
        let t = thresholds(dim);
        for b in t.mu_star.into_iter().chain([t.mu_n]) {
            if b.is_finite() && b >= s.start && b <= s.stop {
                mus.push(b);
            }
        }
    }
    mus.sort_by(f64::total_cmp);
    mus.dedup();
    mus
}

pub fn levels(cfg: &RunConfig) -> Result<String, CliError> {
    let dim = dimension(cfg)?;
    let rows: Vec<LevelReport> = level_mus(cfg, dim)
        .par_iter()
        // S = 1 expresses every level in units of S^(N/2)
        .map(|&mu| ground_level(mu, dim, 1.0))
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<_, _>>()?;
    let mut out = String::from("mu,regime,k,l,A_over_S_half_N,semitrivial_over_S_half_N\n");
    for r in rows {
        let (k, l) = r.minimizer_scalings().unzip();
        writeln!(
            out,
            "{},{},{},{},{},{}",
            num(r.mu),
            r.regime,
            opt(k),
            opt(l),
            opt(r.level),
            opt(r.semitrivial_level)
        )
        .unwrap();
    }
    Ok(out)
}

pub fn coupling(cfg: &RunConfig) -> Result<String, CliError> {
    let dim = dimension(cfg)?;
    let per_mu: Vec<String> = cfg
        .mu
        .values()
        .par_iter()
        .map(|&mu| -> Result<String, CliError> {
            let mut rows = String::new();
            for root in roots_f_n(mu, dim)? {
                let (r1, r2) = root.residuals(mu, dim);
                writeln!(
                    rows,
                    "{},{},{},{},{},{},{},{}",
                    num(mu),
                    root.branch,
                    num(root.m),
                    num(root.k),
                    num(root.l),
                    num(r1),
                    num(r2),
                    num(root.level_factor(dim) / dim.nf())
                )
                .unwrap();
            }
            Ok(rows)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<_, _>>()?;
    Ok(format!(
        "mu,branch,m,k,l,residual_kl,residual_system,level_over_S_half_N\n{}",
        per_mu.concat()
    ))
}

pub fn thresholds_table(cfg: &RunConfig) -> Result<String, CliError> {
    let dim = dimension(cfg)?;
    let t = thresholds(dim);
    Ok(format!(
        "N,mu_N,mu_star,interval_upper\n{},{},{},{}\n",
        cfg.n,
        num(t.mu_n),
        opt(t.mu_star),
        num(t.interval_upper)
    ))
}

const NORM_TOL: f64 = 1e-8;
const ENERGY_TOL: f64 = 1e-7;

pub fn limit_check(cfg: &RunConfig) -> Result<(String, bool), CliError> {
    let dim = dimension(cfg)?;
    let s = sobolev_constant(cfg.n)?;
    let s_half = dim.half_n().pow(s);
    let cells: Vec<(f64, f64)> = cfg
        .mu
        .values()
        .into_iter()
        .flat_map(|mu| [0.1, 1.0, 10.0].map(|eps| (mu, eps)))
        .collect();
    let rows: Vec<(String, bool)> = cells
        .par_iter()
        .map(|&(mu, eps)| -> Result<(String, bool), CliError> {
            let scheme = QuadratureScheme::default();
            let inst = Instanton::new(dim, eps)?;
            let grad = inst.dirichlet_norm(&scheme)?;
            let crit = inst.critical_norm(&scheme)?;
            let delta = refinement_delta(&inst, &scheme);
            let rel = |a: f64, b: f64| ((a - b) / b).abs();
            let (e_grad, e_crit) = (rel(grad, s_half), rel(crit, s_half));
            let rep = ground_level(mu, dim, s)?;
            let (energy, err) = match (rep.level, rep.minimizer_scalings()) {
                (Some(a), Some((k, l))) => {
                    let e = limit_energy(k, l, mu, &inst, &scheme)?;
                    (Some(e / s_half), Some(rel(e, a)))
                }
                _ => (None, None),
            };
            let pass = e_grad < NORM_TOL && e_crit < NORM_TOL && err.is_none_or(|e| e < ENERGY_TOL);
            let row = format!(
                "{},{},{},{},{},{},{},{},{},{}\n",
                cfg.n,
                num(mu),
                num(eps),
                num(e_grad),
                num(e_crit),
                num(delta),
                opt(energy),
                opt(rep.level.map(|a| a / s_half)),
                opt(err),
                if pass { "PASS" } else { "FAIL" }
            );
            Ok((row, pass))
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<_, _>>()?;
    let mut out = String::from(
        "N,mu,epsilon,dirichlet_rel_err,critical_rel_err,refinement_delta,limit_energy_over_S_half_N,\
         A_over_S_half_N,energy_rel_err,status\n",
    );
    let mut all = true;
    for (row, pass) in rows {
        out.push_str(&row);
        all &= pass;
    }
    Ok((out, all))
}

/// Largest relative change of the instanton norms under node doubling.
pub fn refinement_delta(inst: &Instanton, scheme: &QuadratureScheme) -> f64 {
    let n = inst.dim.n();
    let p = inst.dim.two_star();
    let grad = |q: &QuadratureScheme| q.integrate_radial(n, inst.epsilon, f64::INFINITY, |r| inst.derivative(r).powi(2));
    let crit = |q: &QuadratureScheme| q.integrate_radial(n, inst.epsilon, f64::INFINITY, |r| p.pow(inst.value(r)));
    let fine = scheme.refined();
    let d = |f: &dyn Fn(&QuadratureScheme) -> f64| ((f(&fine) - f(scheme)) / f(&fine)).abs();
    d(&grad).max(d(&crit))
}

struct Cell {
    grid: RadialBall,
    report: SolveReport,
    level: Option<f64>,
}

fn solve_cells(cfg: &RunConfig) -> Result<Vec<Cell>, CliError> {
    let dim = dimension(cfg)?;
    let grid = RadialBall::new(dim, cfg.radius, cfg.nodes)?;
    let lam1 = lambda1(&grid)?.value;
    let lambda = cfg.lambda_frac * lam1;
    let s = sobolev_constant(cfg.n)?;
    let opts = SolveOptions {
        seed: cfg.seed,
        ..SolveOptions::default()
    };
    cfg.mu
        .values()
        .par_iter()
        .map(|&mu| {
            let report = ground_state_solve(&grid, lambda, mu, &opts)?;
            let level = ground_level(mu, dim, s)?.level;
            Ok(Cell { grid, report, level })
        })
        .collect::<Vec<_>>()
        .into_iter()
        // first failure in sweep order, independent of scheduling
        .collect()
}

fn profile_path(cfg: &RunConfig, index: Option<usize>) -> PathBuf {
    let base = cfg
        .profile
        .clone()
        .or_else(|| cfg.out.as_ref().map(|o| o.with_extension("profile.csv")))
        .unwrap_or_else(|| PathBuf::from("profile.csv"));
    match index {
        None => base,
        Some(i) => {
            let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("profile");
            base.with_file_name(format!("{stem}_{i}.csv"))
        }
    }
}

fn write_file(path: &Path, f: impl FnOnce(std::fs::File) -> std::io::Result<()>) -> Result<(), CliError> {
    let file = std::fs::File::create(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    f(file).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub fn solve(cfg: &RunConfig) -> Result<String, CliError> {
    let cells = solve_cells(cfg)?;
    let mut out = String::from("N,R,M,lambda,mu,B_num,A,el_residual,H_residual,positive,pohozaev_combined\n");
    let single = cells.len() == 1;
    for (i, c) in cells.iter().enumerate() {
        let r = &c.report;
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            cfg.n,
            num(c.grid.radius),
            c.grid.nodes,
            num(r.lambda),
            num(r.mu),
            num(r.b_num),
            opt(c.level),
            num(r.el_residual),
            num(r.h_residual),
            r.positive,
            num(r.pohozaev.combined)
        )
        .unwrap();
        if single || cfg.profile.is_some() {
            let path = profile_path(cfg, (!single).then_some(i));
            write_file(&path, |f| write_profile(&r.pair, std::io::BufWriter::new(f)))?;
        }
    }
    Ok(out)
}

pub fn pohozaev(cfg: &RunConfig) -> Result<String, CliError> {
    let cells = solve_cells(cfg)?;
    let mut out = String::from(
        "N,R,M,lambda,mu,identity_u,identity_v,combined,boundary_u,boundary_v,relative_balance,\
         eigenfunction_obstruction\n",
    );
    for c in &cells {
        let r = &c.report;
        let p = r.pohozaev;
        let obstruction = eigenfunction_obstruction(&r.pair, r.lambda, &c.grid)?;
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            cfg.n,
            num(c.grid.radius),
            c.grid.nodes,
            num(r.lambda),
            num(r.mu),
            num(p.identity_u),
            num(p.identity_v),
            num(p.combined),
            num(p.boundary_u),
            num(p.boundary_v),
            num(p.relative_balance),
            num(obstruction)
        )
        .unwrap();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Sweep;

    #[test]
    fn boundaries_inserted_into_sweeps() {
        let cfg = RunConfig {
            mu: MuSpec::Sweep("0:0.4:5".parse::<Sweep>().unwrap()),
            ..RunConfig::default()
        };
        let mus = level_mus(&cfg, Dimension::new(4).unwrap());
        assert_eq!(mus.len(), 7);
        assert!(mus.contains(&(6f64.sqrt() / 9.0)));
        assert!(mus.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(num(0.1), "1.0000000000000001e-1");
        assert_eq!(num(-2.5), "-2.5000000000000000e0");
    }
}
