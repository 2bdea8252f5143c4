//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::{admissible_pairs, rel};
use nehari_core::instanton::{cutoff_l2_scaling, limit_energy, Instanton};
use nehari_core::limit_algebra::{
    ground_level, minimize_psi, mu_existence_threshold, mu_star, psi_boundary_value,
    roots_f_n, sobolev_constant, Branch, Regime,
};
use nehari_core::nehari_solver::{
    eigenfunction_obstruction, evaluate, gradient_jplus, ground_state_solve, lambda1, mountain_pass_upper_bound,
    nehari_project, nehari_seed, RadialBall, RadialPair, SolveOptions, SolveReport,
};
use nehari_core::quadrature::QuadratureScheme;
use nehari_core::Dimension;

/// Crossing point of the nontrivial and semitrivial limit levels for N = 5.
const MU_STAR_5: f64 = 0.575601372027;
const MU_STAR_5_TOL: f64 = 1e-9;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn dim(n: u32) -> Dimension {
    Dimension::new(n).unwrap()
}

fn s_half(n: u32) -> f64 {
    dim(n).half_n().pow(sobolev_constant(n).unwrap())
}

fn exact_levels_n4() -> Outcome {
    let s = sobolev_constant(4).unwrap();
    let a0 = ground_level(0.0, dim(4), s).unwrap();
    let a3 = ground_level(0.3, dim(4), s).unwrap();
    let e0 = rel(a0.level.unwrap(), s * s / 3.0);
    let e3 = rel(a3.level.unwrap(), s * s / (12.0 * 0.3));
    let regimes = a0.regime == Regime::NontrivialGround && a3.regime == Regime::SemitrivialGround;
    outcome(
        e0 < 1e-12 && e3 < 1e-12 && regimes,
        format!("rel err mu=0: {e0:.2e}, mu=0.3: {e3:.2e} (bound 1e-12); regimes {}, {}", a0.regime, a3.regime),
    )
}

fn exact_levels_n6() -> Outcome {
    let s = sobolev_constant(6).unwrap();
    let mut worst: f64 = 0.0;
    let mut ok = true;
    for mu in [0.0, 0.25, 0.5, 1.0] {
        let rep = ground_level(mu, dim(6), s).unwrap();
        let a = rep.level.unwrap();
        worst = worst.max(rel(a, (1.5 - mu) / 6.0 * s.powi(3)));
        let (k, l) = rep.minimizer_scalings().unwrap();
        worst = worst.max((k - (1.0 - mu).sqrt()).abs()).max((l - 1.0).abs());
        ok &= rep.regime == if mu < 1.0 { Regime::NontrivialGround } else { Regime::Threshold };
    }
    outcome(
        ok && worst < 1e-12,
        format!("max rel err over mu in {{0, 1/4, 1/2, 1}}: {worst:.2e} (bound 1e-12)"),
    )
}

fn threshold_algebra_n4() -> Outcome {
    let d = dim(4);
    let mu = 6f64.sqrt() / 9.0;
    let pm = minimize_psi(mu, d).unwrap();
    let (m2, psi_min) = pm.interior.unwrap();
    let e_psi = (psi_min - 1.0 / (3.0 * mu)).abs();
    let e_m = (m2 - (2.0f64 / 3.0).sqrt()).abs();
    let roots = roots_f_n(2.0 * 3f64.sqrt() / 9.0, d).unwrap();
    let double = roots.len() == 1 && roots[0].branch == Branch::Double;
    let e_dbl = roots.first().map_or(f64::INFINITY, |r| (r.m - 3f64.sqrt() / 3.0).abs());
    outcome(
        e_psi < 1e-10 && e_m < 1e-10 && double && e_dbl < 1e-10,
        format!("|psi_min - 1/(3mu)| = {e_psi:.2e}, |m2 - sqrt(2/3)| = {e_m:.2e}, double root err {e_dbl:.2e} (bound 1e-10)"),
    )
}

fn mu_star_n5() -> Outcome {
    let d = dim(5);
    let star = mu_star(d).unwrap();
    let crossing = |mu: f64| minimize_psi(mu, d).unwrap().interior.unwrap().1 - psi_boundary_value(mu, d);
    // the crossing function changes sign within the bisection tolerance
    let h = 1e-10;
    let straddles = crossing(star - h) * crossing(star + h) <= 0.0;
    let residual = crossing(star).abs();
    let inside = star > 0.0 && star < mu_existence_threshold(d);
    let pinned = (star - MU_STAR_5).abs();
    outcome(
        inside && straddles && residual < 1e-10 && pinned < MU_STAR_5_TOL,
        format!(
            "mu* = {star:.15}, crossing residual {residual:.2e} (bound 1e-10), sign change across +-1e-10: {straddles}, \
             |mu* - pinned| = {pinned:.2e}"
        ),
    )
}

fn instanton_quadrature() -> Outcome {
    let scheme = QuadratureScheme::default();
    let mut worst_norm: f64 = 0.0;
    let mut worst_energy: f64 = 0.0;
    let mus: [(u32, [f64; 3]); 4] = [
        (4, [0.0, 0.1, 0.25]),
        (5, [0.0, 0.1, 0.3]),
        (6, [0.0, 0.25, 0.5]),
        (7, [0.0, 1.0, 2.0]),
    ];
    for (n, mu_list) in mus {
        let sh = s_half(n);
        for eps in [0.1, 1.0, 10.0] {
            let inst = Instanton::new(dim(n), eps).unwrap();
            worst_norm = worst_norm
                .max(rel(inst.dirichlet_norm(&scheme).unwrap(), sh))
                .max(rel(inst.critical_norm(&scheme).unwrap(), sh));
        }
        let inst = Instanton::new(dim(n), 1.0).unwrap();
        let s = sobolev_constant(n).unwrap();
        for mu in mu_list {
            let roots = roots_f_n(mu, dim(n)).unwrap();
            for root in &roots {
                let e = limit_energy(root.k, root.l, mu, &inst, &scheme).unwrap();
                worst_energy = worst_energy.max(rel(e, root.level_factor(dim(n)) / n as f64 * sh));
            }
            let rep = ground_level(mu, dim(n), s).unwrap();
            if let (Some(a), Some((k, l))) = (rep.level, rep.minimizer_scalings()) {
                let e = limit_energy(k, l, mu, &inst, &scheme).unwrap();
                worst_energy = worst_energy.max(rel(e, a));
            }
        }
    }
    outcome(
        worst_norm < 1e-8 && worst_energy < 1e-7,
        format!("max rel err of norms vs S^(N/2): {worst_norm:.2e} (bound 1e-8); limit energies vs levels: {worst_energy:.2e} (bound 1e-7)"),
    )
}

fn cutoff_scaling() -> Outcome {
    let scheme = QuadratureScheme::default();
    let eps: Vec<f64> = (3..=10).map(|k| 2f64.powi(-k)).collect();
    let mut ok = true;
    let mut parts = Vec::new();
    for n in [5, 6, 7] {
        let fit = cutoff_l2_scaling(dim(n), &eps, 0.5, 1.0, &scheme).unwrap();
        ok &= (fit.exponent - 2.0).abs() <= 0.1;
        parts.push(format!("N={n}: {:.4}", fit.exponent));
    }
    let fit4 = cutoff_l2_scaling(dim(4), &eps, 0.5, 1.0, &scheme).unwrap();
    let drop = fit4.residual / fit4.log_residual;
    ok &= drop >= 10.0;
    outcome(
        ok,
        format!(
            "exponents {} (bound 2 +- 0.1); N=4 residual {:.3e} -> {:.3e} with log factor, drop {drop:.1}x (bound 10x)",
            parts.join(", "),
            fit4.residual,
            fit4.log_residual
        ),
    )
}

fn projection_properties() -> Outcome {
    let grid = RadialBall::new(dim(4), 1.0, 256).unwrap();
    let lam1 = lambda1(&grid).unwrap().value;
    let (lambda, mu) = (0.5 * lam1, 0.1);
    let pairs = admissible_pairs(7, &grid, lambda, mu, 100);
    let (mut worst_h, mut worst_idem, mut worst_dj): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for pair in &pairs {
        let (_, proj) = nehari_project(pair, lambda, mu).unwrap();
        let rep = evaluate(&proj, lambda, mu);
        worst_h = worst_h.max(rep.h.abs() / rep.norms.quadratic(lambda, grid.dim));
        let (t2, _) = nehari_project(&proj, lambda, mu).unwrap();
        worst_idem = worst_idem.max((t2 - 1.0).abs());
        let step = 1e-5;
        let j = |t: f64| evaluate(&proj.scaled(t), lambda, mu).j;
        let dj = (j(1.0 + step) - j(1.0 - step)) / (2.0 * step);
        worst_dj = worst_dj.max(dj.abs() / rep.j.abs());
    }
    outcome(
        worst_h < 1e-10 && worst_idem < 1e-10 && worst_dj < 1e-6,
        format!(
            "100 pairs: max |H|/Q {worst_h:.2e} (1e-10), |t_bar - 1| on reprojection {worst_idem:.2e} (1e-10), \
             |dJ/dt|/|J| at t_bar {worst_dj:.2e} (1e-6)"
        ),
    )
}

fn gradient_correctness() -> Outcome {
    let grid = RadialBall::new(dim(4), 1.0, 256).unwrap();
    let lam1 = lambda1(&grid).unwrap().value;
    let (lambda, mu) = (0.5 * lam1, 0.1);
    let mut rng = common::rng(11);
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        let pair = common::random_pair(&mut rng, &grid, i % 2 == 0);
        let dir = common::random_pair(&mut rng, &grid, false);
        let g = gradient_jplus(&pair, lambda, mu);
        let analytic = g.dot(&dir);
        let t = 1e-6;
        let jp = |s: f64| evaluate(&pair.axpy(s, &dir), lambda, mu).j_plus;
        let fd = (jp(t) - jp(-t)) / (2.0 * t);
        worst = worst.max(rel(analytic, fd));
    }
    outcome(worst < 1e-6, format!("max rel err over 20 pairs: {worst:.2e} (bound 1e-6)"))
}

fn solve_n4(nodes: usize, lambda_frac: f64, mu: f64) -> (SolveReport, f64) {
    let grid = RadialBall::new(dim(4), 1.0, nodes).unwrap();
    let lam1 = lambda1(&grid).unwrap().value;
    let rep = ground_state_solve(&grid, lambda_frac * lam1, mu, &SolveOptions::default()).unwrap();
    (rep, lam1)
}

fn ground_state(solves: &[(usize, SolveReport)]) -> Outcome {
    let a = ground_level(0.1, dim(4), sobolev_constant(4).unwrap()).unwrap().level.unwrap();
    let fine = &solves.iter().find(|(m, _)| *m == 512).unwrap().1;
    let b: Vec<f64> = solves.iter().map(|(_, r)| r.b_num).collect();
    let (g1, g2) = (b[0] - b[1], b[1] - b[2]);
    let ratio = g1 / g2;
    let monotone = g1.signum() == g2.signum();
    let margin = (a - fine.b_num) / a;
    let interior_min = fine.pair.u.iter().chain(&fine.pair.v).cloned().fold(f64::INFINITY, f64::min);
    let pass = fine.el_residual < 1e-8
        && fine.positive
        && interior_min > 0.0
        && fine.h_residual < 1e-9
        && margin > 0.01
        && monotone
        && ratio >= 3.0;
    outcome(
        pass,
        format!(
            "M=512: el {:.2e} (1e-8), H {:.2e} (1e-9), min interior {interior_min:.3e}, B {:.10} < A {a:.10} by {:.1}% (1%); \
             B(128,256,512) gap ratio {ratio:.2} (3)",
            fine.el_residual,
            fine.h_residual,
            fine.b_num,
            100.0 * margin
        ),
    )
}

fn mountain_pass() -> Outcome {
    let grid = RadialBall::new(dim(4), 1.0, 512).unwrap();
    let lam1 = lambda1(&grid).unwrap().value;
    let eps: Vec<f64> = (0..5).map(|k| 0.2 * 0.5f64.powi(k) * grid.radius).collect();
    let mut ok = true;
    let mut parts = Vec::new();
    for mu in [0.0, 0.1] {
        let mp = mountain_pass_upper_bound(&grid, 0.5 * lam1, mu, &eps).unwrap();
        ok &= mp.value < mp.level;
        parts.push(format!("mu={mu}: {:.6} < A {:.6}", mp.value, mp.level));
        let gaps: Vec<f64> = [0.02, 0.1, 0.3]
            .iter()
            .map(|f| mountain_pass_upper_bound(&grid, f * lam1, mu, &eps).unwrap().gap())
            .collect();
        ok &= gaps[0] < gaps[1] && gaps[1] < gaps[2];
        parts.push(format!("gaps at 0.02/0.1/0.3 lambda1: {:.3e}, {:.3e}, {:.3e}", gaps[0], gaps[1], gaps[2]));
    }
    outcome(ok, parts.join("; "))
}

fn nonexistence(p512: &SolveReport, p1024: &SolveReport) -> Outcome {
    let grid = RadialBall::new(dim(4), 1.0, 256).unwrap();
    let eig = lambda1(&grid).unwrap();
    let phi = RadialPair::new(grid, eig.eigfun.clone(), eig.eigfun.clone()).unwrap();
    let obstruction = eigenfunction_obstruction(&phi, eig.value, &grid).unwrap();

    let b512 = p512.pohozaev.relative_balance;
    let b1024 = p1024.pohozaev.relative_balance;

    let d = dim(4);
    let mu = 0.5;
    let empty = roots_f_n(mu, d).unwrap().is_empty();
    let (pm1, pm3) = (d.p_minus_1(), d.p_minus_3());
    let mut min_val = f64::INFINITY;
    for i in 1..=100 {
        for j in 1..=100 {
            let (u, v) = (0.1 * i as f64, 0.1 * j as f64);
            min_val = min_val.min(pm1.pow(u) - pm3.pow(u) * v * v + mu * pm1.pow(v));
        }
    }
    outcome(
        obstruction < 0.0 && b512 <= 0.05 && b1024 * 2.0 <= b512 && empty && min_val > 0.0,
        format!(
            "(a) obstruction {obstruction:.4e} < 0; (b) Pohozaev balance {b512:.2e} at M=512 (0.05), {b1024:.2e} at M=1024, \
             improvement {:.2}x (2x); (c) roots at mu=0.5: {}, min of u^3 - u v^2 + mu v^3 on grid {min_val:.3e} > 0",
            b512 / b1024,
            if empty { "none" } else { "some" }
        ),
    )
}

fn seed_membership() -> Outcome {
    let grid = RadialBall::new(dim(4), 1.0, 512).unwrap();
    let eig = lambda1(&grid).unwrap();
    let seed = nehari_seed(&eig.eigfun, &grid, 0.5 * eig.value, 0.1).unwrap();
    let rep = evaluate(&seed, 0.5 * eig.value, 0.1);
    let e = (rep.g.0.abs() / rep.norms.dirichlet_u).max(rep.g.1.abs() / rep.norms.dirichlet_v);
    outcome(e < 1e-9, format!("max |G_i| / |grad|^2 = {e:.2e} (bound 1e-9)"))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let report = |label: &str, f: &mut dyn FnMut() -> Outcome| -> bool {
        let t = Instant::now();
        let o = f();
        println!(
            "{} {label}: {} [{:.2}s]",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            t.elapsed().as_secs_f64()
        );
        o.pass
    };

    let mut all = true;
    all &= report("1 exact levels N=4", &mut exact_levels_n4);
    all &= report("2 exact levels N=6", &mut exact_levels_n6);
    all &= report("3 threshold algebra N=4", &mut threshold_algebra_n4);
    all &= report("4 coupling switch N=5", &mut mu_star_n5);
    all &= report("5 instanton quadrature", &mut instanton_quadrature);
    all &= report("6 cutoff scaling", &mut cutoff_scaling);
    all &= report("7 projection properties", &mut projection_properties);
    all &= report("8 gradient correctness", &mut gradient_correctness);

    let mut solves: Vec<(usize, SolveReport)> = Vec::new();
    all &= report("9 ground-state solve N=4", &mut || {
        solves = [128, 256, 512].iter().map(|&m| (m, solve_n4(m, 0.5, 0.1).0)).collect();
        ground_state(&solves)
    });
    all &= report("10 mountain-pass upper bound", &mut mountain_pass);
    all &= report("11 nonexistence diagnostics", &mut || {
        let fine = solve_n4(1024, 0.5, 0.1).0;
        nonexistence(&solves[2].1, &fine)
    });
    all &= report("12 Nehari seed", &mut seed_membership);

    println!("total {:.2}s", start.elapsed().as_secs_f64());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
