//! Invariant suites behind `nehari verify`.

use nehari_core::instanton::{cutoff_l2_scaling, limit_energy, Cutoff, Instanton};
use nehari_core::limit_algebra::{
    coupling_solutions, curve_point, f_n, ground_level, minimize_psi, mu_existence_threshold, mu_star,
    psi_boundary_value, psi_n, roots_f_n, semitrivial_level, sobolev_constant,
};
use nehari_core::nehari_solver::{
    evaluate, gradient_jplus, ground_state_solve, lambda1, nehari_project, nehari_seed, RadialBall, RadialPair,
    SolveOptions,
};
use nehari_core::quadrature::QuadratureScheme;
use nehari_core::Dimension;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::commands::{num, refinement_delta};

#[derive(Debug, Clone, Copy, PartialEq)]
enum Relation {
    AtMost,
    AtLeast,
}

#[derive(Debug, Clone)]
pub struct Check {
    suite: &'static str,
    name: &'static str,
    measured: f64,
    relation: Relation,
    bound: f64,
}

impl Check {
    fn at_most(suite: &'static str, name: &'static str, measured: f64, bound: f64) -> Self {
        Self { suite, name, measured, relation: Relation::AtMost, bound }
    }

    fn at_least(suite: &'static str, name: &'static str, measured: f64, bound: f64) -> Self {
        Self { suite, name, measured, relation: Relation::AtLeast, bound }
    }

    pub fn pass(&self) -> bool {
        match self.relation {
            Relation::AtMost => self.measured <= self.bound,
            Relation::AtLeast => self.measured >= self.bound,
        }
    }
}

pub fn report(checks: &[Check]) -> String {
    let mut out = String::from("suite,invariant,measured,relation,bound,status\n");
    for c in checks {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            c.suite,
            c.name,
            num(c.measured),
            match c.relation {
                Relation::AtMost => "<=",
                Relation::AtLeast => ">=",
            },
            num(c.bound),
            if c.pass() { "PASS" } else { "FAIL" }
        ));
    }
    out
}

fn dim(n: u32) -> Dimension {
    Dimension::new(n).expect("dimension >= 4")
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// `mu` values spread over the regime of `N` that has coupling roots.
fn mu_grid(n: u32) -> Vec<f64> {
    let top = mu_existence_threshold(dim(n));
    let top = if top.is_finite() { top } else { 10.0 };
    (0..=20).map(|i| top * i as f64 / 20.0).collect()
}

fn limit_algebra_suite(s_factor: f64) -> Vec<Check> {
    const SUITE: &str = "limit_algebra";
    let mut kl: f64 = 0.0;
    let mut system: f64 = 0.0;
    for n in 4..10 {
        for mu in mu_grid(n) {
            for root in roots_f_n(mu, dim(n)).unwrap_or_default() {
                let (a, b) = root.residuals(mu, dim(n));
                kl = kl.max(a.abs());
                system = system.max(b.abs());
            }
        }
    }

    let mut count_mismatch = 0.0;
    for n in [4, 5] {
        let d = dim(n);
        let mu_n = mu_existence_threshold(d);
        let expect = [(0.0, 1), (0.5 * mu_n, 2), (mu_n, 1), (1.5 * mu_n, 0)];
        for (mu, count) in expect {
            if roots_f_n(mu, d).map(|r| r.len()).unwrap_or(usize::MAX) != count {
                count_mismatch += 1.0;
            }
        }
    }

    // critical points of psi_4 located by centered differences
    let (d4, mu) = (dim(4), 0.1);
    let dpsi = |m: f64| (psi_n(m + 1e-6, mu, d4).unwrap() - psi_n(m - 1e-6, mu, d4).unwrap()) / 2e-6;
    let mut crit_f: f64 = 0.0;
    for i in 1..3000 {
        let (a, b) = (i as f64 * 5e-4, (i + 1) as f64 * 5e-4);
        if dpsi(a).signum() != dpsi(b).signum() {
            let (mut lo, mut hi) = (a, b);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if dpsi(mid).signum() == dpsi(lo).signum() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            crit_f = crit_f.max(f_n(0.5 * (lo + hi), mu, d4).unwrap().abs());
        }
    }

    let mut order_mismatch = 0.0;
    let mut at_switch: f64 = 0.0;
    for n in [4, 5] {
        let d = dim(n);
        let s = sobolev_constant(n).unwrap();
        let star = mu_star(d).unwrap();
        let mu_n = mu_existence_threshold(d);
        let nontrivial = |mu: f64| {
            let top = *roots_f_n(mu, d).unwrap().last().unwrap();
            top.level_factor(d) / d.nf() * d.half_n().pow(s)
        };
        for f in [0.1, 0.5, 0.9] {
            let below = f * star;
            let above = star + f * (mu_n - star);
            if nontrivial(below) >= semitrivial_level(below, d, s).unwrap() {
                order_mismatch += 1.0;
            }
            if nontrivial(above) <= semitrivial_level(above, d, s).unwrap() {
                order_mismatch += 1.0;
            }
        }
        at_switch = at_switch.max(rel(nontrivial(star), semitrivial_level(star, d, s).unwrap()));
    }

    let mut curve: f64 = 0.0;
    for n in 4..8 {
        let d = dim(n);
        for i in 0..40 {
            let m = 10f64.powf(-3.0 + 4.0 * i as f64 / 39.0);
            let (k, l) = curve_point(m, 0.1, d);
            curve = curve.max(rel(psi_n(m, 0.1, d).unwrap(), k * k + l * l / d.p_minus_1().value()));
        }
    }

    let mut six: f64 = 0.0;
    for i in 0..=20 {
        let mu = i as f64 / 20.0;
        match coupling_solutions(mu, dim(6)).unwrap().as_slice() {
            [(k, l)] => six = six.max((k - (1.0 - mu).sqrt()).abs()).max((l - 1.0).abs()),
            _ => six = f64::INFINITY,
        }
    }

    let d5 = dim(5);
    let star5 = mu_star(d5).unwrap();
    let crossing = (minimize_psi(star5, d5).unwrap().interior.unwrap().1 - psi_boundary_value(star5, d5)).abs();

    // closed-form levels against quadrature of the instanton energy
    let scheme = QuadratureScheme::default();
    let mut consistency: f64 = 0.0;
    for (n, mus) in [(4, [0.0, 0.1, 0.3]), (5, [0.0, 0.2, 0.6]), (6, [0.0, 0.5, 1.0]), (7, [0.0, 1.0, 5.0])] {
        let s = s_factor * sobolev_constant(n).unwrap();
        let inst = Instanton::new(dim(n), 1.0).unwrap();
        for mu in mus {
            let rep = ground_level(mu, dim(n), s).unwrap();
            if let (Some(a), Some((k, l))) = (rep.level, rep.minimizer_scalings()) {
                let e = limit_energy(k, l, mu, &inst, &scheme).unwrap_or(f64::NAN);
                consistency = consistency.max(rel(a, e));
            }
        }
    }

    vec![
        Check::at_most(SUITE, "coupling_kl_residual", kl, 1e-12),
        Check::at_most(SUITE, "coupling_system_residual", system, 1e-10),
        Check::at_most(SUITE, "root_count_mismatches", count_mismatch, 0.0),
        Check::at_most(SUITE, "psi_critical_points_solve_f4", crit_f, 1e-6),
        Check::at_most(SUITE, "level_order_mismatches", order_mismatch, 0.0),
        Check::at_most(SUITE, "level_equality_at_switch", at_switch, 1e-8),
        Check::at_most(SUITE, "psi_along_curve", curve, 1e-12),
        Check::at_most(SUITE, "n6_closed_form_coupling", six, 1e-12),
        Check::at_most(SUITE, "mu_star_crossing_residual_n5", crossing, 1e-10),
        Check::at_most(SUITE, "level_consistency_with_quadrature", consistency, 1e-7),
    ]
}

fn instanton_suite(s_factor: f64) -> Vec<Check> {
    const SUITE: &str = "instanton";
    let scheme = QuadratureScheme::default();
    let mut norm_err: f64 = 0.0;
    let mut scale: f64 = 0.0;
    let mut refine: f64 = 0.0;
    let mut pde: f64 = 0.0;
    for n in 4..8 {
        let d = dim(n);
        let s_half = d.half_n().pow(s_factor * sobolev_constant(n).unwrap());
        let base = Instanton::new(d, 1.0).unwrap();
        let (g1, c1) = (base.dirichlet_norm(&scheme).unwrap(), base.critical_norm(&scheme).unwrap());
        for eps in [0.1, 1.0, 10.0] {
            let u = Instanton::new(d, eps).unwrap();
            let g = u.dirichlet_norm(&scheme).unwrap_or(f64::NAN);
            let c = u.critical_norm(&scheme).unwrap_or(f64::NAN);
            norm_err = norm_err.max(rel(g, s_half)).max(rel(c, s_half));
            scale = scale.max(rel(g, g1)).max(rel(c, c1));
            refine = refine.max(refinement_delta(&u, &scheme));
            for i in 0..200 {
                let r = 20.0 * eps * i as f64 / 199.0;
                let res = u.radial_laplacian(r) + d.p_minus_1().pow(u.value(r));
                let w = (eps * eps + r * r).powf((d.nf() + 2.0) / 2.0) / eps.powf((d.nf() - 2.0) / 2.0).max(1.0);
                pde = pde.max(res.abs() * w);
            }
        }
    }

    let chi = Cutoff::new(0.5, 1.0).unwrap();
    let jump = [0.5, 1.0]
        .iter()
        .map(|&x| {
            let d = 1e-12;
            (chi.value(x - d) - chi.value(x + d)).abs().max((chi.derivative(x - d) - chi.derivative(x + d)).abs())
        })
        .fold(0.0, f64::max);

    let eps: Vec<f64> = (3..=10).map(|k| 2f64.powi(-k)).collect();
    let exponent_dev = [5, 6, 7]
        .iter()
        .map(|&n| {
            cutoff_l2_scaling(dim(n), &eps, 0.5, 1.0, &scheme).map_or(f64::INFINITY, |f| (f.exponent - 2.0).abs())
        })
        .fold(0.0, f64::max);
    let drop = cutoff_l2_scaling(dim(4), &eps, 0.5, 1.0, &scheme).map_or(0.0, |f| f.residual / f.log_residual);

    vec![
        Check::at_most(SUITE, "norms_vs_sobolev_constant", norm_err, 1e-8),
        Check::at_most(SUITE, "scale_invariance", scale, 1e-10),
        Check::at_most(SUITE, "quadrature_self_consistency", refine, 1e-9),
        Check::at_most(SUITE, "pde_residual_normalized", pde, 1e-6),
        Check::at_most(SUITE, "cutoff_c1_jump", jump, 1e-10),
        Check::at_most(SUITE, "cutoff_exponent_deviation_n5_to_n7", exponent_dev, 0.1),
        Check::at_least(SUITE, "cutoff_log_factor_residual_drop_n4", drop, 10.0),
    ]
}

fn random_pair(rng: &mut ChaCha8Rng, grid: &RadialBall) -> RadialPair {
    let mut profile = || -> Vec<f64> {
        let a: Vec<f64> = (0..5).map(|k| rng.gen_range(-1.0..1.0) / (1.0 + k as f64)).collect();
        let shift = rng.gen_range(0.5..1.5);
        grid.radii()
            .iter()
            .map(|&r| {
                let x = r / grid.radius;
                shift * (0.5 * std::f64::consts::PI * x).cos()
                    + a.iter()
                        .enumerate()
                        .map(|(k, c)| c * ((k as f64 + 0.5) * std::f64::consts::PI * x).cos())
                        .sum::<f64>()
            })
            .collect()
    };
    let u = profile();
    let v = profile();
    RadialPair::new(*grid, u, v).expect("finite random profiles")
}

fn solver_suite(seed: u64, s_factor: f64) -> Vec<Check> {
    const SUITE: &str = "nehari_solver";
    let d = dim(4);
    let mu = 0.1;
    let grid = RadialBall::new(d, 1.0, 256).unwrap();
    let eig = lambda1(&grid).unwrap();
    let lambda = 0.5 * eig.value;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = d.two_star().value();

    let (mut idem, mut h_res, mut homog, mut grad): (f64, f64, f64, f64) = (0.0, 0.0, 0.0, 0.0);
    let mut tested = 0;
    while tested < 20 {
        let pair = random_pair(&mut rng, &grid);
        let rep = evaluate(&pair, lambda, mu);
        if !rep.admissible {
            continue;
        }
        tested += 1;
        let (_, proj) = nehari_project(&pair, lambda, mu).unwrap();
        let pr = evaluate(&proj, lambda, mu);
        h_res = h_res.max(pr.h.abs() / pr.norms.quadratic(lambda, d));
        idem = idem.max((nehari_project(&proj, lambda, mu).unwrap().0 - 1.0).abs());
        let q = rep.norms.quadratic(lambda, d);
        let phi = rep.norms.coupling_mass(mu, d, nehari_core::nehari_solver::Convention::Signed);
        for t in [0.5, 1.0, 2.0] {
            let jt = evaluate(&pair.scaled(t), lambda, mu).j;
            let two_term = 0.5 * t * t * q - t.powf(p) * phi / (p * (p - 1.0));
            homog = homog.max((jt - two_term).abs() / jt.abs().max(q * t * t));
        }
        let dir = random_pair(&mut rng, &grid);
        let analytic = gradient_jplus(&pair, lambda, mu).dot(&dir);
        let step = 1e-6;
        let jp = |s: f64| evaluate(&pair.axpy(s, &dir), lambda, mu).j_plus;
        grad = grad.max(rel(analytic, (jp(step) - jp(-step)) / (2.0 * step)));
    }

    let seed_pair = nehari_seed(&eig.eigfun, &grid, lambda, mu).unwrap();
    let sr = evaluate(&seed_pair, lambda, mu);
    let inclusion = (sr.g.0.abs() / sr.norms.dirichlet_u)
        .max(sr.g.1.abs() / sr.norms.dirichlet_v)
        .max(sr.h.abs() / sr.norms.dirichlet_u);

    let opts = SolveOptions { seed, ..SolveOptions::default() };
    let solves: Vec<_> = [128usize, 256, 512]
        .par_iter()
        .map(|&m| {
            let g = RadialBall::new(d, 1.0, m).unwrap();
            let lam = 0.5 * lambda1(&g).unwrap().value;
            ground_state_solve(&g, lam, mu, &opts)
        })
        .collect();
    let s = s_factor * sobolev_constant(4).unwrap();
    let a = ground_level(mu, d, s).unwrap().level.unwrap();
    let mut checks = vec![
        Check::at_most(SUITE, "projection_residual", h_res, 1e-10),
        Check::at_most(SUITE, "projection_idempotence", idem, 1e-10),
        Check::at_most(SUITE, "fiber_homogeneity", homog, 1e-12),
        Check::at_most(SUITE, "gradient_consistency", grad, 1e-6),
        Check::at_most(SUITE, "seed_on_nehari_set", inclusion, 1e-9),
    ];
    match solves.iter().map(|r| r.as_ref().ok()).collect::<Option<Vec<_>>>() {
        Some(r) => {
            let fine = r[2];
            let ratio = (r[0].b_num - r[1].b_num) / (r[1].b_num - r[2].b_num);
            let min = fine.pair.u.iter().chain(&fine.pair.v).cloned().fold(f64::INFINITY, f64::min);
            checks.extend([
                Check::at_most(SUITE, "el_residual", fine.el_residual, 1e-8),
                Check::at_most(SUITE, "h_residual", fine.h_residual, 1e-9),
                Check::at_least(SUITE, "grid_convergence_gap_ratio", ratio, 3.0),
                Check::at_least(SUITE, "min_interior_value", min, f64::MIN_POSITIVE),
                Check::at_least(SUITE, "level_over_S_half_N", fine.b_num / (s * s), 1e-6),
                Check::at_least(SUITE, "relative_gap_below_limit_level", (a - fine.b_num) / a, 0.01),
                Check::at_most(SUITE, "pohozaev_relative_balance", fine.pohozaev.relative_balance, 0.05),
            ]);
        }
        None => checks.push(Check::at_most(SUITE, "solver_failures", 1.0, 0.0)),
    }
    checks
}

/// Every suite, in a fixed order. `s_perturbation` scales the Sobolev
/// constant fed to the level checks.
pub fn run(seed: u64, s_perturbation: f64) -> Vec<Check> {
    let factor = 1.0 + s_perturbation;
    let suites: Vec<Vec<Check>> = (0..3)
        .into_par_iter()
        .map(|i| match i {
            0 => limit_algebra_suite(factor),
            1 => instanton_suite(factor),
            _ => solver_suite(seed, factor),
        })
        .collect();
    suites.concat()
}
