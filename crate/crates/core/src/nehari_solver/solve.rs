use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::diagnostics::{pohozaev_report, PohozaevReport};
use super::functional::{fiber_maximizer, gradient_with, norms, report_from, Convention, Norms};
use super::grid::{lambda1, RadialBall, RadialPair, Stencil};
use super::newton;
use crate::dimension::Rational;
use crate::error::{Error, Result};
use crate::instanton::{Cutoff, CutoffInstanton, Instanton};
use crate::limit_algebra::{ground_level, in_existence_interval, shifted_roots, sobolev_constant, thresholds};

/// A pair on the Nehari set `𝒩` built from one positive profile `u`:
/// `((m σ̄)^(1/(2*-2)) u, (m^(3-2*) σ̄)^(1/(2*-2)) u)` where `m` is the
/// largest zero of `m^(2*-1) - σ m^(2*-3) + μ`, with
/// `σ = ‖∇u‖²/(‖∇u‖² - λ‖u‖²)` and `σ̄ = (‖∇u‖² - λ‖u‖²)/‖u‖_{2*}^{2*}`.
pub fn nehari_seed(u_profile: &[f64], grid: &RadialBall, lambda: f64, mu: f64) -> Result<RadialPair> {
    if u_profile.len() != grid.nodes {
        return Err(Error::InvalidArgument(format!(
            "profile has {} values, grid has {} nodes",
            u_profile.len(),
            grid.nodes
        )));
    }
    if u_profile.iter().any(|&x| !(x > 0.0) || !x.is_finite()) {
        return Err(Error::InvalidArgument("seed profile must be positive at every interior node".into()));
    }
    if mu < 0.0 {
        return Err(Error::InvalidArgument(format!("mu must be >= 0, got {mu}")));
    }
    let lam1 = lambda1(grid)?.value;
    if lambda >= lam1 {
        return Err(Error::Regime(first_eigenvalue_violation(lambda, lam1)));
    }
    let dim = grid.dim;
    let st = Stencil::new(grid);
    let p = dim.two_star();
    let grad = st.dirichlet(u_profile);
    let l2 = st.integral(u_profile.iter().map(|x| x * x));
    let crit = st.integral(u_profile.iter().map(|&x| p.pow(x)));
    let coercive = grad - lambda * l2;
    let sigma = grad / coercive;
    let sigma_bar = coercive / crit;
    let Some(&m) = shifted_roots(sigma, mu, dim)?.last() else {
        return Err(Error::Regime(format!(
            "mu = {mu} is too large: m^(2*-1) - {sigma} m^(2*-3) + mu has no positive zero"
        )));
    };
    let inv = 1.0 / dim.p_minus_2().value();
    let p3 = dim.p_minus_3();
    let k = (m * sigma_bar).powf(inv);
    let l = (Rational::new(-p3.num(), p3.den()).pow(m) * sigma_bar).powf(inv);
    Ok(RadialPair {
        u: u_profile.iter().map(|x| k * x).collect(),
        v: u_profile.iter().map(|x| l * x).collect(),
        grid: *grid,
    })
}

pub(crate) fn first_eigenvalue_violation(lambda: f64, lam1: f64) -> String {
    format!(
        "lambda = {lambda} must lie strictly below the first Dirichlet eigenvalue lambda_1 = {lam1}; \
         positive solutions cannot exist for lambda >= lambda_1"
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveOptions {
    /// Bound on the max-norm of the nodal Euler-Lagrange residual.
    pub tol: f64,
    pub max_iter: usize,
    /// Clamp negative parts to zero every this many iterations.
    pub clamp_every: usize,
    pub armijo_c: f64,
    pub shrink: f64,
    /// Admissibility denominators below this reject the step.
    pub degeneracy_floor: f64,
    /// Relative size of the random perturbation applied after a rejected step.
    pub perturbation: f64,
    pub max_restarts: usize,
    /// Finish with damped Newton steps once the energy stops resolving
    /// descent progress.
    pub newton_polish: bool,
    pub seed: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 20_000,
            clamp_every: 25,
            armijo_c: 1e-4,
            shrink: 0.5,
            degeneracy_floor: 1e-14,
            perturbation: 1e-6,
            max_restarts: 20,
            newton_polish: true,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub b_num: f64,
    pub pair: RadialPair,
    pub el_residual: f64,
    /// `|H| / (‖∇u‖² + ‖∇v‖²/(2*-1))`
    pub h_residual: f64,
    pub positive: bool,
    pub iterations: usize,
    /// Newton steps taken after the descent phase.
    pub newton_steps: usize,
    pub restarts: usize,
    pub lambda: f64,
    pub lambda1: f64,
    pub mu: f64,
    pub pohozaev: PohozaevReport,
}

/// Current iterate on `𝒩′` with its cached integrals.
struct State {
    pair: RadialPair,
    norms: Norms,
    energy: f64,
}

struct Problem<'a> {
    st: &'a Stencil,
    lambda: f64,
    mu: f64,
    floor: f64,
}

enum Projection {
    Ok(State),
    Degenerate,
}

impl Problem<'_> {
    fn project(&self, pair: RadialPair) -> Result<Projection> {
        let dim = pair.grid.dim;
        let nm = norms(&pair, self.st);
        let pm1 = dim.p_minus_1().value();
        let phi = nm.coupling_mass(self.mu, dim, Convention::PositivePart);
        if !(phi / pm1 > self.floor) {
            return Ok(Projection::Degenerate);
        }
        let t = fiber_maximizer(&nm, self.lambda, self.mu, dim, Convention::PositivePart)?;
        if !t.is_finite() {
            return Ok(Projection::Degenerate);
        }
        let pair = pair.scaled(t);
        let norms = norms(&pair, self.st);
        let energy = norms.energy(self.lambda, self.mu, dim, Convention::PositivePart);
        Ok(Projection::Ok(State { pair, norms, energy }))
    }

    /// Sobolev-preconditioned direction: `(-Δ - λ)⁻¹ g_u`, `(2*-1)(-Δ)⁻¹ g_v`.
    fn precondition(&self, g: &RadialPair) -> RadialPair {
        let pm1 = g.grid.dim.p_minus_1().value();
        let wu: Vec<f64> = g.u.iter().zip(&self.st.w).map(|(a, w)| a * w).collect();
        let wv: Vec<f64> = g.v.iter().zip(&self.st.w).map(|(a, w)| a * w).collect();
        RadialPair {
            u: self.st.solve_shifted(1.0, -self.lambda, &wu),
            v: self.st.solve_shifted(1.0 / pm1, 0.0, &wv),
            grid: g.grid,
        }
    }

    /// Damped Newton on the Euler-Lagrange system from `state`. Kept only if
    /// it stays positive, near the same energy, and lowers the residual.
    fn polish(&self, state: &State, residual: f64, tol: f64) -> Result<Option<(State, f64, usize)>> {
        const MAX_STEPS: usize = 30;
        let (lambda, mu) = (self.lambda, self.mu);
        let mut pair = state.pair.clone();
        let mut merit = newton::merit(&pair, lambda, mu, self.st);
        let mut steps = 0;
        while steps < MAX_STEPS {
            let Some(delta) = newton::increment(&pair, lambda, mu, self.st) else {
                break;
            };
            let mut t = 1.0;
            let mut next = None;
            for _ in 0..12 {
                let cand = pair.axpy(t, &delta);
                let m = newton::merit(&cand, lambda, mu, self.st);
                if m < merit {
                    next = Some((cand, m));
                    break;
                }
                t *= 0.5;
            }
            let Some((cand, m)) = next else { break };
            pair = cand;
            merit = m;
            steps += 1;
            if gradient_with(&pair, lambda, mu, self.st).max_abs() < 0.1 * tol {
                break;
            }
        }
        if steps == 0 || pair.u.iter().chain(&pair.v).any(|&x| !(x > 0.0)) {
            return Ok(None);
        }
        let Projection::Ok(next) = self.project(pair)? else {
            return Ok(None);
        };
        let res = gradient_with(&next.pair, lambda, mu, self.st).max_abs();
        let same_basin = (next.energy - state.energy).abs() <= 1e-6 * state.energy.abs();
        Ok((same_basin && res < residual).then_some((next, res, steps)))
    }

    fn weighted_dot(&self, a: &RadialPair, b: &RadialPair) -> f64 {
        (0..a.u.len())
            .map(|j| self.st.w[j] * (a.u[j] * b.u[j] + a.v[j] * b.v[j]))
            .sum()
    }
}

/// Size of the nodal residual that rounding alone produces: the stencil
/// differences values of size `‖w‖∞` and divides by `h²`.
fn rounding_floor(pair: &RadialPair) -> f64 {
    let h = pair.grid.h();
    32.0 * f64::EPSILON * pair.max_abs() / (h * h)
}

fn perturb(pair: &RadialPair, rel: f64, rng: &mut ChaCha8Rng) -> RadialPair {
    let mut jitter = |x: &f64| x * (1.0 + rel * rng.gen_range(-1.0..1.0));
    RadialPair {
        u: pair.u.iter().map(&mut jitter).collect(),
        v: pair.v.iter().map(&mut jitter).collect(),
        grid: pair.grid,
    }
}

/// Seeds tried in order: the Nehari seed on the principal eigenfunction,
/// then cutoff instanton pairs at decreasing concentration scales.
fn seeds(grid: &RadialBall, lambda: f64, mu: f64, eig: &[f64]) -> Vec<RadialPair> {
    let mut out = Vec::new();
    if let Ok(p) = nehari_seed(eig, grid, lambda, mu) {
        out.push(p);
    }
    let dim = grid.dim;
    let scalings = sobolev_constant(dim.n())
        .and_then(|s| ground_level(mu, dim, s))
        .ok()
        .and_then(|rep| rep.minimizer_scalings());
    if let (Some((k, l)), Ok(cutoff)) = (scalings, Cutoff::new(0.5 * grid.radius, grid.radius)) {
        for frac in [0.2, 0.1, 0.05] {
            if let Ok(inst) = Instanton::new(dim, frac * grid.radius) {
                let ci = CutoffInstanton { inst, cutoff };
                out.push(RadialPair::from_fn(*grid, |r| k * ci.value(r), |r| l * ci.value(r)));
            }
        }
    }
    out
}

/// Minimize `J₊` over `𝒩′` by preconditioned projected descent.
pub fn ground_state_solve(grid: &RadialBall, lambda: f64, mu: f64, opts: &SolveOptions) -> Result<SolveReport> {
    let dim = grid.dim;
    let eig = lambda1(grid)?;
    if lambda >= eig.value {
        return Err(Error::Regime(first_eigenvalue_violation(lambda, eig.value)));
    }
    if !(lambda > 0.0) {
        return Err(Error::Regime(format!(
            "lambda = {lambda} must be positive: on star-shaped domains the Pohozaev identity \
             excludes positive solutions for lambda <= 0"
        )));
    }
    if !in_existence_interval(mu, dim) {
        return Err(Error::Regime(format!(
            "mu = {mu} lies outside the existence interval I_N = [0, {}] for N = {}",
            thresholds(dim).interval_upper,
            dim
        )));
    }
    let st = Stencil::new(grid);
    let prob = Problem {
        st: &st,
        lambda,
        mu,
        floor: opts.degeneracy_floor,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    let mut state = None;
    for seed in seeds(grid, lambda, mu, &eig.eigfun) {
        if let Projection::Ok(s) = prob.project(seed)? {
            state = Some(s);
            break;
        }
    }
    let Some(mut state) = state else {
        return Err(Error::Regime("no admissible seed pair could be constructed".into()));
    };

    let pm1 = dim.p_minus_1().value();
    let noise_floor = 16.0 * f64::EPSILON;
    let mut alpha: f64 = 1.0;
    let mut restarts = 0;
    let mut last_change = f64::INFINITY;
    let mut grad = gradient_with(&state.pair, lambda, mu, &st);
    let mut residual = grad.max_abs();
    let mut iterations = 0;
    let mut newton_steps = 0;
    let mut last_polish: Option<usize> = None;
    let mut converged = false;

    while iterations < opts.max_iter {
        if residual < opts.tol && last_change <= opts.tol.powi(2).max(noise_floor) {
            converged = true;
            break;
        }
        iterations += 1;
        let dir = prob.precondition(&grad);
        let slope = prob.weighted_dot(&grad, &dir);
        let clamp = iterations % opts.clamp_every == 0;
        let mut step = alpha.min(1.0) * 2.0;
        let mut accepted = None;
        let mut degenerate = false;
        let mut unresolved = false;
        while step > 1e-16 {
            let mut cand = state.pair.axpy(-step, &dir);
            if clamp {
                cand = cand.positive_part();
            }
            match prob.project(cand)? {
                Projection::Degenerate => {
                    degenerate = true;
                    break;
                }
                Projection::Ok(next) => {
                    let decrease = state.energy - next.energy;
                    let required = opts.armijo_c * step * slope;
                    if required > noise_floor * state.energy.abs() {
                        if decrease >= required {
                            accepted = Some(next);
                            break;
                        }
                    } else {
                        // the Armijo test is below the rounding level of J:
                        // accept on residual decrease instead
                        unresolved = true;
                        let g_next = gradient_with(&next.pair, lambda, mu, &st);
                        if g_next.max_abs() < residual {
                            accepted = Some(next);
                            break;
                        }
                    }
                }
            }
            step *= opts.shrink;
        }
        match accepted {
            Some(next) => {
                last_change = ((state.energy - next.energy) / next.energy).abs();
                state = next;
                alpha = step;
                grad = gradient_with(&state.pair, lambda, mu, &st);
                residual = grad.max_abs();
            }
            None => {
                if !degenerate && residual < opts.tol.max(rounding_floor(&state.pair)) {
                    // no representable descent left at a converged point
                    converged = true;
                    break;
                }
                restarts += 1;
                if restarts > opts.max_restarts {
                    return Err(Error::Stagnation(iterations));
                }
                let jittered = perturb(&state.pair, opts.perturbation, &mut rng);
                if let Projection::Ok(s) = prob.project(jittered)? {
                    state = s;
                }
                grad = gradient_with(&state.pair, lambda, mu, &st);
                residual = grad.max_abs();
                alpha = 1.0;
                last_change = f64::INFINITY;
            }
        }
        // try Newton once the energy stops resolving progress, and
        // periodically when descent is slow
        let since = iterations - last_polish.unwrap_or(0);
        let polish_due = (unresolved && since >= 50) || since >= 200;
        if opts.newton_polish && residual >= opts.tol && polish_due {
            last_polish = Some(iterations);
            if let Some((next, res, steps)) = prob.polish(&state, residual, opts.tol)? {
                last_change = ((state.energy - next.energy) / next.energy).abs();
                state = next;
                residual = res;
                grad = gradient_with(&state.pair, lambda, mu, &st);
                newton_steps += steps;
            }
        }
        if !state.pair.max_abs().is_finite() || state.norms.dirichlet_u + state.norms.dirichlet_v == 0.0 {
            return Err(Error::Regime("iterates collapsed to the zero pair".into()));
        }
    }
    if !converged {
        return Err(Error::Stagnation(iterations));
    }

    let rep = report_from(&state.norms, lambda, mu, dim);
    let scale = state.norms.dirichlet_u + state.norms.dirichlet_v / pm1;
    let positive = state.pair.u.iter().chain(&state.pair.v).all(|&x| x > 0.0);
    let pohozaev = pohozaev_report(&state.pair, lambda, mu);
    Ok(SolveReport {
        b_num: rep.j,
        el_residual: residual,
        h_residual: rep.h.abs() / scale,
        positive,
        iterations,
        newton_steps,
        restarts,
        lambda,
        lambda1: eig.value,
        mu,
        pohozaev,
        pair: state.pair,
    })
}
