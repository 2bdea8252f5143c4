use super::functional::{evaluate, norms};
use super::grid::{lambda1, RadialBall, RadialPair, Stencil};
use super::solve::first_eigenvalue_violation;
use crate::error::{Error, Result};
use crate::instanton::{Cutoff, CutoffInstanton, Instanton};
use crate::limit_algebra::{ground_level, sobolev_constant};
use crate::quadrature::sphere_area;
use crate::roots::golden_max;

/// Residuals of the two Pohozaev identities and of their combination
/// with the Nehari identities, in radial form on a ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PohozaevReport {
    pub identity_u: f64,
    pub identity_v: f64,
    /// `-λ‖u‖² + ½∫|∂u/∂n|² x·n + ∫|∂v/∂n|² x·n / (2(2*-1))`
    pub combined: f64,
    /// `∫_{∂B_R} |∂u/∂n|² x·n = ω_{N-1} R^N u'(R)²`
    pub boundary_u: f64,
    pub boundary_v: f64,
    /// `|combined|` relative to the larger of its two sides.
    pub relative_balance: f64,
}

/// `f'(R)` from the one-sided 3-point formula with `f(R) = 0`.
fn boundary_slope(f: &[f64], h: f64) -> f64 {
    let m = f.len();
    (f[m - 2] - 4.0 * f[m - 1]) / (2.0 * h)
}

/// Nodal `f'` by central differences; the first node uses the even
/// quadratic through the first two nodes.
fn nodal_slope(f: &[f64], h: f64) -> Vec<f64> {
    let m = f.len();
    (0..m)
        .map(|j| {
            if j == 0 {
                2.0 * (f[1] - f[0]) / (3.0 * h)
            } else {
                let right = if j + 1 < m { f[j + 1] } else { 0.0 };
                (right - f[j - 1]) / (2.0 * h)
            }
        })
        .collect()
}

pub fn pohozaev_report(pair: &RadialPair, lambda: f64, mu: f64) -> PohozaevReport {
    let grid = pair.grid;
    let dim = grid.dim;
    let nf = dim.nf();
    let p = dim.two_star().value();
    let pm1 = dim.p_minus_1();
    let h = grid.h();
    let st = Stencil::new(&grid);
    let nm = norms(pair, &st);

    let flux = sphere_area(dim.n()) * grid.radius.powi(dim.n() as i32);
    let boundary_u = flux * boundary_slope(&pair.u, h).powi(2);
    let boundary_v = flux * boundary_slope(&pair.v, h).powi(2);

    let dv = nodal_slope(&pair.v, h);
    let radii = grid.radii();
    // ∫ |u|^(2*-1) (x·∇v)
    let transport = st.integral((0..grid.nodes).map(|j| pm1.pow(pair.u[j].abs()) * radii[j] * dv[j]));

    let half = 0.5 * (nf - 2.0);
    let identity_u = 0.5 * boundary_u + half * nm.dirichlet_u
        - 0.5 * nf * lambda * nm.l2_u
        - nf / pm1.value() * nm.mixed_abs
        - transport / pm1.value();
    let identity_v = 0.5 * boundary_v + half * nm.dirichlet_v - nf * mu / p * nm.critical_v + transport;
    let interior = lambda * nm.l2_u;
    let boundary = 0.5 * boundary_u + 0.5 * boundary_v / pm1.value();
    let combined = boundary - interior;
    let scale = interior.abs().max(boundary);
    PohozaevReport {
        identity_u,
        identity_v,
        combined,
        boundary_u,
        boundary_v,
        relative_balance: if scale > 0.0 { combined.abs() / scale } else { 0.0 },
    }
}

/// `(λ₁ - λ)∫uφ₁ - ∫|u|^(2*-2) v φ₁`; vanishes on solutions, negative when a
/// nonnegative candidate with `λ ≥ λ₁` is tested.
pub fn eigenfunction_obstruction(pair: &RadialPair, lambda: f64, grid: &RadialBall) -> Result<f64> {
    if pair.grid != *grid {
        return Err(Error::InvalidArgument("pair lives on a different grid".into()));
    }
    let eig = lambda1(grid)?;
    let st = Stencil::new(grid);
    let pm2 = grid.dim.p_minus_2();
    let linear = st.integral(pair.u.iter().zip(&eig.eigfun).map(|(u, f)| u * f));
    let coupling = st.integral((0..grid.nodes).map(|j| pm2.pow(pair.u[j].abs()) * pair.v[j] * eig.eigfun[j]));
    Ok((eig.value - lambda) * linear - coupling)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MountainPassBound {
    /// Smallest fiber maximum over the tested scales.
    pub value: f64,
    pub best_epsilon: f64,
    /// `(ε, max_t J(t k χU_ε, t l χU_ε))` for each tested scale.
    pub per_epsilon: Vec<(f64, f64)>,
    /// Limit ground level `A`.
    pub level: f64,
}

impl MountainPassBound {
    pub fn gap(&self) -> f64 {
        self.level - self.value
    }
}

/// `max_t J(t w)` by golden-section search after bracketing a sign change.
pub fn fiber_max(pair: &RadialPair, lambda: f64, mu: f64) -> f64 {
    let rep = evaluate(pair, lambda, mu);
    let dim = pair.grid.dim;
    let p = dim.two_star().value();
    let q = rep.norms.quadratic(lambda, dim);
    let nonlinear = rep.norms.coupling_mass(mu, dim, super::functional::Convention::Signed) / p;
    // J(tw) = t²Q/2 - t^(2*) P/(2*-1)
    let fiber = |t: f64| 0.5 * t * t * q - t.powf(p) * nonlinear / (p - 1.0);
    let mut b = 1.0;
    while fiber(b) > 0.0 && b < 1e12 {
        b *= 2.0;
    }
    golden_max(fiber, 0.0, b, 1e-12 * b).1
}

/// Upper bound for the ground level on the ball from cutoff instanton pairs
/// `(k χU_ε, l χU_ε)`, with `χ` cut off between `R/2` and `R`.
pub fn mountain_pass_upper_bound(
    grid: &RadialBall,
    lambda: f64,
    mu: f64,
    eps_list: &[f64],
) -> Result<MountainPassBound> {
    if eps_list.is_empty() {
        return Err(Error::InvalidArgument("need at least one concentration scale".into()));
    }
    let lam1 = lambda1(grid)?.value;
    if lambda >= lam1 {
        return Err(Error::Regime(first_eigenvalue_violation(lambda, lam1)));
    }
    let dim = grid.dim;
    let report = ground_level(mu, dim, sobolev_constant(dim.n())?)?;
    let (Some(level), Some((k, l))) = (report.level, report.minimizer_scalings()) else {
        return Err(Error::Regime(format!(
            "mu = {mu} admits no limit ground state for N = {dim}"
        )));
    };
    let cutoff = Cutoff::new(0.5 * grid.radius, grid.radius)?;
    let per_epsilon = eps_list
        .iter()
        .map(|&eps| {
            let ci = CutoffInstanton {
                inst: Instanton::new(dim, eps)?,
                cutoff,
            };
            let pair = RadialPair::from_fn(*grid, |r| k * ci.value(r), |r| l * ci.value(r));
            Ok((eps, fiber_max(&pair, lambda, mu)))
        })
        .collect::<Result<Vec<_>>>()?;
    let &(best_epsilon, value) = per_epsilon
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty");
    Ok(MountainPassBound {
        value,
        best_epsilon,
        per_epsilon,
        level,
    })
}
