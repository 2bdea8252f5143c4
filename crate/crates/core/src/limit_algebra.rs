//! Algebra of the limit problem on ℝ^N.
//!
//! Ground states of the limit system are sought as `(k U, l U)` with `U` an
//! Aubin-Talenti instanton. Both Nehari constraints then collapse to the
//! scalar system
//!
//! ```text
//! k^(2*-3) l = 1,    mu l^(2*-1) + k^(2*-1) = l,
//! ```
//!
//! whose solutions are parametrized by the positive zeros `m` of
//! `f_N(m) = m^(2*-1) - m^(2*-3) + mu` through `k = m^(1/(2*-2))`,
//! `l = m^((3-2*)/(2*-2))`. Comparing the nontrivial level with the
//! semitrivial one `(0, mu^(-1/(2*-2)) U)` reduces to minimizing
//! `psi_N` over `m > 0` against its `m -> 0+` limit.

use std::f64::consts::PI;
use std::fmt;
use std::sync::OnceLock;

use statrs::function::gamma::ln_gamma;

use crate::dimension::{Dimension, Rational};
use crate::error::{Error, Result};
use crate::roots::bisect_newton;

/// `|mu - mu_N|` below this is treated as the tangential (double-root) case.
pub const DOUBLE_ROOT_TOL: f64 = 1e-12;

/// Absolute tolerance of the outer bisection defining `mu*` for N = 5.
pub const MU_STAR_TOL: f64 = 1e-10;

/// `2* = 2N/(N-2)` as an exact fraction.
pub fn two_star(n: u32) -> Result<Rational> {
    Ok(Dimension::new(n)?.two_star())
}

/// Which zero of `f_N` a [`CouplingRoot`] came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Lower,
    Upper,
    Unique,
    Double,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Branch::Lower => "lower",
            Branch::Upper => "upper",
            Branch::Unique => "unique",
            Branch::Double => "double",
        };
        f.write_str(s)
    }
}

/// A zero `m` of `f_N` and the coupling `(k, l)` it induces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingRoot {
    pub m: f64,
    pub k: f64,
    pub l: f64,
    pub branch: Branch,
}

impl CouplingRoot {
    fn from_m(m: f64, branch: Branch, dim: Dimension) -> Self {
        Self {
            m,
            k: dim.k_exponent().pow(m),
            l: dim.l_exponent().pow(m),
            branch,
        }
    }

    /// Residuals `(k^(2*-3) l - 1, mu l^(2*-1) + k^(2*-1) - l)`.
    pub fn residuals(&self, mu: f64, dim: Dimension) -> (f64, f64) {
        let r1 = dim.p_minus_3().pow(self.k) * self.l - 1.0;
        let r2 = mu * dim.p_minus_1().pow(self.l) + dim.p_minus_1().pow(self.k) - self.l;
        (r1, r2)
    }

    /// `k^2 + l^2/(2*-1)`, the limit level in units of `N^{-1} S^{N/2}`.
    pub fn level_factor(&self, dim: Dimension) -> f64 {
        self.k * self.k + self.l * self.l / dim.p_minus_1().value()
    }
}

fn check_mu(mu: f64) -> Result<()> {
    if !(mu >= 0.0) || !mu.is_finite() {
        return Err(Error::InvalidArgument(format!("mu must be finite and >= 0, got {mu}")));
    }
    Ok(())
}

/// `f_N(m) = m^(2*-1) - m^(2*-3) + mu`.
pub fn f_n(m: f64, mu: f64, dim: Dimension) -> Result<f64> {
    if !(m > 0.0) {
        return Err(Error::InvalidArgument(format!("f_N needs m > 0, got {m}")));
    }
    Ok(f_n_unchecked(m, mu, dim))
}

fn f_n_unchecked(m: f64, mu: f64, dim: Dimension) -> f64 {
    dim.p_minus_1().pow(m) - dim.p_minus_3().pow(m) + mu
}

fn f_n_derivative(m: f64, dim: Dimension) -> f64 {
    let e1 = dim.p_minus_1();
    let e3 = dim.p_minus_3();
    e1.value() * dim.p_minus_2().pow(m) - e3.value() * (e3 - Rational::integer(1)).pow(m)
}

/// Minimizer `((2*-3)/(2*-1))^(1/2)` of `f_N` on the positive half-line
/// (N = 4, 5 only).
pub fn f_n_minimizer(dim: Dimension) -> f64 {
    (dim.p_minus_3().value() / dim.p_minus_1().value()).sqrt()
}

/// All strictly positive zeros of `f_N`, ascending, with branch labels.
///
/// For N = 6 and `mu = 1` the zero sits at `m = 0` and is returned as a
/// double root so that the degenerate coupling `(0, 1)` stays reachable.
pub fn roots_f_n(mu: f64, dim: Dimension) -> Result<Vec<CouplingRoot>> {
    check_mu(mu)?;
    let n = dim.n();
    let mk = |m, b| CouplingRoot::from_m(m, b, dim);
    if mu == 0.0 {
        return Ok(vec![mk(1.0, Branch::Unique)]);
    }
    match n {
        4 | 5 => {
            let mu_n = mu_existence_threshold(dim);
            let m_hat = f_n_minimizer(dim);
            if (mu - mu_n).abs() < DOUBLE_ROOT_TOL {
                return Ok(vec![mk(m_hat, Branch::Double)]);
            }
            if mu > mu_n {
                return Ok(Vec::new());
            }
            let f = |m: f64| f_n_unchecked(m, mu, dim);
            let df = |m: f64| f_n_derivative(m, dim);
            let lower = bisect_newton(f, df, 0.0, m_hat);
            let mut top = 2.0 * m_hat;
            while f(top) <= 0.0 {
                top *= 2.0;
            }
            let upper = bisect_newton(f, df, m_hat, top);
            Ok(vec![mk(lower, Branch::Lower), mk(upper, Branch::Upper)])
        }
        6 => {
            if (mu - 1.0).abs() < DOUBLE_ROOT_TOL {
                Ok(vec![mk(0.0, Branch::Double)])
            } else if mu < 1.0 {
                Ok(vec![mk((1.0 - mu).sqrt(), Branch::Unique)])
            } else {
                Ok(Vec::new())
            }
        }
        _ => {
            // f_N increases from -inf (m -> 0+) and f_N(1) = mu > 0.
            let f = |m: f64| f_n_unchecked(m, mu, dim);
            let mut bottom = 0.5;
            while f(bottom) >= 0.0 {
                bottom *= 0.5;
            }
            let m = bisect_newton(f, |m| f_n_derivative(m, dim), bottom, 1.0);
            Ok(vec![mk(m, Branch::Unique)])
        }
    }
}

/// Positive zeros of the shifted polynomial `m^(2*-1) - sigma m^(2*-3) + mu`
/// (`sigma > 0`), obtained from `roots_f_n` through `m = sqrt(sigma) x`.
pub fn shifted_roots(sigma: f64, mu: f64, dim: Dimension) -> Result<Vec<f64>> {
    if !(sigma > 0.0) {
        return Err(Error::InvalidArgument(format!("sigma must be > 0, got {sigma}")));
    }
    let scaled_mu = mu / sigma.powf(0.5 * dim.p_minus_1().value());
    let s = sigma.sqrt();
    Ok(roots_f_n(scaled_mu, dim)?.into_iter().map(|r| s * r.m).collect())
}

/// Solutions `(k, l)` of the coupling system, one per zero of `f_N`.
pub fn coupling_solutions(mu: f64, dim: Dimension) -> Result<Vec<(f64, f64)>> {
    Ok(roots_f_n(mu, dim)?.into_iter().map(|r| (r.k, r.l)).collect())
}

/// `psi_N(m) = ((2*-1)m^2+1)^(2*/(2*-2)) / ((2*-1)(2* m^(2*-1) + mu)^(2/(2*-2)))`.
pub fn psi_n(m: f64, mu: f64, dim: Dimension) -> Result<f64> {
    check_mu(mu)?;
    if !(m >= 0.0) || (m == 0.0 && mu == 0.0) {
        return Err(Error::InvalidArgument(format!(
            "psi_N is undefined at m = {m}, mu = {mu}"
        )));
    }
    let pm1 = dim.p_minus_1().value();
    let ps = dim.two_star().value();
    let num = dim.half_n().pow(pm1 * m * m + 1.0);
    let den = pm1 * dim.level_exponent().pow(ps * dim.p_minus_1().pow(m) + mu);
    Ok(num / den)
}

/// `lim_{m -> 0+} psi_N(m) = 1/((2*-1) mu^(2/(2*-2)))`, infinite for `mu = 0`.
pub fn psi_boundary_value(mu: f64, dim: Dimension) -> f64 {
    if mu == 0.0 {
        return f64::INFINITY;
    }
    1.0 / (dim.p_minus_1().value() * dim.level_exponent().pow(mu))
}

/// Point `(k, l)` of the curve `k^2 + l^2/(2*-1) = (2* k^(2*-1) l + mu l^(2*))/(2*-1)`
/// with slope `k/l = m`.
pub fn curve_point(m: f64, mu: f64, dim: Dimension) -> (f64, f64) {
    let ratio = (dim.p_minus_1().value() * m * m + 1.0)
        / (dim.two_star().value() * dim.p_minus_1().pow(m) + mu);
    let l = dim.k_exponent().pow(ratio);
    (m * l, l)
}

/// Result of [`minimize_psi`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiMinimum {
    /// Interior critical point `(m, psi_N(m))` carrying the ground branch;
    /// absent when `f_N` has no positive zero.
    pub interior: Option<(f64, f64)>,
    /// `lim_{m -> 0+} psi_N(m)`.
    pub boundary_value: f64,
}

impl PsiMinimum {
    /// `inf_{m > 0} psi_N`.
    pub fn infimum(&self) -> f64 {
        match self.interior {
            Some((_, p)) => p.min(self.boundary_value),
            None => self.boundary_value,
        }
    }
}

/// Minimum of `psi_N` over `m > 0`.
///
/// `psi_N' ` has the sign of `f_N`, so the interior minimizer is the largest
/// zero of `f_N`.
pub fn minimize_psi(mu: f64, dim: Dimension) -> Result<PsiMinimum> {
    let roots = roots_f_n(mu, dim)?;
    let interior = match roots.last() {
        Some(r) if r.m > 0.0 => Some((r.m, psi_n(r.m, mu, dim)?)),
        _ => None,
    };
    Ok(PsiMinimum {
        interior,
        boundary_value: psi_boundary_value(mu, dim),
    })
}

/// `mu_N`: the largest `mu` for which `f_N` has a positive zero (N = 4, 5, 6),
/// `+inf` for N >= 7.
pub fn mu_existence_threshold(dim: Dimension) -> f64 {
    let n = dim.nf();
    match dim.n() {
        4 | 5 => {
            2.0 * (n - 2.0) / (n + 2.0)
                * ((6.0 - n) / (n + 2.0)).powf((6.0 - n) / (2.0 * (n - 2.0)))
        }
        6 => 1.0,
        _ => f64::INFINITY,
    }
}

fn psi_gap(mu: f64, dim: Dimension) -> f64 {
    let pm = minimize_psi(mu, dim).expect("mu inside (0, mu_N)");
    let (_, interior) = pm.interior.expect("interior minimum below mu_N");
    interior - pm.boundary_value
}

fn mu_star_five() -> f64 {
    static CACHE: OnceLock<f64> = OnceLock::new();
    *CACHE.get_or_init(|| {
        let dim = Dimension::new(5).unwrap();
        let mu_n = mu_existence_threshold(dim);
        let mut lo = 1e-6 * mu_n;
        let mut hi = mu_n * (1.0 - 1e-9);
        debug_assert!(psi_gap(lo, dim) < 0.0 && psi_gap(hi, dim) > 0.0);
        // Bisect well past the required 1e-10 so that the crossing equation
        // holds to that tolerance as well.
        while hi - lo > 1e-3 * MU_STAR_TOL {
            let mid = 0.5 * (lo + hi);
            if psi_gap(mid, dim) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    })
}

/// `mu*`: where the nontrivial limit level meets the semitrivial one.
pub fn mu_star(dim: Dimension) -> Option<f64> {
    match dim.n() {
        4 => Some(6f64.sqrt() / 9.0),
        5 => Some(mu_star_five()),
        6 => Some(1.0),
        _ => None,
    }
}

fn threshold_tol(dim: Dimension) -> f64 {
    if dim.n() == 5 {
        MU_STAR_TOL
    } else {
        DOUBLE_ROOT_TOL
    }
}

/// The regime thresholds of one dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdSet {
    pub mu_n: f64,
    pub mu_star: Option<f64>,
    /// Upper end of the existence interval `[0, mu*]` (`+inf` for N >= 7).
    pub interval_upper: f64,
}

pub fn thresholds(dim: Dimension) -> ThresholdSet {
    let mu_star = mu_star(dim);
    ThresholdSet {
        mu_n: mu_existence_threshold(dim),
        mu_star,
        interval_upper: mu_star.unwrap_or(f64::INFINITY),
    }
}

/// Whether `mu` lies in the existence interval `[0, mu*]` (`[0, inf)` for N >= 7).
pub fn in_existence_interval(mu: f64, dim: Dimension) -> bool {
    mu >= 0.0 && mu <= thresholds(dim).interval_upper + threshold_tol(dim)
}

/// Ground-state regime of the limit problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    NontrivialGround,
    Threshold,
    SemitrivialGround,
    NoNehari,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Regime::NontrivialGround => "NontrivialGround",
            Regime::Threshold => "Threshold",
            Regime::SemitrivialGround => "SemitrivialGround",
            Regime::NoNehari => "NoNehari",
        };
        f.write_str(s)
    }
}

/// Ground-state level of the limit problem for one `(mu, N)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelReport {
    pub mu: f64,
    pub dim: Dimension,
    /// Ground-state level `A`; `None` in the `NoNehari` regime.
    pub level: Option<f64>,
    pub semitrivial_level: Option<f64>,
    pub regime: Regime,
    pub minimizer_coupling: Option<CouplingRoot>,
}

impl LevelReport {
    /// Scalings `(k, l)` of the minimizer `(k U, l U)`; the semitrivial
    /// minimizer is `(0, mu^(-1/(2*-2)))`.
    pub fn minimizer_scalings(&self) -> Option<(f64, f64)> {
        match self.regime {
            Regime::NontrivialGround | Regime::Threshold => {
                self.minimizer_coupling.map(|c| (c.k, c.l))
            }
            Regime::SemitrivialGround => {
                Some((0.0, 1.0 / self.dim.k_exponent().pow(self.mu)))
            }
            Regime::NoNehari => None,
        }
    }
}

/// Semitrivial level `(1/(N(2*-1))) mu^(-2/(2*-2)) S^(N/2)`.
pub fn semitrivial_level(mu: f64, dim: Dimension, s: f64) -> Option<f64> {
    (mu > 0.0).then(|| psi_boundary_value(mu, dim) / dim.nf() * dim.half_n().pow(s))
}

/// Exact ground-state level and regime of the limit problem.
pub fn ground_level(mu: f64, dim: Dimension, s: f64) -> Result<LevelReport> {
    check_mu(mu)?;
    if !(s > 0.0) {
        return Err(Error::InvalidArgument(format!("S must be > 0, got {s}")));
    }
    let s_pow = dim.half_n().pow(s);
    let semi = semitrivial_level(mu, dim, s);
    let nontrivial = |c: &CouplingRoot| c.level_factor(dim) / dim.nf() * s_pow;
    let report = |level, regime, coupling| LevelReport {
        mu,
        dim,
        level,
        semitrivial_level: semi,
        regime,
        minimizer_coupling: coupling,
    };

    let roots = roots_f_n(mu, dim)?;
    let Some(&top) = roots.last() else {
        return Ok(report(None, Regime::NoNehari, None));
    };
    match mu_star(dim) {
        None => Ok(report(Some(nontrivial(&top)), Regime::NontrivialGround, Some(top))),
        Some(star) => {
            let tol = threshold_tol(dim);
            if mu < star - tol {
                Ok(report(Some(nontrivial(&top)), Regime::NontrivialGround, Some(top)))
            } else if mu <= star + tol {
                Ok(report(Some(nontrivial(&top)), Regime::Threshold, Some(top)))
            } else {
                Ok(report(semi, Regime::SemitrivialGround, None))
            }
        }
    }
}

/// Best Sobolev constant `S = pi N(N-2) (Gamma(N/2)/Gamma(N))^(2/N)`.
pub fn sobolev_constant(n: u32) -> Result<f64> {
    if n < 3 {
        return Err(Error::UnsupportedDimension(n, 3));
    }
    let nf = n as f64;
    let log_ratio = ln_gamma(0.5 * nf) - ln_gamma(nf);
    Ok(PI * nf * (nf - 2.0) * (2.0 / nf * log_ratio).exp())
}
