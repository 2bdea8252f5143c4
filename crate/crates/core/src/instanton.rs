//! Aubin-Talenti instantons and their limit energies.
//!
//! `U_ε(r) = c_N (ε/(ε² + r²))^((N-2)/2)` with `c_N = [N(N-2)]^((N-2)/4)`
//! solves `-ΔU = U^(2*-1)` on ℝ^N and has `∫|∇U|² = ∫U^(2*) = S^(N/2)`.

use crate::dimension::Dimension;
use crate::error::{Error, Result};
use crate::quadrature::QuadratureScheme;

/// Consecutive quadrature refinements must agree to this relative tolerance.
pub const REFINEMENT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct Instanton {
    pub epsilon: f64,
    pub dim: Dimension,
    /// Concentration point; radial routines only see `|x - center|`.
    pub center: Vec<f64>,
}

impl Instanton {
    pub fn new(dim: Dimension, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0) || !epsilon.is_finite() {
            return Err(Error::InvalidArgument(format!("epsilon must be > 0, got {epsilon}")));
        }
        Ok(Self {
            epsilon,
            dim,
            center: vec![0.0; dim.n() as usize],
        })
    }

    pub fn with_center(mut self, center: Vec<f64>) -> Result<Self> {
        if center.len() != self.dim.n() as usize {
            return Err(Error::InvalidArgument(format!(
                "center has {} coordinates, expected {}",
                center.len(),
                self.dim.n()
            )));
        }
        self.center = center;
        Ok(self)
    }

    /// `c_N = [N(N-2)]^((N-2)/4)`.
    pub fn prefactor(&self) -> f64 {
        let n = self.dim.nf();
        (n * (n - 2.0)).powf((n - 2.0) / 4.0)
    }

    fn exponent(&self) -> f64 {
        0.5 * (self.dim.nf() - 2.0)
    }

    /// `U(r)` at distance `r >= 0` from the center.
    pub fn value(&self, r: f64) -> f64 {
        let e = self.epsilon;
        self.prefactor() * (e / (e * e + r * r)).powf(self.exponent())
    }

    /// `U(x)` at a point of ℝ^N.
    pub fn value_at(&self, x: &[f64]) -> f64 {
        let r2: f64 = x.iter().zip(&self.center).map(|(a, b)| (a - b) * (a - b)).sum();
        self.value(r2.sqrt())
    }

    /// `U'(r) = -(N-2) c_N ε^((N-2)/2) r (ε² + r²)^(-N/2)`.
    pub fn derivative(&self, r: f64) -> f64 {
        let a = self.exponent();
        let e = self.epsilon;
        let q = e * e + r * r;
        -2.0 * a * self.prefactor() * e.powf(a) * r * q.powf(-a - 1.0)
    }

    pub fn second_derivative(&self, r: f64) -> f64 {
        let a = self.exponent();
        let e = self.epsilon;
        let q = e * e + r * r;
        -2.0 * a * self.prefactor() * e.powf(a) * (q.powf(-a - 1.0) - 2.0 * (a + 1.0) * r * r * q.powf(-a - 2.0))
    }

    /// `U'' + (N-1)/r U'`; at `r = 0` the limit `N U''(0)`.
    pub fn radial_laplacian(&self, r: f64) -> f64 {
        if r == 0.0 {
            return self.dim.nf() * self.second_derivative(0.0);
        }
        self.second_derivative(r) + (self.dim.nf() - 1.0) / r * self.derivative(r)
    }

    /// `∫_{ℝ^N} |∇U|²`.
    pub fn dirichlet_norm(&self, scheme: &QuadratureScheme) -> Result<f64> {
        let n = self.dim.n();
        converged(scheme, |q| {
            q.integrate_radial(n, self.epsilon, f64::INFINITY, |r| self.derivative(r).powi(2))
        })
    }

    /// `∫_{ℝ^N} U^(2*)`.
    pub fn critical_norm(&self, scheme: &QuadratureScheme) -> Result<f64> {
        let n = self.dim.n();
        let p = self.dim.two_star();
        converged(scheme, |q| {
            q.integrate_radial(n, self.epsilon, f64::INFINITY, |r| p.pow(self.value(r)))
        })
    }
}

/// Evaluate with `scheme` and its refinement; fail if they disagree by more
/// than [`REFINEMENT_TOL`]. Returns the refined value.
pub fn converged<F: Fn(&QuadratureScheme) -> f64>(scheme: &QuadratureScheme, f: F) -> Result<f64> {
    let coarse = f(scheme);
    let fine = f(&scheme.refined());
    let rel_diff = ((fine - coarse) / fine).abs();
    if !(rel_diff <= REFINEMENT_TOL) {
        return Err(Error::QuadratureNonconvergence { rel_diff });
    }
    Ok(fine)
}

/// `J_0(kU, lU)` from quadrature of `∫|∇U|²` and `∫U^(2*)`.
pub fn limit_energy(k: f64, l: f64, mu: f64, inst: &Instanton, scheme: &QuadratureScheme) -> Result<f64> {
    let dim = inst.dim;
    let grad = inst.dirichlet_norm(scheme)?;
    let crit = inst.critical_norm(scheme)?;
    let p = dim.two_star();
    let pv = p.value();
    let pm1 = dim.p_minus_1();
    let quadratic = 0.5 * (k * k + l * l / pm1.value()) * grad;
    let self_term = mu / (pv * pm1.value()) * p.pow(l) * crit;
    let mixed = pm1.pow(k) * l * crit / pm1.value();
    Ok(quadratic - self_term - mixed)
}

/// The two Nehari constraints `G_0(kU, lU)`.
pub fn nehari0_residual(
    k: f64,
    l: f64,
    mu: f64,
    inst: &Instanton,
    scheme: &QuadratureScheme,
) -> Result<(f64, f64)> {
    let dim = inst.dim;
    let grad = inst.dirichlet_norm(scheme)?;
    let crit = inst.critical_norm(scheme)?;
    let mixed = dim.p_minus_1().pow(k) * l * crit;
    Ok((
        k * k * grad - mixed,
        l * l * grad - mu * dim.two_star().pow(l) * crit - mixed,
    ))
}

/// C¹ radial cutoff: 1 on `[0, plateau]`, 0 on `[support, ∞)`, cubic
/// Hermite ramp in between.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cutoff {
    pub plateau: f64,
    pub support: f64,
}

impl Cutoff {
    pub fn new(plateau: f64, support: f64) -> Result<Self> {
        if !(plateau > 0.0 && plateau < support) {
            return Err(Error::InvalidArgument(format!(
                "cutoff needs 0 < plateau < support, got {plateau}, {support}"
            )));
        }
        Ok(Self { plateau, support })
    }

    pub fn value(&self, r: f64) -> f64 {
        if r <= self.plateau {
            1.0
        } else if r >= self.support {
            0.0
        } else {
            let s = (r - self.plateau) / (self.support - self.plateau);
            1.0 - s * s * (3.0 - 2.0 * s)
        }
    }

    pub fn derivative(&self, r: f64) -> f64 {
        if r <= self.plateau || r >= self.support {
            0.0
        } else {
            let w = self.support - self.plateau;
            let s = (r - self.plateau) / w;
            -6.0 * s * (1.0 - s) / w
        }
    }
}

/// `χ(r) U(r)`.
pub fn cutoff_profile(inst: &Instanton, plateau: f64, support: f64, r: f64) -> Result<f64> {
    Ok(Cutoff::new(plateau, support)?.value(r) * inst.value(r))
}

/// `χ U_ε`, compactly supported in the ball of radius `cutoff.support`.
#[derive(Debug, Clone, PartialEq)]
pub struct CutoffInstanton {
    pub inst: Instanton,
    pub cutoff: Cutoff,
}

impl CutoffInstanton {
    pub fn value(&self, r: f64) -> f64 {
        self.cutoff.value(r) * self.inst.value(r)
    }

    pub fn derivative(&self, r: f64) -> f64 {
        self.cutoff.derivative(r) * self.inst.value(r) + self.cutoff.value(r) * self.inst.derivative(r)
    }

    fn integrate<G: Fn(f64) -> f64>(&self, scheme: &QuadratureScheme, g: G) -> f64 {
        let n = self.inst.dim.n();
        let core = scheme.integrate_radial(n, self.inst.epsilon, self.cutoff.plateau, &g);
        let ramp = scheme.integrate_shell(n, self.cutoff.plateau, self.cutoff.support, &g);
        core + ramp
    }

    /// `‖χU_ε‖₂²`.
    pub fn l2_norm_sq(&self, scheme: &QuadratureScheme) -> f64 {
        self.integrate(scheme, |r| self.value(r).powi(2))
    }

    pub fn dirichlet_norm(&self, scheme: &QuadratureScheme) -> f64 {
        self.integrate(scheme, |r| self.derivative(r).powi(2))
    }

    pub fn critical_norm(&self, scheme: &QuadratureScheme) -> f64 {
        let p = self.inst.dim.two_star();
        self.integrate(scheme, |r| p.pow(self.value(r)))
    }
}

/// Least-squares fit of `log ‖χU_ε‖₂²` against `log ε`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    /// Slope of the plain power-law model `log y = a + b log ε`.
    pub exponent: f64,
    /// RMS residual of the plain model.
    pub residual: f64,
    /// Slope of the model with the `|log ε|` factor,
    /// `log y = a + b log ε + c log|log ε|`.
    pub log_exponent: f64,
    pub log_coefficient: f64,
    pub log_residual: f64,
    /// The logarithmic model reduces the residual by at least 10x.
    pub log_factor_detected: bool,
    pub samples: Vec<(f64, f64)>,
}

/// Solve the normal equations of a small dense least-squares problem.
fn least_squares(rows: &[Vec<f64>], rhs: &[f64]) -> Option<(Vec<f64>, f64)> {
    let p = rows[0].len();
    let mut a = vec![vec![0.0; p + 1]; p];
    for (row, &y) in rows.iter().zip(rhs) {
        for i in 0..p {
            for j in 0..p {
                a[i][j] += row[i] * row[j];
            }
            a[i][p] += row[i] * y;
        }
    }
    // Gaussian elimination with partial pivoting
    for c in 0..p {
        let piv = (c..p).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))?;
        if a[piv][c].abs() < 1e-300 {
            return None;
        }
        a.swap(c, piv);
        for r in 0..p {
            if r != c {
                let f = a[r][c] / a[c][c];
                for k in c..=p {
                    a[r][k] -= f * a[c][k];
                }
            }
        }
    }
    let coef: Vec<f64> = (0..p).map(|i| a[i][p] / a[i][i]).collect();
    let sse: f64 = rows
        .iter()
        .zip(rhs)
        .map(|(row, &y)| {
            let fit: f64 = row.iter().zip(&coef).map(|(x, c)| x * c).sum();
            (y - fit).powi(2)
        })
        .sum();
    Some((coef, (sse / rhs.len() as f64).sqrt()))
}

/// Fit the small-ε behaviour of `‖χU_ε‖₂²`.
pub fn cutoff_l2_scaling(
    dim: Dimension,
    eps_list: &[f64],
    plateau: f64,
    support: f64,
    scheme: &QuadratureScheme,
) -> Result<ScalingFit> {
    if eps_list.len() < 4 {
        return Err(Error::DegenerateFit(format!(
            "need at least 4 values of epsilon, got {}",
            eps_list.len()
        )));
    }
    if eps_list.iter().any(|&e| !(e > 0.0 && e < 1.0)) {
        return Err(Error::InvalidArgument("epsilon values must lie in (0, 1)".into()));
    }
    let cutoff = Cutoff::new(plateau, support)?;
    let samples: Vec<(f64, f64)> = eps_list
        .iter()
        .map(|&e| {
            let ci = CutoffInstanton {
                inst: Instanton::new(dim, e)?,
                cutoff,
            };
            Ok((e, ci.l2_norm_sq(scheme)))
        })
        .collect::<Result<_>>()?;

    let y: Vec<f64> = samples.iter().map(|&(_, v)| v.ln()).collect();
    let plain: Vec<Vec<f64>> = samples.iter().map(|&(e, _)| vec![1.0, e.ln()]).collect();
    let with_log: Vec<Vec<f64>> = samples
        .iter()
        .map(|&(e, _)| vec![1.0, e.ln(), e.ln().abs().ln()])
        .collect();
    let degenerate = || Error::DegenerateFit("singular normal equations".into());
    let (c1, r1) = least_squares(&plain, &y).ok_or_else(degenerate)?;
    let (c2, r2) = least_squares(&with_log, &y).ok_or_else(degenerate)?;
    Ok(ScalingFit {
        exponent: c1[1],
        residual: r1,
        log_exponent: c2[1],
        log_coefficient: c2[2],
        log_residual: r2,
        log_factor_detected: r2 * 10.0 <= r1,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(n: u32) -> Dimension {
        Dimension::new(n).unwrap()
    }

    #[test]
    fn value_at_origin_n4() {
        let u = Instanton::new(d(4), 1.0).unwrap();
        assert!((u.value(0.0) - 2.0 * 2f64.sqrt()).abs() < 1e-15);
        assert!(u.value(1e8) < 1e-15);
    }

    #[test]
    fn scale_covariance() {
        for n in 4..9 {
            let u1 = Instanton::new(d(n), 1.0).unwrap();
            let ue = Instanton::new(d(n), 0.37).unwrap();
            let a = 0.5 * (n as f64 - 2.0);
            for r in [0.0, 0.1, 1.0, 5.0] {
                let expect = 0.37f64.powf(-a) * u1.value(r / 0.37);
                assert!((ue.value(r) / expect - 1.0).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let u = Instanton::new(d(5), 0.7).unwrap();
        let h = 1e-5;
        for r in [0.2, 0.9, 3.0] {
            let fd1 = (u.value(r + h) - u.value(r - h)) / (2.0 * h);
            assert!((u.derivative(r) - fd1).abs() < 1e-8 * u.value(r).max(1.0));
            let fd2 = (u.derivative(r + h) - u.derivative(r - h)) / (2.0 * h);
            assert!((u.second_derivative(r) - fd2).abs() < 1e-7);
        }
    }

    #[test]
    fn center_enters_through_distance() {
        let u = Instanton::new(d(4), 1.0)
            .unwrap()
            .with_center(vec![1.0, 0.0, 0.0, 0.0])
            .unwrap();
        assert!((u.value_at(&[1.0, 3.0, 0.0, 4.0]) - u.value(5.0)).abs() < 1e-15);
        assert!(Instanton::new(d(4), 1.0).unwrap().with_center(vec![0.0]).is_err());
        assert!(Instanton::new(d(4), 0.0).is_err());
    }

    #[test]
    fn cutoff_is_c1() {
        let c = Cutoff::new(0.5, 1.0).unwrap();
        let h = 1e-9;
        for x in [0.5, 1.0] {
            assert!((c.value(x - h) - c.value(x + h)).abs() < 1e-10);
            assert!((c.derivative(x - h) - c.derivative(x + h)).abs() < 1e-7);
        }
        assert!(Cutoff::new(1.0, 0.5).is_err());
        let u = Instanton::new(d(4), 0.1).unwrap();
        assert_eq!(cutoff_profile(&u, 0.5, 1.0, 0.3).unwrap(), u.value(0.3));
        assert_eq!(cutoff_profile(&u, 0.5, 1.0, 1.2).unwrap(), 0.0);
    }

    #[test]
    fn scaling_fit_needs_four_points() {
        let q = QuadratureScheme::default();
        assert!(matches!(
            cutoff_l2_scaling(d(5), &[0.1, 0.05, 0.02], 0.5, 1.0, &q),
            Err(Error::DegenerateFit(_))
        ));
    }
}
