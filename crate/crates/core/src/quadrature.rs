//! Radial quadrature for integrals over ℝ^N and over balls.
//!
//! A radial integral `∫ g(|x|) dx` is `ω_{N-1} ∫_0^R g(r) r^(N-1) dr`. The
//! half-line (or `[0, R]`) is mapped to a bounded angle by `r = s tan θ`
//! with `s` the concentration scale of the integrand, which turns the
//! algebraic tails of instanton-type integrands into smooth endpoint
//! behaviour.

use std::f64::consts::{FRAC_PI_2, PI};
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use statrs::function::gamma::ln_gamma;

/// Surface measure `ω_{N-1} = 2 π^(N/2) / Γ(N/2)` of the unit sphere in ℝ^N.
pub fn sphere_area(n: u32) -> f64 {
    let h = 0.5 * n as f64;
    2.0 * (h * PI.ln() - ln_gamma(h)).exp()
}

/// Sum in a fixed binary-tree order.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    match values.len() {
        0 => 0.0,
        1 => values[0],
        n if n <= 8 => values.iter().sum(),
        n => {
            let (a, b) = values.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    CompositeGauss,
    TanhSinh,
}

const GAUSS_PANEL_NODES: usize = 32;

/// Quadrature rule on a bounded interval with a fixed node budget.
#[derive(Debug, Clone)]
pub struct QuadratureScheme {
    rule: Rule,
    node_count: usize,
    /// Reference nodes/weights on `[-1, 1]` (Gauss) or `[0, 1]` (tanh-sinh).
    reference: Vec<(f64, f64)>,
    panels: usize,
}

impl Default for QuadratureScheme {
    fn default() -> Self {
        Self::composite_gauss(2048)
    }
}

impl QuadratureScheme {
    /// Composite Gauss-Legendre with 32-point panels; `node_count` is rounded
    /// up to a multiple of 32.
    pub fn composite_gauss(node_count: usize) -> Self {
        let panels = node_count.div_ceil(GAUSS_PANEL_NODES).max(1);
        let rule = GaussLegendre::new(NonZeroUsize::new(GAUSS_PANEL_NODES).unwrap());
        Self {
            rule: Rule::CompositeGauss,
            node_count: panels * GAUSS_PANEL_NODES,
            reference: rule.as_node_weight_pairs().to_vec(),
            panels,
        }
    }

    /// Tanh-sinh (double exponential) rule with `node_count` nodes on `[0, 1]`.
    pub fn tanh_sinh(node_count: usize) -> Self {
        let n = node_count.max(3) | 1;
        let half = (n / 2) as f64;
        let t_max = 3.2;
        let step = t_max / half;
        let reference = (0..n)
            .filter_map(|i| {
                let t = (i as f64 - half) * step;
                let u = FRAC_PI_2 * t.sinh();
                let x = 0.5 * (1.0 + u.tanh());
                let w = 0.5 * step * FRAC_PI_2 * t.cosh() / (u.cosh() * u.cosh());
                // nodes that round onto an endpoint carry no usable weight
                (x > 0.0 && x < 1.0).then_some((x, w))
            })
            .collect();
        Self {
            rule: Rule::TanhSinh,
            node_count: n,
            reference,
            panels: 1,
        }
    }

    pub fn rule(&self) -> Rule {
        self.rule
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    /// Same rule with twice the nodes.
    pub fn refined(&self) -> Self {
        match self.rule {
            Rule::CompositeGauss => Self::composite_gauss(2 * self.node_count),
            Rule::TanhSinh => Self::tanh_sinh(2 * self.node_count),
        }
    }

    /// `∫_a^b f`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        if b <= a {
            return 0.0;
        }
        match self.rule {
            Rule::CompositeGauss => {
                let width = (b - a) / self.panels as f64;
                let sums: Vec<f64> = (0..self.panels)
                    .map(|p| {
                        let lo = a + p as f64 * width;
                        let mid = lo + 0.5 * width;
                        let s: f64 = self
                            .reference
                            .iter()
                            .map(|&(x, w)| w * f(mid + 0.5 * width * x))
                            .sum();
                        0.5 * width * s
                    })
                    .collect();
                pairwise_sum(&sums)
            }
            Rule::TanhSinh => {
                let terms: Vec<f64> = self
                    .reference
                    .iter()
                    .map(|&(x, w)| w * f(a + (b - a) * x))
                    .collect();
                (b - a) * pairwise_sum(&terms)
            }
        }
    }

    /// `ω_{N-1} ∫_0^upper g(r) r^(N-1) dr` through `r = scale · tan θ`.
    /// `upper` may be `f64::INFINITY`.
    pub fn integrate_radial<G: Fn(f64) -> f64>(&self, n: u32, scale: f64, upper: f64, g: G) -> f64 {
        let theta_max = if upper.is_finite() {
            (upper / scale).atan()
        } else {
            FRAC_PI_2
        };
        let power = n as i32 - 1;
        let integral = self.integrate(0.0, theta_max, |theta| {
            let (s, c) = theta.sin_cos();
            let r = scale * s / c;
            g(r) * r.powi(power) * scale / (c * c)
        });
        sphere_area(n) * integral
    }

    /// `ω_{N-1} ∫_a^b g(r) r^(N-1) dr` on a bounded radial shell, no mapping.
    pub fn integrate_shell<G: Fn(f64) -> f64>(&self, n: u32, a: f64, b: f64, g: G) -> f64 {
        let power = n as i32 - 1;
        sphere_area(n) * self.integrate(a, b, |r| g(r) * r.powi(power))
    }
}
