use crate::dimension::Dimension;
use crate::error::{Error, Result};
use crate::quadrature::sphere_area;

/// Smallest admissible number of interior nodes.
pub const MIN_NODES: usize = 64;

/// Uniform radial grid on the ball `B_R ⊂ ℝ^N`.
///
/// Unknowns live on the interior nodes `r_i = i h`, `i = 1..=M`, with
/// `h = R/(M+1)`. The boundary value at `r = R` is zero; at the origin the
/// flux through `r = h/2` vanishes (symmetric ghost value).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialBall {
    pub dim: Dimension,
    pub radius: f64,
    pub nodes: usize,
}

impl RadialBall {
    pub fn new(dim: Dimension, radius: f64, nodes: usize) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidArgument(format!("ball radius must be > 0, got {radius}")));
        }
        if nodes < MIN_NODES {
            return Err(Error::InvalidArgument(format!(
                "need at least {MIN_NODES} interior nodes, got {nodes}"
            )));
        }
        Ok(Self { dim, radius, nodes })
    }

    pub fn h(&self) -> f64 {
        self.radius / (self.nodes + 1) as f64
    }

    /// Radius of the node stored at array index `j` (node `j + 1`).
    pub fn r(&self, j: usize) -> f64 {
        (j + 1) as f64 * self.h()
    }

    pub fn radii(&self) -> Vec<f64> {
        (0..self.nodes).map(|j| self.r(j)).collect()
    }

    /// Trapezoid weights `ω_{N-1} r_i^(N-1) h`.
    pub fn weights(&self) -> Vec<f64> {
        let omega = sphere_area(self.dim.n());
        let h = self.h();
        let p = self.dim.n() as i32 - 1;
        (0..self.nodes).map(|j| omega * self.r(j).powi(p) * h).collect()
    }

    /// Edge conductances `ω_{N-1} r_{i+1/2}^(N-1) / h` between array index
    /// `j` and `j + 1`; the last one couples to the boundary zero.
    pub fn conductances(&self) -> Vec<f64> {
        let omega = sphere_area(self.dim.n());
        let h = self.h();
        let p = self.dim.n() as i32 - 1;
        (0..self.nodes)
            .map(|j| omega * ((j as f64 + 1.5) * h).powi(p) / h)
            .collect()
    }

    pub fn zeros(&self) -> Vec<f64> {
        vec![0.0; self.nodes]
    }
}

/// Precomputed weights and stencil of a grid.
#[derive(Debug, Clone)]
pub(crate) struct Stencil {
    pub w: Vec<f64>,
    pub c: Vec<f64>,
}

impl Stencil {
    pub fn new(grid: &RadialBall) -> Self {
        Self {
            w: grid.weights(),
            c: grid.conductances(),
        }
    }

    /// `Σ_edges c (u_{j+1} - u_j)²`, the discrete `∫|∇u|²`.
    pub fn dirichlet(&self, u: &[f64]) -> f64 {
        let m = u.len();
        (0..m)
            .map(|j| {
                let next = if j + 1 < m { u[j + 1] } else { 0.0 };
                self.c[j] * (next - u[j]).powi(2)
            })
            .sum()
    }

    /// `K u`, the stiffness matrix applied to `u` (so `-Δu ≈ K u / w`).
    pub fn stiffness(&self, u: &[f64]) -> Vec<f64> {
        let m = u.len();
        (0..m)
            .map(|j| {
                let right = if j + 1 < m { u[j + 1] } else { 0.0 };
                let mut s = self.c[j] * (u[j] - right);
                if j > 0 {
                    s += self.c[j - 1] * (u[j] - u[j - 1]);
                }
                s
            })
            .collect()
    }

    /// Nodal `-Δu`.
    pub fn neg_laplacian(&self, u: &[f64]) -> Vec<f64> {
        self.stiffness(u).iter().zip(&self.w).map(|(k, w)| k / w).collect()
    }

    pub fn integral(&self, f: impl Iterator<Item = f64>) -> f64 {
        self.w.iter().zip(f).map(|(w, x)| w * x).sum()
    }

    /// Solve `(a K + b W) x = rhs` by the Thomas algorithm. Requires the
    /// matrix to be positive definite.
    pub fn solve_shifted(&self, a: f64, b: f64, rhs: &[f64]) -> Vec<f64> {
        let m = rhs.len();
        let diag = |j: usize| a * (self.c[j] + if j > 0 { self.c[j - 1] } else { 0.0 }) + b * self.w[j];
        // off-diagonal between j and j+1 is -a c_j
        let mut cp = vec![0.0; m];
        let mut dp = vec![0.0; m];
        let mut denom = diag(0);
        cp[0] = -a * self.c[0] / denom;
        dp[0] = rhs[0] / denom;
        for j in 1..m {
            let sub = -a * self.c[j - 1];
            denom = diag(j) - sub * cp[j - 1];
            cp[j] = if j + 1 < m { -a * self.c[j] / denom } else { 0.0 };
            dp[j] = (rhs[j] - sub * dp[j - 1]) / denom;
        }
        let mut x = dp;
        for j in (0..m - 1).rev() {
            x[j] -= cp[j] * x[j + 1];
        }
        x
    }
}

/// A pair of radial profiles on a common grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialPair {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub grid: RadialBall,
}

impl RadialPair {
    pub fn new(grid: RadialBall, u: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if u.len() != grid.nodes || v.len() != grid.nodes {
            return Err(Error::InvalidArgument(format!(
                "profiles have lengths {} and {}, grid has {} nodes",
                u.len(),
                v.len(),
                grid.nodes
            )));
        }
        if u.iter().chain(&v).any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("profiles contain non-finite values".into()));
        }
        Ok(Self { u, v, grid })
    }

    pub fn zero(grid: RadialBall) -> Self {
        Self {
            u: grid.zeros(),
            v: grid.zeros(),
            grid,
        }
    }

    /// Sample radial functions at the interior nodes.
    pub fn from_fn(grid: RadialBall, u: impl Fn(f64) -> f64, v: impl Fn(f64) -> f64) -> Self {
        let r = grid.radii();
        Self {
            u: r.iter().map(|&x| u(x)).collect(),
            v: r.iter().map(|&x| v(x)).collect(),
            grid,
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        self.scaled2(s, s)
    }

    pub fn scaled2(&self, su: f64, sv: f64) -> Self {
        Self {
            u: self.u.iter().map(|x| su * x).collect(),
            v: self.v.iter().map(|x| sv * x).collect(),
            grid: self.grid,
        }
    }

    /// `self + t · dir`.
    pub fn axpy(&self, t: f64, dir: &RadialPair) -> Self {
        Self {
            u: self.u.iter().zip(&dir.u).map(|(a, b)| a + t * b).collect(),
            v: self.v.iter().zip(&dir.v).map(|(a, b)| a + t * b).collect(),
            grid: self.grid,
        }
    }

    /// Componentwise positive part.
    pub fn positive_part(&self) -> Self {
        Self {
            u: self.u.iter().map(|x| x.max(0.0)).collect(),
            v: self.v.iter().map(|x| x.max(0.0)).collect(),
            grid: self.grid,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.u.iter().chain(&self.v).fold(0.0f64, |m, x| m.max(x.abs()))
    }

    /// Weighted inner product `Σ w (u₁u₂ + v₁v₂)`.
    pub fn dot(&self, other: &RadialPair) -> f64 {
        let w = self.grid.weights();
        (0..w.len())
            .map(|j| w[j] * (self.u[j] * other.u[j] + self.v[j] * other.v[j]))
            .sum()
    }
}

/// Principal eigenpair of the discrete radial Dirichlet Laplacian.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpair {
    pub value: f64,
    /// Positive, normalized to unit weighted `L²` norm.
    pub eigfun: Vec<f64>,
    pub iterations: usize,
}

pub const LAMBDA1_TOL: f64 = 1e-12;
pub const LAMBDA1_MAX_ITER: usize = 10_000;

/// `λ₁` by inverse power iteration on `K x = λ W x`.
pub fn lambda1(grid: &RadialBall) -> Result<Eigenpair> {
    let st = Stencil::new(grid);
    let w_norm = |x: &[f64]| st.integral(x.iter().map(|a| a * a)).sqrt();
    // start from the continuum-like profile 1 - (r/R)^2
    let mut x: Vec<f64> = grid
        .radii()
        .iter()
        .map(|r| 1.0 - (r / grid.radius).powi(2))
        .collect();
    let n0 = w_norm(&x);
    x.iter_mut().for_each(|a| *a /= n0);
    let mut lam = f64::INFINITY;
    for it in 1..=LAMBDA1_MAX_ITER {
        let rhs: Vec<f64> = x.iter().zip(&st.w).map(|(a, w)| a * w).collect();
        let mut y = st.solve_shifted(1.0, 0.0, &rhs);
        let ny = w_norm(&y);
        y.iter_mut().for_each(|a| *a /= ny);
        let ky = st.stiffness(&y);
        let next: f64 = ky.iter().zip(&y).map(|(a, b)| a * b).sum();
        x = y;
        if ((next - lam) / next).abs() < LAMBDA1_TOL {
            if x.iter().sum::<f64>() < 0.0 {
                x.iter_mut().for_each(|a| *a = -*a);
            }
            return Ok(Eigenpair {
                value: next,
                eigfun: x,
                iterations: it,
            });
        }
        lam = next;
    }
    Err(Error::Stagnation(LAMBDA1_MAX_ITER))
}
